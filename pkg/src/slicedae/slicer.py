"""Random projections, sliced aggregation of the 1-D kernels, composite cost.

A sliced distance projects a batch of D-dimensional points onto k random unit
directions, applies a one-dimensional kernel to each sorted projection, and
averages.  The gradient flows back through the average, the sort permutation
and the projection, landing on the batch entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels


class DistanceKind(Enum):
    """The five projection kernels selectable for the penalty."""

    SW = "sw"
    SCFW = "scfw"
    SCW = "scw"
    SCVM = "scvm"
    SKS = "sks"

    @classmethod
    def parse(cls, text: str) -> "DistanceKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown distance kind {text!r}; expected one of: {valid}") from None


@dataclass(frozen=True)
class CostMode:
    """How the reconstruction error and the sliced penalty combine.

    kind "lambda": cost = mse + lam * sliced.  kind "log": cost =
    mse + log(max(sliced, floor)).  lam = 0 turns the penalty off, which the
    training loop uses for plain-autoencoder baselines.
    """

    kind: str
    lam: float = 1.0
    floor: float = 1e-12

    def __post_init__(self):
        if self.kind not in ("lambda", "log"):
            raise ValueError(f"CostMode: kind must be 'lambda' or 'log', got {self.kind!r}")
        if self.kind == "lambda" and self.lam < 0.0:
            raise ValueError("CostMode: lam must be >= 0")
        if self.kind == "log" and self.floor <= 0.0:
            raise ValueError("CostMode: floor must be positive")

    @classmethod
    def lambda_weighted(cls, lam: float) -> "CostMode":
        return cls(kind="lambda", lam=lam)

    @classmethod
    def log_composite(cls, floor: float = 1e-12) -> "CostMode":
        return cls(kind="log", floor=floor)


def composite_cost(mse: float, sliced: float, mode: CostMode) -> float:
    """Combine reconstruction error and penalty per the selected mode."""
    if mse < 0.0:
        raise ValueError("composite_cost: mse must be >= 0")
    if sliced < 0.0:
        raise ValueError("composite_cost: sliced must be >= 0")
    if mode.kind == "lambda":
        return mse + mode.lam * sliced
    return mse + math.log(max(sliced, mode.floor))


def penalty_derivative(sliced: float, mode: CostMode) -> float:
    """d(composite_cost)/d(sliced) at the given penalty value.

    In log mode the derivative is 1/max(sliced, floor); below the floor the
    cost is constant in principle, but the clamped slope keeps a usable
    downhill signal, so the clamp applies to the denominator only.
    """
    if mode.kind == "lambda":
        return mode.lam
    return 1.0 / max(sliced, mode.floor)


def sample_directions(k: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw k independent unit vectors in R^dim, uniform on the sphere.

    Each row is a normalized standard-normal draw.  A zero draw cannot be
    normalized and is redrawn; this has probability zero but the loop keeps
    the function total.
    """
    if k < 1 or dim < 1:
        raise ValueError("sample_directions: k and dim must be >= 1")
    out = np.empty((k, dim))
    for i in range(k):
        v = rng.standard_normal(dim)
        norm = np.linalg.norm(v)
        while norm == 0.0:
            v = rng.standard_normal(dim)
            norm = np.linalg.norm(v)
        out[i] = v / norm
    return out


def _check_directions(dirs: np.ndarray, dim: int) -> np.ndarray:
    dirs = np.asarray(dirs, dtype=float)
    if dirs.ndim != 2:
        raise ValueError("directions must be a k x D matrix")
    if dirs.shape[1] != dim:
        raise ValueError(
            f"direction dimension {dirs.shape[1]} does not match batch dimension {dim}"
        )
    norms = np.linalg.norm(dirs, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValueError("directions must be unit vectors (norm within 1e-9 of 1)")
    return dirs


def _check_batch(batch) -> np.ndarray:
    batch = np.asarray(batch, dtype=float)
    if batch.ndim != 2 or batch.shape[0] < 1:
        raise ValueError("batch must be a nonempty n x D matrix")
    if not np.all(np.isfinite(batch)):
        raise ValueError("batch entries must be finite")
    return batch


def sliced_distance(
    batch,
    dirs,
    kind: DistanceKind,
    rng: np.random.Generator | None = None,
    share_sw_sample: bool = False,
):
    """Average a 1-D kernel over the projections of a batch.

    Returns ``(distance, gradient)`` where the gradient is an n x D matrix of
    the distance's derivatives with respect to the batch entries.  For the
    pairwise kind (SW) the normal comparison sample is drawn from ``rng``,
    fresh per projection unless ``share_sw_sample`` fixes one draw for all k
    projections; the other kinds need no randomness here.
    """
    batch = _check_batch(batch)
    n, dim = batch.shape
    dirs = _check_directions(dirs, dim)
    k = dirs.shape[0]

    if kind == DistanceKind.SW:
        if rng is None:
            raise ValueError("sliced_distance: SW needs an rng for its comparison draws")
        shared = np.sort(rng.standard_normal(n)) if share_sw_sample else None
    else:
        shared = None

    total = 0.0
    grad = np.zeros_like(batch)
    for j in range(k):
        v = dirs[j]
        proj = batch @ v
        y, perm = kernels.sort_with_permutation(proj)
        if kind == DistanceKind.SW:
            z = shared if shared is not None else np.sort(rng.standard_normal(n))
            res = kernels.sw_pairwise(y, z)
        elif kind == DistanceKind.SCFW:
            res = kernels.w2_closed(y)
        elif kind == DistanceKind.SCW:
            res = kernels.cw_closed(y)
        elif kind == DistanceKind.SCVM:
            res = kernels.cvm_closed(y)
        elif kind == DistanceKind.SKS:
            res = kernels.ks_closed(y)
        else:
            raise ValueError(f"unhandled distance kind {kind!r}")
        total += res.distance
        dproj = np.empty(n)
        dproj[perm] = res.gradient
        grad += np.outer(dproj, v)
    return total / k, grad / k


def sliced_pairwise_sw(batch_a, batch_b, dirs) -> float:
    """Sliced pairwise squared Wasserstein distance between two point sets.

    Both batches are projected onto the same directions and compared sorted
    against sorted; the sets must have equal size and dimension.
    """
    a = _check_batch(batch_a)
    b = _check_batch(batch_b)
    if a.shape != b.shape:
        raise ValueError(
            f"sliced_pairwise_sw: batches must match in shape, got {a.shape} and {b.shape}"
        )
    dirs = _check_directions(dirs, a.shape[1])
    total = 0.0
    for v in dirs:
        ya = np.sort(a @ v)
        zb = np.sort(b @ v)
        total += kernels.sw_pairwise(ya, zb).distance
    return total / dirs.shape[0]
