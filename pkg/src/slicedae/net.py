"""Fully connected autoencoder with hand-written reverse-mode gradients.

The architecture is fixed enough that generic autodiff would be overkill: a
stack of linear layers with rectifier activations on hidden layers and
identity outputs, an encoder half and a decoder half.  Parameters live in a
flat list of weight/bias arrays; the optimizer updates them in place.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .slicer import CostMode, DistanceKind, composite_cost, penalty_derivative, sliced_distance

_CHECKPOINT_FORMAT = "slicedae-checkpoint"
_CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class MlpSpec:
    """Layer widths of the two halves.

    ``encoder_widths`` runs data dimension -> ... -> latent dimension and
    ``decoder_widths`` the reverse; the two must agree at both ends.
    """

    encoder_widths: tuple
    decoder_widths: tuple

    def __post_init__(self):
        for name, widths in (("encoder", self.encoder_widths), ("decoder", self.decoder_widths)):
            if len(widths) < 2:
                raise ValueError(f"MlpSpec: {name} needs at least input and output widths")
            if any(int(w) != w or w < 1 for w in widths):
                raise ValueError(f"MlpSpec: {name} widths must be positive integers")
        if self.encoder_widths[-1] != self.decoder_widths[0]:
            raise ValueError("MlpSpec: latent widths of encoder and decoder differ")
        if self.encoder_widths[0] != self.decoder_widths[-1]:
            raise ValueError("MlpSpec: data widths of encoder and decoder differ")

    @property
    def data_dim(self) -> int:
        return int(self.encoder_widths[0])

    @property
    def latent_dim(self) -> int:
        return int(self.encoder_widths[-1])


@dataclass(frozen=True)
class OptimizerSpec:
    algo: str = "adam"
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if self.algo not in ("adam", "sgd"):
            raise ValueError(f"OptimizerSpec: algo must be 'adam' or 'sgd', got {self.algo!r}")
        if self.lr <= 0.0 or self.eps <= 0.0:
            raise ValueError("OptimizerSpec: lr and eps must be positive")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("OptimizerSpec: betas must lie in [0, 1)")


@dataclass
class TrainState:
    """Everything one training loop mutates: parameters, moments, step, rng.

    ``params`` alternates weight and bias per layer, encoder layers first.
    """

    spec: MlpSpec
    opt: OptimizerSpec
    params: list = field(default_factory=list)
    adam_m: list = field(default_factory=list)
    adam_v: list = field(default_factory=list)
    step: int = 0
    rng: np.random.Generator = None

    @property
    def n_encoder_layers(self) -> int:
        return len(self.spec.encoder_widths) - 1


def _layer_pairs(widths):
    return list(zip(widths[:-1], widths[1:]))


def init_state(spec: MlpSpec, opt: OptimizerSpec, rng: np.random.Generator) -> TrainState:
    """Seeded He-style uniform initialization: W ~ U(+-sqrt(6/fan_in)), b = 0."""
    params = []
    for fan_in, fan_out in _layer_pairs(spec.encoder_widths) + _layer_pairs(spec.decoder_widths):
        limit = np.sqrt(6.0 / fan_in)
        params.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        params.append(np.zeros(fan_out))
    zeros = [np.zeros_like(p) for p in params]
    return TrainState(
        spec=spec,
        opt=opt,
        params=params,
        adam_m=zeros,
        adam_v=[np.zeros_like(p) for p in params],
        step=0,
        rng=rng,
    )


def _forward_half(params, offset, n_layers, x, caches=None):
    a = x
    for l in range(n_layers):
        w = params[offset + 2 * l]
        b = params[offset + 2 * l + 1]
        pre = a @ w + b
        if l < n_layers - 1:
            out = np.maximum(pre, 0.0)
        else:
            out = pre
        if caches is not None:
            caches.append((a, pre))
        a = out
    return a


def _backward_half(params, offset, n_layers, caches, g_out, grads):
    g = g_out
    for l in range(n_layers - 1, -1, -1):
        a_in, pre = caches[l]
        if l < n_layers - 1:
            g = g * (pre > 0.0)
        w = params[offset + 2 * l]
        grads[offset + 2 * l] = a_in.T @ g
        grads[offset + 2 * l + 1] = g.sum(axis=0)
        g = g @ w.T
    return g


def _check_input(x, dim, name):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != dim:
        raise ValueError(f"{name}: expected shape (n, {dim}), got {np.shape(x)}")
    return x


def encode(state: TrainState, x) -> np.ndarray:
    x = _check_input(x, state.spec.data_dim, "encode")
    return _forward_half(state.params, 0, state.n_encoder_layers, x)


def decode(state: TrainState, z) -> np.ndarray:
    z = _check_input(z, state.spec.latent_dim, "decode")
    offset = 2 * state.n_encoder_layers
    n_layers = len(state.spec.decoder_widths) - 1
    return _forward_half(state.params, offset, n_layers, z)


def mse(x, xhat) -> float:
    """Mean over points of the squared Euclidean reconstruction error.

    The per-point squared norm is summed over features, not averaged, so the
    value scales with the data dimension.
    """
    x = np.asarray(x, dtype=float)
    xhat = np.asarray(xhat, dtype=float)
    if x.shape != xhat.shape:
        raise ValueError(f"mse: shape mismatch {x.shape} vs {xhat.shape}")
    diff = xhat - x
    return float(np.mean(np.sum(diff * diff, axis=1)))


def _apply_update(state: TrainState, grads):
    opt = state.opt
    state.step += 1
    if opt.algo == "sgd":
        for p, g in zip(state.params, grads):
            p -= opt.lr * g
        return
    t = state.step
    bias1 = 1.0 - opt.beta1**t
    bias2 = 1.0 - opt.beta2**t
    for p, g, m, v in zip(state.params, grads, state.adam_m, state.adam_v):
        m *= opt.beta1
        m += (1.0 - opt.beta1) * g
        v *= opt.beta2
        v += (1.0 - opt.beta2) * g * g
        p -= opt.lr * (m / bias1) / (np.sqrt(v / bias2) + opt.eps)


def cost_and_gradients(state: TrainState, x, kind: DistanceKind, mode: CostMode, dirs):
    """Full cost of a batch plus its gradient in every parameter.

    No parameter is modified.  The penalty gradient enters through the
    latent batch, so both halves of the net receive the sum of the
    reconstruction and penalty pulls.  For the pairwise kind this consumes
    comparison draws from ``state.rng``.
    """
    x = _check_input(x, state.spec.data_dim, "cost_and_gradients")
    n = x.shape[0]
    n_enc = state.n_encoder_layers
    n_dec = len(state.spec.decoder_widths) - 1

    enc_caches = []
    z = _forward_half(state.params, 0, n_enc, x, enc_caches)
    dec_caches = []
    xhat = _forward_half(state.params, 2 * n_enc, n_dec, z, dec_caches)

    mse_val = mse(x, xhat)
    sliced_val, sliced_grad = sliced_distance(z, dirs, kind, rng=state.rng)
    cost = composite_cost(mse_val, sliced_val, mode)
    if not np.isfinite(cost):
        raise FloatingPointError(
            f"non-finite cost at step {state.step} (mse={mse_val}, sliced={sliced_val})"
        )

    grads = [None] * len(state.params)
    g_xhat = (2.0 / n) * (xhat - x)
    g_z = _backward_half(state.params, 2 * n_enc, n_dec, dec_caches, g_xhat, grads)
    g_z = g_z + penalty_derivative(sliced_val, mode) * sliced_grad
    _backward_half(state.params, 0, n_enc, enc_caches, g_z, grads)

    for i, g in enumerate(grads):
        if not np.all(np.isfinite(g)):
            raise FloatingPointError(
                f"non-finite gradient in parameter {i} at step {state.step} "
                f"(mse={mse_val}, sliced={sliced_val})"
            )
    stats = {"mse": mse_val, "sliced": sliced_val, "cost": cost}
    return cost, stats, grads


def backward_step(state: TrainState, x, kind: DistanceKind, mode: CostMode, dirs):
    """One full training step on a batch: forward, backward, optimizer update.

    Returns ``(state, stats)`` with stats holding the mse, sliced penalty
    and combined cost of the batch before the update.  A non-finite cost or
    gradient aborts with a diagnostic before any parameter is touched.
    """
    _, stats, grads = cost_and_gradients(state, x, kind, mode, dirs)
    _apply_update(state, grads)
    return state, stats


def save_checkpoint(state: TrainState, path) -> None:
    """Dump spec, parameters, optimizer moments, step and rng state to .npz."""
    meta = {
        "format": _CHECKPOINT_FORMAT,
        "version": _CHECKPOINT_VERSION,
        "encoder_widths": [int(w) for w in state.spec.encoder_widths],
        "decoder_widths": [int(w) for w in state.spec.decoder_widths],
        "opt": {
            "algo": state.opt.algo,
            "lr": state.opt.lr,
            "beta1": state.opt.beta1,
            "beta2": state.opt.beta2,
            "eps": state.opt.eps,
        },
        "step": state.step,
        "rng_state": state.rng.bit_generator.state,
    }
    arrays = {"meta": np.array(json.dumps(meta))}
    for i, p in enumerate(state.params):
        arrays[f"param_{i}"] = p
        arrays[f"m_{i}"] = state.adam_m[i]
        arrays[f"v_{i}"] = state.adam_v[i]
    np.savez(path, **arrays)


def load_checkpoint(path) -> TrainState:
    """Rebuild a TrainState exactly as saved (bitwise parameter round-trip)."""
    with np.load(path, allow_pickle=False) as data:
        if "meta" not in data:
            raise ValueError(f"{path}: not a checkpoint file (no meta entry)")
        meta = json.loads(str(data["meta"]))
        if meta.get("format") != _CHECKPOINT_FORMAT:
            raise ValueError(f"{path}: unrecognized checkpoint format")
        if meta.get("version") != _CHECKPOINT_VERSION:
            raise ValueError(f"{path}: unsupported checkpoint version {meta.get('version')}")
        spec = MlpSpec(
            encoder_widths=tuple(meta["encoder_widths"]),
            decoder_widths=tuple(meta["decoder_widths"]),
        )
        opt = OptimizerSpec(**meta["opt"])
        n_arrays = 2 * (len(spec.encoder_widths) - 1 + len(spec.decoder_widths) - 1)
        params = [data[f"param_{i}"].copy() for i in range(n_arrays)]
        adam_m = [data[f"m_{i}"].copy() for i in range(n_arrays)]
        adam_v = [data[f"v_{i}"].copy() for i in range(n_arrays)]
    rng = np.random.Generator(np.random.PCG64())
    rng.bit_generator.state = meta["rng_state"]
    return TrainState(
        spec=spec,
        opt=opt,
        params=params,
        adam_m=adam_m,
        adam_v=adam_v,
        step=int(meta["step"]),
        rng=rng,
    )
