"""Dataset generation and loading.

Three seeded synthetic families for desk-scale experiments, a reader for the
big-endian IDX ubyte image format, and plain CSV point files (one point per
row) used by the standalone distance command.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np


class IdxFormatError(ValueError):
    """Base class for IDX parsing failures."""


class IdxMagicError(IdxFormatError):
    """The file does not start with the expected image magic number."""


class IdxTruncatedError(IdxFormatError):
    """The file ends before the declared pixel payload."""


class IdxShapeError(IdxFormatError):
    """Declared dimensions are inconsistent or unusable."""


@dataclass
class Dataset:
    """Train and test splits of flattened points, plus optional image shape."""

    train: np.ndarray
    test: np.ndarray
    image_shape: tuple | None = None

    def __post_init__(self):
        if self.train.ndim != 2 or self.test.ndim != 2:
            raise ValueError("Dataset: splits must be 2-D point arrays")
        if self.train.shape[1] != self.test.shape[1]:
            raise ValueError("Dataset: split dimensions differ")

    @property
    def dim(self) -> int:
        return int(self.train.shape[1])


def split_points(points, image_shape=None) -> Dataset:
    """Sequential 80/20 split of a point array into train and test splits."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 2:
        raise ValueError("split_points: need at least 2 points")
    n_train = max(1, int(round(0.8 * points.shape[0])))
    n_train = min(n_train, points.shape[0] - 1)
    return Dataset(train=points[:n_train], test=points[n_train:], image_shape=image_shape)


def gen_synthetic(kind: str, n: int, seed: int, **params) -> Dataset:
    """Draw n points from a named synthetic family, deterministically.

    gaussian_mixture: components equally spaced on a circle of the given
    radius (angles 2*pi*j/components), each point a component center plus
    scale * N(0, I_dim); extra dimensions beyond the first two get no center
    offset.  Knobs: dim=2, components=3, radius=2.0, scale=0.5.

    ring: radius r0 + width * U(-1, 1) at a uniform angle, 2-D only.
    Knobs: r0=2.0, width=0.2.

    checker: uniform points on the black cells of a 4x4 checkerboard over
    the square [-span, span]^2, 2-D only.  Knob: span=2.0.

    The draw is split 80/20 into train and test.
    """
    if n < 10:
        raise ValueError("gen_synthetic: n must be >= 10")
    rng = np.random.default_rng(seed)
    known = {
        "gaussian_mixture": {"dim": 2, "components": 3, "radius": 2.0, "scale": 0.5},
        "ring": {"r0": 2.0, "width": 0.2},
        "checker": {"span": 2.0},
    }
    if kind not in known:
        raise ValueError(f"gen_synthetic: unknown kind {kind!r}; expected one of {sorted(known)}")
    bad = set(params) - set(known[kind])
    if bad:
        raise ValueError(f"gen_synthetic: unknown parameters for {kind}: {sorted(bad)}")
    opts = {**known[kind], **params}

    if kind == "gaussian_mixture":
        dim = int(opts["dim"])
        comps = int(opts["components"])
        if dim < 1 or comps < 1:
            raise ValueError("gen_synthetic: dim and components must be >= 1")
        angles = 2.0 * math.pi * np.arange(comps) / comps
        centers = np.zeros((comps, dim))
        if dim >= 2:
            centers[:, 0] = opts["radius"] * np.cos(angles)
            centers[:, 1] = opts["radius"] * np.sin(angles)
        elif comps > 1:
            centers[:, 0] = opts["radius"] * np.cos(angles)
        labels = rng.integers(0, comps, size=n)
        points = centers[labels] + opts["scale"] * rng.standard_normal((n, dim))
    elif kind == "ring":
        theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
        radii = opts["r0"] + opts["width"] * rng.uniform(-1.0, 1.0, size=n)
        points = np.column_stack([radii * np.cos(theta), radii * np.sin(theta)])
    else:
        span = float(opts["span"])
        # black cells of the 4x4 board: (i + j) even, cell side span/2
        cells = [(i, j) for i in range(4) for j in range(4) if (i + j) % 2 == 0]
        side = span / 2.0
        picks = rng.integers(0, len(cells), size=n)
        offsets = rng.uniform(0.0, side, size=(n, 2))
        corner = np.array([[-span + side * i, -span + side * j] for i, j in cells])
        points = corner[picks] + offsets

    return split_points(points)


def load_idx(images_path, labels_path=None) -> Dataset:
    """Read an IDX ubyte image file into flattened [0, 1] points.

    The header is big-endian: magic 0x00000803, then image count, rows,
    columns.  An optional labels file is accepted for interface parity but
    its labels are not used (training here is unsupervised).
    """
    with open(images_path, "rb") as fh:
        header = fh.read(16)
        if len(header) < 4:
            raise IdxTruncatedError(f"{images_path}: shorter than the magic number")
        (magic,) = struct.unpack(">I", header[:4])
        if magic != 0x00000803:
            raise IdxMagicError(f"{images_path}: magic 0x{magic:08X}, expected 0x00000803")
        if len(header) < 16:
            raise IdxTruncatedError(f"{images_path}: header ends before the dimensions")
        count, rows, cols = struct.unpack(">III", header[4:16])
        if rows < 1 or cols < 1:
            raise IdxShapeError(f"{images_path}: image shape {rows}x{cols} is unusable")
        if count < 2:
            raise IdxShapeError(f"{images_path}: need at least 2 images, found {count}")
        payload = fh.read(count * rows * cols)
        if len(payload) < count * rows * cols:
            raise IdxTruncatedError(
                f"{images_path}: payload holds {len(payload)} bytes, "
                f"declared {count * rows * cols}"
            )
    pixels = np.frombuffer(payload, dtype=np.uint8).astype(float) / 255.0
    points = pixels.reshape(count, rows * cols)
    return split_points(points, image_shape=(int(rows), int(cols)))


def load_points_csv(path) -> np.ndarray:
    """Read a CSV of points, one per row, plain decimal entries."""
    rows = []
    width = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if width is None:
                width = len(parts)
            elif len(parts) != width:
                raise ValueError(
                    f"{path}:{lineno}: ragged row ({len(parts)} fields, expected {width})"
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric entry") from None
    if not rows:
        raise ValueError(f"{path}: no points found")
    return np.asarray(rows)


def save_points_csv(path, points) -> None:
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError("save_points_csv: expected a 2-D point array")
    with open(path, "w", encoding="ascii") as fh:
        for row in points:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")
