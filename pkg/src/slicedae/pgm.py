"""Binary PGM (P5) output: zero-dependency grayscale dumps and grid tilings."""

from __future__ import annotations

import numpy as np

SEPARATOR_GRAY = 128


def to_gray(values) -> np.ndarray:
    """Map an array of intensities in [0, 1] to uint8 pixels, clipping."""
    arr = np.asarray(values, dtype=float)
    return np.clip(np.rint(arr * 255.0), 0, 255).astype(np.uint8)


def tile_grid(images, columns: int, separator: int = 1) -> np.ndarray:
    """Tile equal-shape uint8 images row-major into one canvas.

    Tiles are separated by ``separator``-pixel mid-gray gutters; the last
    grid row may be partially filled and keeps the gutter color in the
    unused slots.
    """
    if not images:
        raise ValueError("tile_grid: need at least one image")
    if columns < 1:
        raise ValueError("tile_grid: columns must be >= 1")
    h, w = images[0].shape
    for img in images:
        if img.shape != (h, w):
            raise ValueError("tile_grid: images must share one shape")
    rows = (len(images) + columns - 1) // columns
    canvas = np.full(
        (rows * h + (rows - 1) * separator, columns * w + (columns - 1) * separator),
        SEPARATOR_GRAY,
        dtype=np.uint8,
    )
    for idx, img in enumerate(images):
        r, c = divmod(idx, columns)
        top = r * (h + separator)
        left = c * (w + separator)
        canvas[top : top + h, left : left + w] = img
    return canvas


def write_pgm(path, image) -> None:
    """Write one 2-D uint8 array as a binary P5 file with max value 255."""
    image = np.asarray(image)
    if image.ndim != 2 or image.dtype != np.uint8:
        raise ValueError("write_pgm: expected a 2-D uint8 array")
    h, w = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(image.tobytes())


def read_pgm(path) -> np.ndarray:
    """Read back a binary P5 file written by :func:`write_pgm`."""
    with open(path, "rb") as fh:
        blob = fh.read()
    parts = blob.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5":
        raise ValueError(f"{path}: not a P5 file")
    w, h = (int(t) for t in parts[1].split())
    if parts[2] != b"255":
        raise ValueError(f"{path}: expected max value 255")
    pixels = np.frombuffer(parts[3][: w * h], dtype=np.uint8)
    if pixels.size != w * h:
        raise ValueError(f"{path}: truncated pixel payload")
    return pixels.reshape(h, w)
