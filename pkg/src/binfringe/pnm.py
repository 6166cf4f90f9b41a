"""Minimal binary PGM (P5) / PPM (P6) codec, 8-bit only."""

from __future__ import annotations

import os

import numpy as np


class PnmError(ValueError):
    pass


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    tokens, i = [], 0
    while len(tokens) < count:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if i >= len(data):
            raise PnmError("truncated header")
        if data[i:i + 1] == b"#":
            while i < len(data) and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < len(data) and not data[j:j + 1].isspace() and data[j:j + 1] != b"#":
            j += 1
        tokens.append(data[i:j])
        i = j
    # exactly one whitespace byte separates the header from the raster
    return tokens, i + 1


def read_pnm(path: str | os.PathLike) -> np.ndarray:
    """Read a P5 or P6 file as uint8, shape (H, W) or (H, W, 3)."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, start = _header_tokens(data, 4)
    magic = tokens[0]
    if magic not in (b"P5", b"P6"):
        raise PnmError(f"{path}: unsupported magic {magic!r}")
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise PnmError(f"{path}: bad header") from exc
    if maxval < 1 or maxval > 255:
        raise PnmError(f"{path}: only 8-bit files are supported (maxval {maxval})")
    ch = 3 if magic == b"P6" else 1
    need = w * h * ch
    raster = data[start:start + need]
    if len(raster) < need:
        raise PnmError(f"{path}: raster truncated ({len(raster)} of {need} bytes)")
    a = np.frombuffer(raster, dtype=np.uint8).reshape((h, w, 3) if ch == 3 else (h, w))
    if maxval != 255:
        a = np.round(a.astype(np.float64) * (255.0 / maxval)).astype(np.uint8)
    return a.copy()


def write_pgm(path: str | os.PathLike, img: np.ndarray) -> None:
    img = np.asarray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise PnmError("PGM needs a 2-d uint8 array")
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(img).tobytes())


def write_ppm(path: str | os.PathLike, img: np.ndarray) -> None:
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise PnmError("PPM needs an (H, W, 3) uint8 array")
    h, w, _ = img.shape
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(img).tobytes())


def to_gray8(values: np.ndarray) -> np.ndarray:
    """[0, 1] intensities to 8-bit with round(255 * v); binary {0,1} maps to {0,255}."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    return np.round(255.0 * v).astype(np.uint8)


def from_gray8(img: np.ndarray) -> np.ndarray:
    return np.asarray(img, dtype=np.float64) / 255.0


def phase_colors(phase_deg: np.ndarray) -> np.ndarray:
    """Hue-wheel pseudo-color for wrapped phase in degrees."""
    h = np.mod(phase_deg, 360.0) / 60.0
    x = 1.0 - np.abs(np.mod(h, 2.0) - 1.0)
    z = np.zeros_like(h)
    o = np.ones_like(h)
    sector = np.floor(h).astype(int) % 6
    choices = [np.stack(c, axis=-1) for c in
               ((o, x, z), (x, o, z), (z, o, x), (z, x, o), (x, z, o), (o, z, x))]
    rgb = np.choose(sector[..., None], choices)
    return np.round(255.0 * rgb).astype(np.uint8)


def gray_to_rgb(img: np.ndarray) -> np.ndarray:
    return np.repeat(np.asarray(img)[..., None], 3, axis=-1)
