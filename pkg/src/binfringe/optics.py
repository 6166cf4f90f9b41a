"""Defocused-projector blur: Gaussian FIR kernels applied with toroidal wrap."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .patterns import CONTONE, PatternSet


@dataclass(frozen=True)
class Kernel:
    """Odd-square FIR kernel. ``taps[r, c]`` is the weight at offset (r - R, c - R)."""

    taps: np.ndarray

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64)
        if taps.ndim != 2 or taps.shape[0] != taps.shape[1] or taps.shape[0] % 2 == 0:
            raise ValueError(f"kernel must be odd-square, got shape {taps.shape}")
        if np.any(taps < 0):
            raise ValueError("kernel taps must be non-negative")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def size(self) -> int:
        return self.taps.shape[0]

    @property
    def radius(self) -> int:
        return self.size // 2

    @property
    def center(self) -> float:
        r = self.radius
        return float(self.taps[r, r])


def gaussian_kernel(size: int = 15, sigma: float = 2.0) -> Kernel:
    """Sampled, truncated Gaussian normalized to unit sum."""
    if size < 1 or size % 2 == 0:
        raise ValueError(f"kernel size must be odd and positive, got {size}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    r = size // 2
    o = np.arange(-r, r + 1, dtype=np.float64)
    g = np.exp(-(o[:, None] ** 2 + o[None, :] ** 2) / (2.0 * sigma * sigma))
    return Kernel(g / g.sum())


def split_center(kernel: Kernel) -> tuple[Kernel, float]:
    """Return the center-zeroed kernel and the removed center weight."""
    taps = kernel.taps.copy()
    r = kernel.radius
    c = float(taps[r, r])
    taps[r, r] = 0.0
    return Kernel(taps), c


def convolve_toroidal(grid: np.ndarray, kernel: Kernel) -> np.ndarray:
    """out[p] = sum_o taps[o] * grid[(p - o) mod shape] over the last two axes.

    Direct shift-and-add; the per-pixel summation order does not depend on the
    grid size, so tiled inputs give bit-identical tiled outputs.
    """
    grid = np.asarray(grid, dtype=np.float64)
    out = np.zeros_like(grid)
    r = kernel.radius
    for i in range(kernel.size):
        for j in range(kernel.size):
            t = kernel.taps[i, j]
            if t == 0.0:
                continue
            out += t * np.roll(grid, (i - r, j - r), axis=(-2, -1))
    return out


def _wrapped_taps(kernel: Kernel, shape: tuple[int, int]) -> np.ndarray:
    h, w = shape
    r = kernel.radius
    big = np.zeros((h, w))
    for i in range(kernel.size):
        for j in range(kernel.size):
            big[(i - r) % h, (j - r) % w] += kernel.taps[i, j]
    return big


def convolve_toroidal_fft(grid: np.ndarray, kernel: Kernel) -> np.ndarray:
    """FFT version of :func:`convolve_toroidal`; agrees to ~1e-15."""
    grid = np.asarray(grid, dtype=np.float64)
    tf = np.fft.rfft2(_wrapped_taps(kernel, grid.shape[-2:]))
    return np.fft.irfft2(np.fft.rfft2(grid) * tf, s=grid.shape[-2:])


def toroidal_autocorrelation(kernel: Kernel, shape: tuple[int, int]) -> np.ndarray:
    """a[m] = sum_u h(u) h(u + m) with offsets taken modulo ``shape``."""
    big = _wrapped_taps(kernel, shape)
    f = np.fft.rfft2(big)
    return np.fft.irfft2(f * np.conj(f), s=shape)


def defocus_set(patterns: PatternSet, kernel: Kernel) -> PatternSet:
    out = convolve_toroidal(patterns.frames.astype(np.float64), kernel)
    np.clip(out, 0.0, 1.0, out=out)
    return PatternSet(patterns.spec, out, CONTONE, dict(patterns.meta))
