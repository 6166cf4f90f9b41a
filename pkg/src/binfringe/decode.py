"""Per-pixel temporal DFT decoding and phase-error metrics.

The forward transform is X[k] = sum_n x[n] exp(+2j pi k n / N), unnormalized;
the inverse carries 1/N. With this sign the bin-1 phase grows with the row
coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .optics import Kernel, convolve_toroidal
from .patterns import PatternSet

QUALITY_EPS = 1e-9


def dft(x, axis: int = -1) -> np.ndarray:
    x = np.asarray(x)
    return np.fft.ifft(x, axis=axis) * x.shape[axis]


def idft(X, axis: int = -1) -> np.ndarray:
    X = np.asarray(X)
    return np.fft.fft(X, axis=axis) / X.shape[axis]


def dft_pixelwise(patterns) -> np.ndarray:
    """Complex bins of every pixel's temporal vector, shape (N, H, W)."""
    frames = patterns.frames if isinstance(patterns, PatternSet) else np.asarray(patterns)
    if frames.shape[0] < 3:
        raise ValueError("need at least 3 frames")
    return dft(frames.astype(np.float64), axis=0)


def phase_map(field: np.ndarray, k: int = 1) -> np.ndarray:
    """Wrapped phase of bin ``k`` in degrees, in [0, 360).

    Pixels whose bin magnitude is below ``QUALITY_EPS`` read 0.
    """
    n = field.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"bin {k} out of range for {n} frames")
    b = field[k]
    deg = np.degrees(np.arctan2(b.imag, b.real))
    deg = np.mod(deg, 360.0)
    deg[deg >= 360.0] = 0.0
    deg[np.abs(b) < QUALITY_EPS] = 0.0
    return deg


def quality_mask(field: np.ndarray, k: int = 1, eps: float = QUALITY_EPS) -> np.ndarray:
    """True where bin ``k`` is strong enough for its phase to mean anything."""
    return np.abs(field[k]) >= eps


def magnitude_map(field: np.ndarray, k: int = 1, scaled: bool = False) -> np.ndarray:
    b = field[k]
    mag = np.sqrt(b.real**2 + b.imag**2)
    return mag * (2.0 / field.shape[0]) if scaled else mag


@dataclass
class ErrorReport:
    error_map: np.ndarray
    mae_deg: float
    rms_rad: float
    power: np.ndarray | None = None

    def to_dict(self) -> dict:
        d = {"mae_deg": self.mae_deg, "rms_rad": self.rms_rad}
        if self.power is not None:
            d["power"] = [float(v) for v in self.power]
        return d


def wrapped_abs_error(measured: np.ndarray, truth: np.ndarray,
                      mask: np.ndarray | None = None) -> ErrorReport:
    measured = np.asarray(measured, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if measured.shape != truth.shape:
        raise ValueError(f"shape mismatch {measured.shape} vs {truth.shape}")
    e = np.abs(np.mod(measured - truth + 180.0, 360.0) - 180.0)
    sel = e if mask is None else e[mask]
    if sel.size == 0:
        return ErrorReport(e, float("nan"), float("nan"))
    mae = float(sel.mean())
    rms = float(np.sqrt(np.mean(sel**2)) * np.pi / 180.0)
    return ErrorReport(e, mae, rms)


def residual_power(contone: PatternSet, binary: PatternSet, kernel: Kernel | None = None,
                   normalize: bool = True) -> np.ndarray:
    """Mean |I_d[k]|^2 over pixels for every bin k.

    I_d = DFT(contone) - DFT(kernel * binary); with ``kernel=None`` the second
    set is used as is. ``normalize`` divides by N**2 (intensity-squared units);
    pass False for raw DFT-coefficient power.
    """
    if contone.frames.shape != binary.frames.shape:
        raise ValueError(f"shape mismatch {contone.frames.shape} vs {binary.frames.shape}")
    n = contone.n
    other = binary.frames.astype(np.float64)
    if kernel is not None:
        other = convolve_toroidal(other, kernel)
    resid = dft(contone.frames, axis=0) - dft(other, axis=0)
    power = (np.abs(resid) ** 2).mean(axis=(1, 2))
    return power / n**2 if normalize else power


def gradient_map(phase: np.ndarray) -> np.ndarray:
    """Wrapped forward difference down the rows, degrees per pixel in [-180, 180)."""
    phase = np.asarray(phase, dtype=np.float64)
    diff = np.roll(phase, -1, axis=0) - phase
    return np.mod(diff + 180.0, 360.0) - 180.0


def gradient_image(grad: np.ndarray, center: float | None = None, span: float = 1.0) -> np.ndarray:
    """Map a gradient map to [0, 1] around ``center`` (default: its mean).

    Zero deviation lands at mid-gray; +-``span`` degrees/pixel hit white/black.
    """
    if center is None:
        center = float(np.mean(grad))
    return np.clip(0.5 + (grad - center) / (2.0 * span), 0.0, 1.0)


def decode_error(patterns: PatternSet, k: int, truth: np.ndarray,
                 kernel: Kernel | None = None) -> ErrorReport:
    """Blur (if a kernel is given), decode bin ``k`` and score against ``truth``."""
    frames = patterns.frames.astype(np.float64)
    if kernel is not None:
        frames = convolve_toroidal(frames, kernel)
    field = dft(frames, axis=0)
    return wrapped_abs_error(phase_map(field, k), truth, quality_mask(field, k))
