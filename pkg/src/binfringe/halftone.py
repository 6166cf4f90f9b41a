"""Reference contone-to-binary converters: white noise, Bayer, spatial DBS."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .optics import Kernel, convolve_toroidal, gaussian_kernel, toroidal_autocorrelation
from .patterns import BINARY, PatternSet

log = logging.getLogger(__name__)

MOVE_TOL = 1e-12


def _require_contone(patterns: PatternSet) -> None:
    if patterns.is_binary:
        raise ValueError("expected a contone pattern set")


def white_noise_dither(patterns: PatternSet, seed: int = 0) -> PatternSet:
    """Each sample becomes 1 with probability equal to its intensity."""
    _require_contone(patterns)
    rng = np.random.default_rng(seed)
    u = rng.random(patterns.frames.shape)
    bits = (u < patterns.frames).astype(np.uint8)
    return PatternSet(patterns.spec, bits, BINARY, {"algorithm": "whitenoise", "seed": seed})


def bayer_matrix(order: int) -> np.ndarray:
    """Recursive Bayer index matrix of side ``order`` (a power of two)."""
    if order < 2 or order & (order - 1):
        raise ValueError(f"Bayer order must be a power of two >= 2, got {order}")
    b = np.array([[0, 2], [3, 1]])
    while b.shape[0] < order:
        b = np.block([[4 * b, 4 * b + 2], [4 * b + 3, 4 * b + 1]])
    return b


def bayer_dither(patterns: PatternSet, order: int = 8) -> PatternSet:
    _require_contone(patterns)
    if order not in (2, 4, 8, 16):
        raise ValueError(f"Bayer order must be one of 2, 4, 8, 16, got {order}")
    thresh = (bayer_matrix(order) + 0.5) / order**2
    _, h, w = patterns.frames.shape
    # B is indexed (x mod M, y mod M)
    ty = np.arange(h) % order
    tx = np.arange(w) % order
    t = thresh[tx[None, :], ty[:, None]]
    bits = (patterns.frames > t[None]).astype(np.uint8)
    return PatternSet(patterns.spec, bits, BINARY, {"algorithm": "bayer", "order": order})


@dataclass
class DbsConfig:
    kernel: Kernel = field(default_factory=gaussian_kernel)
    max_passes: int = 50

    def __post_init__(self):
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")


@dataclass
class DbsTrace:
    """Per-frame lists of accepted moves and error after each pass."""

    accepted: list[list[int]] = field(default_factory=list)
    error: list[list[float]] = field(default_factory=list)
    initial_error: list[float] = field(default_factory=list)


def dbs_error(binary: PatternSet, contone: PatternSet, kernel: Kernel) -> np.ndarray:
    """Per-frame filtered squared error sum((kernel * (binary - contone))**2)."""
    if binary.frames.shape != contone.frames.shape:
        raise ValueError(f"shape mismatch {binary.frames.shape} vs {contone.frames.shape}")
    e = binary.frames.astype(np.float64) - contone.frames.astype(np.float64)
    return (convolve_toroidal(e, kernel) ** 2).sum(axis=(1, 2))


def _support_offsets(radius: int, n: int) -> np.ndarray:
    # distinct offsets of the autocorrelation support modulo n
    if 2 * radius + 1 >= n:
        return np.arange(n, dtype=np.int64)
    return np.arange(-radius, radius + 1, dtype=np.int64)


def spatial_dbs_frame(binary: np.ndarray, contone: np.ndarray, kernel: Kernel,
                      max_passes: int = 50, moves: list | None = None):
    """Halftone one frame in place by toggle/swap DBS.

    Returns the per-pass accepted counts and filtered errors. Each entry of
    ``moves`` (if given) receives the error change of one accepted move.
    """
    h, w = binary.shape
    cpp = np.ascontiguousarray(toroidal_autocorrelation(kernel, (h, w)))
    e = binary.astype(np.float64) - contone
    cpe = np.ascontiguousarray(convolve_toroidal(convolve_toroidal(e, kernel), _flipped(kernel)))
    err = float((convolve_toroidal(e, kernel) ** 2).sum())
    dys = _support_offsets(2 * kernel.radius, h)
    dxs = _support_offsets(2 * kernel.radius, w)
    accepted, errors = [], []
    for _ in range(max_passes):
        n_acc, delta = _backend.dbs_frame_pass(binary, cpe, cpp, dys, dxs, MOVE_TOL, moves)
        err += delta
        accepted.append(int(n_acc))
        errors.append(err)
        if n_acc == 0:
            break
    return accepted, errors


def _flipped(kernel: Kernel) -> Kernel:
    return Kernel(kernel.taps[::-1, ::-1].copy())


def spatial_dbs(patterns: PatternSet, cfg: DbsConfig | None = None, seed: int = 0,
                initial: PatternSet | None = None) -> tuple[PatternSet, DbsTrace]:
    """Halftone every frame independently with toggle/swap DBS.

    The search starts from ``initial`` if given, else from white-noise dither.
    """
    _require_contone(patterns)
    cfg = cfg or DbsConfig()
    start = initial if initial is not None else white_noise_dither(patterns, seed)
    bits = np.ascontiguousarray(start.frames, dtype=np.uint8).copy()
    trace = DbsTrace()
    trace.initial_error = [float(v) for v in dbs_error(start, patterns, cfg.kernel)]
    for n in range(patterns.n):
        frame = bits[n].copy()
        acc, err = spatial_dbs_frame(frame, patterns.frames[n], cfg.kernel, cfg.max_passes)
        bits[n] = frame
        trace.accepted.append(acc)
        trace.error.append(err)
        log.debug("frame %d: %d passes, final error %.6g", n, len(acc), err[-1])
    meta = {"algorithm": "dbs", "seed": seed, "passes": max(len(a) for a in trace.accepted)}
    return PatternSet(patterns.spec, bits, BINARY, meta), trace
