"""Phase-weighted DBS: jointly re-binarize all frames of each pixel so the
blurred binary set matches the contone set in selected temporal DFT bins."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .decode import dft, idft, phase_map, wrapped_abs_error
from .halftone import white_noise_dither
from .optics import Kernel, convolve_toroidal_fft, gaussian_kernel, split_center
from .patterns import BINARY, PatternSet, ideal_phase, target_bin

log = logging.getLogger(__name__)

EXHAUSTIVE = "exhaustive"
THRESHOLD = "threshold"
MAX_EXHAUSTIVE_FRAMES = 16
MAX_THRESHOLD_FRAMES = 62
# costs within this of the best count as ties (bit patterns can cancel exactly in a bin)
TIE_TOL = 1e-12


def weight_preset(name: str, n: int) -> np.ndarray:
    """ALL: every bin; K1: bin 1 only; K12: bins 1 and 2 only."""
    w = np.zeros(n)
    name = name.lower()
    if name == "all":
        w[:] = 1.0
    elif name == "k1":
        w[1] = 1.0
    elif name == "k12":
        if n < 5:
            raise ValueError("K12 weights need at least 5 frames")
        w[1] = w[2] = 1.0
    else:
        raise ValueError(f"unknown weight preset {name!r}")
    return w


def check_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or np.any(w < 0) or not np.any(w > 0):
        raise ValueError("weights must be non-negative with at least one positive entry")
    return w


@dataclass
class OptimizeConfig:
    kernel: Kernel = field(default_factory=gaussian_kernel)
    weights: str | np.ndarray = "all"
    mode: str = EXHAUSTIVE
    max_passes: int = 30
    min_flips: int = 0
    seed: int = 0
    target: int | None = None  # progress-metric bin; defaults to the pattern's scoring bin

    def resolved_weights(self, n: int) -> np.ndarray:
        if isinstance(self.weights, str):
            return weight_preset(self.weights, n)
        w = check_weights(self.weights)
        if len(w) != n:
            raise ValueError(f"expected {n} weights, got {len(w)}")
        return w

    def validate(self, n: int) -> None:
        if self.mode not in (EXHAUSTIVE, THRESHOLD):
            raise ValueError(f"unknown solver mode {self.mode!r}")
        if self.mode == EXHAUSTIVE and n > MAX_EXHAUSTIVE_FRAMES:
            raise ValueError(f"exhaustive search is limited to {MAX_EXHAUSTIVE_FRAMES} frames, got {n}")
        if n > MAX_THRESHOLD_FRAMES:
            raise ValueError(f"at most {MAX_THRESHOLD_FRAMES} frames supported, got {n}")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")


@dataclass
class PassRecord:
    flips: int
    mae_deg: float
    cost: float


@dataclass
class OptimizationTrace:
    seed_mae_deg: float = float("nan")
    seed_cost: float = float("nan")
    passes: list[PassRecord] = field(default_factory=list)
    best_pass: int = 0  # 0 means the white-noise seed itself

    def to_dict(self) -> dict:
        return {"seed_mae_deg": self.seed_mae_deg, "seed_cost": self.seed_cost,
                "best_pass": self.best_pass,
                "passes": [vars(p) for p in self.passes]}


def surround_vector(binary: PatternSet, surround: Kernel, x: int, y: int) -> np.ndarray:
    """Light blurred into pixel (x, y) of every frame from its neighbors only."""
    _, h, w = binary.frames.shape
    if not (0 <= x < w and 0 <= y < h):
        raise ValueError(f"pixel ({x}, {y}) outside {w}x{h} grid")
    r = surround.radius
    out = np.zeros(binary.n)
    frames = binary.frames
    for i in range(surround.size):
        for j in range(surround.size):
            t = surround.taps[i, j]
            if t:
                out += t * frames[:, (y - (i - r)) % h, (x - (j - r)) % w]
    return out


def spectral_difference(contone_vec, surround_vec) -> np.ndarray:
    contone_vec = np.asarray(contone_vec, dtype=np.float64)
    surround_vec = np.asarray(surround_vec, dtype=np.float64)
    if contone_vec.shape != surround_vec.shape or contone_vec.ndim != 1:
        raise ValueError("contone and surround vectors must be 1-d and the same length")
    return dft(contone_vec) - dft(surround_vec)


def all_patterns(n: int) -> np.ndarray:
    """Every n-bit vector, row m holding the bits of m (bit 0 = frame 0)."""
    m = np.arange(1 << n)
    return ((m[:, None] >> np.arange(n)[None, :]) & 1).astype(np.float64)


def weighted_cost(d, c: float, bits, w) -> float:
    d = np.asarray(d)
    r = d - c * dft(np.asarray(bits, dtype=np.float64))
    return float(np.sum(np.asarray(w) * np.abs(r) ** 2))


def best_binary_exhaustive(d, c: float, w) -> np.ndarray:
    """Brute-force argmin of sum_k w_k |d_k - c * DFT(b)_k|^2 over all bit vectors.

    Ties (within ``TIE_TOL``) go to the numerically smallest pattern.
    """
    d = np.asarray(d, dtype=np.complex128)
    n = len(d)
    if n > MAX_EXHAUSTIVE_FRAMES:
        raise ValueError(f"exhaustive search is limited to {MAX_EXHAUSTIVE_FRAMES} frames, got {n}")
    w = check_weights(w)
    pats = all_patterns(n)
    costs = (w[None, :] * np.abs(d[None, :] - c * dft(pats, axis=1)) ** 2).sum(axis=1)
    best = int(np.argmax(costs <= costs.min() + TIE_TOL))
    return pats[best].astype(np.uint8)


def best_binary_threshold(d) -> np.ndarray:
    """Bit n is set where the inverse DFT of ``d`` is strictly positive."""
    v = idft(np.asarray(d, dtype=np.complex128)).real
    return (v > 0).astype(np.uint8)


def _symmetrized(w: np.ndarray) -> np.ndarray:
    n = len(w)
    mirror = w[(-np.arange(n)) % n]
    return np.maximum(w, mirror)


def _tables(n: int):
    kn = np.outer(np.arange(n), np.arange(n)) % n
    ang = 2.0 * np.pi * kn / n
    return np.ascontiguousarray(np.cos(ang)), np.ascontiguousarray(np.sin(ang))


def _pass_metrics(blurred: np.ndarray, contone: PatternSet, w: np.ndarray, k: int):
    """Bin-k mean abs phase error and total weighted |I_d|^2 of a blurred set."""
    resid_src = dft(blurred, axis=0)
    mae = wrapped_abs_error(phase_map(resid_src, k), ideal_phase(contone.spec, k)).mae_deg
    resid = dft(contone.frames, axis=0) - resid_src
    return mae, float(np.sum(w[:, None, None] * np.abs(resid) ** 2))


def optimize(contone: PatternSet, cfg: OptimizeConfig | None = None,
             initial: PatternSet | None = None) -> tuple[PatternSet, OptimizationTrace]:
    """Run phase-weighted DBS and return the best pass snapshot and its trace."""
    if contone.is_binary:
        raise ValueError("expected a contone pattern set")
    cfg = cfg or OptimizeConfig()
    n = contone.n
    cfg.validate(n)
    w = cfg.resolved_weights(n)
    k = cfg.target if cfg.target is not None else target_bin(contone.spec)
    exhaustive = cfg.mode == EXHAUSTIVE

    kernel = cfg.kernel
    _, c = split_center(kernel)
    taps = np.ascontiguousarray(kernel.taps)
    cos_t, sin_t = _tables(n)
    g = dft(contone.frames, axis=0)
    gre = np.ascontiguousarray(g.real)
    gim = np.ascontiguousarray(g.imag)
    if exhaustive:
        pats = all_patterns(n)
        pat_pow = np.ascontiguousarray((w[None, :] * np.abs(dft(pats, axis=1)) ** 2).sum(axis=1))
        kw = np.ascontiguousarray(w)
    else:
        pat_pow = np.zeros(1)
        kw = np.ascontiguousarray(_symmetrized(w))

    start = initial if initial is not None else white_noise_dither(contone, cfg.seed)
    bits = np.ascontiguousarray(start.frames, dtype=np.uint8).copy()

    trace = OptimizationTrace()
    # one fresh blur per pass: feeds the metrics and seeds the next pass
    blurred = convolve_toroidal_fft(bits.astype(np.float64), kernel)
    trace.seed_mae_deg, trace.seed_cost = _pass_metrics(blurred, contone, w, k)
    best_bits, best_mae = bits.copy(), trace.seed_mae_deg
    for p in range(1, cfg.max_passes + 1):
        blur = np.ascontiguousarray(blurred)
        flips = int(_backend.phase_pixel_pass(bits, blur, taps, c, gre, gim, cos_t, sin_t,
                                              kw, pat_pow, exhaustive, TIE_TOL))
        blurred = convolve_toroidal_fft(bits.astype(np.float64), kernel)
        mae, cost = _pass_metrics(blurred, contone, w, k)
        rec = PassRecord(flips, mae, cost)
        trace.passes.append(rec)
        log.info("pass %d: %d flips, bin-%d MAE %.4f deg", p, flips, k, mae)
        if mae < best_mae:
            best_bits, best_mae, trace.best_pass = bits.copy(), mae, p
        if flips < cfg.min_flips or flips == 0:
            break

    meta = {"algorithm": "phasedbs", "seed": cfg.seed, "mode": cfg.mode,
            "passes": len(trace.passes), "best_pass": trace.best_pass}
    return PatternSet(contone.spec, best_bits, BINARY, meta), trace
