"""Desk-scale reproductions of the published simulation results."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .decode import decode_error, residual_power
from .halftone import DbsConfig, bayer_dither, spatial_dbs, white_noise_dither
from .optics import Kernel, gaussian_kernel
from .patterns import PatternSpec, ideal_phase, make_patterns, target_bin
from .phase_dbs import OptimizeConfig, optimize

log = logging.getLogger(__name__)

# (block, scheme, weights, passes, published mean abs error in degrees)
TABLE1 = [
    ("single", "spatial DBS", None, None, 0.43),
    ("single", "phase DBS (all k)", "all", 16, 0.44),
    ("single", "phase DBS (k=1)", "k1", 28, 0.10),
    ("dual", "spatial DBS", None, None, 0.75),
    ("dual", "phase DBS (all k)", "all", 14, 0.87),
    ("dual", "phase DBS (k=1,2)", "k12", 30, 0.44),
]

# (scheme, published RMS error in radians)
DAI = [("bayer", 0.047), ("spatial DBS", 0.027), ("phase DBS (k=1)", 0.014)]
DAI_PERIOD = 32
DAI_HEIGHT = 480  # 15 periods; not stated in the source
DAI_BAYER_ORDER = 8


@dataclass
class Cell:
    block: str
    scheme: str
    reference: float
    mae_deg: float
    rms_rad: float
    passes: int
    seconds: float
    power: list[float] = field(default_factory=list)
    seed_mae_deg: float = float("nan")

    def to_dict(self) -> dict:
        return asdict(self)


def _score(binary, spec: PatternSpec, kernel: Kernel):
    k = target_bin(spec)
    return decode_error(binary, k, ideal_phase(spec, k), kernel)


def run_table1(width: int = 80, height: int = 480, frames: int = 8, seed: int = 1,
               kernel: Kernel | None = None, passes: int | None = None,
               rows: list[int] | None = None) -> list[Cell]:
    """Run the six spatial/phase DBS cells. ``passes`` overrides the per-cell pass counts."""
    kernel = kernel or gaussian_kernel(15, 2.0)
    cells = []
    for i, (block, scheme, weights, npass, reference) in enumerate(TABLE1):
        if rows is not None and i not in rows:
            continue
        spec = PatternSpec(frames, width, height, block)
        contone = make_patterns(spec)
        t0 = time.perf_counter()
        seed_mae = _score(white_noise_dither(contone, seed), spec, kernel).mae_deg
        if weights is None:
            binary, trace = spatial_dbs(contone, DbsConfig(kernel), seed=seed)
            used = max(len(a) for a in trace.accepted)
        else:
            cfg = OptimizeConfig(kernel, weights, max_passes=passes or npass, seed=seed)
            binary, trace = optimize(contone, cfg)
            used = len(trace.passes)
        dt = time.perf_counter() - t0
        rep = _score(binary, spec, kernel)
        power = residual_power(contone, binary, kernel)
        cells.append(Cell(block, scheme, reference, rep.mae_deg, rep.rms_rad, used, dt,
                          [float(v) for v in power], seed_mae))
        log.info("%s / %s: %.4f deg (reference %.2f) in %.1fs", block, scheme, rep.mae_deg, reference, dt)
    return cells


def dai_spec(width: int = 80, height: int = DAI_HEIGHT, frames: int = 8) -> PatternSpec:
    if height % DAI_PERIOD:
        raise ValueError(f"height must be a multiple of {DAI_PERIOD}")
    return PatternSpec(frames, width, height, "single", periods=height // DAI_PERIOD)


def dai_kernel() -> Kernel:
    # 5x5 Gaussian with variance 5/3
    return gaussian_kernel(5, math.sqrt(5.0 / 3.0))


def run_dai(width: int = 80, height: int = DAI_HEIGHT, frames: int = 8, seed: int = 1,
            passes: int = 30) -> list[Cell]:
    """Bayer vs spatial DBS vs phase DBS (k=1) under the 5x5 just-defocused kernel."""
    kernel = dai_kernel()
    spec = dai_spec(width, height, frames)
    # a 32-row tile repeated vertically is the same as the multi-period spec
    contone = make_patterns(dai_spec(width, DAI_PERIOD, frames)).tiled(1, height // DAI_PERIOD)
    cells = []
    for scheme, reference in DAI:
        t0 = time.perf_counter()
        if scheme == "bayer":
            binary, used = bayer_dither(contone, DAI_BAYER_ORDER), 0
        elif scheme == "spatial DBS":
            binary, trace = spatial_dbs(contone, DbsConfig(kernel), seed=seed)
            used = max(len(a) for a in trace.accepted)
        else:
            binary, trace = optimize(contone, OptimizeConfig(kernel, "k1", max_passes=passes, seed=seed))
            used = len(trace.passes)
        dt = time.perf_counter() - t0
        rep = decode_error(binary, 1, ideal_phase(spec, 1), kernel)
        cells.append(Cell("dai", scheme, reference, rep.mae_deg, rep.rms_rad, used, dt,
                          [float(v) for v in residual_power(contone, binary, kernel)]))
        log.info("dai / %s: %.4f rad (reference %.3f)", scheme, rep.rms_rad, reference)
    return cells


def format_table1(cells: list[Cell]) -> str:
    lines = [f"{'block':<7} {'scheme':<20} {'ref':>7} {'measured':>9} {'passes':>6} {'secs':>6}"]
    for c in cells:
        lines.append(f"{c.block:<7} {c.scheme:<20} {c.reference:>7.2f} {c.mae_deg:>9.3f} "
                     f"{c.passes:>6d} {c.seconds:>6.1f}")
    lines.append("(mean absolute phase error, degrees)")
    return "\n".join(lines)


def format_dai(cells: list[Cell]) -> str:
    base = cells[0].rms_rad
    lines = [f"{'scheme':<20} {'ref':>7} {'measured':>9} {'vs bayer':>9}"]
    for c in cells:
        lines.append(f"{c.scheme:<20} {c.reference:>7.3f} {c.rms_rad:>9.4f} {c.rms_rad / base:>9.2f}")
    lines.append("(RMS phase error, radians)")
    return "\n".join(lines)
