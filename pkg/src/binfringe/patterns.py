"""Contone phase-shift pattern sets and their ground-truth phase maps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SINGLE = "single"
DUAL = "dual"
CONTONE = "contone"
BINARY = "binary"


@dataclass(frozen=True)
class PatternSpec:
    """Geometry and coding scheme of an N-frame pattern set.

    ``periods`` is the number of unit-frequency periods over the height and
    ``fhigh`` the number of periods of the k=2 term of dual-frequency patterns
    per unit-frequency period.
    """

    frames: int = 8
    width: int = 80
    height: int = 480
    mode: str = SINGLE
    fhigh: int = 8
    periods: int = 1

    def __post_init__(self):
        if self.mode not in (SINGLE, DUAL):
            raise ValueError(f"mode must be 'single' or 'dual', got {self.mode!r}")
        if self.frames < 3:
            raise ValueError(f"need at least 3 frames, got {self.frames}")
        if self.mode == DUAL and self.frames < 5:
            raise ValueError(f"dual-frequency patterns need at least 5 frames, got {self.frames}")
        if self.width < 1 or self.height < 2:
            raise ValueError(f"invalid size {self.width}x{self.height}")
        if self.periods < 1 or self.fhigh < 1:
            raise ValueError("periods and fhigh must be positive")

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.frames, self.height, self.width)

    def row_coords(self) -> np.ndarray:
        # r/height keeps the pattern periodic in the row direction
        r = np.arange(self.height, dtype=np.float64)
        if self.periods == 1:
            return r / self.height
        return np.mod(self.periods * r / self.height, 1.0)

    def to_dict(self) -> dict:
        return {"frames": self.frames, "width": self.width, "height": self.height,
                "mode": self.mode, "fhigh": self.fhigh, "periods": self.periods}

    @classmethod
    def from_dict(cls, d: dict) -> "PatternSpec":
        return cls(frames=int(d["frames"]), width=int(d["width"]), height=int(d["height"]),
                   mode=str(d.get("mode", SINGLE)), fhigh=int(d.get("fhigh", 8)),
                   periods=int(d.get("periods", 1)))


@dataclass
class PatternSet:
    """A stack of ``frames`` intensity grids, shape (N, height, width).

    Index arithmetic on both image axes is modular everywhere in this package.
    """

    spec: PatternSpec
    frames: np.ndarray
    domain: str = CONTONE
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.frames = np.asarray(self.frames)
        if self.frames.ndim != 3:
            raise ValueError(f"frames must be a 3-d stack, got shape {self.frames.shape}")
        if self.frames.shape != self.spec.shape:
            raise ValueError(f"frames shape {self.frames.shape} does not match spec {self.spec.shape}")
        if self.domain == BINARY:
            if not np.all((self.frames == 0) | (self.frames == 1)):
                raise ValueError("binary pattern set holds values other than 0/1")
            self.frames = self.frames.astype(np.uint8)
        elif self.domain == CONTONE:
            self.frames = self.frames.astype(np.float64)
            if self.frames.size and (self.frames.min() < 0.0 or self.frames.max() > 1.0):
                raise ValueError("contone values must lie in [0, 1]")
        else:
            raise ValueError(f"unknown domain {self.domain!r}")

    @property
    def n(self) -> int:
        return self.frames.shape[0]

    @property
    def is_binary(self) -> bool:
        return self.domain == BINARY

    def tiled(self, nx: int = 1, ny: int = 1) -> "PatternSet":
        """Repeat the set side by side ``nx`` times and vertically ``ny`` times."""
        spec = PatternSpec(self.spec.frames, self.spec.width * nx, self.spec.height * ny,
                           self.spec.mode, self.spec.fhigh, self.spec.periods * ny)
        return PatternSet(spec, np.tile(self.frames, (1, ny, nx)), self.domain, dict(self.meta))


def _row_profile(spec: PatternSpec) -> np.ndarray:
    y = spec.row_coords()
    n = np.arange(spec.frames, dtype=np.float64)[:, None] / spec.frames
    if spec.mode == SINGLE:
        return 0.5 + 0.5 * np.cos(2 * np.pi * (n - y[None, :]))
    return (0.5 + 0.25 * np.cos(2 * np.pi * (n - y[None, :]))
            + 0.25 * np.cos(2 * np.pi * (2 * n - spec.fhigh * y[None, :])))


def _broadcast(spec: PatternSpec, rows: np.ndarray) -> PatternSet:
    frames = np.repeat(rows[:, :, None], spec.width, axis=2)
    # guards against 1 + 1e-16 style overshoot from the cosine sums
    np.clip(frames, 0.0, 1.0, out=frames)
    return PatternSet(spec, frames, CONTONE)


def make_single_freq(spec: PatternSpec) -> PatternSet:
    if spec.mode != SINGLE:
        raise ValueError("make_single_freq needs a single-frequency spec")
    return _broadcast(spec, _row_profile(spec))


def make_dual_freq(spec: PatternSpec) -> PatternSet:
    if spec.mode != DUAL:
        raise ValueError("make_dual_freq needs a dual-frequency spec")
    return _broadcast(spec, _row_profile(spec))


def make_patterns(spec: PatternSpec) -> PatternSet:
    return make_single_freq(spec) if spec.mode == SINGLE else make_dual_freq(spec)


def ideal_phase(spec: PatternSpec, k: int = 1) -> np.ndarray:
    """Wrapped ground-truth phase of DFT bin ``k`` in degrees, shape (height, width)."""
    y = spec.row_coords()
    if k == 1:
        deg = 360.0 * y
    elif k == 2 and spec.mode == DUAL:
        deg = 360.0 * spec.fhigh * y
    else:
        raise ValueError(f"bin {k} carries no phase for {spec.mode}-frequency patterns")
    deg = np.mod(deg, 360.0)
    return np.repeat(deg[:, None], spec.width, axis=1)


def target_bin(spec: PatternSpec) -> int:
    """The bin whose phase error scores a pattern set: 1 for single, 2 for dual."""
    return 1 if spec.mode == SINGLE else 2
