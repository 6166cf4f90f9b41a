"""Command line front end: gen | dither | eval | reproduce | tile."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import _backend, experiments
from .decode import (decode_error, gradient_image, gradient_map, phase_map, dft_pixelwise,
                     residual_power)
from .halftone import DbsConfig, bayer_dither, spatial_dbs, white_noise_dither
from .optics import convolve_toroidal, gaussian_kernel
from .patterns import BINARY, CONTONE, PatternSet, PatternSpec, ideal_phase, make_patterns
from .phase_dbs import EXHAUSTIVE, MAX_EXHAUSTIVE_FRAMES, THRESHOLD, OptimizeConfig, optimize
from .pnm import from_gray8, gray_to_rgb, phase_colors, read_pnm, to_gray8, write_pgm, write_ppm

log = logging.getLogger("binfringe")

EXIT_USAGE = 2
EXIT_DATA = 3
MANIFEST = "run.json"
FRAMES_NPY = "frames.npy"
METRIC_KEYS = ("algorithm", "frames", "width", "height", "kernel_size", "sigma", "weights",
               "passes", "seed", "coeff", "mae_deg", "rms_rad", "power", "duration_s")


class DataError(Exception):
    pass


def _default_seed() -> int:
    try:
        return int(os.environ.get("FRINGE_SEED", "0"))
    except ValueError:
        return 0


def frame_name(n: int) -> str:
    return f"pattern_{n:02d}.pgm"


def dump_json(obj, path: Path | None = None) -> str:
    text = json.dumps(obj, sort_keys=True, indent=2)
    if path is not None:
        path.write_text(text + "\n")
    return text


def save_set(patterns: PatternSet, out: Path, manifest: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for n in range(patterns.n):
        write_pgm(out / frame_name(n), to_gray8(patterns.frames[n]))
    # 8-bit frames are for viewing; the exact stack rides alongside
    np.save(out / FRAMES_NPY, patterns.frames)
    dump_json(manifest, out / MANIFEST)


def load_manifest(path: Path) -> dict:
    f = path / MANIFEST
    if not f.exists():
        return {}
    try:
        return json.loads(f.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{f}: {exc}") from exc


def load_set(path: Path, spec: PatternSpec | None = None, use_pgm: bool = False) -> PatternSet:
    if not path.is_dir():
        raise DataError(f"{path}: no such directory")
    man = load_manifest(path)
    if spec is None:
        if "spec" not in man:
            raise DataError(f"{path}: no {MANIFEST} with a pattern spec; pass spec flags")
        spec = PatternSpec.from_dict(man["spec"])
    npy = path / FRAMES_NPY
    if npy.exists() and not use_pgm:
        frames = np.load(npy)
    else:
        files = sorted(path.glob("pattern_*.pgm"))
        if not files:
            raise DataError(f"{path}: no pattern_NN.pgm files")
        try:
            frames = np.stack([read_pnm(f) for f in files])
        except ValueError as exc:
            raise DataError(str(exc)) from exc
        if frames.ndim != 3:
            raise DataError(f"{path}: pattern files must be grayscale")
        if np.all((frames == 0) | (frames == 255)) and man.get("domain") == BINARY:
            frames = (frames == 255).astype(np.uint8)
        else:
            frames = from_gray8(frames)
    if frames.shape != spec.shape:
        raise DataError(f"{path}: frames have shape {frames.shape}, spec expects {spec.shape}")
    binary = frames.dtype == np.uint8 or man.get("domain") == BINARY
    try:
        return PatternSet(spec, frames, BINARY if binary else CONTONE, man)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------- parsing

def _spec_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--mode", choices=("single", "dual"), default="single" if required else None)
    p.add_argument("--frames", type=int, default=8 if required else None)
    p.add_argument("--width", type=int, default=80 if required else None)
    p.add_argument("--height", type=int, default=480 if required else None)
    p.add_argument("--fhigh", type=int, default=8 if required else None,
                   help="k=2 periods per unit period (dual mode)")
    p.add_argument("--periods", type=int, default=1 if required else None,
                   help="unit-frequency periods over the height")


def _kernel_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kernel-size", type=int, default=15)
    p.add_argument("--sigma", type=float, default=2.0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="binfringe", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", parents=[common], help="write an ideal contone pattern set")
    _spec_flags(g)
    g.add_argument("--out", type=Path, required=True)

    d = sub.add_parser("dither", parents=[common], help="binarize a contone pattern set")
    d.add_argument("--algo", choices=("whitenoise", "bayer", "dbs", "phasedbs"), required=True)
    d.add_argument("--input", type=Path, help="directory written by 'gen' (else spec flags)")
    _spec_flags(d, required=False)
    _kernel_flags(d)
    d.add_argument("--weights", choices=("all", "k1", "k12"))
    d.add_argument("--solver", choices=(EXHAUSTIVE, THRESHOLD))
    d.add_argument("--passes", type=int)
    d.add_argument("--min-flips", type=int)
    d.add_argument("--bayer-order", type=int, choices=(2, 4, 8, 16))
    d.add_argument("--seed", type=int, default=_default_seed())
    d.add_argument("--out", type=Path, required=True)

    e = sub.add_parser("eval", parents=[common], help="defocus, decode and score a pattern set")
    e.add_argument("--input", type=Path, required=True)
    _spec_flags(e, required=False)
    _kernel_flags(e)
    e.add_argument("--coeff", type=int, help="DFT bin to score (default 1 single, 2 dual)")
    e.add_argument("--from-pgm", action="store_true", help="ignore frames.npy, read the 8-bit files")
    e.add_argument("--out", type=Path, help="metrics file (default INPUT/metrics.json)")
    e.add_argument("--render", type=Path, help="directory for phase/gradient/tiled renders")
    e.add_argument("--tile-width", type=int, default=640)

    r = sub.add_parser("reproduce", parents=[common], help="rerun the published simulation comparisons")
    r.add_argument("--suite", required=True)
    r.add_argument("--seed", type=int, default=_default_seed())
    r.add_argument("--width", type=int, default=80)
    r.add_argument("--height", type=int, default=480)
    r.add_argument("--passes", type=int, help="override phase DBS pass counts")
    r.add_argument("--json", type=Path)

    t = sub.add_parser("tile", parents=[common], help="repeat a pattern set side by side")
    t.add_argument("--input", type=Path, required=True)
    t.add_argument("--nx", type=int, default=8)
    t.add_argument("--ny", type=int, default=1)
    t.add_argument("--out", type=Path, required=True)
    return ap


def _spec_from_args(args, base: PatternSpec | None = None) -> PatternSpec:
    base = base or PatternSpec()
    vals = base.to_dict()
    for key in ("mode", "frames", "width", "height", "fhigh", "periods"):
        v = getattr(args, key, None)
        if v is not None:
            vals[key] = v
    return PatternSpec.from_dict(vals)


def _kernel(args):
    try:
        return gaussian_kernel(args.kernel_size, args.sigma)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    try:
        spec = _spec_from_args(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    t0 = time.perf_counter()
    patterns = make_patterns(spec)
    man = {"command": "gen", "spec": spec.to_dict(), "domain": CONTONE, "output": str(args.out),
           "duration_s": time.perf_counter() - t0}
    save_set(patterns, args.out, man)
    print(dump_json(man))
    return 0


def _check_dither_flags(args) -> None:
    if args.algo != "phasedbs":
        for flag in ("weights", "solver", "min_flips"):
            if getattr(args, flag) is not None:
                raise UsageError(f"--{flag.replace('_', '-')} only applies to --algo phasedbs")
    if args.algo != "bayer" and args.bayer_order is not None:
        raise UsageError("--bayer-order only applies to --algo bayer")
    if args.algo in ("whitenoise", "bayer") and args.passes is not None:
        raise UsageError(f"--passes does not apply to --algo {args.algo}")
    if args.passes is not None and args.passes < 1:
        raise UsageError("--passes must be >= 1")


def cmd_dither(args) -> int:
    _check_dither_flags(args)
    if args.input is not None:
        base = load_set(args.input)
        if base.is_binary:
            raise DataError(f"{args.input}: input is already binary")
        try:
            spec = _spec_from_args(args, base.spec)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if spec != base.spec:
            raise UsageError("spec flags conflict with the input manifest")
        contone = base
    else:
        try:
            spec = _spec_from_args(args)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        contone = make_patterns(spec)
    contone = PatternSet(spec, contone.frames, CONTONE)
    kernel = _kernel(args)
    cfg = {"kernel_size": args.kernel_size, "sigma": args.sigma, "seed": args.seed}
    trace = None
    t0 = time.perf_counter()
    if args.algo == "whitenoise":
        binary = white_noise_dither(contone, args.seed)
    elif args.algo == "bayer":
        cfg["bayer_order"] = args.bayer_order or 8
        binary = bayer_dither(contone, cfg["bayer_order"])
    elif args.algo == "dbs":
        cfg["max_passes"] = args.passes or 50
        binary, tr = spatial_dbs(contone, DbsConfig(kernel, cfg["max_passes"]), seed=args.seed)
        trace = {"accepted": tr.accepted, "error": tr.error, "initial_error": tr.initial_error}
    else:
        solver = args.solver or (EXHAUSTIVE if spec.frames <= MAX_EXHAUSTIVE_FRAMES else THRESHOLD)
        if solver == EXHAUSTIVE and spec.frames > MAX_EXHAUSTIVE_FRAMES:
            raise UsageError(f"--solver exhaustive supports at most {MAX_EXHAUSTIVE_FRAMES} frames")
        weights = args.weights or "all"
        if weights == "k12" and spec.frames < 5:
            raise UsageError("--weights k12 needs at least 5 frames")
        opt = OptimizeConfig(kernel, weights, solver, args.passes or 30, args.min_flips or 0, args.seed)
        try:
            opt.validate(spec.frames)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        cfg.update(weights=weights, solver=solver, max_passes=opt.max_passes, min_flips=opt.min_flips)
        binary, tr = optimize(contone, opt)
        trace = tr.to_dict()
    dt = time.perf_counter() - t0
    man = {"command": "dither", "algorithm": args.algo, "spec": spec.to_dict(), "domain": BINARY,
           "config": cfg, "input": str(args.input) if args.input else None,
           "output": str(args.out), "duration_s": dt, "backend": _backend.NAME}
    if trace is not None:
        man["passes"] = len(trace["passes"]) if "passes" in trace else max(map(len, trace["accepted"]))
    save_set(binary, args.out, man)
    if trace is not None:
        dump_json(trace, args.out / "trace.json")
    print(dump_json(man))
    return 0


def _render(out: Path, patterns: PatternSet, measured: np.ndarray, tile_width: int) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_ppm(out / "phase.ppm", phase_colors(measured))
    write_ppm(out / "gradient.ppm", gray_to_rgb(to_gray8(gradient_image(gradient_map(measured)))))
    nx = max(1, -(-tile_width // patterns.spec.width))
    tiled = patterns.tiled(nx, 1)
    tdir = out / "tiled"
    tdir.mkdir(exist_ok=True)
    for n in range(tiled.n):
        write_pgm(tdir / frame_name(n), to_gray8(tiled.frames[n]))


def cmd_eval(args) -> int:
    t0 = time.perf_counter()
    man = load_manifest(args.input) if args.input.is_dir() else {}
    base = PatternSpec.from_dict(man["spec"]) if "spec" in man else None
    try:
        spec = _spec_from_args(args, base)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    patterns = load_set(args.input, spec, use_pgm=args.from_pgm)
    coeff = args.coeff if args.coeff is not None else (1 if spec.mode == "single" else 2)
    try:
        truth = ideal_phase(spec, coeff)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    kernel = _kernel(args) if patterns.is_binary else None
    frames = patterns.frames.astype(np.float64)
    if kernel is not None:
        frames = convolve_toroidal(frames, kernel)
    measured = phase_map(dft_pixelwise(frames), coeff)
    rep = decode_error(patterns, coeff, truth, kernel)
    power = residual_power(make_patterns(spec), patterns, kernel)
    cfg = man.get("config", {})
    metrics = {
        "algorithm": man.get("algorithm", "contone" if not patterns.is_binary else None),
        "frames": spec.frames, "width": spec.width, "height": spec.height,
        "kernel_size": args.kernel_size if kernel is not None else None,
        "sigma": args.sigma if kernel is not None else None,
        "weights": cfg.get("weights"), "passes": man.get("passes"), "seed": cfg.get("seed"),
        "coeff": coeff, "mae_deg": rep.mae_deg, "rms_rad": rep.rms_rad,
        "power": [float(v) for v in power],
        "duration_s": time.perf_counter() - t0,
    }
    assert tuple(sorted(metrics)) == tuple(sorted(METRIC_KEYS))
    dump_json(metrics, args.out or args.input / "metrics.json")
    if args.render is not None:
        _render(args.render, patterns, measured, args.tile_width)
    print(dump_json(metrics))
    return 0


def cmd_reproduce(args) -> int:
    if args.suite not in ("table1", "dai"):
        raise UsageError(f"unknown suite {args.suite!r} (choose table1 or dai)")
    if args.suite == "table1":
        cells = experiments.run_table1(args.width, args.height, seed=args.seed, passes=args.passes)
        print(experiments.format_table1(cells))
    else:
        cells = experiments.run_dai(args.width, args.height, seed=args.seed, passes=args.passes or 30)
        print(experiments.format_dai(cells))
    if args.json is not None:
        dump_json({"suite": args.suite, "seed": args.seed, "width": args.width,
                   "height": args.height, "backend": _backend.NAME,
                   "cells": [c.to_dict() for c in cells]}, args.json)
    return 0


def cmd_tile(args) -> int:
    if args.nx < 1 or args.ny < 1:
        raise UsageError("--nx and --ny must be >= 1")
    patterns = load_set(args.input)
    tiled = patterns.tiled(args.nx, args.ny)
    man = dict(patterns.meta)
    man.update(command="tile", spec=tiled.spec.to_dict(), domain=tiled.domain,
               input=str(args.input), output=str(args.out), tiles=[args.nx, args.ny])
    save_set(tiled, args.out, man)
    print(dump_json(man))
    return 0


COMMANDS = {"gen": cmd_gen, "dither": cmd_dither, "eval": cmd_eval,
            "reproduce": cmd_reproduce, "tile": cmd_tile}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.cmd](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"binfringe {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"binfringe {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
