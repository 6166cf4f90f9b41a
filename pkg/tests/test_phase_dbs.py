import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from binfringe.decode import dft
from binfringe.halftone import white_noise_dither
from binfringe.optics import Kernel, convolve_toroidal, gaussian_kernel, split_center
from binfringe.patterns import BINARY, PatternSet, PatternSpec, make_patterns
from binfringe.phase_dbs import (OptimizeConfig, all_patterns, best_binary_exhaustive,
                                 best_binary_threshold, optimize, spectral_difference,
                                 surround_vector, weight_preset, weighted_cost)

SPEC = PatternSpec(8, 9, 11)


def bits_set(frames, spec=SPEC):
    return PatternSet(spec, np.asarray(frames, np.uint8), BINARY)


def test_weight_presets():
    assert weight_preset("all", 8).tolist() == [1] * 8
    assert weight_preset("k1", 8).tolist() == [0, 1, 0, 0, 0, 0, 0, 0]
    assert weight_preset("K12", 8).tolist() == [0, 1, 1, 0, 0, 0, 0, 0]
    with pytest.raises(ValueError):
        weight_preset("k3", 8)
    with pytest.raises(ValueError):
        OptimizeConfig(weights=np.zeros(8)).resolved_weights(8)


def test_surround_vector_examples():
    k = gaussian_kernel(5, 1.0)
    s, c = split_center(k)
    zeros = bits_set(np.zeros(SPEC.shape))
    ones = bits_set(np.ones(SPEC.shape))
    assert np.all(surround_vector(zeros, s, 3, 4) == 0)
    np.testing.assert_allclose(surround_vector(ones, s, 3, 4), 1 - c, atol=1e-12)
    one = np.zeros(SPEC.shape)
    one[5, 4 - 1, 3 + 2] = 1  # neighbor at row offset -1, column offset +2 from (x=3, y=4)
    v = surround_vector(bits_set(one), s, 3, 4)
    # source p - o with o = (1, -2): tap index (r + 1, r - 2)
    assert v[5] == s.taps[2 + 1, 2 - 2]
    assert np.all(np.delete(v, 5) == 0)
    with pytest.raises(ValueError):
        surround_vector(ones, s, 9, 0)
    with pytest.raises(ValueError):
        surround_vector(ones, s, 0, -1)


def test_surround_plus_center_is_full_blur(rng):
    k = gaussian_kernel(7, 1.5)
    s, c = split_center(k)
    b = bits_set(rng.integers(0, 2, SPEC.shape))
    full = convolve_toroidal(b.frames.astype(float), k)
    for x, y in [(0, 0), (8, 10), (4, 5)]:
        np.testing.assert_allclose(surround_vector(b, s, x, y) + c * b.frames[:, y, x],
                                   full[:, y, x], rtol=0, atol=1e-13)


def test_spectral_difference_examples():
    g = make_patterns(PatternSpec(8, 1, 16)).frames[:, 0, 0]
    d = spectral_difference(g, np.zeros(8))
    assert d[0] == pytest.approx(4.0)
    assert abs(d[1]) == pytest.approx(2.0)
    assert np.abs(spectral_difference(g, g)).max() == 0
    with pytest.raises(ValueError):
        spectral_difference(g, np.zeros(7))


def test_threshold_examples():
    assert best_binary_threshold(dft([0.3, -0.1, 0.0, 0.2])).tolist() == [1, 0, 0, 1]
    assert best_binary_threshold(dft([-0.3, -0.1, -1.0, -0.2])).tolist() == [0, 0, 0, 0]
    b = np.array([1, 0, 1, 1, 0, 0, 1, 0])
    # zeros of b round-trip to +-1e-17, so only the set bits are unambiguous
    got = best_binary_threshold(0.2 * dft(b.astype(float)))
    assert np.all(got[b == 1] == 1)
    assert best_binary_threshold(0.2 * dft(b - 0.5)).tolist() == b.tolist()


def test_exhaustive_examples(rng):
    b = rng.integers(0, 2, 8)
    c = 0.04
    d = c * dft(b.astype(float))
    w = np.ones(8)
    got = best_binary_exhaustive(d, c, w)
    assert got.tolist() == b.tolist()
    assert weighted_cost(d, c, got, w) < 1e-25
    assert best_binary_exhaustive(np.zeros(8), c, w).tolist() == [0] * 8
    with pytest.raises(ValueError):
        best_binary_exhaustive(np.zeros(17), c, np.ones(17))


def test_exhaustive_tie_goes_to_smallest_pattern():
    # K1 weights with d = 0: every pattern with zero bin-1 content ties at cost 0
    w = weight_preset("k1", 4)
    got = best_binary_exhaustive(np.zeros(4), 1.0, w)
    assert got.tolist() == [0, 0, 0, 0]
    # bits 0 and 2 cancel in bin 1, as do 1 and 3; d = DFT(pattern 5) also ties with 0
    d = dft(np.array([1.0, 0, 1, 0]))
    assert best_binary_exhaustive(d, 1.0, w).tolist() == [0, 0, 0, 0]


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, 6, elements=st.floats(-2, 2)), st.floats(0.01, 1.0))
def test_parseval_cost(v, c):
    d = dft(v)
    for m in (0, 13, 63):
        b = all_patterns(6)[m]
        assert weighted_cost(d, c, b, np.ones(6)) == pytest.approx(
            6 * np.sum((v - c * b) ** 2), rel=1e-9, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 8, elements=st.floats(-2, 2)),
       arrays(np.float64, 8, elements=st.floats(0, 3)), st.floats(0.01, 1.0))
def test_exhaustive_dominates_threshold(v, w, c):
    if not np.any(w > 0):
        w[1] = 1.0
    d = dft(v)
    ex = weighted_cost(d, c, best_binary_exhaustive(d, c, w), w)
    th = weighted_cost(d, c, best_binary_threshold(d), w)
    assert ex <= th + 1e-12


@pytest.mark.parametrize("weights", ["all", "k1", "k12"])
def test_compiled_solver_matches_brute_force(rng, weights):
    # with a 1x1 kernel the surround vanishes and every pixel solves d = DFT(contone) alone
    spec = PatternSpec(8, 5, 4)
    contone = PatternSet(spec, rng.random(spec.shape))
    cfg = OptimizeConfig(Kernel(np.ones((1, 1))), weights, max_passes=1, seed=3)
    out, trace = optimize(contone, cfg)
    w = weight_preset(weights, 8)
    d = dft(contone.frames, axis=0)
    first = _first_pass_bits(contone, cfg)
    for y in range(spec.height):
        for x in range(spec.width):
            want = best_binary_exhaustive(d[:, y, x], 1.0, w)
            assert first[:, y, x].tolist() == want.tolist()
    if trace.best_pass == 1:
        assert np.array_equal(out.frames, first)


@pytest.mark.parametrize("weights,mode", [("all", "exhaustive"), ("k1", "exhaustive"),
                                          ("k12", "exhaustive"), ("all", "threshold")])
def test_first_pixel_matches_public_path(rng, weights, mode):
    spec = PatternSpec(8, 9, 10, "dual")
    contone = make_patterns(spec)
    k = gaussian_kernel(5, 1.0)
    seed = white_noise_dither(contone, 6)
    cfg = OptimizeConfig(k, weights, mode, max_passes=1, seed=6)
    s, c = split_center(k)
    d = spectral_difference(contone.frames[:, 0, 0], surround_vector(seed, s, 0, 0))
    w = weight_preset(weights, 8)
    want = best_binary_exhaustive(d, c, w) if mode == "exhaustive" else best_binary_threshold(d)
    first = _first_pass_bits(contone, cfg)
    assert first[:, 0, 0].tolist() == want.tolist()


def _first_pass_bits(contone, cfg):
    from binfringe import _backend
    from binfringe.phase_dbs import TIE_TOL, _symmetrized, _tables
    n = contone.n
    w = cfg.resolved_weights(n)
    bits = white_noise_dither(contone, cfg.seed).frames.copy()
    blur = np.ascontiguousarray(convolve_toroidal(bits.astype(float), cfg.kernel))
    cos_t, sin_t = _tables(n)
    g = dft(contone.frames, axis=0)
    pats = all_patterns(n)
    pow_ = np.ascontiguousarray((w * np.abs(dft(pats, axis=1)) ** 2).sum(axis=1))
    ex = cfg.mode == "exhaustive"
    _backend.phase_pixel_pass(bits, blur, np.ascontiguousarray(cfg.kernel.taps),
                              cfg.kernel.center, np.ascontiguousarray(g.real),
                              np.ascontiguousarray(g.imag), cos_t, sin_t,
                              np.ascontiguousarray(w if ex else _symmetrized(w)), pow_, ex, TIE_TOL)
    return bits


def test_blur_kept_current_during_pass(rng):
    from binfringe import _backend
    from binfringe.phase_dbs import _tables
    spec = PatternSpec(6, 7, 8)
    contone = make_patterns(spec)
    k = gaussian_kernel(5, 1.0)
    bits = white_noise_dither(contone, 1).frames.copy()
    blur = np.ascontiguousarray(convolve_toroidal(bits.astype(float), k))
    cos_t, sin_t = _tables(6)
    g = dft(contone.frames, axis=0)
    w = np.ones(6)
    pow_ = np.ascontiguousarray((w * np.abs(dft(all_patterns(6), axis=1)) ** 2).sum(axis=1))
    flips = _backend.phase_pixel_pass(bits, blur, np.ascontiguousarray(k.taps), k.center,
                                      np.ascontiguousarray(g.real), np.ascontiguousarray(g.imag),
                                      cos_t, sin_t, w, pow_, True)
    assert flips > 0
    np.testing.assert_allclose(blur, convolve_toroidal(bits.astype(float), k), atol=1e-12)


def test_optimize_trace_and_best_snapshot(small_single, k5):
    out, trace = optimize(small_single, OptimizeConfig(k5, "k1", max_passes=8, seed=2))
    assert 1 <= len(trace.passes) <= 8
    maes = [trace.seed_mae_deg] + [p.mae_deg for p in trace.passes]
    assert trace.best_pass == int(np.argmin(maes))
    assert out.is_binary
    assert min(maes) < trace.seed_mae_deg


def test_optimize_deterministic(small_dual, k5):
    cfg = OptimizeConfig(k5, "k12", max_passes=5, seed=4)
    a, ta = optimize(small_dual, cfg)
    b, tb = optimize(small_dual, cfg)
    assert np.array_equal(a.frames, b.frames)
    assert ta.to_dict() == tb.to_dict()


def test_min_flips_stops_early(small_single, k5):
    _, trace = optimize(small_single, OptimizeConfig(k5, "all", max_passes=30, min_flips=10**9))
    assert len(trace.passes) == 1


def test_optimize_rejects():
    big = make_patterns(PatternSpec(20, 4, 4))
    with pytest.raises(ValueError):
        optimize(big, OptimizeConfig(mode="exhaustive"))
    with pytest.raises(ValueError):
        optimize(white_noise_dither(make_patterns(SPEC)))
    with pytest.raises(ValueError):
        optimize(make_patterns(SPEC), OptimizeConfig(mode="annealing"))


def test_threshold_mode_runs_for_many_frames():
    contone = make_patterns(PatternSpec(20, 6, 20))
    out, trace = optimize(contone, OptimizeConfig(gaussian_kernel(5, 1.0), "k1", "threshold",
                                                  max_passes=3, seed=1))
    assert out.frames.shape == (20, 20, 6) and len(trace.passes) >= 1
