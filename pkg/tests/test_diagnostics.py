import math

import numpy as np
import pytest

from warpbank import (Explicit, GridSpec, NoConvergence, Painless, build_bank,
                      decay_check, design_tight, diagonal_bounds,
                      empirical_bounds, format_report, frame_report,
                      make_warping, named_window, power_iteration,
                      sufficient_bounds, tightness_sweep, with_scaled_factors)

HANN = named_window("hann", 3.0)


@pytest.fixture(scope="module")
def erb_tight():
    w = make_warping("erblike")
    grid = GridSpec(length=1024, fs=44100.0, domain=w.domain)
    return design_tight(w, grid, "hann", 3.0)


@pytest.fixture(scope="module")
def erb_doubled(erb_tight):
    return with_scaled_factors(erb_tight, 2)


@pytest.fixture(scope="module")
def gapped_bank():
    w = make_warping("erblike")
    grid = GridSpec(length=1024, fs=44100.0, domain=w.domain)
    base = build_bank(w, HANN, grid, Painless())
    factors = {ch.m: ch.a for ch in base.channels if abs(ch.m) > 2}
    return build_bank(w, HANN, grid, Explicit(factors), check_coverage=False)


def test_diagonal_bounds_tight(erb_tight):
    lo, hi = diagonal_bounds(erb_tight)
    assert abs(lo - 1.0) <= 1e-12 and abs(hi - 1.0) <= 1e-12


def test_diagonal_bounds_unnormalized_full_line():
    w = make_warping("erblike")
    grid = GridSpec(length=1024, fs=44100.0, domain=w.domain)
    bank = build_bank(w, HANN, grid, Painless())
    lo, hi = diagonal_bounds(bank)
    assert hi - lo <= 1e-12
    assert abs(lo - 9.0 / 8.0) <= 1e-12


def test_diagonal_bounds_half_line_residuals_pin_one():
    w = make_warping("log")
    grid = GridSpec(length=1024, fs=2.0, domain=w.domain)
    bank = build_bank(w, HANN, grid, Painless())
    lo, hi = diagonal_bounds(bank)
    assert lo == 1.0  # residual bins contribute exactly one
    assert abs(hi - 9.0 / 8.0) <= 1e-12


def test_sufficient_bounds_collapse_to_diagonal_when_painless(erb_tight):
    a_suff, b_suff = sufficient_bounds(erb_tight)
    lo, hi = diagonal_bounds(erb_tight)
    assert abs(a_suff - lo) <= 1e-10
    assert abs(b_suff - hi) <= 1e-10


def test_sufficient_bounds_sandwich_empirical(erb_doubled):
    assert not erb_doubled.painless
    a_suff, b_suff = sufficient_bounds(erb_doubled)
    a_emp, b_emp = empirical_bounds(erb_doubled)
    assert 0.0 < a_suff <= a_emp + 1e-12
    assert a_emp <= b_emp
    assert b_emp <= b_suff + 1e-12
    assert a_emp < 1.0 - 1e-3 < 1.0 + 1e-3 < b_emp


def test_empirical_bounds_painless_fast_path(erb_tight):
    assert empirical_bounds(erb_tight) == diagonal_bounds(erb_tight)


def test_power_iteration_known_spectrum():
    d = np.linspace(0.5, 2.0, 64)
    lam, vec, converged = power_iteration(lambda v: d * v, 64,
                                          tol=1e-10, max_iter=20000)
    assert converged
    assert abs(lam - 2.0) <= 1e-7
    assert abs(abs(vec[-1]) - 1.0) <= 1e-5


def test_power_iteration_zero_operator():
    lam, _, converged = power_iteration(lambda v: 0.0 * v, 16)
    assert lam == 0.0 and converged


def test_power_iteration_warns_when_stuck():
    d = np.linspace(0.5, 2.0, 64)
    with pytest.warns(NoConvergence):
        lam, _, converged = power_iteration(lambda v: d * v, 64,
                                            tol=1e-14, max_iter=2)
    assert not converged
    assert 0.0 < lam < 2.5


def test_frame_report_tight(erb_tight):
    rep = frame_report(erb_tight)
    assert rep.painless and all(rep.channel_painless)
    assert rep.conclusive
    assert rep.warnings == []
    assert abs(rep.a_emp - 1.0) <= 1e-8 and abs(rep.b_emp - 1.0) <= 1e-8
    assert abs(rep.tightness_ratio - 1.0) <= 1e-8
    assert abs(rep.a_suff - 1.0) <= 1e-10


def test_frame_report_flags_coverage_hole(gapped_bank):
    rep = frame_report(gapped_bank)
    assert rep.diag_inf == 0.0
    assert not rep.conclusive
    assert rep.tightness_ratio == math.inf
    assert any("coverage" in w for w in rep.warnings)
    assert any("inconclusive" in w for w in rep.warnings)


def test_frame_report_collects_convergence_and_painless_notes(erb_doubled):
    rep = frame_report(erb_doubled, max_iter=2)
    assert not rep.painless
    assert any("did not stagnate" in w for w in rep.warnings)
    assert any("non-painless" in w for w in rep.warnings)


def test_tightness_sweep_degrades_monotonically(erb_tight):
    rows = tightness_sweep(erb_tight, scales=(1, 2, 4), tol=1e-6)
    assert [s for s, _ in rows] == [1, 2, 4]
    ratios = [r for _, r in rows]
    assert abs(ratios[0] - 1.0) <= 1e-8
    assert ratios[0] <= ratios[1] <= ratios[2]
    assert ratios[1] > 1.0 + 1e-3


def test_decay_check_compact_support():
    res = decay_check(HANN)
    assert res["verdict"] == "satisfied"
    assert res["reason"] == "compact support"
    assert res["exponent"] == math.inf


def test_decay_check_measured_exponents():
    good = decay_check(lambda t: (1.0 + np.abs(t)) ** -2.0)
    assert good["verdict"] == "satisfied"
    assert abs(good["exponent"] - 2.0) <= 1e-6

    bad = decay_check(lambda t: (1.0 + np.abs(t)) ** -1.0)
    assert bad["verdict"] == "violated"
    assert abs(bad["exponent"] - 1.0) <= 1e-6


def test_decay_check_warped_exponent_is_advisory():
    res = decay_check(lambda t: (1.0 + np.abs(t)) ** -2.0,
                      warping=make_warping("log"))
    assert res["verdict"] == "satisfied"
    assert math.isfinite(res["exponent_warped"])
    assert res["exponent_warped"] > 0.0


def test_decay_check_vanishing_probe_and_bad_eps():
    res = decay_check(lambda t: np.zeros_like(np.asarray(t, dtype=float)))
    assert res["verdict"] == "satisfied"
    assert "vanishes" in res["reason"]
    with pytest.raises(ValueError):
        decay_check(HANN, eps=0.0)


def test_format_report_round_trip(erb_tight, gapped_bank):
    text = format_report(frame_report(erb_tight))
    assert "painless: true" in text
    assert "warnings: none" in text
    assert "tightness_ratio: 1" in text

    text = format_report(frame_report(gapped_bank))
    assert "(inconclusive)" in text
    assert "warnings:\n" in text
    assert "  - " in text
