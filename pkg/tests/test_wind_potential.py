from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wtaplan.wind import (HOURS, TAU, DomainError, FitError, PotentialCurve, WindProfile,
                          energy_bound, fit_potential, flat_profile, flh, min_capacity,
                          profile_stats, scale_profile, synth_profile)

R8 = PotentialCurve(-6.34e-05, 11.44, 2655.0)
R12 = PotentialCurve(-0.0549, 13.99, 40.0)

curves = st.builds(
    lambda b, frac, p_max: PotentialCurve(-frac * b / (2 * p_max), b, p_max),
    st.floats(1.0, 20.0), st.floats(0.0, 1.0), st.floats(1.0, 1e4),
)


def normal_equations_fit(P, E):
    """Least squares for E = a P^2 + b P by the 2x2 normal equations."""
    M = np.array([[np.sum(P ** 4), np.sum(P ** 3)], [np.sum(P ** 3), np.sum(P ** 2)]])
    r = np.array([np.sum(P ** 2 * E), np.sum(P * E)])
    return np.linalg.solve(M, r)


def test_exact_quadratic_recovered():
    P = np.linspace(100, 2655, 8)
    c = fit_potential(zip(P, R8.a * P ** 2 + R8.b * P))
    assert c.a == pytest.approx(R8.a, rel=1e-9)
    assert c.b == pytest.approx(R8.b, rel=1e-12)
    assert c.p_max == 2655
    assert c.residual < 1e-8


def test_line_gives_zero_curvature():
    P = np.array([1.0, 2.0, 5.0, 9.0])
    c = fit_potential(zip(P, 11 * P))
    assert abs(c.a) < 1e-12
    assert c.b == pytest.approx(11.0)


@pytest.mark.parametrize("seed", range(5))
def test_noisy_fit_matches_normal_equations(seed):
    rng = np.random.default_rng(seed)
    P = np.sort(rng.uniform(10, 3000, 15))
    E = R8.a * P ** 2 + R8.b * P + rng.normal(0, 50, P.size)
    c = fit_potential(zip(P, E))
    a, b = normal_equations_fit(P, E)
    assert c.a == pytest.approx(a, rel=1e-7)
    assert c.b == pytest.approx(b, rel=1e-9)
    assert c.residual == pytest.approx(np.linalg.norm(a * P ** 2 + b * P - E), rel=1e-9)


@pytest.mark.parametrize("samples", [[(1, 1), (2, 2)], [(5, 50), (5, 51), (0, 0)], [(-1, 3), (2, 4), (3, 5)]])
def test_fit_rejects_degenerate_samples(samples):
    with pytest.raises(FitError):
        fit_potential(samples)


def test_paper_curve_values():
    assert energy_bound(R8, 2385) == pytest.approx(26862, rel=0.005)
    assert energy_bound(R8, 2385) == pytest.approx(26924, rel=0.005)
    assert energy_bound(R12, 40) == pytest.approx(471.76, abs=1e-9)
    assert energy_bound(R8, 0) == 0
    assert flh(R8, 2385) == pytest.approx(11.29, abs=0.005)
    assert flh(R8, 2385) * 365 > 4000


def test_domain_errors():
    with pytest.raises(DomainError):
        energy_bound(R12, 41)
    with pytest.raises(DomainError):
        energy_bound(R12, -1)
    with pytest.raises(DomainError):
        flh(R12, 0)
    with pytest.raises(DomainError):
        min_capacity(R12, 472)


@settings(max_examples=200, deadline=None)
@given(curves, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_bound_is_concave(c, u, v, lam):
    p1, p2 = u * c.p_max, v * c.p_max
    mid = energy_bound(c, lam * p1 + (1 - lam) * p2)
    assert mid >= lam * energy_bound(c, p1) + (1 - lam) * energy_bound(c, p2) - 1e-9 * (1 + mid)


@settings(max_examples=200, deadline=None)
@given(curves, st.floats(1e-6, 1), st.floats(1e-6, 1))
def test_secant_identity_and_monotone_flh(c, u, v):
    p1, p2 = sorted((u * c.p_max, v * c.p_max))
    assert energy_bound(c, p1) / p1 == pytest.approx(c.a * p1 + c.b, rel=1e-12)
    assert flh(c, p1) >= flh(c, p2) - 1e-12


@settings(max_examples=200, deadline=None)
@given(curves, st.floats(0, 1))
def test_min_capacity_inverts_bound(c, u):
    P = u * c.p_max
    E = energy_bound(c, P)
    Q = min_capacity(c, E)
    assert Q <= P * (1 + 1e-9) + 1e-9
    assert energy_bound(c, min(Q, c.p_max)) == pytest.approx(E, rel=1e-9, abs=1e-9)


def test_scale_profile():
    assert np.all(scale_profile(0.0, synth_profile(0.5, 1)) == 0)
    assert np.allclose(scale_profile(240.0, flat_profile()), 10.0)
    w = synth_profile(0.8, 3)
    out = scale_profile(1234.5, w)
    assert out.sum() * TAU == pytest.approx(1234.5, rel=1e-12)


def test_profile_stats():
    s = profile_stats(flat_profile())
    assert s.min == s.median == s.max == pytest.approx(1 / 24)
    assert s.cv == pytest.approx(0.0, abs=1e-12)
    two = WindProfile(0, np.r_[np.full(12, 1 / 12), np.zeros(12)])
    s = profile_stats(two)
    assert (s.min, s.median, s.max) == (0.0, pytest.approx(1 / 24), 1 / 12)
    assert profile_stats(synth_profile(0.9, 5)).cv > profile_stats(synth_profile(0.2, 5)).cv


def test_synth_profile_determinism_and_flat_limit():
    assert synth_profile(0.6, 42) == synth_profile(0.6, 42)
    assert np.allclose(synth_profile(0.0, 42).p, 1 / HOURS)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(0, 1), st.floats(0, 1))
def test_synth_profile_normalised_and_cv_monotone(seed, x, y):
    lo, hi = sorted((x, y))
    a, b = synth_profile(lo, seed), synth_profile(hi, seed)
    assert not a.problems() and not b.problems()
    assert a.p.sum() * TAU == pytest.approx(1.0, abs=1e-12)
    assert profile_stats(a).cv <= profile_stats(b).cv + 1e-12


def test_synth_intensity_out_of_range():
    with pytest.raises(DomainError):
        synth_profile(1.5, 0)
