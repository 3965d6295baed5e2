import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from offres.fisher import (
    dsigma_dtheta,
    fd_admissible,
    fisher_closed,
    fisher_finite_difference,
    fisher_generic,
    fisher_on_resonance,
    fisher_point,
)
from offres.schemes import Detuning, DrivingKind, DrivingScheme

from conftest import FROZEN

LAM = 2 / math.pi


def test_dsigma_examples():
    assert dsigma_dtheta(DrivingScheme.of("constant"), Detuning(0.75), 3.0) == pytest.approx(1.25)
    assert abs(dsigma_dtheta(DrivingScheme.of("osc"), Detuning(0.0), math.pi ** 2 / 4)) < 1e-15
    assert dsigma_dtheta(DrivingScheme.of("pld"), Detuning(0.0), math.pi / 2) == pytest.approx(0.25)


def test_dsigma_matches_numeric_derivative(scheme, det):
    from offres.schemes import sigma
    t = np.linspace(0.1, 2.0, 7)
    h = 1e-6
    numeric = (np.asarray(sigma(scheme, det, t + h)) - np.asarray(sigma(scheme, det, t - h))) / (2 * h)
    np.testing.assert_allclose(dsigma_dtheta(scheme, det, t), numeric, rtol=1e-8, atol=1e-9)


def test_constant_on_resonance_is_four():
    t = np.linspace(0, 20, 101)
    np.testing.assert_array_equal(fisher_closed(DrivingScheme.of("constant"), Detuning(0.0), t), 4.0)
    np.testing.assert_allclose(fisher_generic(DrivingScheme.of("constant"), Detuning(0.0), t), 4.0, rtol=1e-12)


def test_constant_off_resonance_at_origin():
    assert fisher_closed(DrivingScheme.of("constant"), Detuning(0.5), 0.0) == pytest.approx(4.0, rel=1e-15)
    assert fisher_generic(DrivingScheme.of("constant"), Detuning(0.5), 0.0) == pytest.approx(4.0, rel=1e-15)


def test_on_resonance_reductions(scheme):
    t = np.linspace(0, 2 * math.pi, 200)
    closed = fisher_closed(scheme, Detuning(0.0), t)
    np.testing.assert_array_equal(closed, fisher_on_resonance(scheme, t))
    env = {"constant": np.ones_like(t), "oscillatory": np.cos(LAM * t) ** 2,
           "power-law-decay": (1 + LAM * t) ** -4.0, "exponential-decay": np.exp(-2 * LAM * t)}[scheme.kind.value]
    np.testing.assert_allclose(closed, 4 * env, rtol=1e-14, atol=1e-300)


def test_power_law_quarter_value():
    assert fisher_on_resonance(DrivingScheme.of("pld"), math.pi / 2) == pytest.approx(0.25, rel=1e-15)


def test_removable_limit_is_flagged():
    # Σ = π/2 on resonance: p₁ = 0 exactly
    pt = fisher_point(DrivingScheme.of("constant"), Detuning(0.0), math.pi / 2)
    assert pt.value == pytest.approx(4.0)
    assert pt.removable_limit
    assert not fisher_point(DrivingScheme.of("constant"), Detuning(0.0), 0.3).removable_limit


def test_vanishes_with_envelope():
    assert fisher_closed(DrivingScheme.of("osc"), Detuning(0.5), math.pi ** 2 / 4) < 1e-30


def test_closed_matches_generic_on_admissible_grid(scheme, det):
    t = np.linspace(0.001, 2 * math.pi, 1000)
    t = t[fd_admissible(scheme, det, t)]
    closed = np.asarray(fisher_closed(scheme, det, t))
    generic = np.asarray(fisher_generic(scheme, det, t))
    np.testing.assert_allclose(generic, closed, rtol=1e-8)


def test_matches_frozen_high_precision_values():
    for kind, beta0, t, f in FROZEN["fisher"]:
        s = DrivingScheme.of(kind)
        assert fisher_closed(s, Detuning(beta0), t) == pytest.approx(float(f), rel=1e-12), (kind, beta0, t)


def test_finite_difference_excluded_points_are_the_ill_conditioned_ones():
    s = DrivingScheme.of("osc")
    d = Detuning(0.0)
    # λθ → π/2: p₁ → 0 and ṗ₀ → 0 together
    assert not fd_admissible(s, d, math.pi ** 2 / 4 - 1e-4)
    assert fd_admissible(s, d, 1.0)
    assert not fd_admissible(DrivingScheme.of("constant"), Detuning(0.5), 0.0)


@given(st.sampled_from(list(DrivingKind)), st.floats(0.0, 3.0), st.floats(0.0, 8.0))
@settings(max_examples=300, deadline=None)
def test_nonnegative_and_finite(kind, beta0, theta):
    s = DrivingScheme.of(kind)
    for f in (fisher_closed, fisher_generic):
        v = f(s, Detuning(beta0), theta)
        assert math.isfinite(v) and v >= 0


@given(st.sampled_from(list(DrivingKind)), st.floats(0.0, 1.0), st.floats(0.05, 6.0))
@settings(max_examples=200, deadline=None)
def test_bounded_by_on_resonance_rate(kind, beta0, theta):
    # F ≤ 4(Γ/ħ)² envelope² with equality on resonance
    s = DrivingScheme.of(kind)
    bound = fisher_on_resonance(s, theta)
    assert fisher_closed(s, Detuning(beta0), theta) <= bound * (1 + 1e-12) + 1e-300


def test_finite_difference_uses_probabilities_only(scheme):
    t = np.array([0.37, 0.91])
    d = Detuning(0.5)
    np.testing.assert_allclose(fisher_finite_difference(scheme, d, t), fisher_closed(scheme, d, t), rtol=1e-6)
