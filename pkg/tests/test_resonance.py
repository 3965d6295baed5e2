import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from offres.errors import InvalidArgumentError, NoResonanceError
from offres.resonance import (
    CGS,
    ClassicalOscillator,
    TwoLevelStatic,
    classical_resonance_curve,
    classical_resonant_frequency,
    field_conversion,
    fields_from_magnetic,
    larmor_frequency,
    quantum_resonance_curve,
    quantum_resonant_frequency,
    static_beta0,
)

from conftest import FROZEN


def test_classical_divergence_and_decay():
    osc = ClassicalOscillator(1.0, 0.0, 4.0)
    assert math.isinf(classical_resonance_curve(osc, 2.0))
    g = np.array([10.0, 100.0, 1000.0])
    vals = classical_resonance_curve(ClassicalOscillator(1.0, 1.0, 1.0), g)
    assert np.all(np.diff(vals) < 0) and vals[-1] < 1e-5


def test_classical_frequency():
    assert classical_resonant_frequency(ClassicalOscillator(2.0, 0.0, 8.0)) == 2.0
    osc = ClassicalOscillator(1.0, 1.0, 1.0)
    assert classical_resonant_frequency(osc) == pytest.approx(float(FROZEN["scalars"]["classical_peak_m1_k1_damping1"]))
    with pytest.raises(NoResonanceError):
        classical_resonant_frequency(ClassicalOscillator(1.0, 2.0, 1.0))


def test_classical_argmax_within_one_step():
    osc = ClassicalOscillator(1.0, 1.0, 1.0)
    g = np.linspace(0.01, 2.0, 10_000)
    peak = g[np.argmax(classical_resonance_curve(osc, g))]
    assert abs(peak - classical_resonant_frequency(osc)) <= g[1] - g[0]


def test_oscillator_validation():
    with pytest.raises(InvalidArgumentError):
        ClassicalOscillator(0.0, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        classical_resonance_curve(ClassicalOscillator(1.0, 1.0, 1.0), 0.0)


def test_quantum_lorentzian():
    sys = TwoLevelStatic(0.5, 2.0, 0.3, 1.0)
    w21 = quantum_resonant_frequency(sys)
    assert w21 == 1.5
    assert quantum_resonance_curve(sys, w21) == 1.0
    for sign in (-1, 1):
        assert quantum_resonance_curve(sys, w21 + sign * 2 * 0.3) == pytest.approx(0.5, abs=1e-15)
    assert quantum_resonance_curve(sys, 1e12) < 1e-20
    assert quantum_resonant_frequency(TwoLevelStatic(0.0, 1.0, 1.0)) == 1.0
    with pytest.raises(InvalidArgumentError):
        TwoLevelStatic(1.0, 1.0, 1.0)


@given(st.floats(-50, 50))
@settings(max_examples=100, deadline=None)
def test_quantum_curve_is_even(d):
    sys = TwoLevelStatic(0.0, 3.0, 0.7, 1.3)
    w = sys.omega21
    assert quantum_resonance_curve(sys, w + d) == pytest.approx(quantum_resonance_curve(sys, w - d), rel=1e-12)


def test_static_beta0():
    m, c, e = 2.0, 3.0, 0.5
    w_L = larmor_frequency(4.0, m, c, e)
    assert static_beta0(m, c, e, 1.0, 4.0, w_L) == 0.0
    assert static_beta0(m, c, e, 1.5, 0.0, 2.0) == pytest.approx(m * c * 2.0 / (e * 1.5))
    assert static_beta0(m, c, e, 2.0, 1.0, 5.0) == pytest.approx(0.5 * static_beta0(m, c, e, 1.0, 1.0, 5.0))
    with pytest.raises(ZeroDivisionError):
        static_beta0(m, c, e, 0.0, 1.0, 1.0)


def test_field_conversion_round_trip():
    assert all(np.all(b == 0) for b in field_conversion(0.0, 0.0, 0.0))
    rng = np.random.default_rng(3)
    w = rng.normal(size=(3, 50)) * 1e-20
    back = fields_from_magnetic(*field_conversion(*w))
    for a, b in zip(back, w):
        assert np.all(np.abs(a - b) <= 2 * np.spacing(np.abs(b)))


def test_transverse_intensity():
    rng = np.random.default_rng(4)
    wx, wy = rng.normal(size=(2, 20))
    bx, by, _ = field_conversion(wx, wy, 0.0)
    k = 2 * CGS["m"] * CGS["c"] / (abs(CGS["e"]) * CGS["hbar"])
    np.testing.assert_allclose(np.hypot(bx, by), k * np.hypot(wx, wy), rtol=1e-14)
