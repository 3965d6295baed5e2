import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from offres.errors import InvalidArgumentError
from offres.geodesic import geodesic_speed
from offres.robustness import (
    CHALLENGERS,
    beta0_bound_for_fidelity,
    robustness_coefficient,
    scan_outperformance_region,
    speed_pair,
    v_off,
    v_on,
)
from offres.schemes import Detuning, DrivingKind, DrivingScheme

from conftest import REFERENCE

K = DrivingKind


def test_v_on_examples():
    assert v_on(DrivingScheme.of("constant"), 0.0) == 1.0
    assert v_on(DrivingScheme.of("constant"), 5.0) == 1.0
    assert v_on(DrivingScheme.of("osc"), math.pi ** 2 / 4) < 1e-15
    assert v_on(DrivingScheme.of("exp"), 0.0) == 1.0
    assert v_on(DrivingScheme.of("pld"), math.pi / 2, 2.0) == pytest.approx(0.5)


def test_v_off_at_origin_is_one(scheme, det):
    assert v_off(scheme, det, 0.0) == 1.0


def test_v_off_collapses_on_resonance(scheme):
    t = np.linspace(0, 2 * math.pi, 300)
    np.testing.assert_array_equal(v_off(scheme, Detuning(0.0), t, 1.3), v_on(scheme, t, 1.3))


def test_v_off_identical_to_line_element_speed(scheme):
    rng = np.random.default_rng(7)
    for b in rng.uniform(0, 1, 10):
        d = Detuning(float(b))
        for t, td in zip(rng.uniform(0, 2 * math.pi, 40), rng.uniform(-3, 3, 40)):
            assert v_off(scheme, d, float(t), float(td)) == geodesic_speed(scheme, d, float(t), float(td))


def test_robustness_on_resonance_is_one(scheme):
    t = np.linspace(0, 2, 50)
    np.testing.assert_array_equal(robustness_coefficient(scheme, Detuning(0.0), t), 1.0)


def test_undefined_ratio_at_envelope_zero():
    assert math.isnan(robustness_coefficient(DrivingScheme.of("osc"), Detuning(0.3), math.pi ** 2 / 4))


def test_speed_pair():
    sp = speed_pair(DrivingScheme.of("pld"), Detuning(0.5), 1.0)
    assert sp.r == pytest.approx(sp.v_off / sp.v_on, rel=1e-15)


def test_fidelity_bound():
    assert beta0_bound_for_fidelity(REFERENCE["p_min"]) == pytest.approx(REFERENCE["beta0_bound"], rel=1e-14)
    assert beta0_bound_for_fidelity(1.0) == 0.0
    assert beta0_bound_for_fidelity(0.5) == pytest.approx(1.0)
    for bad in (0.0, 1.5, -0.2):
        with pytest.raises(InvalidArgumentError):
            beta0_bound_for_fidelity(bad)


def test_slowdown_grid_for_oscillatory_and_power_law():
    b = np.linspace(0, 1, 201)[1:]
    t = np.linspace(0, 2 * math.pi, 201)[1:]
    for kind in (K.OSCILLATORY, K.POWER_LAW):
        s = DrivingScheme.of(kind)
        on = np.asarray(v_on(s, t))
        for bb in b:
            off = np.asarray(v_off(s, Detuning(float(bb)), t))
            r = np.asarray(robustness_coefficient(s, Detuning(float(bb)), t))
            assert np.all(off <= on)
            live = ~np.isnan(r)
            assert np.all((r[live] >= 0) & (r[live] < 1))


@given(st.sampled_from(list(DrivingKind)), st.floats(0.0, 2.0), st.floats(0.0, 10.0))
@settings(max_examples=300, deadline=None)
def test_ratio_in_unit_interval(kind, beta0, theta0):
    r = robustness_coefficient(DrivingScheme.of(kind), Detuning(beta0), theta0)
    assert math.isnan(r) or 0.0 <= r <= 1.0


@pytest.fixture(scope="module")
def region():
    return scan_outperformance_region()


def test_region_axes_and_clip(region):
    assert region.shape == (200, 200)
    assert region.beta0_axis[0] == 0.0
    assert region.beta0_axis[-1] == pytest.approx(0.2)
    assert np.all(np.diff(region.beta0_axis) > 0) and np.all(np.diff(region.theta0_axis) > 0)
    clipped = scan_outperformance_region((0.0, 0.5), resolution=5)
    assert clipped.beta0_axis[-1] == pytest.approx(0.2)


def test_region_nesting_and_ordering(region):
    live = ~region.excluded
    pld, exp, osc = (region.dominates[k] for k in (K.POWER_LAW, K.EXPONENTIAL, K.OSCILLATORY))
    assert not np.any(pld & ~exp)
    assert not np.any(exp & ~osc)
    assert np.all((region.r[K.POWER_LAW] >= region.r[K.EXPONENTIAL])[live])
    assert np.all((region.r[K.EXPONENTIAL] >= region.r[K.OSCILLATORY])[live])
    assert pld.sum() < exp.sum() < osc.sum()


def test_resonant_row_has_no_strict_winner(region):
    row = 0
    for k in CHALLENGERS:
        faster = region.v_off[k][row] > region.v_off[K.CONSTANT][row]
        assert not faster.any()
        # only θ₀ = 0, where every speed ties, counts as (non-strict) domination
        assert region.dominates[k][row].sum() == 1 and region.dominates[k][row, 0]


def test_flags_recomputable(region):
    for k in CHALLENGERS:
        np.testing.assert_array_equal(region.recompute_flags(k) & ~region.excluded, region.dominates[k])


def test_excluded_cells_where_oscillatory_speed_vanishes():
    g = scan_outperformance_region((0.0, 0.2), (0.0, 2 * math.pi), (3, 9))
    col = np.argmin(np.abs(g.theta0_axis - math.pi ** 2 / 4))
    assert not g.excluded.any() or g.excluded[:, col].all()
    g = scan_outperformance_region((0.0, 0.2), (math.pi ** 2 / 4, 3.0), (3, 2))
    assert g.excluded[:, 0].all() and not g.excluded[:, 1].any()
    assert not any(g.dominates[k][:, 0].any() for k in CHALLENGERS)


def test_region_serialisation():
    g = scan_outperformance_region(resolution=(3, 4))
    rows = list(csv.reader(io.StringIO(g.to_csv())))
    assert len(rows) == 1 + 12 and len(rows[0]) == 2 + 4 + 4 + 3 + 1
    assert rows[0][0] == "beta0" and rows[0][-1] == "excluded"
    payload = json.loads(g.to_json())
    assert len(payload["v_off"]["constant"]) == 3
    assert g.to_csv() == scan_outperformance_region(resolution=(3, 4)).to_csv()


def test_bad_ranges():
    with pytest.raises(InvalidArgumentError):
        scan_outperformance_region((0.3, 0.5))
    with pytest.raises(InvalidArgumentError):
        scan_outperformance_region(theta0_range=(1.0, 1.0))
    with pytest.raises(InvalidArgumentError):
        scan_outperformance_region(resolution=0)
