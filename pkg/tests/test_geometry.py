import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhgate import geometry
from nhgate.paths import make_path, reparametrize

# 30-digit quadrature oracle (tests/oracles/phase_oracle.py)
ORACLE_CC_THETA1_BETA03 = 1.4153820751784947
ORACLE_CMLM = 1.567849293545675


@pytest.mark.parametrize("theta0", [math.pi / 6, math.pi / 2, 2 * math.pi / 3, 0.3, 2.9])
def test_cap_formula_all_routes(theta0):
    p = make_path("circle", theta0=theta0)
    for r in geometry.all_routes(p):
        assert r.alpha_minus == pytest.approx(math.pi * (1 - math.cos(theta0)), abs=1e-9)
        assert r.alpha_plus == -r.alpha_minus


@pytest.mark.parametrize("params, expected", [
    (dict(family="complex-circle", theta0=1.0, beta=0.3), ORACLE_CC_THETA1_BETA03),
    (dict(family="complex-mlm", theta0=1.2, phi0=0.4, theta1=math.pi / 3, beta=0.1, gamma=0.05), ORACLE_CMLM),
])
def test_complex_loops_against_oracle(params, expected):
    p = make_path(params.pop("family"), **params)
    for r in geometry.all_routes(p):
        assert r.alpha_minus == pytest.approx(expected, abs=1e-12)


def test_mlm_phase_closed_form():
    th1 = math.pi / 3
    p = make_path("mlm", theta0=math.pi / 2, phi0=math.pi, theta1=th1)
    assert geometry.phase_time_integral(p).alpha_minus == pytest.approx(2 * math.pi * math.sin(th1 / 2) ** 2, abs=1e-12)


def test_winding_reverses_sign():
    a = geometry.phase_time_integral(make_path("circle", theta0=1.0)).alpha_minus
    b = geometry.phase_time_integral(make_path("circle", theta0=1.0, winding=-1)).alpha_minus
    assert a == pytest.approx(-b, abs=1e-12)


def test_pole_handling():
    p = make_path("circle", theta0=0.0)
    with pytest.raises(geometry.ConnectionSingularityError):
        geometry.phase_line_integral(p)
    r = geometry.phase_line_integral(p, fallback=True)
    assert r.alpha_minus == pytest.approx(0.0, abs=1e-15)
    assert "fallback" in r.note
    assert geometry.solid_angle(make_path("circle", theta0=math.pi)).omega == pytest.approx(4 * math.pi)


def test_connection_pole_raises():
    with pytest.raises(geometry.ConnectionSingularityError):
        geometry.connection_at(0.0, 0.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 2.9), st.floats(-0.4, 0.4), st.floats(-3, 3), st.floats(-0.4, 0.4))
def test_connection_matches_inner_product(tr, ti, pr, pi_):
    th, ph = complex(tr, ti), complex(pr, pi_)
    a = geometry.connection_at(th, ph)
    b = geometry.connection_from_states(th, ph)
    assert abs(a.a_phi - b.a_phi) < 1e-12
    assert abs(b.a_theta) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 2.9), st.floats(-0.4, 0.4), st.floats(-3, 3))
def test_curvature_is_minus_half(tr, ti, ph):
    assert abs(geometry.curvature_at(complex(tr, ti), ph) + 0.5) < 1e-12
    assert abs(geometry.curvature_numeric(complex(tr, ti), ph) + 0.5) < 1e-6


@pytest.mark.parametrize("chi", [
    lambda th, ph: 0.3 * np.sin(th) * np.cos(ph),
    lambda th, ph: np.cos(th) ** 2 + 0.1 * np.sin(2 * ph),
])
@pytest.mark.parametrize("family", ["circle", "complex-mlm"])
def test_gauge_invariance(family_paths, family, chi):
    rep = geometry.gauge_invariance_check(family_paths[family], chi)
    assert rep.delta <= 1e-9
    assert rep.curvature_shift < 1e-6


def test_multivalued_gauge_rejected(family_paths):
    with pytest.raises(ValueError, match="single valued"):
        geometry.gauge_invariance_check(family_paths["circle"], lambda th, ph: ph)


@pytest.mark.parametrize("name", ["circle", "mlm", "complex-circle", "complex-mlm"])
def test_rate_independence(family_paths, name):
    p = family_paths[name]
    a = [r.alpha_minus for r in geometry.all_routes(p)]
    b = [r.alpha_minus for r in geometry.all_routes(reparametrize(p))]
    assert np.abs(np.array(a) - np.array(b)).max() <= 1e-9


def test_open_loop_rejected():
    from nhgate.paths import ComplexAnglePath, Segment
    half = Segment(0.0, 1.0, lambda s: 1.0 + 0 * s, lambda s: math.pi * s, lambda s: 0 * s, lambda s: math.pi + 0 * s)
    with pytest.raises(ValueError):
        geometry.phase_time_integral(ComplexAnglePath("open", {}, (half,)))


@pytest.mark.parametrize("theta", [1e-3, 1e-5])
def test_connection_vanishes_at_north_pole(theta):
    assert geometry.connection_at(theta, 0.0).a_phi == pytest.approx(-theta / 4, rel=1e-5)


def test_connection_equator():
    assert geometry.connection_at(math.pi / 2, 0.3).a_phi == pytest.approx(-0.5)


def test_two_thirds_pi_cap():
    r = geometry.phase_time_integral(make_path("circle", theta0=2 * math.pi / 3))
    assert r.alpha_minus == pytest.approx(3 * math.pi / 2, abs=1e-12)


def test_line_integral_sign_and_zero_loop():
    r = geometry.phase_line_integral(make_path("circle", theta0=math.pi / 2))
    assert r.alpha_plus == pytest.approx(-math.pi, abs=1e-12)
    from nhgate.paths import ComplexAnglePath, Segment
    point = Segment(0.0, 1.0, lambda s: 1.0 + 0 * s, lambda s: 0.5 + 0 * s, lambda s: 0 * s, lambda s: 0 * s)
    assert geometry.phase_line_integral(ComplexAnglePath("point", {}, (point,))).alpha_minus == 0


def test_solid_angle_values():
    assert geometry.solid_angle(make_path("circle", theta0=math.pi / 2)).omega == pytest.approx(2 * math.pi)
    cc = make_path("complex-circle", theta0=math.pi / 2, beta=0.1)
    sa = geometry.solid_angle(cc)
    assert abs(sa.omega_complex.imag) > 1e-3
    assert -sa.omega / 2 == pytest.approx(geometry.phase_time_integral(cc).alpha_plus, abs=1e-9)


def test_great_circle_through_poles_falls_back():
    from nhgate.paths import ComplexAnglePath, Segment
    # a meridian loop: theta runs 0 -> pi -> 0 at fixed phi
    seg = Segment(0.0, 1.0, lambda s: math.pi * np.sin(np.pi * s) ** 2, lambda s: 0 * s,
                  lambda s: math.pi ** 2 * np.sin(2 * np.pi * s), lambda s: 0 * s)
    r = geometry.all_routes(ComplexAnglePath("meridian", {}, (seg,)))
    assert all(abs(x.alpha_minus) < 1e-15 for x in r)
    assert "fallback" in r[2].note


def test_constant_gauge_is_exact(family_paths):
    assert geometry.gauge_invariance_check(family_paths["circle"], lambda th, ph: 0 * th + 3.0).delta == 0
