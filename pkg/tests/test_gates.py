import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhgate import gates
from nhgate.evolution import IntegratorConfig
from nhgate.linalg import SIGMA_X
from nhgate.paths import make_path

GRID = (0.01, 0.02, 0.05, 0.1, 0.2)


@pytest.mark.parametrize("phi0, name", [(math.pi, "iX"), (0.0, "-iX")])
def test_mlm_realizes_pauli_x(phi0, name):
    p = make_path("mlm", theta0=math.pi / 2, phi0=phi0, theta1=math.pi / 3)
    r = gates.realize_gate(p, IntegratorConfig(steps=10_000))
    assert r.name == name
    assert r.distance <= 1e-6
    assert np.allclose(r.target.matrix, gates.NAMED_GATES[name], atol=1e-12)


def test_step_halving():
    p = make_path("mlm", theta0=math.pi / 2, phi0=math.pi, theta1=math.pi / 3)
    coarse = gates.realize_gate(p, IntegratorConfig(steps=250)).distance
    fine = gates.realize_gate(p, IntegratorConfig(steps=500)).distance
    assert coarse / fine >= 12


def test_name_gate_is_phase_sensitive():
    assert gates.name_gate(1j * SIGMA_X) == "iX"
    assert gates.name_gate(-1j * SIGMA_X) == "-iX"
    assert gates.name_gate(np.exp(0.3j) * SIGMA_X) == "custom"


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(-3, 3), st.floats(-3, 3))
def test_build_gate_is_special_unitary(theta, phi, alpha):
    u = gates.build_gate(theta, phi, alpha).matrix
    assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-12
    assert abs(np.linalg.det(u) - 1) < 1e-12


def test_fidelity_law():
    for p in gates.robustness_sweep(math.pi / 2, 0.0, math.pi / 2, GRID):
        d = p.deviation.dphi1
        assert abs(p.f_exact - math.cos(d)) <= 1e-12
        assert abs(p.f_exact - p.f_geometric_approx) <= d ** 4


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(-3, 3), st.floats(0.1, 3.0), st.floats(-0.7, 0.7))
def test_fidelity_even_and_bounded(theta, phi, alpha, d):
    a = gates.robustness_point(theta, phi, alpha, d).f_exact
    b = gates.robustness_point(theta, phi, alpha, -d).f_exact
    assert a <= 1 + 1e-15
    assert abs(a - b) <= 1e-12


def test_fidelity_validation():
    with pytest.raises(ValueError):
        gates.gate_fidelity(np.zeros((2, 2)), np.eye(2))
    with pytest.raises(ValueError):
        gates.DeviationSpec(1.0)


def test_geometric_beats_holonomic_at_pi_over_3():
    pts = gates.robustness_sweep(math.pi / 3, 0.0, math.pi / 2, GRID)
    assert all(p.f_geometric_approx > p.f_holonomic_ref for p in pts)


@pytest.mark.parametrize("d", GRID)
def test_real_deviation_leaves_amplitudes(d):
    p = make_path("circle", theta0=math.pi / 2)
    _, rep = gates.apply_polar_deviation(p, gates.DeviationSpec(d))
    assert rep.detuning_residual <= 1e-12
    assert rep.rabi1_residual <= 1e-12
    assert rep.rabi2_residual <= 1e-12
    live = ~np.isnan(rep.phase1_shift)
    assert np.allclose(rep.phase1_shift[live], d, atol=1e-12)


@pytest.mark.parametrize("beta, gamma", [(0.1, 0.0), (0.1, 0.05), (0.3, 0.1)])
def test_complex_deviation_invariant(beta, gamma):
    p = make_path("complex-circle", theta0=math.pi / 2, beta=beta, gamma=gamma)
    _, rep = gates.apply_polar_deviation(p, gates.DeviationSpec(0.05, 0.02))
    assert rep.invariant_residual <= 1e-10


def test_sweep_csv():
    import io
    buf = io.StringIO()
    gates.write_sweep_csv(gates.robustness_sweep(1.0, 0.0, 1.0, []), buf)
    assert buf.getvalue() == ",".join(gates.RobustnessPoint.CSV_COLUMNS) + "\n"


@pytest.mark.parametrize("angles, name", [((math.pi / 2, math.pi, math.pi / 2), "iX"),
                                          ((math.pi / 2, 0.0, math.pi / 2), "-iX"),
                                          ((1.3, 0.4, 0.0), "I")])
def test_build_gate_worked_values(angles, name):
    assert gates.name_gate(gates.build_gate(*angles).matrix, tol=1e-12) == name


def test_fidelity_worked_values():
    u = gates.build_gate(1.0, 0.2, 0.7).matrix
    assert gates.gate_fidelity(u, u) == pytest.approx(1.0)
    assert gates.gate_fidelity(1j * SIGMA_X, np.eye(2)) == pytest.approx(0.0, abs=1e-15)
    p = gates.robustness_point(math.pi / 2, 0.0, math.pi / 2, 0.1)
    assert p.f_exact == pytest.approx(0.9950042, abs=1e-7)
    assert p.f_geometric_approx == pytest.approx(0.995)


def test_zero_deviation_row():
    (p,) = gates.robustness_sweep(0.8, 0.1, 1.1, [0.0])
    assert (p.f_exact, p.f_geometric_approx, p.f_dynamical_ref, p.f_holonomic_ref) == pytest.approx((1, 1, 1, 1))
    _, rep = gates.apply_polar_deviation(make_path("circle", theta0=1.0), gates.DeviationSpec())
    assert rep.invariant_residual == 0 and rep.rabi1_residual == 0


def test_remainder_constant_is_stable():
    ds = np.geomspace(0.01, 0.1, 6)
    c = [abs(p.f_exact - p.f_geometric_approx) / p.deviation.dphi1 ** 4
         for p in gates.robustness_sweep(math.pi / 2, 0.0, math.pi / 2, ds)]
    assert max(c) / min(c) < 1.01
    assert max(c) <= 1


def test_unrelated_drives_differ():
    from nhgate.pulses import extract_physical, synthesize_pulses
    a = extract_physical(synthesize_pulses(make_path("complex-circle", theta0=1.0, beta=0.1)))
    b = extract_physical(synthesize_pulses(make_path("complex-circle", theta0=2.0, beta=0.2)))
    assert gates.deviation_invariant(a, b).max() > 0
