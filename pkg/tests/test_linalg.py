import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhgate import linalg
from nhgate.linalg import SIGMA_X, SIGMA_Y, SIGMA_Z

finite = st.floats(-5, 5, allow_nan=False)
cplx = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


def unit_axis(draw_vec):
    v = np.asarray(draw_vec, dtype=float)
    n = np.linalg.norm(v)
    return v / n if n > 1e-3 else np.array([0.0, 0.0, 1.0])


def series_expm(m, terms=80):
    # Taylor oracle with scaling and squaring, independent of scipy
    m = np.asarray(m, dtype=complex)
    k = max(0, int(np.ceil(np.log2(max(np.abs(m).sum(), 1.0)))) + 1)
    a = m / 2 ** k
    out, term = np.eye(len(m), dtype=complex), np.eye(len(m), dtype=complex)
    for n in range(1, terms):
        term = term @ a / n
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def test_pauli_algebra():
    assert np.allclose(linalg.pauli_combine(1, 0, 0), SIGMA_X / 2)
    assert np.allclose(SIGMA_X @ SIGMA_Y, 1j * SIGMA_Z)
    for s in linalg.PAULIS:
        assert np.allclose(s @ s, np.eye(2))


def test_pauli_combine_vectorized():
    cx = np.array([1.0, 2j])
    out = linalg.pauli_combine(cx, 0, 1)
    assert out.shape == (2, 2, 2)
    assert np.allclose(out[1], (2j * SIGMA_X + SIGMA_Z) / 2)


@settings(max_examples=50, deadline=None)
@given(st.tuples(finite, finite, finite), finite, finite)
def test_su2_one_parameter_group(v, a, b):
    n = unit_axis(v)
    ua, ub = linalg.su2_exponential(a, n), linalg.su2_exponential(b, n)
    assert np.abs(ua @ ub - linalg.su2_exponential(a + b, n)).max() <= 1e-12
    assert abs(np.linalg.det(ua) - 1) <= 1e-12
    assert linalg.unitarity_residual(ua) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(st.tuples(finite, finite, finite), finite)
def test_su2_matches_series(v, a):
    n = unit_axis(v)
    gen = -1j * a * linalg.pauli_combine(*(2 * n))
    assert np.abs(series_expm(gen) - linalg.su2_exponential(a, n)).max() <= 1e-11


@settings(max_examples=40, deadline=None)
@given(st.lists(cplx, min_size=4, max_size=4))
def test_general_exponential_matches_series(entries):
    m = np.array(entries).reshape(2, 2)
    assert np.abs(series_expm(m) - linalg.general_exponential(m)).max() <= 1e-9 * max(1, np.abs(series_expm(m)).max())


@settings(max_examples=40, deadline=None)
@given(st.lists(cplx, min_size=6, max_size=6), cplx)
def test_pauli_linearity(c, k):
    c1, c2 = np.array(c[:3]), np.array(c[3:])
    lhs = linalg.pauli_combine(*(c1 + k * c2))
    rhs = linalg.pauli_combine(*c1) + k * linalg.pauli_combine(*c2)
    assert np.abs(lhs - rhs).max() <= 1e-12 * (1 + np.abs(lhs).max())


def test_su2_rejects_non_unit_axis():
    with pytest.raises(ValueError):
        linalg.su2_exponential(0.3, [1.0, 1.0, 0.0])


def test_complex_axis_exponential():
    # determinant stays one for complex axes with n.n = 1
    n = linalg.axis_from_angles(1.0 + 0.2j, 0.3 - 0.1j)
    assert abs(np.sum(n * n) - 1) < 1e-12
    u = linalg.rotation_matrix(0.7, n)
    assert abs(np.linalg.det(u) - 1) < 1e-12


def test_known_gates():
    assert np.allclose(linalg.su2_exponential(-math.pi / 2, [1, 0, 0]), 1j * SIGMA_X)
    assert np.allclose(linalg.su2_exponential(math.pi, [0, 0, 1]), -np.eye(2))


def test_gate_distance_is_phase_insensitive():
    u = linalg.su2_exponential(0.4, [0, 1, 0])
    assert linalg.gate_distance(u, np.exp(0.9j) * u) < 1e-14
    assert linalg.gate_distance(u, np.eye(2)) > 0.1


def test_as_cmatrix_validation():
    with pytest.raises(ValueError):
        linalg.as_cmatrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        linalg.as_cmatrix([[np.nan, 0], [0, 1]])


@pytest.mark.parametrize("c, expected", [
    ((0, 0, 0), np.zeros((2, 2))),
    ((2, 0, 0), SIGMA_X),
    ((0, 0, 1 - 0.4j), 0.5 * np.diag([1 - 0.4j, -1 + 0.4j])),
])
def test_pauli_combine_values(c, expected):
    assert np.allclose(linalg.pauli_combine(*c), expected, atol=0)


def test_su2_worked_values():
    assert np.array_equal(linalg.su2_exponential(0.0, [0, 1, 0]), np.eye(2))
    assert np.allclose(linalg.su2_exponential(math.pi / 2, [-1, 0, 0]), [[0, 1j], [1j, 0]], atol=1e-15)
    assert np.allclose(linalg.su2_exponential(math.pi / 2, [1, 0, 0]), [[0, -1j], [-1j, 0]], atol=1e-15)


def test_expm_worked_values(rng):
    assert np.array_equal(linalg.general_exponential(np.zeros((2, 2))), np.eye(2))
    assert np.allclose(linalg.general_exponential(np.diag([0.3, -1j])), np.diag([np.exp(0.3), np.exp(-1j)]))
    for _ in range(20):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m /= np.linalg.norm(m, 2)
        assert np.abs(linalg.general_exponential(m) - series_expm(m, terms=30)).max() <= 1e-12


def test_gate_distance_worked_values():
    eye = np.eye(2)
    assert linalg.gate_distance(eye, eye) == 0
    assert linalg.gate_distance(eye, np.exp(0.3j) * eye) < 1e-15
    assert linalg.gate_distance(eye, 1j * SIGMA_X) == pytest.approx(2.0)
