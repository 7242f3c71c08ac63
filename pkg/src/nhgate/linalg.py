"""Small dense complex algebra: Pauli matrices, SU(2) rotations and gate distances.

Matrices are plain ``numpy`` ``complex128`` arrays. Everything here is tiny
(dimension 2, 3, 4 or 9), so there is no attempt at sparse or batched
specialisation beyond what numpy broadcasting gives for free.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

AXIS_TOL = 1e-12


def as_cmatrix(m) -> np.ndarray:
    """Return ``m`` as a finite square complex array, raising otherwise."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def as_cvector(v) -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1:
        raise ValueError(f"expected a vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector has non-finite entries")
    return a


def pauli_combine(cx, cy, cz) -> np.ndarray:
    """Return ``(cx*X + cy*Y + cz*Z) / 2``.

    The coefficients may be complex scalars or equal-shape arrays; array input
    gives a stack of matrices with shape ``(..., 2, 2)``.
    """
    cx, cy, cz = np.broadcast_arrays(
        np.asarray(cx, dtype=complex), np.asarray(cy, dtype=complex), np.asarray(cz, dtype=complex)
    )
    out = np.empty(cx.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 0.5 * cz
    out[..., 0, 1] = 0.5 * (cx - 1j * cy)
    out[..., 1, 0] = 0.5 * (cx + 1j * cy)
    out[..., 1, 1] = -0.5 * cz
    return out


def axis_from_angles(theta: float, phi) -> np.ndarray:
    """Bloch vector ``(sin t cos p, sin t sin p, cos t)``; complex ``phi`` gives a complex axis."""
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta) + 0 * phi]
    )


def su2_exponential(alpha: float, axis) -> np.ndarray:
    """Return ``exp(-i alpha n.sigma) = cos(alpha) I - i sin(alpha) n.sigma``.

    Raises ``ValueError`` if ``axis`` is not a real unit vector to within 1e-12.
    """
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,):
        raise ValueError("axis must be a 3-vector")
    if abs(np.linalg.norm(n) - 1.0) > AXIS_TOL:
        raise ValueError(f"axis is not unit length (|n| = {np.linalg.norm(n)!r})")
    return rotation_matrix(alpha, n)


def rotation_matrix(alpha: float, axis) -> np.ndarray:
    """``cos(alpha) I - i sin(alpha) n.sigma`` with no normalisation check.

    With a complex or non-unit ``axis`` the result is in general not unitary.
    """
    n = np.asarray(axis, dtype=complex)
    return np.cos(alpha) * IDENTITY2 - 1j * np.sin(alpha) * pauli_combine(2 * n[0], 2 * n[1], 2 * n[2])


def general_exponential(m) -> np.ndarray:
    """Matrix exponential of a square complex matrix (scaling and squaring, Pade)."""
    return scipy.linalg.expm(as_cmatrix(m))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.swapaxes(np.conj(m), -1, -2)


def gate_distance(a, b) -> float:
    """Frobenius distance between ``a`` and ``b`` minimised over a global phase.

    The optimal phase is ``arg Tr(b^dagger a)`` in closed form, giving
    ``sqrt(|a|^2 + |b|^2 - 2 |Tr(b^dagger a)|)``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    overlap = np.vdot(b, a)
    lam = np.angle(overlap) if abs(overlap) > 0 else 0.0
    return float(np.linalg.norm(a - np.exp(1j * lam) * b))


def unitarity_residual(u) -> float:
    """Frobenius norm of ``U^dagger U - I``."""
    u = np.asarray(u, dtype=complex)
    return float(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[-1])))
