"""Geometric phase of cyclic two-level paths, computed three ways, plus connection and curvature.

Routes
------
``time-integral``
    ``alpha_-/+ = +/- Re int dphi sin^2(theta/2) dt`` straight from the path.
``line-integral``
    ``alpha_+ = Re oint A . dn`` with the complex connection
    ``A = a_phi e_phi``, ``a_phi = -sin^2(theta/2) / sin(theta)``.
``solid-angle``
    ``alpha_-/+ = +/- Re(Omega / 2)`` with the complex solid angle in its
    Stokes line form ``Omega = oint (1 - cos theta) dphi``.

All routes use composite Simpson quadrature per path segment.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .paths import CLOSURE_TOL, ComplexAnglePath, is_closed
from .pulses import bloch_frame_vectors

log = logging.getLogger(__name__)

N_QUAD = 4096
POLE_TOL = 1e-9
CONNECTION_POLE_TOL = 1e-12

ROUTES = ("time-integral", "line-integral", "solid-angle")


class ConnectionSingularityError(ValueError):
    """The connection was requested on (or a line integral passes through) a pole."""


@dataclass(frozen=True)
class PhaseResult:
    alpha_plus: float
    alpha_minus: float
    route: str
    raw: complex
    note: str = ""

    def record(self, path_id: str) -> dict:
        return {
            "path-id": path_id,
            "route": self.route,
            "alpha_plus": self.alpha_plus,
            "alpha_minus": self.alpha_minus,
            "raw_re": float(np.real(self.raw)),
            "raw_im": float(np.imag(self.raw)),
        }


@dataclass(frozen=True)
class ConnectionValue:
    a_phi: complex
    point: tuple[complex, complex]
    a_theta: complex = 0j


@dataclass(frozen=True)
class SolidAngleResult:
    omega_complex: complex
    note: str = ""

    @property
    def omega(self) -> float:
        return float(np.real(self.omega_complex))

    def phase(self) -> PhaseResult:
        half = float(np.real(self.omega_complex)) / 2
        return PhaseResult(-half, half, "solid-angle", self.omega_complex, self.note)


def _require_closed(path: ComplexAnglePath) -> None:
    if not is_closed(path, CLOSURE_TOL):
        raise ValueError(f"path {path.label} is not closed")


def _integrate(path: ComplexAnglePath, integrand: Callable, n_quad: int) -> complex:
    """``sum_segments int integrand(sample) dt`` by composite Simpson with ``n_quad`` panels each."""
    if n_quad < 2 or n_quad % 2:
        raise ValueError("n_quad must be a positive even number")
    total = 0j
    for j, seg in enumerate(path.segments):
        t = np.linspace(seg.t_start, seg.t_end, n_quad + 1)
        total += simpson(integrand(path.sample(t, segment=j)), x=t)
    return complex(total)


def _min_abs_sin(path: ComplexAnglePath, n_quad: int) -> float:
    worst = np.inf
    for j, seg in enumerate(path.segments):
        t = np.linspace(seg.t_start, seg.t_end, n_quad + 1)
        worst = min(worst, float(np.min(np.abs(np.sin(path.sample(t, segment=j).theta)))))
    return worst


def phase_time_integral(path: ComplexAnglePath, n_quad: int = N_QUAD) -> PhaseResult:
    _require_closed(path)
    raw = _integrate(path, lambda s: s.dphi * np.sin(s.theta / 2) ** 2, n_quad)
    return PhaseResult(-raw.real, raw.real, "time-integral", raw)


def _a_phi(theta):
    return -np.sin(theta / 2) ** 2 / np.sin(theta)


def connection_at(theta, phi) -> ConnectionValue:
    """Complex connection at ``(theta, phi)``; only the azimuthal component is nonzero."""
    theta, phi = complex(theta), complex(phi)
    if abs(np.sin(theta)) <= CONNECTION_POLE_TOL:
        raise ConnectionSingularityError(f"connection is singular at theta={theta}")
    return ConnectionValue(complex(_a_phi(theta)), (theta, phi))


def connection_from_states(theta, phi) -> ConnectionValue:
    """Same connection from the inner products ``i <phi~_+| d |phi_+>`` of the frame vectors."""
    theta, phi = complex(theta), complex(phi)
    if abs(np.sin(theta)) <= CONNECTION_POLE_TOL:
        raise ConnectionSingularityError(f"connection is singular at theta={theta}")
    right = bloch_frame_vectors(theta, phi)[:, 0]
    left = bloch_frame_vectors(np.conj(theta), np.conj(phi))[:, 0]
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    d_theta = np.array([-s / 2, c / 2 * np.exp(1j * phi)])
    d_phi = np.array([0, 1j * s * np.exp(1j * phi)])
    a_theta = 1j * np.vdot(left, d_theta)
    a_phi = 1j * np.vdot(left, d_phi) / np.sin(theta)
    return ConnectionValue(complex(a_phi), (theta, phi), complex(a_theta))


def phase_line_integral(path: ComplexAnglePath, n_quad: int = N_QUAD, fallback: bool = False) -> PhaseResult:
    """Phase from the connection line integral ``oint a_phi sin(theta) dphi``.

    A path that comes within ``POLE_TOL`` of a pole raises
    :class:`ConnectionSingularityError`, or with ``fallback`` is rerouted to
    the time integral (the phase itself stays finite there).
    """
    _require_closed(path)
    if _min_abs_sin(path, n_quad) <= POLE_TOL:
        if not fallback:
            raise ConnectionSingularityError(f"path {path.label} passes through a connection pole")
        log.info("path %s touches a pole; line integral rerouted to the time integral", path.label)
        res = phase_time_integral(path, n_quad)
        return PhaseResult(res.alpha_plus, res.alpha_minus, "line-integral", -res.raw, "time-integral fallback")
    raw = _integrate(path, lambda s: _a_phi(s.theta) * np.sin(s.theta) * s.dphi, n_quad)
    return PhaseResult(raw.real, -raw.real, "line-integral", raw)


def solid_angle(path: ComplexAnglePath, n_quad: int = N_QUAD) -> SolidAngleResult:
    _require_closed(path)
    if _min_abs_sin(path, n_quad) <= POLE_TOL:
        log.info("path %s touches a pole; solid angle taken from the time integral", path.label)
        return SolidAngleResult(2 * phase_time_integral(path, n_quad).raw, "time-integral fallback")
    return SolidAngleResult(_integrate(path, lambda s: (1 - np.cos(s.theta)) * s.dphi, n_quad))


def phase_solid_angle(path: ComplexAnglePath, n_quad: int = N_QUAD) -> PhaseResult:
    return solid_angle(path, n_quad).phase()


def all_routes(path: ComplexAnglePath, n_quad: int = N_QUAD) -> list[PhaseResult]:
    return [
        phase_time_integral(path, n_quad),
        phase_line_integral(path, n_quad, fallback=True),
        phase_solid_angle(path, n_quad),
    ]


def curvature_at(theta, phi) -> complex:
    """Radial component of the curl of the connection, from its closed form.

    ``(1/sin t) d/dt (sin t a_phi) = (1/sin t) d/dt (-sin^2(t/2)) = -1/2``.
    The azimuthal derivative of ``a_theta`` vanishes identically.
    """
    theta = complex(theta)
    s = np.sin(theta)
    if abs(s) <= POLE_TOL:
        raise ConnectionSingularityError(f"curvature requested at a pole (theta={theta})")
    d_flux = -np.sin(theta / 2) * np.cos(theta / 2)
    return complex(d_flux / s)


def curvature_numeric(theta, phi, h: float = 1e-5) -> complex:
    """Finite-difference curl of :func:`connection_at` (central differences of step ``h``)."""
    theta, phi = complex(theta), complex(phi)

    def flux(t):
        return np.sin(t) * connection_at(t, phi).a_phi

    d_theta = (flux(theta + h) - flux(theta - h)) / (2 * h)
    d_phi = (connection_at(theta, phi + h).a_theta - connection_at(theta, phi - h).a_theta) / (2 * h)
    return complex((d_theta - d_phi) / np.sin(theta))


# --- gauge ------------------------------------------------------------------


@dataclass(frozen=True)
class GaugeReport:
    alpha_plus: float
    alpha_plus_gauged: float
    endpoint_mismatch: float
    curvature_shift: float
    tol: float = 1e-9

    @property
    def delta(self) -> float:
        return abs(self.alpha_plus_gauged - self.alpha_plus)

    @property
    def passed(self) -> bool:
        return self.delta <= self.tol


def _partials(chi, theta, phi, h=1e-3):
    def d(f):
        return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h)

    return d(lambda e: chi(theta + e, phi)), d(lambda e: chi(theta, phi + e))


def gauge_invariance_check(path: ComplexAnglePath, chi: Callable, n_quad: int = N_QUAD,
                           grad: Callable | None = None) -> GaugeReport:
    """Compare ``alpha_+`` before and after ``A -> A - grad chi``.

    ``chi(theta, phi)`` must be single valued along the loop. Its gradient is
    taken from ``grad(theta, phi) -> (d_theta chi, d_phi chi)`` when given,
    otherwise from five-point differences (``chi`` assumed holomorphic).
    """
    _require_closed(path)
    start = path.sample(path.t0, segment=0)
    end = path.sample(path.tf, segment=len(path.segments) - 1)
    mismatch = abs(complex(chi(end.theta, end.phi)) - complex(chi(start.theta, start.phi)))
    if mismatch > CLOSURE_TOL:
        raise ValueError(f"gauge function is not single valued on the loop (endpoint mismatch {mismatch:.3e})")
    grad = grad or (lambda th, ph: _partials(chi, th, ph))

    def shifted(s):
        g_theta, g_phi = grad(s.theta, s.phi)
        a_dot_dn = _a_phi(s.theta) * np.sin(s.theta) * s.dphi
        return a_dot_dn - (g_theta * s.dtheta + g_phi * s.dphi)

    base = phase_line_integral(path, n_quad, fallback=True)
    gauged = _integrate(path, shifted, n_quad)

    # curl of a gradient: mixed partials of chi commute
    mid = path.sample(0.5 * (path.t0 + path.tf))
    h = 1e-3
    th, ph = complex(mid.theta), complex(mid.phi)
    d_phi_then_theta = (_partials(chi, th + h, ph)[1] - _partials(chi, th - h, ph)[1]) / (2 * h)
    d_theta_then_phi = (_partials(chi, th, ph + h)[0] - _partials(chi, th, ph - h)[0]) / (2 * h)
    return GaugeReport(base.alpha_plus, float(gauged.real), mismatch, float(abs(d_phi_then_theta - d_theta_then_phi)))
