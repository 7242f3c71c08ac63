"""Pulse synthesis: from a complex-angle path to the driving Hamiltonian.

Two independent constructions live here:

* closed-form complex Pauli coefficients ``Omega_{x,y,z}(t)`` of the two-level
  Hamiltonian ``H = (Omega . sigma) / 2`` (:func:`synthesize_pulses`);
* the general-N reconstruction ``H = sum_m (i|dphi_m><phi~_m| - a_m |phi_m><phi~_m|)``
  from a biorthonormal frame (:func:`hamiltonian_from_frames`).

They are expected to agree to finite-difference accuracy, which the tests use
as a cross-check.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import dagger, pauli_combine
from .paths import ComplexAnglePath, PathSample, is_closed

ZERO_RABI = 1e-14
BIORTHO_TOL = 1e-8


@dataclass(frozen=True)
class PulseSet:
    times: np.ndarray
    omega_x: np.ndarray
    omega_y: np.ndarray
    omega_z: np.ndarray
    f_tilde: np.ndarray
    path: ComplexAnglePath | None = None


@dataclass(frozen=True)
class PhysicalDrive:
    """Laboratory drive parameters per time sample.

    ``rabi1``/``phase1`` describe the real drive component, ``rabi2``/``phase2``
    the imaginary one; ``decay_diff`` is half the difference of the two level
    decay rates.
    """

    times: np.ndarray
    rabi1: np.ndarray
    rabi2: np.ndarray
    phase1: np.ndarray
    phase2: np.ndarray
    detuning: np.ndarray
    decay_diff: np.ndarray

    CSV_COLUMNS = ("t", "rabi1", "rabi2", "phase1", "phase2", "detuning", "decay_diff")

    def rows(self):
        return zip(self.times, self.rabi1, self.rabi2, self.phase1, self.phase2, self.detuning, self.decay_diff)


def pulse_coefficients(sample: PathSample):
    """Return ``(omega_x, omega_y, omega_z, f_tilde)`` for a path sample.

    ``f_tilde = 2 Re(dphi sin^2(theta/2)) - dphi`` keeps the cyclic phase real
    and purely geometric.
    """
    th, ph, dth, dph = sample.theta, sample.phi, sample.dtheta, sample.dphi
    f = 2 * np.real(dph * np.sin(th / 2) ** 2) - dph
    ox = f * np.sin(th) * np.cos(ph) - dth * np.sin(ph)
    oy = f * np.sin(th) * np.sin(ph) + dth * np.cos(ph)
    oz = f * np.cos(th) + dph
    return ox, oy, oz, f


def pulse_grid(path: ComplexAnglePath, n_samples: int) -> np.ndarray:
    """Uniform grid over the path with every segment junction forced in."""
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    grid = np.linspace(path.t0, path.tf, n_samples)
    return np.unique(np.concatenate([grid, path.junctions]))


def synthesize_pulses(path: ComplexAnglePath, n_samples: int = 1001, require_closed: bool = True) -> PulseSet:
    if require_closed and not is_closed(path):
        raise ValueError(f"path {path.label} is not closed")
    times = pulse_grid(path, n_samples)
    ox, oy, oz, f = pulse_coefficients(path.sample(times))
    return PulseSet(times, ox, oy, oz, f, path)


def _interp(t, times, values):
    return np.interp(t, times, values.real) + 1j * np.interp(t, times, values.imag)


def hamiltonian_at(pulses: PulseSet, t, exact: bool = True) -> np.ndarray:
    """Two-level Hamiltonian at ``t``.

    Re-evaluates the closed forms when the source path is attached (and
    ``exact``), otherwise interpolates the stored samples linearly.
    """
    t = np.asarray(t, dtype=float)
    lo, hi = pulses.times[0], pulses.times[-1]
    if np.any(t < lo - 1e-12 * (hi - lo)) or np.any(t > hi + 1e-12 * (hi - lo)):
        raise ValueError(f"t outside pulse window [{lo}, {hi}]")
    if exact and pulses.path is not None:
        ox, oy, oz, _ = pulse_coefficients(pulses.path.sample(t))
    else:
        ox, oy, oz = (_interp(t, pulses.times, v) for v in (pulses.omega_x, pulses.omega_y, pulses.omega_z))
    return pauli_combine(ox, oy, oz)


def hamiltonian_pieces(path: ComplexAnglePath) -> list[tuple[float, float, Callable]]:
    """Per-segment Hamiltonian callables, each valid on its closed segment window.

    Handing these to the integrator keeps every segment's own one-sided
    values at the junctions, where the derivatives may jump.
    """
    pieces = []
    for j, seg in enumerate(path.segments):
        def h(t, j=j):
            ox, oy, oz, _ = pulse_coefficients(path.sample(t, segment=j))
            return pauli_combine(ox, oy, oz)

        pieces.append((seg.t_start, seg.t_end, h))
    return pieces


# --- physical drive ---------------------------------------------------------


def _phase(re, im, amplitude):
    return np.where(amplitude < ZERO_RABI, 0.0, np.arctan2(im, re))


def extract_physical(pulses: PulseSet) -> PhysicalDrive:
    """Split complex Pauli coefficients into Rabi amplitudes, phases, detuning and decay difference.

    Phases use the two-argument arctangent so the quadrant is kept; a phase is
    reported as 0 wherever its amplitude is below 1e-14.
    """
    ox, oy, oz = (np.asarray(v, dtype=complex) for v in (pulses.omega_x, pulses.omega_y, pulses.omega_z))
    rabi1 = np.hypot(ox.real, oy.real)
    rabi2 = np.hypot(ox.imag, oy.imag)
    return PhysicalDrive(
        times=np.asarray(pulses.times, dtype=float),
        rabi1=rabi1,
        rabi2=rabi2,
        phase1=_phase(ox.real, oy.real, rabi1),
        phase2=_phase(ox.imag, oy.imag, rabi2),
        detuning=oz.real.copy(),
        decay_diff=-oz.imag,
    )


def drive_to_pulses(drive: PhysicalDrive) -> PulseSet:
    """Inverse of :func:`extract_physical` (``f_tilde`` is not recoverable and is set to NaN)."""
    ox = drive.rabi1 * np.cos(drive.phase1) + 1j * drive.rabi2 * np.cos(drive.phase2)
    oy = drive.rabi1 * np.sin(drive.phase1) + 1j * drive.rabi2 * np.sin(drive.phase2)
    oz = drive.detuning - 1j * drive.decay_diff
    return PulseSet(drive.times, ox, oy, oz, np.full(len(drive.times), np.nan + 0j))


def drive_hamiltonian(drive: PhysicalDrive, t) -> np.ndarray:
    """Two-level Hamiltonian rebuilt from laboratory parameters, linearly interpolated in time."""
    return hamiltonian_at(drive_to_pulses(drive), t)


def write_drive_csv(drive: PhysicalDrive, fh) -> None:
    """Write a drive table with 17 significant digits per cell to an open text file."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(PhysicalDrive.CSV_COLUMNS)
    for row in drive.rows():
        w.writerow([f"{float(x):.17g}" for x in row])


# --- frame reconstruction ---------------------------------------------------


@dataclass(frozen=True)
class BiorthoFrame:
    """Paired right/left bases as functions of time.

    ``right(t)`` and ``left(t)`` return ``(N, N)`` arrays whose columns are
    ``|phi_m>`` and ``|phi~_m>``. ``right_dot`` and ``alpha_dot`` are optional;
    without them the reconstruction differentiates numerically and uses the
    real geometric phase rate ``Re <phi~_m| i d/dt |phi_m>``.
    """

    dim: int
    right: Callable[[float], np.ndarray]
    left: Callable[[float], np.ndarray]
    right_dot: Callable[[float], np.ndarray] | None = None
    alpha_dot: Callable[[float], np.ndarray] | None = None

    def residual(self, t: float) -> float:
        r, l = self.right(t), self.left(t)
        return float(np.max(np.abs(dagger(l) @ r - np.eye(self.dim))))


def bloch_frame_vectors(theta, phi) -> np.ndarray:
    """Columns ``|phi_+>, |phi_->`` on the complex Bloch sphere."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s * np.exp(-1j * phi)], [s * np.exp(1j * phi), c]], dtype=complex)


def two_level_frame(path: ComplexAnglePath) -> BiorthoFrame:
    """Frame whose right vectors follow the path and left vectors its complex conjugate angles.

    No analytic derivative is attached, so reconstructions built on it are
    independent of the closed-form pulse formulas.
    """
    def right(t):
        s = path.sample(t)
        return bloch_frame_vectors(complex(s.theta), complex(s.phi))

    def left(t):
        s = path.sample(t)
        return bloch_frame_vectors(np.conj(complex(s.theta)), np.conj(complex(s.phi)))

    return BiorthoFrame(2, right, left)


def _five_point(f, t, dt):
    return (-f(t + 2 * dt) + 8 * f(t + dt) - 8 * f(t - dt) + f(t - 2 * dt)) / (12 * dt)


def hamiltonian_from_frames(frame: BiorthoFrame, t: float, dt: float = 1e-4) -> np.ndarray:
    """Hamiltonian that transports ``frame`` with the chosen phase rates.

    Without ``right_dot`` the derivative is a five-point central difference
    of step ``dt``; ``t`` must then sit at least ``2*dt`` away from any kink of
    the frame.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    err = frame.residual(t)
    if err > BIORTHO_TOL:
        raise ValueError(f"frame is not biorthonormal at t={t} (residual {err:.3e})")
    r, l = frame.right(t), frame.left(t)
    rdot = frame.right_dot(t) if frame.right_dot is not None else _five_point(frame.right, t, dt)
    if frame.alpha_dot is not None:
        adot = np.asarray(frame.alpha_dot(t), dtype=float)
    else:
        adot = np.real(np.einsum("im,im->m", np.conj(l), 1j * rdot))
    return (1j * rdot - r * adot) @ dagger(l)
