"""One-qubit geometric gates: targets, end-to-end realisation, fidelity and deviation analysis."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .evolution import EvolutionRecord, IntegratorConfig, evolve_operator
from .geometry import phase_time_integral
from .linalg import (
    IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z, axis_from_angles, gate_distance, rotation_matrix, su2_exponential,
)
from .paths import ComplexAnglePath, shift_phi
from .pulses import PhysicalDrive, extract_physical, hamiltonian_pieces, synthesize_pulses

DEVIATION_LIMIT = math.pi / 4

NAMED_GATES = {
    "I": IDENTITY2,
    "-I": -IDENTITY2,
    "iX": 1j * SIGMA_X,
    "-iX": -1j * SIGMA_X,
    "iY": 1j * SIGMA_Y,
    "-iY": -1j * SIGMA_Y,
    "iZ": 1j * SIGMA_Z,
    "-iZ": -1j * SIGMA_Z,
}


@dataclass(frozen=True)
class GateSpec:
    theta: float
    phi: float
    alpha: float
    matrix: np.ndarray

    @property
    def axis(self) -> np.ndarray:
        return axis_from_angles(self.theta, self.phi).real


def build_gate(theta: float, phi: float, alpha: float) -> GateSpec:
    """``exp(-i alpha n.sigma)`` about the axis at polar angle ``theta``, azimuth ``phi``."""
    n = axis_from_angles(float(theta), float(phi)).real
    n = n / np.linalg.norm(n)
    return GateSpec(float(theta), float(phi), float(alpha), su2_exponential(alpha, n))


def name_gate(u, tol: float = 1e-6) -> str:
    """Name of the listed gate equal to ``u`` (phase sensitive), or ``"custom"``."""
    for name, g in NAMED_GATES.items():
        if np.linalg.norm(np.asarray(u) - g) <= tol:
            return name
    return "custom"


def gate_fidelity(v, u) -> float:
    """``|Tr(V U^dagger)| / |Tr(V V^dagger)|``."""
    v = np.asarray(v, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if v.shape != (2, 2) or u.shape != (2, 2):
        raise ValueError("gate_fidelity expects 2x2 matrices")
    den = abs(np.trace(v @ v.conj().T))
    if den == 0:
        raise ValueError("fidelity undefined: Tr(V V^dagger) = 0")
    return float(abs(np.trace(v @ u.conj().T)) / den)


@dataclass(frozen=True)
class DeviationSpec:
    """Constant offset ``dphi1 + i dphi2`` of the azimuthal angle."""

    dphi1: float = 0.0
    dphi2: float = 0.0
    limit: float = DEVIATION_LIMIT

    def __post_init__(self):
        if abs(self.dphi1) > self.limit or abs(self.dphi2) > self.limit:
            raise ValueError(f"deviation outside the small-deviation regime (|dphi| <= {self.limit})")

    @property
    def value(self) -> complex:
        return complex(self.dphi1, self.dphi2)


def deviated_gate(theta: float, phi: float, alpha: float, dev: DeviationSpec) -> np.ndarray:
    """``cos(alpha) I - i sin(alpha) n'.sigma`` with the axis azimuth shifted by the deviation.

    For a complex deviation the axis is complex and the result is not unitary.
    """
    return rotation_matrix(alpha, axis_from_angles(theta, phi + dev.value))


# --- end-to-end realisation -------------------------------------------------


@dataclass
class GateRealization:
    path: ComplexAnglePath
    target: GateSpec
    record: EvolutionRecord
    distance: float

    @property
    def realized(self) -> np.ndarray:
        return self.record.final

    @property
    def name(self) -> str:
        return name_gate(self.realized)


def realize_gate(path: ComplexAnglePath, cfg: IntegratorConfig | None = None, n_quad: int = 4096) -> GateRealization:
    """Integrate the synthesised Hamiltonian around ``path`` and compare with the predicted rotation.

    The target axis is the loop's start point and the rotation parameter is
    the time-integral phase ``alpha_-``.
    """
    start = path.sample(path.t0, segment=0)
    alpha = phase_time_integral(path, n_quad).alpha_minus
    target = build_gate(float(start.theta.real), float(start.phi.real), alpha)
    record = evolve_operator(hamiltonian_pieces(path), path.t0, path.tf, cfg)
    return GateRealization(path, target, record, gate_distance(record.final, target.matrix))


# --- polar-angle deviation --------------------------------------------------


@dataclass
class DeviationReport:
    deviation: DeviationSpec
    drive: PhysicalDrive
    drive_shifted: PhysicalDrive
    detuning_residual: float
    rabi1_residual: float
    rabi2_residual: float
    phase1_shift: np.ndarray
    phase2_shift: np.ndarray
    invariant_residual: float


def _wrapped(x):
    return (np.asarray(x) + math.pi) % (2 * math.pi) - math.pi


def apply_polar_deviation(path: ComplexAnglePath, dev: DeviationSpec, n_samples: int = 1001):
    """Shift the azimuth by a constant and compare the two resulting drives sample by sample.

    Returns ``(shifted_path, DeviationReport)``. Phase shifts are reported
    wrapped to ``[-pi, pi)`` and only where the corresponding amplitude is
    nonzero (NaN elsewhere).
    """
    shifted = shift_phi(path, dev.value)
    drive = extract_physical(synthesize_pulses(path, n_samples))
    drive_b = extract_physical(synthesize_pulses(shifted, n_samples, require_closed=False))
    live1 = (drive.rabi1 > 1e-12) & (drive_b.rabi1 > 1e-12)
    live2 = (drive.rabi2 > 1e-12) & (drive_b.rabi2 > 1e-12)
    report = DeviationReport(
        deviation=dev,
        drive=drive,
        drive_shifted=drive_b,
        detuning_residual=float(np.max(np.abs(drive_b.detuning - drive.detuning))),
        rabi1_residual=float(np.max(np.abs(drive_b.rabi1 - drive.rabi1))),
        rabi2_residual=float(np.max(np.abs(drive_b.rabi2 - drive.rabi2))),
        phase1_shift=np.where(live1, _wrapped(drive_b.phase1 - drive.phase1), np.nan),
        phase2_shift=np.where(live2, _wrapped(drive_b.phase2 - drive.phase2), np.nan),
        invariant_residual=float(np.max(deviation_invariant(drive, drive_b))),
    )
    return shifted, report


def deviation_invariant(drive_a: PhysicalDrive, drive_b: PhysicalDrive) -> np.ndarray:
    """Per-sample ``|R1 R2 cos(p1 - p2) - R1' R2' cos(p1' - p2')|``."""
    if drive_a.times.shape != drive_b.times.shape or not np.array_equal(drive_a.times, drive_b.times):
        raise ValueError("drives are sampled on different time grids")

    def product(d):
        return d.rabi1 * d.rabi2 * np.cos(d.phase1 - d.phase2)

    return np.abs(product(drive_a) - product(drive_b))


# --- robustness sweep -------------------------------------------------------


@dataclass(frozen=True)
class RobustnessPoint:
    deviation: DeviationSpec
    f_exact: float
    f_geometric_approx: float
    f_dynamical_ref: float
    f_holonomic_ref: float
    theta0_ref: float

    CSV_COLUMNS = ("dphi1", "dphi2", "f_exact", "f_geometric_approx", "f_dynamical_ref", "f_holonomic_ref")

    def row(self) -> tuple[float, ...]:
        return (self.deviation.dphi1, self.deviation.dphi2, self.f_exact,
                self.f_geometric_approx, self.f_dynamical_ref, self.f_holonomic_ref)


def abelian_fidelity_approx(theta: float, alpha: float, dphi: float) -> float:
    """Second-order fidelity of the geometric gate under a real azimuth error."""
    return 1 - 0.5 * math.sin(alpha) ** 2 * math.sin(theta) ** 2 * dphi ** 2


def dynamical_fidelity_ref(theta0: float, dphi: float) -> float:
    return 1 - 0.5 * math.sin(theta0) ** 2 * dphi ** 2


def holonomic_fidelity_ref(alpha: float, dphi: float) -> float:
    return 1 - 0.5 * math.sin(alpha) ** 2 * dphi ** 2


def robustness_point(theta: float, phi: float, alpha: float, dphi1: float, theta0_ref: float | None = None) -> RobustnessPoint:
    theta0 = theta if theta0_ref is None else theta0_ref
    dev = DeviationSpec(dphi1, 0.0)
    u = build_gate(theta, phi, alpha).matrix
    return RobustnessPoint(
        deviation=dev,
        f_exact=gate_fidelity(deviated_gate(theta, phi, alpha, dev), u),
        f_geometric_approx=abelian_fidelity_approx(theta, alpha, dphi1),
        f_dynamical_ref=dynamical_fidelity_ref(theta0, dphi1),
        f_holonomic_ref=holonomic_fidelity_ref(alpha, dphi1),
        theta0_ref=theta0,
    )


def robustness_sweep(theta: float, phi: float, alpha: float, dphi1_grid, theta0_ref: float | None = None) -> list[RobustnessPoint]:
    """Exact and closed-form fidelities on a grid of real azimuth deviations, in grid order."""
    return [robustness_point(theta, phi, alpha, float(d), theta0_ref) for d in dphi1_grid]


def write_sweep_csv(points, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RobustnessPoint.CSV_COLUMNS)
    for p in points:
        w.writerow([f"{float(x):.17g}" for x in p.row()])
