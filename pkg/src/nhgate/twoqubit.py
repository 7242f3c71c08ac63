"""Two three-level atoms (g, e, r) driven on e <-> r, with an energy shift ``u`` on ``|rr>``.

The controlled-phase protocol is: geometric ``iX`` pulse on both atoms, a
free wait ``dt = Theta / u``, then a ``-iX`` pulse. Only ``|ee>`` reaches
``|rr>`` and picks up the interaction phase; ``|g>`` is never coupled.

Each atom's {e, r} block carries the full complex two-level Hamiltonian
``(Omega . sigma) / 2`` with ``|e> = |+>`` and ``|r> = |->``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .evolution import IntegratorConfig, evolve_operator
from .linalg import SIGMA_X
from .paths import ComplexAnglePath, make_path
from .pulses import extract_physical, hamiltonian_pieces, synthesize_pulses


LEVELS = ("g", "e", "r")
G, E, R = 0, 1, 2
BASIS9 = tuple(a + b for a in LEVELS for b in LEVELS)
COMPUTATIONAL = tuple(BASIS9.index(s) for s in ("gg", "ge", "eg", "ee"))
COMPUTATIONAL_LABELS = ("00", "01", "10", "11")
RR = BASIS9.index("rr")
LEAKAGE_LIMIT = 0.1
WEAK_COUPLING = 0.1

P_RR = np.zeros((9, 9), dtype=complex)
P_RR[RR, RR] = 1.0


def index(label: str) -> int:
    """Position of a two-atom basis label such as ``"er"`` (atom 1 first)."""
    return BASIS9.index(label)


def embed_er(block):
    """Place 2x2 matrices (last two axes) on the {e, r} levels of a 3x3 single-atom space."""
    block = np.asarray(block, dtype=complex)
    out = np.zeros(block.shape[:-2] + (3, 3), dtype=complex)
    out[..., 1:, 1:] = block
    return out


def two_atom_sum(h3) -> np.ndarray:
    """``h3 (x) I + I (x) h3`` for a (stack of) 3x3 single-atom operators."""
    h3 = np.asarray(h3, dtype=complex)
    eye = np.eye(3)
    return np.einsum("...ij,kl->...ikjl", h3, eye).reshape(h3.shape[:-2] + (9, 9)) + \
        np.einsum("ij,...kl->...ikjl", eye, h3).reshape(h3.shape[:-2] + (9, 9))


def single_atom_gate(g2) -> np.ndarray:
    """3x3 operator acting as ``g2`` on {e, r} and trivially on ``|g>``."""
    out = embed_er(g2)
    out[G, G] = 1.0
    return out


@dataclass
class TwoAtomConfig:
    """Protocol settings.

    ``u`` and all times are in units of the drive scale, so ``u`` doubles as the
    ratio u / Omega. ``mode="idealized"`` switches the interaction off during
    the pulses; ``"full"`` keeps it on throughout. ``abstract=True`` replaces the
    integrated pulses by the exact iX / -iX matrices.
    """

    u: float = 0.01
    Theta: float = math.pi
    mode: str = "full"
    pulse_T: float = 1.0
    theta1: float = math.pi / 3
    abstract: bool = False
    pulse_on: ComplexAnglePath | None = None
    pulse_off: ComplexAnglePath | None = None

    def __post_init__(self):
        if not self.u > 0:
            raise ValueError("u must be positive")
        if self.mode not in ("idealized", "full"):
            raise ValueError(f"mode must be 'idealized' or 'full', got {self.mode!r}")
        if self.Theta < 0:
            raise ValueError("Theta must be non-negative")
        if self.pulse_on is None:
            self.pulse_on = make_path("mlm", theta0=math.pi / 2, phi0=math.pi, theta1=self.theta1, T=self.pulse_T)
        if self.pulse_off is None:
            self.pulse_off = make_path("mlm", theta0=math.pi / 2, phi0=0.0, theta1=self.theta1, T=self.pulse_T)

    @property
    def wait(self) -> float:
        return self.Theta / self.u

    @property
    def schedule(self) -> list[tuple[str, float, float]]:
        """``(stage, t_start, t_end)`` for the three protocol steps."""
        t1 = self.pulse_on.tf - self.pulse_on.t0
        t3 = self.pulse_off.tf - self.pulse_off.t0
        return [("pulse-on", 0.0, t1), ("wait", t1, t1 + self.wait), ("pulse-off", t1 + self.wait, t1 + self.wait + t3)]

    def rabi_floor(self) -> float:
        """Smallest total drive amplitude over both pulses."""
        amps = []
        for p in (self.pulse_on, self.pulse_off):
            d = extract_physical(synthesize_pulses(p, 2001))
            amps.append(np.min(np.hypot(d.rabi1, d.rabi2)))
        return float(min(amps))


def _stage_pieces(cfg: TwoAtomConfig, stage: str):
    """Hamiltonian pieces of one stage in stage-local time (starting at 0)."""
    u_on = cfg.mode == "full" or stage == "wait"
    if stage == "wait":
        return [(0.0, cfg.wait, lambda t: cfg.u * P_RR + 0 * np.asarray(t)[..., None, None])]
    path = cfg.pulse_on if stage == "pulse-on" else cfg.pulse_off
    pieces = []
    for a, b, h2 in hamiltonian_pieces(path):
        def h(t, h2=h2):
            t = np.asarray(t, dtype=float)
            out = two_atom_sum(embed_er(h2(t + path.t0)))
            return out + cfg.u * P_RR if u_on else out

        pieces.append((a - path.t0, b - path.t0, h))
    return pieces


def build_two_atom_h(cfg: TwoAtomConfig, t: float) -> np.ndarray:
    """9x9 Hamiltonian at protocol time ``t`` (right-continuous at stage boundaries)."""
    for stage, a, b in cfg.schedule:
        if a <= t < b or (stage == "pulse-off" and t == b):
            for pa, pb, h in _stage_pieces(cfg, stage):
                if pa <= t - a <= pb:
                    return np.asarray(h(t - a), dtype=complex)
    raise ValueError(f"t={t} outside the protocol schedule")


def subspace_extract(u9) -> tuple[np.ndarray, float]:
    """Computational 4x4 block and the leakage (sum of the Frobenius norms of both coupling blocks)."""
    u9 = np.asarray(u9, dtype=complex)
    comp = np.array(COMPUTATIONAL)
    rest = np.array([i for i in range(9) if i not in COMPUTATIONAL])
    block = u9[np.ix_(comp, comp)]
    leak = np.linalg.norm(u9[np.ix_(rest, comp)]) + np.linalg.norm(u9[np.ix_(comp, rest)])
    return block, float(leak)


def subspace_infidelity(a, b) -> float:
    """``1 - |Tr(a^dagger b)| / 4`` for 4x4 operators."""
    return float(1 - abs(np.trace(np.asarray(a).conj().T @ np.asarray(b))) / 4)


@dataclass
class CZResult:
    config: TwoAtomConfig
    operator9: np.ndarray
    subspace: np.ndarray
    leakage: float
    stages: dict[str, np.ndarray]
    theta_effective: float
    after_step1_ee: np.ndarray
    rydberg_population: dict[str, float]
    u_over_rabi_min: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def breakdown(self) -> bool:
        return self.leakage > LEAKAGE_LIMIT

    def target(self, sign: int = -1) -> np.ndarray:
        """diag(1, 1, 1, exp(sign i Theta)); ``sign=-1`` is the phase picked up under ``i d/dt = H``."""
        return np.diag([1, 1, 1, np.exp(sign * 1j * self.config.Theta)])

    def per_basis_fidelity(self) -> dict[str, float]:
        return {lab: float(abs(self.subspace[i, i]) ** 2) for i, lab in enumerate(COMPUTATIONAL_LABELS)}

    def report(self) -> dict:
        return {
            "theta_target": self.config.Theta,
            "theta_effective": self.theta_effective,
            "leakage": self.leakage,
            "per_basis_fidelities": self.per_basis_fidelity(),
            "gate_fidelity": 1 - subspace_infidelity(self.target(-1), self.subspace),
            "mode": self.config.mode,
            "u_over_omega": self.config.u,
            "u_over_rabi_min": self.u_over_rabi_min,
            "breakdown": self.breakdown,
        }


def stage_operator(cfg: TwoAtomConfig, stage: str, icfg: IntegratorConfig) -> np.ndarray:
    if stage == "wait" and cfg.wait == 0:
        return np.eye(9, dtype=complex)
    if cfg.abstract and stage != "wait":
        g = 1j * SIGMA_X if stage == "pulse-on" else -1j * SIGMA_X
        s = single_atom_gate(g)
        return np.kron(s, s)
    pieces = _stage_pieces(cfg, stage)
    return evolve_operator(pieces, pieces[0][0], pieces[-1][1], icfg).final


def wait_propagator(cfg: TwoAtomConfig) -> np.ndarray:
    """Closed-form step-2 propagator: identity except ``exp(-i u dt)`` on ``|rr>``."""
    out = np.eye(9, dtype=complex)
    out[RR, RR] = np.exp(-1j * cfg.u * cfg.wait)
    return out


def run_cz_protocol(cfg: TwoAtomConfig, icfg: IntegratorConfig | None = None) -> CZResult:
    """Run all three steps on the full 9-level space and read off the computational block.

    Each stage is integrated separately with ``icfg.steps`` steps.
    """
    icfg = icfg or IntegratorConfig()
    if cfg.abstract and cfg.mode == "full":
        raise ValueError("abstract pulses cannot carry the interaction; use mode='idealized'")
    ratio = None
    notes = []
    if not cfg.abstract:
        ratio = cfg.u / cfg.rabi_floor()
        if cfg.mode == "full" and ratio > WEAK_COUPLING:
            msg = f"u / min Rabi amplitude = {ratio:.3g} exceeds {WEAK_COUPLING}; weak-interaction assumption violated"
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
            notes.append(msg)
    stages = {name: stage_operator(cfg, name, icfg) for name, _, _ in cfg.schedule}
    u9 = stages["pulse-off"] @ stages["wait"] @ stages["pulse-on"]
    block, leak = subspace_extract(u9)
    ee = np.zeros(9, dtype=complex)
    ee[index("ee")] = 1
    rydberg = [i for i, s in enumerate(BASIS9) if "r" in s]
    pops = {}
    for lab, i in zip(COMPUTATIONAL_LABELS, COMPUTATIONAL):
        pops[lab] = float(np.sum(np.abs(u9[rydberg, i]) ** 2))
    theta_eff = float(np.angle(block[3, 3] / block[0, 0]))
    return CZResult(cfg, u9, block, leak, stages, theta_eff, stages["pulse-on"] @ ee, pops, ratio, notes)
