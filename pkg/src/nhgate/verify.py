"""Invariant suite behind the ``verify-all`` command.

Each check returns a :class:`Check` carrying the measured value and the bound
it was held to. Random inputs all come from one seeded generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gates, geometry, linalg, paths, pulses, twoqubit
from .evolution import IntegratorConfig, evolve_state_pair
from .paths import make_path

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class Check:
    name: str
    module: str
    value: float
    tol: float
    passed: bool
    relation: str = "<="

    def record(self) -> dict:
        return {"check": self.name, "module": self.module, "value": self.value,
                "tolerance": self.tol, "relation": self.relation, "passed": self.passed}


def _le(name, module, value, tol) -> Check:
    value = float(value)
    return Check(name, module, value, tol, bool(value <= tol))


def _ge(name, module, value, bound) -> Check:
    value = float(value)
    return Check(name, module, value, bound, bool(value >= bound), ">=")


def builtin_paths() -> dict[str, paths.ComplexAnglePath]:
    return {
        "circle": make_path("circle", theta0=HALF_PI),
        "mlm": make_path("mlm", theta0=HALF_PI, phi0=math.pi, theta1=math.pi / 3),
        "complex-circle": make_path("complex-circle", theta0=HALF_PI, beta=0.1, gamma=0.05),
        "complex-mlm": make_path("complex-mlm", theta0=1.2, phi0=0.4, theta1=math.pi / 3, beta=0.1, gamma=0.05),
    }


def check_core(rng) -> list[Check]:
    errs_comp, errs_det, errs_exp, errs_lin = [], [], [], []
    for _ in range(20):
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        a, b = rng.uniform(-4, 4, size=2)
        ua, ub = linalg.su2_exponential(a, n), linalg.su2_exponential(b, n)
        errs_comp.append(np.abs(ua @ ub - linalg.su2_exponential(a + b, n)).max())
        errs_det.append(abs(np.linalg.det(ua) - 1))
        gen = -1j * a * linalg.pauli_combine(*(2 * n))
        errs_exp.append(np.abs(linalg.general_exponential(gen) - ua).max())
        c1, c2 = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        lhs = linalg.pauli_combine(*(c1 + 2.5 * c2))
        errs_lin.append(np.abs(lhs - linalg.pauli_combine(*c1) - 2.5 * linalg.pauli_combine(*c2)).max())
    return [
        _le("su2 composition", "cx-core", max(errs_comp), 1e-12),
        _le("su2 determinant", "cx-core", max(errs_det), 1e-12),
        _le("expm vs su2", "cx-core", max(errs_exp), 1e-10),
        _le("pauli linearity", "cx-core", max(errs_lin), 1e-12),
    ]


def check_paths(rng, family_paths) -> list[Check]:
    worst_closure, worst_fd = 0.0, 0.0
    for p in family_paths.values():
        worst_closure = max(worst_closure, max(paths.validate_closure(p, strict=True).residuals.values()))
        for j, seg in enumerate(p.segments):
            h = 1e-6 * (p.tf - p.t0)
            t = rng.uniform(seg.t_start + 2 * h, seg.t_end - 2 * h, size=100)
            a, b, c = p.sample(t + h, segment=j), p.sample(t - h, segment=j), p.sample(t, segment=j)
            fd_th = (a.theta - b.theta) / (2 * h)
            fd_ph = (a.phi - b.phi) / (2 * h)
            worst_fd = max(worst_fd, np.abs(fd_th - c.dtheta).max(), np.abs(fd_ph - c.dphi).max())
    return [_le("closure residuals", "paths", worst_closure, 1e-10),
            _le("derivatives vs central differences", "paths", worst_fd, 1e-7)]


def _random_interior_times(rng, p, n, margin=1e-3):
    out = []
    while len(out) < n:
        t = rng.uniform(p.t0 + margin, p.tf - margin)
        if all(abs(t - j) > margin for j in p.junctions):
            out.append(t)
    return np.array(out)


def check_pulses(rng, family_paths) -> list[Check]:
    worst_frames, worst_trip, worst_herm = 0.0, 0.0, 0.0
    for name, p in family_paths.items():
        ps = pulses.synthesize_pulses(p, 501)
        frame = pulses.two_level_frame(p)
        for t in _random_interior_times(rng, p, 50):
            diff = pulses.hamiltonian_from_frames(frame, t) - pulses.hamiltonian_at(ps, t)
            worst_frames = max(worst_frames, np.abs(diff).max())
        drive = pulses.extract_physical(ps)
        back = pulses.drive_to_pulses(drive)
        worst_trip = max(worst_trip, *(np.abs(getattr(back, k) - getattr(ps, k)).max()
                                       for k in ("omega_x", "omega_y", "omega_z")))
        if not name.startswith("complex"):
            worst_herm = max(worst_herm, np.abs(drive.decay_diff).max(), np.abs(drive.rabi2).max())
    return [_le("frame reconstruction vs pulse formulas", "pulse-synth", worst_frames, 1e-8),
            _le("physical drive round trip", "pulse-synth", worst_trip, 1e-12),
            _le("Hermitian limit of real paths", "pulse-synth", worst_herm, 1e-12)]


def check_evolution(family_paths, cfg) -> list[Check]:
    out = []
    worst_end, worst_det, worst_bio, worst_recon = 0.0, 0.0, 0.0, 0.0
    min_ratio = np.inf
    for p in family_paths.values():
        real = gates.realize_gate(p, cfg)
        u = real.realized
        worst_end = max(worst_end, real.record.unitarity[-1])
        worst_det = max(worst_det, abs(np.linalg.det(u) - 1))
        worst_recon = max(worst_recon, real.distance, np.abs(u - real.target.matrix).max())
        start = p.sample(p.t0)
        frame0 = pulses.bloch_frame_vectors(complex(start.theta), complex(start.phi))
        traj = evolve_state_pair(pulses.hamiltonian_pieces(p), frame0[:, 0], frame0[:, 0], p.t0, p.tf, cfg)
        ov = traj.overlaps()
        worst_bio = max(worst_bio, np.abs(ov - ov[0]).max())
        coarse = gates.realize_gate(p, IntegratorConfig(steps=250)).distance
        fine = gates.realize_gate(p, IntegratorConfig(steps=500)).distance
        min_ratio = min(min_ratio, coarse / fine)
    out.append(_le("endpoint unitarity", "evolution", worst_end, 1e-7))
    out.append(_le("endpoint determinant", "evolution", worst_det, 1e-7))
    out.append(_le("endpoint equals frame reconstruction", "evolution", worst_recon, 1e-6))
    out.append(_le("dual-pair overlap conservation", "evolution", worst_bio, 1e-9))
    out.append(_ge("step-halving error ratio", "evolution", min_ratio, 12.0))
    return out


def check_geometry(rng, family_paths) -> list[Check]:
    worst_routes, worst_rate = 0.0, 0.0
    for p in family_paths.values():
        vals = [r.alpha_minus for r in geometry.all_routes(p)]
        worst_routes = max(worst_routes, max(vals) - min(vals))
        worst_rate = max(worst_rate, abs(geometry.phase_time_integral(paths.reparametrize(p)).alpha_minus - vals[0]))
    cap = max(abs(geometry.phase_time_integral(make_path("circle", theta0=t)).alpha_minus - math.pi * (1 - math.cos(t)))
              for t in (math.pi / 6, HALF_PI, 2 * math.pi / 3))
    pts = rng.uniform(0.3, 2.8, size=20) + 1j * rng.uniform(-0.3, 0.3, size=20)
    curv = max(abs(geometry.curvature_at(t, 0.0) + 0.5) for t in pts)
    curv_fd = max(abs(geometry.curvature_numeric(t, 0.0) + 0.5) for t in pts)
    gauge = geometry.gauge_invariance_check(family_paths["circle"], lambda th, ph: 0.3 * np.sin(th) * np.cos(ph))
    return [
        _le("three-route phase agreement", "geometry", worst_routes, 1e-9),
        _le("rate independence of phase", "geometry", worst_rate, 1e-9),
        _le("cap phase formula", "geometry", cap, 1e-9),
        _le("analytic curvature = -1/2", "geometry", curv, 1e-12),
        _le("finite-difference curvature", "geometry", curv_fd, 1e-6),
        _le("gauge invariance", "geometry", gauge.delta, 1e-9),
    ]


def check_gates() -> list[Check]:
    grid = np.array([-0.2, -0.1, -0.05, 0.05, 0.1, 0.2])
    pts = gates.robustness_sweep(HALF_PI, 0.0, HALF_PI, grid)
    f = np.array([p.f_exact for p in pts])
    law = max(abs(p.f_exact - math.cos(p.deviation.dphi1)) for p in pts)
    comp = gates.robustness_sweep(math.pi / 3, 0.0, HALF_PI, grid)
    order = min(p.f_geometric_approx - p.f_holonomic_ref for p in comp)
    return [
        _le("fidelity law at alpha = theta = pi/2", "gates", law, 1e-12),
        _le("fidelity even in deviation", "gates", np.abs(f - f[::-1]).max(), 1e-15),
        _le("fidelity bounded by one", "gates", f.max() - 1, 0.0),
        _ge("geometric beats holonomic reference", "gates", order, 0.0),
    ]


def check_two_qubit(cfg) -> list[Check]:
    out = []
    res = twoqubit.run_cz_protocol(twoqubit.TwoAtomConfig(mode="idealized", Theta=math.pi, u=0.05), cfg)
    target = np.diag([1, 1, 1, np.exp(1j * res.theta_effective)])
    out.append(_le("idealized CZ subspace operator", "two-qubit", np.abs(res.subspace - target).max(), 1e-6))
    out.append(_le("|Theta_eff| = Theta", "two-qubit", abs(abs(res.theta_effective) - math.pi), 1e-6))
    rr = np.zeros(9, dtype=complex)
    rr[twoqubit.RR] = -1
    out.append(_le("|ee> -> -|rr> after step 1", "two-qubit", np.abs(res.after_step1_ee - rr).max(), 1e-6))
    wcfg = twoqubit.TwoAtomConfig(mode="idealized", Theta=math.pi, u=0.05)
    wait = twoqubit.stage_operator(wcfg, "wait", cfg)
    out.append(_le("wait propagator closed form", "two-qubit", np.abs(wait - twoqubit.wait_propagator(wcfg)).max(), 1e-10))
    return out


def run_all(seed: int = 20240601, steps: int = 10_000) -> list[Check]:
    rng = np.random.default_rng(seed)
    cfg = IntegratorConfig(steps=steps)
    fam = builtin_paths()
    return (check_core(rng) + check_paths(rng, fam) + check_pulses(rng, fam) + check_evolution(fam, cfg)
            + check_geometry(rng, fam) + check_gates() + check_two_qubit(cfg))
