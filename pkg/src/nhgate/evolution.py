"""Fixed-step integration of ``i dU/dt = H U`` and of the adjoint equation ``i dU~/dt = H^dagger U~``.

The dynamics are generally non-unitary. Nothing is renormalised mid-run:
norm growth is monitored and a run aborts once ``|U|`` exceeds
``NORM_LIMIT``. Piecewise Hamiltonians are integrated piece by piece so that
step boundaries land exactly on the kinks.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import dagger

NORM_LIMIT = 1e12

Piece = tuple[float, float, Callable]


class EvolutionError(RuntimeError):
    """Integration produced or met non-finite values, or ran away in norm."""


@dataclass(frozen=True)
class IntegratorConfig:
    steps: int = 10_000
    scheme: str = "rk4-fixed"
    checkpoint_stride: int | None = None

    def __post_init__(self):
        if self.steps < 10:
            raise ValueError("steps must be at least 10")
        if self.scheme != "rk4-fixed":
            raise ValueError(f"unsupported scheme {self.scheme!r}")
        if self.checkpoint_stride is not None and self.checkpoint_stride < 1:
            raise ValueError("checkpoint_stride must be positive")

    @property
    def stride(self) -> int:
        return self.checkpoint_stride or max(1, self.steps // 100)


@dataclass
class EvolutionRecord:
    """Propagator samples at checkpoints (always including ``t0`` and ``tf``)."""

    times: np.ndarray
    operators: np.ndarray
    dual_operators: np.ndarray
    unitarity: np.ndarray
    biortho: np.ndarray
    steps: int
    order: int = 4
    meta: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.operators[-1]

    @property
    def max_unitarity(self) -> float:
        return float(self.unitarity.max())


@dataclass
class StateTrajectory:
    times: np.ndarray
    psi: np.ndarray
    psitilde: np.ndarray

    def overlaps(self) -> np.ndarray:
        """``<psi~(t)|psi(t)>`` at every checkpoint."""
        return np.einsum("ti,ti->t", np.conj(self.psitilde), self.psi)


def as_pieces(h_of_t, t0: float, tf: float, breakpoints: Sequence[float] | None = None) -> list[Piece]:
    """Normalise a Hamiltonian argument to a list of ``(ta, tb, fn)`` pieces."""
    if callable(h_of_t):
        cuts = sorted({t0, tf, *(b for b in (breakpoints or ()) if t0 < b < tf)})
        return [(a, b, h_of_t) for a, b in zip(cuts, cuts[1:])]
    pieces = [(float(a), float(b), fn) for a, b, fn in h_of_t]
    if not pieces or not math.isclose(pieces[0][0], t0) or not math.isclose(pieces[-1][1], tf):
        raise ValueError("Hamiltonian pieces must span [t0, tf]")
    for (_, b, _), (a, _, _) in zip(pieces, pieces[1:]):
        if a != b:
            raise ValueError("Hamiltonian pieces must be contiguous")
    return pieces


def _allocate(pieces: list[Piece], steps: int) -> list[int]:
    span = pieces[-1][1] - pieces[0][0]
    return [max(1, math.ceil(steps * (b - a) / span - 1e-9)) for a, b, _ in pieces]


def _evaluate(fn: Callable, times: np.ndarray) -> np.ndarray:
    """Evaluate ``fn`` on a time array, vectorised when it supports that."""
    probe = np.asarray(fn(times[0]), dtype=complex)
    d = probe.shape[-1]
    try:
        out = np.asarray(fn(times), dtype=complex)
    except Exception:
        out = None
    if out is None or out.shape != (len(times), d, d):
        out = np.stack([np.asarray(fn(t), dtype=complex) for t in times])
    if not np.all(np.isfinite(out)):
        raise EvolutionError("non-finite Hamiltonian sample")
    return out


def _rk4(pieces: list[Piece], y0: list[np.ndarray], adjoint: list[bool], cfg: IntegratorConfig):
    """Integrate several systems on one grid; returns checkpoint times and states."""
    ys = [np.array(y, dtype=complex) for y in y0]
    times = [pieces[0][0]]
    marks = [[y.copy()] for y in ys]
    stride = cfg.stride
    count = 0
    for (a, b, fn), n in zip(pieces, _allocate(pieces, cfg.steps)):
        h = (b - a) / n
        nodes = a + h * np.arange(n + 1)
        nodes[-1] = b
        hn = _evaluate(fn, nodes)
        hm = _evaluate(fn, a + h * (np.arange(n) + 0.5))
        gens = []
        for adj in adjoint:
            gn, gm = (dagger(hn), dagger(hm)) if adj else (hn, hm)
            gens.append((-1j * gn, -1j * gm))
        for k in range(n):
            for i, (gn, gm) in enumerate(gens):
                y = ys[i]
                k1 = gn[k] @ y
                k2 = gm[k] @ (y + 0.5 * h * k1)
                k3 = gm[k] @ (y + 0.5 * h * k2)
                k4 = gn[k + 1] @ (y + h * k3)
                y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                ys[i] = y
            count += 1
            last = k == n - 1 and b == pieces[-1][1]
            if count % stride == 0 or last:
                for i, y in enumerate(ys):
                    norm = np.linalg.norm(y)
                    if not np.isfinite(norm):
                        raise EvolutionError(f"non-finite state at t={nodes[k + 1]:.6g}")
                    if norm > NORM_LIMIT:
                        raise EvolutionError(f"propagator norm {norm:.3e} exceeds {NORM_LIMIT:.0e} at t={nodes[k + 1]:.6g}")
                    marks[i].append(y.copy())
                times.append(nodes[k + 1])
    return np.array(times), [np.array(m) for m in marks], count


def evolve_operator(h_of_t, t0: float, tf: float, cfg: IntegratorConfig | None = None,
                    breakpoints: Sequence[float] | None = None) -> EvolutionRecord:
    """Propagate ``U(t, t0)`` and its dual ``U~(t, t0)`` with classical RK4.

    ``h_of_t`` is either a callable ``t -> H`` (vectorised over ``t`` if
    possible) or a sequence of ``(ta, tb, fn)`` pieces covering ``[t0, tf]``.
    Interior ``breakpoints`` of a plain callable are aligned to step
    boundaries the same way.
    """
    cfg = cfg or IntegratorConfig()
    if not tf > t0:
        raise ValueError("tf must exceed t0")
    pieces = as_pieces(h_of_t, t0, tf, breakpoints)
    d = np.asarray(pieces[0][2](t0)).shape[-1]
    eye = np.eye(d, dtype=complex)
    times, (us, duals), total = _rk4(pieces, [eye, eye], [False, True], cfg)
    unitarity = np.linalg.norm(dagger(us) @ us - eye, axis=(1, 2))
    biortho = np.max(np.abs(dagger(duals) @ us - eye), axis=(1, 2))
    return EvolutionRecord(times, us, duals, unitarity, biortho, total,
                           meta={"scheme": cfg.scheme, "pieces": len(pieces)})


def evolve_state_pair(h_of_t, psi0, psitilde0, t0: float, tf: float, cfg: IntegratorConfig | None = None,
                      breakpoints: Sequence[float] | None = None, adjoint: bool = True) -> StateTrajectory:
    """Evolve ``|psi>`` under ``H`` and ``|psi~>`` under ``H^dagger`` on the same grid.

    ``adjoint=False`` evolves ``|psi~>`` under ``H`` as well; this is only
    useful as a negative control.
    """
    cfg = cfg or IntegratorConfig()
    pieces = as_pieces(h_of_t, t0, tf, breakpoints)
    times, (psi, psit), _ = _rk4(pieces, [np.asarray(psi0), np.asarray(psitilde0)], [False, adjoint], cfg)
    return StateTrajectory(times, psi, psit)


def biortho_residual(right, left) -> float:
    """``max_{m,n} |<left_m|right_n> - delta_mn|`` for column-stacked states (or single vectors)."""
    r = np.asarray(right, dtype=complex)
    l = np.asarray(left, dtype=complex)
    if r.ndim == 1:
        r, l = r[:, None], l[:, None]
    g = dagger(l) @ r
    return float(np.max(np.abs(g - np.eye(g.shape[0]))))


def write_checkpoints_csv(record: EvolutionRecord, fh) -> None:
    """Checkpoint table: ``t``, every ``U`` entry as re/im pairs in row-major order, unitarity residual."""
    d = record.operators.shape[-1]
    cols = ["t"]
    for i in range(d):
        for j in range(d):
            cols += [f"u{i}{j}_re", f"u{i}{j}_im"]
    cols.append("unitarity")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(cols)
    for t, u, r in zip(record.times, record.operators, record.unitarity):
        flat = u.reshape(-1)
        cells = [t]
        for z in flat:
            cells += [z.real, z.imag]
        cells.append(r)
        w.writerow([f"{float(x):.17g}" for x in cells])
