"""Complex-angle trajectories on the complex Bloch sphere.

A path is a chain of smooth segments. Each segment stores its angles as
closed-form functions of a normalised parameter ``s`` in ``[0, 1]``; the
segment's time window maps onto ``s`` linearly, and time derivatives follow
by the chain rule. All callables accept numpy arrays.

Built-in families
-----------------
``circle``
    Latitude loop at fixed polar angle: ``theta = theta0``,
    ``phi = phi0 + 2 pi t / T``.
``mlm``
    Meridian down to ``theta1``, a full latitude circle there, meridian back.
    The phase of the loop only depends on ``theta1``; the start point fixes the
    rotation axis.
``complex-circle``, ``complex-mlm``
    The same loops with imaginary ``sin^2`` bumps added to both angles; the
    bumps vanish (with their first derivative) at every segment endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

CLOSURE_TOL = 1e-10

Fn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Segment:
    """One smooth piece of a path on ``[t_start, t_end]``.

    ``theta``/``phi`` and their ``s``-derivatives are functions of the
    normalised parameter ``s = (t - t_start) / (t_end - t_start)``. They are
    evaluated outside ``[0, 1]`` too when a caller needs the analytic
    continuation of a segment (finite differences near a junction).
    """

    t_start: float
    t_end: float
    theta: Fn
    phi: Fn
    dtheta_ds: Fn
    dphi_ds: Fn
    name: str = ""

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class PathSample:
    t: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    dtheta: np.ndarray
    dphi: np.ndarray


@dataclass(frozen=True)
class ComplexAnglePath:
    family: str
    params: dict
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a path needs at least one segment")
        for seg in self.segments:
            if not seg.t_end > seg.t_start:
                raise ValueError(f"segment {seg.name!r} has non-positive duration")
        for a, b in zip(self.segments, self.segments[1:]):
            if a.t_end != b.t_start:
                raise ValueError("segments must partition the time window without gaps or overlaps")

    @property
    def t0(self) -> float:
        return self.segments[0].t_start

    @property
    def tf(self) -> float:
        return self.segments[-1].t_end

    @property
    def breakpoints(self) -> list[float]:
        """Segment boundaries including ``t0`` and ``tf``."""
        return [self.t0] + [seg.t_end for seg in self.segments]

    @property
    def junctions(self) -> list[float]:
        """Interior segment boundaries."""
        return [seg.t_end for seg in self.segments[:-1]]

    @property
    def label(self) -> str:
        inner = ",".join(f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()))
        return f"{self.family}({inner})"

    def segment_index(self, t) -> np.ndarray:
        """Index of the segment owning ``t`` (right-continuous at junctions)."""
        starts = np.array([seg.t_start for seg in self.segments])
        idx = np.searchsorted(starts, np.asarray(t, dtype=float), side="right") - 1
        return np.clip(idx, 0, len(self.segments) - 1)

    def sample(self, t, segment: int | None = None) -> PathSample:
        """Angles and time derivatives at ``t`` (scalar or array).

        With ``segment`` given, that segment's closed forms are used for every
        ``t`` and no domain check is made.
        """
        t = np.asarray(t, dtype=float)
        if segment is not None:
            return self._eval_segment(segment, t)
        span = self.tf - self.t0
        slack = 1e-12 * span
        if np.any(t < self.t0 - slack) or np.any(t > self.tf + slack):
            raise ValueError(f"t outside path domain [{self.t0}, {self.tf}]")
        idx = self.segment_index(t)
        if t.ndim == 0:
            return self._eval_segment(int(idx), t)
        out = {k: np.empty(t.shape, dtype=complex) for k in ("theta", "phi", "dtheta", "dphi")}
        for j in np.unique(idx):
            mask = idx == j
            part = self._eval_segment(int(j), t[mask])
            for k in out:
                out[k][mask] = getattr(part, k)
        return PathSample(t=t, **out)

    def _eval_segment(self, j: int, t: np.ndarray) -> PathSample:
        seg = self.segments[j]
        s = (t - seg.t_start) / seg.duration
        return PathSample(
            t=t,
            theta=_c(seg.theta(s), s),
            phi=_c(seg.phi(s), s),
            dtheta=_c(seg.dtheta_ds(s), s) / seg.duration,
            dphi=_c(seg.dphi_ds(s), s) / seg.duration,
        )


def _c(values, s) -> np.ndarray:
    return np.asarray(values, dtype=complex) + np.zeros(np.shape(s))


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, (int, float)) else str(v)


# --- segment builders -------------------------------------------------------


def _const(value: complex) -> Fn:
    return lambda s: value + 0 * s


def _linear(start: float, stop: float) -> tuple[Fn, Fn]:
    slope = stop - start
    return (lambda s: start + slope * s), _const(slope)


def _bump(amplitude: float) -> tuple[Fn, Fn]:
    # i * a * sin^2(pi s): zero value and zero slope at s = 0 and s = 1
    return (
        lambda s: 1j * amplitude * np.sin(np.pi * s) ** 2,
        lambda s: 1j * amplitude * np.pi * np.sin(2 * np.pi * s),
    )


def _add(f: Fn, g: Fn) -> Fn:
    return lambda s: f(s) + g(s)


def _segment(t_start, t_end, theta, phi, name, beta=0.0, gamma=0.0) -> Segment:
    (th, dth), (ph, dph) = theta, phi
    if beta:
        b, db = _bump(beta)
        th, dth = _add(th, b), _add(dth, db)
    if gamma:
        g, dg = _bump(gamma)
        ph, dph = _add(ph, g), _add(dph, dg)
    return Segment(t_start, t_end, th, ph, dth, dph, name)


# --- families ---------------------------------------------------------------

FAMILIES: dict[str, dict[str, float | None]] = {
    "circle": {"theta0": None, "phi0": 0.0, "T": 1.0, "t0": 0.0, "winding": 1.0},
    "complex-circle": {
        "theta0": None, "phi0": 0.0, "T": 1.0, "t0": 0.0, "winding": 1.0,
        "beta": 0.0, "gamma": 0.0,
    },
    "mlm": {
        "theta0": None, "phi0": 0.0, "theta1": None, "T": 1.0, "t0": 0.0, "winding": 1.0,
        "frac_down": 0.25, "frac_latitude": 0.5, "frac_up": 0.25,
    },
    "complex-mlm": {
        "theta0": None, "phi0": 0.0, "theta1": None, "T": 1.0, "t0": 0.0, "winding": 1.0,
        "frac_down": 0.25, "frac_latitude": 0.5, "frac_up": 0.25,
        "beta": 0.0, "gamma": 0.0,
    },
}


def list_families() -> dict[str, dict[str, float | None]]:
    """Family name -> parameter defaults (``None`` marks a required parameter)."""
    return {k: dict(v) for k, v in FAMILIES.items()}


def _resolve(family: str, params: dict) -> dict:
    if family not in FAMILIES:
        raise ValueError(f"unknown path family {family!r}; expected one of {sorted(FAMILIES)}")
    spec = FAMILIES[family]
    unknown = set(params) - set(spec)
    if unknown:
        raise ValueError(f"unknown parameter(s) for {family!r}: {sorted(unknown)}")
    out = {}
    for key, default in spec.items():
        if key in params:
            value = float(params[key])
        elif default is None:
            raise ValueError(f"missing required parameter {key!r} for family {family!r}")
        else:
            value = float(default)
        if not math.isfinite(value):
            raise ValueError(f"parameter {key!r} is not finite")
        out[key] = value
    if out["T"] <= 0:
        raise ValueError("T must be positive")
    if out["winding"] not in (1.0, -1.0):
        raise ValueError("winding must be +1 or -1")
    return out


def make_path(family: str, **params) -> ComplexAnglePath:
    """Build a closed path of a built-in family.

    >>> p = make_path("circle", theta0=math.pi / 2)
    >>> float(p.sample(0.25).phi.real) == math.pi / 2
    True
    """
    p = _resolve(family, params)
    t0, T, w = p["t0"], p["T"], p["winding"]
    beta, gamma = p.get("beta", 0.0), p.get("gamma", 0.0)
    sweep = _linear(p["phi0"], p["phi0"] + w * 2 * math.pi)

    if family in ("circle", "complex-circle"):
        if not 0.0 <= p["theta0"] <= math.pi:
            raise ValueError("theta0 must lie in [0, pi]")
        seg = _segment(t0, t0 + T, (_const(p["theta0"]), _const(0.0)), sweep, "latitude", beta, gamma)
        return ComplexAnglePath(family, params_echo(p, family), (seg,))

    th0, th1, ph0 = p["theta0"], p["theta1"], p["phi0"]
    for key in ("theta0", "theta1"):
        if not 0.0 < p[key] < math.pi:
            raise ValueError(f"{key} must lie strictly inside (0, pi)")
    fracs = np.array([p["frac_down"], p["frac_latitude"], p["frac_up"]])
    if np.any(fracs <= 0):
        raise ValueError("segment fractions must be positive")
    cuts = t0 + T * np.concatenate([[0.0], np.cumsum(fracs / fracs.sum())])
    cuts[-1] = t0 + T
    fixed_phi = (_const(ph0), _const(0.0))
    segs = (
        _segment(cuts[0], cuts[1], _linear(th0, th1), fixed_phi, "meridian-down", beta, gamma),
        _segment(cuts[1], cuts[2], (_const(th1), _const(0.0)), sweep, "latitude", beta, gamma),
        _segment(cuts[2], cuts[3], _linear(th1, th0), fixed_phi, "meridian-up", beta, gamma),
    )
    return ComplexAnglePath(family, params_echo(p, family), segs)


def params_echo(resolved: dict, family: str) -> dict:
    return {k: v for k, v in resolved.items() if k in FAMILIES[family]}


def smoothstep(s):
    return s * s * (3 - 2 * s)


def smoothstep_rate(s):
    return 6 * s * (1 - s)


def reparametrize(path: ComplexAnglePath, g: Fn = smoothstep, dg: Fn = smoothstep_rate) -> ComplexAnglePath:
    """Traverse every segment with the monotone map ``s -> g(s)`` of ``[0, 1]`` onto itself.

    The geometric curve is unchanged; only the speed along it changes.
    """
    segs = []
    for seg in path.segments:
        segs.append(
            Segment(
                seg.t_start,
                seg.t_end,
                (lambda s, f=seg.theta: f(g(s))),
                (lambda s, f=seg.phi: f(g(s))),
                (lambda s, f=seg.dtheta_ds: f(g(s)) * dg(s)),
                (lambda s, f=seg.dphi_ds: f(g(s)) * dg(s)),
                seg.name,
            )
        )
    return ComplexAnglePath(path.family + "+reparam", dict(path.params), tuple(segs))


def shift_phi(path: ComplexAnglePath, delta: complex) -> ComplexAnglePath:
    """Offset the azimuth of every segment by the constant ``delta``."""
    segs = tuple(
        Segment(
            seg.t_start, seg.t_end, seg.theta,
            (lambda s, f=seg.phi: f(s) + delta),
            seg.dtheta_ds, seg.dphi_ds, seg.name,
        )
        for seg in path.segments
    )
    params = dict(path.params, dphi1=float(np.real(delta)), dphi2=float(np.imag(delta)))
    return ComplexAnglePath(path.family + "+shift", params, segs)


# --- validation -------------------------------------------------------------


@dataclass
class ClosureReport:
    residuals: dict[str, float]
    tol: float
    strict: bool
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _wrap(x: float) -> float:
    """Map an angle difference into ``[-pi, pi)``."""
    return (x + math.pi) % (2 * math.pi) - math.pi


def validate_closure(path: ComplexAnglePath, tol: float = CLOSURE_TOL, strict: bool = False) -> ClosureReport:
    """Check boundary realness, loop closure and segment continuity (azimuth taken mod 2 pi).

    ``strict`` additionally requires real endpoint derivatives, which keeps the
    extracted drive amplitudes and phases real at the loop endpoints.
    """
    first = path.sample(path.t0, segment=0)
    last = path.sample(path.tf, segment=len(path.segments) - 1)
    th0, ph0 = complex(first.theta), complex(first.phi)
    thf, phf = complex(last.theta), complex(last.phi)
    res = {
        "im_theta_t0": abs(th0.imag),
        "im_theta_tf": abs(thf.imag),
        "im_phi_t0": abs(ph0.imag),
        "im_phi_tf": abs(phf.imag),
        "theta_mismatch": abs(thf - th0),
        "phi_mismatch": math.hypot(_wrap(phf.real - ph0.real), phf.imag - ph0.imag),
    }
    jump = 0.0
    for j, seg in enumerate(path.segments[:-1]):
        a = path.sample(seg.t_end, segment=j)
        b = path.sample(seg.t_end, segment=j + 1)
        dphi = complex(b.phi) - complex(a.phi)
        jump = max(jump, abs(complex(a.theta) - complex(b.theta)), math.hypot(_wrap(dphi.real), dphi.imag))
    res["junction_jump"] = jump
    if strict:
        res["im_dtheta_t0"] = abs(complex(first.dtheta).imag)
        res["im_dtheta_tf"] = abs(complex(last.dtheta).imag)
        res["im_dphi_t0"] = abs(complex(first.dphi).imag)
        res["im_dphi_tf"] = abs(complex(last.dphi).imag)
    failures = [k for k, v in res.items() if not v <= tol]
    return ClosureReport(res, tol, strict, failures)


def is_closed(path: ComplexAnglePath, tol: float = CLOSURE_TOL) -> bool:
    """Loop closure and continuity only, ignoring boundary realness."""
    r = validate_closure(path, tol).residuals
    return max(r["theta_mismatch"], r["phi_mismatch"], r["junction_jump"]) <= tol
