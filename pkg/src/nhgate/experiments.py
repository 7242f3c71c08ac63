"""Experiment orchestration: config -> pipeline runs -> report files.

Every experiment kind produces a flat list of result rows (dicts) plus a list
of named assertions. Report files are named ``<experiment>-<digest12>.<ext>``
after the config content digest and are written atomically; no wall-clock or
host data goes into them, so the same config always yields the same bytes.
"""

from __future__ import annotations

import io
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import DEFAULT_DPHI_GRID, ExperimentConfig, build_path, number, with_value
from .evolution import IntegratorConfig, write_checkpoints_csv
from .gates import realize_gate, robustness_sweep
from .geometry import all_routes
from .paths import validate_closure
from .twoqubit import TwoAtomConfig, run_cz_protocol
from .verify import run_all

ENV_OUTPUT_DIR = "NHGATE_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "nhgate-out"

ROUTE_TOL = 1e-9
GATE_TOL = 1e-6
UNITARITY_TOL = 1e-7

COLUMNS = {
    "phase": ["path-id", "route", "alpha_plus", "alpha_minus", "raw_re", "raw_im"],
    "gate": ["path-id", "gate", "alpha", "theta", "phi", "distance", "unitarity_final",
             "unitarity_max", "det_re", "det_im", "biortho_max", "steps"],
    "robustness": ["dphi1", "dphi2", "f_exact", "f_geometric_approx", "f_dynamical_ref", "f_holonomic_ref"],
    "czgate": ["theta_target", "theta_effective", "leakage", "fid_00", "fid_01", "fid_10", "fid_11",
               "gate_fidelity", "mode", "u_over_omega", "u_over_rabi_min"],
    "verify-all": ["check", "module", "value", "tolerance", "relation", "passed"],
}


class AssertionFailure(RuntimeError):
    pass


@dataclass
class RunReport:
    experiment: str
    config_text: str
    digest: str
    results: list[dict]
    assertions: list[dict]
    extra_tables: dict[str, list[dict]] = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(a["passed"] for a in self.assertions)

    def residual_summary(self) -> dict:
        return {a["name"]: a["value"] for a in self.assertions}

    def document(self) -> dict:
        return {
            "schema": 1,
            "experiment": self.experiment,
            "toolkit_version": self.version,
            "config_digest": self.digest,
            "config": self.config_text,
            "results": self.results,
            "tables": self.extra_tables,
            "assertions": self.assertions,
            "residual_summary": self.residual_summary(),
            "passed": self.passed,
        }


def _assertion(name, value, tol, relation="<=") -> dict:
    value = float(value)
    ok = value <= tol if relation == "<=" else value >= tol
    return {"name": name, "value": value, "tolerance": tol, "relation": relation, "passed": bool(ok)}


def _integrator(raw: dict) -> IntegratorConfig:
    block = raw.get("integrator", {})
    return IntegratorConfig(steps=block.get("steps", 10_000), checkpoint_stride=block.get("checkpoint_stride"))


# --- single runs (top level so worker processes can pickle them) -------------


def run_phase(raw: dict) -> tuple[list[dict], list[dict]]:
    path = build_path(raw["path"])
    n_quad = int(number(raw.get("phase", {}).get("n_quad", 4096)))
    routes = all_routes(path, n_quad)
    rows = [r.record(path.label) for r in routes]
    vals = [r.alpha_minus for r in routes]
    closure = validate_closure(path)
    checks = [_assertion(f"{path.label}: route spread", max(vals) - min(vals), ROUTE_TOL),
              _assertion(f"{path.label}: closure", max(closure.residuals.values()), closure.tol)]
    return rows, checks


def run_gate(raw: dict, checkpoints: list | None = None) -> tuple[list[dict], list[dict]]:
    path = build_path(raw["path"])
    real = realize_gate(path, _integrator(raw))
    u = real.realized
    det = np.linalg.det(u)
    rec = real.record
    row = {
        "path-id": path.label, "gate": real.name, "alpha": real.target.alpha,
        "theta": real.target.theta, "phi": real.target.phi, "distance": real.distance,
        "unitarity_final": float(rec.unitarity[-1]), "unitarity_max": rec.max_unitarity,
        "det_re": float(det.real), "det_im": float(det.imag), "biortho_max": float(rec.biortho.max()),
        "steps": rec.steps,
    }
    if checkpoints is not None:
        checkpoints.append(rec)
    checks = [_assertion(f"{path.label}: gate distance", real.distance, GATE_TOL),
              _assertion(f"{path.label}: endpoint unitarity", rec.unitarity[-1], UNITARITY_TOL),
              _assertion(f"{path.label}: det - 1", abs(det - 1), UNITARITY_TOL)]
    return [row], checks


def _robustness_params(raw: dict) -> dict:
    block = raw.get("robustness", {})
    theta = number(block.get("theta", math.pi / 2))
    return {
        "theta": theta,
        "phi": number(block.get("phi", 0.0)),
        "alpha": number(block.get("alpha", math.pi / 2)),
        "theta0_ref": number(block.get("theta0_ref", theta)),
        "compare_theta": number(block.get("compare_theta", math.pi / 3)),
    }


def run_robustness(raw: dict, grid) -> tuple[list[dict], list[dict], dict]:
    p = _robustness_params(raw)
    cols = COLUMNS["robustness"]
    main = robustness_sweep(p["theta"], p["phi"], p["alpha"], grid, p["theta0_ref"])
    comp = robustness_sweep(p["compare_theta"], p["phi"], p["alpha"], grid, p["compare_theta"])
    rows = [dict(zip(cols, pt.row())) for pt in main]
    comp_rows = [dict(zip(cols, pt.row())) for pt in comp]
    checks = [
        _assertion("f_exact within [0, 1]", max(max(r["f_exact"] - 1, -r["f_exact"]) for r in rows), 0.0),
        _assertion("comparison regime: f_geometric_approx - f_holonomic_ref",
                   min(r["f_geometric_approx"] - r["f_holonomic_ref"] for r in comp_rows), 0.0, ">="),
    ]
    return rows, checks, {"comparison": comp_rows}


def _cz_config(raw: dict) -> TwoAtomConfig:
    block = raw.get("cz", {})
    kwargs = {k: number(block[k]) for k in ("u", "Theta", "pulse_T", "theta1") if k in block}
    return TwoAtomConfig(mode=block.get("mode", "full"), abstract=bool(block.get("abstract", False)), **kwargs)


def run_cz(raw: dict) -> tuple[list[dict], list[dict]]:
    res = run_cz_protocol(_cz_config(raw), _integrator(raw))
    rep = res.report()
    fids = rep.pop("per_basis_fidelities")
    rep.pop("breakdown")
    row = {"theta_target": rep["theta_target"], "theta_effective": rep["theta_effective"], "leakage": rep["leakage"]}
    row.update({f"fid_{k}": v for k, v in fids.items()})
    row.update({k: rep[k] for k in ("gate_fidelity", "mode", "u_over_omega", "u_over_rabi_min")})
    checks = [_assertion(f"u={res.config.u}: leakage", res.leakage, 0.1)]
    return [row], checks


def _run_point(kind: str, raw: dict):
    if kind == "phase":
        return run_phase(raw)
    if kind == "gate":
        return run_gate(raw)
    if kind == "czgate":
        return run_cz(raw)
    raise ValueError(kind)


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> RunReport:
    """Execute the configured pipeline; assertion outcomes are in the report, not raised."""
    start = time.perf_counter()
    raw = cfg.raw
    extra: dict[str, list[dict]] = {}
    rows: list[dict] = []
    checks: list[dict] = []
    if cfg.kind == "verify-all":
        steps = raw.get("integrator", {}).get("steps", 10_000)
        for c in run_all(cfg.seed, steps):
            rows.append(c.record())
            checks.append(_assertion(c.name, c.value, c.tol, c.relation))
    elif cfg.kind == "robustness":
        grid = cfg.sweep["grid"] if cfg.sweep else list(DEFAULT_DPHI_GRID)
        rows, checks, extra = run_robustness(raw, grid)
    elif cfg.kind == "gate" and not cfg.sweep and raw.get("integrator", {}).get("checkpoints", False):
        records: list = []
        rows, checks = run_gate(raw, records)
        buf = io.StringIO()
        write_checkpoints_csv(records[0], buf)
        extra["checkpoints"] = buf.getvalue()
    elif cfg.sweep:
        raws = [with_value(raw, cfg.sweep["parameter"], v) for v in cfg.sweep["grid"]]
        if workers > 1 and len(raws) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outs = list(pool.map(_run_point, [cfg.kind] * len(raws), raws))
        else:
            outs = [_run_point(cfg.kind, r) for r in raws]
        for value, (r, c) in zip(cfg.sweep["grid"], outs):
            for row in r:
                row["sweep_value"] = value
            rows += r
            checks += c
    else:
        rows, checks = _run_point(cfg.kind, raw)
    return RunReport(cfg.kind, cfg.text, cfg.digest, rows, checks, extra, time.perf_counter() - start)


# --- report files -----------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def rows_to_csv(rows: list[dict], columns: list[str]) -> str:
    cols = list(columns)
    for r in rows:
        cols += [k for k in r if k not in cols]
    lines = [",".join(cols)]
    for r in rows:
        lines.append(",".join(_csv_escape(_cell(r.get(c))) for c in cols))
    return "\n".join(lines) + "\n"


def _csv_escape(s: str) -> str:
    return '"' + s.replace('"', '""') + '"' if any(ch in s for ch in ',"\n') else s


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def emit_report(report: RunReport, formats, directory) -> list[str]:
    """Write the report in each requested format; returns the written paths in order."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {directory}: {exc}") from exc
    if not os.access(directory, os.W_OK):
        raise OSError(f"output directory {directory} is not writable")
    stem = f"{report.experiment}-{report.digest[:12]}"
    written = []
    cols = COLUMNS[report.experiment]
    if "csv" in formats:
        target = directory / f"{stem}.csv"
        _atomic_write(target, rows_to_csv(report.results, cols))
        written.append(str(target))
        for name, table in report.extra_tables.items():
            target = directory / f"{stem}-{name}.csv"
            _atomic_write(target, table if isinstance(table, str) else rows_to_csv(table, cols))
            written.append(str(target))
    if "json" in formats:
        doc = report.document()
        doc["tables"] = {k: v for k, v in doc["tables"].items() if not isinstance(v, str)}
        target = directory / f"{stem}.json"
        _atomic_write(target, json.dumps(_json_safe(doc), indent=2, sort_keys=True) + "\n")
        written.append(str(target))
    return written


def resolve_output_dir(cli_value: str | None, cfg: ExperimentConfig | None) -> str:
    """``--output`` flag, then ``$NHGATE_OUTPUT_DIR``, then the config's ``output.directory``."""
    if cli_value:
        return cli_value
    env = os.environ.get(ENV_OUTPUT_DIR)
    if env:
        return env
    if cfg is not None and cfg.output.get("directory"):
        return str(cfg.output["directory"])
    return DEFAULT_OUTPUT_DIR
