"""Experiment configuration files (TOML).

Grammar (schema 1)::

    schema = 1
    experiment = "gate"            # phase | gate | robustness | czgate | verify-all
    seed = 20240601                # optional

    [path]                         # phase, gate; family + its parameters
    family = "mlm"
    theta0 = "pi/2"                # numbers or arithmetic strings over pi
    phi0 = "pi"
    theta1 = "pi/3"

    [integrator]
    steps = 10000
    checkpoint_stride = 1000
    checkpoints = false            # gate: also dump the checkpoint table

    [phase]
    n_quad = 4096

    [robustness]
    theta = "pi/2"
    phi = 0.0
    alpha = "pi/2"
    theta0_ref = "pi/2"            # defaults to theta
    compare_theta = "pi/3"         # second regime printed alongside

    [cz]
    u = 0.01
    Theta = "pi"
    mode = "full"                  # or "idealized"
    pulse_T = 1.0
    theta1 = "pi/3"

    [sweep]                        # optional
    parameter = "path.theta1"      # dotted key; "dphi1" for robustness
    grid = [0.5, 1.0, 1.5]

    [output]
    directory = "out"
    formats = ["csv", "json"]
"""

from __future__ import annotations

import ast
import hashlib
import math
import operator
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .paths import FAMILIES, make_path

SCHEMA_VERSION = 1
KINDS = ("phase", "gate", "robustness", "czgate", "verify-all")
FORMATS = ("csv", "json")
TOP_KEYS = {"schema", "experiment", "seed", "path", "integrator", "phase", "robustness", "cz", "sweep", "output"}
DEFAULT_SEED = 20240601
DEFAULT_DPHI_GRID = (0.01, 0.02, 0.05, 0.1, 0.2)


class ConfigParseError(ValueError):
    pass


class ConfigValidationError(ValueError):
    pass


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
        ast.Pow: operator.pow, ast.USub: operator.neg, ast.UAdd: operator.pos}


def number(value) -> float:
    """A float from a TOML number or an arithmetic string such as ``"2*pi/3"``."""
    if isinstance(value, bool):
        raise ConfigValidationError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigValidationError(f"expected a number, got {value!r}")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ConfigValidationError(f"unsupported expression {value!r}")

    try:
        return ev(ast.parse(value, mode="eval"))
    except SyntaxError as exc:
        raise ConfigValidationError(f"cannot parse number {value!r}") from exc


@dataclass
class ExperimentConfig:
    kind: str
    raw: dict
    text: str
    seed: int = DEFAULT_SEED
    path: dict | None = None
    integrator: dict = field(default_factory=dict)
    sweep: dict | None = None
    output: dict = field(default_factory=dict)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()

    def block(self, name: str) -> dict:
        return dict(self.raw.get(name, {}))


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigParseError(str(exc)) from exc
    return validate(raw, text)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            text = fh.read().decode("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    return parse_config(text)


def path_params(block: dict) -> tuple[str, dict]:
    block = dict(block)
    family = block.pop("family", None)
    if family is None:
        raise ConfigValidationError("path block is missing 'family'")
    if family not in FAMILIES:
        raise ConfigValidationError(f"unknown path family {family!r}")
    return family, {k: number(v) for k, v in block.items()}


def build_path(block: dict):
    family, params = path_params(block)
    try:
        return make_path(family, **params)
    except ValueError as exc:
        raise ConfigValidationError(str(exc)) from exc


def validate(raw: dict, text: str = "") -> ExperimentConfig:
    unknown = set(raw) - TOP_KEYS
    if unknown:
        raise ConfigValidationError(f"unknown top-level key(s): {sorted(unknown)}")
    schema = raw.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ConfigValidationError(f"unsupported schema {schema!r} (expected {SCHEMA_VERSION})")
    kind = raw.get("experiment")
    if kind not in KINDS:
        raise ConfigValidationError(f"experiment must be one of {list(KINDS)}, got {kind!r}")
    seed = raw.get("seed", DEFAULT_SEED)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigValidationError("seed must be an integer")

    path = raw.get("path")
    if kind in ("phase", "gate"):
        if not isinstance(path, dict):
            raise ConfigValidationError(f"experiment {kind!r} needs a [path] block")
    if path is not None:
        build_path(path)

    integ = dict(raw.get("integrator", {}))
    extra = set(integ) - {"steps", "checkpoint_stride", "checkpoints"}
    if extra:
        raise ConfigValidationError(f"unknown integrator key(s): {sorted(extra)}")
    if not isinstance(integ.get("checkpoints", False), bool):
        raise ConfigValidationError("integrator.checkpoints must be a boolean")
    for key in ("steps", "checkpoint_stride"):
        if key in integ and (not isinstance(integ[key], int) or integ[key] < 1):
            raise ConfigValidationError(f"integrator.{key} must be a positive integer")
    if integ.get("steps", 10_000) < 10:
        raise ConfigValidationError("integrator.steps must be at least 10")

    for name in ("phase", "robustness", "cz"):
        for key, value in raw.get(name, {}).items():
            if key in ("mode",):
                continue
            if key == "abstract":
                if not isinstance(value, bool):
                    raise ConfigValidationError("cz.abstract must be a boolean")
                continue
            number(value)
    if raw.get("cz", {}).get("mode", "full") not in ("full", "idealized"):
        raise ConfigValidationError("cz.mode must be 'full' or 'idealized'")

    sweep = raw.get("sweep")
    if sweep is not None:
        if "parameter" not in sweep or "grid" not in sweep:
            raise ConfigValidationError("sweep block needs 'parameter' and 'grid'")
        grid = sweep["grid"]
        if not isinstance(grid, list) or not grid:
            raise ConfigValidationError("sweep.grid must be a non-empty list")
        sweep = {"parameter": str(sweep["parameter"]), "grid": [number(g) for g in grid]}
        _check_sweep_target(raw, kind, sweep["parameter"])
        if sweep["parameter"].startswith("path."):
            for g in sweep["grid"]:
                build_path(with_value(raw, sweep["parameter"], g)["path"])

    output = dict(raw.get("output", {}))
    formats = output.get("formats", list(FORMATS))
    if isinstance(formats, str):
        formats = [formats]
    if not formats or any(f not in FORMATS for f in formats):
        raise ConfigValidationError(f"output.formats must be a non-empty subset of {list(FORMATS)}")
    output["formats"] = list(formats)
    return ExperimentConfig(kind, raw, text, seed, path, integ, sweep, output)


def _check_sweep_target(raw: dict, kind: str, parameter: str) -> None:
    if kind == "robustness":
        if parameter != "dphi1":
            raise ConfigValidationError("robustness sweeps run over 'dphi1'")
        return
    section, _, key = parameter.partition(".")
    if section not in ("path", "cz", "phase", "robustness") or not key:
        raise ConfigValidationError(f"cannot sweep {parameter!r}; use a dotted key like 'path.theta1'")
    if section == "path":
        family = raw.get("path", {}).get("family")
        if family in FAMILIES and key not in FAMILIES[family]:
            raise ConfigValidationError(f"family {family!r} has no parameter {key!r}")


def with_value(raw: dict, dotted: str, value: float) -> dict:
    """Copy of ``raw`` with one dotted key set."""
    section, _, key = dotted.partition(".")
    out = {k: (dict(v) if isinstance(v, dict) else v) for k, v in raw.items()}
    out.setdefault(section, {})[key] = value
    return out
