import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nhgate.config import ConfigParseError, ConfigValidationError, number, parse_config, with_value

GATE = """
schema = 1
experiment = "gate"
[path]
family = "mlm"
theta0 = "pi/2"
phi0 = "pi"
theta1 = "pi/3"
"""


def test_gate_config_parses():
    cfg = parse_config(GATE)
    assert cfg.kind == "gate" and cfg.seed == 20240601
    assert cfg.output["formats"] == ["csv", "json"]
    assert len(cfg.digest) == 64


@pytest.mark.parametrize("text, expected", [("pi", math.pi), ("2*pi/3", 2 * math.pi / 3), ("-pi/2", -math.pi / 2),
                                            ("1e-3", 1e-3), ("2**3", 8.0)])
def test_number_expressions(text, expected):
    assert number(text) == pytest.approx(expected)


@pytest.mark.parametrize("text", ["__import__('os')", "pi.real", "x", "[1]", "1 +"])
def test_number_rejects_code(text):
    with pytest.raises(ConfigValidationError):
        number(text)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_number_round_trip(x):
    assert number(x) == x
    assert number(repr(x)) == x


def test_broken_toml_is_parse_error():
    with pytest.raises(ConfigParseError):
        parse_config("experiment = ")


@pytest.mark.parametrize("patch, match", [
    ('experiment = "gate"\n[path]\ntheta0 = 1.0\n', "family"),
    ('experiment = "gate"\n', r"\[path\]"),
    ('experiment = "dance"\n', "experiment"),
    ('experiment = "phase"\nbogus = 1\n[path]\nfamily="circle"\ntheta0=1\n', "top-level"),
    ('experiment = "phase"\n[path]\nfamily="circle"\ntheta0=4\n', "theta0"),
    ('experiment = "phase"\n[path]\nfamily="circle"\ntheta0=1\n[sweep]\nparameter="path.theta0"\ngrid=[]\n', "non-empty"),
    ('experiment = "phase"\n[path]\nfamily="circle"\ntheta0=1\n[sweep]\nparameter="path.theta0"\ngrid=[1, 5]\n', "theta0"),
    ('experiment = "phase"\n[path]\nfamily="circle"\ntheta0=1\n[sweep]\nparameter="path.theta1"\ngrid=[1]\n', "no parameter"),
    ('experiment = "phase"\n[path]\nfamily="circle"\ntheta0=1\n[output]\nformats=["xml"]\n', "formats"),
    ('experiment = "czgate"\n[cz]\nmode = "half"\n', "mode"),
    ('experiment = "phase"\n[path]\nfamily="circle"\ntheta0=1\n[integrator]\nsteps=3\n', "steps"),
    ('schema = 2\nexperiment = "phase"\n', "schema"),
    ('experiment = "robustness"\n[sweep]\nparameter="alpha"\ngrid=[0.1]\n', "dphi1"),
])
def test_validation_errors(patch, match):
    with pytest.raises(ConfigValidationError, match=match):
        parse_config(patch)


def test_with_value_copies():
    raw = parse_config(GATE).raw
    out = with_value(raw, "path.theta1", 0.5)
    assert out["path"]["theta1"] == 0.5
    assert raw["path"]["theta1"] == "pi/3"
