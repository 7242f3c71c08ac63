"""Geometric single- and two-qubit gates from non-Hermitian dynamics on complex-angle paths."""

__version__ = "0.1.0"

from .paths import ComplexAnglePath, list_families, make_path, reparametrize, validate_closure
from .pulses import extract_physical, synthesize_pulses
from .evolution import IntegratorConfig, evolve_operator, evolve_state_pair
from .geometry import all_routes, phase_line_integral, phase_solid_angle, phase_time_integral
from .gates import build_gate, name_gate, realize_gate, robustness_sweep
from .twoqubit import TwoAtomConfig, run_cz_protocol

__all__ = [
    "ComplexAnglePath", "IntegratorConfig", "TwoAtomConfig", "all_routes", "build_gate", "evolve_operator",
    "evolve_state_pair", "extract_physical", "list_families", "make_path", "name_gate", "phase_line_integral",
    "phase_solid_angle", "phase_time_integral", "realize_gate", "reparametrize", "robustness_sweep",
    "run_cz_protocol", "synthesize_pulses", "validate_closure",
]
