"""How the geometric gate degrades under a constant azimuth error.

A shift phi -> phi + dphi tilts the rotation axis while leaving every drive
amplitude and the detuning unchanged. The exact fidelity is compared with its
second-order form and with the dynamical and holonomic reference curves.
"""

import math

from nhgate import make_path, robustness_sweep
from nhgate.gates import DeviationSpec, apply_polar_deviation

grid = (0.01, 0.02, 0.05, 0.1, 0.2)
for theta, label in ((math.pi / 2, "theta = pi/2"), (math.pi / 3, "theta = pi/3")):
    print(f"\nalpha = pi/2, {label}")
    print("  dphi    exact          2nd order      dynamical      holonomic")
    for p in robustness_sweep(theta, 0.0, math.pi / 2, grid):
        print(f"  {p.deviation.dphi1:.2f}  {p.f_exact:.10f}  {p.f_geometric_approx:.10f}  "
              f"{p.f_dynamical_ref:.10f}  {p.f_holonomic_ref:.10f}")

_, rep = apply_polar_deviation(make_path("complex-circle", theta0=math.pi / 2, beta=0.1), DeviationSpec(0.05, 0.02))
print("\ncomplex shift 0.05 + 0.02i on a complex loop:")
print(f"  Rabi amplitude change {max(rep.rabi1_residual, rep.rabi2_residual):.3e}")
print(f"  R1 R2 cos(p1 - p2) change {rep.invariant_residual:.1e}")
