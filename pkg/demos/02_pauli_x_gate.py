"""Meridian-latitude-meridian loops driven into an X gate.

Starting on the equator, the loop runs down a meridian to theta1, around the
latitude and back. The rotation angle is 2 pi sin^2(theta1 / 2), so theta1 =
pi / 3 gives a quarter turn about the start axis: iX from phi0 = pi and -iX
from phi0 = 0. We integrate the synthesized pulses and compare.
"""

import math

import numpy as np

from nhgate import IntegratorConfig, make_path, realize_gate

np.set_printoptions(precision=6, suppress=True)

for phi0 in (math.pi, 0.0):
    path = make_path("mlm", theta0=math.pi / 2, phi0=phi0, theta1=math.pi / 3)
    r = realize_gate(path, IntegratorConfig(steps=10_000))
    print(f"phi0 = {phi0:.4f}: realized {r.name}, distance to target {r.distance:.2e}")
    print(r.realized)

print("\nconvergence of the fixed-step integrator (distance vs steps)")
path = make_path("mlm", theta0=math.pi / 2, phi0=math.pi, theta1=math.pi / 3)
prev = None
for steps in (125, 250, 500, 1000, 2000):
    d = realize_gate(path, IntegratorConfig(steps=steps)).distance
    ratio = "" if prev is None else f"  ratio {prev / d:5.1f}"
    print(f"  {steps:5d}  {d:.3e}{ratio}")
    prev = d
