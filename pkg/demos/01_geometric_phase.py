"""The cyclic phase of a loop on the complexified Bloch sphere, three ways.

A latitude circle picks up half of the enclosed solid angle. Bending the loop
into the complex plane (an imaginary bump on the polar angle) changes the
phase, but the time integral, the connection line integral and the complex
solid angle still agree with each other.
"""

import math

from nhgate import all_routes, make_path

print("real latitude circles: alpha_- against pi (1 - cos theta0)")
for theta0 in (math.pi / 6, math.pi / 2, 2 * math.pi / 3):
    routes = all_routes(make_path("circle", theta0=theta0))
    cap = math.pi * (1 - math.cos(theta0))
    print(f"  theta0 = {theta0:.4f}  cap = {cap:.12f}")
    for r in routes:
        print(f"    {r.route:14s} {r.alpha_minus:.12f}")

print("\ncomplex-circle, theta0 = 1 with an imaginary excursion of height beta")
for beta in (0.0, 0.1, 0.3):
    vals = [r.alpha_minus for r in all_routes(make_path("complex-circle", theta0=1.0, beta=beta))]
    print(f"  beta = {beta:.1f}  alpha_- = {vals[0]:.12f}  spread over routes = {max(vals) - min(vals):.1e}")

print("\nthe loop through the pole: the line integral is singular, the phase is not")
for r in all_routes(make_path("circle", theta0=0.0)):
    print(f"  {r.route:14s} {r.alpha_minus:.3e}  {r.note}")
