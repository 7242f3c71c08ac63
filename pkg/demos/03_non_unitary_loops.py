"""Non-unitary dynamics that closes into a unitary gate.

On a complex loop the Hamiltonian is not Hermitian and the propagator leaves
the unitary group midway. At the end of the loop it returns: U(tf) is a
special unitary rotation again. The dual state evolved under H^dagger keeps
its overlap with the state fixed the whole time.
"""

import math

import numpy as np

from nhgate import IntegratorConfig, evolve_state_pair, make_path, realize_gate
from nhgate.pulses import bloch_frame_vectors, extract_physical, hamiltonian_pieces, synthesize_pulses

path = make_path("complex-mlm", theta0=1.2, phi0=0.4, theta1=math.pi / 3, beta=0.1, gamma=0.05)
cfg = IntegratorConfig(steps=10_000, checkpoint_stride=1000)
r = realize_gate(path, cfg)

print("t        |U'U - I|")
for t, res in zip(r.record.times, r.record.unitarity):
    print(f"{t:6.3f}   {res:.3e}")
print(f"det U(tf) - 1 = {abs(np.linalg.det(r.realized) - 1):.1e}, distance to predicted gate {r.distance:.1e}")

drive = extract_physical(synthesize_pulses(path))
print(f"\nlargest decay-rate difference along the loop: {np.abs(drive.decay_diff).max():.3f}")
print(f"largest imaginary-drive amplitude:             {drive.rabi2.max():.3f}")

start = path.sample(path.t0)
psi0 = bloch_frame_vectors(complex(start.theta), complex(start.phi))[:, 0]
pieces = hamiltonian_pieces(path)
good = evolve_state_pair(pieces, psi0, psi0, path.t0, path.tf, cfg).overlaps()
bad = evolve_state_pair(pieces, psi0, psi0, path.t0, path.tf, cfg, adjoint=False).overlaps()
print(f"\noverlap drift with the dual under H^dagger: {np.abs(good - good[0]).max():.1e}")
print(f"same pair, both under H (control):         {np.abs(bad - bad[0]).max():.1e}")
