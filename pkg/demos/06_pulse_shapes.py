"""Physical drive parameters for a complex loop, written as CSV.

Each sample gives the real and imaginary Rabi amplitudes and phases, the
detuning and the decay-rate difference. Usage: python 06_pulse_shapes.py [out.csv]
"""

import math
import sys

import numpy as np

from nhgate import extract_physical, make_path, synthesize_pulses
from nhgate.pulses import write_drive_csv

path = make_path("complex-circle", theta0=math.pi / 2, beta=0.1, gamma=0.05)
drive = extract_physical(synthesize_pulses(path, 201))

for name in ("rabi1", "rabi2", "detuning", "decay_diff"):
    v = getattr(drive, name)
    print(f"{name:10s} min {v.min():+.4f}  max {v.max():+.4f}")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w", newline="") as fh:
        write_drive_csv(drive, fh)
    print(f"wrote {len(drive.times)} samples to {sys.argv[1]}")
else:
    print("pass a file name to write the samples")
print(f"loop is closed: endpoints differ by {np.abs(drive.rabi1[0] - drive.rabi1[-1]):.1e} in rabi1")
