"""Angle-output step test with a third-order ARX structure.

The rotor angle deviation integrates the speed deviation, so a power step
makes it ramp with slope R times the step. Each discretization now has an
extra pole at z = 1. Estimation and recovery still return the original
parameters.

Run:  python3 demos/case2_angle.py
"""

import numpy as np

from arxgen import GeneratorParams, ScenarioConfig, discretize, estimate_parameters, generate_dataset

p = GeneratorParams(H=2.5, R=0.05, T=0.5)
scenario = ScenarioConfig(noise_variance=1e-4, rng_seed=7)

for method in ("zoh", "tustin"):
    m = discretize(p, 0.1, method, "delta")
    print(f"{method}: poles {np.round(m.poles(), 6)}")

ds = generate_dataset(p, 0.01, ScenarioConfig(noise_variance=0.0), "zoh", "delta")
slope = (ds.y.values[-1] - ds.y.values[-101]) / 1.0
print(f"\nramp slope over the final second {slope:.6f} (R * step = {p.R * 0.2:.6f})")

print(f"\n  {'method':<8}{'h':>7}{'T':>10}{'R':>10}{'H':>10}")
for method in ("zoh", "tustin"):
    for h in (0.1, 0.01, 0.001):
        ds = generate_dataset(p, h, scenario, method, "delta")
        q = estimate_parameters(ds.u, ds.y, method, "delta").params
        print(f"  {method:<8}{h:>7g}{q.T:>10.4f}{q.R:>10.5f}{q.H:>10.4f}")
