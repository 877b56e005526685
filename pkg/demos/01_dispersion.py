"""Lattice dispersion: the physical root, upsilon and the branch points.

Run: python3 demos/01_dispersion.py
"""

import numpy as np

from latticewh.dispersion import (
    ContinuousDispersion,
    LatticeDispersion,
    branch_points,
    gamma,
    q_physical,
    unit_circle,
    upsilon,
)

disp = LatticeDispersion(1 + 0.2j)
print(f"kt = {disp.ktilde}")

# On the unit circle the physical root decays: |q| < 1 everywhere.
s = unit_circle(256)
q = q_physical(s, disp)
print(f"max |q| on |s| = 1: {np.abs(q).max():.4f}")

# The four branch points come in reciprocal pairs; the roots coalesce there.
for name, eta in branch_points(disp).items():
    print(f"{name} = {eta:.6f}   q = {q_physical(eta, disp, on_cut='ignore'):.3f}")

# Lossless kt**2 = 2 gives the closed-form set {+-i, 2 +- sqrt 3}.
print("kt^2 = 2:", {k: np.round(v, 12) for k, v in branch_points(2.0).items()})

# Continuum limit: upsilon(exp(i xi h)) / h approaches i gamma(xi).
k = 1 + 0.5j
xi = np.linspace(-2, 2, 5)
for h in (1e-1, 1e-2, 1e-3):
    d = LatticeDispersion.from_continuous(k, h)
    err = np.abs(upsilon(np.exp(1j * xi * h), d) / h - 1j * gamma(xi, ContinuousDispersion(k)))
    print(f"h = {h:.0e}: max error {err.max():.2e}")
