"""Matrix problems checked against the brute-force lattice.

The 2x2 finite-strip and staggered-plate equations, and the scalar
quarter-plane equation in two complex variables, are evaluated with
spectra extracted from truncated direct solves. The residual is the
truncation error and shrinks geometrically with the box size.

Run: python3 demos/06_matrix_oracles.py
"""

import numpy as np

from latticewh.direct_oracle import (
    TruncatedProblem,
    extract_spectra,
    extract_spectra_3d,
    solve,
    solve_3d,
)
from latticewh.dispersion import unit_circle
from latticewh.wh_catalog import discrete_problem, wh_residual

s = unit_circle(64) * np.exp(1j * np.pi / 64)
for name, geo in (("finite-strip", dict(M=3)), ("staggered", dict(M=2, N=3))):
    spec = discrete_problem(name, 1 + 0.2j, 1.5, **geo)
    for R in (25, 50, 100):
        sp = extract_spectra(solve(TruncatedProblem(spec, R)), s)
        r = np.abs(wh_residual(spec, sp.minus, sp.plus, s)).max()
        print(f"{name:13s} R = {R:3d}: residual {r:.1e}, tail bound {sp.tail_bound:.1e}")

spec = discrete_problem("quarter-plane", 1 + 0.3j, 2.0, s2_in=2.0)
c = unit_circle(12) * np.exp(1j * np.pi / 12)
z1, z2 = np.meshgrid(c, c, indexing="ij")
for R, Lz in ((8, 16), (11, 23)):
    sol = solve_3d(TruncatedProblem(spec, R, Lz))
    sp = extract_spectra_3d(sol, z1, z2)
    r = np.abs(wh_residual(spec, sp.minus, sp.plus, (z1.ravel(), z2.ravel()))).max()
    print(f"quarter plane R = {R}, Lz = {Lz}: {sol.u.size} nodes, residual {r:.1e}")
