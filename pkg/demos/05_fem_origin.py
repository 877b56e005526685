"""Where the boundary stencils come from: linear FEM with mass lumping.

Averaging the two triangulations of each square and lumping the mass
reproduces the lattice stencils exactly, including the corner rows.

Run: python3 demos/05_fem_origin.py
"""

import sympy

from latticewh.fem_appendix import cube_matrices, equivalence_report, square_matrices
from latticewh.lattice_core import LatticeDomain

K, M, Ml = square_matrices()
sympy.pprint(2 * K)
sympy.pprint(24 * M)
sympy.pprint(Ml)

k2 = sympy.Symbol("k2")
u = sympy.symbols("u1:5")
row = sum(c * x for c, x in zip(K.row(0) + k2 * Ml.row(0), u))
print("first node:", sympy.factor_terms(row))

for dom in (LatticeDomain.rectangle(0, 6, 0, 6), LatticeDomain([(0, 8, 0, 4), (0, 4, 0, 8)]),
            LatticeDomain.box(0, 3, 0, 3, 0, 3)):
    rep = equivalence_report(dom)
    print(f"{dom.rects}: {rep.matched}/{rep.nodes} rows match, factor {rep.factor}, {rep.by_kind}")

Kc, _, Mc = cube_matrices()
print("cube: diagonal", Kc[0, 0], "edge", Kc[0, 1], "lumped mass", Mc[0, 0])
