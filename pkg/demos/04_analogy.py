"""One generating function per problem, two sides of the analogy.

The same function produces the continuous kernel when fed i*gamma and
exponential shifts, and the lattice kernel when fed upsilon and powers of
s and q.

Run: python3 demos/04_analogy.py
"""

import numpy as np

from latticewh.dispersion import unit_circle
from latticewh.wh_catalog import (
    PROBLEMS,
    analogy_residual,
    continuous_problem,
    deviator_polynomial,
    discrete_problem,
)

DISCRETE = {
    "finite-strip": dict(s_in=1.5, M=3),
    "staggered": dict(s_in=1.5, M=2, N=3),
    "strip-in-waveguide": dict(q_mode=1, N=4, L=1),
    "quarter-plane": dict(s_in=2.0, s2_in=1.7),
}
CONTINUOUS = {
    "finite-strip": dict(theta=0.7, a=2.0),
    "staggered": dict(theta=0.7, a=1.0, b=2.0),
    "strip-in-waveguide": dict(mode=1, a=1.0, b=4.0),
    "quarter-plane": dict(theta=0.7, phi=0.4),
}

s = unit_circle(256) * np.exp(1j * np.pi / 256)
xi = np.linspace(-3, 3, 256) + 0j
for name in PROBLEMS:
    if name == "half-plane-neumann-elastic":
        continue
    which = "kernel" if name == "strip-in-waveguide" else "both"
    d = discrete_problem(name, 1 + 0.2j, **DISCRETE.get(name, dict(s_in=1.5)))
    c = continuous_problem(name, 1.5 + 0.2j, **CONTINUOUS.get(name, dict(theta=0.7)))
    if name == "quarter-plane":
        zd = tuple(a.ravel() for a in np.meshgrid(s[::16], s[::16]))
        zc = tuple(a.ravel() for a in np.meshgrid(xi[::16], xi[::16]))
    else:
        zd, zc = s, xi
    print(f"{name:22s} discrete {analogy_residual(d, zd, which):.1e}   "
          f"continuous {analogy_residual(c, zc, which):.1e}")

# The soft/hard kernel is of Khrapkov type on both sides, but the
# deviator polynomial doubles its degree on the lattice.
for side in ("continuous", "discrete"):
    dp = deviator_polynomial("soft-hard", side)
    print(f"{side} deviator (degree {dp.degree}): {dp.expression}")
