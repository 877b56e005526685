"""Finite-element origin of the lattice stencils, in exact arithmetic.

Linear triangles on the unit square lattice, averaged over the two
diagonal partitions of each square and with a lumped (row-sum) mass
matrix, reproduce the lattice Helmholtz stencil in the bulk and the
normal-derivative stencil on the boundary. In 3D the same construction
uses the six-tetrahedron (Kuhn) subdivision of the cube, averaged over
its four body diagonals.

All matrices are ``sympy.Matrix`` objects with rational entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import sympy

from .errors import InvalidInput
from .lattice_core import LatticeDomain, classify_boundary, stencil

SQUARE_NODES = ((0, 0), (1, 0), (0, 1), (1, 1))
CUBE_NODES = tuple((i, j, k) for k in (0, 1) for j in (0, 1) for i in (0, 1))


def _simplex_matrices(vertices):
    """Stiffness ``-int grad Ni . grad Nj`` and mass ``int Ni Nj`` of a linear simplex."""
    d = len(vertices) - 1
    V = sympy.Matrix([[1, *v] for v in vertices])
    grads = V.inv()[1:, :]
    vol = abs(V.det()) / sympy.factorial(d)
    K = -vol * (grads.T * grads)
    # exact integral of barycentric products: vol * (1 + delta_ij) / ((d+1)(d+2))
    M = vol / ((d + 1) * (d + 2)) * (sympy.ones(d + 1, d + 1) + sympy.eye(d + 1))
    return K, M


def element_matrices():
    """Element matrices of the unit right triangle with nodes (0,0), (1,0), (0,1).

    Computed by symbolic integration of the shape functions
    ``1 - x - y``, ``x``, ``y``.
    """
    x, y = sympy.symbols("x y")
    N = [1 - x - y, x, y]
    grad = [(sympy.diff(f, x), sympy.diff(f, y)) for f in N]

    def integrate(expr):
        return sympy.integrate(sympy.integrate(expr, (y, 0, 1 - x)), (x, 0, 1))

    K = sympy.Matrix(3, 3, lambda i, j: -integrate(grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]))
    M = sympy.Matrix(3, 3, lambda i, j: integrate(N[i] * N[j]))
    return K, M


# triangles as (right-angle node, node, node) in SQUARE_NODES numbering
PARTITIONS = {
    "s1": ((0, 1, 2), (3, 2, 1)),  # diagonal from (1,0) to (0,1)
    "s2": ((1, 0, 3), (2, 3, 0)),  # diagonal from (0,0) to (1,1)
}


def assemble_square(partition: str):
    """Square matrices for one of the two diagonal partitions ``'s1'``, ``'s2'``."""
    if partition not in PARTITIONS:
        raise InvalidInput("partition must be 's1' or 's2'")
    Ke, Me = element_matrices()
    K, M = sympy.zeros(4, 4), sympy.zeros(4, 4)
    for tri in PARTITIONS[partition]:
        for a, b in itertools.product(range(3), repeat=2):
            K[tri[a], tri[b]] += Ke[a, b]
            M[tri[a], tri[b]] += Me[a, b]
    return K, M


def lump(M):
    """Diagonal matrix of row sums."""
    return sympy.diag(*[sum(M.row(i)) for i in range(M.rows)])


def average_and_lump(first, second):
    """Average two ``(K, M)`` pairs; return ``(K, M, M_lumped)``."""
    K = (first[0] + second[0]) / 2
    M = (first[1] + second[1]) / 2
    return K, M, lump(M)


def square_matrices():
    """Averaged and lumped unit-square matrices ``(K, M, M_lumped)``."""
    return average_and_lump(assemble_square("s1"), assemble_square("s2"))


def _kuhn(start):
    """Six tetrahedra along the body diagonal from corner ``start``."""
    sgn = [1 - 2 * c for c in start]
    out = []
    for perm in itertools.permutations(range(3)):
        p = list(start)
        path = [tuple(p)]
        for a in perm:
            p[a] += sgn[a]
            path.append(tuple(p))
        out.append(path)
    return out


def cube_matrices():
    """Unit-cube ``(K, M, M_lumped)`` averaged over the four Kuhn subdivisions."""
    K, M = sympy.zeros(8, 8), sympy.zeros(8, 8)
    starts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)]
    for st in starts:
        for tet in _kuhn(st):
            Kt, Mt = _simplex_matrices(tet)
            ids = [CUBE_NODES.index(v) for v in tet]
            for a, b in itertools.product(range(4), repeat=2):
                K[ids[a], ids[b]] += Kt[a, b]
                M[ids[a], ids[b]] += Mt[a, b]
    K /= len(starts)
    M /= len(starts)
    return K, M, lump(M)


def assemble_domain(domain: LatticeDomain):
    """Global stiffness and lumped mass over all cells of ``domain``.

    Returns ``(K, M_lumped)`` as dicts ``{(node, node): Rational}``.
    """
    if domain.dim == 2:
        Kc, _, Mc = square_matrices()
        local = SQUARE_NODES
    else:
        Kc, _, Mc = cube_matrices()
        local = CUBE_NODES
    K, M = {}, {}
    origin = domain.origin
    for idx in np.argwhere(domain.cells):
        base = tuple(int(i) + o for i, o in zip(idx, origin))
        nodes = [tuple(b + c for b, c in zip(base, off)) for off in local]
        for a, b in itertools.product(range(len(local)), repeat=2):
            if Kc[a, b] != 0:
                K[nodes[a], nodes[b]] = K.get((nodes[a], nodes[b]), 0) + Kc[a, b]
            if Mc[a, b] != 0:
                M[nodes[a], nodes[b]] = M.get((nodes[a], nodes[b]), 0) + Mc[a, b]
    return K, M


@dataclass
class EquivalenceReport:
    """Row-by-row comparison of assembled FEM rows with lattice stencils.

    ``factor`` is the common ratio FEM row / lattice row (``None`` if the
    rows are not proportional everywhere).
    """

    nodes: int
    matched: int
    factor: object
    mismatches: list = field(default_factory=list)
    by_kind: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.matched == self.nodes and self.factor is not None


def equivalence_report(domain: LatticeDomain) -> EquivalenceReport:
    """Compare ``K + k2 * M_lumped`` row-wise with the lattice stencils.

    The comparison is exact: ``k2`` is a sympy symbol and all weights are
    rationals.
    """
    k2 = sympy.Symbol("k2")
    K, M = assemble_domain(domain)
    rows = {}
    for (a, b), v in K.items():
        rows.setdefault(a, {})[b] = rows.get(a, {}).get(b, 0) + v
    for (a, b), v in M.items():
        rows.setdefault(a, {})[b] = rows.get(a, {}).get(b, 0) + k2 * v
    factors = set()
    mismatches = []
    by_kind = {}
    matched = 0
    for nu in domain.nodes():
        fem = {mu: sympy.expand(v) for mu, v in rows.get(nu, {}).items()}
        fem = {mu: v for mu, v in fem.items() if v != 0}
        st = stencil(domain, nu, k2)
        lat = {
            tuple(a + b for a, b in zip(nu, off)): sympy.expand(sympy.sympify(w))
            for off, w in st.items()
        }
        kind = "interior" if domain.is_interior(nu) else classify_boundary(domain, nu).kind.value
        ratio = None
        if set(fem) == set(lat):
            rs = {sympy.simplify(fem[mu] / lat[mu]) for mu in lat}
            if len(rs) == 1:
                ratio = rs.pop()
                if ratio.free_symbols:
                    ratio = None
        if ratio is None:
            mismatches.append(nu)
        else:
            matched += 1
            factors.add(ratio)
            by_kind[kind] = by_kind.get(kind, 0) + 1
    factor = factors.pop() if len(factors) == 1 and not mismatches else None
    return EquivalenceReport(len(domain.nodes()), matched, factor, mismatches, by_kind)


def matrix_to_lists(A):
    """Rational matrix as nested lists of ``'p/q'`` strings (JSON friendly)."""
    return [[str(A[i, j]) for j in range(A.cols)] for i in range(A.rows)]
