import pytest
import sympy
from sympy import Rational as Q

from latticewh.errors import InvalidInput
from latticewh.fem_appendix import (
    assemble_domain,
    assemble_square,
    average_and_lump,
    cube_matrices,
    element_matrices,
    equivalence_report,
    lump,
    square_matrices,
)
from latticewh.lattice_core import LatticeDomain

KE = Q(1, 2) * sympy.Matrix([[-2, 1, 1], [1, -1, 0], [1, 0, -1]])
ME = Q(1, 24) * sympy.Matrix([[2, 1, 1], [1, 2, 1], [1, 1, 2]])
KS = Q(1, 2) * sympy.Matrix([[-2, 1, 1, 0], [1, -2, 0, 1], [1, 0, -2, 1], [0, 1, 1, -2]])
MS1 = Q(1, 24) * sympy.Matrix([[2, 1, 1, 0], [1, 4, 2, 1], [1, 2, 4, 1], [0, 1, 1, 2]])
MS2 = Q(1, 24) * sympy.Matrix([[4, 1, 1, 2], [1, 2, 0, 1], [1, 0, 2, 1], [2, 1, 1, 4]])
MS = Q(1, 24) * sympy.Matrix([[3, 1, 1, 1], [1, 3, 1, 1], [1, 1, 3, 1], [1, 1, 1, 3]])


def test_element_matrices():
    K, M = element_matrices()
    assert K == KE and M == ME
    assert K[0, 0] == -1
    assert all(sum(K.row(i)) == 0 for i in range(3))
    assert sum(M) == Q(1, 2)


def test_square_partitions():
    K1, M1 = assemble_square("s1")
    K2, M2 = assemble_square("s2")
    assert K1 == KS and K2 == KS
    assert M1 == MS1 and M2 == MS2
    with pytest.raises(InvalidInput):
        assemble_square("s3")


def test_average_and_lump():
    K, M, Ml = average_and_lump(assemble_square("s1"), assemble_square("s2"))
    assert K == KS and M == MS
    assert Ml == Q(1, 4) * sympy.eye(4)
    assert [sum(M.row(i)) for i in range(4)] == [Ml[i, i] for i in range(4)]
    assert square_matrices()[2] == Ml


def test_single_square_first_node():
    k2 = sympy.Symbol("k2")
    K, _, Ml = square_matrices()
    row = K.row(0) + k2 * Ml.row(0)
    u = sympy.symbols("u1:5")
    expr = sum(c * x for c, x in zip(row, u))
    assert sympy.expand(expr - (Q(1, 2) * (u[1] + u[2]) + Q(1, 4) * (k2 - 4) * u[0])) == 0


def test_cube_element():
    K, M, Ml = cube_matrices()
    assert Ml == Q(1, 8) * sympy.eye(8)
    assert K == K.T
    assert all(sum(K.row(i)) == 0 for i in range(8))
    # nodes 0 and 1 share an edge; 0 and 3 a face diagonal; 0 and 7 the body diagonal
    assert K[0, 0] == Q(-3, 4) and K[0, 1] == Q(1, 4)
    assert K[0, 3] == 0 and K[0, 7] == 0
    assert sum(M) == 1


@pytest.mark.parametrize("domain", [
    LatticeDomain.rectangle(0, 10, 0, 10),
    LatticeDomain([(0, 8, 0, 4), (0, 4, 0, 8)]),
    LatticeDomain([(0, 6, 0, 3), (3, 9, 3, 6)]),
    LatticeDomain.box(0, 3, 0, 3, 0, 4),
], ids=["rectangle", "L-shape", "step", "box"])
def test_equivalence_with_stencils(domain):
    rep = equivalence_report(domain)
    assert rep.ok
    assert rep.factor == 1
    assert rep.mismatches == []
    assert sum(rep.by_kind.values()) == rep.nodes


def test_global_matrices_symmetric():
    K, M = assemble_domain(LatticeDomain([(0, 8, 0, 4), (0, 4, 0, 8)]))
    assert all(K[(b, a)] == v for (a, b), v in K.items())
    assert all(a == b for (a, b) in M)


def test_lump_rows():
    A = sympy.Matrix([[1, 2], [3, 4]])
    assert lump(A) == sympy.diag(3, 7)
