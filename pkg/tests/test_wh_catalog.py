import numpy as np
import pytest
import sympy

from latticewh.dispersion import LatticeDispersion, branch_points, unit_circle, upsilon
from latticewh.errors import (
    ArityMismatch,
    AtIncidencePole,
    InvalidInput,
    KernelSingular,
    NotApplicable,
    NotKhrapkov,
)
from latticewh.wh_catalog import (
    MATRIX_SIZE,
    PROBLEMS,
    analogy_residual,
    continuous_problem,
    deviator_polynomial,
    discrete_problem,
    forcing,
    generating_forcing,
    generating_kernel,
    kernel,
    khrapkov_split,
)

KT = 1 + 0.2j
S = unit_circle(256) * np.exp(1j * np.pi / 256)
XI = np.linspace(-3, 3, 256) + 0j

DISCRETE = {
    "half-plane-dirichlet": dict(s_in=1.5),
    "half-plane-neumann": dict(s_in=1.5),
    "half-plane-neumann-elastic": dict(s_in=1.5),
    "soft-hard": dict(s_in=1.5),
    "wedge": dict(s_in=1.5),
    "finite-strip": dict(s_in=1.5, M=3),
    "staggered": dict(s_in=1.5, M=2, N=3),
    "strip-in-waveguide": dict(q_mode=1, N=4, L=1),
    "quarter-plane": dict(s_in=2.0, s2_in=1.7),
}
CONTINUOUS = {
    "half-plane-dirichlet": dict(theta=0.7),
    "half-plane-neumann": dict(theta=0.7),
    "soft-hard": dict(theta=0.7),
    "wedge": dict(theta=0.7),
    "finite-strip": dict(theta=0.7, a=2.0),
    "staggered": dict(theta=0.7, a=1.0, b=2.0),
    "strip-in-waveguide": dict(mode=1, a=1.0, b=4.0),
    "quarter-plane": dict(theta=0.7, phi=0.4),
}


def _z(spec, base):
    if spec.name == "quarter-plane":
        a, b = np.meshgrid(base[::16], base[::16], indexing="ij")
        return (a.ravel(), b.ravel())
    return base


@pytest.mark.parametrize("name", sorted(DISCRETE))
def test_discrete_shapes(name):
    spec = discrete_problem(name, KT, **DISCRETE[name])
    z = _z(spec, S)
    k = MATRIX_SIZE[name]
    n = len(z[0]) if isinstance(z, tuple) else len(z)
    assert kernel(spec, z).shape == (n, k, k)
    assert forcing(spec, z).shape == (n, k)


@pytest.mark.parametrize("name", sorted(CONTINUOUS))
def test_continuous_analogy(name):
    spec = continuous_problem(name, 1.5 + 0.2j, **CONTINUOUS[name])
    z = _z(spec, XI)
    which = "kernel" if name == "strip-in-waveguide" else "both"
    assert analogy_residual(spec, z, which) <= 1e-12


def test_scalar_kernels_against_upsilon():
    for name, expect in (("half-plane-dirichlet", lambda y: 1 / y), ("half-plane-neumann", lambda y: y)):
        spec = discrete_problem(name, KT, 1.5)
        y = upsilon(S, spec.dispersion)
        assert np.abs(kernel(spec, S)[:, 0, 0] - expect(y)).max() < 1e-14


def test_determinants():
    sh = discrete_problem("soft-hard", KT, 1.5)
    assert np.abs(np.linalg.det(kernel(sh, S)) - 0.5).max() < 1e-14
    fs = discrete_problem("finite-strip", KT, 1.5, M=3)
    assert np.abs(np.linalg.det(kernel(fs, S)) + 1).max() < 1e-12
    sg = discrete_problem("staggered", KT, 1.5, M=2, N=3)
    from latticewh.dispersion import q_physical

    y, q = upsilon(S, sg.dispersion), q_physical(S, sg.dispersion)
    assert np.abs(np.linalg.det(kernel(sg, S)) - (y / 2) ** 2 * (1 - q ** 6)).max() < 1e-13


def test_singular_points():
    spec = discrete_problem("half-plane-dirichlet", KT, 1.5)
    eta = branch_points(spec.dispersion)["eta11"]
    with pytest.raises(KernelSingular):
        kernel(spec, np.array([eta]))
    with pytest.raises(AtIncidencePole):
        forcing(spec, np.array([1.5]))


def test_generating_errors():
    with pytest.raises(ArityMismatch):
        generating_kernel("staggered", [1.0, 2.0])
    with pytest.raises(NotApplicable):
        generating_kernel("half-plane-neumann-elastic", [1.0])
    with pytest.raises(NotApplicable):
        generating_forcing("strip-in-waveguide", [1.0])
    spec = discrete_problem("strip-in-waveguide", KT, q_mode=1, N=4, L=1)
    with pytest.raises(NotApplicable):
        analogy_residual(spec, S, "forcing")
    with pytest.raises(InvalidInput):
        analogy_residual(spec, S, "everything")


def test_problem_validation():
    with pytest.raises(InvalidInput):
        discrete_problem("finite-strip", KT, 1.5)
    with pytest.raises(InvalidInput):
        discrete_problem("nonsense", KT, 1.5)
    with pytest.raises(InvalidInput):
        discrete_problem("strip-in-waveguide", KT, q_mode=1, N=3, L=3)
    with pytest.raises(NotApplicable):
        continuous_problem("half-plane-neumann-elastic", 1.0, 0.5)
    with pytest.raises(InvalidInput):
        continuous_problem("wedge", 1.0, 2.0)
    assert set(PROBLEMS) == set(DISCRETE) | {"half-plane-neumann-elastic"}


def test_khrapkov_split_identity():
    t = sympy.Symbol("t")
    K = sympy.Matrix([[1, t], [-1 / t, 1]]) / 2
    a, b, J, delta = khrapkov_split(K)
    assert sympy.simplify(a * sympy.eye(2) + b * J - K) == sympy.zeros(2, 2)
    assert sympy.expand(delta + t ** 2) == 0
    with pytest.raises(NotKhrapkov):
        khrapkov_split(sympy.eye(3) * t)


def test_deviator_degrees():
    cont = deviator_polynomial("soft-hard", "continuous")
    disc = deviator_polynomial("soft-hard", "discrete")
    assert cont.degree == 2
    assert disc.degree == 4
    kt2 = sympy.Symbol("kt2")
    assert [sympy.simplify(c) for c in disc.coefficients] == [
        sympy.Rational(-1, 4),
        2 - kt2 / 2,
        sympy.expand(-kt2 ** 2 / 4 + 2 * kt2 - sympy.Rational(7, 2)),
        2 - kt2 / 2,
        sympy.Rational(-1, 4),
    ]
    with pytest.raises(NotKhrapkov):
        deviator_polynomial("staggered", "discrete")


def test_deviator_vanishes_at_branch_points():
    # Delta = -Upsilon**2 * s**2 vanishes where q = +-1
    disc = deviator_polynomial("soft-hard", "discrete")
    d = LatticeDispersion(KT)
    for eta in branch_points(d).values():
        assert abs(disc(eta, kt2=d.k2)) < 1e-12
