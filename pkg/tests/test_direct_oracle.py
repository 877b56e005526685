import numpy as np
import pytest

from latticewh.direct_oracle import (
    TruncatedProblem,
    decay_ratio,
    extract_spectra,
    extract_spectra_3d,
    solve,
    solve_3d,
)
from latticewh.dispersion import unit_circle
from latticewh.errors import ExtentTooSmall, InvalidInput
from latticewh.wh_catalog import continuous_problem, discrete_problem, wh_residual

KT = 1 + 0.2j
S64 = unit_circle(64) * np.exp(1j * np.pi / 64)


def _interior_residual(sol, rows):
    """Helmholtz residual of the scattered field away from scatterers."""
    u = sol.u
    k2 = sol.tp.problem.dispersion.k2
    R = sol.R
    worst = 0.0
    for n in rows:
        j = n + R
        lap = u[:-2, j] + u[2:, j] + u[1:-1, j - 1] + u[1:-1, j + 1] + (k2 - 4) * u[1:-1, j]
        worst = max(worst, np.abs(lap).max())
    return worst


@pytest.fixture(scope="module")
def dirichlet():
    spec = discrete_problem("half-plane-dirichlet", KT, 1.5)
    return solve(TruncatedProblem(spec, 40))


@pytest.fixture(scope="module")
def neumann():
    spec = discrete_problem("half-plane-neumann", KT, 1.5)
    return solve(TruncatedProblem(spec, 40))


def test_dirichlet_boundary_and_bulk(dirichlet):
    sol = dirichlet
    inc = sol.tp.problem.incidence
    m = np.arange(0, 40)
    assert np.abs(sol.u[m + 40, 40] + inc.field(m, 0)).max() < 1e-12
    assert sol.residual < 1e-12
    assert _interior_residual(sol, [-20, -1, 1, 20]) < 1e-12


def test_neumann_plate_condition(neumann):
    sol = neumann
    inc = sol.tp.problem.incidence
    m = np.arange(0, 40)
    d_up = sol.upper_derivative(0)[m + 40]
    # the incident wave has upper derivative -upsilon_in * u_in
    total = d_up - inc.upsilon_in * inc.field(m, 0)
    assert np.abs(total).max() < 1e-12
    d_lo = sol.lower_derivative(0)[m + 40]
    total_lo = d_lo + inc.upsilon_in * inc.field(m, 0)
    assert np.abs(total_lo).max() < 1e-12


@pytest.mark.parametrize("name, geo", [
    ("half-plane-dirichlet", {}),
    ("half-plane-neumann", {}),
    ("soft-hard", {}),
    ("finite-strip", {"M": 3}),
    ("staggered", {"M": 2, "N": 3}),
])
def test_wh_residual_within_tail_bound(name, geo):
    spec = discrete_problem(name, KT, 1.5, **geo)
    sol = solve(TruncatedProblem(spec, 40))
    sp = extract_spectra(sol, S64)
    res = np.abs(wh_residual(spec, sp.minus, sp.plus, S64)).max()
    scale = max(1.0, np.abs(sp.minus).max(), np.abs(sp.plus).max())
    assert res < 1e-2
    # the residual is a truncation effect; the bound tracks its size
    assert res < 50 * scale * sp.tail_bound


def test_decay_ratio_below_one():
    spec = discrete_problem("half-plane-dirichlet", KT, 1.5)
    rho = decay_ratio(TruncatedProblem(spec, 10), S64)
    assert 0 < rho < 1


def test_free_lattice_has_no_scattered_field():
    spec = discrete_problem("half-plane-dirichlet", KT, 1.5)
    sol = solve(TruncatedProblem(spec, 8, scatterer="free"))
    assert np.abs(sol.u).max() == 0


def test_validation():
    spec = discrete_problem("finite-strip", KT, 1.5, M=3)
    with pytest.raises(ExtentTooSmall):
        TruncatedProblem(spec, 10)
    with pytest.raises(InvalidInput):
        TruncatedProblem(discrete_problem("half-plane-dirichlet", 1 + 0.01j, 1.5), 20)
    with pytest.raises(InvalidInput):
        TruncatedProblem(continuous_problem("half-plane-dirichlet", 1.0, 0.5), 20)
    with pytest.raises(InvalidInput):
        TruncatedProblem(discrete_problem("wedge", KT, 1.5), 20)
    qp = discrete_problem("quarter-plane", 1 + 0.2j, 2.0, s2_in=2.0)
    with pytest.raises(InvalidInput):
        TruncatedProblem(qp, 10)


def test_quarter_plane_small_box():
    spec = discrete_problem("quarter-plane", 1 + 0.4j, 2.0, s2_in=2.0)
    sol = solve_3d(TruncatedProblem(spec, 10, 20))
    inc = spec.incidence
    m = np.arange(0, 10)
    M, N = np.meshgrid(m, m, indexing="ij")
    # Dirichlet data on the quarter plane
    assert np.abs(sol.u[M + 10, N + 10, 0] + inc.field(M, N, 0)).max() < 1e-12
    c = unit_circle(8) * np.exp(1j * np.pi / 8)
    z1, z2 = np.meshgrid(c, c, indexing="ij")
    sp = extract_spectra_3d(sol, z1, z2)
    res = np.abs(wh_residual(spec, sp.minus, sp.plus, (z1.ravel(), z2.ravel()))).max()
    assert res < 5e-2
