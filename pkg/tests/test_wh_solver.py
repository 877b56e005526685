import numpy as np
import pytest

from latticewh.direct_oracle import TruncatedProblem, extract_spectra, solve
from latticewh.dispersion import LatticeDispersion, LatticeIncidence, unit_circle
from latticewh.errors import (
    InvalidInput,
    KernelVanishesOnContour,
    NonzeroIndex,
    QuadratureNotConverged,
    SlowCoefficientDecay,
)
from latticewh.wh_catalog import wh_residual
from latticewh.wh_solver import (
    CircleContour,
    SpectralFunction,
    additive_split,
    decay_profile,
    log_factorize,
    reconstruct_field,
    solve_half_plane,
    winding_number,
)

C = CircleContour(512)
T = C.samples
A, B = 0.4 - 0.3j, 0.5j


def test_contour_validation():
    with pytest.raises(InvalidInput):
        CircleContour(300)
    with pytest.raises(InvalidInput):
        CircleContour(128)
    assert C.modes[1] == 1 and C.modes[-1] == -1


def test_factorization_of_known_product():
    # K = (1 - B s)(1 - A/s): plus factor analytic in |s|<1, minus factor -> 1
    K = (1 - B * T) * (1 - A / T)
    fac = log_factorize(K, C)
    assert fac.reconstruction_error < 1e-14
    assert np.abs(fac.plus.values - (1 - B * T)).max() < 1e-13
    assert np.abs(fac.minus.values - (1 - A / T)).max() < 1e-13
    # off the contour: Cauchy evaluation in each domain
    zin = np.array([0.0, 0.3, -0.5j, 0.85 + 0.1j])
    zout = np.array([1.5, -3j, 20.0, 1.05])
    assert np.abs(fac.plus(zin) - (1 - B * zin)).max() < 1e-12
    assert np.abs(fac.minus(zout) - (1 - A / zout)).max() < 1e-12


def test_constant_mode_convention():
    K = 3.0 * (1 - B * T) * (1 - A / T)
    p = log_factorize(K, C, "plus")
    m = log_factorize(K, C, "minus")
    assert np.abs(p.plus.values - 3 * (1 - B * T)).max() < 1e-13
    assert np.abs(m.minus.values - 3 * (1 - A / T)).max() < 1e-13
    assert np.abs(p.plus.values * p.minus.values - m.plus.values * m.minus.values).max() < 1e-13


def test_additive_split_of_partial_fractions():
    f = 1 / (T - A) + 1 / (1 - T / (2 + 1j))
    plus, minus = additive_split(f, C)
    assert np.abs(minus.values - 1 / (T - A)).max() < 1e-13
    assert np.abs(plus.values - 1 / (1 - T / (2 + 1j))).max() < 1e-13
    assert abs(minus(np.array([3.0]))[0] - 1 / (3 - A)) < 1e-12
    assert abs(plus(np.array([0.2j]))[0] - 1 / (1 - 0.2j / (2 + 1j))) < 1e-12


def test_domain_checks():
    plus, minus = additive_split(1 / (T - A), C)
    with pytest.raises(InvalidInput):
        plus(np.array([2.0]))
    with pytest.raises(InvalidInput):
        minus(np.array([0.5]))
    with pytest.raises(InvalidInput):
        SpectralFunction(C, T, "sideways")


def test_winding_and_failures():
    assert winding_number(T) == 1
    assert winding_number(1 / T ** 2) == -2
    assert winding_number(2 + T) == 0
    with pytest.raises(NonzeroIndex):
        log_factorize(T * (1 - A / T), C)
    with pytest.raises(KernelVanishesOnContour):
        log_factorize(1 - T, C)
    with pytest.raises(SlowCoefficientDecay):
        additive_split(1 / (T - 0.999), C)


@pytest.fixture(scope="module", params=["dirichlet", "neumann"])
def solved(request):
    disp = LatticeDispersion(1 + 0.15j)
    inc = LatticeIncidence.from_s(1.5, disp)
    return solve_half_plane(disp, inc, request.param)


def test_solution_satisfies_equation(solved):
    t = solved.contour.samples
    r = wh_residual(solved.problem, solved.psi_minus.values[:, None],
                    solved.psi_plus.values[:, None], t)
    assert np.abs(r).max() < 1e-12
    # off the contour too, on a ring inside the annulus of analyticity
    z = 1.02 * unit_circle(32)
    zi = 0.98 * unit_circle(32)
    pm = solved.psi_minus(z)
    assert np.all(np.isfinite(pm))
    assert np.all(np.isfinite(solved.psi_plus(zi)))


def test_liouville_decay(solved):
    prof = decay_profile(solved, (10.0, 100.0, 1000.0))
    # |s| psi_minus(s) stays bounded: psi_minus = O(1/s)
    assert prof[1000.0] < 2 * prof[10.0]


def test_resolution_and_convention_independence(solved):
    disp, inc = solved.problem.dispersion, solved.problem.incidence
    other = solve_half_plane(disp, inc, solved.bc, n_modes=2048)
    moved = solve_half_plane(disp, inc, solved.bc, constant_to="minus")
    s = unit_circle(64) * np.exp(0.01j)
    assert np.abs(other.psi_minus(s) - solved.psi_minus(s)).max() <= 1e-9
    assert np.abs(moved.psi_plus(s) - solved.psi_plus(s)).max() <= 1e-12


def test_against_oracle(solved):
    tp = TruncatedProblem(solved.problem, 60)
    osol = solve(tp)
    s = unit_circle(64) * np.exp(1j * np.pi / 64)
    sp = extract_spectra(osol, s)
    dm = np.abs(solved.psi_minus(s) - sp.minus[:, 0]).max() / np.abs(sp.minus).max()
    dp = np.abs(solved.psi_plus(s) - sp.plus[:, 0]).max() / np.abs(sp.plus).max()
    assert dm < 1e-4 and dp < 1e-4
    m = np.arange(-5, 6)
    n = np.arange(0, 6)
    M, N = np.meshgrid(m, n, indexing="ij")
    u = reconstruct_field(solved, M, N)
    ref = osol.u[M + 60, N + 60]
    assert np.abs(u - ref).max() / np.abs(ref).max() < 1e-6


def test_reconstruction_validation(solved):
    with pytest.raises(InvalidInput):
        reconstruct_field(solved, 0, -1)
    with pytest.raises(QuadratureNotConverged):
        reconstruct_field(solved, 200, 3, tol=1e-300)
    with pytest.raises(InvalidInput):
        solve_half_plane(solved.problem.dispersion, solved.problem.incidence, "robin")
