"""Scalar Wiener-Hopf solver on the unit circle.

Solves ``psi_minus = K psi_plus + F`` for the lattice half-plane problems by

1. multiplicative factorization ``K = K_plus * K_minus`` from the Fourier
   modes of ``log K`` (constant mode assigned to ``K_plus``);
2. additive split of ``G = F / K_minus`` into ``G_plus + G_minus``;
3. the Liouville step: with ``psi_minus = O(1/s)`` the entire function is
   zero, so ``psi_minus = K_minus * G_minus`` and
   ``psi_plus = -G_plus / K_plus``.

Plus functions are analytic in ``|s| < 1``, minus functions in ``|s| > 1``
and vanish at infinity (``K_minus`` tends to one).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import LatticeDispersion, LatticeIncidence, q_physical
from .errors import (
    InvalidInput,
    KernelVanishesOnContour,
    NonzeroIndex,
    QuadratureNotConverged,
    SlowCoefficientDecay,
)
from .wh_catalog import ProblemSpec, forcing, kernel

COEFF_TOL = 1e-12
CAUCHY_GAP = 0.1


@dataclass(frozen=True)
class CircleContour:
    """``n_modes`` equispaced points on ``|s| = 1``."""

    n_modes: int = 1024

    def __post_init__(self):
        n = self.n_modes
        if n < 256 or n & (n - 1):
            raise InvalidInput("n_modes must be a power of two >= 256")

    @property
    def samples(self):
        return np.exp(2j * np.pi * np.arange(self.n_modes) / self.n_modes)

    @property
    def modes(self):
        """Integer mode index of each FFT bin."""
        return np.fft.fftfreq(self.n_modes, 1 / self.n_modes).astype(int)


def _coefficients(values):
    return np.fft.fft(values) / len(values)


def _check_decay(c, what):
    N = len(c)
    band = np.abs(np.fft.fftshift(c))[: N // 16]
    band = np.concatenate([band, np.abs(np.fft.fftshift(c))[-N // 16:]])
    scale = max(1.0, float(np.abs(c).max()))
    if band.max() > COEFF_TOL * scale:
        raise SlowCoefficientDecay(
            f"{what}: coefficients near the Nyquist mode are {band.max():.1e}"
        )


class SpectralFunction:
    """Function of ``s`` sampled on the unit circle.

    ``kind`` is ``'plus'`` (analytic inside), ``'minus'`` (analytic outside,
    zero at infinity unless it carries a constant) or ``'full'``. Points on
    the contour are evaluated by trigonometric interpolation; points off it
    by ``off_contour`` (a Cauchy-integral evaluator) within the domain of
    analyticity.
    """

    def __init__(self, contour: CircleContour, values, kind: str, off_contour=None):
        if kind not in ("plus", "minus", "full"):
            raise InvalidInput("kind must be plus, minus or full")
        self.contour = contour
        self.values = np.asarray(values, dtype=complex)
        self.kind = kind
        self._off = off_contour

    @property
    def coefficients(self):
        """Laurent coefficients in FFT order (see ``CircleContour.modes``)."""
        return _coefficients(self.values)

    def _series(self, z):
        c = self.coefficients
        j = self.contour.modes
        if self.kind == "plus":
            keep = j >= 0
        elif self.kind == "minus":
            # the constant mode is kept: K_minus tends to one, not zero
            keep = j <= 0
        else:
            keep = np.ones_like(j, dtype=bool)
        # Laurent sum restricted to the support of the function
        return np.exp(np.log(z)[..., None] * j[keep]) @ c[keep]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        out = np.empty(z.shape, dtype=complex)
        near = np.abs(r - 1) <= CAUCHY_GAP
        if self.kind == "plus" and np.any(r > 1 + 1e-12):
            raise InvalidInput("plus function evaluated outside the unit disc")
        if self.kind == "minus" and np.any(r < 1 - 1e-12):
            raise InvalidInput("minus function evaluated inside the unit disc")
        if self.kind == "full" and np.any(~near):
            raise InvalidInput("full function is defined on the contour only")
        if np.any(near):
            out[near] = self._series(z[near])
        if np.any(~near):
            out[~near] = self._off(z[~near])
        return out


def _cauchy(values, t, sign):
    """Trapezoid rule for ``sign/(2 pi i) * int f(t) / (t - z) dt``."""
    def ev(z):
        z = np.asarray(z, dtype=complex)
        w = t / (t - z[..., None])
        return sign * (w @ values) / len(t)
    return ev


def _project(values, contour, kind):
    """Plus or minus projection of contour samples."""
    c = _coefficients(values)
    j = contour.modes
    keep = j >= 0 if kind == "plus" else j < 0
    proj = np.fft.ifft(np.where(keep, c, 0)) * len(c)
    t = contour.samples
    off = _cauchy(values, t, 1 if kind == "plus" else -1)
    return proj, off


@dataclass
class FactorizationResult:
    plus: SpectralFunction
    minus: SpectralFunction
    index: int
    log_coefficients: np.ndarray
    reconstruction_error: float


def winding_number(values) -> int:
    """Winding of the closed curve ``values`` around the origin."""
    ph = np.unwrap(np.angle(values))
    total = ph[-1] - ph[0] + np.angle(values[0] / values[-1])
    return int(round(total / (2 * np.pi)))


def log_factorize(values, contour: CircleContour | None = None, constant_to="plus"):
    """Multiplicative factorization of kernel samples.

    Parameters
    ----------
    values : array_like
        Kernel samples at ``contour.samples``.
    constant_to : {'plus', 'minus'}
        Factor receiving the constant Fourier mode of ``log K``.

    Raises
    ------
    KernelVanishesOnContour, NonzeroIndex, SlowCoefficientDecay
    """
    values = np.asarray(values, dtype=complex)
    contour = contour or CircleContour(len(values))
    if len(values) != contour.n_modes:
        raise InvalidInput("sample count does not match the contour")
    if constant_to not in ("plus", "minus"):
        raise InvalidInput("constant_to must be 'plus' or 'minus'")
    mag = np.abs(values)
    if not np.all(np.isfinite(values)) or mag.min() <= 1e-12 * mag.max():
        raise KernelVanishesOnContour("kernel vanishes on the contour")
    index = winding_number(values)
    if index != 0:
        raise NonzeroIndex(f"kernel has winding number {index}")
    logk = np.log(mag) + 1j * np.unwrap(np.angle(values))
    c = _coefficients(logk)
    _check_decay(c, "log K")
    j = contour.modes
    plus_keep = (j > 0) | ((j == 0) & (constant_to == "plus"))
    lp = np.fft.ifft(np.where(plus_keep, c, 0)) * len(c)
    lm = np.fft.ifft(np.where(plus_keep, 0, c)) * len(c)
    t = contour.samples
    cp = _cauchy(logk, t, 1)
    cm = _cauchy(logk, t, -1)
    c0 = c[0]
    if constant_to == "plus":
        off_p, off_m = (lambda z: np.exp(cp(z))), (lambda z: np.exp(cm(z)))
    else:
        off_p = lambda z: np.exp(cp(z) - c0)  # noqa: E731
        off_m = lambda z: np.exp(cm(z) + c0)  # noqa: E731
    kp = SpectralFunction(contour, np.exp(lp), "plus", off_p)
    km = SpectralFunction(contour, np.exp(lm), "minus", off_m)
    err = float(np.max(np.abs(kp.values * km.values - values)) / mag.max())
    return FactorizationResult(kp, km, 0, c, err)


def additive_split(values, contour: CircleContour | None = None):
    """Split contour samples into plus and minus parts.

    Raises
    ------
    SlowCoefficientDecay
        If a pole sits too close to the contour for the resolution.
    """
    values = np.asarray(values, dtype=complex)
    contour = contour or CircleContour(len(values))
    _check_decay(_coefficients(values), "additive split")
    pv, poff = _project(values, contour, "plus")
    mv, moff = _project(values, contour, "minus")
    return SpectralFunction(contour, pv, "plus", poff), SpectralFunction(contour, mv, "minus", moff)


@dataclass
class HalfPlaneSolution:
    """Spectral solution of a lattice half-plane problem."""

    problem: ProblemSpec
    contour: CircleContour
    psi_plus: SpectralFunction
    psi_minus: SpectralFunction
    factorization: FactorizationResult
    kernel_values: np.ndarray
    forcing_values: np.ndarray

    @property
    def bc(self):
        return "dirichlet" if self.problem.name == "half-plane-dirichlet" else "neumann"


def solve_half_plane(disp: LatticeDispersion, inc: LatticeIncidence, bc="dirichlet",
                     n_modes=1024, constant_to="plus") -> HalfPlaneSolution:
    """Wiener-Hopf solution of the Dirichlet or Neumann lattice half plane."""
    if bc not in ("dirichlet", "neumann"):
        raise InvalidInput("bc must be 'dirichlet' or 'neumann'")
    if not abs(inc.s_in) > 1:
        raise InvalidInput("need |s_in| > 1")
    spec = ProblemSpec(f"half-plane-{bc}", "discrete", disp, inc)
    contour = CircleContour(n_modes)
    t = contour.samples
    K = kernel(spec, t)[..., 0, 0]
    F = forcing(spec, t)[..., 0]
    fac = log_factorize(K, contour, constant_to)
    km, kp = fac.minus, fac.plus
    G = F / km.values
    gp, gm = additive_split(G, contour)
    psi_m = SpectralFunction(contour, km.values * gm.values, "minus", lambda z: km(z) * gm(z))
    psi_p = SpectralFunction(contour, -gp.values / kp.values, "plus", lambda z: -gp(z) / kp(z))
    return HalfPlaneSolution(spec, contour, psi_p, psi_m, fac, K, F)


def decay_profile(sol: HalfPlaneSolution, radii=(10.0, 100.0), n_rays=8):
    """``max |psi_minus(s)| * |s|`` over rays at each radius."""
    ang = np.exp(2j * np.pi * (np.arange(n_rays) + 0.5) / n_rays)
    return {float(r): float(np.max(np.abs(sol.psi_minus(r * ang)) * r)) for r in radii}


def _full_transform(sol: HalfPlaneSolution):
    """Contour samples of the two-sided transform of the upper boundary row."""
    if sol.bc == "dirichlet":
        return sol.psi_minus.values - sol.forcing_values
    return sol.psi_plus.values


def reconstruct_field(sol: HalfPlaneSolution, m, n, tol=1e-10):
    """Scattered field ``u(m, n)`` for ``n >= 0`` by inverse transform.

    ``u(m, n) = (1/N) sum_j U(t_j) q(t_j)**n t_j**-m`` where ``U`` is the
    two-sided transform of the boundary row. For the Neumann problem
    ``n = 0`` means the upper face of the plate.

    Raises
    ------
    QuadratureNotConverged
        If the half-resolution rule disagrees by more than ``tol``.
    """
    m = np.asarray(m)
    n = np.asarray(n)
    if np.any(n < 0):
        raise InvalidInput("n must be non-negative")
    m, n = np.broadcast_arrays(m, n)
    t = sol.contour.samples
    U = _full_transform(sol)
    q = q_physical(t, sol.problem.dispersion)
    logq, logt = np.log(q), np.log(t)
    expo = n.astype(float)[..., None] * logq - m.astype(float)[..., None] * logt
    terms = U * np.exp(expo)
    full = terms.mean(axis=-1)
    half = terms[..., ::2].mean(axis=-1)
    err = np.abs(full - half)
    scale = max(1.0, float(np.abs(U).max()))
    if np.any(err > tol * scale):
        raise QuadratureNotConverged(f"quadrature error estimate {err.max():.1e}")
    return full
