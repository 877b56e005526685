"""Continuous and lattice dispersion relations.

Root selection for the physical sheet, the lattice quantity ``upsilon``,
branch points, and incident plane-wave parameters. All functions are
vectorized over numpy arrays.

The lattice relation in two dimensions is

    s + 1/s + q + 1/q + kt**2 - 4 = 0,

with the physical root ``|q| < 1`` (decay away from the boundary line).
``upsilon(s) = (q - 1/q) / 2`` is the normal-derivative eigenvalue of the
plane wave ``s**-m * q**n`` on a straight boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, OnCut

ON_CUT_TOL = 1e-10


@dataclass(frozen=True)
class ContinuousDispersion:
    """Continuous Helmholtz wavenumber ``k`` (complex, ``Im k >= 0``)."""

    k: complex

    def __post_init__(self):
        k = complex(self.k)
        if k.imag < 0:
            raise InvalidInput("Im k must be non-negative")
        object.__setattr__(self, "k", k)


@dataclass(frozen=True)
class LatticeDispersion:
    """Lattice wavenumber ``ktilde = k*h``.

    ``Im ktilde > 0`` is required for the root selection to be unambiguous
    on the unit circle.
    """

    ktilde: complex
    h: float = 1.0

    def __post_init__(self):
        kt = complex(self.ktilde)
        if kt.imag <= 0:
            raise InvalidInput("Im ktilde must be positive")
        if not self.h > 0:
            raise InvalidInput("h must be positive")
        object.__setattr__(self, "ktilde", kt)

    @property
    def k2(self) -> complex:
        return self.ktilde ** 2

    @classmethod
    def from_continuous(cls, k, h) -> "LatticeDispersion":
        return cls(complex(k) * h, h)


def _physical_sqrt(z):
    # branch with Im >= 0, ties (real axis) broken towards Re >= 0
    r = np.sqrt(np.asarray(z, dtype=complex))
    flip = (r.imag < 0) | ((r.imag == 0) & (r.real < 0))
    return np.where(flip, -r, r)


def gamma(xi, disp: ContinuousDispersion):
    """Physical branch of ``sqrt(k**2 - xi**2)``, ``Im gamma >= 0``."""
    return _physical_sqrt(disp.k ** 2 - np.asarray(xi, dtype=complex) ** 2)


def gamma_3d(xi1, xi2, disp: ContinuousDispersion):
    """Physical branch of ``sqrt(k**2 - xi1**2 - xi2**2)``."""
    xi1 = np.asarray(xi1, dtype=complex)
    xi2 = np.asarray(xi2, dtype=complex)
    return _physical_sqrt(disp.k ** 2 - xi1 ** 2 - xi2 ** 2)


def _roots(b):
    """Both roots of ``q**2 + b*q + 1 = 0`` as (small, large)."""
    disc = b * b - 4
    # at a branch point the discriminant is pure rounding noise: snap it
    disc = np.where(np.abs(disc) <= 16 * np.finfo(float).eps * (np.abs(b) ** 2 + 4), 0, disc)
    r = np.sqrt(disc)
    # pick the sign avoiding cancellation, then use q1*q2 = 1
    plus = np.abs(-b + r) >= np.abs(-b - r)
    big = np.where(plus, (-b + r) / 2, (-b - r) / 2)
    small = 1.0 / big
    return small, big


def _check_cut(q, on_cut):
    if on_cut not in ("raise", "ignore"):
        raise InvalidInput("on_cut must be 'raise' or 'ignore'")
    if on_cut == "raise" and np.any(np.abs(np.abs(q) - 1) < ON_CUT_TOL):
        raise OnCut("|q| = 1: point lies on a branch cut")


def q_physical(s, disp: LatticeDispersion, on_cut: str = "raise"):
    """Root of the 2D lattice relation with ``|q| < 1``.

    Parameters
    ----------
    s : array_like
        Nonzero complex transform variable.
    disp : LatticeDispersion
    on_cut : {'raise', 'ignore'}
        Behaviour when both roots have modulus one.

    Returns
    -------
    ndarray
        ``q(s)``, same shape as ``s``.
    """
    s = np.asarray(s, dtype=complex)
    if np.any(s == 0):
        raise InvalidInput("s must be nonzero")
    b = s + 1 / s + disp.k2 - 4
    small, _ = _roots(b)
    _check_cut(small, on_cut)
    return small


def q_other(s, disp: LatticeDispersion, on_cut: str = "raise"):
    """Reciprocal root ``1/q(s)`` (growing sheet)."""
    return 1.0 / q_physical(s, disp, on_cut)


def upsilon(s, disp: LatticeDispersion, on_cut: str = "raise"):
    """``(q - 1/q)/2`` on the physical sheet."""
    q = q_physical(s, disp, on_cut)
    return (q - 1 / q) / 2


def upsilon_from_q(q):
    """``(q - 1/q)/2`` for an explicitly given root."""
    q = np.asarray(q, dtype=complex)
    return (q - 1 / q) / 2


def branch_points(disp) -> dict:
    """The four branch points of ``q(s)`` in the ``s`` plane.

    Parameters
    ----------
    disp : LatticeDispersion or complex
        A dispersion, or the value of ``kt**2`` directly (useful for
        lossless wavenumbers).

    Returns
    -------
    dict
        Keys ``eta11, eta21, eta12, eta22``. The pairs ``(eta11, eta21)``
        and ``(eta12, eta22)`` are reciprocal. The roots coalesce at
        ``q = 1`` on the first pair and at ``q = -1`` on the second.
    """
    k2 = disp.k2 if isinstance(disp, LatticeDispersion) else complex(disp)
    d1 = k2 - 2
    d2 = k2 - 6
    r1 = np.sqrt(complex(4 - d1 * d1))
    r2 = np.sqrt(complex(d2 * d2 - 4))
    naive = (-d1 / 2 - 1j * r1 / 2, -d1 / 2 + 1j * r1 / 2, -d2 / 2 + r2 / 2, -d2 / 2 - r2 / 2)
    out = {}
    # the branch points solve eta**2 + d*eta + 1 = 0; the stable solver fixes
    # the accuracy, the closed form fixes the labels
    for (a, b), d in ((("eta11", "eta21"), d1), (("eta12", "eta22"), d2)):
        small, big = (complex(x) for x in _roots(np.asarray(d, dtype=complex)))
        na = naive[0] if a == "eta11" else naive[2]
        if abs(small - na) <= abs(big - na):
            out[a], out[b] = small, big
        else:
            out[a], out[b] = big, small
    return out


def dispersion_residual(s, q, disp: LatticeDispersion):
    """``s + 1/s + q + 1/q + kt**2 - 4``."""
    s = np.asarray(s, dtype=complex)
    q = np.asarray(q, dtype=complex)
    return s + 1 / s + q + 1 / q + disp.k2 - 4


def q_physical_3d(s1, s2, disp: LatticeDispersion, on_cut: str = "raise"):
    """Physical root of ``s1 + 1/s1 + s2 + 1/s2 + q + 1/q + kt**2 - 6 = 0``."""
    s1 = np.asarray(s1, dtype=complex)
    s2 = np.asarray(s2, dtype=complex)
    if np.any(s1 == 0) or np.any(s2 == 0):
        raise InvalidInput("s1, s2 must be nonzero")
    b = s1 + 1 / s1 + s2 + 1 / s2 + disp.k2 - 6
    small, _ = _roots(b)
    _check_cut(small, on_cut)
    return small


def upsilon_3d(s1, s2, disp: LatticeDispersion, on_cut: str = "raise"):
    """``(q - 1/q)/2`` with the 3D physical root."""
    q = q_physical_3d(s1, s2, disp, on_cut)
    return (q - 1 / q) / 2


def dispersion_residual_3d(s1, s2, q, disp: LatticeDispersion):
    s1, s2, q = (np.asarray(a, dtype=complex) for a in (s1, s2, q))
    return s1 + 1 / s1 + s2 + 1 / s2 + q + 1 / q + disp.k2 - 6


# --- incident waves -------------------------------------------------------

@dataclass(frozen=True)
class LatticeIncidence:
    """Incident lattice wave ``u_in(m, n) = s_in**-m * q_in**-n``.

    With ``|q_in| < 1`` the wave arrives from ``n = +inf``.

    ``upsilon_in`` is ``(q_in - 1/q_in)/2`` built from ``q_in`` itself.
    ``upsilon_hat_in`` is the upsilon formula evaluated at the argument
    ``q_in``, which reduces to ``(1/s_in - s_in)/2``.
    """

    s_in: complex
    q_in: complex
    upsilon_in: complex
    upsilon_hat_in: complex

    @classmethod
    def from_s(cls, s_in, disp: LatticeDispersion) -> "LatticeIncidence":
        """Incidence from ``s_in``; ``q_in`` is the physical root."""
        s_in = complex(s_in)
        q_in = complex(q_physical(s_in, disp))
        return cls._build(s_in, q_in, disp)

    @classmethod
    def from_pair(cls, s_in, q_in, disp: LatticeDispersion, tol=1e-10):
        """Incidence from an explicit root pair, checked against dispersion."""
        s_in, q_in = complex(s_in), complex(q_in)
        if abs(dispersion_residual(s_in, q_in, disp)) > tol * (1 + abs(disp.k2)):
            raise InvalidInput("(s_in, q_in) does not satisfy the dispersion relation")
        return cls._build(s_in, q_in, disp)

    @classmethod
    def from_waveguide_mode(cls, p: int, N: int, disp: LatticeDispersion):
        """Waveguide mode with ``q_in = exp(i*pi*p/N)``.

        ``s_in`` is the root with ``|s_in| > 1`` of the dispersion relation
        solved for ``s``; it lies on a cut of ``q(s)``, so ``upsilon_in``
        is built from ``q_in`` directly.
        """
        if N <= 0 or p < 0:
            raise InvalidInput("need N > 0 and p >= 0")
        q_in = complex(np.exp(1j * np.pi * p / N))
        b = q_in + 1 / q_in + disp.k2 - 4
        small, big = _roots(np.asarray(b, dtype=complex))
        return cls._build(complex(big), q_in, disp)

    @staticmethod
    def _build(s_in, q_in, disp):
        if s_in == 0 or q_in == 0:
            raise InvalidInput("s_in and q_in must be nonzero")
        return LatticeIncidence(
            s_in=s_in,
            q_in=q_in,
            upsilon_in=complex((q_in - 1 / q_in) / 2),
            upsilon_hat_in=complex(upsilon(q_in, disp)),
        )

    def field(self, m, n):
        m = np.asarray(m)
        n = np.asarray(n)
        return self.s_in ** (-m.astype(float)) * self.q_in ** (-n.astype(float))


@dataclass(frozen=True)
class LatticeIncidence3D:
    """``u_in(m1, m2, l) = s1_in**-m1 * s2_in**-m2 * q_in**-l``."""

    s1_in: complex
    s2_in: complex
    q_in: complex

    @classmethod
    def from_s(cls, s1_in, s2_in, disp: LatticeDispersion):
        q = complex(q_physical_3d(complex(s1_in), complex(s2_in), disp))
        return cls(complex(s1_in), complex(s2_in), q)

    def field(self, m1, m2, l):
        m1, m2, l = (np.asarray(a, dtype=float) for a in (m1, m2, l))
        return self.s1_in ** (-m1) * self.s2_in ** (-m2) * self.q_in ** (-l)


@dataclass(frozen=True)
class ContinuousIncidence:
    """Plane wave ``exp(-i*xi_in*x + i*gamma_in*y)`` with ``xi_in = k cos(theta)``."""

    xi_in: complex
    gamma_in: complex
    theta: float | None = None

    @classmethod
    def from_angle(cls, theta, disp: ContinuousDispersion):
        xi = disp.k * np.cos(theta)
        return cls(complex(xi), complex(gamma(xi, disp)), float(theta))

    @classmethod
    def from_waveguide_mode(cls, n: int, b: float, disp: ContinuousDispersion):
        """Mode with ``gamma_in = n*pi/b`` and ``xi_in = sqrt(k**2 - gamma_in**2)``."""
        if b <= 0 or n < 0:
            raise InvalidInput("need b > 0 and n >= 0")
        g = n * np.pi / b
        xi = _physical_sqrt(disp.k ** 2 - g ** 2)
        return cls(complex(xi), complex(g), None)


@dataclass(frozen=True)
class ContinuousIncidence3D:
    xi1_in: complex
    xi2_in: complex
    gamma_in: complex

    @classmethod
    def from_angles(cls, theta, phi, disp: ContinuousDispersion):
        xi1 = disp.k * np.sin(theta) * np.cos(phi)
        xi2 = disp.k * np.sin(theta) * np.sin(phi)
        return cls(complex(xi1), complex(xi2), complex(gamma_3d(xi1, xi2, disp)))


def unit_circle(n: int):
    """``n`` equispaced points ``exp(2*pi*i*j/n)``."""
    if n <= 0:
        raise InvalidInput("n must be positive")
    return np.exp(2j * np.pi * np.arange(n) / n)
