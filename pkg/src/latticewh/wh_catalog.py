"""Kernels, forcings and generating functions of canonical diffraction problems.

Every problem is available on the continuous side (spectral variable ``xi``,
propagation function ``i*gamma(xi)``) and, where it exists, on the lattice
side (spectral variable ``s`` on the unit circle, propagation function
``upsilon(s)``).

Two independent code paths are kept on purpose:

* ``kernel`` / ``forcing`` evaluate the closed-form matrices directly;
* ``generating_kernel`` / ``generating_forcing`` evaluate a single function
  of the role-bound arguments (propagation function, horizontal shift,
  vertical shift, incidence factors).

``analogy_residual`` compares the two. Matrices are returned with shape
``z.shape + (k, k)`` and vectors with shape ``z.shape + (k,)``.

Problem names
-------------
half-plane-dirichlet, half-plane-neumann, half-plane-neumann-elastic,
soft-hard, wedge, finite-strip, staggered, strip-in-waveguide, quarter-plane
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import (
    ContinuousDispersion,
    ContinuousIncidence,
    ContinuousIncidence3D,
    LatticeDispersion,
    LatticeIncidence,
    LatticeIncidence3D,
    gamma,
    gamma_3d,
    q_physical,
    q_physical_3d,
    _check_cut,
)
from .errors import (
    ArityMismatch,
    AtIncidencePole,
    InvalidInput,
    KernelSingular,
    NotApplicable,
    NotKhrapkov,
)

SINGULAR_TOL = 1e-12

PROBLEMS = (
    "half-plane-dirichlet",
    "half-plane-neumann",
    "half-plane-neumann-elastic",
    "soft-hard",
    "wedge",
    "finite-strip",
    "staggered",
    "strip-in-waveguide",
    "quarter-plane",
)

SIDES = ("discrete", "continuous")


@dataclass(frozen=True)
class ProblemSpec:
    """A problem variant on one side of the analogy.

    Geometry: ``M`` (finite strip half-length, staggered horizontal offset),
    ``N`` (staggered vertical gap, waveguide width), ``L`` (strip position in
    the waveguide); ``a``, ``b`` are their continuous counterparts.
    """

    name: str
    side: str
    dispersion: LatticeDispersion | ContinuousDispersion
    incidence: object
    M: int | None = None
    N: int | None = None
    L: int | None = None
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.name not in PROBLEMS:
            raise InvalidInput(f"unknown problem {self.name!r}")
        if self.side not in SIDES:
            raise InvalidInput(f"side must be one of {SIDES}")
        disc = self.side == "discrete"
        if disc != isinstance(self.dispersion, LatticeDispersion):
            raise InvalidInput("dispersion type does not match side")
        three_d = self.name == "quarter-plane"
        want = {
            (True, False): LatticeIncidence,
            (True, True): LatticeIncidence3D,
            (False, False): ContinuousIncidence,
            (False, True): ContinuousIncidence3D,
        }[(disc, three_d)]
        if not isinstance(self.incidence, want):
            raise InvalidInput(f"incidence must be {want.__name__}")
        if self.name == "half-plane-neumann-elastic" and not disc:
            raise NotApplicable("the elastic Neumann variant exists on the lattice only")
        need = _GEOMETRY[self.name][0 if disc else 1]
        for g in need:
            v = getattr(self, g)
            if v is None:
                raise InvalidInput(f"{self.name} needs {g}")
            if disc and int(v) != v:
                raise InvalidInput(f"{g} must be an integer")
            if not v > 0 and not (g == "M" and self.name == "staggered" and v == 0):
                raise InvalidInput(f"{g} must be positive")
        if self.name == "strip-in-waveguide":
            self._check_guided()
        if self.name == "wedge" and not disc:
            th = self.incidence.theta
            if th is not None and not (0 <= th <= np.pi / 2):
                raise InvalidInput("wedge incidence angle must lie in [0, pi/2]")

    def _check_guided(self):
        if self.side == "discrete":
            if not self.L < self.N:
                raise InvalidInput("need L < N")
            q = self.incidence.q_in
            p = np.angle(q) * self.N / np.pi
            if abs(abs(q) - 1) > 1e-12 or abs(p - round(p)) > 1e-9 or round(p) % (2 * self.N) == 0:
                raise InvalidInput("incidence must be a guided mode q_in = exp(i pi p / N), p = 1..N")
        else:
            if not self.a < self.b:
                raise InvalidInput("need a < b")
            g = self.incidence.gamma_in * self.b / np.pi
            if abs(g.imag) > 1e-9 or abs(g.real - round(g.real)) > 1e-9:
                raise InvalidInput("incidence must be a guided mode gamma_in = pi n / b")
            if abs(self.incidence.gamma_in / self.dispersion.k) > 1 + 1e-12:
                raise InvalidInput("need |pi n / (k b)| <= 1")


_GEOMETRY = {
    "half-plane-dirichlet": ((), ()),
    "half-plane-neumann": ((), ()),
    "half-plane-neumann-elastic": ((), ()),
    "soft-hard": ((), ()),
    "wedge": ((), ()),
    "finite-strip": (("M",), ("a",)),
    "staggered": (("M", "N"), ("a", "b")),
    "strip-in-waveguide": (("N", "L"), ("a", "b")),
    "quarter-plane": ((), ()),
}

MATRIX_SIZE = {
    "half-plane-dirichlet": 1,
    "half-plane-neumann": 1,
    "half-plane-neumann-elastic": 1,
    "soft-hard": 2,
    "wedge": 3,
    "finite-strip": 2,
    "staggered": 2,
    "strip-in-waveguide": 2,
    "quarter-plane": 1,
}


def discrete_problem(name, ktilde, s_in=None, *, q_mode=None, s2_in=None, **geometry):
    """Build a lattice ``ProblemSpec``.

    ``s_in`` fixes the incidence through the physical root; for the
    strip in a waveguide pass ``q_mode=p`` instead (guided mode index).
    The quarter plane takes ``s_in`` and ``s2_in``.
    """
    disp = LatticeDispersion(ktilde)
    if name == "quarter-plane":
        inc = LatticeIncidence3D.from_s(s_in, s2_in, disp)
    elif name == "strip-in-waveguide":
        if q_mode is None:
            raise InvalidInput("strip-in-waveguide needs the guided mode index q_mode")
        inc = LatticeIncidence.from_waveguide_mode(q_mode, geometry["N"], disp)
    else:
        inc = LatticeIncidence.from_s(s_in, disp)
    return ProblemSpec(name, "discrete", disp, inc, **geometry)


def continuous_problem(name, k, theta=None, *, mode=None, phi=None, **geometry):
    """Build a continuous ``ProblemSpec`` (angles in radians)."""
    disp = ContinuousDispersion(k)
    if name == "quarter-plane":
        inc = ContinuousIncidence3D.from_angles(theta, phi, disp)
    elif name == "strip-in-waveguide":
        if mode is None:
            raise InvalidInput("strip-in-waveguide needs the guided mode index")
        inc = ContinuousIncidence.from_waveguide_mode(mode, geometry["b"], disp)
    else:
        inc = ContinuousIncidence.from_angle(theta, disp)
    return ProblemSpec(name, "continuous", disp, inc, **geometry)


# --- helpers --------------------------------------------------------------

def _z(spec, z):
    if spec.name == "quarter-plane":
        if not (isinstance(z, tuple) and len(z) == 2):
            raise InvalidInput("quarter-plane spectral point is a pair (z1, z2)")
        z1, z2 = np.broadcast_arrays(np.asarray(z[0], complex), np.asarray(z[1], complex))
        return z1, z2
    if isinstance(z, tuple):
        raise InvalidInput("scalar problems take a single spectral variable")
    return np.asarray(z, dtype=complex)


def _nonzero(x, what):
    if np.any(np.abs(x) < SINGULAR_TOL):
        raise KernelSingular(f"{what} vanishes")
    return x


def _pole(x):
    if np.any(np.abs(x) < SINGULAR_TOL):
        raise AtIncidencePole("spectral point at the incidence pole")
    return x


def _mat(rows):
    """Stack nested lists of equally-shaped arrays into ``shape + (r, c)``."""
    rows = [np.broadcast_arrays(*[np.asarray(e, dtype=complex) for e in r]) for r in rows]
    shape = np.broadcast_shapes(*[r[0].shape for r in rows])
    return np.stack(
        [np.stack([np.broadcast_to(e, shape) for e in r], axis=-1) for r in rows], axis=-2
    )


def _vec(items):
    arrs = np.broadcast_arrays(*[np.asarray(e, dtype=complex) for e in items])
    return np.stack(arrs, axis=-1)


def _prop(spec, z):
    """Propagation function ``Upsilon(s)`` or ``i*gamma(xi)``, checked nonzero."""
    if spec.side == "discrete":
        # zeros of Upsilon sit on the cut: report them as singular first
        if spec.name == "quarter-plane":
            q = q_physical_3d(z[0], z[1], spec.dispersion, on_cut="ignore")
        else:
            q = q_physical(z, spec.dispersion, on_cut="ignore")
        P = _nonzero((q - 1 / q) / 2, "Upsilon")
        _check_cut(q, "raise")
        return P
    if spec.name == "quarter-plane":
        return _nonzero(1j * gamma_3d(z[0], z[1], spec.dispersion), "gamma")
    return _nonzero(1j * gamma(z, spec.dispersion), "gamma")


# --- direct kernels -------------------------------------------------------

def kernel(spec: ProblemSpec, z):
    """Kernel matrix from the closed-form expressions.

    Raises
    ------
    KernelSingular
        At zeros of the propagation function or at waveguide resonances.
    """
    z = _z(spec, z)
    disc = spec.side == "discrete"
    name = spec.name
    if name == "half-plane-neumann-elastic":
        q = q_physical(z, spec.dispersion)
        ub = _nonzero(z + 1 / z + q + spec.dispersion.k2 - 3, "elastic upsilon")
        return _mat([[ub]])
    if name == "strip-in-waveguide":
        return _kernel_waveguide(spec, z)
    P = _prop(spec, z)
    if name in ("half-plane-dirichlet", "quarter-plane"):
        return _mat([[1 / P]])
    if name == "half-plane-neumann":
        return _mat([[P]])
    if name == "soft-hard":
        return 0.5 * _mat([[1, P], [-1 / P, 1]])
    if name == "wedge":
        if disc:
            Y = P
            return -1 / (2 * Y)[..., None, None] * _mat(
                [[0, 2 * Y, -2 * Y ** 2], [Y, Y, Y ** 2], [-1, 1, Y]]
            )
        g = P / 1j
        return (1j / (2 * g))[..., None, None] * _mat(
            [[0, 2j * g, 2 * g ** 2], [1j * g, 1j * g, -g ** 2], [-1, 1, 1j * g]]
        )
    if name == "finite-strip":
        if disc:
            e = z ** (2 * spec.M)
        else:
            e = np.exp(2j * z * spec.a)
        return _mat([[-e, 1 / P], [0, 1 / e]])
    if name == "staggered":
        if disc:
            q = q_physical(z, spec.dispersion)
            h, v = z ** spec.M, q ** spec.N
            return (P / 2)[..., None, None] * _mat([[1, h * v], [v / h, 1]])
        g = P / 1j
        ea, eb = np.exp(1j * z * spec.a), np.exp(1j * g * spec.b)
        return (1j * g / 2)[..., None, None] * _mat([[1, ea * eb], [eb / ea, 1]])
    raise NotApplicable(name)


def _kernel_waveguide(spec, z):
    if spec.side == "discrete":
        q = q_physical(z, spec.dispersion)
        Y = _nonzero((q - 1 / q) / 2, "Upsilon")
        N, L = spec.N, spec.L
        res = _nonzero(q ** N - q ** (-N), "q^N - q^-N")
        a = q ** (2 * L - N) - q ** (N - 2 * L)
        m = _mat([
            [-Y * a, (q ** L + q ** -L) * (q ** (N - L) + q ** (L - N))],
            [Y ** 2 * (q ** L - q ** -L) * (q ** (N - L) - q ** (L - N)), Y * a],
        ])
        return m / (Y * res)[..., None, None]
    g = _nonzero(gamma(z, spec.dispersion), "gamma")
    a, b = spec.a, spec.b
    sb = _nonzero(np.sin(g * b), "sin(gamma b)")
    m = _mat([
        [g * np.sin(g * (2 * a - b)), 2 * np.cos(g * a) * np.cos(g * (b - a))],
        [2 * g ** 2 * np.sin(g * a) * np.sin(g * (b - a)), -g * np.sin(g * (2 * a - b))],
    ])
    return m * (-1 / (g * sb))[..., None, None]


# --- direct forcings ------------------------------------------------------

def forcing(spec: ProblemSpec, z):
    """Forcing vector from the closed-form expressions.

    Raises
    ------
    AtIncidencePole
        When ``z`` coincides with the incidence pole.
    """
    z = _z(spec, z)
    disc = spec.side == "discrete"
    inc = spec.incidence
    name = spec.name
    if name == "quarter-plane":
        if disc:
            d = _pole((1 - z[0] / inc.s1_in) * (1 - z[1] / inc.s2_in))
            return _vec([1 / d])
        d = _pole((z[0] - inc.xi1_in) * (z[1] - inc.xi2_in))
        return _vec([-1 / d])
    if name == "strip-in-waveguide":
        return _forcing_waveguide(spec, z)
    if disc:
        d = _pole(1 - z / inc.s_in)
    else:
        d = _pole(z - inc.xi_in)
    if name == "half-plane-dirichlet":
        return _vec([1 / d] if disc else [1j / d])
    if name == "half-plane-neumann":
        return _vec([-inc.upsilon_in / d] if disc else [inc.gamma_in / d])
    if name == "half-plane-neumann-elastic":
        ub_in = inc.s_in + 1 / inc.s_in + inc.q_in + spec.dispersion.k2 - 3
        return _vec([ub_in / d])
    if name == "soft-hard":
        P = _prop(spec, z)
        if disc:
            Yi = inc.upsilon_in
            return _vec([P + Yi, Yi / P - 1]) * (-1 / (2 * d))[..., None]
        g, gi = P / 1j, inc.gamma_in
        return _vec([g + gi, 1j - 1j * gi / g]) * (1 / (2 * d))[..., None]
    if name == "wedge":
        P = _prop(spec, z)
        if disc:
            d2 = _pole(1 - z * inc.s_in)
            return inc.upsilon_in * _vec([2 / d2, 1 / d, -1 / (d * P)])
        g = P / 1j
        d2 = _pole(z + inc.xi_in)
        return -inc.gamma_in * _vec([2 / d2, 1 / d, 1j / (d * g)])
    if name == "finite-strip":
        if disc:
            return _vec([inc.s_in ** spec.M / d, 0 * d])
        return _vec([1j * np.exp(1j * inc.xi_in * spec.a) / d, 0 * d])
    if name == "staggered":
        if disc:
            f = -inc.upsilon_in / d
            return _vec([f * inc.s_in ** spec.M, f * inc.q_in ** spec.N])
        f = inc.gamma_in / d
        return _vec([f * np.exp(1j * inc.xi_in * spec.a), f * np.exp(1j * inc.gamma_in * spec.b)])
    raise NotApplicable(name)


def _forcing_waveguide(spec, z):
    inc = spec.incidence
    if spec.side == "discrete":
        N, L = spec.N, spec.L
        q = q_physical(z, spec.dispersion)
        Y = _nonzero((q - 1 / q) / 2, "Upsilon")
        qi, Yh, Yi = inc.q_in, inc.upsilon_hat_in, inc.upsilon_in
        res = _nonzero(q ** N - q ** (-N), "q^N - q^-N")
        den = _pole((1 - q / qi) * (1 - q * qi))
        t1 = -Yh * (qi ** (L - N) + qi ** (N - L)) * (q ** L - q ** -L) / (2 * res * den)
        t2 = Yh * Yi * (
            (q ** L + q ** -L) * (qi ** (L - N) - qi ** (N - L)) + 2 * (qi ** N + qi ** -N)
        ) / (2 * Y * res * den)
        f = t1 + t2
        return _vec([f * (q ** (N - L) + q ** (L - N)), -f * Y * (q ** (N - L) - q ** (L - N))])
    g = _nonzero(gamma(z, spec.dispersion), "gamma")
    a, b = spec.a, spec.b
    xi, gi = inc.xi_in, inc.gamma_in
    sb = _nonzero(np.sin(g * b), "sin(gamma b)")
    den = _pole((g - gi) * (g + gi))
    f = 2j * xi * (
        g * np.cos(gi * (a - b)) * np.sin(a * g)
        - gi * (np.cos(g * a) * np.sin(gi * (a - b)) + np.sin(gi * b))
    ) / (g * sb * den)
    return _vec([f * np.cos(g * (b - a)), f * g * np.sin(g * (b - a))])


# --- generating functions -------------------------------------------------

def _arity(args, n):
    if len(args) != n:
        raise ArityMismatch(f"expected {n} arguments, got {len(args)}")
    return [np.asarray(t, dtype=complex) for t in args]


def _gk_inverse(t):
    return _mat([[1 / t]])


def _gk_identity(t):
    return _mat([[t]])


def _gk_soft_hard(t):
    return 0.5 * _mat([[1, t], [1 / (-t), 1]])


def _gk_wedge(t):
    return (-1 / (2 * t))[..., None, None] * _mat(
        [[0, 2 * t, -2 * t ** 2], [t, t, t ** 2], [-1, 1, t]]
    )


def _gk_strip(t1, t2):
    return _mat([[-t2, 1 / t1], [0, 1 / t2]])


def _gk_staggered(t1, t2, t3):
    return (t1 / 2)[..., None, None] * _mat([[1, t2 * t3], [t3 / t2, 1]])


def _gk_waveguide(t1, t2, t3):
    pre = 1 / (t1 * (t2 - 1 / t2))
    d = t3 ** 2 / t2 - t2 / t3 ** 2
    return pre[..., None, None] * _mat([
        [-t1 * d, (t3 + 1 / t3) * (t2 / t3 + t3 / t2)],
        [t1 ** 2 * (t3 - 1 / t3) * (t2 / t3 - t3 / t2), t1 * d],
    ])


def _gf_inverse(t):
    return _vec([1 / t])


def _gf_neumann(t1, t2):
    return _vec([-t2 / t1])


def _gf_soft_hard(t1, t2, t3):
    return (-1 / (2 * t1))[..., None] * _vec([t2 + t3, t3 / t2 - 1])


def _gf_wedge(t1, t2, t3, t4):
    return t4[..., None] * _vec([2 / t2, 1 / t1, -1 / (t1 * t3)])


def _gf_strip(t1, t2):
    return (t2 / t1)[..., None] * _vec([1, 0 * t1])


def _gf_staggered(t1, t2, t3, t4):
    return (-t1 / t2)[..., None] * _vec([t3, t4])


_GEN_KERNEL = {
    "half-plane-dirichlet": (_gk_inverse, 1),
    "half-plane-neumann": (_gk_identity, 1),
    "soft-hard": (_gk_soft_hard, 1),
    "wedge": (_gk_wedge, 1),
    "finite-strip": (_gk_strip, 2),
    "staggered": (_gk_staggered, 3),
    "strip-in-waveguide": (_gk_waveguide, 3),
    "quarter-plane": (_gk_inverse, 1),
}

_GEN_FORCING = {
    "half-plane-dirichlet": (_gf_inverse, 1),
    "half-plane-neumann": (_gf_neumann, 2),
    "soft-hard": (_gf_soft_hard, 3),
    "wedge": (_gf_wedge, 4),
    "finite-strip": (_gf_strip, 2),
    "staggered": (_gf_staggered, 4),
    "quarter-plane": (_gf_inverse, 1),
}


def generating_kernel(name, args):
    """Generating kernel function of problem ``name`` at ``args``."""
    name = name.name if isinstance(name, ProblemSpec) else name
    if name not in _GEN_KERNEL:
        raise NotApplicable(f"no generating kernel for {name}")
    f, n = _GEN_KERNEL[name]
    return f(*_arity(args, n))


def generating_forcing(name, args):
    """Generating forcing function of problem ``name`` at ``args``."""
    name = name.name if isinstance(name, ProblemSpec) else name
    if name not in _GEN_FORCING:
        raise NotApplicable(f"no generating forcing for {name}")
    f, n = _GEN_FORCING[name]
    return f(*_arity(args, n))


def kernel_args(spec: ProblemSpec, z):
    """Role-bound arguments of the generating kernel at ``z``.

    Order: propagation function, horizontal shift, vertical shift.
    """
    z = _z(spec, z)
    disc = spec.side == "discrete"
    name = spec.name
    if name == "strip-in-waveguide":
        if disc:
            q = q_physical(z, spec.dispersion)
            return [(q - 1 / q) / 2, q ** spec.N, q ** spec.L]
        g = gamma(z, spec.dispersion)
        return [1j * g, np.exp(1j * g * spec.b), np.exp(1j * g * spec.a)]
    P = _prop(spec, z)
    if name == "finite-strip":
        return [P, z ** (2 * spec.M) if disc else np.exp(2j * z * spec.a)]
    if name == "staggered":
        if disc:
            return [P, z ** spec.M, q_physical(z, spec.dispersion) ** spec.N]
        return [P, np.exp(1j * z * spec.a), np.exp(P * spec.b)]
    if name in _GEN_KERNEL:
        return [P]
    raise NotApplicable(f"no generating kernel for {name}")


def forcing_args(spec: ProblemSpec, z):
    """Role-bound arguments of the generating forcing at ``z``."""
    z = _z(spec, z)
    disc = spec.side == "discrete"
    inc = spec.incidence
    name = spec.name
    if name == "quarter-plane":
        if disc:
            return [(1 - z[0] / inc.s1_in) * (1 - z[1] / inc.s2_in)]
        return [(1j * z[0] - 1j * inc.xi1_in) * (1j * z[1] - 1j * inc.xi2_in)]
    if name not in _GEN_FORCING:
        raise NotApplicable(f"no generating forcing for {name}")
    if disc:
        pole = 1 - z / inc.s_in
        prop_in = inc.upsilon_in
    else:
        pole = 1j * inc.xi_in - 1j * z
        prop_in = 1j * inc.gamma_in
    if name == "half-plane-dirichlet":
        return [pole]
    if name == "half-plane-neumann":
        return [pole, prop_in]
    if name == "soft-hard":
        return [pole, _prop(spec, z), prop_in]
    if name == "wedge":
        mirror = 1 - z * inc.s_in if disc else -1j * inc.xi_in - 1j * z
        return [pole, mirror, _prop(spec, z), prop_in]
    if name == "finite-strip":
        return [pole, inc.s_in ** spec.M if disc else np.exp(1j * inc.xi_in * spec.a)]
    if name == "staggered":
        if disc:
            return [prop_in, pole, inc.s_in ** spec.M, inc.q_in ** spec.N]
        return [prop_in, pole, np.exp(1j * inc.xi_in * spec.a), np.exp(1j * inc.gamma_in * spec.b)]
    raise NotApplicable(name)


def analogy_residual(spec: ProblemSpec, z, which: str = "both") -> float:
    """Max-norm difference between direct and generated kernel/forcing.

    Parameters
    ----------
    which : {'kernel', 'forcing', 'both'}
    """
    if which not in ("kernel", "forcing", "both"):
        raise InvalidInput("which must be 'kernel', 'forcing' or 'both'")
    r = 0.0
    if which in ("kernel", "both"):
        K = kernel(spec, z)
        G = generating_kernel(spec.name, kernel_args(spec, z))
        r = max(r, float(np.max(np.abs(K - G))))
    if which in ("forcing", "both"):
        if spec.name not in _GEN_FORCING:
            raise NotApplicable(f"no generating forcing for {spec.name}")
        F = forcing(spec, z)
        G = generating_forcing(spec.name, forcing_args(spec, z))
        r = max(r, float(np.max(np.abs(F - G))))
    return r


def wh_residual(spec: ProblemSpec, psi_minus, psi_plus, z):
    """``psi_minus(z) - K(z) psi_plus(z) - F(z)``.

    ``psi_minus`` / ``psi_plus`` are arrays of shape ``z.shape + (k,)`` or
    callables returning such arrays.
    """
    zz = _z(spec, z)
    pm = psi_minus(z) if callable(psi_minus) else psi_minus
    pp = psi_plus(z) if callable(psi_plus) else psi_plus
    K = kernel(spec, z)
    F = forcing(spec, z)
    shape = (zz[0] if isinstance(zz, tuple) else zz).shape + (K.shape[-1],)
    pm = np.broadcast_to(np.asarray(pm, dtype=complex), shape)
    pp = np.broadcast_to(np.asarray(pp, dtype=complex), shape)
    return pm - np.einsum("...ij,...j->...i", K, pp) - F


# --- Khrapkov deviator ----------------------------------------------------

@dataclass(frozen=True)
class DeviatorPolynomial:
    """Deviator ``Delta`` with ``J**2 = Delta * I`` as a polynomial.

    ``coefficients`` are sympy expressions in ascending powers of
    ``variable``.
    """

    variable: object
    expression: object
    coefficients: tuple
    degree: int

    def __call__(self, value, **subs):
        import sympy

        expr = self.expression.subs({sympy.Symbol(k): v for k, v in subs.items()})
        return complex(expr.subs(self.variable, value))


def khrapkov_split(matrix):
    """Write a symbolic 2x2 matrix as ``a*I + b*J`` with polynomial ``J``.

    Returns ``(a, b, J, Delta)`` with ``J**2 == Delta * I``.
    """
    import sympy

    K = sympy.Matrix(matrix)
    if K.shape != (2, 2):
        raise NotKhrapkov("Khrapkov form needs a 2x2 kernel")
    a = sympy.simplify(K.trace() / 2)
    J0 = (K - a * sympy.eye(2)).applyfunc(sympy.cancel)
    dens = [sympy.fraction(e)[1] for e in J0]
    b = 1 / sympy.lcm(dens) if any(d != 1 for d in dens) else sympy.Integer(1)
    J = (J0 / b).applyfunc(sympy.cancel)
    J2 = (J * J).applyfunc(sympy.expand)
    if sympy.simplify(J2[0, 1]) != 0 or sympy.simplify(J2[1, 0]) != 0:
        raise NotKhrapkov("J**2 is not scalar")
    if sympy.simplify(J2[0, 0] - J2[1, 1]) != 0:
        raise NotKhrapkov("J**2 is not scalar")
    return a, b, J, J2[0, 0]


def deviator_polynomial(name, side: str) -> DeviatorPolynomial:
    """Deviator polynomial of a single-argument 2x2 kernel.

    The generating kernel is evaluated at a symbol ``t``; the deviator in
    ``t`` is then rewritten in the spectral variable: ``t**2 = xi**2 - k**2``
    on the continuous side, ``t**2 = ((kt2 - 4 + s + 1/s)**2 - 4)/4`` on
    the lattice side, cleared of negative powers of ``s``.
    """
    import sympy

    name = name.name if isinstance(name, ProblemSpec) else name
    if side not in SIDES:
        raise InvalidInput(f"side must be one of {SIDES}")
    if name not in _GEN_KERNEL or _GEN_KERNEL[name][1] != 1 or MATRIX_SIZE[name] != 2:
        raise NotKhrapkov(f"{name} kernel is not a single-argument 2x2 kernel")
    t = sympy.Symbol("t")
    f, _ = _GEN_KERNEL[name]
    K = _symbolic_kernel(f, t)
    _, _, J, delta = khrapkov_split(K)
    delta = sympy.expand(delta)
    poly_t = sympy.Poly(delta, t)
    if any(m[0] % 2 for m in poly_t.monoms()):
        raise NotKhrapkov("deviator is not a polynomial in t**2")
    if side == "continuous":
        x, k = sympy.symbols("xi k")
        expr = sympy.expand(delta.subs(t ** 2, x ** 2 - k ** 2))
    else:
        x, kt2 = sympy.symbols("s kt2")
        expr = sympy.expand(delta.subs(t ** 2, ((kt2 - 4 + x + 1 / x) ** 2 - 4) / 4))
        lowest = min(sympy.Poly(sympy.expand(expr * x ** 8), x).monoms())[0] - 8
        expr = sympy.expand(expr * x ** (-lowest))
    poly = sympy.Poly(expr, x)
    coeffs = tuple(reversed(poly.all_coeffs()))
    return DeviatorPolynomial(x, expr, coeffs, poly.degree())


def _symbolic_kernel(f, t):
    # the numeric generating functions stack numpy arrays; rebuild symbolically
    import sympy

    probe = {
        _gk_soft_hard: lambda t: sympy.Rational(1, 2) * sympy.Matrix([[1, t], [1 / (-t), 1]]),
    }
    if f not in probe:
        raise NotKhrapkov("no symbolic form available")
    return probe[f](t)
