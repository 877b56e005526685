"""Brute-force lattice scattering on a truncated box.

The scattered field is found by a sparse direct solve on the square
``[-R, R]**2`` (or the half-space box ``[-R, R]**2 x [0, Lz]`` in 3D) with
zero Dirichlet data on the outer boundary. Absorption (``Im kt > 0``) makes
the truncation error exponentially small.

Assembly is cell based: every unit square contributes ``kt**2/4 - 1`` to
the diagonal of its four corners and ``1/2`` to each of its four edges.
Summing over the cells around a node yields the Helmholtz stencil at
interior nodes and the normal-derivative stencil on scatterers. Plates
are cuts of the lattice: their nodes are duplicated, with cells below the
plate attached to the lower copy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spl

from .dispersion import q_physical, q_physical_3d
from .errors import ExtentTooSmall, InvalidInput, SingularSystem
from .wh_catalog import ProblemSpec

SUPPORTED_2D = (
    "half-plane-dirichlet",
    "half-plane-neumann",
    "soft-hard",
    "finite-strip",
    "staggered",
    "free",
)


@dataclass(frozen=True)
class TruncatedProblem:
    """Discrete problem on a truncated box.

    Parameters
    ----------
    problem : ProblemSpec
        Discrete side. Use ``scatterer='free'`` for the lattice without
        obstacles.
    R : int
        Box half-width.
    Lz : int, optional
        Height of the 3D half-space box, default ``2*R + 1``.
    """

    problem: ProblemSpec
    R: int
    Lz: int | None = None
    scatterer: str | None = None

    def __post_init__(self):
        p = self.problem
        if p.side != "discrete":
            raise InvalidInput("the oracle solves lattice problems only")
        if p.dispersion.ktilde.imag < 0.05:
            raise InvalidInput("oracle needs Im kt >= 0.05")
        kind = self.kind
        if p.name == "quarter-plane":
            if p.dispersion.ktilde.imag < 0.3:
                raise InvalidInput("quarter-plane oracle needs Im kt >= 0.3")
            if self.R > 24 or (self.Lz or 0) > 48:
                raise ExtentTooSmall("3D box limited to R <= 24")
        elif kind not in SUPPORTED_2D:
            raise InvalidInput(f"oracle does not support {p.name}")
        geo = max([g for g in (p.M, p.N, p.L) if g] + [1])
        if self.R < 4 * geo or self.R < 4:
            raise ExtentTooSmall(f"need R >= 4 * {geo}")

    @property
    def kind(self):
        return self.scatterer or self.problem.name


# --- 2D -------------------------------------------------------------------

@dataclass
class OracleSolution:
    """Solved scattered field in 2D.

    ``u[m + R, n + R]`` holds the main copy of every node (the upper copy on
    plates); ``lower[n0][m + R]`` the lower copy on plate row ``n0`` (NaN
    off the plate).
    """

    tp: TruncatedProblem
    u: np.ndarray
    lower: dict
    residual: float
    _cells: np.ndarray = field(repr=False)
    _cell_n: np.ndarray = field(repr=False)
    _values: np.ndarray = field(repr=False)
    _main: np.ndarray = field(repr=False)
    _copy: dict = field(repr=False)

    @property
    def R(self):
        return self.tp.R

    def value(self, m, n, side=+1):
        """Field at ``(m, n)``; ``side=-1`` selects the lower plate copy."""
        R = self.R
        if side < 0 and n in self.lower and not np.isnan(self.lower[n][m + R]):
            return self.lower[n][m + R]
        return self.u[m + R, n + R]

    def jump(self, n0):
        """``u(m, n0+) - u(m, n0-)`` along a plate row (0 off the plate)."""
        R = self.R
        low = self.lower.get(n0)
        if low is None:
            return np.zeros(2 * R + 1, complex)
        return np.where(np.isnan(low), 0, self.u[:, n0 + R] - low)

    def _derivative(self, n0, cell_row, lower):
        k2 = self.tp.problem.dispersion.k2
        A = _cell_matrix(self._cells[self._cell_n == cell_row], len(self._values), k2)
        d = A @ self._values
        R = self.R
        idx = self._main[:, n0 + R].copy()
        if lower and n0 in self._copy:
            c = self._copy[n0]
            idx = np.where(c >= 0, c, idx)
        return d[idx]

    def upper_derivative(self, n0):
        """Normal derivative on row ``n0`` from the cells above (main copies)."""
        return self._derivative(n0, n0, lower=False)

    def lower_derivative(self, n0):
        """Normal derivative on row ``n0`` from the cells below (lower copies)."""
        return self._derivative(n0, n0 - 1, lower=True)


def _cell_matrix(cells, n, k2):
    """Sum of unit-square contributions; corners ordered (0,0),(1,0),(0,1),(1,1)."""
    rows, cols, vals = [], [], []
    nc = len(cells)
    for a in range(4):
        rows.append(cells[:, a])
        cols.append(cells[:, a])
        vals.append(np.full(nc, k2 / 4 - 1, dtype=complex))
    for a, b in ((0, 1), (0, 2), (1, 3), (2, 3)):
        rows += [cells[:, a], cells[:, b]]
        cols += [cells[:, b], cells[:, a]]
        vals += [np.full(nc, 0.5, dtype=complex)] * 2
    if not nc:
        return sp.csr_matrix((n, n), dtype=complex)
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )


def _plates(tp):
    """Plate rows ``{n0: (m_lo, m_hi, upper_bc, lower_bc)}`` and Dirichlet lines."""
    p, R = tp.problem, tp.R
    kind = tp.kind
    if kind == "free":
        return {}, []
    if kind == "half-plane-dirichlet":
        return {}, [(0, 0, R)]
    if kind == "finite-strip":
        return {}, [(0, -p.M, p.M)]
    if kind == "half-plane-neumann":
        return {0: (0, R, "N", "N")}, []
    if kind == "soft-hard":
        return {0: (0, R, "D", "N")}, []
    if kind == "staggered":
        return {0: (-p.M, R, "N", "N"), -p.N: (0, R, "N", "N")}, []
    raise InvalidInput(kind)


def _factor_solve(A, rhs):
    with warnings.catch_warnings():
        warnings.simplefilter("error", spl.MatrixRankWarning)
        try:
            lu = spl.splu(A.tocsc())
        except (RuntimeError, spl.MatrixRankWarning) as exc:
            raise SingularSystem(str(exc)) from exc
    x = lu.solve(rhs)
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite solution")
    return x


def solve(tp: TruncatedProblem) -> OracleSolution:
    """Solve the truncated 2D scattering problem.

    Returns the scattered field; the incident wave is ``tp.problem.incidence``.
    """
    if tp.problem.name == "quarter-plane":
        raise InvalidInput("use solve_3d for the quarter plane")
    R = tp.R
    k2 = tp.problem.dispersion.k2
    inc = tp.problem.incidence
    side = 2 * R + 1
    main = np.arange(side * side).reshape(side, side)
    coords = [np.repeat(np.arange(-R, R + 1), side), np.tile(np.arange(-R, R + 1), side)]
    nid = side * side
    plates, dlines = _plates(tp)
    copy = {}
    extra_m, extra_n = [], []
    for n0, (lo, hi, _, _) in plates.items():
        c = np.full(side, -1)
        ms = np.arange(lo, hi + 1)
        c[ms + R] = nid + np.arange(len(ms))
        nid += len(ms)
        copy[n0] = c
        extra_m.append(ms)
        extra_n.append(np.full(len(ms), n0))
    m = np.concatenate([coords[0]] + extra_m)
    n = np.concatenate([coords[1]] + extra_n)

    # cells by lower-left corner; top corners use lower copies on plate rows
    cm, cn = np.meshgrid(np.arange(-R, R), np.arange(-R, R), indexing="ij")
    cm, cn = cm.ravel(), cn.ravel()
    cells = np.stack([
        main[cm + R, cn + R], main[cm + 1 + R, cn + R],
        main[cm + R, cn + 1 + R], main[cm + 1 + R, cn + 1 + R],
    ], axis=1)
    for n0, c in copy.items():
        sel = cn + 1 == n0
        for col, dm in ((2, 0), (3, 1)):
            alt = c[cm[sel] + dm + R]
            cells[sel, col] = np.where(alt >= 0, alt, cells[sel, col])
    A = _cell_matrix(cells, nid, k2)

    uin = inc.field(m, n)
    fixed = (np.abs(m) == R) | (np.abs(n) == R)
    val = np.zeros(nid, complex)
    rhs = np.zeros(nid, complex)
    for n0, lo, hi in dlines:
        sel = (n == n0) & (m >= lo) & (m <= hi) & ~fixed
        fixed |= sel
        val[sel] = -uin[sel]
    Auin = A @ uin
    for n0, (lo, hi, ubc, lbc) in plates.items():
        for bc, ids in ((ubc, main[np.arange(lo, hi + 1) + R, n0 + R]),
                        (lbc, copy[n0][np.arange(lo, hi + 1) + R])):
            ids = ids[~fixed[ids]]
            if bc == "D":
                fixed[ids] = True
                val[ids] = -uin[ids]
            else:
                rhs[ids] = -Auin[ids]
    free = ~fixed
    A = A.tocsr()
    u = val.copy()
    Aff = A[free][:, free]
    b = rhs[free] - A[free][:, fixed] @ val[fixed]
    u[free] = _factor_solve(Aff, b)
    r = A[free] @ u - rhs[free]
    scale = max(1.0, float(np.abs(b).max()) if b.size else 1.0)
    residual = float(np.abs(r).max()) / scale if r.size else 0.0

    grid = u[main]
    lower = {}
    for n0, c in copy.items():
        low = np.full(side, np.nan, complex)
        ok = c >= 0
        low[ok] = u[c[ok]]
        lower[n0] = low
    return OracleSolution(tp, grid, lower, residual, cells, cn, u, main, copy)


@dataclass(frozen=True)
class Spectra:
    """Sampled one-sided transforms with an estimated truncation tail."""

    samples: np.ndarray
    minus: np.ndarray
    plus: np.ndarray
    tail_bound: float


def _tail(coeffs_at_edge, rho):
    return float(np.max(np.abs(coeffs_at_edge))) * rho / (1 - rho)


def decay_ratio(tp: TruncatedProblem, samples) -> float:
    """``exp(-min(-log|q(s)|))`` over the samples, the slowest lattice decay."""
    disp = tp.problem.dispersion
    if tp.problem.name == "quarter-plane":
        s1, s2 = samples
        q = q_physical_3d(s1, s2, disp)
    else:
        q = q_physical(samples, disp)
    return float(np.max(np.abs(q)))


def extract_spectra(sol: OracleSolution, samples) -> Spectra:
    """One-sided transforms of the boundary data used by the catalog.

    The layout of ``minus`` / ``plus`` follows the unknown vectors of the
    catalog kernels; sums are truncated to ``|m| < R``.
    """
    s = np.asarray(samples, dtype=complex)
    tp = sol.tp
    p = tp.problem
    R = tp.R
    ms = np.arange(-R + 1, R)
    E = s[:, None] ** ms[None, :]
    inner = slice(1, 2 * R)  # drop box nodes m = +-R

    def tsum(vals, mask):
        return E[:, mask] @ vals[mask]

    u0 = sol.u[inner, R]
    d0 = sol.upper_derivative(0)[inner]
    kind = tp.kind
    edge = []
    if kind == "half-plane-dirichlet":
        mi, pl = [tsum(u0, ms < 0)], [tsum(d0, ms >= 0)]
        edge = [u0[0], d0[-1]]
    elif kind == "half-plane-neumann":
        mi, pl = [tsum(d0, ms < 0)], [tsum(u0, ms >= 0)]
        edge = [d0[0], u0[-1]]
    elif kind == "soft-hard":
        ul = sol.lower[0][inner]
        ul = np.where(np.isnan(ul), 0, ul)
        # the closed-form kernel holds with the plus pair entering negated
        mi = [tsum(d0, ms < 0), tsum(u0, ms < 0)]
        pl = [-tsum(d0, ms >= 0), -tsum(ul, ms >= 0)]
        edge = [d0[0], u0[0], d0[-1], ul[-1]]
    elif kind == "finite-strip":
        M, inc = p.M, p.incidence
        mi = [s ** M * tsum(u0, ms <= -M - 1), s ** -M * tsum(d0, np.abs(ms) <= M)]
        pl = [
            s ** -M * tsum(u0, ms >= M) + inc.s_in ** -M / (1 - s / inc.s_in),
            s ** M * tsum(d0, np.abs(ms) <= M),
        ]
        edge = [u0[0], u0[-1]]
    elif kind == "staggered":
        M, N = p.M, p.N
        dN = sol.upper_derivative(-N)[inner]
        j0, jN = sol.jump(0)[inner], sol.jump(-N)[inner]
        mi = [s ** M * tsum(d0, ms <= -M - 1), tsum(dN, ms <= -1)]
        pl = [s ** M * tsum(j0, ms >= -M), tsum(jN, ms >= 0)]
        edge = [d0[0], dN[0], j0[-1], jN[-1]]
    else:
        raise InvalidInput(f"no spectra for {kind}")
    rho = decay_ratio(tp, s)
    return Spectra(s, np.stack(mi, -1), np.stack(pl, -1), _tail(edge, rho))


# --- 3D -------------------------------------------------------------------

@dataclass
class OracleSolution3D:
    """Scattered field ``u[m + R, n + R, l]`` on the upper half-space box."""

    tp: TruncatedProblem
    u: np.ndarray
    derivative: np.ndarray  # upper normal derivative on l = 0
    residual: float


_CUBE = [(i, j, k) for k in (0, 1) for j in (0, 1) for i in (0, 1)]


def solve_3d(tp: TruncatedProblem) -> OracleSolution3D:
    """Quarter-plane problem on the upper half-space.

    The field is even in ``l``, so the plane ``l = 0`` carries the
    planar normal derivative as a homogeneous Neumann condition off the
    quarter plane and the Dirichlet data ``-u_in`` on it.
    """
    p = tp.problem
    if p.name != "quarter-plane":
        raise InvalidInput("solve_3d handles the quarter plane only")
    R = tp.R
    Lz = tp.Lz or 2 * R + 1
    k2 = p.dispersion.k2
    nm, nl = 2 * R + 1, Lz + 1
    idx = np.arange(nm * nm * nl).reshape(nm, nm, nl)
    m, n, l = (a.ravel() for a in np.meshgrid(
        np.arange(-R, R + 1), np.arange(-R, R + 1), np.arange(nl), indexing="ij"))
    nid = m.size
    corners = np.stack(
        [idx[i:nm - 1 + i, j:nm - 1 + j, k:nl - 1 + k].ravel() for i, j, k in _CUBE], axis=1
    )
    # unit cube: diagonal kt2/8 - 3/4, 1/4 on each of the 12 edges
    rows, cols, vals = [], [], []
    nc = len(corners)
    for a in range(8):
        rows.append(corners[:, a])
        cols.append(corners[:, a])
        vals.append(np.full(nc, k2 / 8 - 0.75, dtype=complex))
        for b in range(8):
            if sum(abs(x - y) for x, y in zip(_CUBE[a], _CUBE[b])) == 1:
                rows.append(corners[:, a])
                cols.append(corners[:, b])
                vals.append(np.full(nc, 0.25, dtype=complex))
    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(nid, nid)
    )
    inc = p.incidence
    uin = inc.field(m, n, l)
    outer = (np.abs(m) == R) | (np.abs(n) == R) | (l == Lz)
    qp = (l == 0) & (m >= 0) & (n >= 0) & ~outer
    fixed = outer | qp
    free = ~fixed
    val = np.zeros(nid, complex)
    val[qp] = -uin[qp]
    b = -A[free][:, fixed] @ val[fixed]
    u = val.copy()
    u[free] = _factor_solve(A[free][:, free], b)
    r = A[free] @ u
    residual = float(np.abs(r).max()) / max(1.0, float(np.abs(b).max()))
    d = A @ u
    grid = u.reshape(nm, nm, nl)
    return OracleSolution3D(tp, grid, d.reshape(nm, nm, nl)[:, :, 0], residual)


def extract_spectra_3d(sol: OracleSolution3D, s1, s2) -> Spectra:
    """``U = sum over l=0 outside the quarter plane of s1**m s2**n u`` and
    ``W = sum over the quarter plane of s1**m s2**n du``."""
    s1 = np.asarray(s1, dtype=complex).ravel()
    s2 = np.asarray(s2, dtype=complex).ravel()
    R = sol.tp.R
    ms = np.arange(-R + 1, R)
    inner = slice(1, 2 * R)
    u0 = sol.u[inner, inner, 0]
    d0 = sol.derivative[inner, inner]
    M, N = np.meshgrid(ms, ms, indexing="ij")
    inQ = (M >= 0) & (N >= 0)
    E1 = s1[:, None] ** ms[None, :]
    E2 = s2[:, None] ** ms[None, :]
    U = np.einsum("si,sj,ij->s", E1, E2, np.where(inQ, 0, u0))
    W = np.einsum("si,sj,ij->s", E1, E2, np.where(inQ, d0, 0))
    rho = decay_ratio(sol.tp, (s1, s2))
    edge = np.concatenate([u0[0], u0[:, 0], d0[-1], d0[:, -1]])
    return Spectra(np.stack([s1, s2], -1), U[:, None], W[:, None], _tail(edge, rho))
