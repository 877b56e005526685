"""Lattice domains, boundary classification and discrete Helmholtz stencils.

A domain is a finite union of lattice cells (unit squares in 2D, unit
cubes in 3D). A node belongs to the domain when it is a corner of at least
one occupied cell; it is interior when all ``2**d`` incident cells are
occupied and a boundary node otherwise.

Interior nodes carry the Helmholtz stencil (neighbours 1, centre
``kt**2 - 2d``). Boundary nodes carry the normal-derivative stencil whose
centre weight depends on the boundary class and whose neighbour weights
equal ``p / 2**(d-1)``, ``p`` being the number of occupied cells sharing
the edge. On domains at least two cells thick this gives ``1/2`` towards
boundary neighbours and ``1`` towards interior neighbours.
"""

from __future__ import annotations

import csv
import itertools
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .errors import (
    DegenerateExtent,
    DomainClassificationFailed,
    InvalidInput,
    MissingNeighborValue,
    NonRectilinearBoundary,
    UnsupportedClass,
)


class BoundaryKind(Enum):
    """Local geometry of a boundary node.

    2D kinds are named after the angle of the domain at the node: an
    internal right angle has one incident cell (a convex corner), an
    external right angle has three (a re-entrant corner).
    """

    EXTERNAL_RIGHT_ANGLE = "external_right_angle"
    INTERNAL_RIGHT_ANGLE = "internal_right_angle"
    STRAIGHT_LINE = "straight_line"
    PLANAR_3D = "planar_3d"
    OTHER_3D = "other_3d"


@dataclass(frozen=True)
class BoundaryClass:
    kind: BoundaryKind
    cells: int  # occupied cells incident to the node


def _check_dim(dim):
    if dim not in (2, 3):
        raise InvalidInput("dimension must be 2 or 3")


class LatticeDomain:
    """Finite union of lattice cells.

    Parameters
    ----------
    rects : sequence of tuples
        Node ranges ``(m0, m1, n0, n1)`` in 2D or ``(m0, m1, n0, n1, l0, l1)``
        in 3D, inclusive. Each must span at least three nodes per axis.
    """

    def __init__(self, rects):
        rects = [tuple(int(v) for v in r) for r in rects]
        if not rects:
            raise InvalidInput("need at least one rectangle")
        dim = len(rects[0]) // 2
        _check_dim(dim)
        for r in rects:
            if len(r) != 2 * dim:
                raise InvalidInput("rectangles must all have the same dimension")
            for a in range(dim):
                if r[2 * a + 1] - r[2 * a] < 2:
                    raise DegenerateExtent(f"rectangle {r} spans fewer than 3 nodes")
        self.dim = dim
        self.rects = tuple(rects)
        lo = [min(r[2 * a] for r in rects) for a in range(dim)]
        hi = [max(r[2 * a + 1] for r in rects) for a in range(dim)]
        self.origin = tuple(lo)
        cells = np.zeros([h - l for l, h in zip(lo, hi)], dtype=bool)
        for r in rects:
            sl = tuple(slice(r[2 * a] - lo[a], r[2 * a + 1] - lo[a]) for a in range(dim))
            cells[sl] = True
        self.cells = cells
        # incident-cell counts on the node grid
        padded = np.pad(cells, 1).astype(int)
        shape = tuple(s + 1 for s in cells.shape)
        count = np.zeros(shape, dtype=int)
        for shift in itertools.product((0, 1), repeat=dim):
            count += padded[tuple(slice(c, c + n) for c, n in zip(shift, shape))]
        self.cell_count = count
        self.node_mask = count > 0
        self.interior_mask = count == 2 ** dim
        self.boundary_mask = self.node_mask & ~self.interior_mask

    # constructors
    @classmethod
    def rectangle(cls, m0, m1, n0, n1):
        return cls([(m0, m1, n0, n1)])

    @classmethod
    def box(cls, m0, m1, n0, n1, l0, l1):
        return cls([(m0, m1, n0, n1, l0, l1)])

    @property
    def shape(self):
        return self.node_mask.shape

    def _idx(self, node):
        return tuple(int(c) - o for c, o in zip(node, self.origin))

    def _in_grid(self, idx):
        return all(0 <= i < n for i, n in zip(idx, self.shape))

    def contains(self, node) -> bool:
        idx = self._idx(node)
        return self._in_grid(idx) and bool(self.node_mask[idx])

    def is_interior(self, node) -> bool:
        idx = self._idx(node)
        return self._in_grid(idx) and bool(self.interior_mask[idx])

    def is_boundary(self, node) -> bool:
        idx = self._idx(node)
        return self._in_grid(idx) and bool(self.boundary_mask[idx])

    def _nodes(self, mask):
        return [tuple(int(i) + o for i, o in zip(ix, self.origin)) for ix in np.argwhere(mask)]

    def nodes(self):
        return self._nodes(self.node_mask)

    def interior_nodes(self):
        return self._nodes(self.interior_mask)

    def boundary_nodes(self):
        return self._nodes(self.boundary_mask)

    def cell_occupied(self, cell) -> bool:
        """Cell addressed by its lowest corner node."""
        idx = self._idx(cell)
        if not all(0 <= i < n for i, n in zip(idx, self.cells.shape)):
            return False
        return bool(self.cells[idx])

    def incident_cells(self, node):
        """Occupancy of the ``2**d`` cells around ``node``, keyed by offset in {-1, 0}."""
        return {
            off: self.cell_occupied(tuple(c + o for c, o in zip(node, off)))
            for off in itertools.product((-1, 0), repeat=self.dim)
        }

    def edge_cells(self, node, axis, sign) -> int:
        """Number of occupied cells containing the edge from ``node`` along ``axis``."""
        lo = list(node)
        if sign < 0:
            lo[axis] -= 1
        others = [a for a in range(self.dim) if a != axis]
        p = 0
        for off in itertools.product((-1, 0), repeat=self.dim - 1):
            cell = list(lo)
            for a, o in zip(others, off):
                cell[a] += o
            p += self.cell_occupied(tuple(cell))
        return p

    # serialization
    def to_json(self) -> dict:
        return {"schema": "v1", "dim": self.dim, "rects": [list(r) for r in self.rects]}

    @classmethod
    def from_json(cls, obj) -> "LatticeDomain":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(obj["rects"])


def _connected(occ):
    """Face-connectivity of the occupied cells in a 2x2(x2) block."""
    pts = [k for k, v in occ.items() if v]
    if not pts:
        return False
    seen, stack = {pts[0]}, [pts[0]]
    while stack:
        p = stack.pop()
        for q in pts:
            if q not in seen and sum(a != b for a, b in zip(p, q)) == 1:
                seen.add(q)
                stack.append(q)
    return len(seen) == len(pts)


def classify_boundary(domain: LatticeDomain, node) -> BoundaryClass:
    """Boundary class of ``node`` from its incident-cell pattern."""
    if not domain.is_boundary(node):
        raise InvalidInput(f"{node} is not a boundary node")
    occ = domain.incident_cells(node)
    c = sum(occ.values())
    if not _connected(occ):
        raise NonRectilinearBoundary(f"cells at {node} touch only diagonally")
    if domain.dim == 2:
        kind = {
            1: BoundaryKind.INTERNAL_RIGHT_ANGLE,
            2: BoundaryKind.STRAIGHT_LINE,
            3: BoundaryKind.EXTERNAL_RIGHT_ANGLE,
        }[c]
        return BoundaryClass(kind, c)
    if c == 4:
        for axis in range(3):
            if len({k[axis] for k, v in occ.items() if v}) == 1:
                return BoundaryClass(BoundaryKind.PLANAR_3D, 4)
    return BoundaryClass(BoundaryKind.OTHER_3D, c)


def classify_all(domain: LatticeDomain) -> dict:
    """Classes of every boundary node; raises on the first failure."""
    out = {}
    for nu in domain.boundary_nodes():
        try:
            out[nu] = classify_boundary(domain, nu)
        except NonRectilinearBoundary as exc:
            raise DomainClassificationFailed(str(exc)) from exc
    return out


def self_weight(cls: BoundaryClass, k2):
    """Centre coefficient of the normal-derivative stencil."""
    kind = cls.kind
    if kind is BoundaryKind.EXTERNAL_RIGHT_ANGLE:
        return 3 * (k2 / 4 - 1)
    if kind is BoundaryKind.INTERNAL_RIGHT_ANGLE:
        return k2 / 4 - 1
    if kind is BoundaryKind.STRAIGHT_LINE:
        return 2 * (k2 / 4 - 1)
    if kind is BoundaryKind.PLANAR_3D:
        return k2 / 2 - 3
    if kind is BoundaryKind.OTHER_3D:
        return cls.cells * (k2 - 6) / 8
    raise UnsupportedClass(str(kind))


def _axis_offsets(dim):
    for axis in range(dim):
        for sign in (1, -1):
            off = [0] * dim
            off[axis] = sign
            yield axis, sign, tuple(off)


def stencil(domain: LatticeDomain, node, k2) -> dict:
    """Stencil weights ``{offset: weight}`` at ``node``.

    Interior nodes get the Helmholtz stencil, boundary nodes the
    normal-derivative stencil. ``k2`` may be a number, a ``Fraction`` or a
    sympy expression; weights are built with exact arithmetic.
    """
    node = tuple(int(c) for c in node)
    d = domain.dim
    zero = (0,) * d
    if domain.is_interior(node):
        w = {zero: k2 - 2 * d}
        for _, _, off in _axis_offsets(d):
            w[off] = 1
        return w
    cls = classify_boundary(domain, node)
    w = {zero: self_weight(cls, k2)}
    for axis, sign, off in _axis_offsets(d):
        p = domain.edge_cells(node, axis, sign)
        if p:
            w[off] = Fraction(p, 2 ** (d - 1))
    return w


# --- fields ---------------------------------------------------------------

class Field:
    """Complex node values on a domain (NaN outside)."""

    def __init__(self, domain: LatticeDomain, values=None):
        self.domain = domain
        if values is None:
            values = np.zeros(domain.shape, dtype=complex)
        values = np.array(values, dtype=complex)
        if values.shape != domain.shape:
            raise InvalidInput("values shape does not match domain grid")
        values[~domain.node_mask] = np.nan
        self.values = values

    @classmethod
    def from_function(cls, domain, f):
        grids = np.meshgrid(
            *[np.arange(n) + o for n, o in zip(domain.shape, domain.origin)], indexing="ij"
        )
        return cls(domain, f(*grids))

    @classmethod
    def random(cls, domain, rng=None):
        rng = np.random.default_rng(rng)
        v = rng.standard_normal(domain.shape) + 1j * rng.standard_normal(domain.shape)
        return cls(domain, v)

    def __getitem__(self, node):
        idx = self.domain._idx(node)
        if not self.domain._in_grid(idx):
            return complex("nan")
        return complex(self.values[idx])


def _apply(u: Field, node, w):
    total = 0
    for off, c in w.items():
        val = u[tuple(a + b for a, b in zip(node, off))]
        if np.isnan(val.real) or np.isnan(val.imag):
            raise MissingNeighborValue(f"no value at neighbour {off} of {node}")
        total += c * val
    return complex(total)


def helmholtz_residual(u: Field, node, k2, f=0.0) -> complex:
    """``sum_mu beta_{nu mu} u_mu - f_nu`` at an interior node."""
    if not u.domain.is_interior(node):
        raise InvalidInput(f"{node} is not an interior node")
    return _apply(u, node, stencil(u.domain, node, k2)) - f


def normal_derivative(u: Field, node, k2, cls: BoundaryClass | None = None) -> complex:
    """Discrete normal derivative at a boundary node.

    If ``cls`` is given it must agree with the computed class.
    """
    if not u.domain.is_boundary(node):
        raise InvalidInput(f"{node} is not a boundary node")
    if cls is not None and cls != classify_boundary(u.domain, node):
        raise UnsupportedClass(f"class {cls} does not match the geometry at {node}")
    return _apply(u, node, stencil(u.domain, node, k2))


def operator_matrix(domain: LatticeDomain, k2):
    """Sparse matrix of all stencils, rows and columns in ``domain.nodes()`` order.

    Interior rows hold the Helmholtz stencil, boundary rows the
    normal-derivative stencil. The matrix is symmetric.
    """
    nodes = domain.nodes()
    index = {nu: i for i, nu in enumerate(nodes)}
    rows, cols, vals = [], [], []
    classify_all(domain)
    for i, nu in enumerate(nodes):
        for off, c in stencil(domain, nu, k2).items():
            mu = tuple(a + b for a, b in zip(nu, off))
            rows.append(i)
            cols.append(index[mu])
            vals.append(complex(c))
    n = len(nodes)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n)), nodes


@dataclass(frozen=True)
class GreensReport:
    residual: complex
    scale: float

    @property
    def relative(self) -> float:
        return abs(self.residual) / self.scale if self.scale else abs(self.residual)


def greens_residual(u: Field, w: Field, k2, matrix=None) -> GreensReport:
    """Discrete Green's identity residual.

    Returns ``sum_boundary (du w - dw u) - sum_interior (g u - f w)`` with
    ``f``, ``g`` the Helmholtz images of ``u``, ``w``. The scale is the sum
    of absolute values of all terms, so ``relative`` is dimensionless.
    """
    dom = u.domain
    if w.domain is not dom:
        raise InvalidInput("fields must share a domain")
    if matrix is None:
        matrix, nodes = operator_matrix(dom, k2)
    else:
        nodes = dom.nodes()
    idx = tuple(np.array(nodes).T - np.array(dom.origin)[:, None])
    uv, wv = u.values[idx], w.values[idx]
    if np.isnan(uv).any() or np.isnan(wv).any():
        raise MissingNeighborValue("field undefined on a domain node")
    Au, Aw = matrix @ uv, matrix @ wv
    bnd = dom.boundary_mask[idx]
    t1 = Au[bnd] * wv[bnd]
    t2 = Aw[bnd] * uv[bnd]
    t3 = Aw[~bnd] * uv[~bnd]
    t4 = Au[~bnd] * wv[~bnd]
    res = t1.sum() - t2.sum() - (t3.sum() - t4.sum())
    scale = sum(float(np.abs(t).sum()) for t in (t1, t2, t3, t4))
    return GreensReport(complex(res), scale)


# --- I/O ------------------------------------------------------------------

_AXES = ("m", "n", "l")


def write_field_csv(u: Field, path):
    """Write ``m,n[,l],re,im`` rows for every domain node."""
    d = u.domain.dim
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(list(_AXES[:d]) + ["re", "im"])
        for nu in u.domain.nodes():
            v = u[nu]
            wr.writerow(list(nu) + [repr(v.real), repr(v.imag)])


def read_field_csv(path, domain: LatticeDomain) -> Field:
    u = Field(domain)
    with open(path, newline="") as fh:
        rd = csv.DictReader(fh)
        for row in rd:
            nu = tuple(int(row[a]) for a in _AXES[: domain.dim])
            if not domain.contains(nu):
                raise InvalidInput(f"node {nu} outside domain")
            u.values[domain._idx(nu)] = complex(float(row["re"]), float(row["im"]))
    return u
