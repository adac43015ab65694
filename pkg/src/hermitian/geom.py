"""Points, lines and hyperplanes of P^3 over a field context.

Coordinates are encoded field elements (see :mod:`hermitian.gf`).  Points and
hyperplanes are normalised so the first nonzero entry is 1; lines are stored
by the reduced row-echelon form of a 2 x 4 spanning matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

import numpy as np

__all__ = [
    "ProjPoint",
    "Hyperplane",
    "ProjLine",
    "Pencil",
    "ZeroVector",
    "EqualPoints",
    "NotBaseRational",
    "normalize",
    "normalize_point",
    "normalize_hyperplane",
    "rref",
    "kernel",
    "line_from_basis",
    "line_through",
    "line_equations",
    "points_on_line",
    "line_contains",
    "is_base_rational",
    "pencil_through_line",
    "p1_params",
    "all_points",
    "frob_vec",
    "canonical_lines_batch",
]


class ZeroVector(ValueError):
    pass


class EqualPoints(ValueError):
    pass


class NotBaseRational(ValueError):
    pass


class ProjPoint(NamedTuple):
    x0: int
    x1: int
    x2: int
    x3: int


class Hyperplane(NamedTuple):
    """The plane c0*x0 + c1*x1 + c2*x2 + c3*x3 = 0."""

    c0: int
    c1: int
    c2: int
    c3: int


@dataclass(frozen=True, order=True)
class ProjLine:
    basis: tuple
    level: str = field(default="quadratic", compare=False)

    @property
    def key(self):
        return ";".join(",".join(map(str, row)) for row in self.basis)

    @classmethod
    def from_key(cls, ctx, key):
        rows = [tuple(int(x) for x in r.split(",")) for r in key.split(";")]
        return line_from_basis(ctx, rows)


def normalize(ctx, raw):
    for x in raw:
        if x:
            c = ctx.inv(x)
            return tuple(ctx.mul(c, y) for y in raw)
    raise ZeroVector("all coordinates are zero")


def normalize_point(ctx, raw):
    return ProjPoint(*normalize(ctx, raw))


def normalize_hyperplane(ctx, raw):
    return Hyperplane(*normalize(ctx, raw))


def frob_vec(ctx, v):
    return tuple(ctx.frob(x) for x in v)


def rref(ctx, rows):
    """Reduced row-echelon form; zero rows dropped."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    out = []
    for col in range(ncols):
        piv = next((r for r in m if r[col]), None)
        if piv is None:
            continue
        m.remove(piv)
        c = ctx.inv(piv[col])
        piv = [ctx.mul(c, x) for x in piv]
        for rows_ in (m, out):
            for i, r in enumerate(rows_):
                if r[col]:
                    f = r[col]
                    rows_[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(r, piv)]
        out.append(piv)
        m = [r for r in m if any(r)]
    return tuple(tuple(r) for r in out)


def kernel(ctx, rows, ncols=4):
    """RREF basis of {x : r . x = 0 for every row r}."""
    R = rref(ctx, rows)
    pivots = [next(j for j, x in enumerate(r) if x) for r in R]
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(R, pivots):
            v[pc] = ctx.neg(r[f])
        basis.append(v)
    return rref(ctx, basis) if basis else ()


def is_base_rational(ctx, obj):
    """True iff coordinate-wise x -> x^q fixes the canonical form of ``obj``."""
    if isinstance(obj, ProjLine):
        return all(frob_vec(ctx, r) == r for r in obj.basis)
    v = normalize(ctx, obj)
    return frob_vec(ctx, v) == v


def line_from_basis(ctx, rows):
    basis = rref(ctx, rows)
    if len(basis) != 2:
        raise EqualPoints("spanning vectors do not span a line")
    level = "base" if all(frob_vec(ctx, r) == r for r in basis) else ctx.level
    return ProjLine(basis, level)


def line_through(ctx, P, Q):
    if normalize(ctx, P) == normalize(ctx, Q):
        raise EqualPoints(f"{P} and {Q} coincide")
    return line_from_basis(ctx, (P, Q))


def line_equations(ctx, line):
    """Two independent hyperplanes cutting out ``line`` (RREF of its annihilator)."""
    a, b = kernel(ctx, line.basis)
    return Hyperplane(*a), Hyperplane(*b)


def line_contains(ctx, line, P):
    return all(ctx.dot(h, P) == 0 for h in line_equations(ctx, line))


def p1_params(elements):
    """P^1 over a subset of the field, normalised, in lexicographic order."""
    return [(0, 1)] + [(1, t) for t in elements]


def points_on_line(ctx, line, level="quadratic"):
    if level == "base":
        if not is_base_rational(ctx, line):
            raise NotBaseRational(f"line {line.key} is not defined over F_q")
        scalars = ctx.base_elements()
    else:
        scalars = ctx.elements()
    r0, r1 = line.basis
    pts = []
    for lam, mu in p1_params(scalars):
        v = tuple(ctx.add(ctx.mul(lam, x), ctx.mul(mu, y)) for x, y in zip(r0, r1))
        pts.append(normalize_point(ctx, v))
    return sorted(pts)


@dataclass(frozen=True)
class Pencil:
    """Hyperplanes (lam:mu) -> lam*first + mu*second through a fixed line."""

    line: ProjLine
    first: Hyperplane
    second: Hyperplane

    def member(self, ctx, lam, mu):
        return normalize_hyperplane(ctx, tuple(
            ctx.add(ctx.mul(lam, a), ctx.mul(mu, b)) for a, b in zip(self.first, self.second)))

    def members(self, ctx, scalars=None):
        scalars = ctx.elements() if scalars is None else scalars
        return [((lam, mu), self.member(ctx, lam, mu)) for lam, mu in p1_params(scalars)]


def pencil_through_line(ctx, line):
    return Pencil(line, *line_equations(ctx, line))


def all_points(ctx):
    """Every normalised point of P^3 over ``ctx``, in lexicographic order."""
    Q = ctx.Q
    pts = []
    for lead in range(4):
        for tail in product(range(Q), repeat=3 - lead):
            pts.append(ProjPoint(*((0,) * lead + (1,) + tail)))
    return pts


def canonical_lines_batch(ctx, B):
    """Vectorised RREF of a stack of rank-2 matrices, shape (N, 2, 4).

    The pivot columns are the first pair (i, j) with nonzero 2 x 2 minor;
    the canonical form is the inverse of that submatrix times the input.
    """
    B = np.asarray(B, dtype=np.int64)
    N = B.shape[0]
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    minors = np.stack([
        ctx.vsub(ctx.vmul(B[:, 0, i], B[:, 1, j]), ctx.vmul(B[:, 0, j], B[:, 1, i]))
        for i, j in pairs], axis=1)
    nz = minors != 0
    if not nz.any(axis=1).all():
        raise EqualPoints("rank-deficient matrix in batch")
    first = nz.argmax(axis=1)
    cols = np.array(pairs)[first]
    idx = np.arange(N)
    a, c = B[idx, 0, cols[:, 0]], B[idx, 1, cols[:, 0]]
    b, d = B[idx, 0, cols[:, 1]], B[idx, 1, cols[:, 1]]
    dinv = ctx.vinv(minors[idx, first])
    # [[a, b], [c, d]]^-1 = dinv * [[d, -b], [-c, a]]
    m00, m01 = ctx.vmul(dinv, d), ctx.vmul(dinv, ctx.vneg(b))
    m10, m11 = ctx.vmul(dinv, ctx.vneg(c)), ctx.vmul(dinv, a)
    row0 = ctx.vadd(ctx.vmul(m00[:, None], B[:, 0, :]), ctx.vmul(m01[:, None], B[:, 1, :]))
    row1 = ctx.vadd(ctx.vmul(m10[:, None], B[:, 0, :]), ctx.vmul(m11[:, None], B[:, 1, :]))
    return np.stack([row0, row1], axis=1)
