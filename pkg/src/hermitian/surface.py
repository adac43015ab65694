"""The surface x0 x1^q - x1 x0^q + x2 x3^q - x3 x2^q = 0 in P^3.

Form evaluation, tangent planes and the line test work in any field context
(so the pencil code can reuse them over F_{q^4}); :class:`Surface` caches the
F_{q^2}- and F_q-point lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .gf import create_field, solve_additive, subfield_embedding, v_set
from .geom import (
    ProjPoint, frob_vec, is_base_rational, kernel, line_from_basis, normalize,
    normalize_hyperplane, p1_params, rref,
)

__all__ = [
    "Surface",
    "NotOnSurface",
    "BadLambda",
    "form_value",
    "vform",
    "on_surface",
    "gradient",
    "tangent_plane",
    "cross_terms",
    "line_in_surface",
    "vline_in_surface",
    "vnormalize",
    "plane_points",
    "hermitian_form",
    "HermitianModelMap",
    "hermitian_model_map",
]


class NotOnSurface(ValueError):
    pass


class BadLambda(ValueError):
    pass


def form_value(ctx, x):
    x0, x1, x2, x3 = x
    f = ctx.frob
    return ctx.sum((
        ctx.mul(x0, f(x1)), ctx.neg(ctx.mul(x1, f(x0))),
        ctx.mul(x2, f(x3)), ctx.neg(ctx.mul(x3, f(x2))),
    ))


def vform(ctx, X):
    """Form values for an (N, 4) array of coordinates."""
    X = np.asarray(X)
    F = ctx.vfrob(X)
    a = ctx.vsub(ctx.vmul(X[:, 0], F[:, 1]), ctx.vmul(X[:, 1], F[:, 0]))
    b = ctx.vsub(ctx.vmul(X[:, 2], F[:, 3]), ctx.vmul(X[:, 3], F[:, 2]))
    return ctx.vadd(a, b)


def on_surface(ctx, P):
    return form_value(ctx, P) == 0


def gradient(ctx, P):
    x0, x1, x2, x3 = P
    f = ctx.frob
    # d/dx_i of x_j^q vanishes in characteristic p
    return (f(x1), ctx.neg(f(x0)), f(x3), ctx.neg(f(x2)))


def tangent_plane(ctx, P):
    if not on_surface(ctx, P):
        raise NotOnSurface(f"{P} is not on the surface")
    return normalize_hyperplane(ctx, gradient(ctx, P))


def cross_terms(ctx, a, b):
    """Coefficients of t^q and t in F(a + t b)."""
    fa, fb = frob_vec(ctx, a), frob_vec(ctx, b)
    m = ctx.mul
    tq = ctx.sum((m(a[0], fb[1]), ctx.neg(m(a[1], fb[0])),
                  m(a[2], fb[3]), ctx.neg(m(a[3], fb[2]))))
    t1 = ctx.sum((m(b[0], fa[1]), ctx.neg(m(b[1], fa[0])),
                  m(b[2], fa[3]), ctx.neg(m(b[3], fa[2]))))
    return tq, t1


def line_in_surface(ctx, a, b):
    """Whether the line through ``a`` and ``b`` lies on the surface over the
    algebraic closure: F(a + t b) vanishes identically in t."""
    return on_surface(ctx, a) and on_surface(ctx, b) and cross_terms(ctx, a, b) == (0, 0)


def vline_in_surface(ctx, A, B):
    """Vectorised :func:`line_in_surface` for row-aligned (N, 4) arrays."""
    A, B = np.asarray(A), np.asarray(B)
    FA, FB = ctx.vfrob(A), ctx.vfrob(B)
    m, s, ad = ctx.vmul, ctx.vsub, ctx.vadd
    tq = ad(s(m(A[:, 0], FB[:, 1]), m(A[:, 1], FB[:, 0])), s(m(A[:, 2], FB[:, 3]), m(A[:, 3], FB[:, 2])))
    t1 = ad(s(m(B[:, 0], FA[:, 1]), m(B[:, 1], FA[:, 0])), s(m(B[:, 2], FA[:, 3]), m(B[:, 3], FA[:, 2])))
    return (vform(ctx, A) == 0) & (vform(ctx, B) == 0) & (tq == 0) & (t1 == 0)


def vnormalize(ctx, X):
    """Scale each row so its first nonzero entry is 1."""
    X = np.asarray(X)
    nz = X != 0
    lead = X[np.arange(len(X)), nz.argmax(axis=1)]
    return ctx.vmul(ctx.vinv(lead)[:, None], X)


def plane_points(ctx, H):
    """All normalised points of the plane ``H`` over ``ctx``, as an (N, 4) array."""
    basis = np.array(kernel(ctx, [tuple(H)]), dtype=np.int64)
    Q = ctx.Q
    a, b = np.meshgrid(np.arange(Q), np.arange(Q), indexing="ij")
    a, b = a.ravel(), b.ravel()
    coeffs = np.concatenate([
        np.stack([np.ones_like(a), a, b], axis=1),
        np.stack([np.zeros(Q, np.int64), np.ones(Q, np.int64), np.arange(Q)], axis=1),
        np.array([[0, 0, 1]]),
    ])
    X = np.zeros((len(coeffs), 4), dtype=np.int64)
    for i in range(3):
        X = ctx.vadd(X, ctx.vmul(coeffs[:, i, None], basis[i][None, :]))
    return vnormalize(ctx, X)


def hermitian_form(ctx, y):
    """y1 ybar3 + y3 ybar1 + y2 ybar4 + y4 ybar2 (coordinates 1-indexed)."""
    y1, y2, y3, y4 = y
    f, m = ctx.frob, ctx.mul
    return ctx.sum((m(y1, f(y3)), m(y3, f(y1)), m(y2, f(y4)), m(y4, f(y2))))


@dataclass(frozen=True)
class HermitianModelMap:
    """(x0, x1, x2, x3) -> (lam x0, lam x2, x1, x3), carrying S onto the zero
    set of :func:`hermitian_form`; the form pulls back to lam * F."""

    lam: int

    def matrix(self, ctx):
        lam = self.lam
        return np.array([[lam, 0, 0, 0], [0, 0, lam, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.int64)

    def forward(self, ctx, x):
        x0, x1, x2, x3 = x
        return (ctx.mul(self.lam, x0), ctx.mul(self.lam, x2), x1, x3)

    def inverse(self, ctx, y):
        y1, y2, y3, y4 = y
        li = ctx.inv(self.lam)
        return (ctx.mul(li, y1), y3, ctx.mul(li, y2), y4)

    def forward_line(self, ctx, line):
        return line_from_basis(ctx, [self.forward(ctx, r) for r in line.basis])

    def inverse_line(self, ctx, line):
        return line_from_basis(ctx, [self.inverse(ctx, r) for r in line.basis])


def hermitian_model_map(ctx, lam=None):
    """``lam`` defaults to the least nonzero element with lam^q = -lam."""
    V = v_set(ctx)
    if lam is None:
        lam = min(x for x in V if x)
    if lam == 0 or lam not in V:
        raise BadLambda(f"{lam} is zero or does not satisfy lam^q = -lam")
    return HermitianModelMap(lam)


class Surface:
    """The surface over F_{q^2} with cached point and line data."""

    def __init__(self, ctx):
        if ctx.level != "quadratic":
            raise ValueError("Surface needs a quadratic-level context")
        self.ctx = ctx
        self.q = ctx.q
        self.p = ctx.p
        self.a = ctx.a

    @classmethod
    def over(cls, p, a):
        return cls(create_field(p, a, "quadratic"))

    def __repr__(self):
        return f"Surface(p={self.p}, a={self.a})"

    @cached_property
    def _points_quadratic(self):
        ctx = self.ctx
        pts = []
        # x0 = 1: x1^q - x1 = x3 x2^q - x2 x3^q has q solutions for each (x2, x3)
        for x2 in ctx.elements():
            for x3 in ctx.elements():
                c = ctx.sub(ctx.mul(x3, ctx.frob(x2)), ctx.mul(x2, ctx.frob(x3)))
                for x1 in solve_additive(ctx, c):
                    pts.append(ProjPoint(1, x1, x2, x3))
        # x0 = 0: the form reduces to x2 x3^q - x3 x2^q
        for x2 in ctx.elements():
            for x3 in ctx.elements():
                if on_surface(ctx, (0, 1, x2, x3)):
                    pts.append(ProjPoint(0, 1, x2, x3))
        for x3 in ctx.elements():
            if on_surface(ctx, (0, 0, 1, x3)):
                pts.append(ProjPoint(0, 0, 1, x3))
        pts.append(ProjPoint(0, 0, 0, 1))
        return sorted(pts)

    def enumerate_points(self, level="quadratic"):
        if level == "quadratic":
            return list(self._points_quadratic)
        if level == "base":
            return [P for P in self._points_quadratic if is_base_rational(self.ctx, P)]
        raise ValueError(f"unknown level {level!r}")

    @cached_property
    def point_array(self):
        return np.array(self._points_quadratic, dtype=np.int64)

    @cached_property
    def point_index(self):
        return {P: i for i, P in enumerate(self._points_quadratic)}

    def expected_point_count(self, level="quadratic"):
        q = self.q
        return (q**3 + 1) * (q**2 + 1) if level == "quadratic" else q**3 + q**2 + q + 1

    def expected_line_count(self, level="quadratic"):
        q = self.q
        return (q**3 + 1) * (q + 1) if level == "quadratic" else q**3 + q**2 + q + 1

    def chart_counts(self):
        """Point counts per case of the affine/boundary decomposition."""
        ctx = self.ctx
        counts = {"x0!=0": 0, "x2=x3=0": 0, "x2=0,x3!=0": 0, "x2!=0,x3=0": 0,
                  "x2x3!=0,x1=0": 0, "x2x3!=0,x1!=0": 0}
        for x0, x1, x2, x3 in self._points_quadratic:
            if x0:
                key = "x0!=0"
            elif not x2 and not x3:
                key = "x2=x3=0"
            elif not x2:
                key = "x2=0,x3!=0"
            elif not x3:
                key = "x2!=0,x3=0"
            else:
                key = "x2x3!=0,x1!=0" if x1 else "x2x3!=0,x1=0"
            counts[key] += 1
        return counts

    def expected_chart_counts(self):
        q = self.q
        return {"x0!=0": q**5, "x2=x3=0": 1, "x2=0,x3!=0": q**2, "x2!=0,x3=0": q**2,
                "x2x3!=0,x1=0": q - 1, "x2x3!=0,x1!=0": (q - 1) * (q**2 - 1)}

    def on_surface(self, P):
        return on_surface(self.ctx, P)

    def tangent_plane(self, P):
        return tangent_plane(self.ctx, P)

    def tangent_cone_lines(self, P):
        """The q + 1 lines of S through P, all inside the tangent plane at P."""
        ctx = self.ctx
        H = tangent_plane(ctx, P)
        P = normalize(ctx, P)
        plane = kernel(ctx, [H])
        # two plane vectors completing P to a basis of the plane
        for u, v in combinations(plane, 2):
            if len(rref(ctx, (P, u, v))) == 3:
                break
        lines = []
        for lam, mu in p1_params(ctx.elements()):
            Qv = tuple(ctx.add(ctx.mul(lam, x), ctx.mul(mu, y)) for x, y in zip(u, v))
            if line_in_surface(ctx, P, Qv):
                lines.append(line_from_basis(ctx, (P, Qv)))
        return sorted(lines)

    def hyperplane_mask(self, H):
        """Boolean mask over ``point_array`` of points on ``H``."""
        X, ctx = self.point_array, self.ctx
        acc = np.zeros(len(X), dtype=np.int64)
        for i in range(4):
            acc = ctx.vadd(acc, ctx.vmul(H[i], X[:, i]))
        return acc == 0

    def smoothness_check(self):
        return all(any(gradient(self.ctx, P)) for P in self._points_quadratic)

    def gauss_map_injective(self):
        planes = {tangent_plane(self.ctx, P) for P in self._points_quadratic}
        return len(planes) == len(self._points_quadratic)

    @cached_property
    def quartic(self):
        """(F_{q^4} context, embedding list F_{q^2} -> F_{q^4})."""
        big = create_field(self.p, self.a, "quartic")
        return big, subfield_embedding(self.ctx, big)
