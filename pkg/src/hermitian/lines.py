"""Lines on the surface: the chord test and enumeration via tangent sections."""

from __future__ import annotations

from .geom import EqualPoints, is_base_rational, normalize, points_on_line
from .surface import NotOnSurface, on_surface

__all__ = ["chord_condition", "enumerate_lines", "lines_through", "line_point_sets"]


def chord_condition(ctx, P, Q):
    """a0 b1^q - a1 b0^q == a3 b2^q - a2 b3^q for P = (a_i), Q = (b_i).

    For F_{q^2}-points of the surface this holds iff the line PQ lies on it.
    """
    for X in (P, Q):
        if not on_surface(ctx, X):
            raise NotOnSurface(f"{X} is not on the surface")
    if normalize(ctx, P) == normalize(ctx, Q):
        raise EqualPoints(f"{P} and {Q} coincide")
    f, m = ctx.frob, ctx.mul
    lhs = ctx.sub(m(P[0], f(Q[1])), m(P[1], f(Q[0])))
    rhs = ctx.sub(m(P[3], f(Q[2])), m(P[2], f(Q[3])))
    return lhs == rhs


def _quadratic_lines(surface):
    cache = surface.__dict__.setdefault("_lines_cache", {})
    if "quadratic" not in cache:
        found = set()
        for P in surface.enumerate_points("quadratic"):
            found.update(surface.tangent_cone_lines(P))
        cache["quadratic"] = sorted(found)
    return cache["quadratic"]


def enumerate_lines(surface, level="quadratic"):
    """Canonical, sorted lines of S over F_{q^2} (or those defined over F_q)."""
    lines = _quadratic_lines(surface)
    if level == "quadratic":
        return list(lines)
    if level == "base":
        return [L for L in lines if is_base_rational(surface.ctx, L)]
    raise ValueError(f"unknown level {level!r}")


def lines_through(surface, P):
    return surface.tangent_cone_lines(P)


def line_point_sets(surface, level="quadratic"):
    """line -> frozenset of its points at ``level``, cached per surface."""
    cache = surface.__dict__.setdefault("_line_points_cache", {})
    if level not in cache:
        cache[level] = {
            L: frozenset(points_on_line(surface.ctx, L, level))
            for L in enumerate_lines(surface, level)
        }
    return cache[level]
