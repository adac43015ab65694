"""The pencil of plane sections through a line of the surface.

Every plane H through a line l of S cuts S in l plus a residual curve of
degree q.  Over F_{q^2} each residual splits into q lines through one apex
on l; over F_{q^4} minus F_{q^2} the residual is a curve with a single
singular point on l.  The remaining lines of S are the sections.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .geom import (
    ProjLine, ProjPoint, canonical_lines_batch, line_equations, line_from_basis,
    normalize_hyperplane, p1_params, pencil_through_line, points_on_line,
)
from .lines import enumerate_lines, line_point_sets
from .surface import Surface, gradient, on_surface, plane_points, tangent_plane, vform, vline_in_surface

__all__ = [
    "Reducible",
    "Irreducible",
    "PencilFiber",
    "PencilReport",
    "LineNotOnSurface",
    "HyperplaneMissesLine",
    "DegenerateParameter",
    "WrongCharacteristic",
    "build_pencil",
    "classify_fiber",
    "singular_fibers",
    "sections",
    "unirational_point",
    "unirational_samples",
    "quasi_elliptic_report",
    "pencil_sweep",
]


class LineNotOnSurface(ValueError):
    pass


class HyperplaneMissesLine(ValueError):
    pass


class DegenerateParameter(ValueError):
    pass


class WrongCharacteristic(ValueError):
    pass


@dataclass(frozen=True)
class Reducible:
    components: tuple  # q ProjLines
    apex: ProjPoint


@dataclass(frozen=True)
class Irreducible:
    singular_points: tuple


@dataclass(frozen=True)
class PencilFiber:
    base_param: tuple  # (lam, mu), encoded in the context of ``level``
    level: str
    hyperplane: tuple
    residual_points: tuple
    classification: object

    @property
    def reducible(self):
        return isinstance(self.classification, Reducible)


@dataclass
class PencilReport:
    line: ProjLine
    fibers: list
    general_fibers: list
    sections: list
    q: int
    checks: dict = field(default_factory=dict)

    def summary(self):
        sing = singular_fibers(self)
        q = self.q
        return {
            "line": self.line.key,
            "singular_fibers": len(sing),
            "components_each": sorted({len(f.classification.components) for f in sing}),
            "fiber_lines": sum(len(f.classification.components) for f in sing),
            "sections": len(self.sections),
            "general_fibers_sampled": len(self.general_fibers),
            "general_fiber_point_counts": sorted({len(f.residual_points) for f in self.general_fibers}),
            "expected_general_point_count": q**4 + 1,
            "checks": dict(sorted(self.checks.items())),
        }


def _in_plane(ctx, H, v):
    return ctx.dot(H, v) == 0


def _apex_of(ctx, lines):
    """The common point of ``lines`` if they are concurrent, else None."""
    common = None
    for L in lines:
        pts = set(points_on_line(ctx, L))
        common = pts if common is None else common & pts
    if common and len(common) == 1:
        return next(iter(common))
    return None


def _singular_points(ctx, pts, H):
    Hn = normalize_hyperplane(ctx, H)
    return tuple(sorted(P for P in pts if normalize_hyperplane(ctx, gradient(ctx, P)) == Hn))


def classify_fiber(surface, line, H, level="quadratic"):
    """Return ``(classification, residual_points)`` for the plane ``H`` through
    ``line``.  At quartic level ``H`` and ``line`` are given in F_{q^4}
    coordinates (see :func:`embed_line`)."""
    if level == "quadratic":
        ctx = surface.ctx
    else:
        ctx = surface.quartic[0]
    if not all(_in_plane(ctx, H, r) for r in line.basis):
        raise HyperplaneMissesLine(f"{H} does not contain {line.key}")
    eqs = line_equations(ctx, line)

    if level == "quadratic":
        section = surface.point_array[surface.hyperplane_mask(H)]
    else:
        X = plane_points(ctx, H)
        section = X[vform(ctx, X) == 0]
    on_l = np.ones(len(section), dtype=bool)
    for h in eqs:
        acc = np.zeros(len(section), dtype=np.int64)
        for i in range(4):
            acc = ctx.vadd(acc, ctx.vmul(h[i], section[:, i]))
        on_l &= acc == 0
    section_pts = [ProjPoint(*map(int, r)) for r in section]
    off = [P for P, flag in zip(section_pts, on_l) if not flag]
    off_set = set(off)

    if level == "quadratic":
        comps = [L for L in enumerate_lines(surface) if L != line
                 and all(_in_plane(ctx, H, r) for r in L.basis)]
    else:
        comps = _lines_among(ctx, off)

    if comps:
        apex = _apex_of(ctx, comps)
        if apex is not None:
            union = set().union(*(points_on_line(ctx, L) for L in comps))
            if (len(comps) == surface.q and union - {apex} == off_set
                    and all(_in_plane(ctx, eq, apex) for eq in eqs)
                    and tangent_plane(ctx, apex) == normalize_hyperplane(ctx, H)):
                residual = tuple(sorted(off_set | {apex}))
                return Reducible(tuple(sorted(comps)), apex), residual

    sing = _singular_points(ctx, section_pts, H)
    closure = {P for P in sing if P not in off_set}
    return Irreducible(sing), tuple(sorted(off_set | closure))


def _lines_among(ctx, pts):
    """Distinct lines of S spanned by pairs of ``pts``."""
    if len(pts) < 2:
        return []
    A = np.array(pts, dtype=np.int64)
    i, j = np.triu_indices(len(A), k=1)
    hit = vline_in_surface(ctx, A[i], A[j])
    if not hit.any():
        return []
    B = np.stack([A[i[hit]], A[j[hit]]], axis=1)
    canon = np.unique(canonical_lines_batch(ctx, B), axis=0)
    return sorted(line_from_basis(ctx, [tuple(map(int, r)) for r in M]) for M in canon)


def embed_line(surface, line):
    ctx4, emb = surface.quartic
    return line_from_basis(ctx4, [tuple(emb[x] for x in r) for r in line.basis])


def build_pencil(surface, line, sample=3, all_quartic=False):
    """Classify every F_{q^2} member of the pencil through ``line`` plus a
    deterministic sample of members over F_{q^4} \\ F_{q^2}."""
    ctx, q = surface.ctx, surface.q
    all_lines = enumerate_lines(surface)
    if line not in set(all_lines):
        raise LineNotOnSurface(f"{line.key} is not a line of the surface")
    pencil = pencil_through_line(ctx, line)

    fibers = []
    for param, H in pencil.members(ctx):
        cls, residual = classify_fiber(surface, line, H, "quadratic")
        fibers.append(PencilFiber(param, "quadratic", H, residual, cls))

    general = []
    if sample or all_quartic:
        ctx4, emb = surface.quartic
        line4 = embed_line(surface, line)
        pencil4 = pencil_through_line(ctx4, line4)
        sub = set(emb)
        if all_quartic:
            params = p1_params(ctx4.elements())
        else:
            params = [(1, t) for t in ctx4.elements() if t not in sub][:sample]
        for lam, mu in params:
            H = pencil4.member(ctx4, lam, mu)
            cls, residual = classify_fiber(surface, line4, H, "quartic")
            general.append(PencilFiber((lam, mu), "quartic", H, residual, cls))

    sing = [f for f in fibers if f.reducible]
    fiber_lines = {L for f in sing for L in f.classification.components}
    secs = [L for L in all_lines if L != line and L not in fiber_lines]

    report = PencilReport(line, fibers, general, secs, q)
    report.checks = _check_report(surface, report)
    return report


def _check_report(surface, report):
    ctx, q = surface.ctx, surface.q
    line = report.line
    lpts = set(points_on_line(ctx, line))
    sing = singular_fibers(report)
    checks = {}
    checks["all_quadratic_members_reducible"] = all(f.reducible for f in report.fibers)
    checks["singular_fiber_count"] = len(sing) == q**2 + 1
    checks["q_components_each"] = all(len(f.classification.components) == q for f in sing)
    checks["apex_on_line"] = all(f.classification.apex in lpts for f in sing)
    checks["apex_bijective"] = {f.classification.apex for f in sing} == lpts and len(sing) == len(lpts)
    pair_ok = True
    psets = line_point_sets(surface)
    for f in sing:
        for A, B in itertools.combinations(f.classification.components, 2):
            pair_ok &= psets[A] & psets[B] == {f.classification.apex}
    checks["components_meet_only_at_apex"] = pair_ok
    checks["reducible_point_count"] = all(len(f.residual_points) == q**3 + 1 for f in sing)
    # every off-line point in exactly one residual
    tally = Counter(P for f in report.fibers for P in f.residual_points if P not in lpts)
    off_line = set(surface.enumerate_points()) - lpts
    checks["fibers_partition_surface"] = set(tally) == off_line and set(tally.values()) <= {1}
    checks["section_count"] = len(report.sections) == q**4
    checks["section_identity"] = len(report.sections) + q * (q**2 + 1) + 1 == (q**3 + 1) * (q + 1)
    sec_ok = True
    for S in report.sections:
        spts = psets[S]
        sec_ok &= not (spts & lpts)
        for f in sing:
            comps = f.classification.components
            meets = [len(spts & psets[C]) for C in comps]
            sec_ok &= sum(meets) == 1
    checks["sections_meet_each_fiber_once"] = sec_ok
    if report.general_fibers:
        line4_pts = None
        gen_ok, count_ok = True, True
        for f in report.general_fibers:
            if f.reducible:
                continue
            sp = f.classification.singular_points
            if line4_pts is None:
                ctx4 = surface.quartic[0]
                line4_pts = set(points_on_line(ctx4, embed_line(surface, line)))
            gen_ok &= len(sp) == 1 and sp[0] in line4_pts
            count_ok &= len(f.residual_points) == q**4 + 1
        ctx4, emb = surface.quartic
        outside = [f for f in report.general_fibers if not _param_in_subfield(f.base_param, set(emb))]
        checks["general_fibers_irreducible"] = all(not f.reducible for f in outside)
        checks["general_fiber_one_singular_point_on_line"] = gen_ok
        checks["general_fiber_point_count"] = count_ok
    return checks


def _param_in_subfield(param, sub):
    lam, mu = param
    return lam in sub and mu in sub


def singular_fibers(report):
    return [f for f in report.fibers if f.reducible]


def sections(report):
    return list(report.sections)


def unirational_point(ctx4, s, y):
    """(x0, 1, s^q, x3) with x3 = (y^q - y) / (s - s^(q^2)) and x0 = y + s x3."""
    d = ctx4.sub(s, ctx4.frob_power(s, 2))
    if d == 0:
        raise DegenerateParameter("s lies in F_{q^2}")
    x3 = ctx4.div(ctx4.sub(ctx4.frob(y), y), d)
    x0 = ctx4.add(y, ctx4.mul(s, x3))
    return ProjPoint(x0, 1, ctx4.frob(s), x3)


def unirational_samples(surface, n=1000, seed=0):
    """``n`` seeded (s, y) pairs with s outside F_{q^2}; returns (s, y, point, on_surface)."""
    ctx4, _ = surface.quartic
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        s, y = (int(v) for v in rng.integers(0, ctx4.Q, size=2))
        if ctx4.in_subfield(s, 2):
            continue
        P = unirational_point(ctx4, s, y)
        out.append((s, y, P, on_surface(ctx4, P)))
    return out


def quasi_elliptic_report(surface, lines=None, workers=1):
    """Counts for the p = 3, a = 1 pencils; identical across every line."""
    if (surface.p, surface.a) != (3, 1):
        raise WrongCharacteristic("the quasi-elliptic summary is for q = 3")
    summaries = pencil_sweep(3, 1, lines=lines, workers=workers)
    counts = {(s["singular_fibers"], s["fiber_lines"], s["sections"]) for s in summaries}
    total = len(enumerate_lines(surface))
    fibers, fiber_lines, secs = next(iter(counts))
    return {
        "total_lines": total,
        "singular_fibers": fibers,
        "components_each": fiber_lines // fibers,
        "fiber_lines": fiber_lines,
        "cusp_locus_lines": 1,
        "sections": secs,
        "lines_checked": len(summaries),
        "identical_for_all_lines": len(counts) == 1,
        "all_checks_pass": all(all(s["checks"].values()) for s in summaries),
        "line_count_identity": fiber_lines + 1 + secs == total,
    }


_WORKER_SURFACE = {}


def _summary_for(args):
    p, a, key, sample = args
    if (p, a) not in _WORKER_SURFACE:
        _WORKER_SURFACE[(p, a)] = Surface.over(p, a)
    surface = _WORKER_SURFACE[(p, a)]
    line = ProjLine.from_key(surface.ctx, key)
    return build_pencil(surface, line, sample=sample).summary()


def pencil_sweep(p, a, lines=None, sample=3, workers=1):
    """Pencil summaries for every line (or the given lines), in line order.

    ``workers`` changes wall time only; results are merged in line order.
    """
    if lines is None:
        lines = enumerate_lines(Surface.over(p, a))
    jobs = [(p, a, L.key, sample) for L in sorted(lines)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_summary_for, jobs, chunksize=4))
    return [_summary_for(j) for j in jobs]
