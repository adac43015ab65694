"""Point/line incidence structures, configuration parameters and t-designs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .geom import is_base_rational, points_on_line

__all__ = [
    "IncidenceStructure",
    "ConfigParams",
    "NotAConfiguration",
    "InconsistentLevel",
    "DesignTooLarge",
    "build_incidence",
    "configuration_params",
    "is_symmetric",
    "verify_design",
    "incidence_to_json",
]


class InconsistentLevel(ValueError):
    pass


class DesignTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class IncidenceStructure:
    points: tuple
    blocks: tuple
    incidence: frozenset  # (point index, block index)

    def __post_init__(self):
        if not self.points or not self.blocks:
            raise ValueError("need at least one point and one block")
        nv, nb = len(self.points), len(self.blocks)
        if any(not (0 <= i < nv and 0 <= j < nb) for i, j in self.incidence):
            raise ValueError("incidence refers to unknown points or blocks")

    @property
    def v(self):
        return len(self.points)

    @property
    def b(self):
        return len(self.blocks)

    @cached_property
    def point_degrees(self):
        deg = Counter(i for i, _ in self.incidence)
        return [deg[i] for i in range(self.v)]

    @cached_property
    def block_degrees(self):
        deg = Counter(j for _, j in self.incidence)
        return [deg[j] for j in range(self.b)]

    @cached_property
    def block_points(self):
        out = [set() for _ in range(self.b)]
        for i, j in self.incidence:
            out[j].add(i)
        return [frozenset(s) for s in out]


@dataclass(frozen=True)
class ConfigParams:
    v: int
    k: int
    b: int
    r: int

    def __str__(self):
        return f"({self.v}_{self.k}, {self.b}_{self.r})"


@dataclass(frozen=True)
class NotAConfiguration:
    """Returned (not raised) when degrees are not constant."""

    point_degrees: dict
    block_degrees: dict

    def __bool__(self):
        return False


def build_incidence(ctx, points, lines, level="quadratic"):
    """Incidence of ``points`` and ``lines``, using each line's points at ``level``."""
    points = tuple(sorted(points))
    lines = tuple(sorted(lines))
    if level == "base":
        if not all(is_base_rational(ctx, P) for P in points) or \
                not all(is_base_rational(ctx, L) for L in lines):
            raise InconsistentLevel("base-level structure given non-base objects")
    index = {P: i for i, P in enumerate(points)}
    pairs = set()
    for j, L in enumerate(lines):
        for P in points_on_line(ctx, L, level):
            if P in index:
                pairs.add((index[P], j))
    return IncidenceStructure(points, lines, frozenset(pairs))


def configuration_params(I):
    pd, bd = Counter(I.point_degrees), Counter(I.block_degrees)
    if len(pd) != 1 or len(bd) != 1:
        return NotAConfiguration(dict(pd), dict(bd))
    (k,), (r,) = pd, bd
    assert k * I.v == r * I.b
    return ConfigParams(I.v, k, I.b, r)


def is_symmetric(I):
    params = configuration_params(I)
    if not params:
        raise ValueError(f"not a configuration: {params}")
    return params.v == params.b


def verify_design(I, t, lam, max_subsets=10**6):
    """Check the t-(v, k, lam) conditions with k read off the blocks."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if len(set(I.block_degrees)) != 1:
        return False
    if t == 1:
        return all(d == lam for d in I.point_degrees)
    n_subsets = 1
    for i in range(t):
        n_subsets = n_subsets * (I.v - i) // (i + 1)
    if n_subsets > max_subsets:
        raise DesignTooLarge(f"{n_subsets} {t}-subsets exceed cap {max_subsets}")
    point_blocks = [set() for _ in range(I.v)]
    for i, j in I.incidence:
        point_blocks[i].add(j)
    for subset in combinations(range(I.v), t):
        common = set.intersection(*(point_blocks[i] for i in subset))
        if len(common) != lam:
            return False
    return True


def incidence_to_json(I):
    return {
        "points": [",".join(map(str, P)) for P in I.points],
        "blocks": [L.key for L in I.blocks],
        "incidence": sorted([list(x) for x in I.incidence]),
    }
