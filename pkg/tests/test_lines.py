import itertools

import pytest

from hermitian.geom import EqualPoints, is_base_rational, line_through, points_on_line
from hermitian.lines import chord_condition, enumerate_lines, line_point_sets, lines_through
from hermitian.surface import NotOnSurface, line_in_surface, on_surface

LINE_COUNTS = {2: (27, 15), 3: (112, 40), 4: (325, 85)}


def brute_lines(S):
    ctx = S.ctx
    found = set()
    for P, Q in itertools.combinations(S.enumerate_points(), 2):
        if line_in_surface(ctx, P, Q):
            found.add(line_through(ctx, P, Q))
    return sorted(found)


@pytest.mark.parametrize("p", [2, 3])
def test_lines_match_pairwise_search(surfaces, p):
    S = surfaces(p)
    assert enumerate_lines(S) == brute_lines(S)


@pytest.mark.parametrize("p,a", [(2, 1), (3, 1), (2, 2)])
def test_line_counts(surfaces, p, a):
    S = surfaces(p, a)
    n2, n1 = LINE_COUNTS[S.q]
    assert len(enumerate_lines(S)) == n2 == S.expected_line_count()
    base = enumerate_lines(S, "base")
    assert len(base) == n1 == S.expected_line_count("base")
    assert all(is_base_rational(S.ctx, L) for L in base)


@pytest.mark.parametrize("p", [2, 3])
def test_lines_lie_on_surface(surfaces, p):
    S = surfaces(p)
    for L, pts in line_point_sets(S).items():
        assert len(pts) == S.q**2 + 1
        assert all(on_surface(S.ctx, P) for P in pts)


@pytest.mark.parametrize("p", [2, 3])
def test_q_plus_one_lines_through_each_point(surfaces, p):
    S = surfaces(p)
    deg = {P: 0 for P in S.enumerate_points()}
    for pts in line_point_sets(S).values():
        for P in pts:
            deg[P] += 1
    assert set(deg.values()) == {S.q + 1}
    P = S.enumerate_points()[5]
    assert len(lines_through(S, P)) == S.q + 1


@pytest.mark.parametrize("p", [2, 3])
def test_chord_condition_iff_line_on_surface(surfaces, p):
    S = surfaces(p)
    ctx = S.ctx
    pts = S.enumerate_points()
    on_lines = set()
    for pset in line_point_sets(S).values():
        on_lines.update(itertools.combinations(sorted(pset), 2))
    n = 0
    for P, Q in itertools.combinations(pts, 2):
        assert chord_condition(ctx, P, Q) == ((P, Q) in on_lines)
        n += 1
    assert n == len(pts) * (len(pts) - 1) // 2


def test_chord_condition_errors(S2):
    ctx = S2.ctx
    with pytest.raises(NotOnSurface):
        chord_condition(ctx, (1, 2, 0, 0), (0, 0, 0, 1))
    with pytest.raises(EqualPoints):
        chord_condition(ctx, (0, 0, 0, 1), (0, 0, 0, 2))


def test_known_line(S2):
    # x1 = x2 = 0 is a line of the surface defined over F_2
    L = line_through(S2.ctx, (1, 0, 0, 0), (0, 0, 0, 1))
    assert L in set(enumerate_lines(S2, "base"))
    assert points_on_line(S2.ctx, L, "base") == [(0, 0, 0, 1), (1, 0, 0, 0), (1, 0, 0, 1)]
