import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermitian.geom import all_points, normalize_point
from hermitian.gf import create_field, v_set
from hermitian.surface import (
    BadLambda, NotOnSurface, Surface, cross_terms, form_value, gradient, hermitian_form,
    hermitian_model_map, line_in_surface, on_surface, plane_points, tangent_plane, vform,
)

EXPECTED = {2: (45, 15), 3: (280, 40), 4: (1105, 85), 5: (3276, 156)}


def brute_points(ctx):
    return sorted(P for P in all_points(ctx) if form_value(ctx, P) == 0)


@pytest.mark.parametrize("p,a", [(2, 1), (3, 1), (2, 2)])
def test_points_match_brute_force(surfaces, p, a):
    S = surfaces(p, a)
    assert S.enumerate_points() == brute_points(S.ctx)


@pytest.mark.parametrize("p,a", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_point_counts(surfaces, p, a):
    S = surfaces(p, a)
    n2, n1 = EXPECTED[S.q]
    assert len(S.enumerate_points()) == n2 == S.expected_point_count()
    assert len(S.enumerate_points("base")) == n1 == S.expected_point_count("base")


def test_base_points_brute_force(S3):
    # F_q-points: the form vanishes identically on them since x^q = x
    base = [P for P in all_points(S3.ctx) if all(S3.ctx.in_base(x) for x in P)]
    assert len(base) == 40
    assert S3.enumerate_points("base") == sorted(base)


@pytest.mark.parametrize("p,a", [(2, 1), (3, 1)])
def test_chart_counts(surfaces, p, a):
    S = surfaces(p, a)
    q = S.q
    counts = S.chart_counts()
    assert counts == S.expected_chart_counts()
    assert list(counts.values()) == [q**5, 1, q**2, q**2, q - 1, (q - 1) * (q**2 - 1)]


def test_examples_on_surface(F4):
    assert on_surface(F4, (0, 0, 0, 1))
    assert on_surface(F4, (1, 1, 0, 0))
    assert not on_surface(F4, (1, 2, 0, 0))  # w^2 - w = 1
    with pytest.raises(NotOnSurface):
        tangent_plane(F4, (1, 2, 0, 0))


def test_vform_matches_scalar(S3):
    X = np.array(all_points(S3.ctx))
    assert vform(S3.ctx, X).tolist() == [form_value(S3.ctx, P) for P in X.tolist()]


@pytest.mark.parametrize("p,a", [(2, 1), (3, 1)])
def test_smooth_and_gauss_injective(surfaces, p, a):
    S = surfaces(p, a)
    assert S.smoothness_check()
    assert S.gauss_map_injective()
    for P in S.enumerate_points()[:30]:
        assert tangent_plane(S.ctx, P).__class__.__name__ == "Hyperplane"
        assert S.ctx.dot(gradient(S.ctx, P), P) == 0  # P lies in its own tangent plane


@pytest.mark.parametrize("p,a", [(2, 1), (3, 1)])
def test_tangent_cone_has_q_plus_one_lines(surfaces, p, a):
    S = surfaces(p, a)
    for P in S.enumerate_points()[::7]:
        lines = S.tangent_cone_lines(P)
        assert len(lines) == S.q + 1
        H = tangent_plane(S.ctx, P)
        assert all(S.ctx.dot(H, r) == 0 for L in lines for r in L.basis)


def test_plane_points(F9):
    H = (0, 1, 2, 0)
    X = plane_points(F9, H)
    assert len(X) == 91
    brute = sorted(P for P in all_points(F9) if F9.dot(H, P) == 0)
    assert sorted(map(tuple, X.tolist())) == brute


def test_cross_terms_zero_on_f_q2_chords(S2):
    # over F_{q^2} the two cross coefficients vanish together for surface points
    ctx = S2.ctx
    pts = S2.enumerate_points()
    for P, Q in itertools.combinations(pts, 2):
        tq, t1 = cross_terms(ctx, P, Q)
        assert (tq == 0) == (t1 == 0)


@pytest.mark.parametrize("p,a", [(2, 1), (3, 1), (2, 2)])
def test_model_map_pulls_back_form(p, a):
    ctx = create_field(p, a)
    for lam in [x for x in v_set(ctx) if x]:
        phi = hermitian_model_map(ctx, lam)
        for x in itertools.islice(all_points(ctx), 0, None, 3):
            assert hermitian_form(ctx, phi.forward(ctx, x)) == ctx.mul(lam, form_value(ctx, x))
            assert phi.inverse(ctx, phi.forward(ctx, x)) == tuple(x)


def test_model_map_rejects_bad_lambda(F9):
    bad = next(x for x in range(1, 9) if x not in v_set(F9))
    with pytest.raises(BadLambda):
        hermitian_model_map(F9, bad)
    with pytest.raises(BadLambda):
        hermitian_model_map(F9, 0)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_scaling_preserves_surface(data):
    S = Surface.over(3, 1)
    ctx = S.ctx
    P = data.draw(st.sampled_from(S.enumerate_points()))
    c = data.draw(st.integers(1, ctx.Q - 1))
    Pc = tuple(ctx.mul(c, x) for x in P)
    assert on_surface(ctx, Pc)
    assert normalize_point(ctx, Pc) == P
    # x -> x^q maps the point set to itself up to the sign of F
    assert on_surface(ctx, tuple(ctx.frob(x) for x in P))


def test_line_in_surface_requires_both_cross_terms():
    # over F_{q^4} a chord can satisfy one cross condition but not the other
    ctx4 = create_field(2, 1, "quartic")
    pts = [P for P in all_points(ctx4) if form_value(ctx4, P) == 0][:200]
    one_only = 0
    for P, Q in itertools.combinations(pts, 2):
        tq, t1 = cross_terms(ctx4, P, Q)
        if (tq == 0) != (t1 == 0):
            one_only += 1
            assert not line_in_surface(ctx4, P, Q)
    assert one_only > 0
