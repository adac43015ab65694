import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermitian.gf import TooLarge, create_field
from hermitian.lines import enumerate_lines
from hermitian.surface import hermitian_form, hermitian_model_map
from hermitian.unitary import (
    E4, J, NonUnitaryGenerator, anti_hermitian_enum, conj_transpose, default_generators,
    gl2_enum, gu_order, in_stabilizer_family, inv2, is_unitary, line_orbit, matmul, matrix_keys,
    model_lines, reference_line, stabilizer_count, stabilizer_enum, stabilizer_group_checks,
    stabilizer_order,
)

F4 = create_field(2, 1)
F9 = create_field(3, 1)


def all_2x2(ctx):
    Q = ctx.Q
    return np.array(list(itertools.product(range(Q), repeat=4)), dtype=np.int64).reshape(-1, 2, 2)


@pytest.mark.parametrize("p,a,count", [(2, 1, 16), (3, 1, 81), (2, 2, 256)])
def test_anti_hermitian_matches_brute_force(p, a, count):
    ctx = create_field(p, a)
    M = all_2x2(ctx)
    brute = M[np.all(conj_transpose(ctx, M) == ctx.vneg(M), axis=(1, 2))]
    X = anti_hermitian_enum(ctx)
    assert len(X) == count == ctx.q**4
    assert np.array_equal(np.sort(matrix_keys(ctx, X)), np.sort(matrix_keys(ctx, brute)))


@pytest.mark.parametrize("ctx", [F4, F9])
def test_gl2(ctx):
    G = gl2_enum(ctx)
    Q = ctx.Q
    assert len(G) == (Q**2 - 1) * (Q**2 - Q)
    assert np.all(matmul(ctx, G, inv2(ctx, G)) == np.eye(2, dtype=np.int64))


def test_orders():
    assert stabilizer_order(2) == 2880 and stabilizer_order(3) == 466560
    assert gu_order(2) == 77760 and gu_order(3) == 52254720


def test_stabilizer_q2_matches_block_brute_force():
    # every block-lower-triangular unitary matrix: A1 A4* = E is the upper
    # right block of A J A* = J; A3 ranges over all 2 x 2 matrices
    ctx = F4
    G = gl2_enum(ctx)
    A4s = conj_transpose(ctx, G)
    prods = matmul(ctx, G[:, None], A4s[None])
    i, j = np.nonzero(np.all(prods == np.eye(2, dtype=np.int64), axis=(-1, -2)))
    A3 = all_2x2(ctx)
    M = np.zeros((len(i), len(A3), 4, 4), dtype=np.int64)
    M[:, :, :2, :2] = G[i][:, None]
    M[:, :, 2:, :2] = A3[None]
    M[:, :, 2:, 2:] = G[j][:, None]
    M = M.reshape(-1, 4, 4)
    brute = M[is_unitary(ctx, M)]
    S = stabilizer_enum(ctx)
    assert len(S) == len(brute) == 2880
    assert np.array_equal(np.sort(matrix_keys(ctx, S)), np.sort(matrix_keys(ctx, brute)))


def test_stabilizer_group_q2():
    S = stabilizer_enum(F4)
    checks = stabilizer_group_checks(F4, S, exhaustive=False, samples=5000)
    assert all(v for k, v in checks.items() if k != "product_pairs_checked")
    assert in_stabilizer_family(F4, S).all()


def test_stabilizer_count_streams():
    assert stabilizer_count(F4) == (2880, 0)


def test_stabilizer_cap(monkeypatch):
    import hermitian.unitary as u
    monkeypatch.setattr(u, "STAB_CAP", 1000)
    with pytest.raises(TooLarge):
        stabilizer_enum(F4)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_family_membership_equals_unitarity_for_lower_blocks(data):
    ctx = data.draw(st.sampled_from([F4, F9]))
    G = gl2_enum(ctx)
    X = anti_hermitian_enum(ctx)
    A4 = G[data.draw(st.integers(0, len(G) - 1))]
    A1 = inv2(ctx, conj_transpose(ctx, A4))
    if data.draw(st.booleans()):
        A3 = matmul(ctx, X[data.draw(st.integers(0, len(X) - 1))], A1)
    else:
        A3 = np.array(data.draw(st.lists(st.integers(0, ctx.Q - 1), min_size=4, max_size=4))).reshape(2, 2)
    A = np.zeros((4, 4), dtype=np.int64)
    A[:2, :2], A[2:, :2], A[2:, 2:] = A1, A3, A4
    assert bool(is_unitary(ctx, A)) == bool(in_stabilizer_family(ctx, A))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_unitary_preserves_hermitian_form(data):
    ctx = F9
    gens = default_generators(ctx)
    A = gens[data.draw(st.integers(0, len(gens) - 1))]
    y = tuple(data.draw(st.lists(st.integers(0, 8), min_size=4, max_size=4)))
    Ay = tuple(int(v) for v in matmul(ctx, A, np.array(y)[:, None])[:, 0])
    assert hermitian_form(ctx, Ay) == hermitian_form(ctx, y)


def test_gram_matrix_is_unitary():
    assert is_unitary(F4, J) and is_unitary(F4, E4)
    bad = E4.copy()
    bad[0, 0] = 2
    assert not is_unitary(F4, bad)
    with pytest.raises(NonUnitaryGenerator):
        line_orbit(F4, generators=bad[None])


@pytest.mark.parametrize("p,count", [(2, 27), (3, 112)])
def test_orbit_is_all_lines(surfaces, p, count):
    S = surfaces(p)
    orbit = line_orbit(S.ctx)
    assert len(orbit) == count
    assert orbit == model_lines(S)
    assert reference_line(S.ctx) in orbit
    assert len(orbit) * stabilizer_order(S.q) == gu_order(S.q)


def test_reference_line_pulls_back_to_surface_line(S2):
    ctx = S2.ctx
    phi = hermitian_model_map(ctx)
    L = phi.inverse_line(ctx, reference_line(ctx))
    assert L.basis == ((0, 1, 0, 0), (0, 0, 0, 1))
    assert L in set(enumerate_lines(S2))
