"""Unitary group computations for the Hermitian model

    y1 ybar3 + y3 ybar1 + y2 ybar4 + y4 ybar2 = 0,   ybar = y^q,

with Gram matrix J = [[0, E], [E, 0]].  A matrix A is unitary when
A J A* = J, where A* is the entrywise-conjugated transpose.  Matrices act on
column vectors, so a line spanned by the rows of B goes to the row span of
B A^T.

Matrices are numpy int arrays of encoded F_{q^2} elements with shape
(..., n, n); every routine is batched over the leading axes.
"""

from __future__ import annotations

import os

import numpy as np

from .geom import ProjLine, canonical_lines_batch, line_from_basis
from .gf import TooLarge
from .lines import enumerate_lines
from .surface import hermitian_model_map

__all__ = [
    "NonUnitaryGenerator",
    "J",
    "conj_transpose",
    "matmul",
    "inv2",
    "is_unitary",
    "anti_hermitian_enum",
    "gl2_enum",
    "stabilizer_enum",
    "stabilizer_count",
    "in_stabilizer_family",
    "stabilizer_group_checks",
    "gu_order",
    "stabilizer_order",
    "reference_line",
    "default_generators",
    "line_orbit",
    "model_lines",
    "matrix_keys",
]

# largest stabilizer we materialise; beyond it only the streaming count runs
STAB_CAP = int(os.environ.get("HERMITIAN_STAB_CAP", 10**6))
STREAM_CAP = int(os.environ.get("HERMITIAN_STREAM_CAP", 5 * 10**7))

J = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=np.int64)
E2 = np.eye(2, dtype=np.int64)
E4 = np.eye(4, dtype=np.int64)


class NonUnitaryGenerator(ValueError):
    pass


def _require_tables(ctx):
    if ctx.mul_t is None:
        raise TooLarge(f"{ctx} is too large for matrix enumeration")


def conj_transpose(ctx, A):
    return np.swapaxes(ctx.vfrob(A), -1, -2)


def matmul(ctx, A, B):
    _require_tables(ctx)
    A, B = np.asarray(A), np.asarray(B)
    add, mul = ctx.add_t, ctx.mul_t
    acc = mul[A[..., :, 0, None], B[..., None, 0, :]]
    for k in range(1, A.shape[-1]):
        acc = add[acc, mul[A[..., :, k, None], B[..., None, k, :]]]
    return acc.astype(np.int64)


def inv2(ctx, A):
    """Inverses of invertible 2 x 2 matrices."""
    a, b, c, d = A[..., 0, 0], A[..., 0, 1], A[..., 1, 0], A[..., 1, 1]
    det = ctx.vsub(ctx.vmul(a, d), ctx.vmul(b, c))
    di = ctx.vinv(det)
    out = np.empty_like(A)
    out[..., 0, 0] = ctx.vmul(di, d)
    out[..., 0, 1] = ctx.vmul(di, ctx.vneg(b))
    out[..., 1, 0] = ctx.vmul(di, ctx.vneg(c))
    out[..., 1, 1] = ctx.vmul(di, a)
    return out


def is_unitary(ctx, A):
    """A J A* == J, elementwise over the batch."""
    A = np.asarray(A)
    prod = matmul(ctx, matmul(ctx, A, J), conj_transpose(ctx, A))
    return np.all(prod == J, axis=(-1, -2))


def matrix_keys(ctx, A):
    """Injective uint64 keys for a batch of square matrices."""
    A = np.asarray(A)
    flat = A.reshape(A.shape[:-2] + (-1,)).astype(np.uint64)
    if ctx.Q ** flat.shape[-1] > 2**64:
        raise TooLarge("matrix keys overflow 64 bits")
    w = np.array([ctx.Q**i for i in range(flat.shape[-1])], dtype=np.uint64)
    return (flat * w).sum(axis=-1, dtype=np.uint64)


def anti_hermitian_enum(ctx):
    """All 2 x 2 X with X* = -X: a, d in {x : x^q = -x}, c = -b^q."""
    V = [x for x in range(ctx.Q) if ctx.frob(x) == ctx.neg(x)]
    out = []
    for a in V:
        for d in V:
            for b in range(ctx.Q):
                out.append([[a, b], [ctx.neg(ctx.frob(b)), d]])
    X = np.array(out, dtype=np.int64).reshape(-1, 2, 2)
    return X[np.argsort(matrix_keys(ctx, X), kind="stable")]


def gl2_enum(ctx):
    """GL_2(F_{q^2}): a nonzero first row, then any row off its span."""
    Q = ctx.Q
    vecs = np.array([(u, v) for u in range(Q) for v in range(Q)], dtype=np.int64)
    rows = []
    for r0 in vecs[1:]:
        det = ctx.vsub(ctx.vmul(r0[0], vecs[:, 1]), ctx.vmul(r0[1], vecs[:, 0]))
        r1 = vecs[det != 0]
        rows.append(np.stack([np.broadcast_to(r0, r1.shape), r1], axis=1))
    return np.concatenate(rows)


def stabilizer_order(q):
    return q**6 * (q**4 - 1) * (q**2 - 1)


def gu_order(q):
    return (q + 1) * q**6 * (q**4 - 1) * (q**3 + 1) * (q**2 - 1)


def _assemble(ctx, A4, X):
    """[[A1, 0], [A3, A4]] with A1 = (A4*)^-1 and A3 = X A1, for all pairs."""
    A1 = inv2(ctx, conj_transpose(ctx, A4))
    A3 = matmul(ctx, X[None, :, :, :], A1[:, None, :, :])
    n, m = len(A4), len(X)
    out = np.zeros((n, m, 4, 4), dtype=np.int64)
    out[:, :, :2, :2] = A1[:, None]
    out[:, :, 2:, :2] = A3
    out[:, :, 2:, 2:] = A4[:, None]
    return out.reshape(n * m, 4, 4)


def stabilizer_enum(ctx):
    """Every unitary matrix fixing y1 = y2 = 0, built from (A4, X) pairs."""
    _require_tables(ctx)
    q = ctx.q
    if stabilizer_order(q) > STAB_CAP:
        raise TooLarge(f"stabilizer has {stabilizer_order(q)} elements, cap is {STAB_CAP}")
    return _assemble(ctx, gl2_enum(ctx), anti_hermitian_enum(ctx))


def stabilizer_count(ctx, chunk=64):
    """Stream the (A4, X) family without storing it; count members that are
    unitary and fix the reference line."""
    _require_tables(ctx)
    if stabilizer_order(ctx.q) > STREAM_CAP:
        raise TooLarge(f"stabilizer has {stabilizer_order(ctx.q)} elements, cap is {STREAM_CAP}")
    G, X = gl2_enum(ctx), anti_hermitian_enum(ctx)
    count = bad = 0
    for i in range(0, len(G), chunk):
        S = _assemble(ctx, G[i:i + chunk], X)
        ok = is_unitary(ctx, S) & np.all(S[:, :2, 2:] == 0, axis=(1, 2))
        count += int(ok.sum())
        bad += int((~ok).sum())
    return count, bad


def in_stabilizer_family(ctx, A):
    """Structural membership: A2 = 0, A4 invertible, A1 = (A4*)^-1 and
    A3 A4* anti-Hermitian."""
    A = np.asarray(A)
    A1, A2, A3, A4 = A[..., :2, :2], A[..., :2, 2:], A[..., 2:, :2], A[..., 2:, 2:]
    det = ctx.vsub(ctx.vmul(A4[..., 0, 0], A4[..., 1, 1]), ctx.vmul(A4[..., 0, 1], A4[..., 1, 0]))
    ok = np.all(A2 == 0, axis=(-1, -2)) & (det != 0)
    A4s = conj_transpose(ctx, np.where(ok[..., None, None], A4, E2))
    ok &= np.all(matmul(ctx, A1, A4s) == E2, axis=(-1, -2))
    Y = matmul(ctx, A3, A4s)
    ok &= np.all(conj_transpose(ctx, Y) == ctx.vneg(Y), axis=(-1, -2))
    return ok


def _inverse_unitary(ctx, A):
    # A J A* = J  =>  A^-1 = J A* J
    return matmul(ctx, matmul(ctx, J, conj_transpose(ctx, A)), J)


def stabilizer_group_checks(ctx, S, exhaustive=None, samples=10**4, seed=0, chunk=32):
    """Group axioms for the enumerated stabilizer ``S``.

    Products are checked for every pair when ``exhaustive`` (default: when
    |S| <= 3000), otherwise on ``samples`` seeded random pairs.
    """
    S = np.asarray(S)
    keys = np.sort(matrix_keys(ctx, S))
    n = len(S)

    def members(M):
        k = matrix_keys(ctx, M)
        pos = np.clip(np.searchsorted(keys, k), 0, n - 1)
        return keys[pos] == k

    out = {
        "unitary": bool(is_unitary(ctx, S).all()),
        "fixes_line": bool(np.all(S[:, :2, 2:] == 0)),
        "distinct": bool(len(np.unique(keys)) == n),
        "has_identity": bool(members(E4[None])[0]),
    }
    inv = _inverse_unitary(ctx, S)
    out["inverse_closed"] = bool(members(inv).all()
                                 and np.all(matmul(ctx, S, inv) == E4))
    if exhaustive is None:
        exhaustive = n <= 3000
    if exhaustive:
        closed = True
        for i in range(0, n, chunk):
            prod = matmul(ctx, S[i:i + chunk, None], S[None, :])
            closed &= bool(members(prod.reshape(-1, 4, 4)).all())
        out["product_closed"] = closed
        out["product_pairs_checked"] = n * n
    else:
        rng = np.random.default_rng(seed)
        i, j = rng.integers(0, n, size=(2, samples))
        out["product_closed"] = bool(members(matmul(ctx, S[i], S[j])).all())
        out["product_pairs_checked"] = samples
    return out


def reference_line(ctx):
    """y1 = y2 = 0 in the Hermitian model."""
    return line_from_basis(ctx, [(0, 0, 1, 0), (0, 0, 0, 1)])


def default_generators(ctx):
    """Unipotents [[E, 0], [X, E]] and [[E, X], [0, E]] for anti-Hermitian X,
    Levi elements diag(A, (A*)^-1) for A in GL_2, and J."""
    X = anti_hermitian_enum(ctx)
    G = gl2_enum(ctx)
    lower = np.tile(E4, (len(X), 1, 1))
    lower[:, 2:, :2] = X
    upper = np.tile(E4, (len(X), 1, 1))
    upper[:, :2, 2:] = X
    levi = np.zeros((len(G), 4, 4), dtype=np.int64)
    levi[:, :2, :2] = G
    levi[:, 2:, 2:] = inv2(ctx, conj_transpose(ctx, G))
    return np.concatenate([lower, upper, levi, J[None]])


def _line_keys(ctx, B):
    w = np.array([ctx.Q**i for i in range(8)], dtype=np.int64)
    return B.reshape(len(B), 8) @ w


def line_orbit(ctx, generators=None, start=None, chunk=8):
    """Breadth-first closure of ``start`` (default the reference line) under
    ``generators``; returns the sorted orbit."""
    G = default_generators(ctx) if generators is None else np.asarray(generators, dtype=np.int64)
    if not is_unitary(ctx, G).all():
        raise NonUnitaryGenerator("every generator must satisfy A J A* = J")
    start = reference_line(ctx) if start is None else start
    GT = np.swapaxes(G, -1, -2)
    seen = {}
    first = np.array(start.basis, dtype=np.int64)[None]
    seen[int(_line_keys(ctx, first)[0])] = first[0]
    frontier = first
    while len(frontier):
        new = []
        for i in range(0, len(frontier), chunk):
            F = frontier[i:i + chunk]
            imgs = matmul(ctx, F[:, None], GT[None]).reshape(-1, 2, 4)
            canon = canonical_lines_batch(ctx, imgs)
            keys = _line_keys(ctx, canon)
            keys, idx = np.unique(keys, return_index=True)
            for k, j in zip(keys.tolist(), idx.tolist()):
                if k not in seen:
                    seen[k] = canon[j]
                    new.append(canon[j])
        frontier = np.array(new, dtype=np.int64).reshape(-1, 2, 4)
    return sorted(ProjLine(tuple(tuple(int(x) for x in r) for r in B), ctx.level) for B in seen.values())


def model_lines(surface):
    """The lines of the surface carried into the Hermitian model."""
    ctx = surface.ctx
    phi = hermitian_model_map(ctx)
    return sorted(phi.forward_line(ctx, L) for L in enumerate_lines(surface))
