"""Finite field tower F_p < F_q < F_{q^2} (< F_{q^4}) with table arithmetic.

Elements are plain ints.  The int ``v`` encodes the residue polynomial
``sum(c_i x^i)`` whose coefficients are the base-``p`` digits of ``v``
(``c_0`` is the least significant digit).  Integer order is therefore the
lexicographic order on coefficient vectors written from the top degree down,
and every enumeration in the package inherits it.

A :class:`FieldCtx` is immutable after construction.  Scalar methods
(``add``, ``mul``, ...) take and return Python ints; ``v``-prefixed methods
take numpy arrays.
"""

from __future__ import annotations

import math
import os
from functools import cached_property

import numpy as np

__all__ = [
    "FieldCtx",
    "FieldElem",
    "NonPrime",
    "TooLarge",
    "IrreducibleSearchFailed",
    "create_field",
    "arith",
    "frobenius_q",
    "v_set",
    "solve_additive",
    "subfield_embedding",
    "poly_mulmod",
]

FIELD_CAP = int(os.environ.get("HERMITIAN_FIELD_CAP", 2**24))
# full Q x Q add/mul tables only for small fields
TABLE_MAX = 1024

LEVEL_DEGREE = {"quadratic": 2, "quartic": 4}


class NonPrime(ValueError):
    pass


class TooLarge(ValueError):
    pass


class IrreducibleSearchFailed(RuntimeError):
    pass


def is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p as digit lists, lowest degree first -----------------

def _digits(v, p, n):
    out = []
    for _ in range(n):
        v, r = divmod(v, p)
        out.append(r)
    return out


def _from_digits(ds, p):
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def _poly_rem(a, m, p):
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [x % p for x in a[:dm]] + [0] * max(0, dm - len(a))


def _is_irreducible(m, p):
    """Trial division by every monic polynomial of degree <= deg(m) // 2."""
    n = len(m) - 1
    for d in range(1, n // 2 + 1):
        for low in range(p**d):
            divisor = _digits(low, p, d) + [1]
            if not any(_poly_rem(m, divisor, p)):
                return False
    return True


def poly_mulmod(x, y, modulus, p):
    """Schoolbook product of two encoded elements reduced modulo ``modulus``.

    Independent of the exp/log tables; used to build and to check them.
    """
    n = len(modulus) - 1
    a, b = _digits(x, p, n), _digits(y, p, n)
    prod = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _from_digits(_poly_rem(prod, modulus, p), p)


def _poly_pow(x, e, modulus, p):
    result, base = 1, x
    while e:
        if e & 1:
            result = poly_mulmod(result, base, modulus, p)
        base = poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


def _least_irreducible(p, n):
    for low in range(p**n):
        m = _digits(low, p, n) + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise IrreducibleSearchFailed(f"no irreducible polynomial of degree {n} over F_{p}")


def _as_lookup(arr):
    # python lists index fastest but cost ~40 bytes per entry
    return arr.tolist() if arr.size <= 2**18 else _IntView(arr)


class _IntView:
    __slots__ = ("arr",)

    def __init__(self, arr):
        self.arr = arr

    def __getitem__(self, i):
        return int(self.arr[i])


class FieldCtx:
    """The field F_{p^n} with n = 2a (quadratic level) or 4a (quartic level)."""

    def __init__(self, p, a, level="quadratic"):
        if level not in LEVEL_DEGREE:
            raise ValueError(f"unknown level {level!r}")
        if not is_prime(p):
            raise NonPrime(f"p={p} is not prime")
        if a < 1:
            raise ValueError("a must be a positive integer")
        n = LEVEL_DEGREE[level] * a
        Q = p**n
        if Q > FIELD_CAP:
            raise TooLarge(f"F_{p}^{n} has {Q} elements, cap is {FIELD_CAP}")
        self.p, self.a, self.n, self.level = p, a, n, level
        self.q = p**a
        self.Q = Q
        self.modulus = _least_irreducible(p, n)
        self._build_tables()

    def __repr__(self):
        return f"FieldCtx(p={self.p}, a={self.a}, level={self.level!r}, Q={self.Q})"

    # -- construction --------------------------------------------------------

    def _mul_by_matrix(self, c):
        # column j holds the digits of c * x^j
        p, n = self.p, self.n
        cols = [_digits(poly_mulmod(c, p**j, self.modulus, p), p, n) for j in range(n)]
        return np.array(cols, dtype=np.int64).T

    def _build_tables(self):
        p, n, Q = self.p, self.n, self.Q
        order = Q - 1
        factors = prime_factors(order) if order > 1 else []
        for g in range(1, Q):
            if all(_poly_pow(g, order // r, self.modulus, p) != 1 for r in factors):
                break
        else:
            raise IrreducibleSearchFailed("no primitive element found")
        self.generator = g

        # exp table in blocks: a short sequential run, then block-wise
        # multiplication by g^B as a linear map on digit vectors
        B = max(1, math.isqrt(order))
        head = [1]
        for _ in range(B - 1):
            head.append(poly_mulmod(head[-1], g, self.modulus, p))
        weights = p ** np.arange(n, dtype=np.int64)
        cur = (np.asarray(head, dtype=np.int64)[:, None] // weights) % p
        step = self._mul_by_matrix(poly_mulmod(head[-1], g, self.modulus, p))
        blocks = [cur @ weights]
        total = B
        while total < order:
            cur = (cur @ step.T) % p
            blocks.append(cur @ weights)
            total += B
        exp = np.concatenate(blocks)[:order]
        del blocks, cur
        if len(np.unique(exp)) != order:
            raise IrreducibleSearchFailed("exp table does not enumerate the multiplicative group")
        dt = np.int32
        log = np.full(Q, -1, dtype=dt)
        log[exp] = np.arange(order, dtype=dt)
        self.exp = np.concatenate([exp, exp]).astype(dt)
        del exp
        self.log = log
        self._weights = weights.tolist()
        self._exp_l = _as_lookup(self.exp)
        self._log_l = _as_lookup(log)

        els = np.arange(Q, dtype=dt)
        self.neg_t = self._digitwise(els, els, lambda u, v: (-u) % p)
        self._neg_l = _as_lookup(self.neg_t)
        self.frob_t = self.vpow(els, self.q).astype(dt)
        self._frob_l = _as_lookup(self.frob_t)
        self.inv_t = np.zeros(Q, dtype=dt)
        self.inv_t[1:] = self.exp[(order - log[1:]) % order]
        self._inv_l = _as_lookup(self.inv_t)

        if Q <= TABLE_MAX:
            dt = np.uint16
            X, Y = np.meshgrid(els, els, indexing="ij")
            self.add_t = self._digitwise(X, Y, lambda u, v: (u + v) % p).astype(dt)
            mul = np.zeros((Q, Q), dtype=np.int64)
            nz = log[1:]
            mul[1:, 1:] = self.exp[nz[:, None] + nz[None, :]]
            self.mul_t = mul.astype(dt)
            self._add_l = self.add_t.tolist()
            self._mul_l = self.mul_t.tolist()
        else:
            self.add_t = self.mul_t = None

    def _digitwise(self, X, Y, f):
        out = np.zeros(np.broadcast(X, Y).shape, dtype=np.int64)
        for w in self._weights:
            out += f((X // w) % self.p, (Y // w) % self.p) * w
        return out

    # -- scalar arithmetic ---------------------------------------------------

    def add(self, x, y):
        if self.add_t is not None:
            return self._add_l[x][y]
        if self.p == 2:
            return x ^ y
        return _from_digits([(u + v) % self.p for u, v in zip(
            _digits(x, self.p, self.n), _digits(y, self.p, self.n))], self.p)

    def neg(self, x):
        return self._neg_l[x]

    def sub(self, x, y):
        return self.add(x, self._neg_l[y])

    def mul(self, x, y):
        if self.mul_t is not None:
            return self._mul_l[x][y]
        if x == 0 or y == 0:
            return 0
        return self._exp_l[self._log_l[x] + self._log_l[y]]

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv_l[x]

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, e):
        """Square-and-multiply; negative exponents invert first."""
        if e < 0:
            x, e = self.inv(x), -e
        result, base = 1, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frob(self, x):
        """x -> x^q."""
        return self._frob_l[x]

    def frob_power(self, x, k):
        """x -> x^(q^k)."""
        for _ in range(k):
            x = self._frob_l[x]
        return x

    def sum(self, xs):
        total = 0
        for x in xs:
            total = self.add(total, x)
        return total

    def dot(self, u, v):
        total = 0
        for x, y in zip(u, v):
            total = self.add(total, self.mul(x, y))
        return total

    def scale(self, c, vec):
        return tuple(self.mul(c, x) for x in vec)

    def in_base(self, x):
        """Membership in F_q."""
        return self._frob_l[x] == x

    def in_prime(self, x):
        return self.pow(x, self.p) == x

    def in_subfield(self, x, k):
        """Membership in F_{q^k}."""
        return self.frob_power(x, k) == x

    def elements(self):
        return range(self.Q)

    def base_elements(self):
        return [x for x in range(self.Q) if self._frob_l[x] == x]

    def elem(self, v):
        return FieldElem(self, v)

    # -- vectorised arithmetic -----------------------------------------------

    def vadd(self, X, Y):
        X, Y = np.asarray(X), np.asarray(Y)
        if self.add_t is not None:
            return self.add_t[X, Y].astype(np.int64)
        if self.p == 2:
            return np.bitwise_xor(X, Y).astype(np.int64)
        return self._digitwise(X, Y, lambda u, v: (u + v) % self.p)

    def vneg(self, X):
        return self.neg_t[np.asarray(X)].astype(np.int64)

    def vsub(self, X, Y):
        return self.vadd(X, self.neg_t[np.asarray(Y)])

    def vmul(self, X, Y):
        X, Y = np.asarray(X), np.asarray(Y)
        if self.mul_t is not None:
            return self.mul_t[X, Y].astype(np.int64)
        X, Y = np.broadcast_arrays(X, Y)
        zero = (X == 0) | (Y == 0)
        out = self.exp[np.where(zero, 0, self.log[X].astype(np.int64) + self.log[Y])]
        return np.where(zero, 0, out).astype(np.int64)

    def vpow(self, X, e):
        X = np.asarray(X)
        order = self.Q - 1
        if e == 0:
            return np.ones_like(X, dtype=np.int64)
        out = self.exp[(self.log[X].astype(np.int64) * (e % order)) % order]
        return np.where(X == 0, 0, out)

    def vfrob(self, X):
        return self.frob_t[np.asarray(X)].astype(np.int64)

    def vinv(self, X):
        X = np.asarray(X)
        if np.any(X == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.inv_t[X].astype(np.int64)

    # -- additive structure of F_{q^2} ---------------------------------------

    @cached_property
    def _artin_fibres(self):
        # c -> sorted list of x with x^q - x = c
        fib = {}
        for x in range(self.Q):
            fib.setdefault(self.sub(self.frob(x), x), []).append(x)
        return fib


class FieldElem:
    """Thin operator-overloading wrapper around an encoded element."""

    __slots__ = ("ctx", "v")

    def __init__(self, ctx, v):
        if not 0 <= v < ctx.Q:
            raise ValueError(f"{v} out of range for {ctx}")
        self.ctx, self.v = ctx, int(v)

    def _wrap(self, other):
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ValueError("operands live in different field contexts")
            return other.v
        return int(other) % self.ctx.p  # prime-field constant

    def __add__(self, other):
        return FieldElem(self.ctx, self.ctx.add(self.v, self._wrap(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self.v, self._wrap(other)))

    def __rsub__(self, other):
        return FieldElem(self.ctx, self.ctx.sub(self._wrap(other), self.v))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.v))

    def __mul__(self, other):
        return FieldElem(self.ctx, self.ctx.mul(self.v, self._wrap(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.ctx, self.ctx.div(self.v, self._wrap(other)))

    def __pow__(self, e):
        return FieldElem(self.ctx, self.ctx.pow(self.v, e))

    def inverse(self):
        return FieldElem(self.ctx, self.ctx.inv(self.v))

    def frobenius(self):
        return FieldElem(self.ctx, self.ctx.frob(self.v))

    def in_base(self):
        return self.ctx.in_base(self.v)

    def in_prime(self):
        return self.ctx.in_prime(self.v)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx is other.ctx and self.v == other.v
        if isinstance(other, int):
            return self.v == other
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.v))

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"FieldElem({self.v})"


_CACHE = {}


def create_field(p, a, level="quadratic"):
    """Return the (cached) context for F_{p^(2a)} or F_{p^(4a)}."""
    key = (p, a, level)
    if key not in _CACHE:
        _CACHE[key] = FieldCtx(p, a, level)
    return _CACHE[key]


def arith(op, *operands):
    """Dispatch ``add | sub | neg | mul | inv | div | pow`` on :class:`FieldElem`."""
    x = operands[0]
    if op == "add":
        return x + operands[1]
    if op == "sub":
        return x - operands[1]
    if op == "neg":
        return -x
    if op == "mul":
        return x * operands[1]
    if op == "inv":
        return x.inverse()
    if op == "div":
        return x / operands[1]
    if op == "pow":
        return x ** operands[1]
    raise ValueError(f"unknown operation {op!r}")


def frobenius_q(x):
    return x.frobenius()


def v_set(ctx):
    """The elements with x^q = -x, as a sorted list of ints."""
    return [x for x in ctx.elements() if ctx.frob(x) == ctx.neg(x)]


def solve_additive(ctx, c):
    """All x with x^q - x = c, sorted; q of them when c lies in ``v_set``."""
    return list(ctx._artin_fibres.get(c, []))


def subfield_embedding(small, big):
    """Embed ``small`` into ``big`` by sending the generator class of ``small``
    to the least root of its modulus in ``big``.  Returns a list indexed by
    encoded elements of ``small``."""
    if small.p != big.p or big.n % small.n:
        raise ValueError(f"{small} does not embed in {big}")
    els = np.arange(big.Q)
    val = np.zeros(big.Q, dtype=np.int64)
    for c in reversed(small.modulus):
        val = big.vadd(big.vmul(val, els), np.full(big.Q, c))
    roots = np.flatnonzero(val == 0)
    if len(roots) == 0:
        raise IrreducibleSearchFailed("modulus has no root in the extension")
    r = int(roots[0])
    powers = [1]
    for _ in range(small.n - 1):
        powers.append(big.mul(powers[-1], r))
    out = []
    for v in range(small.Q):
        acc = 0
        for d, rp in zip(_digits(v, small.p, small.n), powers):
            # d is a prime-field constant, encoded as itself
            acc = big.add(acc, big.mul(d, rp))
        out.append(acc)
    return out
