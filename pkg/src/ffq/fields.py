"""Finite field contexts F_q with q = p^m.

A context object owns the parameters (p, m, h) and exposes element
arithmetic.  Elements are plain values, not wrapper objects: an ``int`` in
``[0, p)`` for prime fields, and a tuple of ``m`` such ints (coefficients of
1, y, ..., y^(m-1)) for extension fields F_p[y]/(h).  All operations return
fully reduced values, so representations are canonical and comparable with
``==``.

Because elements are bare values they carry no back-reference to their field;
mixing elements of different fields is the caller's responsibility at this
layer.  The polynomial layer, whose objects do carry a context, raises
``FieldMismatch`` on any cross-field operation.
"""

from __future__ import annotations

import random as _random

import numpy as np

from . import errors
from .rng import make_rng, rand_below

__all__ = [
    "FieldCtx",
    "PrimeField",
    "ExtensionField",
    "field_new",
    "is_probable_prime",
]

_MR_ROUNDS = 64


def is_probable_prime(n: int, rounds: int = _MR_ROUNDS) -> bool:
    """Miller-Rabin with ``rounds`` pseudo-random bases (error < 4^-rounds).

    Bases are drawn from a generator seeded by ``n`` itself, so the answer is
    deterministic for a given input.
    """
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    picker = _random.Random(n)
    for _ in range(rounds):
        a = picker.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ----------------------------------------------------------------------
# Internal dense polynomial arithmetic over F_p (int coefficient lists).
# Used only to build and run extension fields; the public polynomial ring
# lives in poly.py.
# ----------------------------------------------------------------------


def _pnorm(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _pnorm([v % p for v in out])


def _pdivrem(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], _pnorm(r)
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] % p
        if c:
            c = (c * inv_lead) % p
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % p
    return _pnorm(q), _pnorm(r)


def _pmod(a: list[int], b: list[int], p: int) -> list[int]:
    return _pdivrem(a, b, p)[1]


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(v * inv) % p for v in a]
    return a


def _pegcd_inv(a: list[int], h: list[int], p: int) -> list[int]:
    """Inverse of ``a`` modulo ``h`` (both over F_p); a must be a unit."""
    r0, r1 = list(h), list(a)
    t0: list[int] = []
    t1: list[int] = [1]
    while r1:
        q, rem = _pdivrem(r0, r1, p)
        r0, r1 = r1, rem
        qt = _pmul(q, t1, p)
        nt = [(x - y) % p for x, y in _zip_pad(t0, qt)]
        t0, t1 = t1, _pnorm(nt)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    inv_c = pow(r0[0], p - 2, p)
    return [(v * inv_c) % p for v in t0]


def _zip_pad(a: list[int], b: list[int]):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)


def _ppowmod(base: list[int], e: int, h: list[int], p: int) -> list[int]:
    result = [1]
    cur = _pmod(base, h, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, cur, p), h, p)
        e >>= 1
        if e:
            cur = _pmod(_pmul(cur, cur, p), h, p)
    return result


def _pirreducible(h: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p of degree >= 1."""
    m = len(h) - 1
    if m < 1:
        return False
    y = [0, 1]
    # y^(p^m) == y mod h
    w = _pmod(y, h, p)
    for _ in range(m):
        w = _ppowmod(w, p, h, p)
    if _pnorm([(a - b) % p for a, b in _zip_pad(w, _pmod(y, h, p))]):
        return False
    # gcd(y^(p^(m/t)) - y, h) == 1 for each prime t dividing m
    for t in _prime_divisors(m):
        w = _pmod(y, h, p)
        for _ in range(m // t):
            w = _ppowmod(w, p, h, p)
        diff = _pnorm([(a - b) % p for a, b in _zip_pad(w, _pmod(y, h, p))])
        g = _pgcd(diff, h, p)
        if len(g) != 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
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


# ----------------------------------------------------------------------
# Field contexts.
# ----------------------------------------------------------------------


class FieldCtx:
    """Common interface for F_p and F_{p^m}; construct via :func:`field_new`."""

    p: int
    m: int
    q: int
    h: tuple[int, ...]  # monic modulus of F_p[y], length m + 1

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and self.p == other.p
            and self.m == other.m
            and self.h == other.h
        )

    def __hash__(self):
        return hash((self.p, self.m, self.h))

    def __repr__(self):
        if self.m == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.m}"

    # Subclasses provide: zero, one, add, sub, neg, mul, inv, pow, pth_root,
    # from_int, from_index, element_index, is_valid, rand.

    def iter_elements(self):
        """All field elements in a fixed deterministic order."""
        for i in range(self.q):
            yield self.from_index(i)

    def rand(self, rng: np.random.Generator):
        return self.from_index(rand_below(rng, self.q))

    def div(self, a, b):
        return self.mul(a, self.inv(b))


class PrimeField(FieldCtx):
    """F_p with elements represented as ints in [0, p)."""

    __slots__ = ("p", "m", "q", "h")

    def __init__(self, p: int):
        self.p = p
        self.m = 1
        self.q = p
        self.h = (0, 1)  # y

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a: int, b: int) -> int:
        c = a + b
        return c - self.p if c >= self.p else c

    def sub(self, a: int, b: int) -> int:
        c = a - b
        return c + self.p if c < 0 else c

    def neg(self, a: int) -> int:
        return self.p - a if a else 0

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def pth_root(self, a: int) -> int:
        # Frobenius is the identity on the prime field.
        return a

    def from_int(self, i: int) -> int:
        return i % self.p

    def from_index(self, i: int) -> int:
        return i

    def element_index(self, a: int) -> int:
        return a

    def is_valid(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.p


class ExtensionField(FieldCtx):
    """F_{p^m} = F_p[y]/(h) with elements as tuples of m ints."""

    __slots__ = ("p", "m", "q", "h", "_ytab", "_zero", "_one")

    def __init__(self, p: int, h: list[int]):
        self.p = p
        self.m = len(h) - 1
        self.q = p**self.m
        self.h = tuple(h)
        # _ytab[i] = y^(m+i) mod h as a length-m row; lets mul reduce without
        # division.
        m = self.m
        self._ytab = []
        red = [(-c) % p for c in h[:m]]  # y^m mod h
        self._ytab.append(red)
        for _ in range(m - 2):
            prev = self._ytab[-1]
            nxt = [0] + prev[: m - 1]
            top = prev[m - 1]
            if top:
                for j in range(m):
                    nxt[j] = (nxt[j] + top * red[j]) % p
            self._ytab.append(nxt)
        self._zero = (0,) * m
        self._one = (1,) + (0,) * (m - 1)

    @property
    def zero(self) -> tuple[int, ...]:
        return self._zero

    @property
    def one(self) -> tuple[int, ...]:
        return self._one

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p = self.p
        m = self.m
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        for i in range(2 * m - 2, m - 1, -1):
            c = conv[i] % p
            if c:
                row = self._ytab[i - m]
                for j in range(m):
                    conv[j] += c * row[j]
        return tuple(v % p for v in conv[:m])

    def inv(self, a):
        lst = _pnorm(list(a))
        if not lst:
            raise ZeroDivisionError("inverse of zero")
        t = _pegcd_inv(lst, list(self.h), self.p)
        return tuple(t + [0] * (self.m - len(t)))

    def pow(self, a, e: int):
        if e < 0:
            a = self.inv(a)
            e = -e
        result = self._one
        cur = a
        while e:
            if e & 1:
                result = self.mul(result, cur)
            e >>= 1
            if e:
                cur = self.mul(cur, cur)
        return result

    def pth_root(self, a):
        # The Frobenius x -> x^p has order m, so its inverse is x -> x^(p^(m-1)).
        return self.pow(a, self.p ** (self.m - 1))

    def from_int(self, i: int):
        return (i % self.p,) + (0,) * (self.m - 1)

    def from_index(self, i: int):
        p = self.p
        digits = []
        for _ in range(self.m):
            digits.append(i % p)
            i //= p
        return tuple(digits)

    def element_index(self, a) -> int:
        idx = 0
        for d in reversed(a):
            idx = idx * self.p + d
        return idx

    def is_valid(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.m
            and all(isinstance(x, int) and 0 <= x < self.p for x in a)
        )


def field_new(
    p: int,
    m: int = 1,
    h: list[int] | tuple[int, ...] | None = None,
    rng: np.random.Generator | None = None,
) -> FieldCtx:
    """Create a field context.

    ``p`` must be prime (checked, 64-round Miller-Rabin) and ``m >= 1``.  For
    ``m > 1`` a monic irreducible modulus ``h`` (coefficient list, ascending,
    length m + 1) may be supplied; otherwise one is found by random search
    using ``rng``.  Prime fields always use h = y.
    """
    if not isinstance(p, int) or p < 2 or not is_probable_prime(p):
        raise errors.NotPrime(f"{p} is not prime")
    if m < 1:
        raise errors.BadInput("extension degree must be >= 1")
    if m == 1:
        if h is not None:
            hh = list(h)
            if len(hh) != 2 or hh[1] % p != 1:
                raise errors.DegreeMismatch("modulus for m=1 must be monic of degree 1")
        return PrimeField(p)
    if h is not None:
        hh = [c % p for c in h]
        if len(hh) != m + 1 or hh[m] != 1:
            raise errors.DegreeMismatch(
                f"modulus must be monic of degree {m}, got {list(h)}"
            )
        if not _pirreducible(hh, p):
            raise errors.Reducible(f"modulus {list(h)} is reducible over F_{p}")
        return ExtensionField(p, hh)
    if rng is None:
        rng = make_rng()
    # A random monic polynomial of degree m is irreducible with probability
    # about 1/m, so this loop is short.
    while True:
        cand = [rand_below(rng, p) for _ in range(m)] + [1]
        if _pirreducible(cand, p):
            return ExtensionField(p, cand)
