"""Classical reference routines.

Everything here avoids modular composition and order oracles on purpose: it
is the independent route used to cross-check the engine (and, internally, to
seed the measurement simulation with true orders).  The pieces are

* ``distinct_degree_parts``: textbook distinct-degree splitting by repeated
  q-th powering;
* ``is_irreducible``: Rabin's criterion, same powering chain;
* ``irreducibles``: exhaustive sieve enumeration of monic irreducibles for
  tiny q^d, cached per field;
* ``equal_degree_split_det``: deterministic equal-degree splitting (fixed
  test-element sequence instead of random draws);
* ``brute_factor``: trial-division factorization over the enumerated
  irreducibles with a powering-based fallback, guarded to desk scales.
"""

from __future__ import annotations

import math

from . import errors
from .fields import FieldCtx
from .poly import Poly, gcd, mulmod, poly_pth_root, powmod, x_poly

__all__ = [
    "distinct_degree_parts",
    "splitting_degree",
    "is_irreducible",
    "irreducibles",
    "equal_degree_split_det",
    "brute_factor",
    "BRUTE_MAX_DEGREE",
    "BRUTE_MAX_Q",
    "ENUM_LIMIT",
]

BRUTE_MAX_DEGREE = 24
BRUTE_MAX_Q = 1 << 20
ENUM_LIMIT = 4096  # enumerate monic irreducibles of degree d only if q^d <= this


def distinct_degree_parts(f: Poly) -> list[tuple[Poly, int]]:
    """Split monic squarefree f into (product of degree-d irreducibles, d).

    Classic ladder: w = x^(q^d) mod f by repeated powering; gcd(w - x, f)
    captures the degree-d part once smaller degrees have been removed.
    """
    if not f.is_monic():
        raise errors.BadInput("input must be monic")
    der = f.deriv()
    if der.is_zero() or gcd(f, der).degree > 0:
        raise errors.NotSquarefree("input must be squarefree")
    ctx = f.ctx
    x = x_poly(ctx)
    parts: list[tuple[Poly, int]] = []
    cur = f
    w = x % cur
    d = 0
    while cur.degree > 0:
        d += 1
        if 2 * d > cur.degree:
            parts.append((cur, cur.degree))
            break
        w = powmod(w, ctx.q, cur)
        g = gcd(w - (x % cur), cur)
        if g.degree > 0:
            parts.append((g, d))
            cur = cur // g
            if cur.degree == 0:
                break
            w = w % cur
    return parts


def splitting_degree(f: Poly) -> int:
    """lcm of the distinct irreducible factor degrees of monic squarefree f."""
    return math.lcm(*[d for (_, d) in distinct_degree_parts(f)])


def is_irreducible(f: Poly) -> bool:
    """Rabin's irreducibility criterion for monic f of degree >= 1."""
    if not f.is_monic() or len(f.coeffs) < 2:
        raise errors.BadInput("input must be monic of degree >= 1")
    n = f.degree
    if n == 1:
        return True
    ctx = f.ctx
    x = x_poly(ctx)
    checks = set()
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            checks.add(n // d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        checks.add(n // m)
    w = x % f
    for i in range(1, n + 1):
        w = powmod(w, ctx.q, f)
        if i in checks and gcd(w - x, f).degree != 0:
            return False
    return w == x % f


# ----------------------------------------------------------------------
# Exhaustive enumeration of monic irreducibles (tiny fields only).
# ----------------------------------------------------------------------

_IRR_CACHE: dict[FieldCtx, dict[int, list[Poly]]] = {}


def _all_monic(ctx: FieldCtx, k: int):
    q = ctx.q
    for idx in range(q**k):
        coeffs = []
        v = idx
        for _ in range(k):
            coeffs.append(ctx.from_index(v % q))
            v //= q
        coeffs.append(ctx.one)
        yield Poly(ctx, coeffs, normalize=False)


def _poly_key(f: Poly) -> tuple[int, ...]:
    idx = f.ctx.element_index
    return tuple(idx(c) for c in f.coeffs)


def irreducibles(ctx: FieldCtx, d: int) -> list[Poly]:
    """All monic irreducibles of degree d over ctx, by sieve; cached."""
    if d < 1:
        raise errors.BadInput("degree must be >= 1")
    if ctx.q**d > ENUM_LIMIT:
        raise errors.TooLarge(f"q^d = {ctx.q**d} exceeds enumeration limit")
    cache = _IRR_CACHE.setdefault(ctx, {})
    for k in range(1, d + 1):
        if k in cache:
            continue
        composite: set[tuple[int, ...]] = set()
        for a in range(1, k // 2 + 1):
            for ip in cache[a]:
                for cof in _all_monic(ctx, k - a):
                    composite.add(_poly_key(ip * cof))
        cache[k] = [g for g in _all_monic(ctx, k) if _poly_key(g) not in composite]
    return cache[d]


# ----------------------------------------------------------------------
# Deterministic equal-degree splitting.
# ----------------------------------------------------------------------


def _test_elements(ctx: FieldCtx, max_degree: int):
    """Nonconstant polynomials of degree < max_degree, in a fixed order."""
    q = ctx.q
    idx = q  # skip constants
    while True:
        coeffs = []
        v = idx
        while v:
            coeffs.append(ctx.from_index(v % q))
            v //= q
        if len(coeffs) > max_degree:
            return
        yield Poly(ctx, coeffs)
        idx += 1


def _split_probe(h: Poly, d: int, u: Poly) -> Poly:
    """One splitting attempt on h (product of distinct degree-d irreducibles)."""
    ctx = h.ctx
    if ctx.p != 2:
        e = (ctx.q**d - 1) // 2
        t = powmod(u, e, h) - Poly.one(ctx)
    else:
        # Absolute trace to F_2 over the degree-d factor fields.
        acc = u % h
        cur = acc
        for _ in range(d * ctx.m - 1):
            cur = mulmod(cur, cur, h)
            acc = acc + cur
        t = acc
    if t.is_zero():
        return h
    return gcd(t, h)


def equal_degree_split_det(f: Poly, d: int) -> list[Poly]:
    """Split a monic product of distinct degree-d irreducibles, no randomness.

    Probes a fixed enumeration of test polynomials; for desk-scale inputs the
    sequence always separates the factors long before it is exhausted.
    """
    if f.degree % d != 0:
        raise errors.BadInput("degree of f must be a multiple of d")
    work = [f]
    done: list[Poly] = []
    for u in _test_elements(f.ctx, max(f.degree, 1)):
        still = []
        for h in work:
            if h.degree == d:
                done.append(h)
                continue
            g = _split_probe(h, d, u)
            if 0 < g.degree < h.degree:
                still.append(g)
                still.append(h // g)
            else:
                still.append(h)
        work = still
        if not work:
            break
        if all(h.degree == d for h in work):
            done.extend(work)
            work = []
            break
    if work:
        raise errors.InvariantViolation("test-element sequence exhausted")
    done.sort(key=Poly.sort_key)
    return done


# ----------------------------------------------------------------------
# Brute-force factorization (test oracle).
# ----------------------------------------------------------------------


def brute_factor(f: Poly) -> tuple[object, list[tuple[Poly, int]]]:
    """Factor f by trial division; returns (unit, [(monic irreducible, mult)]).

    Guard rails keep this within desk scale: deg f <= 24 and q <= 2^20.
    Distinct factors are found by dividing by enumerated irreducibles of
    increasing degree while q^degree stays within the enumeration budget, and
    by powering-based distinct/equal-degree splitting beyond it.  The result
    is verified to multiply back to the input.
    """
    if f.is_zero():
        raise errors.BadInput("cannot factor the zero polynomial")
    if f.degree > BRUTE_MAX_DEGREE:
        raise errors.TooLarge(f"degree {f.degree} exceeds {BRUTE_MAX_DEGREE}")
    ctx = f.ctx
    if ctx.q > BRUTE_MAX_Q:
        raise errors.TooLarge(f"field size {ctx.q} exceeds {BRUTE_MAX_Q}")
    unit = f.lead()
    out = _brute_monic(f.monic())
    out.sort(key=lambda t: (t[0].degree, t[0].sort_key()))
    check = Poly.const(ctx, unit)
    for g, mult in out:
        for _ in range(mult):
            check = check * g
    if check != f:
        raise errors.InvariantViolation("brute factorization failed to reconstruct")
    return unit, out


def _brute_monic(g: Poly) -> list[tuple[Poly, int]]:
    if g.degree == 0:
        return []
    der = g.deriv()
    if der.is_zero():
        return [(h, m * g.ctx.p) for (h, m) in _brute_monic(poly_pth_root(g))]
    rad = g // gcd(g, der)
    out: dict[tuple[int, ...], tuple[Poly, int]] = {}
    cur = g
    for h in _split_distinct(rad):
        mult = 0
        while True:
            qt, rem = divmod(cur, h)
            if not rem.is_zero():
                break
            cur = qt
            mult += 1
        out[_poly_key(h)] = (h, mult)
    if cur.degree > 0:
        # Whatever remains has every multiplicity divisible by p.
        for h, m in _brute_monic(poly_pth_root(cur)):
            key = _poly_key(h)
            if key in out:
                prev, pm = out[key]
                out[key] = (prev, pm + m * g.ctx.p)
            else:
                out[key] = (h, m * g.ctx.p)
    return list(out.values())


def _split_distinct(g: Poly) -> list[Poly]:
    """Distinct irreducible factors of monic squarefree g."""
    ctx = g.ctx
    out: list[Poly] = []
    cur = g
    d = 1
    while cur.degree > 0:
        if 2 * d > cur.degree:
            out.append(cur)
            break
        if ctx.q**d <= ENUM_LIMIT:
            for h in irreducibles(ctx, d):
                if cur.degree < h.degree:
                    break
                qt, rem = divmod(cur, h)
                if rem.is_zero():
                    out.append(h)
                    cur = qt
            d += 1
        else:
            # Enumeration budget exceeded: fall back to powering-based
            # distinct-degree + deterministic equal-degree splitting.
            for part, dd in distinct_degree_parts(cur):
                out.extend(equal_degree_split_det(part, dd))
            cur = Poly.one(ctx)
            break
    return out
