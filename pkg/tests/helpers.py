"""Shared construction helpers for the test suite.

Everything here builds inputs with known structure (irreducibles of a
prescribed degree, squarefree polynomials) so tests can check results
against the construction instead of against the code under test.
"""

from ffq import is_irreducible
from ffq.poly import Poly, gcd, random_monic


def rand_irreducible(ctx, d, rng):
    """Random monic irreducible of degree d by rejection sampling."""
    while True:
        f = random_monic(ctx, d, rng)
        if is_irreducible(f):
            return f


def rand_squarefree(ctx, n, rng):
    """Random monic squarefree polynomial of degree n."""
    while True:
        f = random_monic(ctx, n, rng)
        der = f.deriv()
        if der.is_zero():
            continue
        if gcd(f, der).degree == 0:
            return f


def distinct_irreducibles(ctx, degrees, rng):
    """One random irreducible per requested degree, all distinct."""
    seen = set()
    out = []
    for d in degrees:
        while True:
            g = rand_irreducible(ctx, d, rng)
            if g not in seen:
                seen.add(g)
                out.append(g)
                break
    return out


def product(ctx, polys):
    acc = Poly.one(ctx)
    for g in polys:
        acc = acc * g
    return acc


def all_monic(ctx, d):
    """Every monic polynomial of degree d, in index order."""
    q = ctx.q
    for idx in range(q**d):
        coeffs = []
        v = idx
        for _ in range(d):
            coeffs.append(ctx.from_index(v % q))
            v //= q
        coeffs.append(ctx.one)
        yield Poly(ctx, coeffs)


def mobius(n):
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def count_irreducibles(q, d):
    """Gauss's count of monic irreducibles of degree d over F_q."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += mobius(d // e) * q**e
    return total // d
