"""Full factorization pipeline: squarefree -> distinct-degree -> equal-degree.

``factor`` normalizes the unit, splits by multiplicity (Yun's algorithm with
the characteristic-p p-th-power recursion), runs the order-driven
distinct-degree engine on each squarefree part, and splits each same-degree
block into irreducibles (Cantor-Zassenhaus for odd q, trace maps for
characteristic 2).  Every output is audited to multiply back to the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import errors
from .classical import brute_factor, is_irreducible
from .ddf import ddf
from .order import OracleConfig, OrderOracle
from .poly import Poly, gcd, mulmod, poly_pth_root, powmod, random_poly
from .rng import make_rng

__all__ = [
    "Factorization",
    "sff",
    "edf",
    "factor",
    "is_irreducible",
    "brute_factor",
]


@dataclass
class Factorization:
    """unit * prod(poly^multiplicity) over ascending (degree, coefficients)."""

    unit: object
    factors: list[tuple[Poly, int]] = field(default_factory=list)

    def product(self, ctx) -> Poly:
        out = Poly.const(ctx, self.unit)
        for g, mult in self.factors:
            for _ in range(mult):
                out = out * g
        return out


def sff(f: Poly) -> list[tuple[Poly, int]]:
    """Squarefree factorization of nonzero f: [(monic squarefree part, mult)].

    Yun's gcd chain; a vanishing derivative means f is a p-th power, and the
    recursion continues on its p-th root with multiplicities scaled by p.
    The returned parts are pairwise coprime, listed by ascending multiplicity.
    """
    if f.is_zero():
        raise errors.BadInput("cannot factor the zero polynomial")
    ctx = f.ctx
    out: list[tuple[Poly, int]] = []

    def rec(g: Poly, scale: int) -> None:
        if g.degree == 0:
            return
        der = g.deriv()
        if der.is_zero():
            rec(poly_pth_root(g), scale * ctx.p)
            return
        tail = gcd(g, der)
        w = g // tail
        j = 1
        while w.degree > 0:
            y = gcd(w, tail)
            part = w // y
            if part.degree > 0:
                out.append((part, j * scale))
            w = y
            tail = tail // y
            j += 1
        if tail.degree > 0:
            # Every multiplicity left in the tail is divisible by p.
            rec(poly_pth_root(tail), scale * ctx.p)

    rec(f.monic(), 1)
    out.sort(key=lambda t: (t[1], t[0].sort_key()))
    return out


def edf(f: Poly, d: int, rng=None) -> list[Poly]:
    """Split monic f, a product of distinct degree-d irreducibles.

    Odd q: gcd with u^((q^d-1)/2) - 1 for random u separates the factors
    with probability >= 1/2 per round.  Characteristic 2: the same role is
    played by the absolute trace sum u + u^2 + ... + u^(2^(dm-1)).
    """
    if d < 1 or f.degree < 1 or f.degree % d != 0:
        raise errors.BadInput("degree of f must be a positive multiple of d")
    if not f.is_monic():
        raise errors.BadInput("input must be monic")
    if f.degree == d:
        return [f]
    if rng is None:
        rng = make_rng()
    ctx = f.ctx
    work = [f]
    done: list[Poly] = []
    while work:
        h = work.pop()
        if h.degree == d:
            done.append(h)
            continue
        u = Poly(ctx, [ctx.rand(rng) for _ in range(h.degree)])
        if u.degree < 1:
            work.append(h)  # constants never split; redraw
            continue
        if ctx.p != 2:
            e = (ctx.q**d - 1) // 2
            t = powmod(u, e, h) - Poly.one(ctx)
        else:
            acc = u % h
            cur = acc
            for _ in range(d * ctx.m - 1):
                cur = mulmod(cur, cur, h)
                acc = acc + cur
            t = acc
        if t.is_zero():
            work.append(h)
            continue
        g = gcd(t, h)
        if 0 < g.degree < h.degree:
            work.append(g)
            work.append(h // g)
        else:
            work.append(h)
    done.sort(key=Poly.sort_key)
    return done


def factor(f: Poly, oracle: OrderOracle | None = None, rng=None) -> Factorization:
    """Complete factorization of nonzero f into monic irreducibles.

    The reconstruction identity unit * prod(g^mult) == f is checked on every
    call and raises InvariantViolation if it fails.
    """
    if f.is_zero():
        raise errors.BadInput("cannot factor the zero polynomial")
    if oracle is None:
        oracle = OrderOracle(OracleConfig())
    if rng is None:
        rng = make_rng()
    ctx = f.ctx
    unit = f.lead()
    out: list[tuple[Poly, int]] = []
    for sq_part, mult in sff(f):
        for block, d in ddf(sq_part, oracle=oracle, rng=rng).parts:
            if block.degree == d:
                out.append((block, mult))
            else:
                for irr in edf(block, d, rng):
                    out.append((irr, mult))
    out.sort(key=lambda t: (t[0].degree, t[0].sort_key()))
    result = Factorization(unit, out)
    if result.product(ctx) != f:
        raise errors.InvariantViolation("factorization does not reconstruct input")
    return result
