"""Polynomial arithmetic: kernels, division, composition, Frobenius maps."""

import pytest

from ffq import errors, field_new
from ffq.poly import (
    Endo,
    Poly,
    counters,
    frobenius,
    gcd,
    modcomp,
    mulmod,
    poly_pth_root,
    powmod,
    random_monic,
    random_poly,
    reset_counters,
    x_poly,
)
from ffq.rng import make_rng

from helpers import rand_irreducible, rand_squarefree

F2 = field_new(2)
F3 = field_new(3)
F5 = field_new(5)
F9 = field_new(3, 2, [1, 0, 1])


def ref_mul(a, b):
    """Reference product by direct convolution, no shortcuts."""
    ctx = a.ctx
    if a.is_zero() or b.is_zero():
        return Poly.zero(ctx)
    out = [ctx.zero] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ai in enumerate(a.coeffs):
        for j, bj in enumerate(b.coeffs):
            out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj))
    return Poly(ctx, out)


def ref_compose_mod(a, g, f):
    """Reference a(g) mod f by substitution, one power at a time."""
    ctx = f.ctx
    acc = Poly.zero(ctx)
    power = Poly.one(ctx)
    for c in a.coeffs:
        acc = (acc + power.scaled(c)) % f
        power = (power * g) % f
    return acc % f


def test_construction_drops_trailing_zeros():
    f = Poly(F5, [1, 2, 0, 0])
    assert f.coeffs == [1, 2]
    assert f.degree == 1
    z = Poly(F5, [0, 0])
    assert z.is_zero() and z.degree == float("-inf")


def test_multiplication_matches_reference_all_kernels():
    rng = make_rng(2024)
    # small prime (packed 16/32-bit lanes), large prime (big-int fallback),
    # and an extension field (generic kernel)
    big = (1 << 61) - 1
    fields = [F2, F3, F5, field_new(65537), field_new(big), F9, field_new(2, 3)]
    for ctx in fields:
        for da, db in [(0, 5), (3, 3), (7, 12), (15, 16), (31, 33), (64, 64), (100, 17)]:
            a = random_poly(ctx, da, rng)
            b = random_poly(ctx, db, rng)
            assert a * b == ref_mul(a, b), (ctx.p, ctx.m, da, db)


def test_multiplication_degree_and_commutativity():
    rng = make_rng(7)
    for ctx in [F3, F9]:
        for _ in range(30):
            a = random_monic(ctx, int(rng.integers(1, 40)), rng)
            b = random_monic(ctx, int(rng.integers(1, 40)), rng)
            c = a * b
            assert c.degree == a.degree + b.degree
            assert c == b * a


def test_divmod_matches_reference():
    rng = make_rng(11)
    big = (1 << 61) - 1
    for ctx in [F2, F5, field_new(big), F9]:
        for da, db in [(5, 2), (12, 7), (40, 8), (80, 33), (100, 40), (64, 63)]:
            a = random_poly(ctx, da, rng)
            b = random_monic(ctx, db, rng)
            q, r = divmod(a, b)
            assert q * b + r == a
            assert r.is_zero() or r.degree < b.degree


def test_divmod_fast_and_schoolbook_agree():
    rng = make_rng(13)
    for _ in range(20):
        a = random_poly(F5, int(rng.integers(64, 160)), rng)
        b = random_monic(F5, int(rng.integers(16, 40)), rng)
        q, r = a._divmod_fast(b)
        qs, rs = a._divmod_school(b)
        assert q == qs and r == rs


def test_division_by_non_monic_and_units():
    rng = make_rng(17)
    a = random_poly(F5, 10, rng)
    b = random_poly(F5, 4, rng).scaled(3)
    if b.lead() == 1:
        b = b.scaled(2)
    q, r = divmod(a, b)
    assert q * b + r == a and (r.is_zero() or r.degree < b.degree)
    c = Poly.const(F5, 2)
    q, r = divmod(a, c)
    assert r.is_zero() and q.scaled(2) == a
    with pytest.raises(ZeroDivisionError):
        divmod(a, Poly.zero(F5))


def test_gcd_properties():
    rng = make_rng(23)
    for ctx in [F2, F5, F9]:
        for _ in range(25):
            a = random_monic(ctx, int(rng.integers(1, 15)), rng)
            b = random_monic(ctx, int(rng.integers(1, 15)), rng)
            c = random_monic(ctx, int(rng.integers(1, 6)), rng)
            g = gcd(a * c, b * c)
            assert g.is_monic()
            assert (a * c) % g == Poly.zero(ctx)
            assert (b * c) % g == Poly.zero(ctx)
            assert g % c == Poly.zero(ctx)  # c divides both, so it divides the gcd
    f = random_monic(F5, 5, rng)
    assert gcd(f, Poly.zero(F5)) == f.monic()
    with pytest.raises(errors.BothZero):
        gcd(Poly.zero(F5), Poly.zero(F5))


def test_powmod_matches_repeated_multiplication():
    rng = make_rng(29)
    for ctx in [F3, F9]:
        f = random_monic(ctx, 9, rng)
        a = random_poly(ctx, 8, rng)
        cur = Poly.one(ctx)
        for e in range(40):
            assert powmod(a, e, f) == cur
            cur = (cur * a) % f
        assert mulmod(a, a, f) == (a * a) % f


def test_modcomp_matches_reference_both_paths():
    rng = make_rng(31)
    for ctx in [F2, F5, F9]:
        for df, da in [(6, 3), (9, 8), (20, 19), (40, 39), (33, 12)]:
            f = random_monic(ctx, df, rng)
            a = random_poly(ctx, da, rng)  # deg a <= 16 goes through Horner
            g = random_poly(ctx, df - 1, rng)
            assert modcomp(a, g, f) == ref_compose_mod(a, g, f), (ctx.p, df, da)


def test_modcomp_rejects_mismatched_inputs():
    rng = make_rng(37)
    f = random_monic(F5, 6, rng)
    a = random_poly(F5, 8, rng)
    with pytest.raises(errors.DegreeError):
        modcomp(a, random_poly(F5, 7, rng), f)  # g too large
    with pytest.raises(errors.FieldMismatch):
        modcomp(a, random_poly(F3, 4, rng), f)


def test_operation_counters_track_work():
    rng = make_rng(41)
    f = random_monic(F5, 30, rng)
    a = random_poly(F5, 29, rng)
    g = random_poly(F5, 29, rng)
    reset_counters()
    modcomp(a, g, f)
    stats = counters()
    assert stats["modcomp"] == 1
    assert stats["mul"] > 0
    reset_counters()
    assert counters() == {"mul": 0, "modcomp": 0}


def test_evaluation_and_derivative():
    # f = x^3 + 2x + 1 over F_5: f(2) = 8 + 4 + 1 = 13 = 3, f' = 3x^2 + 2
    f = Poly(F5, [1, 2, 0, 1])
    assert f(2) == 3
    assert f.deriv() == Poly(F5, [2, 0, 3])
    g = Poly(F9, [(1, 1), (0, 1)])  # (y+1) + y*x
    assert g((1, 0)) == (1, 2)


def test_frobenius_is_the_qth_power_map():
    rng = make_rng(43)
    for ctx in [F2, F3, F9]:
        f = rand_squarefree(ctx, 7, rng)
        sig = frobenius(f)
        a = random_poly(ctx, 6, rng)
        assert sig.apply(a) == powmod(a, ctx.q, f)
        # linearity over the base field plus multiplicativity
        b = random_poly(ctx, 6, rng)
        assert sig.apply((a + b) % f) == (sig.apply(a) + sig.apply(b)) % f
        assert sig.apply((a * b) % f) == (sig.apply(a) * sig.apply(b)) % f


def test_frobenius_fixed_small_examples():
    # x^3 mod (x^2 + 1) = -x = 2x over F_3
    f = Poly(F3, [1, 0, 1])
    assert frobenius(f).image == Poly(F3, [0, 2])
    # modulus of degree 1: the image space is constants only
    f1 = x_poly(F2)
    assert frobenius(f1).image == Poly.zero(F2)
    assert frobenius(f1).is_identity()


def test_frobenius_rejects_non_squarefree():
    with pytest.raises(errors.NotSquarefree):
        frobenius(Poly(F2, [0, 0, 1]))  # x^2
    with pytest.raises(errors.NotSquarefree):
        frobenius(Poly(F3, [1, 0, 0, 1]))  # x^3 + 1 = (x + 1)^3
    with pytest.raises(errors.BadInput):
        frobenius(Poly(F3, [2, 0, 2]))  # not monic


def test_endo_composition_is_power_addition():
    rng = make_rng(47)
    f = rand_squarefree(F3, 8, rng)
    sig = frobenius(f)
    for i in range(4):
        for j in range(4):
            assert sig.pow(i).compose(sig.pow(j)) == sig.pow(i + j)
    assert sig.pow(0).is_identity()
    ident = Endo(f, x_poly(F3) % f)
    assert ident.is_identity()


def test_endo_order_on_an_irreducible_block():
    rng = make_rng(53)
    for ctx, d in [(F2, 6), (F3, 4), (F9, 3)]:
        f = rand_irreducible(ctx, d, rng)
        sig = frobenius(f)
        assert not sig.pow(d - 1).is_identity() or d == 1
        assert sig.pow(d).is_identity()


def test_endo_restrict_to_divisor():
    rng = make_rng(59)
    g1 = rand_irreducible(F5, 3, rng)
    g2 = rand_irreducible(F5, 4, rng)
    f = g1 * g2
    sig = frobenius(f)
    r1 = sig.restrict(g1)
    assert r1.modulus == g1
    assert r1.image == sig.image % g1
    assert r1.pow(3).is_identity()


def test_pth_root_of_polynomial():
    rng = make_rng(61)
    for ctx in [F3, F9, F2]:
        for _ in range(10):
            a = random_monic(ctx, int(rng.integers(1, 8)), rng)
            ap = a
            for _ in range(ctx.p - 1):
                ap = ap * a
            assert poly_pth_root(ap) == a
