"""Dense univariate polynomial arithmetic over a finite field context.

Coefficient lists are ascending and never carry trailing zeros, so equal
polynomials have equal lists.  The zero polynomial has an empty list and
degree ``float("-inf")``.

Multiplication dispatches on operand size and field:

* prime fields, small operands: schoolbook on ints;
* prime fields, larger operands with coefficients that fit a 64-bit lane:
  Kronecker substitution, i.e. the coefficient vectors are packed into two
  big Python integers whose product (subquadratic via CPython's Karatsuba)
  is unpacked and reduced lane by lane with numpy;
* everything else above the threshold: explicit Karatsuba.

Division by large monic divisors over a prime field uses a cached Newton
series inverse of the reversed divisor, making repeated reduction modulo a
fixed polynomial quasi-linear after the first call.  Modular composition uses
Horner for small outer degree and Brent-Kung baby-step/giant-step above it.

Module-level counters track multiplications and modular compositions so
benchmarks can report work alongside wall time.
"""

from __future__ import annotations

from math import isqrt

import numpy as np

from . import errors
from .fields import FieldCtx

__all__ = [
    "Poly",
    "Endo",
    "x_poly",
    "gcd",
    "mulmod",
    "powmod",
    "modcomp",
    "frobenius",
    "poly_pth_root",
    "random_poly",
    "random_monic",
    "reset_counters",
    "counters",
]

SCHOOLBOOK_MAX = 16  # below this length, schoolbook multiplication wins
KARATSUBA_MIN = 32  # threshold for the explicit Karatsuba fallback
HORNER_MAX = 16  # modcomp switches to baby-step/giant-step at this degree
_FAST_DIV_MIN_QUOTIENT = 16
_FAST_DIV_MIN_DIVISOR = 32

_counters = {"mul": 0, "modcomp": 0}


def reset_counters() -> None:
    _counters["mul"] = 0
    _counters["modcomp"] = 0


def counters() -> dict[str, int]:
    return dict(_counters)


# ----------------------------------------------------------------------
# Multiplication kernels (internal, raw coefficient lists).
# ----------------------------------------------------------------------


def _school_int(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return [v % p for v in out]


_PACK_WIDTHS = ((16, "<u2"), (32, "<u4"), (64, "<u8"))


def _pack_width(nmin: int, p: int):
    # A packed lane must hold nmin products of two coefficients plus carries.
    need = (nmin * (p - 1) * (p - 1)).bit_length() + 1
    for w, dt in _PACK_WIDTHS:
        if need <= w:
            return w // 8, dt
    return None, None


def _mul_packed(a: list[int], b: list[int], p: int, wb: int, dt: str) -> list[int]:
    pa = int.from_bytes(np.array(a, dtype=dt).tobytes(), "little")
    pb = int.from_bytes(np.array(b, dtype=dt).tobytes(), "little")
    prod = pa * pb
    ln = len(a) + len(b) - 1
    buf = prod.to_bytes(ln * wb + wb, "little")
    lanes = np.frombuffer(buf[: ln * wb], dtype=dt)
    return (lanes.astype(np.int64) % p).tolist()


def _kara_raw(a: list[int], b: list[int]) -> list[int]:
    """Karatsuba on raw int lists; no modular reduction inside."""
    n = min(len(a), len(b))
    if n <= SCHOOLBOOK_MAX:
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out
    h = n // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _kara_raw(a0, b0)
    z2 = _kara_raw(a1, b1)
    sa = [x + y for x, y in _pad_zip(a0, a1)]
    sb = [x + y for x, y in _pad_zip(b0, b1)]
    z1 = _kara_raw(sa, sb)
    for i, v in enumerate(z0):
        z1[i] -= v
    for i, v in enumerate(z2):
        z1[i] -= v
    out = [0] * (len(a) + len(b) - 1)
    for i, v in enumerate(z0):
        out[i] += v
    for i, v in enumerate(z1):
        out[i + h] += v
    for i, v in enumerate(z2):
        out[i + 2 * h] += v
    return out


def _pad_zip(a: list, b: list):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)


def _mul_int(a: list[int], b: list[int], p: int) -> list[int]:
    nmin = min(len(a), len(b))
    if nmin <= SCHOOLBOOK_MAX:
        return _school_int(a, b, p)
    wb, dt = _pack_width(nmin, p)
    if wb is not None:
        return _mul_packed(a, b, p, wb, dt)
    return [v % p for v in _kara_raw(a, b)]


def _school_gen(a: list, b: list, ctx: FieldCtx) -> list:
    zero = ctx.zero
    add = ctx.add
    mul = ctx.mul
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai != zero:
            for j, bj in enumerate(b):
                if bj != zero:
                    out[i + j] = add(out[i + j], mul(ai, bj))
    return out


def _kara_gen(a: list, b: list, ctx: FieldCtx) -> list:
    n = min(len(a), len(b))
    if n < KARATSUBA_MIN:
        return _school_gen(a, b, ctx)
    h = n // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = _kara_gen(a0, b0, ctx)
    z2 = _kara_gen(a1, b1, ctx)
    zero = ctx.zero
    add, sub = ctx.add, ctx.sub
    sa = [add(x, y) for x, y in _pad_zip_gen(a0, a1, zero)]
    sb = [add(x, y) for x, y in _pad_zip_gen(b0, b1, zero)]
    z1 = _kara_gen(sa, sb, ctx)
    for i, v in enumerate(z0):
        z1[i] = sub(z1[i], v)
    for i, v in enumerate(z2):
        z1[i] = sub(z1[i], v)
    out = [zero] * (len(a) + len(b) - 1)
    for i, v in enumerate(z0):
        out[i] = add(out[i], v)
    for i, v in enumerate(z1):
        out[i + h] = add(out[i + h], v)
    for i, v in enumerate(z2):
        out[i + 2 * h] = add(out[i + 2 * h], v)
    return out


def _pad_zip_gen(a: list, b: list, zero):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else zero), (b[i] if i < len(b) else zero)


# ----------------------------------------------------------------------
# Newton series inversion for fast division (prime fields).
# ----------------------------------------------------------------------


def _mul_trunc_int(a: list[int], b: list[int], k: int, p: int) -> list[int]:
    return _mul_int(a[:k], b[:k], p)[:k]


def _series_inv(c: list[int], prec: int, p: int) -> list[int]:
    """Inverse of the power series ``c`` (c[0] == 1) modulo x^prec."""
    g = [1]
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        cg = _mul_trunc_int(c, g, k, p)
        # g <- g * (2 - c * g) mod x^k
        t = [(-v) % p for v in cg]
        t[0] = (t[0] + 2) % p
        g = _mul_trunc_int(g, t, k, p)
    return g[:prec]


class Poly:
    """Immutable-by-convention dense polynomial over a field context."""

    __slots__ = ("ctx", "coeffs", "_red")

    def __init__(self, ctx: FieldCtx, coeffs: list, normalize: bool = True):
        self.ctx = ctx
        if normalize:
            zero = ctx.zero
            coeffs = list(coeffs)
            while coeffs and coeffs[-1] == zero:
                coeffs.pop()
        self.coeffs = coeffs
        self._red = None  # cached (precision, series inverse) for division

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(ctx: FieldCtx) -> "Poly":
        return Poly(ctx, [], normalize=False)

    @staticmethod
    def one(ctx: FieldCtx) -> "Poly":
        return Poly(ctx, [ctx.one], normalize=False)

    @staticmethod
    def const(ctx: FieldCtx, c) -> "Poly":
        return Poly(ctx, [c])

    @staticmethod
    def from_ints(ctx: FieldCtx, ints: list[int]) -> "Poly":
        return Poly(ctx, [ctx.from_int(v) for v in ints])

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == self.ctx.one

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.ctx.one

    def lead(self):
        if not self.coeffs:
            raise errors.BadInput("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ctx.zero

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.ctx == other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ctx, tuple(self.coeffs)))

    def __bool__(self):
        return bool(self.coeffs)

    def sort_key(self):
        """Deterministic ordering key: degree, then coefficient indices."""
        idx = self.ctx.element_index
        return (len(self.coeffs), tuple(idx(c) for c in self.coeffs))

    def __repr__(self):
        from .textio import format_poly

        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        from .textio import format_poly

        return format_poly(self)

    # -- ring operations --------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.ctx != other.ctx:
            raise errors.FieldMismatch("operands from different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        ctx = self.ctx
        add = ctx.add
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = [add(x, y) for x, y in zip(a, b)]
        out.extend(a[len(b) :])
        return Poly(ctx, out)

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        ctx = self.ctx
        sub = ctx.sub
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        zero = ctx.zero
        out = [
            sub(a[i] if i < len(a) else zero, b[i] if i < len(b) else zero)
            for i in range(n)
        ]
        return Poly(ctx, out)

    def __neg__(self) -> "Poly":
        ctx = self.ctx
        return Poly(ctx, [ctx.neg(c) for c in self.coeffs], normalize=False)

    def scaled(self, c) -> "Poly":
        ctx = self.ctx
        if c == ctx.zero:
            return Poly.zero(ctx)
        mul = ctx.mul
        return Poly(ctx, [mul(v, c) for v in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        ctx = self.ctx
        if not self.coeffs or not other.coeffs:
            return Poly.zero(ctx)
        _counters["mul"] += 1
        if ctx.m == 1:
            out = _mul_int(self.coeffs, other.coeffs, ctx.p)
        else:
            nmin = min(len(self.coeffs), len(other.coeffs))
            if nmin < KARATSUBA_MIN:
                out = _school_gen(self.coeffs, other.coeffs, ctx)
            else:
                out = _kara_gen(self.coeffs, other.coeffs, ctx)
        return Poly(ctx, out)

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return Poly(self.ctx, [self.ctx.zero] * k + self.coeffs, normalize=False)

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise errors.BadInput("cannot normalize the zero polynomial")
        lead = self.coeffs[-1]
        if lead == self.ctx.one:
            return self
        return self.scaled(self.ctx.inv(lead))

    def deriv(self) -> "Poly":
        ctx = self.ctx
        out = []
        for i in range(1, len(self.coeffs)):
            k = ctx.from_int(i)
            out.append(ctx.mul(k, self.coeffs[i]))
        return Poly(ctx, out)

    def __call__(self, a):
        """Evaluate at a field element (Horner)."""
        ctx = self.ctx
        acc = ctx.zero
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, a), c)
        return acc

    # -- division ---------------------------------------------------------

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        ctx = self.ctx
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        la, lb = len(self.coeffs), len(other.coeffs)
        if la < lb:
            return Poly.zero(ctx), self
        if (
            ctx.m == 1
            and other.coeffs[-1] == 1
            and lb >= _FAST_DIV_MIN_DIVISOR
            and la - lb >= _FAST_DIV_MIN_QUOTIENT
        ):
            return self._divmod_fast(other)
        return self._divmod_school(other)

    def _divmod_school(self, other: "Poly") -> tuple["Poly", "Poly"]:
        ctx = self.ctx
        zero = ctx.zero
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        inv_lead = ctx.inv(b[-1])
        q = [zero] * (len(r) - db)
        sub, mul = ctx.sub, ctx.mul
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if c != zero:
                c = mul(c, inv_lead)
                q[i - db] = c
                for j in range(db + 1):
                    if b[j] != zero:
                        r[i - db + j] = sub(r[i - db + j], mul(c, b[j]))
        return Poly(ctx, q), Poly(ctx, r[:db])

    def _divmod_fast(self, other: "Poly") -> tuple["Poly", "Poly"]:
        ctx = self.ctx
        p = ctx.p
        a = self.coeffs
        b = other.coeffs
        k = len(a) - len(b) + 1
        cached = other._red
        if cached is None or cached[0] < k:
            rev_b = b[::-1]
            inv = _series_inv(rev_b, k, p)
            other._red = (k, inv)
        else:
            inv = cached[1][:k]
        rev_a = a[::-1]
        q_rev = _mul_trunc_int(rev_a, inv, k, p)
        q = q_rev[::-1]
        qb = _mul_int(q, b, p)
        lb = len(b) - 1
        r = [(a[i] - qb[i]) % p for i in range(lb)]
        return Poly(ctx, q), Poly(ctx, r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]


def x_poly(ctx: FieldCtx) -> Poly:
    return Poly(ctx, [ctx.zero, ctx.one], normalize=False)


def random_poly(ctx: FieldCtx, degree: int, rng) -> Poly:
    """Uniform polynomial of degree exactly ``degree``."""
    if degree < 0:
        return Poly.zero(ctx)
    coeffs = [ctx.rand(rng) for _ in range(degree)]
    while True:
        lead = ctx.rand(rng)
        if lead != ctx.zero:
            break
    coeffs.append(lead)
    return Poly(ctx, coeffs, normalize=False)


def random_monic(ctx: FieldCtx, degree: int, rng) -> Poly:
    coeffs = [ctx.rand(rng) for _ in range(degree)] + [ctx.one]
    return Poly(ctx, coeffs, normalize=False)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    if a.ctx != b.ctx:
        raise errors.FieldMismatch("operands from different fields")
    if a.is_zero() and b.is_zero():
        raise errors.BothZero("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def mulmod(a: Poly, b: Poly, f: Poly) -> Poly:
    return (a * b) % f


def powmod(a: Poly, e: int, f: Poly) -> Poly:
    """a^e mod f by square-and-multiply; e >= 0."""
    if e < 0:
        raise errors.BadInput("negative exponent")
    ctx = a.ctx
    result = Poly.one(ctx) % f
    cur = a % f
    while e:
        if e & 1:
            result = (result * cur) % f
        e >>= 1
        if e:
            cur = (cur * cur) % f
    return result


# ----------------------------------------------------------------------
# Modular composition.
# ----------------------------------------------------------------------


def modcomp(a: Poly, g: Poly, f: Poly) -> Poly:
    """a(g) mod f.

    ``f`` must be monic of degree >= 1 and ``deg g < deg f``.  Horner for
    small ``deg a``, otherwise Brent-Kung: about 2*sqrt(deg a) modular
    multiplications, with the inner linear combinations done as packed
    big-integer dot products over prime fields.
    """
    if not f.is_monic() or len(f.coeffs) < 2:
        raise errors.BadInput("composition modulus must be monic of degree >= 1")
    if a.ctx != g.ctx or a.ctx != f.ctx:
        raise errors.FieldMismatch("operands from different fields")
    if not g.is_zero() and len(g.coeffs) >= len(f.coeffs):
        raise errors.DegreeError("inner polynomial must be reduced mod f")
    _counters["modcomp"] += 1
    ctx = a.ctx
    coeffs = a.coeffs
    if len(coeffs) == 0:
        return Poly.zero(ctx)
    if len(coeffs) <= HORNER_MAX:
        acc = Poly.zero(ctx)
        for c in reversed(coeffs):
            acc = (acc * g) % f
            if c != ctx.zero:
                acc = acc + Poly.const(ctx, c)
        return acc
    # Baby steps: G[j] = g^j mod f for j in [0, t].
    t = isqrt(len(coeffs) - 1) + 1
    G = [Poly.one(ctx)]
    for _ in range(t):
        G.append((G[-1] * g) % f)
    nblocks = (len(coeffs) + t - 1) // t
    if ctx.m == 1:
        blocks = _bsgs_blocks_packed(coeffs, G, t, nblocks, f, ctx.p)
    else:
        blocks = _bsgs_blocks_generic(coeffs, G, t, nblocks, ctx)
    giant = G[t]
    acc = blocks[-1]
    for i in range(nblocks - 2, -1, -1):
        acc = (acc * giant) % f
        acc = acc + blocks[i]
    return acc % f


def _bsgs_blocks_packed(coeffs, G, t, nblocks, f, p):
    """Block linear combinations sum_j c[it+j] * G[j] via packed integers."""
    n = len(f.coeffs) - 1
    wb, dt = _pack_width(t, p)
    ctx = f.ctx
    if wb is None:
        return _bsgs_blocks_generic(coeffs, G, t, nblocks, ctx)
    packed = []
    for j in range(t):
        gj = G[j].coeffs
        packed.append(int.from_bytes(np.array(gj, dtype=dt).tobytes(), "little"))
    out = []
    for i in range(nblocks):
        chunk = coeffs[i * t : (i + 1) * t]
        acc = 0
        for j, c in enumerate(chunk):
            if c:
                acc += c * packed[j]
        if acc == 0:
            out.append(Poly.zero(ctx))
            continue
        buf = acc.to_bytes(n * wb + wb, "little")
        lanes = np.frombuffer(buf[: n * wb], dtype=dt)
        out.append(Poly(ctx, (lanes.astype(np.int64) % p).tolist()))
    return out


def _bsgs_blocks_generic(coeffs, G, t, nblocks, ctx):
    zero = ctx.zero
    out = []
    for i in range(nblocks):
        chunk = coeffs[i * t : (i + 1) * t]
        acc = Poly.zero(ctx)
        for j, c in enumerate(chunk):
            if c != zero:
                acc = acc + G[j].scaled(c)
        out.append(acc)
    return out


# ----------------------------------------------------------------------
# Ring endomorphisms of F_q[x]/(f) given by x -> image.
# ----------------------------------------------------------------------


class Endo:
    """Endomorphism of F_q[x]/(f) determined by the image of x."""

    __slots__ = ("modulus", "image")

    def __init__(self, modulus: Poly, image: Poly):
        if not modulus.is_monic() or len(modulus.coeffs) < 2:
            raise errors.BadInput("modulus must be monic of degree >= 1")
        if not image.is_zero() and len(image.coeffs) >= len(modulus.coeffs):
            raise errors.DegreeError("image must be reduced mod the modulus")
        self.modulus = modulus
        self.image = image

    def __eq__(self, other):
        return (
            isinstance(other, Endo)
            and self.modulus == other.modulus
            and self.image == other.image
        )

    def __repr__(self):
        return f"Endo(x -> {self.image} mod {self.modulus})"

    def identity_image(self) -> Poly:
        return x_poly(self.modulus.ctx) % self.modulus

    def is_identity(self) -> bool:
        return self.image == self.identity_image()

    def apply(self, a: Poly) -> Poly:
        """Image of the residue class ``a`` (requires deg a < deg modulus)."""
        if not a.is_zero() and len(a.coeffs) >= len(self.modulus.coeffs):
            raise errors.DegreeError("argument must be reduced mod the modulus")
        return modcomp(a, self.image, self.modulus)

    def compose(self, other: "Endo") -> "Endo":
        """self after other: x -> self(other(x))."""
        if self.modulus != other.modulus:
            raise errors.FieldMismatch("endomorphisms of different rings")
        img = modcomp(other.image, self.image, self.modulus)
        return Endo(self.modulus, img)

    def pow(self, e: int) -> "Endo":
        """e-fold self-composition, e >= 0; e = 0 gives the identity."""
        if e < 0:
            raise errors.BadInput("negative composition power")
        if e == 0:
            return Endo(self.modulus, self.identity_image())
        result = self
        for bit in bin(e)[3:]:
            result = result.compose(result)
            if bit == "1":
                result = result.compose(self)
        return result

    def restrict(self, new_modulus: Poly) -> "Endo":
        """The same map on F_q[x]/(g) for a divisor g of the modulus."""
        return Endo(new_modulus, self.image % new_modulus)


def frobenius(f: Poly, check: bool = True) -> Endo:
    """The q-power Frobenius x -> x^q on F_q[x]/(f).

    With ``check`` the modulus is verified monic and squarefree (the engine
    requires both); pass ``check=False`` to skip the squarefree gcd.
    """
    if not f.is_monic() or len(f.coeffs) < 2:
        raise errors.BadInput("modulus must be monic of degree >= 1")
    if check:
        d = f.deriv()
        if d.is_zero() or gcd(f, d).degree > 0:
            raise errors.NotSquarefree("modulus must be squarefree")
    img = powmod(x_poly(f.ctx), f.ctx.q, f)
    return Endo(f, img)


def poly_pth_root(f: Poly) -> Poly:
    """Inverse of the coefficientwise/exponent p-power map.

    Requires every exponent with a nonzero coefficient to be a multiple of p,
    which is exactly the shape of a polynomial with zero derivative in
    characteristic p.
    """
    ctx = f.ctx
    p = ctx.p
    out = []
    for i, c in enumerate(f.coeffs):
        if i % p == 0:
            out.append(ctx.pth_root(c))
        elif c != ctx.zero:
            raise errors.BadInput("polynomial is not a p-th power")
    return Poly(ctx, out)
