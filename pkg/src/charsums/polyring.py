"""Dense univariate polynomial arithmetic over a field context.

Coefficients are stored ascending as packed field ints with trailing
zeros trimmed, so degree == len(coeffs) - 1 and the zero polynomial has
an empty coefficient tuple (degree -1).  Degrees stay small (a few
hundred at most) in every workload, so all algorithms are the quadratic
schoolbook ones.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .errors import (
    CtxMismatch,
    DegenerateDerivative,
    DivByZeroPoly,
    FieldTooLarge,
    ZeroPoly,
)
from .ffield import ExtCtx, FieldCtx, FqElem

ROOT_ENUM_CAP = 10**6


def _size(fld) -> int:
    return fld.q if isinstance(fld, FieldCtx) else fld.size


@dataclass(frozen=True)
class Poly:
    """Univariate polynomial; coeffs[i] is the packed coefficient of x^i."""

    ctx: FieldCtx | ExtCtx
    coeffs: tuple[int, ...]

    @staticmethod
    def make(ctx, coeffs) -> "Poly":
        vals = []
        for c in coeffs:
            if isinstance(c, FqElem):
                if c.ctx != ctx:
                    raise CtxMismatch("coefficient from another field")
                vals.append(c.val)
            elif isinstance(ctx, FieldCtx) and ctx.s == 1:
                vals.append(c % ctx.p)
            else:
                if not 0 <= c < _size(ctx):
                    raise ValueError("packed coefficient out of range")
                vals.append(c)
        while vals and vals[-1] == 0:
            vals.pop()
        return Poly(ctx, tuple(vals))

    @staticmethod
    def zero(ctx) -> "Poly":
        return Poly(ctx, ())

    @staticmethod
    def x(ctx) -> "Poly":
        return Poly(ctx, (0, 1))

    @staticmethod
    def monomial(ctx, c, e: int) -> "Poly":
        c = c.val if isinstance(c, FqElem) else c
        if c == 0:
            return Poly(ctx, ())
        return Poly(ctx, (0,) * e + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def lead(self) -> int:
        if not self.coeffs:
            raise ZeroPoly("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _check(self, other: "Poly"):
        if self.ctx != other.ctx:
            raise CtxMismatch("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        ops = self.ctx
        n = max(len(self.coeffs), len(other.coeffs))
        out = [ops.add(self.coeff(i), other.coeff(i)) for i in range(n)]
        while out and out[-1] == 0:
            out.pop()
        return Poly(self.ctx, tuple(out))

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        ops = self.ctx
        n = max(len(self.coeffs), len(other.coeffs))
        out = [ops.sub(self.coeff(i), other.coeff(i)) for i in range(n)]
        while out and out[-1] == 0:
            out.pop()
        return Poly(self.ctx, tuple(out))

    def __neg__(self) -> "Poly":
        ops = self.ctx
        return Poly(self.ctx, tuple(ops.neg(c) for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if self.is_zero or other.is_zero:
            return Poly(self.ctx, ())
        ops = self.ctx
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = ops.add(out[i + j], ops.mul(a, b))
        while out and out[-1] == 0:
            out.pop()
        return Poly(self.ctx, tuple(out))

    def scale(self, c) -> "Poly":
        c = c.val if isinstance(c, FqElem) else c
        if c == 0:
            return Poly(self.ctx, ())
        ops = self.ctx
        return Poly(self.ctx, tuple(ops.mul(c, a) for a in self.coeffs))

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ZeroPoly("cannot normalize the zero polynomial")
        return self.scale(self.ctx.inv(self.lead))

    def __repr__(self):
        return f"Poly({self.ctx!r}, {list(self.coeffs)})"


# ---------------------------------------------------------------------------
# evaluation / division / gcd
# ---------------------------------------------------------------------------


def evaluate(f: Poly, x: FqElem, ext: ExtCtx | None = None) -> FqElem:
    """Horner evaluation; coefficients embed into k_r when ext is given."""
    if ext is not None:
        if x.ctx != ext:
            raise CtxMismatch("point does not belong to the extension")
        if f.ctx == ext:
            coeffs = f.coeffs
        elif f.ctx == ext.base:
            coeffs = tuple(ext.embed(c) for c in f.coeffs)
        else:
            raise CtxMismatch("polynomial not defined over the extension or its base")
        fld = ext
    else:
        if x.ctx != f.ctx:
            raise CtxMismatch("point from another field")
        coeffs = f.coeffs
        fld = f.ctx
    acc = 0
    for c in reversed(coeffs):
        acc = fld.add(fld.mul(acc, x.val), c)
    return FqElem(fld, acc)


def divrem(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Division with remainder: f = g*quot + rem, deg rem < deg g."""
    f._check(g)
    if g.is_zero:
        raise DivByZeroPoly("division by the zero polynomial")
    ops = f.ctx
    rem = list(f.coeffs)
    dg = g.degree
    if f.degree < dg:
        return Poly(f.ctx, ()), f
    inv_lead = ops.inv(g.lead)
    quot = [0] * (f.degree - dg + 1)
    for i in range(f.degree - dg, -1, -1):
        c = rem[i + dg]
        if c:
            c = ops.mul(c, inv_lead)
            quot[i] = c
            for j, gz in enumerate(g.coeffs):
                if gz:
                    rem[i + j] = ops.sub(rem[i + j], ops.mul(c, gz))
    while rem and rem[-1] == 0:
        rem.pop()
    while quot and quot[-1] == 0:
        quot.pop()
    return Poly(f.ctx, tuple(quot)), Poly(f.ctx, tuple(rem))


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor."""
    a, b = f, g
    while not b.is_zero:
        a, b = b, divrem(a, b)[1]
    if a.is_zero:
        return a
    return a.monic()


def derivative(f: Poly) -> Poly:
    ops = f.ctx
    p = f.ctx.p if isinstance(f.ctx, FieldCtx) else f.ctx.base.p
    out = []
    for i in range(1, len(f.coeffs)):
        k = i % p  # integer scalars act through the prime subfield
        out.append(ops.mul(k, f.coeffs[i]) if k and f.coeffs[i] else 0)
    while out and out[-1] == 0:
        out.pop()
    return Poly(f.ctx, tuple(out))


def compose(f: Poly, g: Poly) -> Poly:
    """f(g(x)) by Horner over the polynomial ring."""
    f._check(g)
    acc = Poly(f.ctx, ())
    for c in reversed(f.coeffs):
        acc = acc * g + Poly(f.ctx, (c,) if c else ())
    return acc


# ---------------------------------------------------------------------------
# resultant and discriminant
# ---------------------------------------------------------------------------


def resultant(f: Poly, g: Poly) -> FqElem:
    """Res(f, g) by the Euclidean scheme; 0 iff f, g share a root in the closure."""
    f._check(g)
    if f.is_zero or g.is_zero:
        raise ZeroPoly("resultant needs nonzero polynomials")
    ops = f.ctx
    a, b = f, g
    res = 1
    while b.degree > 0:
        r = divrem(a, b)[1]
        # Res(a, b) = (-1)^(da*db) * lc(b)^(da - dr) * Res(b, r)
        if (a.degree * b.degree) & 1:
            res = ops.neg(res)
        dr = r.degree if not r.is_zero else -1
        if r.is_zero:
            return FqElem(f.ctx, 0)
        res = ops.mul(res, ops.pow_(b.lead, a.degree - dr))
        a, b = b, r
    # b is a nonzero constant: Res(a, c) = c^(deg a)
    res = ops.mul(res, ops.pow_(b.coeffs[0], a.degree))
    return FqElem(f.ctx, res)


def discriminant(g: Poly) -> FqElem:
    """(-1)^(d(d-1)/2) Res(g, g') / lc(g); zero iff g has a repeated root."""
    d = g.degree
    if d < 2:
        raise ValueError("discriminant needs degree >= 2")
    p = g.ctx.p if isinstance(g.ctx, FieldCtx) else g.ctx.base.p
    if d % p == 0:
        raise DegenerateDerivative("degree divisible by the characteristic")
    ops = g.ctx
    gp = derivative(g)
    if gp.is_zero:
        return FqElem(g.ctx, 0)
    res = resultant(g, gp).val
    if (d * (d - 1) // 2) & 1:
        res = ops.neg(res)
    return FqElem(g.ctx, ops.mul(res, ops.inv(g.lead)))


# ---------------------------------------------------------------------------
# shifts, parity, square-freeness, roots
# ---------------------------------------------------------------------------


def shift(g: Poly, c) -> Poly:
    """g(x + c) by iterated synthetic translation (exact binomial expansion)."""
    c = c.val if isinstance(c, FqElem) else c
    if c == 0 or g.is_zero:
        return g
    ops = g.ctx
    out = list(g.coeffs)
    n = len(out)
    # synthetic Taylor shift: repeatedly add c times the next-higher coefficient
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = ops.add(out[j], ops.mul(c, out[j + 1]))
    while out and out[-1] == 0:
        out.pop()
    return Poly(g.ctx, tuple(out))


class Parity(Enum):
    ODD = "odd"
    EVEN = "even"
    NEITHER = "neither"


def parity_check(g: Poly) -> Parity:
    """ODD iff every even-index coefficient (constant included) vanishes;
    EVEN iff every odd-index coefficient vanishes."""
    even_clear = all(c == 0 for i, c in enumerate(g.coeffs) if i % 2 == 0)
    odd_clear = all(c == 0 for i, c in enumerate(g.coeffs) if i % 2 == 1)
    if even_clear and not g.is_zero:
        return Parity.ODD
    if odd_clear:
        return Parity.EVEN
    return Parity.NEITHER


def is_squarefree(g: Poly) -> bool:
    """True iff g has no repeated roots over the algebraic closure."""
    if g.is_zero:
        raise ZeroPoly("square-freeness of the zero polynomial is undefined")
    if g.degree <= 0:
        return True
    gp = derivative(g)
    if gp.is_zero:
        return False  # p-th power
    return gcd(g, gp).degree == 0


def _pth_root_poly(f: Poly) -> Poly:
    """Inverse of x -> x^p on polynomials: exponents /p, coefficients^(q/p)."""
    ctx = f.ctx
    if isinstance(ctx, FieldCtx):
        p, q = ctx.p, ctx.q
    else:
        p, q = ctx.base.p, ctx.size
    out = []
    for i, c in enumerate(f.coeffs):
        if i % p == 0:
            out.append(ctx.pow_(c, q // p) if c else 0)
        else:
            assert c == 0, "not a p-th power"
    while out and out[-1] == 0:
        out.pop()
    return Poly(ctx, tuple(out))


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Characteristic-p square-free decomposition.

    Returns monic pairwise-coprime square-free parts with multiplicities:
    f = lc(f) * prod(part^mult).
    """
    if f.is_zero:
        raise ZeroPoly("cannot decompose the zero polynomial")
    parts: list[tuple[Poly, int]] = []

    def run(h: Poly, outer: int):
        if h.degree <= 0:
            return
        p = h.ctx.p if isinstance(h.ctx, FieldCtx) else h.ctx.base.p
        hp = derivative(h)
        if hp.is_zero:
            run(_pth_root_poly(h), outer * p)
            return
        c = gcd(h, hp)
        w = divrem(h, c)[0]
        i = 1
        while w.degree > 0:
            y = gcd(w, c)
            z = divrem(w, y)[0]
            if z.degree > 0:
                parts.append((z.monic(), i * outer))
            w = y
            c = divrem(c, y)[0]
            i += 1
        if c.degree > 0:
            # remaining part has all multiplicities divisible by p
            run(_pth_root_poly(c), outer * p)

    run(f.monic(), 1)
    return parts


@dataclass(frozen=True)
class RootStructure:
    roots: list[FqElem]
    multiplicities: list[int]
    splits_completely: bool


def root_structure(g: Poly, fld) -> RootStructure:
    """Exhaustive root search with multiplicities by repeated division."""
    if g.is_zero:
        raise ZeroPoly("roots of the zero polynomial")
    n = _size(fld)
    if n > ROOT_ENUM_CAP:
        raise FieldTooLarge(f"root enumeration capped at 10^6 elements, got {n}")
    if isinstance(fld, ExtCtx) and g.ctx == fld.base:
        work = Poly(fld, tuple(fld.embed(c) for c in g.coeffs))
    elif g.ctx == fld:
        work = g
    else:
        raise CtxMismatch("polynomial not defined over the requested field")
    roots: list[FqElem] = []
    mults: list[int] = []
    total = 0
    for v in range(n):
        x = FqElem(fld, v)
        if evaluate(work, x).val == 0:
            m = 0
            cur = work
            lin = Poly.make(fld, (fld.neg(v), 1))
            while True:
                quot, rem = divrem(cur, lin)
                if not rem.is_zero:
                    break
                cur = quot
                m += 1
            roots.append(x)
            mults.append(m)
            total += m
    return RootStructure(roots, mults, total == work.degree)


def roots_in(g: Poly, fld) -> list[FqElem]:
    """All roots of g in the given field, each listed once."""
    return root_structure(g, fld).roots


def split_power_of_x(g: Poly) -> tuple[int, Poly]:
    """Write g = x^a * g0 with g0(0) != 0; returns (a, g0)."""
    if g.is_zero:
        raise ZeroPoly("cannot normalize the zero polynomial")
    a = 0
    while g.coeffs[a] == 0:
        a += 1
    return a, Poly(g.ctx, g.coeffs[a:])


# ---------------------------------------------------------------------------
# interpolation (used by the resultant sequence over small fields)
# ---------------------------------------------------------------------------


def interpolate(ctx, points: list[int], values: list[int]) -> Poly:
    """Newton-form interpolation through distinct packed points."""
    n = len(points)
    assert len(values) == n
    # divided differences
    dd = list(values)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            num = ctx.sub(dd[i], dd[i - 1])
            den = ctx.sub(points[i], points[i - level])
            dd[i] = ctx.mul(num, ctx.inv(den))
    # expand Newton form
    poly = Poly(ctx, ())
    basis = Poly.make(ctx, (1,))
    for i in range(n):
        poly = poly + basis.scale(dd[i])
        basis = basis * Poly.make(ctx, (ctx.neg(points[i]), 1))
    return poly


# ---------------------------------------------------------------------------
# text format (configs and reports)
# ---------------------------------------------------------------------------


def poly_to_text(g: Poly) -> str:
    """Comma-separated a_0,...,a_d as decimal residues over prime fields, or
    bracketed coefficient vectors over extension fields."""
    ctx = g.ctx
    if isinstance(ctx, FieldCtx) and ctx.s == 1:
        return ",".join(str(c) for c in g.coeffs)
    return ",".join("[" + " ".join(str(d) for d in ctx.unpack(c)) + "]" for c in g.coeffs)


def poly_from_text(ctx, text: str) -> Poly:
    text = text.strip()
    if not text:
        return Poly(ctx, ())
    coeffs = []
    if "[" in text:
        import re

        for m in re.finditer(r"\[([^\]]*)\]", text):
            digits = [int(t) for t in m.group(1).split()]
            coeffs.append(ctx.pack(digits))
    else:
        for t in text.split(","):
            v = int(t)
            if isinstance(ctx, FieldCtx) and ctx.s == 1:
                coeffs.append(v % ctx.p)
            else:
                coeffs.append(v)
    return Poly.make(ctx, [FqElem(ctx, c) for c in coeffs])


def random_poly(ctx, d: int, rng: random.Random, monic: bool = False) -> Poly:
    n = _size(ctx)
    coeffs = [rng.randrange(n) for _ in range(d)]
    coeffs.append(1 if monic else rng.randrange(1, n))
    return Poly(ctx, tuple(coeffs))
