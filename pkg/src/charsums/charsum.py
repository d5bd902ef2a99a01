"""Additive and multiplicative characters and the brute-force sum oracles.

All sums enumerate k_r elementwise in packed order, split into a fixed
number of index-range partitions.  Each partition is accumulated with
compensated (Kahan) summation and the partials are combined by a fixed
binary tree over partition indices, so serial runs and worker pools
produce bit-identical values.  Multiplicative characters are only ever
evaluated on the small base field k, after taking norms.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import CtxMismatch, FieldTooLarge, NotABasis, ZeroMu
from .ffield import ExtCtx, FieldCtx, FqElem, make_ext, make_field
from .polyring import Poly, evaluate

DEFAULT_CAP = 1 << 24
DOUBLE_CAP = 1 << 26
_PART_THRESHOLD = 1 << 14
_PARTS = 16


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdditiveChar:
    """psi_b(t) = exp(2*pi*i * lift(Tr_{k/F_p}(b*t)) / p); nontrivial iff b != 0."""

    ctx: FieldCtx
    b: int = 1

    @staticmethod
    def canonical(ctx: FieldCtx) -> "AdditiveChar":
        return AdditiveChar(ctx, 1)

    @property
    def is_trivial(self) -> bool:
        return self.b == 0

    def table(self) -> list[complex]:
        return _psi_table(self.ctx, self.b)

    def value(self, t) -> complex:
        t = t.val if isinstance(t, FqElem) else t
        return self.table()[t]


@dataclass(frozen=True)
class MultChar:
    """chi_j(generator^i) = exp(2*pi*i*j*i/(q-1)), extended by chi(0) = 0."""

    ctx: FieldCtx
    j: int

    @staticmethod
    def of_order(ctx: FieldCtx, m: int) -> "MultChar":
        if m < 1 or (ctx.q - 1) % m != 0:
            raise ValueError(f"no multiplicative character of order {m} on F_{ctx.q}")
        return MultChar(ctx, (ctx.q - 1) // m)

    @staticmethod
    def quadratic(ctx: FieldCtx) -> "MultChar":
        return MultChar.of_order(ctx, 2)

    @staticmethod
    def trivial(ctx: FieldCtx) -> "MultChar":
        return MultChar(ctx, 0)

    @property
    def order(self) -> int:
        m = self.ctx.q - 1
        if m == 0 or self.j % m == 0:
            return 1
        return m // math.gcd(self.j % m, m)

    @property
    def is_trivial(self) -> bool:
        return self.j % (self.ctx.q - 1) == 0

    def table(self) -> list[complex]:
        return _chi_table(self.ctx, self.j)

    def value(self, x) -> complex:
        x = x.val if isinstance(x, FqElem) else x
        return self.table()[x]


@lru_cache(maxsize=64)
def _unit_roots(n: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * (k / n)) for k in range(n))


def _psi_table(ctx: FieldCtx, b: int) -> list[complex]:
    cache = ctx.__dict__.setdefault("_psi_tables", {})
    tab = cache.get(b)
    if tab is None:
        if ctx.s > 1:
            ctx._abs_trace_tab  # prime the per-element trace table once
        zp = _unit_roots(ctx.p)
        tab = [zp[ctx.abs_trace(ctx.mul(b, t)) % ctx.p] for t in range(ctx.q)]
        cache[b] = tab
    return tab


def _chi_table(ctx: FieldCtx, j: int) -> list[complex]:
    cache = ctx.__dict__.setdefault("_chi_tables", {})
    tab = cache.get(j)
    if tab is None:
        m = ctx.q - 1
        exp, log = ctx._dlog
        roots = _unit_roots(m)
        tab = [0j] * ctx.q
        for x in range(1, ctx.q):
            tab[x] = roots[(j * log[x]) % m]
        cache[j] = tab
    return tab


# ---------------------------------------------------------------------------
# deterministic partitioned summation
# ---------------------------------------------------------------------------


def _part_ranges(n: int) -> list[tuple[int, int]]:
    total = 1 if n < _PART_THRESHOLD else _PARTS
    return [(i * n // total, (i + 1) * n // total) for i in range(total)]


def _tree_sum(values: list[complex]) -> complex:
    vals = list(values)
    if not vals:
        return 0j
    while len(vals) > 1:
        nxt = []
        for i in range(0, len(vals) - 1, 2):
            nxt.append(vals[i] + vals[i + 1])
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


_CTX_CACHE: dict[tuple, object] = {}


def _ctx_from_recipe(recipe):
    ctx = _CTX_CACHE.get(recipe)
    if ctx is None:
        if recipe[0] == "field":
            _, p, s, seed = recipe
            ctx = make_field(p, s, seed)
        else:
            _, p, s, base_seed, r, seed = recipe
            ctx = make_ext(make_field(p, s, base_seed), r, seed)
        _CTX_CACHE[recipe] = ctx
    return ctx


def _digits_advance(dig: list[int], q: int) -> None:
    for i in range(len(dig)):
        dig[i] += 1
        if dig[i] < q:
            return
        dig[i] = 0
    # full wraparound only happens after the final element of a range


def _inner_fn(ko, inner):
    """Exact evaluation plan for the summation variable.

    None: identity.  ("frobsub",): x^q - x.  ("pow", n): x^n.  All plans
    are exact field arithmetic, so any plan equals evaluating the
    corresponding composed polynomial.
    """
    if inner is None:
        return lambda x: x
    if inner[0] == "frobsub":
        efrob, esub = ko.efrob, ko.esub
        return lambda x: esub(efrob(x), x)
    if inner[0] == "pow":
        n = inner[1]
        epow = ko.epow
        return lambda x: epow(x, n)
    raise ValueError(f"unknown inner plan {inner!r}")


def _sum_part(task) -> tuple[float, float]:
    """Evaluate one partition of a character sum; top-level for pickling."""
    recipe, mode, payload, start, stop = task
    ext = _ctx_from_recipe(recipe)
    ko = ext._kops
    q = ext.base.q
    r = ext.r
    emul, eadd, etr = ko.emul, ko.eadd, ko.etr
    s = 0j
    comp = 0j

    if mode in ("S", "U", "FA", "FM"):
        coeffs, char_param, inner, mu = payload
        crev = tuple(tuple(c) for c in reversed(coeffs))
        lead, rest = crev[0], crev[1:]
        inner_f = _inner_fn(ko, inner)
        if mode in ("S", "FA"):
            tab = _psi_table(ext.base, char_param)
        else:
            tab = _chi_table(ext.base, char_param)
        enorm = ko.enorm
        zero = ko.zero
        need_fiber = mode in ("FA", "FM")
        dig = list(ext.unpack(start))
        for _ in range(stop - start):
            x = tuple(dig)
            if need_fiber and enorm(x) != mu:
                _digits_advance(dig, q)
                continue
            t = inner_f(x)
            acc = lead
            for c in rest:
                acc = eadd(emul(acc, t), c)
            if mode in ("S", "FA"):
                term = tab[etr(acc)]
            else:
                if acc == zero:
                    _digits_advance(dig, q)
                    continue
                term = tab[enorm(acc)]
            y = term - comp
            tt = s + y
            comp = (tt - s) - y
            s = tt
            _digits_advance(dig, q)
        return (s.real, s.imag)

    if mode == "D":
        coeffs, b = payload
        crev = tuple(tuple(c) for c in reversed(coeffs))
        lead, rest = crev[0], crev[1:]
        tab = _psi_table(ext.base, b)
        kadd, kmul = ko.kadd, ko.kmul
        dig = list(ext.unpack(start))
        for _ in range(stop - start):
            t = tuple(dig)
            acc = lead
            for c in rest:
                acc = eadd(emul(acc, t), c)
            a = etr(acc)
            tau = etr(t)
            for u in range(q):
                term = tab[kadd(a, kmul(u, tau))]
                y = term - comp
                tt = s + y
                comp = (tt - s) - y
                s = tt
            _digits_advance(dig, q)
        return (s.real, s.imag)

    raise ValueError(f"unknown mode {mode!r}")


def _run_sum(ext: ExtCtx, mode: str, payload, pool=None) -> complex:
    n = ext.size
    tasks = [
        (ext.recipe, mode, payload, start, stop) for start, stop in _part_ranges(n)
    ]
    if pool is not None and len(tasks) > 1:
        partials = list(pool.map(_sum_part, tasks))
    else:
        partials = [_sum_part(t) for t in tasks]
    return _tree_sum([complex(re, im) for re, im in partials])


def _ext_coeff_tuples(f: Poly, ext: ExtCtx) -> tuple:
    if f.ctx == ext:
        coeffs = f.coeffs
    elif f.ctx == ext.base:
        coeffs = tuple(ext.embed(c) for c in f.coeffs)
    else:
        raise CtxMismatch("polynomial not defined over the extension or its base")
    if not coeffs:
        coeffs = (0,)
    return tuple(ext.unpack(c) for c in coeffs)


# ---------------------------------------------------------------------------
# the oracles
# ---------------------------------------------------------------------------


def gauss_sum(chi: MultChar, psi: AdditiveChar) -> complex:
    """g(chi, psi) = -sum_{t in k} chi(t) psi(t), with chi(0) = 0."""
    if chi.ctx != psi.ctx:
        raise CtxMismatch("characters on different fields")
    ct = chi.table()
    pt = psi.table()
    s = 0j
    comp = 0j
    for t in range(1, chi.ctx.q):
        term = ct[t] * pt[t]
        y = term - comp
        tt = s + y
        comp = (tt - s) - y
        s = tt
    return -s


def sum_additive(
    f: Poly,
    psi: AdditiveChar,
    ext: ExtCtx,
    *,
    inner=None,
    cap: int = DEFAULT_CAP,
    pool=None,
) -> complex:
    """S_r = sum over x in k_r of psi(Tr_{k_r/k}(f(x))), by exact enumeration."""
    if psi.ctx != ext.base:
        raise CtxMismatch("character not on the base field of the extension")
    if ext.size > cap:
        raise FieldTooLarge(f"enumeration of {ext.size} elements exceeds cap {cap}")
    payload = (_ext_coeff_tuples(f, ext), psi.b, inner, None)
    return _run_sum(ext, "S", payload, pool=pool)


def sum_multiplicative(
    f: Poly,
    chi: MultChar,
    ext: ExtCtx,
    *,
    inner=None,
    cap: int = DEFAULT_CAP,
    pool=None,
) -> complex:
    """U_r = sum over x in k_r of chi(N_{k_r/k}(f(x))), with chi(0) = 0."""
    if chi.ctx != ext.base:
        raise CtxMismatch("character not on the base field of the extension")
    if ext.size > cap:
        raise FieldTooLarge(f"enumeration of {ext.size} elements exceeds cap {cap}")
    payload = (_ext_coeff_tuples(f, ext), chi.j, inner, None)
    return _run_sum(ext, "U", payload, pool=pool)


def fiber_sum_additive(
    g: Poly,
    psi: AdditiveChar,
    ext: ExtCtx,
    mu,
    *,
    cap: int = DEFAULT_CAP,
    pool=None,
) -> complex:
    """Sum of psi(Tr(g(x))) over the norm fiber N_{k_r/k}(x) = mu, mu != 0."""
    mu = mu.val if isinstance(mu, FqElem) else mu
    if mu == 0:
        raise ZeroMu("norm fibers are indexed by nonzero mu")
    if psi.ctx != ext.base:
        raise CtxMismatch("character not on the base field of the extension")
    if ext.size > cap:
        raise FieldTooLarge(f"enumeration of {ext.size} elements exceeds cap {cap}")
    payload = (_ext_coeff_tuples(g, ext), psi.b, None, mu)
    return _run_sum(ext, "FA", payload, pool=pool)


def fiber_sum_multiplicative(
    g: Poly,
    chi: MultChar,
    ext: ExtCtx,
    mu,
    *,
    cap: int = DEFAULT_CAP,
    pool=None,
) -> complex:
    """Sum of chi(N(g(x))) over the norm fiber N_{k_r/k}(x) = mu, mu != 0."""
    mu = mu.val if isinstance(mu, FqElem) else mu
    if mu == 0:
        raise ZeroMu("norm fibers are indexed by nonzero mu")
    if chi.ctx != ext.base:
        raise CtxMismatch("character not on the base field of the extension")
    if ext.size > cap:
        raise FieldTooLarge(f"enumeration of {ext.size} elements exceeds cap {cap}")
    payload = (_ext_coeff_tuples(g, ext), chi.j, None, mu)
    return _run_sum(ext, "FM", payload, pool=pool)


def double_sum_check(
    g: Poly,
    psi: AdditiveChar,
    ext: ExtCtx,
    *,
    cap: int = DOUBLE_CAP,
    pool=None,
) -> complex:
    """The double sum over u in k, t in k_r of psi(Tr(g(t) + u*t)).

    Must equal sum_additive of g(x^q - x) for translation-invariant input.
    """
    if psi.ctx != ext.base:
        raise CtxMismatch("character not on the base field of the extension")
    if ext.size * ext.base.q > cap:
        raise FieldTooLarge(
            f"double sum over {ext.size * ext.base.q} terms exceeds cap {cap}"
        )
    payload = (_ext_coeff_tuples(g, ext), psi.b)
    return _run_sum(ext, "D", payload, pool=pool)


def counting_identity_holds(ext: ExtCtx, *, cap: int = 10**4) -> bool:
    """#{x : x^q - x = t} equals q exactly when Tr(t) = 0, else 0 (exhaustive)."""
    n = ext.size
    if n > cap:
        raise FieldTooLarge(f"exhaustive count capped at {cap}, got {n}")
    counts = [0] * n
    for x in range(n):
        counts[ext.sub(ext.frobenius(x), x)] += 1
    q = ext.base.q
    for t in range(n):
        expected = q if ext.trace_to_base(t) == 0 else 0
        if counts[t] != expected:
            return False
    return True


def orthogonality_error(psi: AdditiveChar) -> float:
    """max over u in k of |sum_t psi(u*t) - q*[u == 0]|."""
    ctx = psi.ctx
    tab = psi.table()
    worst = 0.0
    for u in range(ctx.q):
        s = _tree_sum([tab[ctx.mul(u, t)] for t in range(ctx.q)])
        target = complex(ctx.q, 0) if u == 0 else 0j
        worst = max(worst, abs(s - target))
    return worst


def weil_descent_check(
    g: Poly,
    ext: ExtCtx,
    basis: list[FqElem],
    trials: int = 100,
    seed: int = 0,
) -> bool:
    """Pointwise Weil-descent identities for the norm form.

    On random tuples (x_1..x_r) in k^r checks that the product of the
    Galois-conjugate linear forms equals N(sum alpha_i x_i) and that the
    conjugate-sum of g evaluated on those forms equals Tr(g(sum alpha_i x_i)).
    """
    base = ext.base
    r = ext.r
    if len(basis) != r or any(b.ctx != ext for b in basis):
        raise NotABasis("need r elements of the extension")
    # rank over k of the digit matrix
    rows = [list(ext.unpack(b.val)) for b in basis]
    mat = [row[:] for row in rows]
    rank = 0
    for col in range(r):
        piv = next((i for i in range(rank, r) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = base.inv(mat[rank][col])
        mat[rank] = [base.mul(inv, v) for v in mat[rank]]
        for i in range(r):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [base.sub(a, base.mul(f, b)) for a, b in zip(mat[i], mat[rank])]
        rank += 1
    if rank < r:
        raise NotABasis("elements are linearly dependent over k")

    # conjugates of the basis and of the coefficients of g
    conj_basis = []
    for b in basis:
        cs = [b.val]
        for _ in range(r - 1):
            cs.append(ext.frobenius(cs[-1]))
        conj_basis.append(cs)
    g_ext = (
        g.coeffs
        if g.ctx == ext
        else tuple(ext.embed(c) for c in g.coeffs)
        if g.ctx == base
        else None
    )
    if g_ext is None:
        raise CtxMismatch("polynomial not defined over the extension or its base")
    conj_coeffs = [list(g_ext)]
    for _ in range(r - 1):
        conj_coeffs.append([ext.frobenius(c) for c in conj_coeffs[-1]])

    def eval_coeffs(coeffs, x):
        acc = 0
        for c in reversed(coeffs):
            acc = ext.add(ext.mul(acc, x), c)
        return acc

    rng = random.Random(seed)
    for _ in range(trials):
        xs = [rng.randrange(base.q) for _ in range(r)]
        z = 0
        for b, x in zip(basis, xs):
            z = ext.add(z, ext.mul(b.val, ext.embed(x)))
        # linear forms L_sigma = sum sigma(alpha_i) x_i
        forms = []
        for si in range(r):
            L = 0
            for i in range(r):
                L = ext.add(L, ext.mul(conj_basis[i][si], ext.embed(xs[i])))
            forms.append(L)
        prod = 1
        for L in forms:
            prod = ext.mul(prod, L)
        if prod != ext.embed(ext.norm_to_base(z)):
            return False
        tr_sum = 0
        for si in range(r):
            tr_sum = ext.add(tr_sum, eval_coeffs(conj_coeffs[si], forms[si]))
        if tr_sum != ext.embed(ext.trace_to_base(eval_coeffs(g_ext, z))):
            return False
    return True
