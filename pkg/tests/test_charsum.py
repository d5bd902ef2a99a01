"""Characters, Gauss sums and the enumeration oracles."""

import cmath
import math
import random

import pytest

from charsums import FqElem, make_ext, make_field
from charsums.charsum import (
    AdditiveChar,
    MultChar,
    _part_ranges,
    counting_identity_holds,
    double_sum_check,
    fiber_sum_additive,
    fiber_sum_multiplicative,
    gauss_sum,
    orthogonality_error,
    sum_additive,
    sum_multiplicative,
    weil_descent_check,
)
from charsums.errors import FieldTooLarge, NotABasis, ZeroMu
from charsums.invariance import artin_schreier_poly
from charsums.polyring import Poly, compose, random_poly

F3 = make_field(3, 1)
F5 = make_field(5, 1)
F7 = make_field(7, 1)
F13 = make_field(13, 1)


def test_additive_char_is_multiplicative_on_sums():
    for ctx in (F7, make_field(3, 2, seed=0)):
        rng = random.Random(0)
        for b in range(1, ctx.q):
            psi = AdditiveChar(ctx, b)
            for _ in range(50):
                x, y = rng.randrange(ctx.q), rng.randrange(ctx.q)
                assert abs(psi.value(ctx.add(x, y)) - psi.value(x) * psi.value(y)) < 1e-12
    # trivial iff b = 0
    psi0 = AdditiveChar(F7, 0)
    assert psi0.is_trivial and all(psi0.value(t) == 1 for t in range(7))


def test_mult_char_properties():
    chi = MultChar.of_order(F13, 3)
    assert chi.order == 3
    rng = random.Random(1)
    for _ in range(300):
        x, y = rng.randrange(1, 13), rng.randrange(1, 13)
        assert abs(chi.value(F13.mul(x, y)) - chi.value(x) * chi.value(y)) < 1e-12
    assert chi.value(0) == 0
    # chi^m is trivial on units
    for x in range(1, 13):
        assert abs(chi.value(x) ** 3 - 1) < 1e-12
    with pytest.raises(ValueError):
        MultChar.of_order(F13, 5)
    # all character values have unit modulus (or zero)
    for x in range(13):
        v = abs(chi.value(x))
        assert v == 0 or abs(v - 1) < 1e-12


def test_gauss_sum_trivial_chi():
    psi = AdditiveChar.canonical(F7)
    assert gauss_sum(MultChar.trivial(F7), psi) == pytest.approx(1.0)


def test_gauss_sum_p3_hand_value():
    psi = AdditiveChar.canonical(F3)
    rho = MultChar.quadratic(F3)
    z = cmath.exp(2j * math.pi / 3)
    assert gauss_sum(rho, psi) == pytest.approx(-(z - z * z))
    assert abs(gauss_sum(rho, psi)) ** 2 == pytest.approx(3.0)


def test_gauss_sum_quadratic_identity_small_primes():
    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        ctx = make_field(p, 1)
        psi = AdditiveChar.canonical(ctx)
        rho = MultChar.quadratic(ctx)
        G = gauss_sum(rho, psi)
        assert G * G == pytest.approx(rho.value(ctx.neg(1)) * p, rel=1e-9)


def test_sum_additive_examples():
    psi = AdditiveChar.canonical(F7)
    e1 = make_ext(F7, 1)
    e2 = make_ext(F7, 2)
    # constant
    c = Poly.make(F7, (3,))
    assert sum_additive(c, psi, e2) == pytest.approx(49 * psi.value((2 * 3) % 7))
    # full character sum vanishes
    assert abs(sum_additive(Poly.make(F7, (0, 1)), psi, e1)) < 1e-9
    # g(x^q - x) at r = 1: x^q - x vanishes on k
    g = Poly.make(F7, (2, 1, 1))
    f = compose(g, artin_schreier_poly(F7, 7))
    assert sum_additive(f, psi, e1) == pytest.approx(7 * psi.value(g.coeff(0)))


def test_sum_multiplicative_examples():
    rho = MultChar.quadratic(F7)
    e1 = make_ext(F7, 1)
    e2 = make_ext(F7, 2)
    assert sum_multiplicative(Poly.make(F7, (1,)), rho, e2) == pytest.approx(49.0)
    assert abs(sum_multiplicative(Poly.make(F7, (0, 1)), rho, e1)) < 1e-9
    # 7-term brute force: sum rho(x^2+1) = -1
    assert sum_multiplicative(Poly.make(F7, (1, 0, 1)), rho, e1) == pytest.approx(-1.0)


def test_sum_caps():
    psi = AdditiveChar.canonical(F7)
    e2 = make_ext(F7, 2)
    with pytest.raises(FieldTooLarge):
        sum_additive(Poly.make(F7, (0, 1)), psi, e2, cap=10)


def test_fiber_sum_examples():
    psi = AdditiveChar.canonical(F13)
    e2 = make_ext(F13, 2)
    # constant g: fiber size (q^r-1)/(q-1)
    c = Poly.make(F13, (4,))
    fiber_size = (169 - 1) // 12
    assert fiber_sum_additive(c, psi, e2, 5) == pytest.approx(
        fiber_size * psi.value(e2.trace_to_base(e2.embed(4)))
    )
    # r = 1: the fiber N(x) = mu is just {mu}
    e1 = make_ext(F13, 1)
    g = Poly.make(F13, (1, 2, 1))
    for mu in (1, 5, 12):
        from charsums.polyring import evaluate

        want = psi.value(evaluate(g, FqElem(F13, mu)).val)
        assert fiber_sum_additive(g, psi, e1, mu) == pytest.approx(want)
    with pytest.raises(ZeroMu):
        fiber_sum_additive(g, psi, e2, 0)


def test_fiber_sum_mult_g_equals_x():
    chi = MultChar.of_order(F13, 3)
    e2 = make_ext(F13, 2)
    fiber_size = (169 - 1) // 12
    for mu in (1, 3, 9):
        got = fiber_sum_multiplicative(Poly.make(F13, (0, 1)), chi, e2, mu)
        assert got == pytest.approx(fiber_size * chi.value(mu))


def test_reassembly_additive_and_multiplicative():
    # eq-style reassembly: full sum = f(0)-term + (q-1)/e * sum over fibers
    psi = AdditiveChar.canonical(F13)
    chi = MultChar.quadratic(F13)
    e2 = make_ext(F13, 2)
    rng = random.Random(2)
    for e in (2, 3, 4):
        n = 12 // e
        for _ in range(3):
            g = random_poly(F13, rng.randrange(1, 4), rng)
            f = compose(g, Poly.make(F13, tuple([0] * n + [1])))
            mus = [mu for mu in range(1, 13) if F13.pow_(mu, e) == 1]
            assert len(mus) == e

            lhs = sum_additive(f, psi, e2)
            rhs = psi.value(e2.trace_to_base(e2.embed(g.coeff(0))))
            for mu in mus:
                rhs += (12 // e) * fiber_sum_additive(g, psi, e2, mu)
            assert abs(lhs - rhs) <= 1e-6 * math.sqrt(169)

            lhs_m = sum_multiplicative(f, chi, e2)
            rhs_m = chi.value(e2.norm_to_base(e2.embed(g.coeff(0))))
            for mu in mus:
                rhs_m += (12 // e) * fiber_sum_multiplicative(g, chi, e2, mu)
            assert abs(lhs_m - rhs_m) <= 1e-6 * math.sqrt(169)


def test_double_sum_matches_composed_sum():
    psi5 = AdditiveChar.canonical(F5)
    e2 = make_ext(F5, 2)
    rng = random.Random(7)
    for _ in range(5):
        g = random_poly(F5, 3, rng)
        f = compose(g, artin_schreier_poly(F5, 5))
        s = sum_additive(f, psi5, e2)
        d = double_sum_check(g, psi5, e2)
        assert abs(s - d) <= 1e-6 * math.sqrt(25)
    # orthogonality collapse: g = x, r = 1 gives q
    e1 = make_ext(F5, 1)
    assert double_sum_check(Poly.make(F5, (0, 1)), psi5, e1) == pytest.approx(5.0)


def test_inner_plan_is_bitwise_identical():
    psi = AdditiveChar.canonical(F7)
    e2 = make_ext(F7, 2)
    rng = random.Random(8)
    for _ in range(5):
        g = random_poly(F7, rng.randrange(1, 4), rng)
        f = compose(g, artin_schreier_poly(F7, 7))
        assert sum_additive(f, psi, e2) == sum_additive(g, psi, e2, inner=("frobsub",))
    n = 3
    for _ in range(3):
        g = random_poly(F7, 2, rng)
        f = compose(g, Poly.make(F7, tuple([0] * n + [1])))
        assert sum_additive(f, psi, e2) == sum_additive(g, psi, e2, inner=("pow", n))


def test_counting_identity_and_orthogonality():
    assert counting_identity_holds(make_ext(F5, 2))
    assert counting_identity_holds(make_ext(make_field(3, 2, seed=0), 2, seed=0))
    primes = [p for p in range(2, 101) if all(p % d for d in range(2, p))]
    for p in primes:
        ctx = make_field(p, 1)
        assert orthogonality_error(AdditiveChar.canonical(ctx)) < 1e-9 * p


def test_sums_match_naive_reference():
    # independent oracle: direct FqElem evaluation through the public API,
    # no kernel closures involved
    from charsums import FqElem, elements, norm, trace
    from charsums.polyring import evaluate

    for base, r in ((F7, 2), (make_field(3, 2, seed=0), 2), (F5, 3)):
        ext = make_ext(base, r, seed=0)
        psi = AdditiveChar.canonical(base)
        m = next(mm for mm in (2, 3, 4, 7, 8) if (base.q - 1) % mm == 0)
        chi = MultChar.of_order(base, m)
        rng = random.Random(base.q)
        g = random_poly(base, 3, rng)

        naive_add = 0j
        naive_mult = 0j
        for x in elements(ext):
            y = evaluate(g, x, ext=ext)
            naive_add += psi.value(trace(y, ext).val)
            naive_mult += chi.value(norm(y, ext).val)
        assert abs(sum_additive(g, psi, ext) - naive_add) < 1e-9 * ext.size
        assert abs(sum_multiplicative(g, chi, ext) - naive_mult) < 1e-9 * ext.size

        mu = 1 + rng.randrange(base.q - 1)
        naive_fiber = 0j
        for x in elements(ext):
            if norm(x, ext).val == mu:
                naive_fiber += psi.value(trace(evaluate(g, x, ext=ext), ext).val)
        assert abs(fiber_sum_additive(g, psi, ext, mu) - naive_fiber) < 1e-9 * ext.size


def test_weil_descent():
    e1 = make_ext(F5, 1)
    g = Poly.make(F5, (1, 2, 3))
    assert weil_descent_check(g, e1, [FqElem(e1, 1)], trials=20)
    e2 = make_ext(F5, 2)
    gamma = FqElem(e2, e2.generator_r)
    assert weil_descent_check(g, e2, [FqElem(e2, 1), gamma], trials=200)
    # coefficients in the extension are allowed
    g_ext = random_poly(e2, 3, random.Random(3))
    assert weil_descent_check(g_ext, e2, [FqElem(e2, 1), gamma], trials=100)
    with pytest.raises(NotABasis):
        weil_descent_check(g, e2, [FqElem(e2, 1), FqElem(e2, 1)])


def test_partition_structure_is_size_based():
    assert _part_ranges(100) == [(0, 100)]
    parts = _part_ranges(1 << 15)
    assert len(parts) == 16
    assert parts[0][0] == 0 and parts[-1][1] == 1 << 15
    for (a, b), (c, d) in zip(parts, parts[1:]):
        assert b == c


def test_pool_and_serial_agree_bitwise():
    from concurrent.futures import ProcessPoolExecutor

    f13 = make_field(13, 1)
    psi = AdditiveChar.canonical(f13)
    e4 = make_ext(f13, 4)
    g = Poly.make(f13, (1, 5, 0, 1))
    serial = sum_additive(g, psi, e4, inner=("frobsub",))
    with ProcessPoolExecutor(max_workers=4) as pool:
        parallel = sum_additive(g, psi, e4, inner=("frobsub",), pool=pool)
    assert serial == parallel
