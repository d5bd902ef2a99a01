"""Truncated Laurent series and the exceptional-cell local data."""

import random

import pytest

from charsums import make_field
from charsums.errors import HypothesisFailed, NoRootInField
from charsums.localdata import (
    LaurentTail,
    compose_poly,
    compute_local_data,
    from_poly,
    monomial,
    root_branches,
    series_nth_root,
    series_reversion,
    t_add,
    t_inv,
    t_mul,
    t_pow,
    t_sub,
    tail,
)
from charsums.polyring import Poly, random_poly

F7 = make_field(7, 1)
F11 = make_field(11, 1)
F13 = make_field(13, 1)


def test_tail_normalization_and_precision():
    a = tail(F7, 3, [0, 0, 2, 1])
    assert a.top_exp == 1 and a.coeffs == (2, 1) and a.o_exp == -1
    z = tail(F7, 3, [0, 0, 0])
    assert z.is_zero and z.o_exp == 0


def test_mul_precision_tracking():
    # both factors known to relative length 3
    a = tail(F7, 2, [1, 2, 3])
    b = tail(F7, 1, [4, 5, 6])
    c = t_mul(a, b)
    assert c.top_exp == 3
    # first unknown exponent: max(2 + (1-3), 1 + (2-3)) = 0
    assert c.o_exp == 0
    assert len(c.coeffs) == 3


def test_inverse_and_pow():
    a = tail(F7, 1, [3, 1, 4, 1])
    ia = t_inv(a)
    one = t_mul(a, ia)
    assert one.top_exp == 0 and one.coeffs[0] == 1
    assert all(c == 0 for c in one.coeffs[1:])
    sq = t_pow(a, 2)
    assert t_sub(sq, t_mul(a, a)).is_zero


def test_reversion_pure_linear():
    # u = c t  ->  v = t / c
    u = tail(F7, 1, [5, 0, 0, 0])
    v = series_reversion(u)
    assert v.coeffs[0] == F7.inv(5)
    assert all(c == 0 for c in v.coeffs[1:])


def test_reversion_composes_to_identity():
    rng = random.Random(3)
    for _ in range(30):
        n = 8
        coeffs = [rng.randrange(1, 13)] + [rng.randrange(13) for _ in range(n - 1)]
        u = tail(F13, 1, coeffs)
        v = series_reversion(u)
        # v(u(t)) = t within precision
        acc = LaurentTail(F13, v.o_exp, ())
        cur = from_poly(Poly.make(F13, (1,)), -n)
        # evaluate v at u by explicit powers
        upow_inv = t_inv(u)
        powers = [u]
        for _ in range(n - 1):
            powers.append(t_mul(powers[-1], upow_inv))
        for i, s in enumerate(v.coeffs):
            if s:
                acc = t_add(acc, LaurentTail(F13, powers[i].top_exp,
                                             tuple(F13.mul(s, c) for c in powers[i].coeffs)))
        diff = t_sub(acc, monomial(F13, 1, 1, acc.o_exp))
        assert diff.is_zero


def test_nth_root_of_monomial():
    # (d-1)-th root of t^(d-1) is t
    for d in (3, 4, 5):
        a = monomial(F11, 1, d - 1, d - 1 - 8)
        r = series_nth_root(a, d - 1, 1)
        assert r.top_exp == 1 and r.coeffs[0] == 1
        assert all(c == 0 for c in r.coeffs[1:])


def test_nth_root_branch_checked():
    a = monomial(F7, 3, 2, -6)
    with pytest.raises(NoRootInField):
        series_nth_root(a, 2, 1)  # 1^2 != 3
    with pytest.raises(NoRootInField):
        series_nth_root(monomial(F7, 1, 3, -6), 2, 1)  # odd leading exponent


def test_nth_root_characteristic_guard():
    from charsums.errors import BadCharacteristic

    a = monomial(F7, 1, 7, -3)
    with pytest.raises(BadCharacteristic):
        series_nth_root(a, 7, 1)


def test_local_data_hand_example():
    # g = x^2 over F_7: u = -2t, v = 3t, h = -t^2/4 = 5 t^2
    g = Poly.make(F7, (0, 0, 1))
    assert root_branches(g) == [5]
    ld = compute_local_data(g)
    assert ld.s0 == 3
    assert ld.h_coeffs == (0, 0, 5)
    assert ld.chosen_root == 5
    # s0^(d-1) = -1/(d a_d)
    assert F7.mul(F7.pow_(ld.s0, 1), F7.mul(2, 1)) == F7.neg(1)


def test_local_data_invariants_random():
    rng = random.Random(17)
    checked = 0
    for _ in range(200):
        ctx = rng.choice([F7, F11, F13])
        d = rng.randrange(2, min(ctx.p, 6))
        g = random_poly(ctx, d, rng)
        if not root_branches(g):
            continue
        ld = compute_local_data(g)
        dad = ctx.mul(d % ctx.p, g.lead)
        assert ctx.mul(ctx.pow_(ld.s0, d - 1), dad) == ctx.neg(1)
        assert ctx.mul(ld.h_coeffs[d - 1], dad) == ctx.neg(g.coeff(d - 1))
        checked += 1
    assert checked >= 50


def test_local_data_adm1_zero_gives_bdm1_zero():
    rng = random.Random(23)
    found = 0
    for _ in range(100):
        d = rng.choice([3, 4])
        if F13.p <= d:
            continue
        coeffs = [rng.randrange(13) for _ in range(d - 1)] + [0, rng.randrange(1, 13)]
        g = Poly.make(F13, coeffs)
        if not root_branches(g):
            continue
        ld = compute_local_data(g)
        assert ld.h_coeffs[d - 1] == 0
        found += 1
    assert found >= 10


def test_local_data_stability_in_precision():
    rng = random.Random(29)
    for _ in range(40):
        d = rng.choice([2, 3, 4])
        g = random_poly(F11, d, rng)
        if not root_branches(g):
            continue
        a = compute_local_data(g, precision=d + 6)
        b = compute_local_data(g, precision=d + 10)
        assert a.h_coeffs == b.h_coeffs and a.s0 == b.s0


def test_local_data_branch_consistency():
    # every branch satisfies the exact identities
    rng = random.Random(31)
    for _ in range(50):
        d = rng.choice([3, 5])
        g = random_poly(F13, d, rng)
        branches = root_branches(g)
        for br in branches:
            ld = compute_local_data(g, branch=br)
            dad = F13.mul(d % 13, g.lead)
            assert F13.mul(F13.pow_(ld.s0, d - 1), dad) == F13.neg(1)


def test_local_data_hypothesis_failures():
    g5 = random_poly(make_field(3, 1), 4, random.Random(0))
    with pytest.raises(HypothesisFailed):
        compute_local_data(g5)  # p = 3 <= d = 4
    # -d a_d without (d-1)-th root: d=3 over F_7 needs a square root of -3a_3
    for a3 in range(1, 7):
        g = Poly.make(F7, (1, 1, 0, a3))
        target = F7.neg(F7.mul(3, a3))
        has = any(F7.pow_(z, 2) == target for z in range(7))
        if not has:
            with pytest.raises(HypothesisFailed):
                compute_local_data(g)
            break


def test_precision_floor_enforced():
    g = Poly.make(F13, (1, 2, 3, 1))
    with pytest.raises(ValueError):
        compute_local_data(g, precision=3)


def test_compose_poly_matches_direct():
    g = Poly.make(F7, (2, 0, 3))
    w = tail(F7, 1, [4, 1, 2, 5, 0, 1])
    direct = t_add(
        t_mul(t_mul(w, w), monomial(F7, 3, 0, -10)),
        monomial(F7, 2, 0, -10),
    )
    got = compose_poly(g, w)
    assert t_sub(got, direct).is_zero
