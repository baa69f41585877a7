from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from models import PowerError, PosetError
from poset import divisor_poset, chain_poset, dual_poset, make_subset, full_subset, interval
from matrices import integer_segment
from incidence import (
    identity_function,
    constant_function,
    function_from_values,
    reciprocal_function,
    restrict_function,
    jordan_totient,
    raw_power,
    power_value,
    down_convolution,
    up_convolution,
    semimultiplicative_violation,
    is_semimultiplicative,
)


def test_raw_power_conventions():
    assert raw_power(0, 0) == 1
    assert raw_power(0, 2) == 0
    assert raw_power(2, -1) == Fraction(1, 2)
    assert raw_power(Fraction(2, 3), 2) == Fraction(4, 9)
    assert raw_power(-2, 3) == -8
    assert raw_power(4, Fraction(1, 2)) == pytest.approx(2.0)
    with pytest.raises(PowerError):
        raw_power(0, -1)
    with pytest.raises(PowerError):
        raw_power(-4, Fraction(1, 2))
    with pytest.raises(PowerError):
        raw_power(10.0, 1000)


def test_stock_functions(diamond, divisors_12):
    n = identity_function(divisors_12)
    assert n.value_at("6") == 6
    with pytest.raises(PosetError):
        identity_function(diamond)
    c = constant_function(diamond, 3)
    assert c.value_at("a") == 3
    r = reciprocal_function(n)
    assert r.value_at("4") == Fraction(1, 4)
    f = function_from_values(diamond, {"0": 1, "a": 2})
    with pytest.raises(PowerError):
        power_value(f, "b", 1)


def test_restrict_function(divisors_12):
    f = identity_function(divisors_12)
    q = interval(divisors_12, "2", "12")
    g = restrict_function(f, q)
    assert sorted(g.values) == ["12", "2", "4", "6"]
    assert g.value_at("6") == 6


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=2000), st.integers(min_value=1, max_value=4))
def test_jordan_totient_is_multiplicative_formula(m, k):
    if k == 1:
        assert jordan_totient(m, 1) == sympy.totient(m)
    # Σ_{d|m} J_k(d) = m^k
    assert sum(jordan_totient(d, k) for d in sympy.divisors(m)) == m**k


def test_jordan_totient_real_exponent():
    # J_{-1}(6) = 6^{-1}(1−2)(1−3)
    assert jordan_totient(6, -1) == pytest.approx((1 / 6) * (1 - 2) * (1 - 3))
    assert jordan_totient(1, Fraction(1, 2)) == pytest.approx(1.0)


def test_down_convolution_of_identity_is_totient(divisors_12):
    s = full_subset(divisors_12)
    conv = down_convolution(identity_function(divisors_12), 1, s)
    for label, value in conv.entries.items():
        assert value == sympy.totient(int(label))
    assert conv.exact is not None


def test_down_convolution_of_power_is_jordan(divisors_12):
    conv = down_convolution(identity_function(divisors_12), 2, make_subset(divisors_12, ["12"]))
    assert conv.labels[0] == "12"
    for label, value in conv.entries.items():
        assert value == jordan_totient(int(label), 2)


def test_up_convolution_of_reciprocal(divisors_12):
    # (μ ∗ (1/N)_u)(w, 12) = (1/w) Π_{p | 12/w} (1 − 1/p)
    f = reciprocal_function(identity_function(divisors_12))
    conv = up_convolution(f, 1, make_subset(divisors_12, ["2", "3"]))
    assert conv.labels == ["2", "3", "4", "6", "12"]
    for label, exact in zip(conv.labels, conv.exact):
        w = int(label)
        expected = Fraction(1, w)
        for p in sympy.primefactors(12 // w):
            expected *= 1 - Fraction(1, p)
        assert exact == expected


def test_float_path_when_exponent_is_not_integral(divisors_12):
    s = full_subset(divisors_12)
    conv = down_convolution(identity_function(divisors_12), Fraction(1, 2), s)
    assert conv.exact is None
    assert conv.entries["1"] == pytest.approx(1.0)
    assert conv.entries["2"] == pytest.approx(2**0.5 - 1)


def test_semimultiplicativity(divisors_12, diamond):
    assert is_semimultiplicative(identity_function(divisors_12), divisors_12)
    f = function_from_values(diamond, {"0": 1, "a": 2, "b": 3, "1": 5})
    assert semimultiplicative_violation(f, diamond) == ("a", "b")
    with pytest.raises(PosetError):
        semimultiplicative_violation(identity_function(divisor_poset([1, 2, 3])), divisor_poset([1, 2, 3]))


def test_mobius_inversion_round_trip(diamond, divisors_12):
    cases = [
        function_from_values(diamond, {"0": 2, "a": 3, "b": 5, "1": 11}),
        function_from_values(divisors_12, {"1": 4, "2": -1, "3": 7, "4": 2, "6": 9, "12": 3}),
    ]
    for f in cases:
        p = f.parent
        s = full_subset(p)
        down_conv = down_convolution(f, 1, s)
        up_conv = up_convolution(f, 1, s)
        down = dict(zip(down_conv.labels, down_conv.exact))
        up = dict(zip(up_conv.labels, up_conv.exact))
        for w, label in enumerate(p.labels):
            below = [p.labels[z] for z in range(len(p)) if p.leq[z, w]]
            above = [p.labels[z] for z in range(len(p)) if p.leq[w, z]]
            assert sum(down[x] for x in below) == f.value_at(label)
            assert sum(up[x] for x in above) == f.value_at(label)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_jordan_sum_over_divisors(alpha):
    for k in range(1, 201):
        assert sum(jordan_totient(d, alpha) for d in sympy.divisors(k)) == k**alpha
    # su S = {1..12} la convoluzione verso il basso di N^α dà J_α
    s = integer_segment(12)
    conv = down_convolution(identity_function(s.parent), alpha, s)
    assert conv.labels[:12] == [str(i) for i in range(1, 13)]
    entries = dict(zip(conv.labels, conv.exact))
    for k in range(1, 13):
        assert entries[str(k)] == jordan_totient(k, alpha)
        assert sum(entries[str(d)] for d in sympy.divisors(k)) == k**alpha


def test_up_convolution_is_down_convolution_on_dual(diamond, divisors_12):
    cases = [
        (function_from_values(diamond, {"0": 2, "a": 3, "b": 5, "1": 11}), ["a"]),
        (identity_function(divisors_12), ["2", "3"]),
    ]
    for f, members in cases:
        p = f.parent
        q = dual_poset(p)
        g = function_from_values(q, f.values)
        for alpha in (1, 2, -1):
            up = up_convolution(f, alpha, make_subset(p, members))
            down = down_convolution(g, alpha, make_subset(q, members))
            assert up.direction == "up" and down.direction == "down"
            assert dict(zip(up.labels, up.exact)) == dict(zip(down.labels, down.exact))


def test_up_convolution_on_chain():
    p = chain_poset(3)
    conv = up_convolution(identity_function(p), 1, full_subset(p))
    # μ(2,2)·2 + μ(2,3)·3
    assert conv.entry("2") == -1
    assert conv.entries == {"1": -1, "2": -1, "3": 3}
