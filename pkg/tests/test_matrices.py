from fractions import Fraction

import numpy as np
import pytest
import sympy
from numpy.testing import assert_allclose

from models import CombinedSpec, HypothesisError, PowerError
from poset import divisor_poset, divisor_lattice, make_subset, full_subset, meet_index, join_index
from incidence import identity_function, function_from_values, reciprocal_function
from matrices import (
    meet_matrix,
    join_matrix,
    combined_matrix,
    g_matrix,
    check_existence,
    factor_ideal,
    factor_filter,
    factor_meet_closed,
    factor_join_closed,
    structure_meet,
    structure_join,
    block_split,
    hadamard_diag_identity_check,
    integer_segment,
    divisor_family_spec,
    reciprocal_spec,
    gcd_over_lcm_spec,
)
from spectra import eigen_symmetric
from utils import max_relative_error


def _random_divisor_cases(count, seed=7):
    """(S, f) su reticoli di divisori casuali; S preso in ordine crescente."""
    rng = np.random.default_rng(seed)
    cases = []
    for _i in range(count):
        p = divisor_lattice(int(rng.integers(1, 721)))
        size = len(p)
        keep = sorted(rng.choice(size, size=int(rng.integers(1, size + 1)), replace=False).tolist())
        cases.append(make_subset(p, [p.labels[i] for i in keep]))
    return cases


def test_gcd_matrix_on_small_divisor_set():
    p = divisor_poset([1, 2, 3])
    spec = CombinedSpec(1, 0, 0, 0, full_subset(p), identity_function(p))
    # il join di 2 e 3 non serve con β = 0
    assert_allclose(combined_matrix(spec), [[1, 1, 1], [1, 2, 1], [1, 1, 3]])


def test_lcm_matrix(gcd_set):
    s = gcd_set(3)
    f = identity_function(s.parent)
    assert_allclose(join_matrix(s, f, 1), [[1, 2, 3], [2, 2, 6], [3, 6, 3]])
    assert_allclose(meet_matrix(s, f, 2), [[1, 1, 1], [1, 4, 1], [1, 1, 9]])


def test_combined_matrix_generalizes_meet_and_join(gcd_set):
    s = gcd_set(4)
    f = identity_function(s.parent)
    assert_allclose(combined_matrix(CombinedSpec(1, 0, 0, 0, s, f)), meet_matrix(s, f, 1))
    assert_allclose(combined_matrix(CombinedSpec(0, 1, 0, 0, s, f)), join_matrix(s, f, 1))
    # gcd·mcm = i·j
    assert_allclose(combined_matrix(CombinedSpec(1, 1, 1, 1, s, f)), np.ones((4, 4)))


def test_combined_matrix_exact_and_asymmetric(gcd_set):
    s = gcd_set(3)
    f = identity_function(s.parent)
    m = combined_matrix(CombinedSpec(1, 0, 1, 0, s, f), exact=True)
    assert m[1, 2] == Fraction(1, 2)
    assert m[2, 1] == Fraction(1, 3)
    assert isinstance(m[0, 0], Fraction)


def test_existence_conditions(diamond):
    s = full_subset(diamond)
    f = function_from_values(diamond, {"0": 0, "a": 1, "b": 2, "1": 3})
    with pytest.raises(HypothesisError, match="γ = δ = 0"):
        check_existence(CombinedSpec(1, 0, 1, 1, s, f))
    sub = make_subset(diamond, ["a", "b"])
    with pytest.raises(HypothesisError, match="α ≥ 0"):
        check_existence(CombinedSpec(-1, 0, 0, 0, sub, f))
    check_existence(CombinedSpec(1, 1, 0, 0, s, f))
    with pytest.raises(PowerError):
        meet_matrix(sub, f, -1)


def test_g_matrix_is_ones_for_semimultiplicative(divisors_12):
    s = full_subset(divisors_12)
    assert_allclose(g_matrix(s, identity_function(divisors_12), 3), np.ones((6, 6)))


def test_ideal_factor_reconstruction_on_chains_and_diamond(diamond, chain_5):
    f = function_from_values(diamond, {"0": 1, "a": 2, "b": 3, "1": 7})
    s = full_subset(diamond)
    a = factor_ideal(s, f, 1)
    assert a.shape == (4, 4)
    assert max_relative_error(a @ a.T, meet_matrix(s, f, 1)) <= 1e-10

    s = make_subset(chain_5, ["2", "4"])
    g = identity_function(chain_5)
    a = factor_ideal(s, g, 2)
    assert a.shape == (2, 4)
    assert max_relative_error(a @ a.T, meet_matrix(s, g, 2)) <= 1e-10


def test_ideal_factor_reconstruction_on_random_divisor_lattices():
    for s in _random_divisor_cases(50):
        f = identity_function(s.parent)
        a = factor_ideal(s, f, 1)
        assert max_relative_error(a @ a.T, meet_matrix(s, f, 1)) <= 1e-10
        g = reciprocal_function(f)
        b = factor_filter(s, g, 1)
        assert max_relative_error(b @ b.T, join_matrix(s, g, 1)) <= 1e-10


def test_ideal_factor_rejects_negative_convolution(chain_5):
    f = function_from_values(chain_5, {"1": 5, "2": 4, "3": 3, "4": 2, "5": 1})
    with pytest.raises(HypothesisError, match="w=2"):
        factor_ideal(full_subset(chain_5), f, 1)
    # sul filtro una funzione decrescente va bene
    a = factor_filter(full_subset(chain_5), f, 1)
    assert max_relative_error(a @ a.T, join_matrix(full_subset(chain_5), f, 1)) <= 1e-10


def test_meet_closed_factor_gives_totients(gcd_set):
    s = gcd_set(8)
    f = identity_function(s.parent)
    e, d = factor_meet_closed(s, f, 1)
    assert_allclose(d, [sympy.totient(i) for i in range(1, 9)])
    assert_allclose(e @ np.diag(d) @ e.T, meet_matrix(s, f, 1))
    # e_ij = 1 sse x_j divide x_i
    assert e[5, 1] == 1 and e[5, 2] == 1 and e[5, 3] == 0


def test_meet_closed_factor_requires_closure(divisors_12):
    with pytest.raises(HypothesisError):
        factor_meet_closed(make_subset(divisors_12, ["4", "6"]), identity_function(divisors_12), 1)


def test_join_closed_factor(divisors_12):
    s = make_subset(divisors_12, ["2", "4", "6", "12"])
    f = reciprocal_function(identity_function(divisors_12))
    e, d = factor_join_closed(s, f, 1)
    assert max_relative_error(e.T @ np.diag(d) @ e, join_matrix(s, f, 1)) <= 1e-10
    with pytest.raises(HypothesisError):
        factor_join_closed(make_subset(divisors_12, ["4", "6"]), f, 1)


def test_structure_factors_reproduce_combined_matrix(divisors_12, diamond):
    s = full_subset(divisors_12)
    f = identity_function(divisors_12)
    for exps in ((2, 1, Fraction(1, 2), Fraction(1, 2)), (1, 2, 1, 0), (Fraction(1, 2), -1, 0, 1)):
        spec = CombinedSpec(*exps, s, f)
        target = combined_matrix(spec)
        assert max_relative_error(structure_meet(spec).product(), target) <= 1e-10
        assert max_relative_error(structure_join(spec).product(), target) <= 1e-10

    # funzione non semimoltiplicativa: G ≠ J ma il prodotto torna
    g = function_from_values(diamond, {"0": 1, "a": 2, "b": 3, "1": 5})
    spec = CombinedSpec(1, 1, 0, 0, full_subset(diamond), g)
    factors = structure_meet(spec)
    assert factors.g[1, 2] == pytest.approx(5 / 6)
    assert max_relative_error(factors.product(), combined_matrix(spec)) <= 1e-10


def test_block_split_sum_and_psd_remainder(divisors_12):
    s = make_subset(divisors_12, ["2", "3", "4"])
    spec = CombinedSpec(2, 1, Fraction(1, 2), Fraction(1, 2), s, identity_function(divisors_12))
    p_part, q_part = block_split(spec)
    assert p_part.shape == (3, 3)
    assert q_part.shape == (3, 1)
    rebuilt = p_part @ p_part.T + q_part @ q_part.T
    assert max_relative_error(rebuilt, combined_matrix(spec)) <= 1e-10
    assert eigen_symmetric(q_part @ q_part.T).minimum >= -1e-10


def test_block_split_requires_ones_g(diamond):
    g = function_from_values(diamond, {"0": 1, "a": 2, "b": 3, "1": 5})
    spec = CombinedSpec(2, 1, 0, 0, full_subset(diamond), g)
    with pytest.raises(HypothesisError, match="G = J"):
        block_split(spec)
    with pytest.raises(HypothesisError):
        block_split(CombinedSpec(2, 1, 1, 0, full_subset(diamond), g))


def test_hadamard_diag_identity():
    rng = np.random.default_rng(3)
    a, b = rng.standard_normal((2, 5, 5))
    c = np.diag(rng.standard_normal(5))
    d = np.diag(rng.standard_normal(5))
    assert hadamard_diag_identity_check(a, b, c, d)
    with pytest.raises(ValueError):
        hadamard_diag_identity_check(a, b, a, d)


def test_matrix_families():
    s = integer_segment(4)
    assert s.labels == ["1", "2", "3", "4"]
    assert s.parent.labels[-1] == "12"

    gcd = combined_matrix(divisor_family_spec(4, 1, 0))
    assert gcd[2, 3] == 1 and gcd[3, 1] == 2

    ratio = combined_matrix(gcd_over_lcm_spec(4, 1))
    assert ratio[1, 3] == pytest.approx(2 / 4)
    assert ratio[1, 2] == pytest.approx(1 / 6)

    f = identity_function(s.parent)
    up = combined_matrix(reciprocal_spec(s, f))
    down = combined_matrix(reciprocal_spec(s, f, join_over_meet=False))
    assert_allclose(up * down, np.ones((4, 4)))
    assert up[1, 2] == pytest.approx(6.0)


def _closure(s, bound_index):
    """Chiusura di S rispetto a meet o join, in ordine di estensione lineare."""
    p = s.parent
    members = set(s.members)
    grown = True
    while grown:
        new = {bound_index(p, i, j) for i in members for j in members} - members
        grown = bool(new)
        members |= new
    return make_subset(p, [p.labels[i] for i in sorted(members)])


def test_meet_closed_factor_on_random_divisor_lattices():
    for s in _random_divisor_cases(50):
        s = _closure(s, meet_index)
        f = identity_function(s.parent)
        for alpha in (1, 2, -1):
            e, d = factor_meet_closed(s, f, alpha)
            assert max_relative_error(e @ np.diag(d) @ e.T, meet_matrix(s, f, alpha)) <= 1e-10


def test_join_closed_factor_on_random_divisor_lattices():
    for s in _random_divisor_cases(50):
        s = _closure(s, join_index)
        f = reciprocal_function(identity_function(s.parent))
        for alpha in (1, 2, -1):
            e, d = factor_join_closed(s, f, alpha)
            assert max_relative_error(e.T @ np.diag(d) @ e, join_matrix(s, f, alpha)) <= 1e-10


def test_structure_factors_on_random_divisor_lattices():
    for s in _random_divisor_cases(50):
        f = identity_function(s.parent)
        for exps in ((2, 1, Fraction(1, 2), Fraction(1, 2)), (1, 2, 1, 0), (Fraction(1, 2), -1, 0, 1)):
            spec = CombinedSpec(*exps, s, f)
            target = combined_matrix(spec)
            assert max_relative_error(structure_meet(spec).product(), target) <= 1e-10
            assert max_relative_error(structure_join(spec).product(), target) <= 1e-10


def test_g_matrix_is_ones_for_random_semimultiplicative(diamond):
    rng = np.random.default_rng(5)
    for _i in range(20):
        m = int(rng.integers(1, 361))
        p = divisor_lattice(m)
        weights = {q: int(rng.integers(1, 9)) for q in sympy.primefactors(m)}
        values = {}
        for label in p.labels:
            value = 1
            for q, k in sympy.factorint(int(label)).items():
                value *= weights[q] ** k
            values[label] = value
        f = function_from_values(p, values)
        for exponent in (1, Fraction(1, 2), -2):
            assert_allclose(g_matrix(full_subset(p), f, exponent), np.ones((len(p), len(p))))
    f = function_from_values(diamond, {"0": 2, "a": 3, "b": 4, "1": 6})
    assert_allclose(g_matrix(full_subset(diamond), f, 3), np.ones((4, 4)))
