import math

import numpy as np
import pytest

from models import TriangularMask, SearchCapError, ChunkCheckpoint
from formats import read_ledger, read_checkpoint, write_checkpoint
from spectra import determinant, kappa
from constants import (
    MIN,
    MAX,
    check_search_size,
    enumerate_kn,
    gram_matrix,
    merge_checkpoints,
    search_extremum,
    search_cn,
    search_Cn,
    t_n,
    t_n_squared,
    t_n_squared_by_sum,
    cn_lower_bound_tn,
    cn_lower_bound_n0,
    y0_matrix,
    y0_mask,
    n0_matrix,
    n0_frobenius,
    n0_frobenius_closed_form,
    n0_last_row_pattern,
    verify_conjecture,
    cn_table,
    c_constant,
    C_constant,
)

# Valori attesi per n = 1..7
EXPECTED_CN = (1.0, 0.381966, 0.198062, 0.0870031, 0.0370683, 0.0148276, 0.00581700)
EXPECTED_TN_BOUND = (1.0, 0.377964, 0.0384615, 0.00170747, 4.16233e-5, 6.36185e-7, 6.64148e-9)
EXPECTED_N0_BOUND = (1.0, 0.377964, 0.0769231, 0.00674936, 5.40833e-4, 2.05280e-5, 8.16298e-7)


def test_mask_layout_is_row_major():
    mask = TriangularMask(n=3, bits=0b101)
    assert mask.to_matrix().tolist() == [[1, 0, 0], [1, 1, 0], [0, 1, 1]]
    assert TriangularMask.from_matrix(mask.to_matrix()) == mask
    with pytest.raises(ValueError):
        TriangularMask.from_matrix([[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        TriangularMask.from_matrix([[1, 0], [2, 1]])


def test_enumeration_size_and_caps(monkeypatch):
    assert sum(1 for _m in enumerate_kn(4)) == 2**6
    with pytest.raises(SearchCapError):
        enumerate_kn(9)
    with pytest.raises(SearchCapError):
        check_search_size(0)
    with pytest.raises(SearchCapError, match="--i-know"):
        check_search_size(8)
    check_search_size(8, allow_large=True)
    monkeypatch.setenv("LATMAT_MAX_N", "5")
    with pytest.raises(SearchCapError):
        check_search_size(6)
    # mai oltre il limite rigido
    monkeypatch.setenv("LATMAT_MAX_N", "20")
    with pytest.raises(SearchCapError):
        check_search_size(9, allow_large=True)


@pytest.mark.parametrize("n", range(1, 6))
def test_unit_determinant_over_kn(n):
    for mask in enumerate_kn(n):
        assert determinant(gram_matrix(mask)) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n", range(1, 7))
def test_search_cn_values(n):
    result = search_cn(n)
    assert result.value == pytest.approx(EXPECTED_CN[n - 1], abs=1e-5)
    assert result.matrices_scanned == 2 ** (n * (n - 1) // 2)
    assert kappa(gram_matrix(result.witness)) == pytest.approx(result.value, abs=1e-10)


@pytest.mark.slow
def test_search_c7():
    assert search_cn(7).value == pytest.approx(EXPECTED_CN[6], abs=1e-5)
    assert search_Cn(7).value <= t_n(7)


def test_upper_constant_below_tn():
    for n in range(1, 7):
        assert search_Cn(n).value <= t_n(n) * (1 + 1e-12)
    assert search_Cn(1).value == pytest.approx(1.0)
    # n = 2: massimo di λ_max([[1,1],[1,2]])
    assert search_Cn(2).value == pytest.approx((3 + math.sqrt(5)) / 2)


def test_witness_has_smallest_pattern_on_ties():
    result = search_extremum(2, MIN)
    # per n = 2 solo [[1,0],[1,1]] raggiunge il minimo
    assert result.witness.bits == 1
    # n = 1: un solo elemento, testimone vuoto
    assert search_extremum(1, MAX).witness.bits == 0


def test_merge_checkpoints_is_order_independent():
    a = ChunkCheckpoint(3, MIN, 0, 4, 4, 0.5, 3)
    b = ChunkCheckpoint(3, MIN, 4, 8, 4, 0.5, 5)
    c = ChunkCheckpoint(3, MIN, 0, 4, 4, 0.7, 1)
    assert merge_checkpoints([a, b, c], MIN) is a
    assert merge_checkpoints([c, b, a], MIN) is a
    assert merge_checkpoints([a, b, c], MAX) is c


def test_parallel_search_matches_serial(tmp_path):
    serial = search_extremum(5, MIN)
    parallel = search_extremum(5, MIN, jobs=2, checkpoint_dir=str(tmp_path))
    assert parallel.value == serial.value
    assert parallel.witness == serial.witness
    checkpoints = sorted(tmp_path.glob("kn5_min_*.ckpt"))
    assert len(checkpoints) == 256
    assert read_checkpoint(str(checkpoints[0])).complete


def test_resume_from_checkpoints(tmp_path):
    first = search_extremum(4, MAX, checkpoint_dir=str(tmp_path))
    again = search_extremum(4, MAX, checkpoint_dir=str(tmp_path))
    assert (again.value, again.witness) == (first.value, first.witness)

    # Un checkpoint manomesso viene riusato senza ricalcolo; il testimone lo smaschera
    path = tmp_path / "kn4_max_0_1.ckpt"
    assert path.exists()
    write_checkpoint(str(path), ChunkCheckpoint(4, MAX, 0, 1, 1, 1000.0, 0))
    with pytest.raises(ArithmeticError):
        search_extremum(4, MAX, checkpoint_dir=str(tmp_path))


def test_ledger_is_appended(tmp_path):
    ledger = tmp_path / "ledger.csv"
    search_cn(3, ledger_path=str(ledger))
    search_cn(3, ledger_path=str(ledger))
    rows = read_ledger(str(ledger))
    assert len(rows) == 2
    assert rows[0].n == 3 and rows[0].extremum == "min"
    assert rows[0].value == pytest.approx(EXPECTED_CN[2], abs=1e-5)
    assert ledger.read_text(encoding="utf-8").splitlines()[0] == "n,extremum,value,witness_bits,scanned"


def test_tn_forms_agree():
    for n in range(1, 51):
        assert t_n_squared(n) == t_n_squared_by_sum(n)
    assert t_n_squared(3) == 26
    assert t_n(3) == pytest.approx(math.sqrt(26))


@pytest.mark.parametrize("n", range(1, 8))
def test_closed_form_lower_bounds(n):
    assert float(f"{cn_lower_bound_tn(n):.6g}") == pytest.approx(EXPECTED_TN_BOUND[n - 1], rel=1e-5)
    assert float(f"{cn_lower_bound_n0(n):.6g}") == pytest.approx(EXPECTED_N0_BOUND[n - 1], rel=1e-5)
    assert cn_lower_bound_tn(n) <= cn_lower_bound_n0(n) + 1e-15


def test_y0_and_n0():
    assert y0_matrix(4).tolist() == [[1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 1]]
    assert y0_mask(4).bits == 45
    n0 = n0_matrix(4)
    assert np.array_equal(n0, n0.T)
    assert n0[-1].tolist() == n0_last_row_pattern(4) == [1, 1, 1, 3]
    assert n0_last_row_pattern(5) == [0, 1, 1, 1, 3]
    for n in range(2, 41):
        assert n0_frobenius(n) == pytest.approx(n0_frobenius_closed_form(n), rel=1e-12)
        assert n0_matrix(n)[-1].tolist() == n0_last_row_pattern(n)


@pytest.mark.parametrize("n", range(2, 7))
def test_conjecture_holds(n):
    check = verify_conjecture(n)
    assert check.holds
    assert abs(check.c_n - check.kappa_y0) <= 1e-9


@pytest.mark.slow
def test_conjecture_holds_n7():
    assert verify_conjecture(7).holds


def test_cn_table_rows():
    rows = cn_table(4)
    assert [row.n for row in rows] == [1, 2, 3, 4]
    for row in rows:
        assert row.tn_bound <= row.n0_bound + 1e-15 <= row.c_n + 1e-15


def test_constant_sources():
    assert c_constant(3, "exact").provenance == "exact"
    assert c_constant(3, "y0").value == pytest.approx(EXPECTED_CN[2], abs=1e-5)
    assert c_constant(3, "tn-bound").value == pytest.approx(cn_lower_bound_tn(3))
    assert c_constant(3, "n0-bound").value == pytest.approx(cn_lower_bound_n0(3))
    assert c_constant(3, "thm52") == c_constant(3, "tn-bound")
    assert c_constant(3, "thm53") == c_constant(3, "n0-bound")
    user = c_constant(3, "1/10")
    assert user.value == pytest.approx(0.1) and user.provenance == "user"
    assert C_constant(3, "tn").value == pytest.approx(math.sqrt(26))
    with pytest.raises(ValueError):
        c_constant(3, "bogus")
    with pytest.raises(ValueError):
        C_constant(3, "-2")


def _ordering_chain(n):
    c_n = search_cn(n).value
    C_n = search_Cn(n).value
    assert cn_lower_bound_tn(n) <= cn_lower_bound_n0(n) + 1e-15
    assert cn_lower_bound_n0(n) <= c_n + 1e-12
    assert c_n <= 1.0 + 1e-12
    assert 1.0 <= C_n + 1e-12
    assert C_n <= t_n(n) * (1 + 1e-12)


@pytest.mark.parametrize("n", range(1, 7))
def test_constants_ordering_chain(n):
    _ordering_chain(n)


@pytest.mark.slow
def test_constants_ordering_chain_n7():
    _ordering_chain(7)


def test_cn_strictly_decreasing():
    values = [search_cn(n).value for n in range(1, 7)]
    assert all(later < earlier for earlier, later in zip(values, values[1:]))
