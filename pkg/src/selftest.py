"""
Verifica rapida degli invarianti della libreria (`latmat.py selftest`).
Ogni controllo ha un nome stabile e restituisce (esito, dettaglio).
"""

import builtins
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from poset import divisor_lattice, chain_poset, from_cover_relations, full_subset, make_subset, mobius
from incidence import (
    identity_function,
    reciprocal_function,
    function_from_values,
    jordan_totient,
    down_convolution,
    up_convolution,
)
from matrices import (
    combined_matrix,
    meet_matrix,
    join_matrix,
    factor_ideal,
    factor_filter,
    factor_meet_closed,
    structure_meet,
    block_split,
    hadamard_diag_identity_check,
    divisor_family_spec,
    gcd_over_lcm_spec,
)
from models import CombinedSpec
from spectra import eigen_symmetric, determinant
from bounds import lower_bound_meet, lower_bounds_both, region_meet_closed
from constants import (
    enumerate_kn,
    gram_matrix,
    search_cn,
    search_Cn,
    t_n,
    t_n_squared,
    t_n_squared_by_sum,
    n0_matrix,
    n0_frobenius,
    n0_frobenius_closed_form,
    n0_last_row_pattern,
    c_constant,
    C_constant,
    verify_conjecture,
)
from utils import max_relative_error
from config import DEFAULT_EIGEN_TOL

_ = getattr(builtins, "_", lambda s: s)

# c_n noti per n = 1..5
KNOWN_CN = (1.0, 0.381966, 0.198062, 0.0870031, 0.0370683)


@dataclass
class SelftestResult:
    name: str
    passed: bool
    detail: str = ""


def _diamond():
    return from_cover_relations(
        ["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], name="diamond"
    )


def check_mobius_rows(tol):
    p = divisor_lattice(36)
    table = mobius(p).values
    for x in range(len(p)):
        for y in range(len(p)):
            if x != y and p.leq[x, y]:
                total = sum(int(table[x, z]) for z in range(len(p)) if p.leq[x, z] and p.leq[z, y])
                if total != 0:
                    return False, f"({p.labels[x]}, {p.labels[y]})"
    return True, ""


def check_smith_determinant(tol):
    for n in range(1, 9):
        spec = divisor_family_spec(n, 1, 0)
        expected = math.prod(int(sympy.totient(i)) for i in range(1, n + 1))
        value = determinant(combined_matrix(spec), tol)
        if abs(value - expected) > 1e-6 * expected:
            return False, f"n={n}: {value} ≠ {expected}"
    return True, ""


def check_factor_reconstruction(tol):
    diamond = _diamond()
    cases = [(full_subset(diamond), function_from_values(diamond, {"0": 1, "a": 2, "b": 3, "1": 7}))]
    for p in (divisor_lattice(60), chain_poset(5)):
        cases.append((full_subset(p), identity_function(p)))
    for s, f in cases:
        a = factor_ideal(s, f, 1)
        err = max_relative_error(a @ a.T, meet_matrix(s, f, 1))
        if err > 1e-10:
            return False, f"ideal {s.parent.name}: {err:.3g}"
        e, d = factor_meet_closed(s, f, 1)
        err = max_relative_error(e @ np.diag(d) @ e.T, meet_matrix(s, f, 1))
        if err > 1e-10:
            return False, f"meet-closed {s.parent.name}: {err:.3g}"
    p = divisor_lattice(60)
    s = full_subset(p)
    g = reciprocal_function(identity_function(p))
    a = factor_filter(s, g, 1)
    err = max_relative_error(a @ a.T, join_matrix(s, g, 1))
    if err > 1e-10:
        return False, f"filter: {err:.3g}"
    return True, ""


def check_structure_product(tol):
    p = divisor_lattice(12)
    s = full_subset(p)
    spec = CombinedSpec(2, 1, Fraction(1, 2), Fraction(1, 2), s, identity_function(p))
    err = max_relative_error(structure_meet(spec).product(), combined_matrix(spec))
    return err <= 1e-10, f"{err:.3g}"


def check_jacobi_against_numpy(tol):
    rng = np.random.default_rng(2026)
    for size in (1, 2, 5, 9):
        a = rng.standard_normal((size, size))
        a = a + a.T
        ours = np.array(eigen_symmetric(a, tol).eigenvalues)
        ref = np.linalg.eigvalsh(a)
        if np.max(np.abs(ours - ref)) > 1e-9 * max(1.0, np.max(np.abs(ref))):
            return False, f"size={size}"
    return True, ""


def check_unit_determinant(tol):
    for n in range(1, 6):
        for mask in enumerate_kn(n):
            value = determinant(gram_matrix(mask), tol)
            if abs(value - 1.0) > 1e-8:
                return False, f"n={n}, bits={mask.bits}: {value}"
    return True, ""


def check_closed_forms(tol):
    for n in range(1, 51):
        if t_n_squared(n) != t_n_squared_by_sum(n):
            return False, f"T_n, n={n}"
    for n in range(2, 41):
        if abs(n0_frobenius(n) - n0_frobenius_closed_form(n)) > 1e-12 * n0_frobenius(n):
            return False, f"‖N₀‖, n={n}"
    for n in range(2, 13):
        if list(n0_matrix(n)[-1]) != n0_last_row_pattern(n):
            return False, f"N₀, n={n}"
    return True, ""


def check_small_constants(tol):
    for n, expected in enumerate(KNOWN_CN, start=1):
        value = search_cn(n, tol=tol).value
        if abs(value - expected) > 1e-5:
            return False, f"c_{n} = {value}"
        upper = search_Cn(n, tol=tol).value
        if upper > t_n(n) * (1 + 1e-12):
            return False, f"C_{n} = {upper} > T_{n}"
    return True, ""


def check_min_matrix_bound(tol):
    p = chain_poset(5)
    spec = CombinedSpec(1, 0, 0, 0, full_subset(p), identity_function(p))
    report = lower_bound_meet(spec, c_constant(5, "exact", tol=tol), tol)
    return report.holds, f"bound={report.bound:.6g}, κ={report.true_kappa:.6g}"


def check_mobius_inversion(tol):
    diamond = _diamond()
    cases = [
        function_from_values(diamond, {"0": 2, "a": 3, "b": 5, "1": 11}),
        identity_function(divisor_lattice(36)),
    ]
    for f in cases:
        p = f.parent
        s = full_subset(p)
        for conv, below in ((down_convolution(f, 1, s), True), (up_convolution(f, 1, s), False)):
            g = dict(zip(conv.labels, conv.exact))
            for w in range(len(p)):
                related = p.leq[:, w] if below else p.leq[w, :]
                total = sum(g[p.labels[z]] for z in np.nonzero(related)[0].tolist())
                if total != f.value(w):
                    return False, f"{conv.direction} {p.name}, w={p.labels[w]}"
    return True, ""


def check_jordan_identity(tol):
    for alpha in (1, 2, 3):
        for k in range(1, 201):
            if sum(jordan_totient(d, alpha) for d in sympy.divisors(k)) != k**alpha:
                return False, f"k={k}, α={alpha}"
    p = divisor_lattice(60)
    for alpha in (1, 2, 3):
        conv = down_convolution(identity_function(p), alpha, full_subset(p))
        for label, value in zip(conv.labels, conv.exact):
            if value != jordan_totient(int(label), alpha):
                return False, f"J_{alpha}({label})"
    return True, ""


def check_hadamard_identity(tol):
    rng = np.random.default_rng(11)
    for size in (1, 3, 6):
        a, b = rng.standard_normal((2, size, size))
        c = np.diag(rng.standard_normal(size))
        d = np.diag(rng.standard_normal(size))
        if not hadamard_diag_identity_check(a, b, c, d):
            return False, f"size={size}"
    return True, ""


def check_block_split(tol):
    p = divisor_lattice(60)
    f = identity_function(p)
    for members in (["2", "3", "4"], ["4", "6", "10", "15"], ["12", "20", "30"]):
        spec = CombinedSpec(2, 1, Fraction(1, 2), Fraction(1, 2), make_subset(p, members), f)
        p_part, q_part = block_split(spec)
        err = max_relative_error(p_part @ p_part.T + q_part @ q_part.T, combined_matrix(spec))
        if err > 1e-10:
            return False, f"{members}: {err:.3g}"
        if eigen_symmetric(q_part @ q_part.T, tol).minimum < -1e-10:
            return False, f"{members}: QQᵀ"
    return True, ""


def check_conjecture(tol):
    for n in range(2, 6):
        row = verify_conjecture(n, tol=tol)
        if not row.holds:
            return False, f"n={n}: c_n={row.c_n}, κ={row.kappa_y0}"
    return True, ""


def check_bound_soundness(tol):
    exponents = ((1, 0, 0), (2, 1, 1), (Fraction(1, 2), 0, 0), (1, -1, 0))
    checked = 0
    for n in range(2, 7):
        c = c_constant(n, "exact", tol=tol)
        for alpha, beta, gamma in exponents:
            for side, report, _reason in lower_bounds_both(divisor_family_spec(n, alpha, beta, gamma), c, tol):
                if report is None:
                    continue
                if not report.holds:
                    return False, f"{side} n={n}, ({alpha},{beta},{gamma})"
                checked += 1
    return checked > 0, f"{checked}"


def check_region_soundness(tol):
    for n in range(2, 7):
        C = C_constant(n, "exact", tol=tol)
        for alpha in (Fraction(1, 2), 1):
            if not region_meet_closed(gcd_over_lcm_spec(n, alpha), C, tol).contained:
                return False, f"n={n}, α={alpha}"
    return True, ""


CHECKS = (
    ("mobius_rows", check_mobius_rows),
    ("smith_determinant", check_smith_determinant),
    ("factor_reconstruction", check_factor_reconstruction),
    ("structure_product", check_structure_product),
    ("jacobi_against_numpy", check_jacobi_against_numpy),
    ("unit_determinant", check_unit_determinant),
    ("closed_forms", check_closed_forms),
    ("small_constants", check_small_constants),
    ("min_matrix_bound", check_min_matrix_bound),
    ("mobius_inversion", check_mobius_inversion),
    ("jordan_identity", check_jordan_identity),
    ("hadamard_identity", check_hadamard_identity),
    ("block_split_psd", check_block_split),
    ("conjecture", check_conjecture),
    ("bound_soundness", check_bound_soundness),
    ("region_soundness", check_region_soundness),
)


def run_selftest(tol=DEFAULT_EIGEN_TOL):
    results = []
    for name, check in CHECKS:
        try:
            passed, detail = check(tol)
        except Exception as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        results.append(SelftestResult(name=name, passed=bool(passed), detail=detail))
    return results


def get_selftest_text(results):
    lines = []
    for r in results:
        status = "ok" if r.passed else "FAIL"
        lines.append(f"{r.name}: {status}" + (f" ({r.detail})" if r.detail and not r.passed else ""))
    failed = sum(1 for r in results if not r.passed)
    lines.append(_("Controlli superati: {ok}/{total}").format(ok=len(results) - failed, total=len(results)))
    return "\n".join(lines) + "\n"
