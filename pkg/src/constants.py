"""
Costanti c_n e C_n: estremi degli autovalori di X Xᵀ per X in K(n) (matrici
0/1 triangolari inferiori con diagonale unitaria), calcolati per enumerazione
esaustiva; il maggiorante T_n, i due minoranti in forma chiusa di c_n, la
matrice Y₀ e la sua matrice di Gram N₀.
"""

import builtins
import math
import os
import time
from fractions import Fraction
from multiprocessing import Pool

import numpy as np
from numba import njit

from models import (
    TriangularMask,
    SearchResult,
    ChunkCheckpoint,
    ConstantValue,
    ConjectureCheck,
    CnTableRow,
    SearchCapError,
    ConvergenceError,
)
from spectra import jacobi_kernel, eigen_symmetric, kappa
from formats import read_checkpoint, write_checkpoint, append_ledger_row
from utils import parse_number
from config import (
    SEARCH_HARD_CAP,
    SEARCH_CHUNKS,
    MAX_JACOBI_SWEEPS,
    DEFAULT_EIGEN_TOL,
    CONJECTURE_TOL,
    MATCH_REL_TOL,
    search_cap,
)

_ = getattr(builtins, "_", lambda s: s)

MIN = "min"
MAX = "max"

# Risultati già calcolati in questo processo, per (n, estremo)
_RESULTS = {}


# ---------------------------------------------------------------------------
# Enumerazione di K(n)
# ---------------------------------------------------------------------------


def _lower_positions(n):
    return n * (n - 1) // 2


def check_search_size(n, allow_large=False):
    """
    Raises:
        SearchCapError: n fuori da [1, 8], oppure oltre il limite morbido senza override.
    """
    if not 1 <= n <= SEARCH_HARD_CAP:
        raise SearchCapError(
            _("n deve stare tra 1 e {cap}, ricevuto {n}.").format(cap=SEARCH_HARD_CAP, n=n)
        )
    cap = search_cap()
    if n > cap and not allow_large:
        raise SearchCapError(
            _(
                "n={n} supera il limite di ricerca {cap} (2^{bits} matrici): "
                "usa --i-know oppure LATMAT_MAX_N."
            ).format(n=n, cap=cap, bits=_lower_positions(n))
        )


def enumerate_kn(n):
    """Tutte le maschere di K(n), in ordine crescente di pattern di bit."""
    if not 1 <= n <= SEARCH_HARD_CAP:
        raise SearchCapError(
            _("n deve stare tra 1 e {cap}, ricevuto {n}.").format(cap=SEARCH_HARD_CAP, n=n)
        )
    return (TriangularMask(n=n, bits=bits) for bits in range(1 << _lower_positions(n)))


def gram_matrix(mask):
    x = mask.to_matrix()
    return x @ x.T


# ---------------------------------------------------------------------------
# Scansione compilata
# ---------------------------------------------------------------------------


@njit(cache=True)
def _scan_range(n, lo, hi, want_max, tol, max_sweeps):
    """
    Scorre i pattern lo..hi-1 e restituisce (miglior valore, pattern, fallimenti).
    Aggiorna solo su miglioramento stretto: a parità vince il primo pattern.
    """
    x = np.zeros((n, n))
    gram = np.zeros((n, n))
    if want_max:
        best = -np.inf
    else:
        best = np.inf
    best_bits = -1
    failures = 0
    for bits in range(lo, hi):
        for i in range(n):
            for j in range(n):
                x[i, j] = 0.0
            x[i, i] = 1.0
        k = 0
        for i in range(1, n):
            for j in range(i):
                if (bits >> k) & 1:
                    x[i, j] = 1.0
                k += 1
        for i in range(n):
            for j in range(i + 1):
                total = 0.0
                for t in range(j + 1):
                    total += x[i, t] * x[j, t]
                gram[i, j] = total
                gram[j, i] = total
        eig, sweeps, residual = jacobi_kernel(gram, tol, max_sweeps)
        if sweeps < 0:
            failures += 1
            continue
        value = eig[0]
        for i in range(1, n):
            if want_max:
                if eig[i] > value:
                    value = eig[i]
            elif eig[i] < value:
                value = eig[i]
        if want_max:
            if value > best:
                best = value
                best_bits = bits
        elif value < best:
            best = value
            best_bits = bits
    return best, best_bits, failures


def _checkpoint_path(directory, n, extremum, lo, hi):
    return os.path.join(directory, f"kn{n}_{extremum}_{lo:x}_{hi:x}.ckpt")


def _scan_chunk(task):
    """Lavoro di un singolo chunk; riprende da un checkpoint completo se esiste."""
    n, extremum, lo, hi, tol, checkpoint_dir = task
    path = None
    if checkpoint_dir:
        path = _checkpoint_path(checkpoint_dir, n, extremum, lo, hi)
        if os.path.exists(path):
            try:
                saved = read_checkpoint(path)
                if saved.complete and (saved.n, saved.extremum, saved.lo, saved.hi) == (
                    n,
                    extremum,
                    lo,
                    hi,
                ):
                    return saved
            except ValueError:
                pass  # checkpoint illeggibile: si ricalcola

    best, bits, failures = _scan_range(n, lo, hi, extremum == MAX, tol, MAX_JACOBI_SWEEPS)
    if failures:
        raise ConvergenceError(
            _("Jacobi non converge su {count} matrici del chunk [{lo}, {hi}).").format(
                count=failures, lo=lo, hi=hi
            )
        )
    checkpoint = ChunkCheckpoint(
        n=n,
        extremum=extremum,
        lo=lo,
        hi=hi,
        scanned=hi - lo,
        best_value=float(best),
        best_bits=int(bits),
    )
    if path:
        write_checkpoint(path, checkpoint)
    return checkpoint


def _chunk_ranges(total, chunks=SEARCH_CHUNKS):
    chunks = max(1, min(chunks, total))
    edges = [total * k // chunks for k in range(chunks + 1)]
    return list(zip(edges[:-1], edges[1:]))


def merge_checkpoints(checkpoints, extremum):
    """Confronto lessicografico (valore, pattern): indipendente da come è stato diviso il lavoro."""
    if extremum == MAX:
        return min(checkpoints, key=lambda c: (-c.best_value, c.best_bits))
    return min(checkpoints, key=lambda c: (c.best_value, c.best_bits))


# ---------------------------------------------------------------------------
# Ricerca
# ---------------------------------------------------------------------------


def search_extremum(
    n,
    extremum=MIN,
    jobs=1,
    checkpoint_dir=None,
    allow_large=False,
    progress=None,
    ledger_path=None,
    tol=DEFAULT_EIGEN_TOL,
):
    """
    Minimo di λ_min(X Xᵀ) (extremum="min") o massimo di λ_max(X Xᵀ) su K(n).

    Args:
        jobs: processi di lavoro; i chunk sono indipendenti.
        checkpoint_dir: se indicata, ogni chunk completato viene salvato e
            riutilizzato alla ripresa.
        progress: callable(completati, totale, secondi_trascorsi) opzionale.
        ledger_path: file CSV a cui accodare il risultato.

    Returns:
        SearchResult con il testimone di pattern minimo a parità di valore.
    """
    if extremum not in (MIN, MAX):
        raise ValueError(_("Estremo non valido: '{value}'.").format(value=extremum))
    check_search_size(n, allow_large)
    total = 1 << _lower_positions(n)
    if checkpoint_dir:
        os.makedirs(checkpoint_dir, exist_ok=True)
    tasks = [(n, extremum, lo, hi, tol, checkpoint_dir) for lo, hi in _chunk_ranges(total)]

    started = time.monotonic()
    results = []

    def collect(checkpoint):
        results.append(checkpoint)
        if progress is not None:
            progress(len(results), len(tasks), time.monotonic() - started)

    if jobs > 1:
        with Pool(processes=jobs) as pool:
            for checkpoint in pool.imap_unordered(_scan_chunk, tasks):
                collect(checkpoint)
    else:
        for task in tasks:
            collect(_scan_chunk(task))

    best = merge_checkpoints(results, extremum)
    witness = TriangularMask(n=n, bits=best.best_bits)
    spectrum = eigen_symmetric(gram_matrix(witness), tol)
    check = spectrum.minimum if extremum == MIN else spectrum.maximum
    if abs(check - best.best_value) > MATCH_REL_TOL * max(1.0, abs(check)):
        raise ArithmeticError(
            _("Il testimone {bits} non riproduce il valore trovato ({found} ≠ {check}).").format(
                bits=witness.bits, found=best.best_value, check=check
            )
        )
    result = SearchResult(
        n=n,
        extremum=extremum,
        value=best.best_value,
        witness=witness,
        matrices_scanned=sum(c.scanned for c in results),
    )
    _RESULTS[(n, extremum)] = result
    if ledger_path:
        append_ledger_row(ledger_path, result)
    return result


def _cached_or_search(n, extremum, kwargs):
    cached = _RESULTS.get((n, extremum))
    if cached is None or kwargs.get("checkpoint_dir"):
        return search_extremum(n, extremum, **kwargs)
    check_search_size(n, kwargs.get("allow_large", False))
    if kwargs.get("ledger_path"):
        append_ledger_row(kwargs["ledger_path"], cached)
    return cached


def search_cn(n, **kwargs):
    """c_n = min su K(n) del più piccolo autovalore di X Xᵀ."""
    return _cached_or_search(n, MIN, kwargs)


def search_Cn(n, **kwargs):
    """C_n = max su K(n) del più grande autovalore di X Xᵀ."""
    return _cached_or_search(n, MAX, kwargs)


# ---------------------------------------------------------------------------
# Forme chiuse
# ---------------------------------------------------------------------------


def t_n_squared(n):
    """T_n² = n(n+1)(n²+n+1)/6, intero esatto."""
    return n * (n + 1) * (n * n + n + 1) // 6


def t_n_squared_by_sum(n):
    """(2n−1)·1² + (2n−3)·2² + ... + 1·n²."""
    return sum((2 * (n - k) + 1) * k * k for k in range(1, n + 1))


def t_n(n):
    if n < 1:
        raise ValueError(_("n deve essere almeno 1."))
    return math.sqrt(t_n_squared(n))


def cn_lower_bound_tn(n):
    """(6/(n⁴+2n³+2n²+n))^{(n−1)/2} = (1/T_n)^{n−1}."""
    base = Fraction(6, n**4 + 2 * n**3 + 2 * n**2 + n)
    return float(base) ** ((n - 1) / 2)


def _n0_frobenius_squared(n):
    """‖N₀‖_F² in forma chiusa, come Fraction."""
    if n % 2 == 0:
        return Fraction(n**4 + 56 * n**2 + 48 * n, 48)
    return Fraction(n**4 + 50 * n**2 + 48 * n - 51, 48)


def cn_lower_bound_n0(n):
    """(1/‖N₀‖_F²)^{(n−1)/2}, con la forma chiusa pari/dispari di ‖N₀‖_F."""
    return float(1 / _n0_frobenius_squared(n)) ** ((n - 1) / 2)


# ---------------------------------------------------------------------------
# Y₀ e N₀ = Y₀ Y₀ᵀ
# ---------------------------------------------------------------------------


def y0_matrix(n):
    """1 sulla diagonale, 0 sopra; sotto la diagonale 1 sse i + j è dispari (indici da 1)."""
    y = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        y[i - 1, i - 1] = 1
        for j in range(1, i):
            if (i + j) % 2 == 1:
                y[i - 1, j - 1] = 1
    return y


def y0_mask(n):
    return TriangularMask.from_matrix(y0_matrix(n))


def n0_matrix(n):
    y = y0_matrix(n)
    return y @ y.T


def n0_frobenius(n):
    return math.sqrt(int(np.sum(n0_matrix(n) ** 2)))


def n0_frobenius_closed_form(n):
    return math.sqrt(_n0_frobenius_squared(n))


def n0_last_row_pattern(n):
    """
    Ultima riga di N₀ attesa.
    n pari:    1, 1, 1, 2, 1, 3, ..., 1, n/2−1, 1, n/2+1
    n dispari: 0, 1, 1, 1, 2, 1, 3, ..., (n−1)/2−1, 1, (n+1)/2
    """
    row = []
    for k in range(1, n + 1):
        if k == n:
            row.append(n // 2 + 1 if n % 2 == 0 else (n + 1) // 2)
        elif n % 2 == 0:
            row.append(1 if k % 2 == 1 else k // 2)
        else:
            row.append(1 if k % 2 == 0 else (k - 1) // 2)
    return row


def verify_conjecture(n, **kwargs):
    """c_n coincide con κ(Y₀Y₀ᵀ) entro 1e−9?"""
    c_n = search_cn(n, **kwargs).value
    kappa_y0 = kappa(n0_matrix(n))
    return ConjectureCheck(
        n=n, holds=abs(c_n - kappa_y0) <= CONJECTURE_TOL, c_n=c_n, kappa_y0=kappa_y0
    )


def cn_table(n_max, **kwargs):
    """Righe (n, minorante via T_n, minorante via N₀, c_n) per n = 1..n_max."""
    return [
        CnTableRow(
            n=n,
            tn_bound=cn_lower_bound_tn(n),
            n0_bound=cn_lower_bound_n0(n),
            c_n=search_cn(n, **kwargs).value,
        )
        for n in range(1, n_max + 1)
    ]


# ---------------------------------------------------------------------------
# Scelta delle costanti per limiti e regioni
# ---------------------------------------------------------------------------

C_SOURCES = ("exact", "y0", "tn-bound", "n0-bound")
UPPER_SOURCES = ("exact", "tn")
# Nomi accettati anche da `--c`
C_SOURCE_ALIASES = {"thm52": "tn-bound", "thm53": "n0-bound"}


def c_constant(n, source="exact", **kwargs):
    """Valore di c_n (o di un suo minorante) con la relativa provenienza."""
    source = C_SOURCE_ALIASES.get(source, source)
    if source == "exact":
        return ConstantValue(n, search_cn(n, **kwargs).value, "exact")
    if source == "y0":
        return ConstantValue(n, kappa(n0_matrix(n)), "y0")
    if source == "tn-bound":
        return ConstantValue(n, cn_lower_bound_tn(n), "tn-bound")
    if source == "n0-bound":
        return ConstantValue(n, cn_lower_bound_n0(n), "n0-bound")
    return ConstantValue(n, _user_constant(source), "user")


def C_constant(n, source="exact", **kwargs):
    """Valore di C_n (o di un suo maggiorante) con la relativa provenienza."""
    if source == "exact":
        return ConstantValue(n, search_Cn(n, **kwargs).value, "exact")
    if source == "tn":
        return ConstantValue(n, t_n(n), "tn")
    return ConstantValue(n, _user_constant(source), "user")


def _user_constant(source):
    try:
        value = float(parse_number(source))
    except (ValueError, ZeroDivisionError):
        raise ValueError(
            _("Sorgente della costante non riconosciuta: '{source}'.").format(source=source)
        ) from None
    if value <= 0:
        raise ValueError(_("La costante deve essere positiva, ricevuto {value}.").format(value=value))
    return value
