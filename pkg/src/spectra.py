"""
Autovalori di matrici simmetriche reali con il metodo ciclico di Jacobi e i
funzionali che ne derivano (κ, raggio spettrale, norme, definitezza positiva).

Il nucleo `jacobi_kernel` è compilato con Numba ed è condiviso con la ricerca
esaustiva su K(n).
"""

import builtins

import numpy as np
from numba import njit

from models import Spectrum, ConvergenceError
from config import DEFAULT_EIGEN_TOL, MAX_JACOBI_SWEEPS, SYMMETRY_TOL, DEFAULT_PD_TOL

_ = getattr(builtins, "_", lambda s: s)


# ---------------------------------------------------------------------------
# Nucleo compilato
# ---------------------------------------------------------------------------


@njit(cache=True)
def _offdiag_norm(a):
    n = a.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += a[i, j] * a[i, j]
    return np.sqrt(total)


@njit(cache=True)
def jacobi_kernel(m, tol, max_sweeps):
    """
    Rotazioni di Jacobi a sweep ciclici (p < q, riga per riga) finché la norma
    fuori diagonale scende sotto tol·‖m‖_F.
    Restituisce (autovalori non ordinati, sweep eseguiti, residuo); sweep = -1
    segnala la mancata convergenza.
    """
    n = m.shape[0]
    a = m.copy()
    norm = 0.0
    for i in range(n):
        for j in range(n):
            norm += a[i, j] * a[i, j]
    threshold = tol * np.sqrt(norm)

    sweeps = 0
    off = _offdiag_norm(a)
    converged = True
    while off > threshold:
        if sweeps >= max_sweeps:
            converged = False
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
        sweeps += 1
        off = _offdiag_norm(a)

    eig = np.empty(n)
    for i in range(n):
        eig[i] = a[i, i]
    if not converged:
        return eig, -1, off
    return eig, sweeps, off


# ---------------------------------------------------------------------------
# Interfaccia Python
# ---------------------------------------------------------------------------


def _as_square(m):
    m = np.ascontiguousarray(np.asarray(m, dtype=np.float64))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(_("Serve una matrice quadrata, forma ricevuta {shape}.").format(shape=m.shape))
    if not np.isfinite(m).all():
        raise ValueError(_("La matrice contiene valori non finiti."))
    return m


def _check_symmetric(m):
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    gap = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if gap > SYMMETRY_TOL * scale:
        raise ValueError(
            _("La matrice non è simmetrica (scarto massimo {gap:.3e}).").format(gap=gap)
        )


def eigen_symmetric(m, tol=DEFAULT_EIGEN_TOL, max_sweeps=MAX_JACOBI_SWEEPS):
    """
    Spettro di una matrice simmetrica reale.

    Raises:
        ValueError: matrice non quadrata o non simmetrica.
        ConvergenceError: nessuna convergenza entro max_sweeps sweep.
    """
    m = _as_square(m)
    _check_symmetric(m)
    if m.shape[0] == 0:
        return Spectrum(eigenvalues=[], iterations=0, offdiag_residual=0.0)
    eig, sweeps, residual = jacobi_kernel(m, float(tol), int(max_sweeps))
    if sweeps < 0:
        raise ConvergenceError(
            _("Jacobi non converge dopo {sweeps} sweep (residuo {residual:.3e}).").format(
                sweeps=max_sweeps, residual=residual
            )
        )
    return Spectrum(
        eigenvalues=sorted(float(v) for v in eig),
        iterations=int(sweeps),
        offdiag_residual=float(residual),
    )


def kappa(m, tol=DEFAULT_EIGEN_TOL):
    """Minimo modulo degli autovalori."""
    return min(abs(v) for v in eigen_symmetric(m, tol).eigenvalues)


def spectral_radius(m, tol=DEFAULT_EIGEN_TOL):
    """Massimo modulo degli autovalori."""
    return max(abs(v) for v in eigen_symmetric(m, tol).eigenvalues)


def frobenius_norm(m):
    m = np.asarray(m, dtype=float)
    return float(np.sqrt(np.sum(m * m)))


def spectral_norm(m, tol=DEFAULT_EIGEN_TOL):
    """sqrt(λ_max(AᵀA)); A può essere rettangolare."""
    m = np.asarray(m, dtype=float)
    gram = m.T @ m
    gram = 0.5 * (gram + gram.T)
    return float(np.sqrt(max(eigen_symmetric(gram, tol).maximum, 0.0)))


def is_positive_definite(m, tol=DEFAULT_PD_TOL):
    return eigen_symmetric(m).minimum > tol


def determinant(m, tol=DEFAULT_EIGEN_TOL):
    """
    Determinante: prodotto degli autovalori se la matrice è simmetrica,
    altrimenti eliminazione di Gauss con pivoting parziale.
    """
    m = _as_square(m)
    if m.shape[0] == 0:
        return 1.0
    try:
        _check_symmetric(m)
    except ValueError:
        return _lu_determinant(m)
    return float(np.prod(eigen_symmetric(m, tol).eigenvalues))


def _lu_determinant(m):
    a = m.copy()
    n = a.shape[0]
    det = 1.0
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if a[pivot, col] == 0.0:
            return 0.0
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            det = -det
        det *= a[col, col]
        factors = a[col + 1 :, col] / a[col, col]
        a[col + 1 :, col:] -= factors[:, None] * a[col, col:][None, :]
    return float(det)
