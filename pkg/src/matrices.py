"""
Matrici meet, join e combinate M^{α,β,γ,δ} su un sottoinsieme S di un poset,
con le relative fattorizzazioni e le verifiche di ricostruzione.
"""

import builtins
import math
from fractions import Fraction

import numpy as np
import sympy

from models import CombinedSpec, StructureFactors, HypothesisError, PowerError
from poset import (
    meet_index,
    join_index,
    is_meet_closed,
    is_join_closed,
    order_ideal,
    order_filter,
    divisor_lattice,
    make_subset,
)
from incidence import power_at, down_convolution, up_convolution, identity_function
from utils import is_exact, matrices_close
from config import HADAMARD_TOL, NEGATIVE_CLAMP_TOL, MATCH_REL_TOL

_ = getattr(builtins, "_", lambda s: s)


# ---------------------------------------------------------------------------
# Aritmetica delle entrate
# ---------------------------------------------------------------------------


def _divide(num, den):
    if den == 0:
        raise PowerError(_("Divisione per zero nel calcolo di un'entrata."))
    if is_exact(num) and is_exact(den):
        return Fraction(num) / Fraction(den)
    return float(num) / float(den)


def _multiply(a, b):
    if is_exact(a) and is_exact(b):
        return Fraction(a) * Fraction(b)
    return float(a) * float(b)


def _finish(entries, exact):
    """Matrice float64 oppure, con exact=True, matrice di oggetti (Fraction dove possibile)."""
    if exact:
        return np.array(entries, dtype=object)
    out = np.array([[float(v) for v in row] for row in entries], dtype=float)
    if not np.isfinite(out).all():
        raise PowerError(_("La matrice contiene valori non finiti."))
    return out


class _Powers:
    """Cache di f(x)^a per indice ed esponente."""

    def __init__(self, f):
        self.f = f
        self.cache = {}

    def __call__(self, index, alpha):
        key = (index, alpha)
        if key not in self.cache:
            self.cache[key] = power_at(self.f, index, alpha)
        return self.cache[key]


def _symmetric_fill(members, entry):
    n = len(members)
    rows = [[None] * n for _i in range(n)]
    for a in range(n):
        for b in range(a, n):
            value = entry(members[a], members[b])
            rows[a][b] = value
            rows[b][a] = value
    return rows


# ---------------------------------------------------------------------------
# Matrici
# ---------------------------------------------------------------------------


def meet_matrix(s, f, alpha, exact=False):
    """(S)_{f^α}: entrata f(x_i ∧ x_j)^α."""
    p = s.parent
    pw = _Powers(f)
    rows = _symmetric_fill(s.members, lambda i, j: pw(meet_index(p, i, j), alpha))
    return _finish(rows, exact)


def join_matrix(s, f, alpha, exact=False):
    """[S]_{f^α}: entrata f(x_i ∨ x_j)^α."""
    p = s.parent
    pw = _Powers(f)
    rows = _symmetric_fill(s.members, lambda i, j: pw(join_index(p, i, j), alpha))
    return _finish(rows, exact)


def existence_violation(spec):
    """
    Prima condizione di esistenza violata (testo), oppure None:
    f nulla su S richiede γ=δ=0, f nulla su un meet richiede α ≥ 0,
    f nulla su un join richiede β ≥ 0.
    """
    s, f = spec.subset, spec.f
    p = s.parent
    for i in s.members:
        if f.value(i) == 0 and (spec.gamma != 0 or spec.delta != 0):
            return _(
                "f si annulla in x={label} di S, quindi servono γ = δ = 0 (γ={gamma}, δ={delta})."
            ).format(label=p.labels[i], gamma=spec.gamma, delta=spec.delta)
    for a, i in enumerate(s.members):
        for j in s.members[a:]:
            if spec.alpha < 0:
                m = meet_index(p, i, j)
                if f.value(m) == 0:
                    return _(
                        "f si annulla sul meet {m} = {x} ∧ {y}, quindi serve α ≥ 0 (α={alpha})."
                    ).format(m=p.labels[m], x=p.labels[i], y=p.labels[j], alpha=spec.alpha)
            if spec.beta < 0:
                m = join_index(p, i, j)
                if f.value(m) == 0:
                    return _(
                        "f si annulla sul join {m} = {x} ∨ {y}, quindi serve β ≥ 0 (β={beta})."
                    ).format(m=p.labels[m], x=p.labels[i], y=p.labels[j], beta=spec.beta)
    return None


def check_existence(spec):
    reason = existence_violation(spec)
    if reason is not None:
        raise HypothesisError(
            _("La matrice combinata non esiste: {reason}").format(reason=reason)
        )


def combined_matrix(spec, exact=False):
    """
    M^{α,β,γ,δ}: entrata f(x_i∧x_j)^α f(x_i∨x_j)^β / (f(x_i)^γ f(x_j)^δ).
    Con α = 0 il meet non viene valutato, con β = 0 nemmeno il join.
    """
    check_existence(spec)
    s, f = spec.subset, spec.f
    p = s.parent
    pw = _Powers(f)
    alpha, beta, gamma, delta = spec.exponents

    def entry(i, j):
        num = 1
        if alpha != 0:
            num = _multiply(num, pw(meet_index(p, i, j), alpha))
        if beta != 0:
            num = _multiply(num, pw(join_index(p, i, j), beta))
        den = _multiply(pw(i, gamma), pw(j, delta))
        return _divide(num, den)

    members = s.members
    if spec.is_symmetric:
        rows = _symmetric_fill(members, entry)
    else:
        rows = [[entry(i, j) for j in members] for i in members]
    return _finish(rows, exact)


def g_matrix(s, f, exponent):
    """
    G: 1 sulle coppie confrontabili, altrimenti
    f(x_i∧x_j)^e f(x_i∨x_j)^e / (f(x_i)^e f(x_j)^e).
    """
    p = s.parent
    pw = _Powers(f)

    def entry(i, j):
        if p.leq[i, j] or p.leq[j, i]:
            return 1
        num = _multiply(pw(meet_index(p, i, j), exponent), pw(join_index(p, i, j), exponent))
        den = _multiply(pw(i, exponent), pw(j, exponent))
        return _divide(num, den)

    return _finish(_symmetric_fill(s.members, entry), exact=False)


# ---------------------------------------------------------------------------
# Fattorizzazioni
# ---------------------------------------------------------------------------


def _sqrt_entries(conv, side_name):
    """Radici quadrate delle entrate della convoluzione; errore sulla prima negativa."""
    scale = max([1.0] + [abs(v) for v in conv.values])
    roots = []
    for k, value in enumerate(conv.values):
        negative = conv.exact[k] < 0 if conv.exact is not None else value < 0
        if negative:
            if conv.exact is None and value >= -NEGATIVE_CLAMP_TOL * scale:
                value = 0.0
            else:
                raise HypothesisError(
                    _(
                        "La fattorizzazione {side} richiede entrate di convoluzione ≥ 0; "
                        "violata in w={label} (valore {value})."
                    ).format(side=side_name, label=conv.labels[k], value=value)
                )
        roots.append(math.sqrt(value))
    return roots


def factor_ideal(s, f, alpha):
    """
    A (n×m) con (S)_{f^α} = A Aᵀ: a_ij = sqrt((f_d^α∗μ)(0̂,w_j)) se w_j ⪯ x_i.
    Le colonne seguono order_ideal(s): i membri di S per primi.
    """
    p = s.parent
    conv = down_convolution(f, alpha, s)
    roots = _sqrt_entries(conv, _("sull'ideale ↓S"))
    support = order_ideal(s).members
    a = np.zeros((len(s), len(support)))
    for r, i in enumerate(s.members):
        for c, w in enumerate(support):
            if p.leq[w, i]:
                a[r, c] = roots[c]
    return a


def factor_filter(s, f, alpha):
    """A con [S]_{f^α} = A Aᵀ: a_ij = sqrt((μ∗f_u^α)(w_j,1̂)) se x_i ⪯ w_j; colonne in ordine order_filter(s)."""
    p = s.parent
    conv = up_convolution(f, alpha, s)
    roots = _sqrt_entries(conv, _("sul filtro ↑S"))
    support = order_filter(s).members
    a = np.zeros((len(s), len(support)))
    for r, i in enumerate(s.members):
        for c, w in enumerate(support):
            if p.leq[i, w]:
                a[r, c] = roots[c]
    return a


def _incidence_e(s):
    p = s.parent
    n = len(s)
    e = np.zeros((n, n))
    for r, i in enumerate(s.members):
        for c, j in enumerate(s.members):
            if p.leq[j, i]:
                e[r, c] = 1.0
    return e


def factor_meet_closed(s, f, alpha):
    """
    (E, d) con (S)_{f^α} = E diag(d) Eᵀ, e_ij = 1 sse x_j ⪯ x_i.
    d_i somma (f_d^α∗μ)(0̂,z) sugli z ⪯ x_i che non stanno sotto alcun x_j con j < i.
    """
    if not is_meet_closed(s):
        raise HypothesisError(_("La fattorizzazione E D Eᵀ richiede S chiuso rispetto al meet."))
    p = s.parent
    conv = down_convolution(f, alpha, s)
    d = [0.0] * len(s)
    for label, value in zip(conv.labels, conv.values):
        z = p.index_of(label)
        first = next(k for k, x in enumerate(s.members) if p.leq[z, x])
        d[first] += value
    return _incidence_e(s), np.array(d)


def factor_join_closed(s, f, alpha):
    """
    (E, d) con [S]_{f^α} = Eᵀ diag(d) E.
    d_i somma (μ∗f_u^α)(z,1̂) sugli z ⪰ x_i che non stanno sopra alcun x_j con j > i.
    """
    if not is_join_closed(s):
        raise HypothesisError(_("La fattorizzazione Eᵀ D E richiede S chiuso rispetto al join."))
    p = s.parent
    conv = up_convolution(f, alpha, s)
    n = len(s)
    d = [0.0] * n
    for label, value in zip(conv.labels, conv.values):
        z = p.index_of(label)
        last = next(k for k in range(n - 1, -1, -1) if p.leq[s.members[k], z])
        d[last] += value
    return _incidence_e(s), np.array(d)


def _diag_powers(spec, exponent):
    pw = _Powers(spec.f)
    return np.array([float(pw(i, exponent)) for i in spec.subset.members])


def structure_meet(spec):
    """M = F^{β−γ} ((S)_{f^{α−β}} ∘ G_β) F^{β−δ}."""
    check_existence(spec)
    alpha, beta, gamma, delta = spec.exponents
    return StructureFactors(
        left=_diag_powers(spec, beta - gamma),
        core=meet_matrix(spec.subset, spec.f, alpha - beta),
        g=g_matrix(spec.subset, spec.f, beta),
        right=_diag_powers(spec, beta - delta),
    )


def structure_join(spec):
    """M = F^{α−γ} ([S]_{f^{β−α}} ∘ G_α) F^{α−δ}."""
    check_existence(spec)
    alpha, beta, gamma, delta = spec.exponents
    return StructureFactors(
        left=_diag_powers(spec, alpha - gamma),
        core=join_matrix(spec.subset, spec.f, beta - alpha),
        g=g_matrix(spec.subset, spec.f, alpha),
        right=_diag_powers(spec, alpha - delta),
    )


def block_split(spec):
    """
    (P, Q) con M = P Pᵀ + Q Qᵀ, dove [B | C] è il fattore di order_ideal per
    (S)_{f^{α−β}}, P = F^{β−γ}B e Q = F^{β−γ}C. Richiede γ = δ e G = J su S.
    """
    if not spec.is_symmetric:
        raise HypothesisError(_("La scomposizione a blocchi richiede γ = δ."))
    g = g_matrix(spec.subset, spec.f, spec.beta)
    if not matrices_close(g, np.ones_like(g), MATCH_REL_TOL):
        raise HypothesisError(
            _("La scomposizione a blocchi richiede G = J (f semimoltiplicativa sulle coppie di S).")
        )
    a = factor_ideal(spec.subset, spec.f, spec.alpha - spec.beta)
    n = len(spec.subset)
    scale = _diag_powers(spec, spec.beta - spec.gamma)[:, None]
    return scale * a[:, :n], scale * a[:, n:]


def hadamard_diag_identity_check(a, b, c, d, tol=HADAMARD_TOL):
    """Vero sse C(A∘B)D = B∘(CAD) entrata per entrata, con C e D diagonali."""
    a, b, c, d = (np.asarray(m, dtype=float) for m in (a, b, c, d))
    n = a.shape[0]
    for m in (a, b, c, d):
        if m.shape != (n, n):
            raise ValueError(_("Le quattro matrici devono essere n×n."))
    for m in (c, d):
        if np.any(m - np.diag(np.diag(m))):
            raise ValueError(_("C e D devono essere diagonali."))
    lhs = c @ (a * b) @ d
    rhs = b * (c @ a @ d)
    scale = max(1.0, float(np.max(np.abs(lhs))) if lhs.size else 1.0)
    return bool(np.max(np.abs(lhs - rhs), initial=0.0) <= tol * scale)


# ---------------------------------------------------------------------------
# Famiglie notevoli
# ---------------------------------------------------------------------------


def integer_segment(n):
    """S = {1, ..., n} dentro il reticolo dei divisori di mcm(1, ..., n)."""
    n = int(n)
    if n < 1:
        raise ValueError(_("n deve essere almeno 1."))
    p = divisor_lattice(sympy.ilcm(*range(1, n + 1)) if n > 1 else 1)
    return make_subset(p, [str(i) for i in range(1, n + 1)])


def divisor_family_spec(n, alpha, beta, gamma=0):
    """A_n^{α,β}: entrate gcd(i,j)^α mcm(i,j)^β (divise per (ij)^γ) su {1..n}, f = N."""
    s = integer_segment(n)
    return CombinedSpec(alpha, beta, gamma, gamma, s, identity_function(s.parent))


def reciprocal_spec(s, f, join_over_meet=True):
    """f(∨)/f(∧) con (−1,1,0,0), oppure f(∧)/f(∨) con (1,−1,0,0)."""
    if join_over_meet:
        return CombinedSpec(-1, 1, 0, 0, s, f)
    return CombinedSpec(1, -1, 0, 0, s, f)


def gcd_over_lcm_spec(n, alpha):
    """(gcd(i,j)/mcm(i,j))^α su {1..n}."""
    return divisor_family_spec(n, alpha, -alpha)
