"""
Limiti inferiori per κ(M) (lato meet e lato join) e regioni di inclusione per
gli autovalori di M^{α,β,γ,γ}, ciascuno confrontato con lo spettro calcolato
direttamente.
"""

import builtins

import numpy as np

from models import BoundReport, RegionReport, HypothesisError, EmptyRegionError
from poset import require_lattice, is_meet_closed, is_join_closed, order_ideal, order_filter
from incidence import (
    down_convolution,
    up_convolution,
    semimultiplicative_violation,
    raw_power,
    power_at,
    jordan_totient,
)
from matrices import combined_matrix, g_matrix, factor_meet_closed, factor_join_closed
from spectra import eigen_symmetric
from config import BOUND_TOL, REGION_TOL, DEFAULT_EIGEN_TOL

_ = getattr(builtins, "_", lambda s: s)

MEET = "meet"
JOIN = "join"


# ---------------------------------------------------------------------------
# Verifica delle ipotesi
# ---------------------------------------------------------------------------


def _require_symmetric(spec):
    if not spec.is_symmetric:
        raise HypothesisError(
            _("I limiti spettrali richiedono γ = δ (γ={gamma}, δ={delta}).").format(
                gamma=spec.gamma, delta=spec.delta
            )
        )


def _require_constant_size(spec, constant):
    if constant.n != spec.n:
        raise HypothesisError(
            _("La costante fornita vale per n={given}, ma |S| = {n}.").format(
                given=constant.n, n=spec.n
            )
        )


def _check_common(spec, side):
    """
    Ipotesi comuni ai due lati. Sul lato meet l'esponente "libero" è β, sul lato join α:
    se è 0 non serve la semimoltiplicatività; se lo è anche γ, f può annullarsi.
    """
    s, f = spec.subset, spec.f
    p = s.parent
    free = spec.beta if side == MEET else spec.alpha
    support = order_ideal(s) if side == MEET else order_filter(s)
    side_name = _("lato meet") if side == MEET else _("lato join")

    if free != 0:
        require_lattice(p)
        pair = semimultiplicative_violation(f, p)
        if pair is not None:
            raise HypothesisError(
                _(
                    "Il limite {side} richiede f semimoltiplicativa: "
                    "f({x})f({y}) ≠ f({x}∧{y})f({x}∨{y})."
                ).format(side=side_name, x=pair[0], y=pair[1])
            )
        relevant = p.labels
    else:
        relevant = support.labels

    if not (free == 0 and spec.gamma == 0):
        for label in relevant:
            if f.value_at(label) == 0:
                raise HypothesisError(
                    _("Il limite {side} richiede f ≠ 0; f si annulla in '{label}'.").format(
                        side=side_name, label=label
                    )
                )


def _require_positive(conv, side):
    if side == MEET:
        text = _(
            "Il limite lato meet richiede (f_d^(α−β)∗μ_P)(0̂,w) > 0 su tutto ↓S; "
            "violata in w={label} (valore {value})."
        )
    else:
        text = _(
            "Il limite lato join richiede (μ_P∗f_u^(β−α))(w,1̂) > 0 su tutto ↑S; "
            "violata in w={label} (valore {value})."
        )
    for k, label in enumerate(conv.labels):
        value = conv.exact[k] if conv.exact is not None else conv.values[k]
        if not value > 0:
            raise HypothesisError(text.format(label=label, value=float(value)))


def _min_square_power(spec, exponent):
    """min_i [f(x_i)²]^e."""
    values = []
    for i in spec.subset.members:
        value = spec.f.value(i)
        values.append(float(raw_power(value * value, exponent)))
    return min(values)


def _holds(bound, true_kappa):
    return bound <= true_kappa + BOUND_TOL * max(1.0, abs(true_kappa))


# ---------------------------------------------------------------------------
# Limiti inferiori
# ---------------------------------------------------------------------------


def lower_bound_meet(spec, c, tol=DEFAULT_EIGEN_TOL):
    """
    κ(M) ≥ c_n · min_i (f_d^{α−β}∗μ_P)(0̂,x_i) · min_i [f(x_i)²]^{β−γ}.

    Args:
        spec: CombinedSpec con γ = δ.
        c: ConstantValue per n = |S|.

    Returns:
        BoundReport con il limite e κ(M) calcolato direttamente.
    """
    _require_symmetric(spec)
    _require_constant_size(spec, c)
    _check_common(spec, MEET)
    conv = down_convolution(spec.f, spec.alpha - spec.beta, spec.subset)
    _require_positive(conv, MEET)

    n = spec.n
    min_conv = min(conv.values[:n])
    min_fpow = _min_square_power(spec, spec.beta - spec.gamma)
    bound = c.value * min_conv * min_fpow
    true_kappa = min(abs(v) for v in eigen_symmetric(combined_matrix(spec), tol).eigenvalues)
    return BoundReport(
        side=MEET,
        n=n,
        bound=bound,
        c_value=c.value,
        c_provenance=c.provenance,
        min_conv=min_conv,
        min_fpow=min_fpow,
        true_kappa=true_kappa,
        holds=_holds(bound, true_kappa),
    )


def lower_bound_join(spec, c, tol=DEFAULT_EIGEN_TOL):
    """κ(M) ≥ c_n · min_i (μ_P∗f_u^{β−α})(x_i,1̂) · min_i [f(x_i)²]^{α−γ}."""
    _require_symmetric(spec)
    _require_constant_size(spec, c)
    _check_common(spec, JOIN)
    conv = up_convolution(spec.f, spec.beta - spec.alpha, spec.subset)
    _require_positive(conv, JOIN)

    n = spec.n
    min_conv = min(conv.values[:n])
    min_fpow = _min_square_power(spec, spec.alpha - spec.gamma)
    bound = c.value * min_conv * min_fpow
    true_kappa = min(abs(v) for v in eigen_symmetric(combined_matrix(spec), tol).eigenvalues)
    return BoundReport(
        side=JOIN,
        n=n,
        bound=bound,
        c_value=c.value,
        c_provenance=c.provenance,
        min_conv=min_conv,
        min_fpow=min_fpow,
        true_kappa=true_kappa,
        holds=_holds(bound, true_kappa),
    )


def lower_bounds_both(spec, c, tol=DEFAULT_EIGEN_TOL):
    """
    Entrambi i limiti, senza scegliere il migliore.
    Restituisce una lista di tuple (lato, BoundReport o None, motivo o None).
    """
    results = []
    for side, compute in ((MEET, lower_bound_meet), (JOIN, lower_bound_join)):
        try:
            results.append((side, compute(spec, c, tol), None))
        except HypothesisError as e:
            results.append((side, None, str(e)))
    return results


# ---------------------------------------------------------------------------
# Regioni di inclusione
# ---------------------------------------------------------------------------


def _check_ratio_condition(spec, exponent, side):
    """|f(x∧y)f(x∨y)/(f(x)f(y))|^e ≤ 1 su tutte le coppie di S."""
    g = g_matrix(spec.subset, spec.f, exponent)
    labels = spec.subset.labels
    bad = np.argwhere(np.abs(g) > 1.0 + REGION_TOL)
    if len(bad):
        a, b = bad[0]
        raise HypothesisError(
            _(
                "La regione {side} richiede |f(x∧y)f(x∨y)/(f(x)f(y))|^{e} ≤ 1; "
                "violata sulla coppia ({x}, {y}) con valore {value:.6g}."
            ).format(
                side=side, e=exponent, x=labels[a], y=labels[b], value=float(abs(g[a, b]))
            )
        )


def _region(spec, C, side, d, scale_exponent, tol):
    s, f = spec.subset, spec.f
    max_fpow = max(float(raw_power(abs(f.value(i)), 2 * scale_exponent)) for i in s.members)
    H = C.value * max_fpow * float(np.max(np.abs(d)))

    center_exponent = spec.alpha + spec.beta - 2 * spec.gamma
    discs = []
    for i in s.members:
        center = float(power_at(f, i, center_exponent))
        discs.append((center, H - abs(center)))

    eigenvalues = eigen_symmetric(combined_matrix(spec), tol).eigenvalues
    slack = REGION_TOL * max(1.0, abs(H))
    contained = all(
        any(abs(lam - center) <= radius + slack for center, radius in discs)
        for lam in eigenvalues
    )
    return RegionReport(
        side=side,
        n=spec.n,
        discs=discs,
        d_values=[float(v) for v in d],
        H=H,
        C_value=C.value,
        C_provenance=C.provenance,
        eigenvalues=list(eigenvalues),
        contained=contained,
    )


def region_meet_closed(spec, C, tol=DEFAULT_EIGEN_TOL):
    """
    Dischi centrati in f(x_k)^{α+β−2γ} con raggio H − |f(x_k)|^{α+β−2γ},
    H = C_n · max_i |f(x_i)|^{2(β−γ)} · max_i |d_i| e d dalla fattorizzazione
    E D Eᵀ di (S)_{f^{α−β}}.
    """
    _require_symmetric(spec)
    _require_constant_size(spec, C)
    if not is_meet_closed(spec.subset):
        raise HypothesisError(_("La regione lato meet richiede S chiuso rispetto al meet."))
    _check_ratio_condition(spec, spec.beta, _("lato meet"))
    _e, d = factor_meet_closed(spec.subset, spec.f, spec.alpha - spec.beta)
    return _region(spec, C, MEET, d, spec.beta - spec.gamma, tol)


def region_join_closed(spec, C, tol=DEFAULT_EIGEN_TOL):
    """Duale di region_meet_closed: d da Eᵀ D E di [S]_{f^{β−α}}, scala |f|^{2(α−γ)}."""
    _require_symmetric(spec)
    _require_constant_size(spec, C)
    if not is_join_closed(spec.subset):
        raise HypothesisError(_("La regione lato join richiede S chiuso rispetto al join."))
    _check_ratio_condition(spec, spec.alpha, _("lato join"))
    _e, d = factor_join_closed(spec.subset, spec.f, spec.beta - spec.alpha)
    return _region(spec, C, JOIN, d, spec.alpha - spec.gamma, tol)


def interval_from_discs(report):
    """Il più piccolo intervallo reale che copre tutti i dischi non vuoti."""
    discs = report.nonempty_discs
    if not discs:
        raise EmptyRegionError(_("Regione vuota: tutti i raggi sono negativi."))
    lo = min(center - radius for center, radius in discs)
    hi = max(center + radius for center, radius in discs)
    return lo, hi


# ---------------------------------------------------------------------------
# Forme chiuse per le famiglie su {1, ..., n}
# ---------------------------------------------------------------------------


def divisor_family_lower_bound(n, alpha, beta, c_value):
    """κ(A_n^{α,β}) ≥ c_n · min_i J_{α−β}(i) · min{1, n^{2β}}."""
    min_j = min(float(jordan_totient(i, alpha - beta)) for i in range(1, n + 1))
    return c_value * min_j * min(1.0, float(n) ** (2 * float(beta)))


def divisor_family_interval(n, alpha, beta, C_value):
    """[2·min{1, n^{α+β}} − H_n, H_n] con H_n = C_n · max{1, n^{2β}} · max_i |J_{α−β}(i)|."""
    max_j = max(abs(float(jordan_totient(i, alpha - beta))) for i in range(1, n + 1))
    h = C_value * max(1.0, float(n) ** (2 * float(beta))) * max_j
    return 2.0 * min(1.0, float(n) ** float(alpha + beta)) - h, h


def gcd_over_lcm_interval(n, alpha, C_value):
    """Intervallo per (gcd/mcm)^α, α > 0: [2 − H_n, H_n] con H_n = C_n · max_i J_{2α}(i)."""
    return divisor_family_interval(n, alpha, -alpha, C_value)


def gcd_over_lcm_half_interval(n, C_value):
    """α = 1/2: [2 − C_n(n−1), C_n(n−1)]; contiene sempre gcd_over_lcm_interval(n, 1/2, C_n)."""
    return 2.0 - C_value * (n - 1), C_value * (n - 1)
