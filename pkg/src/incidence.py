"""
Funzioni reali su un poset e le due convoluzioni con la funzione di Möbius
(funzioni d'incidenza ristrette f_d e f_u).
"""

import builtins
import math
from fractions import Fraction

import numpy as np
import sympy

from models import PosetFunction, ConvolutionVector, PowerError, PosetError
from poset import mobius, order_ideal, order_filter, meet_index, join_index, require_lattice
from utils import is_integral, is_exact
from config import SEMIMULT_TOL

_ = getattr(builtins, "_", lambda s: s)


# ---------------------------------------------------------------------------
# Funzioni di serie
# ---------------------------------------------------------------------------


def identity_function(p):
    """N(x) = x su un poset con etichette intere."""
    values = {}
    for label in p.labels:
        try:
            values[label] = int(label)
        except ValueError:
            raise PosetError(
                _("La funzione N richiede etichette intere, trovato '{label}'.").format(
                    label=label
                )
            ) from None
    return PosetFunction(parent=p, values=values, name="N")


def constant_function(p, c):
    return PosetFunction(parent=p, values={label: c for label in p.labels}, name=f"const:{c}")


def function_from_values(p, mapping, name="f"):
    values = {}
    for label, value in mapping.items():
        p.index_of(label)
        values[str(label)] = value
    return PosetFunction(parent=p, values=values, name=name)


def restrict_function(f, p):
    """f ristretta a un sotto-poset p (stesse etichette)."""
    values = {label: f.values[label] for label in p.labels if label in f.values}
    return PosetFunction(parent=p, values=values, name=f.name)


def reciprocal_function(f):
    """1/f, esatta quando f è esatta."""
    values = {}
    for label, value in f.values.items():
        if value == 0:
            raise PowerError(_("1/f non è definita dove f si annulla ('{label}').").format(label=label))
        values[label] = Fraction(1) / value if is_exact(value) else 1.0 / value
    return PosetFunction(parent=f.parent, values=values, name=f"1/{f.name}")


def jordan_totient(m, k):
    """J_k(m) = m^k ∏_{p|m} (1 − p^{−k}); intero esatto per k intero positivo."""
    m = int(m)
    primes = sympy.primefactors(m)
    if is_integral(k) and k > 0:
        k = int(k)
        result = m**k
        for prime in primes:
            result = result // prime**k * (prime**k - 1)
        return result
    result = float(m) ** float(k)
    for prime in primes:
        result *= 1.0 - float(prime) ** (-float(k))
    return result


# ---------------------------------------------------------------------------
# Potenze
# ---------------------------------------------------------------------------


def raw_power(base, alpha):
    """
    base^alpha con la convenzione 0⁰ = 1. Aritmetica esatta (Fraction) quando la
    base è esatta e l'esponente è intero, altrimenti float.

    Raises:
        PowerError: 0 a esponente negativo, base negativa a esponente non intero,
        overflow.
    """
    if base == 0:
        if alpha == 0:
            return 1
        if alpha > 0:
            return 0
        raise PowerError(_("0 elevato all'esponente negativo {alpha}.").format(alpha=alpha))
    integral = is_integral(alpha)
    if base < 0 and not integral:
        raise PowerError(
            _("Base negativa {base} con esponente non intero {alpha}.").format(
                base=base, alpha=alpha
            )
        )
    if is_exact(base) and integral:
        return Fraction(base) ** int(alpha)
    try:
        if integral:
            result = float(base) ** int(alpha)
        else:
            result = float(base) ** float(alpha)
    except OverflowError:
        raise PowerError(
            _("Overflow nel calcolo di {base}^{alpha}.").format(base=base, alpha=alpha)
        ) from None
    if not math.isfinite(result):
        raise PowerError(_("Overflow nel calcolo di {base}^{alpha}.").format(base=base, alpha=alpha))
    return result


def power_value(f, x, alpha):
    """f(x)^alpha per l'elemento con etichetta x."""
    value = f.value_at(x)
    try:
        return raw_power(value, alpha)
    except PowerError as e:
        raise PowerError(
            _("f({label})^{alpha} non definita: {reason}").format(label=x, alpha=alpha, reason=e)
        ) from None


def power_at(f, index, alpha):
    """Come power_value ma per indice denso."""
    value = f.value(index)
    try:
        return raw_power(value, alpha)
    except PowerError as e:
        raise PowerError(
            _("f({label})^{alpha} non definita: {reason}").format(
                label=f.parent.labels[index], alpha=alpha, reason=e
            )
        ) from None


# ---------------------------------------------------------------------------
# Convoluzioni
# ---------------------------------------------------------------------------


def _convolve(f, alpha, support, down):
    p = f.parent
    mu = mobius(p).values
    cache = {}

    def pw(z):
        if z not in cache:
            cache[z] = power_at(f, z, alpha)
        return cache[z]

    exact_values = []
    all_exact = True
    float_values = []
    for w in support.members:
        if down:
            terms = [(z, mu[z, w]) for z in np.nonzero(p.leq[:, w])[0].tolist()]
        else:
            terms = [(z, mu[w, z]) for z in np.nonzero(p.leq[w, :])[0].tolist()]
        powers = [(pw(z), int(m)) for z, m in terms if m != 0]
        if all_exact and all(is_exact(v) for v, _m in powers):
            exact_values.append(sum((Fraction(v) * m for v, m in powers), Fraction(0)))
        else:
            all_exact = False
        float_values.append(math.fsum(float(v) * m for v, m in powers))

    if all_exact:
        values = [float(v) for v in exact_values]
        exact = exact_values
    else:
        values = float_values
        exact = None
    return ConvolutionVector(
        direction="down" if down else "up",
        exponent=alpha,
        labels=support.labels,
        values=values,
        exact=exact,
    )


def down_convolution(f, alpha, s):
    """entry(w) = Σ_{0̂⪯z⪯w} f(z)^α μ_P(z,w) per ogni w in ↓S (ordine di order_ideal)."""
    return _convolve(f, alpha, order_ideal(s), down=True)


def up_convolution(f, alpha, s):
    """entry(w) = Σ_{w⪯z⪯1̂} μ_P(w,z) f(z)^α per ogni w in ↑S (ordine di order_filter)."""
    return _convolve(f, alpha, order_filter(s), down=False)


# ---------------------------------------------------------------------------
# Semimoltiplicatività
# ---------------------------------------------------------------------------


def semimultiplicative_violation(f, p, tol=SEMIMULT_TOL):
    """Prima coppia (x, y) con f(x)f(y) ≠ f(x∧y)f(x∨y), oppure None."""
    require_lattice(p)
    size = len(p)
    values = [float(f.value(i)) for i in range(size)]
    for x in range(size):
        for y in range(x + 1, size):
            lhs = values[x] * values[y]
            rhs = values[meet_index(p, x, y)] * values[join_index(p, x, y)]
            if abs(lhs - rhs) > tol * max(1.0, abs(lhs)):
                return (p.labels[x], p.labels[y])
    return None


def is_semimultiplicative(f, p, tol=SEMIMULT_TOL):
    return semimultiplicative_violation(f, p, tol) is None
