"""
Insiemi parzialmente ordinati finiti e reticoli.

Gli elementi sono etichette opache (stringhe) mappate su indici densi; la
relazione d'ordine è memorizzata come chiusura transitiva completa e l'elenco
degli elementi è sempre un'estensione lineare. Meet e join di tutte le coppie
sono tabulati alla costruzione, la funzione di Möbius al primo utilizzo.
"""

import builtins
from functools import reduce

import networkx as nx
import numpy as np
import sympy

from models import (
    Poset,
    ElementSubset,
    MobiusTable,
    PosetError,
    NotALatticeError,
    NO_BOUND,
    NOT_UNIQUE,
)

_ = getattr(builtins, "_", lambda s: s)


# ---------------------------------------------------------------------------
# Costruzione
# ---------------------------------------------------------------------------


def _covers_from_leq(leq):
    """Relazioni di copertura (diagramma di Hasse) ricavate dalla chiusura transitiva."""
    strict = leq & ~np.eye(len(leq), dtype=bool)
    # x ≺ z ≺ y per qualche z
    through = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
    rows, cols = np.nonzero(strict & ~through)
    return sorted(zip(rows.tolist(), cols.tolist()))


def _bound_table(leq, lower):
    """
    Tabella dei meet (lower=True) o dei join. Con gli elementi in estensione lineare
    l'unico candidato a massimo dei minoranti comuni è quello di indice più alto
    (dualmente il minimo dei maggioranti è quello di indice più basso).
    """
    size = len(leq)
    table = np.full((size, size), NO_BOUND, dtype=np.int64)
    for x in range(size):
        for y in range(x, size):
            if lower:
                common = np.nonzero(leq[:, x] & leq[:, y])[0]
            else:
                common = np.nonzero(leq[x, :] & leq[y, :])[0]
            if len(common) == 0:
                result = NO_BOUND
            else:
                candidate = common[-1] if lower else common[0]
                if lower:
                    unique = bool(leq[common, candidate].all())
                else:
                    unique = bool(leq[candidate, common].all())
                result = int(candidate) if unique else NOT_UNIQUE
            table[x, y] = result
            table[y, x] = result
    return table


def _check_partial_order(leq):
    size = len(leq)
    if not leq[np.arange(size), np.arange(size)].all():
        raise PosetError(_("La relazione non è riflessiva."))
    off = leq & leq.T & ~np.eye(size, dtype=bool)
    if off.any():
        i, j = np.argwhere(off)[0]
        raise PosetError(
            _("La relazione non è antisimmetrica (elementi {i} e {j}).").format(i=i, j=j)
        )
    as_int = leq.astype(np.int64)
    if (((as_int @ as_int) > 0) & ~leq).any():
        raise PosetError(_("La relazione non è transitiva."))
    if np.triu(leq).sum() != leq.sum():
        # ogni x ⪯ y deve avere index(x) ≤ index(y)
        raise PosetError(_("L'ordine degli elementi non è un'estensione lineare."))


def _build(labels, leq, covers=None, name=""):
    leq = np.asarray(leq, dtype=bool)
    _check_partial_order(leq)
    if covers is None:
        covers = _covers_from_leq(leq)
    return Poset(
        labels=list(labels),
        leq=leq,
        covers=list(covers),
        meet_table=_bound_table(leq, lower=True),
        join_table=_bound_table(leq, lower=False),
        name=name,
    )


def from_cover_relations(labels, covers, name=""):
    """
    Costruisce un poset dalle relazioni di copertura (x, y) = "x coperto da y".
    Gli elementi vengono riordinati in un ordine topologico stabile rispetto
    all'ordine di input.

    Raises:
        PosetError: etichetta duplicata, estremo di copertura sconosciuto, ciclo.
    """
    labels = [str(label) for label in labels]
    seen = set()
    for label in labels:
        if label in seen:
            raise PosetError(_("Etichetta duplicata: '{label}'.").format(label=label))
        seen.add(label)

    graph = nx.DiGraph()
    graph.add_nodes_from(labels)
    for x, y in covers:
        x, y = str(x), str(y)
        for endpoint in (x, y):
            if endpoint not in seen:
                raise PosetError(
                    _("Copertura ({x}, {y}) con estremo sconosciuto '{label}'.").format(
                        x=x, y=y, label=endpoint
                    )
                )
        graph.add_edge(x, y)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        path = " -> ".join([edge[0] for edge in cycle] + [cycle[-1][1]])
        raise PosetError(_("Ciclo nelle relazioni di copertura: {path}.").format(path=path))

    position = {label: k for k, label in enumerate(labels)}
    order = list(nx.lexicographical_topological_sort(graph, key=position.__getitem__))
    new_index = {label: k for k, label in enumerate(order)}

    closure = nx.transitive_closure_dag(graph)
    size = len(order)
    leq = np.eye(size, dtype=bool)
    for x, y in closure.edges():
        leq[new_index[x], new_index[y]] = True

    # Le coperture dichiarate possono includere relazioni ridondanti: il diagramma
    # di Hasse viene ricalcolato dalla chiusura.
    return _build(order, leq, name=name)


def divisor_poset(integers, name=""):
    """Interi positivi ordinati per divisibilità; elementi in ordine crescente."""
    values = sorted({int(v) for v in integers})
    for v in values:
        if v < 1:
            raise PosetError(
                _("Il poset dei divisori accetta solo interi positivi, trovato {value}.").format(
                    value=v
                )
            )
    arr = np.array(values, dtype=np.int64)
    leq = (arr[None, :] % arr[:, None]) == 0
    return _build([str(v) for v in values], leq, name=name or "divisors")


def divisor_lattice(m):
    """Reticolo di tutti i divisori di m."""
    if int(m) < 1:
        raise PosetError(_("m deve essere un intero positivo."))
    return divisor_poset(sympy.divisors(int(m)), name=f"divlat:{int(m)}")


def chain_poset(n):
    """Catena 1 < 2 < ... < n."""
    if int(n) < 1:
        raise PosetError(_("Una catena richiede almeno un elemento."))
    n = int(n)
    leq = np.triu(np.ones((n, n), dtype=bool))
    covers = [(i, i + 1) for i in range(n - 1)]
    return _build([str(i) for i in range(1, n + 1)], leq, covers, name=f"chain:{n}")


def dual_poset(p):
    """Poset duale: stesso insieme, ordine rovesciato; elenco invertito per restare in estensione lineare."""
    reverse = list(range(len(p) - 1, -1, -1))
    leq = p.leq.T[np.ix_(reverse, reverse)]
    labels = [p.labels[i] for i in reverse]
    return _build(labels, leq, name=f"dual({p.name})")


# ---------------------------------------------------------------------------
# Meet, join, reticoli
# ---------------------------------------------------------------------------


def _bound_index(p, i, j, lower):
    table = p.meet_table if lower else p.join_table
    result = int(table[i, j])
    if result == NO_BOUND:
        what = _("minorante") if lower else _("maggiorante")
        raise NotALatticeError(
            _("'{x}' e '{y}' non hanno alcun {what} comune.").format(
                x=p.labels[i], y=p.labels[j], what=what
            )
        )
    if result == NOT_UNIQUE:
        what = _("meet") if lower else _("join")
        raise NotALatticeError(
            _("Il {what} di '{x}' e '{y}' non è unico: non è un reticolo su questa coppia.").format(
                what=what, x=p.labels[i], y=p.labels[j]
            )
        )
    return result


def meet_index(p, i, j):
    return _bound_index(p, i, j, lower=True)


def join_index(p, i, j):
    return _bound_index(p, i, j, lower=False)


def meet(p, x, y):
    """Massimo dei minoranti comuni di x e y (etichetta)."""
    return p.labels[meet_index(p, p.index_of(x), p.index_of(y))]


def join(p, x, y):
    """Minimo dei maggioranti comuni di x e y (etichetta)."""
    return p.labels[join_index(p, p.index_of(x), p.index_of(y))]


def is_lattice(p):
    return bool((p.meet_table >= 0).all() and (p.join_table >= 0).all())


def require_lattice(p):
    if not is_lattice(p):
        bad = np.argwhere((p.meet_table < 0) | (p.join_table < 0))[0]
        raise NotALatticeError(
            _("'{name}' non è un reticolo: la coppia ({x}, {y}) non ha meet o join unico.").format(
                name=p.name or "P", x=p.labels[bad[0]], y=p.labels[bad[1]]
            )
        )


# ---------------------------------------------------------------------------
# Sottoinsiemi, ideali, filtri
# ---------------------------------------------------------------------------


def make_subset(p, members, reorder=False):
    """
    Sottoinsieme S = (x_1, ..., x_n) di p. Gli indici devono rispettare la condizione
    x_i ⪯ x_j ⇒ i ≤ j; con reorder=True i membri vengono ordinati secondo
    l'estensione lineare di p.
    """
    indices = [p.index_of(x) for x in members]
    if len(set(indices)) != len(indices):
        raise PosetError(_("Il sottoinsieme contiene elementi ripetuti."))
    if not indices:
        raise PosetError(_("Il sottoinsieme è vuoto."))
    if reorder:
        indices = sorted(indices)
    for a in range(len(indices)):
        for b in range(a):
            if p.leq[indices[a], indices[b]]:
                raise PosetError(
                    _(
                        "Ordine del sottoinsieme non valido: '{x}' ⪯ '{y}' ma '{x}' compare dopo."
                    ).format(x=p.labels[indices[a]], y=p.labels[indices[b]])
                )
    return ElementSubset(parent=p, members=indices)


def full_subset(p):
    return ElementSubset(parent=p, members=list(range(len(p))))


def _closed(s, lower):
    p = s.parent
    inside = set(s.members)
    for a in s.members:
        for b in s.members:
            if b < a:
                continue
            if _bound_index(p, a, b, lower) not in inside:
                return False
    return True


def is_meet_closed(s):
    return _closed(s, lower=True)


def is_join_closed(s):
    return _closed(s, lower=False)


def order_ideal(s):
    """
    ↓S: prima i membri di S nel loro ordine, poi gli altri elementi dell'ideale
    nell'ordine di p.
    """
    p = s.parent
    if not p.has_bottom:
        raise PosetError(
            _("L'ideale generato da S richiede un minimo 0̂ (restringere prima all'intervallo).")
        )
    below = p.leq[:, s.members].any(axis=1)
    inside = set(s.members)
    rest = [i for i in np.nonzero(below)[0].tolist() if i not in inside]
    return ElementSubset(parent=p, members=list(s.members) + rest)


def order_filter(s):
    """↑S con i membri di S in testa (duale di order_ideal)."""
    p = s.parent
    if not p.has_top:
        raise PosetError(
            _("Il filtro generato da S richiede un massimo 1̂ (restringere prima all'intervallo).")
        )
    above = p.leq[s.members, :].any(axis=0)
    inside = set(s.members)
    rest = [i for i in np.nonzero(above)[0].tolist() if i not in inside]
    return ElementSubset(parent=p, members=list(s.members) + rest)


# ---------------------------------------------------------------------------
# Intervalli
# ---------------------------------------------------------------------------


def interval(p, a, b):
    """Sotto-poset ⟦a,b⟧ = {z : a ⪯ z ⪯ b}."""
    ia, ib = p.index_of(a), p.index_of(b)
    if not p.leq[ia, ib]:
        raise PosetError(_("Intervallo vuoto: '{a}' ⋠ '{b}'.").format(a=a, b=b))
    keep = np.nonzero(p.leq[ia, :] & p.leq[:, ib])[0]
    position = {old: new for new, old in enumerate(keep.tolist())}
    covers = [
        (position[x], position[y]) for x, y in p.covers if x in position and y in position
    ]
    return _build(
        [p.labels[i] for i in keep],
        p.leq[np.ix_(keep, keep)],
        covers,
        name=f"[{p.labels[ia]},{p.labels[ib]}]",
    )


def bounding_interval(s):
    """⟦∧S, ∨S⟧ nel poset di S."""
    p = s.parent
    low = reduce(lambda a, b: meet_index(p, a, b), s.members)
    high = reduce(lambda a, b: join_index(p, a, b), s.members)
    return interval(p, p.labels[low], p.labels[high])


def restrict_to_bounding_interval(s):
    """Lo stesso S, ricollocato dentro ⟦∧S, ∨S⟧ (che ha sempre minimo e massimo)."""
    q = bounding_interval(s)
    return make_subset(q, s.labels)


# ---------------------------------------------------------------------------
# Funzione di Möbius
# ---------------------------------------------------------------------------


def _mobius_from_left(leq):
    # μ(x,x) = 1, μ(x,y) = −Σ_{x⪯z≺y} μ(x,z)
    size = len(leq)
    mu = np.zeros((size, size), dtype=np.int64)
    for x in range(size):
        mu[x, x] = 1
        for y in range(x + 1, size):
            if leq[x, y]:
                between = leq[x, :y] & leq[:y, y]
                mu[x, y] = -mu[x, :y][between].sum()
    return mu


def _mobius_from_right(leq):
    # μ(y,y) = 1, μ(x,y) = −Σ_{x≺z⪯y} μ(z,y)
    size = len(leq)
    mu = np.zeros((size, size), dtype=np.int64)
    for y in range(size):
        mu[y, y] = 1
        for x in range(y - 1, -1, -1):
            if leq[x, y]:
                between = leq[x, x + 1 :] & leq[x + 1 :, y]
                mu[x, y] = -mu[x + 1 :, y][between].sum()
    return mu


def mobius(p):
    """Tabella μ_P(x,y) per x ⪯ y, calcolata nei due versi e confrontata."""
    if p.mobius_cache is None:
        left = _mobius_from_left(p.leq)
        right = _mobius_from_right(p.leq)
        if not np.array_equal(left, right):
            raise ArithmeticError(
                _("Le due ricorsioni di Möbius non coincidono: tabella incoerente.")
            )
        p.mobius_cache = MobiusTable(parent=p, values=left)
    return p.mobius_cache
