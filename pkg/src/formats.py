"""
Formati testuali: poset, funzioni, esponenti, matrici CSV, checkpoint della
ricerca e registro CSV dei risultati.

Poset (UTF-8, una direttiva per riga, '#' introduce un commento):

    elements: a b c d
    covers:
    a b
    a c
    b d
    c d

oppure, in forma abbreviata, `divisors: 1 2 3 4 6 12` (spazi o virgole).
Funzione: una coppia `etichetta valore` per riga; i valori possono essere interi,
frazioni `p/q` o decimali.
"""

import builtins
import csv
import io
import os

import networkx as nx
import numpy as np

from models import (
    FormatError,
    PosetError,
    ChunkCheckpoint,
    SearchResult,
)
from poset import from_cover_relations, divisor_poset, divisor_lattice, chain_poset
from incidence import identity_function, constant_function, function_from_values
from utils import parse_number, format_number, format_sig, atomic_write_text
from config import LEDGER_HEADER, CSV_DIGITS, TABLE_DIGITS

_ = getattr(builtins, "_", lambda s: s)


def _split_items(text):
    return [item for item in text.replace(",", " ").split() if item]


def _content_lines(text):
    """(numero di riga, contenuto) saltando righe vuote e commenti."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


# ---------------------------------------------------------------------------
# Poset
# ---------------------------------------------------------------------------


def _parse_positive_ints(items, line):
    values = []
    for item in items:
        try:
            value = int(item)
        except ValueError:
            raise FormatError(_("'{item}' non è un intero.").format(item=item), line) from None
        if value < 1:
            raise FormatError(_("'{item}' non è un intero positivo.").format(item=item), line)
        values.append(value)
    return values


def parse_poset_text(text, name=""):
    """Interpreta il formato poset descritto in testa al modulo."""
    labels = None
    labels_line = None
    covers = []
    graph = nx.DiGraph()
    in_covers = False
    for number, line in _content_lines(text):
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if sep and key == "divisors":
            if labels is not None or covers:
                raise FormatError(_("'divisors:' non può essere combinato con altre direttive."), number)
            values = _parse_positive_ints(_split_items(rest), number)
            if not values:
                raise FormatError(_("Elenco di divisori vuoto."), number)
            return divisor_poset(values, name=name or "divisors")
        if sep and key == "elements":
            if labels is not None:
                raise FormatError(_("Direttiva 'elements:' ripetuta."), number)
            labels = _split_items(rest)
            labels_line = number
            seen = set()
            for label in labels:
                if label in seen:
                    raise FormatError(_("Etichetta duplicata: '{label}'.").format(label=label), number)
                seen.add(label)
            in_covers = False
            continue
        if sep and key == "covers":
            if rest.strip():
                raise FormatError(_("'covers:' va seguito da una coppia per riga."), number)
            in_covers = True
            continue
        if not in_covers:
            raise FormatError(_("Riga non riconosciuta: '{line}'.").format(line=line), number)
        pair = line.split()
        if len(pair) != 2:
            raise FormatError(_("Una copertura richiede esattamente due etichette."), number)
        if labels is None:
            raise FormatError(_("'elements:' deve precedere le coperture."), number)
        for endpoint in pair:
            if endpoint not in labels:
                raise FormatError(
                    _("Copertura con estremo sconosciuto '{label}'.").format(label=endpoint), number
                )
        x, y = pair
        if x == y or (graph.has_node(x) and graph.has_node(y) and nx.has_path(graph, y, x)):
            raise FormatError(
                _("La copertura ({x}, {y}) chiude un ciclo.").format(x=x, y=y), number
            )
        graph.add_edge(x, y)
        covers.append((x, y))

    if labels is None:
        raise FormatError(_("Manca la direttiva 'elements:'."))
    if not labels:
        raise FormatError(_("Elenco di elementi vuoto."), labels_line)
    try:
        return from_cover_relations(labels, covers, name=name)
    except PosetError as e:
        raise FormatError(str(e)) from None


def _single_int(text):
    items = _split_items(text)
    if len(items) != 1:
        raise FormatError(_("Atteso un solo intero positivo, ricevuto '{text}'.").format(text=text))
    return _parse_positive_ints(items, None)[0]


def _read_text(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise FormatError(
            _("Impossibile leggere '{path}': {error}").format(path=path, error=e)
        ) from None


def load_poset_source(source):
    """`divisors:d1,d2,...`, `divlat:m`, `chain:n` oppure il percorso di un file poset."""
    key, sep, rest = source.partition(":")
    key = key.strip().lower()
    if sep and key == "divisors":
        values = _parse_positive_ints(_split_items(rest), None)
        if not values:
            raise FormatError(_("Elenco di divisori vuoto."))
        return divisor_poset(values, name=source)
    if sep and key == "divlat":
        return divisor_lattice(_single_int(rest))
    if sep and key == "chain":
        return chain_poset(_single_int(rest))
    name = os.path.splitext(os.path.basename(source))[0]
    return parse_poset_text(_read_text(source), name=name)


def parse_label_list(text):
    labels = _split_items(text or "")
    if not labels:
        raise FormatError(_("Elenco di etichette vuoto."))
    return labels


# ---------------------------------------------------------------------------
# Funzioni ed esponenti
# ---------------------------------------------------------------------------


def parse_function_text(text, poset, name="f"):
    values = {}
    for number, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(_("Attesa una coppia 'etichetta valore'."), number)
        label, raw = parts
        if label not in poset.index:
            raise FormatError(_("Elemento '{label}' non presente nel poset.").format(label=label), number)
        if label in values:
            raise FormatError(_("Valore ripetuto per '{label}'.").format(label=label), number)
        try:
            values[label] = parse_number(raw)
        except (ValueError, ZeroDivisionError):
            raise FormatError(_("'{value}' non è un numero.").format(value=raw), number) from None
    return function_from_values(poset, values, name=name)


def load_function_source(source, poset):
    """`N`, `const:c` oppure il percorso di un file funzione."""
    source = (source or "N").strip()
    if source == "N":
        return identity_function(poset)
    key, sep, rest = source.partition(":")
    if sep and key.strip().lower() == "const":
        try:
            return constant_function(poset, parse_number(rest))
        except (ValueError, ZeroDivisionError):
            raise FormatError(_("Costante non valida: '{value}'.").format(value=rest)) from None
    name = os.path.splitext(os.path.basename(source))[0]
    return parse_function_text(_read_text(source), poset, name=name)


def parse_exponents(text):
    """'a,b,g,d' -> quattro numeri; 'p/q' diventa una Fraction esatta."""
    items = [item.strip() for item in (text or "").split(",")]
    if len(items) != 4 or not all(items):
        raise FormatError(_("Servono quattro esponenti 'α,β,γ,δ', ricevuto '{text}'.").format(text=text))
    try:
        return tuple(parse_number(item) for item in items)
    except (ValueError, ZeroDivisionError):
        raise FormatError(_("Esponente non valido in '{text}'.").format(text=text)) from None


# ---------------------------------------------------------------------------
# Matrici
# ---------------------------------------------------------------------------


def matrix_to_csv(m, digits=CSV_DIGITS):
    """Una riga per riga di matrice, 17 cifre significative: la rilettura è esatta."""
    m = np.asarray(m)
    return "".join(",".join(format_number(v, digits) for v in row) + "\n" for row in m)


def matrix_from_csv(text):
    rows = []
    for number, line in _content_lines(text):
        try:
            rows.append([float(item) for item in line.split(",")])
        except ValueError:
            raise FormatError(_("Valore non numerico."), number) from None
        if rows and len(rows[-1]) != len(rows[0]):
            raise FormatError(_("Righe di lunghezza diversa."), number)
    return np.array(rows, dtype=float)


def matrix_to_pretty(m, digits=TABLE_DIGITS, labels=None):
    """Colonne allineate a destra, per documentazione."""
    m = np.asarray(m)
    cells = [[format_sig(v, digits) for v in row] for row in m]
    header = list(labels) if labels is not None else None
    row_names = list(labels) if labels is not None else [""] * len(cells)
    widths = [
        max([len(cells[r][c]) for r in range(len(cells))] + ([len(header[c])] if header else []))
        for c in range(m.shape[1] if m.ndim == 2 else 0)
    ]
    name_width = max([len(name) for name in row_names] + [0])
    lines = []
    if header:
        lines.append(" " * name_width + "  " + "  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for name, row in zip(row_names, cells):
        prefix = name.rjust(name_width) + "  " if name_width else ""
        lines.append(prefix + "  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Checkpoint e registro dei risultati
# ---------------------------------------------------------------------------

_CHECKPOINT_KEYS = ("n", "extremum", "lo", "hi", "scanned", "best_value", "best_bits")


def write_checkpoint(path, checkpoint):
    data = checkpoint.to_dict()
    lines = ["# latmat checkpoint"]
    for key in _CHECKPOINT_KEYS:
        value = data[key]
        lines.append(f"{key}: {format_number(value) if isinstance(value, float) else value}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_checkpoint(path):
    data = {}
    for number, line in _content_lines(_read_text(path)):
        key, sep, value = line.partition(":")
        if not sep:
            raise FormatError(_("Riga di checkpoint non valida."), number)
        data[key.strip()] = value.strip()
    missing = [key for key in _CHECKPOINT_KEYS if key not in data]
    if missing:
        raise FormatError(
            _("Checkpoint incompleto, mancano: {keys}.").format(keys=", ".join(missing))
        )
    return ChunkCheckpoint.from_dict(data)


def append_ledger_row(path, result):
    """Accoda `n,extremum,value,witness_bits,scanned` al registro CSV (intestazione se nuovo)."""
    new_file = not os.path.exists(path) or os.path.getsize(path) == 0
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    data = result.to_dict()
    with open(path, "a", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        if new_file:
            writer.writerow(LEDGER_HEADER.split(","))
        writer.writerow(
            [data["n"], data["extremum"], format_number(data["value"]), data["witness_bits"], data["scanned"]]
        )


def read_ledger(path):
    text = _read_text(path)
    reader = csv.DictReader(io.StringIO(text))
    return [SearchResult.from_dict(row) for row in reader]
