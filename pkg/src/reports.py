"""
Testi dei report: una riga `chiave: valore` per campo (nomi stabili, numeri
indipendenti dalla lingua), elenchi CSV per i dischi e le tabelle.

Campi del report di un limite:
    side, n, c_value, c_provenance, min_conv, min_fpow, bound, true_kappa, holds
Campi del report di una regione:
    side, n, C_value, C_provenance, H, interval_lo, interval_hi, contained,
    eigenvalues, d_values, seguiti dall'elenco CSV `center,radius`.
"""

import os

from config import TABLE_DIGITS
from utils import format_number, format_sig, format_timestamp_locale, sanitize_filename
from formats import matrix_to_csv, matrix_to_pretty
from version import VERSIONE


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(v) for v in value)
    if isinstance(value, (int, float)):
        return format_number(value)
    return str(value)


def get_key_value_text(pairs):
    """Una riga `chiave: valore` per coppia, nell'ordine dato."""
    return "".join(f"{key}: {_format_value(value)}\n" for key, value in pairs)


def get_report_header(title):
    """Intestazione per l'output 'pretty' e per i file salvati."""
    return f"# {title}\n# Latmat {VERSIONE.splitlines()[0]}\n# {format_timestamp_locale()}\n"


def get_matrix_text(m, output_format="csv", labels=None):
    if output_format == "pretty":
        return matrix_to_pretty(m, labels=labels)
    return matrix_to_csv(m)


# ---------------------------------------------------------------------------
# Limiti e regioni
# ---------------------------------------------------------------------------


def get_bound_report_text(report):
    return get_key_value_text(
        [
            ("side", report.side),
            ("n", report.n),
            ("c_value", report.c_value),
            ("c_provenance", report.c_provenance),
            ("min_conv", report.min_conv),
            ("min_fpow", report.min_fpow),
            ("bound", report.bound),
            ("true_kappa", report.true_kappa),
            ("holds", report.holds),
        ]
    )


def get_bounds_text(results):
    """Report di entrambi i lati; un lato non applicabile riporta il motivo."""
    blocks = []
    for side, report, reason in results:
        if report is not None:
            blocks.append(get_bound_report_text(report))
        else:
            blocks.append(
                get_key_value_text([("side", side), ("applicable", False), ("reason", reason)])
            )
    return "\n".join(blocks)


def get_region_report_text(report, interval=None):
    pairs = [
        ("side", report.side),
        ("n", report.n),
        ("C_value", report.C_value),
        ("C_provenance", report.C_provenance),
        ("H", report.H),
    ]
    if interval is not None:
        pairs += [("interval_lo", interval[0]), ("interval_hi", interval[1])]
    pairs += [
        ("contained", report.contained),
        ("eigenvalues", report.eigenvalues),
        ("d_values", report.d_values),
    ]
    lines = [get_key_value_text(pairs), "center,radius\n"]
    lines += [f"{format_number(c)},{format_number(r)}\n" for c, r in report.discs]
    return "".join(lines)


# ---------------------------------------------------------------------------
# Costanti
# ---------------------------------------------------------------------------


def get_search_result_text(result):
    return get_key_value_text(
        [
            ("n", result.n),
            ("extremum", result.extremum),
            ("value", result.value),
            ("witness_bits", result.witness.bits),
            ("scanned", result.matrices_scanned),
        ]
    ) + matrix_to_csv(result.witness.to_matrix())


def get_conjecture_text(checks):
    lines = ["n,holds,c_n,kappa_y0\n"]
    for check in checks:
        lines.append(
            f"{check.n},{_format_value(check.holds)},{format_number(check.c_n)},{format_number(check.kappa_y0)}\n"
        )
    return "".join(lines)


def get_cn_table_text(rows, output_format="csv", digits=TABLE_DIGITS):
    """Tabella n | minorante via T_n | minorante via N₀ | c_n, a 6 cifre significative."""
    header = ["n", "tn_bound", "n0_bound", "c_n"]
    cells = [
        [str(row.n), format_sig(row.tn_bound, digits), format_sig(row.n0_bound, digits), format_sig(row.c_n, digits)]
        for row in rows
    ]
    if output_format != "pretty":
        return "".join(",".join(line) + "\n" for line in [header] + cells)
    widths = [max(len(line[c]) for line in [header] + cells) for c in range(len(header))]
    out = [
        "  ".join(cell.rjust(w) for cell, w in zip(line, widths)) + "\n" for line in [header] + cells
    ]
    out.insert(1, "  ".join("-" * w for w in widths) + "\n")
    return "".join(out)


# ---------------------------------------------------------------------------
# Salvataggio
# ---------------------------------------------------------------------------


def save_report_text(text, directory, title):
    """Salva il report in '<directory>/Latmat - <titolo>.txt' e ne restituisce il percorso."""
    filename = f"Latmat - {sanitize_filename(title)}.txt"
    path = os.path.join(directory, filename)
    with open(path, "w", encoding="utf-8") as f:
        f.write(get_report_header(title))
        f.write(text)
    return path
