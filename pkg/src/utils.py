import datetime
import math
import os
import re
import traceback
from fractions import Fraction

import numpy as np
from babel.dates import format_datetime
from dateutil.relativedelta import relativedelta

from config import _, lingua_rilevata, ERROR_LOG_FILE, CSV_DIGITS, TABLE_DIGITS


# ---------------------------------------------------------------------------
# Numeri esatti e in virgola mobile
# ---------------------------------------------------------------------------


def parse_number(text):
    """
    Interpreta un numero scritto dall'utente.
    Interi -> int, 'p/q' -> Fraction esatta, altrimenti float.
    Solleva ValueError se il testo non è un numero.
    """
    text = str(text).strip()
    if not text:
        raise ValueError(_("Numero vuoto."))
    if "/" in text:
        value = Fraction(text)
        return int(value) if value.denominator == 1 else value
    try:
        return int(text)
    except ValueError:
        pass
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(_("Numero non finito: '{text}'.").format(text=text))
    return value


def is_integral(value):
    if isinstance(value, bool):
        return True
    if isinstance(value, int):
        return True
    if isinstance(value, Fraction):
        return value.denominator == 1
    if isinstance(value, float):
        return value.is_integer()
    return False


def is_exact(value):
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def format_number(value, digits=CSV_DIGITS):
    """Formato indipendente dalla lingua: interi invariati, il resto con `digits` cifre significative."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), f".{digits}g")


def format_sig(value, digits=TABLE_DIGITS):
    """Formatta con `digits` cifre significative (tabelle)."""
    return format(float(value), f".{digits}g")


def format_exponent(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return format_number(value)


# ---------------------------------------------------------------------------
# Confronto tra matrici
# ---------------------------------------------------------------------------


def max_relative_error(a, b):
    """Massimo scarto assoluto diviso per la massima entrata in valore assoluto."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        return math.inf
    if a.size == 0:
        return 0.0
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    diff = float(np.max(np.abs(a - b)))
    if scale == 0.0:
        return diff
    return diff / scale


def matrices_close(a, b, rel_tol):
    return max_relative_error(a, b) <= rel_tol


# ---------------------------------------------------------------------------
# File
# ---------------------------------------------------------------------------


def sanitize_filename(name):
    """Rimuove/sostituisce caratteri problematici per i nomi dei file."""
    name = name.replace(" ", "_")
    name = re.sub(r"[^\w\-]+", "", name)
    if not name:
        name = "Latmat_Report"
    return name


def atomic_write_text(path, text):
    """Scrive su un file temporaneo nella stessa cartella e poi lo rinomina sul nome finale."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp_path = f"{path}.tmp{os.getpid()}"
    with open(tmp_path, "w", encoding="utf-8") as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp_path, path)


def resolve_and_verify_save_path(path, default_fallback="."):
    """
    Verifica se la cartella di salvataggio è valida e accessibile.
    - Se la cartella non esiste prova a crearla; se fallisce usa il fallback con avviso.
    - Se la cartella non è scrivibile usa il fallback con avviso.
    Restituisce una tupla (resolved_path, warning_message).
    """
    if not path:
        return default_fallback, None

    path = os.path.abspath(path)

    if not os.path.exists(path):
        try:
            os.makedirs(path, exist_ok=True)
            msg_user = _("La cartella '{path}' non esisteva ed è stata creata.").format(
                path=path
            )
            return path, msg_user
        except Exception as e:
            msg = _(
                "Impossibile creare la cartella '{path}': {error}. Uso la cartella di default: '{fallback}'."
            ).format(path=path, error=e, fallback=default_fallback)
            return default_fallback, msg

    if not os.access(path, os.W_OK):
        msg = _(
            "La cartella '{path}' non è scrivibile. Uso la cartella di default: '{fallback}'."
        ).format(path=path, fallback=default_fallback)
        return default_fallback, msg

    return path, None


def append_error_log(exc_type, value, traceback_obj, log_path=None):
    """Accoda al log degli errori la traccia di un'eccezione non gestita."""
    err_msg = "".join(traceback.format_exception(exc_type, value, traceback_obj))
    timestamp = datetime.datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    log_line = f"=== UNHANDLED EXCEPTION {timestamp} ===\n{err_msg}\n"
    try:
        with open(log_path or ERROR_LOG_FILE, "a", encoding="utf-8") as f:
            f.write(log_line)
    except Exception:
        pass


# ---------------------------------------------------------------------------
# Date e durate
# ---------------------------------------------------------------------------


def format_timestamp_locale(moment=None):
    """Data e ora nel formato locale esteso, tramite Babel."""
    moment = moment or datetime.datetime.now()
    try:
        return format_datetime(moment, format="medium", locale=lingua_rilevata)
    except (ValueError, TypeError, LookupError):
        return moment.strftime("%Y-%m-%d %H:%M:%S")


def format_elapsed(seconds):
    """Durata leggibile, es. '1g 02h 03m 04s' oppure '12s'."""
    seconds = max(0, int(round(seconds)))
    delta = relativedelta(seconds=seconds).normalized()
    days = delta.days + 30 * delta.months + 365 * delta.years
    if days:
        return f"{days}g {delta.hours:02d}h {delta.minutes:02d}m {delta.seconds:02d}s"
    if delta.hours:
        return f"{delta.hours}h {delta.minutes:02d}m {delta.seconds:02d}s"
    if delta.minutes:
        return f"{delta.minutes}m {delta.seconds:02d}s"
    return f"{delta.seconds}s"
