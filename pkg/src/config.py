import os
import sys
import json
import builtins

from babel.support import Translations


def resource_path(relative_path):
    """
    Restituisce il percorso assoluto a una risorsa (sola lettura), funzionante sia in sviluppo
    che per un eseguibile compilato con PyInstaller (anche con la cartella _internal).
    """
    if getattr(sys, "frozen", False):
        base_path = sys._MEIPASS
    else:
        # In sviluppo, la radice del progetto è la cartella superiore a 'src'
        base_path = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

    return os.path.join(base_path, relative_path)


def user_data_path(relative_path):
    """
    Restituisce il percorso assoluto a un file di dati utente (scrittura): checkpoint,
    registro dei risultati, log degli errori. In configurazione compilata i file
    finiscono accanto all'eseguibile.
    """
    if getattr(sys, "frozen", False):
        base_path = os.path.dirname(sys.executable)
    else:
        base_path = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

    return os.path.join(base_path, relative_path)


locales_dir = resource_path("locales")
project_root = user_data_path("")

SETTINGS_FILE = user_data_path("Latmat - Settings.json")

DEFAULT_SETTINGS = {
    "language": "it",
    "eigen_tol": 1e-12,
    "ledger_file": "Latmat - Ledger.csv",
}


def load_settings():
    """Carica le impostazioni dal file JSON, fuse sopra i valori di default."""
    if os.path.exists(SETTINGS_FILE):
        try:
            with open(SETTINGS_FILE, "r", encoding="utf-8") as f:
                loaded = json.load(f)
                settings = DEFAULT_SETTINGS.copy()
                settings.update(loaded)
                return settings
        except Exception:
            pass
    return DEFAULT_SETTINGS.copy()


def install_translations(language):
    """
    Carica il catalogo babel per la lingua richiesta e installa `_` nei builtins.
    Senza catalogo i messaggi restano nella lingua sorgente (italiano).
    """
    translations = Translations.load(locales_dir, [language], domain="latmat")
    builtins._ = translations.gettext
    return translations


lingua_rilevata = load_settings().get("language", "it")
install_translations(lingua_rilevata)
_ = builtins._


# File e Directory Principali (relativi all'eseguibile/radice)
ERROR_LOG_FILE = user_data_path("error.log")
LEDGER_HEADER = "n,extremum,value,witness_bits,scanned"

# Tolleranze numeriche
DEFAULT_EIGEN_TOL = 1e-12
MAX_JACOBI_SWEEPS = 50
SYMMETRY_TOL = 1e-12
DEFAULT_PD_TOL = 1e-10
MATCH_REL_TOL = 1e-10
HADAMARD_TOL = 1e-12
SEMIMULT_TOL = 1e-9
BOUND_TOL = 1e-9
REGION_TOL = 1e-9
CONJECTURE_TOL = 1e-9
# Radici quadrate: sotto questa soglia (relativa) un valore negativo è rumore di arrotondamento
NEGATIVE_CLAMP_TOL = 1e-12

# Ricerca esaustiva su K(n)
SEARCH_HARD_CAP = 8
DEFAULT_SEARCH_CAP = 7
SEARCH_CHUNKS = 256
SEARCH_CAP_ENV = "LATMAT_MAX_N"

# Formati numerici (indipendenti dalla lingua)
CSV_DIGITS = 17
TABLE_DIGITS = 6


def search_cap():
    """
    Limite "morbido" per n nella ricerca esaustiva. Letto a ogni chiamata dalla
    variabile d'ambiente LATMAT_MAX_N, mai oltre il limite rigido.
    """
    raw = os.environ.get(SEARCH_CAP_ENV, "").strip()
    if not raw:
        return DEFAULT_SEARCH_CAP
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_SEARCH_CAP
    return max(1, min(value, SEARCH_HARD_CAP))
