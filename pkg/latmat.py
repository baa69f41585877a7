# ruff: noqa: E402
# Entry point per Latmat
import os
import sys
import warnings

warnings.filterwarnings("ignore", category=DeprecationWarning)

# Aggiungi src a sys.path per lo sviluppo locale
try:
    sys._MEIPASS
except AttributeError:
    sys.path.insert(0, os.path.join(os.path.abspath(os.path.dirname(__file__)), "src"))

from utils import append_error_log


def install_excepthook():
    def custom_excepthook(exctype, value, traceback_obj):
        append_error_log(exctype, value, traceback_obj)
        sys.__excepthook__(exctype, value, traceback_obj)

    sys.excepthook = custom_excepthook


install_excepthook()

from cli import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
