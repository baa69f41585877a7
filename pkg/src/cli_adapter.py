import sys

from controller import UIAdapter
from utils import format_elapsed


class CLIAdapter(UIAdapter):
    """Report su stdout; messaggi, avanzamento ed errori su stderr."""

    def __init__(self, stdout=None, stderr=None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr

    def show_message(self, message: str) -> None:
        print(message, file=self.stderr)

    def show_error(self, message: str) -> None:
        print(f"\n*** {message} ***", file=self.stderr)

    def show_progress(self, done: int, total: int, elapsed: float) -> None:
        remaining = elapsed / done * (total - done) if done else 0.0
        line = _("Blocchi {done}/{total} | trascorso {elapsed} | stimato {remaining}").format(
            done=done,
            total=total,
            elapsed=format_elapsed(elapsed),
            remaining=format_elapsed(remaining),
        )
        end = "\n" if done >= total else "\r"
        print(line, end=end, file=self.stderr, flush=True)

    def emit_report(self, text: str) -> None:
        self.stdout.write(text)
        if text and not text.endswith("\n"):
            self.stdout.write("\n")
