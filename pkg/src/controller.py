import os
import time
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from models import RunConfig, CombinedSpec, HypothesisError, EmptyRegionError
from config import load_settings, user_data_path, project_root
from utils import format_elapsed, resolve_and_verify_save_path, max_relative_error
from poset import make_subset, full_subset, restrict_to_bounding_interval, is_meet_closed
from incidence import restrict_function
from matrices import (
    combined_matrix,
    meet_matrix,
    join_matrix,
    factor_ideal,
    factor_filter,
    factor_meet_closed,
    factor_join_closed,
    structure_meet,
    structure_join,
    block_split,
)
from spectra import eigen_symmetric, kappa
from bounds import (
    MEET,
    JOIN,
    lower_bounds_both,
    region_meet_closed,
    region_join_closed,
    interval_from_discs,
)
from constants import (
    MAX,
    search_extremum,
    c_constant,
    C_constant,
    t_n_squared,
    t_n,
    cn_lower_bound_tn,
    cn_lower_bound_n0,
    y0_matrix,
    n0_matrix,
    n0_frobenius,
    n0_frobenius_closed_form,
    n0_last_row_pattern,
    verify_conjecture,
    cn_table,
)
from formats import load_poset_source, load_function_source
from reports import (
    get_key_value_text,
    get_report_header,
    get_matrix_text,
    get_bounds_text,
    get_region_report_text,
    get_search_result_text,
    get_conjecture_text,
    get_cn_table_text,
    save_report_text,
)


class UIAdapter(ABC):
    @abstractmethod
    def show_message(self, message: str) -> None:
        pass

    @abstractmethod
    def show_error(self, message: str) -> None:
        pass

    @abstractmethod
    def show_progress(self, done: int, total: int, elapsed: float) -> None:
        pass

    @abstractmethod
    def emit_report(self, text: str) -> None:
        pass


class LatmatController:
    """Un metodo per sottocomando; gli errori di dominio risalgono al chiamante."""

    def __init__(self, ui_adapter: UIAdapter, settings: Optional[dict] = None):
        self.ui = ui_adapter
        self.settings = settings if settings is not None else load_settings()
        self.config: Optional[RunConfig] = None

    def execute(self, config: RunConfig) -> int:
        """Esegue il sottocomando; restituisce 0, oppure 1 se il selftest fallisce."""
        self.config = config
        handlers = {
            "build": self.build,
            "factor": self.factor,
            "bounds": self.bounds,
            "region": self.region,
            "constants": self.constants,
            "search": self.search,
            "verify-conjecture": self.verify_conjecture,
            "table1": self.cn_table,
            "cn-table": self.cn_table,
            "selftest": self.selftest,
        }
        handler = handlers.get(config.subcommand)
        if handler is None:
            raise ValueError(
                _("Sottocomando sconosciuto: '{name}'.").format(name=config.subcommand)
            )
        text, ok = handler()
        if config.output_format == "pretty" and config.subcommand != "selftest":
            text = get_report_header(self._title()) + text
        self.ui.emit_report(text)
        if config.save_dir:
            self._save(text)
        return 0 if ok else 1

    # ------------------------------------------------------------------
    # Supporto
    # ------------------------------------------------------------------

    @property
    def tol(self) -> float:
        if self.config is not None and self.config.tol is not None:
            return self.config.tol
        return float(self.settings.get("eigen_tol", 1e-12))

    def _search_kwargs(self):
        return {"tol": self.tol, "allow_large": self.config.allow_large}

    def _title(self):
        source = self.config.poset_source or (f"n{self.config.n}" if self.config.n else "")
        return f"{self.config.subcommand} {source}".strip()

    def _save(self, text):
        directory, warning = resolve_and_verify_save_path(
            self.config.save_dir, default_fallback=project_root
        )
        if warning:
            self.ui.show_message(warning)
        path = save_report_text(text, directory, self._title())
        self.ui.show_message(_("Report salvato in '{path}'.").format(path=path))

    def _ledger_path(self):
        path = self.settings.get("ledger_file") or "Latmat - Ledger.csv"
        return path if os.path.isabs(path) else user_data_path(path)

    def _load_spec(self) -> CombinedSpec:
        config = self.config
        if config.exponents is None:
            raise ValueError(_("Il sottocomando richiede gli esponenti --exp α,β,γ,δ."))
        p = load_poset_source(config.poset_source)
        f = load_function_source(config.func_source, p)
        s = make_subset(p, config.set_labels) if config.set_labels else full_subset(p)
        if config.restrict:
            s = restrict_to_bounding_interval(s)
            f = restrict_function(f, s.parent)
        alpha, beta, gamma, delta = config.exponents
        return CombinedSpec(alpha, beta, gamma, delta, s, f)

    def _require_symmetric(self, spec):
        if not spec.is_symmetric:
            raise HypothesisError(
                _("'{name}' richiede γ = δ (ricevuto γ={gamma}, δ={delta}).").format(
                    name=self.config.subcommand, gamma=spec.gamma, delta=spec.delta
                )
            )

    # ------------------------------------------------------------------
    # Matrici
    # ------------------------------------------------------------------

    def build(self):
        spec = self._load_spec()
        m = combined_matrix(spec)
        labels = spec.subset.labels
        text = get_matrix_text(m, self.config.output_format, labels)
        if self.config.output_format == "pretty" and spec.is_symmetric:
            spectrum = eigen_symmetric(m, self.tol)
            text += "\n" + get_key_value_text([("eigenvalues", spectrum.eigenvalues)])
        return text, True

    def factor(self):
        spec = self._load_spec()
        s, f = spec.subset, spec.f
        kind = self.config.kind or "ideal"
        fmt = self.config.output_format
        down, up = spec.alpha - spec.beta, spec.beta - spec.alpha
        blocks = []

        if kind == "ideal":
            a = factor_ideal(s, f, down)
            blocks = [("A", a)]
            target, rebuilt = meet_matrix(s, f, down), a @ a.T
        elif kind == "filter":
            a = factor_filter(s, f, up)
            blocks = [("A", a)]
            target, rebuilt = join_matrix(s, f, up), a @ a.T
        elif kind == "meet-closed":
            e, d = factor_meet_closed(s, f, down)
            blocks = [("E", e), ("d", d[None, :])]
            target, rebuilt = meet_matrix(s, f, down), e @ np.diag(d) @ e.T
        elif kind == "join-closed":
            e, d = factor_join_closed(s, f, up)
            blocks = [("E", e), ("d", d[None, :])]
            target, rebuilt = join_matrix(s, f, up), e.T @ np.diag(d) @ e
        elif kind in ("structure-meet", "structure-join"):
            factors = structure_meet(spec) if kind == "structure-meet" else structure_join(spec)
            blocks = [
                ("left", factors.left[None, :]),
                ("core", factors.core),
                ("G", factors.g),
                ("right", factors.right[None, :]),
            ]
            target, rebuilt = combined_matrix(spec), factors.product()
        elif kind == "split":
            p_part, q_part = block_split(spec)
            blocks = [("P", p_part), ("Q", q_part)]
            target, rebuilt = combined_matrix(spec), p_part @ p_part.T + q_part @ q_part.T
            blocks.append(("QQt_min_eigenvalue", np.array([[eigen_symmetric(q_part @ q_part.T, self.tol).minimum]])))
        else:
            raise ValueError(_("Tipo di fattorizzazione sconosciuto: '{kind}'.").format(kind=kind))

        parts = [
            get_key_value_text(
                [("kind", kind), ("reconstruction_error", max_relative_error(rebuilt, target))]
            )
        ]
        for name, block in blocks:
            parts.append(f"# {name}\n" + get_matrix_text(block, fmt))
        return "".join(parts), True

    # ------------------------------------------------------------------
    # Limiti e regioni
    # ------------------------------------------------------------------

    def bounds(self):
        spec = self._load_spec()
        self._require_symmetric(spec)
        c = c_constant(spec.n, self.config.c_choice, **self._search_kwargs())
        results = lower_bounds_both(spec, c, self.tol)
        if all(report is None for _side, report, _reason in results):
            raise HypothesisError(
                "\n".join(reason for _side, _report, reason in results)
            )
        return get_bounds_text(results), True

    def region(self):
        spec = self._load_spec()
        self._require_symmetric(spec)
        side = self.config.side or (MEET if is_meet_closed(spec.subset) else JOIN)
        C = C_constant(spec.n, self.config.C_choice, **self._search_kwargs())
        if side == MEET:
            report = region_meet_closed(spec, C, self.tol)
        else:
            report = region_join_closed(spec, C, self.tol)
        try:
            interval = interval_from_discs(report)
        except EmptyRegionError as e:
            self.ui.show_message(str(e))
            interval = None
        return get_region_report_text(report, interval), True

    # ------------------------------------------------------------------
    # Costanti
    # ------------------------------------------------------------------

    def constants(self):
        n = self.config.n
        text = get_key_value_text(
            [
                ("n", n),
                ("t_n_squared", t_n_squared(n)),
                ("t_n", t_n(n)),
                ("tn_bound", cn_lower_bound_tn(n)),
                ("n0_bound", cn_lower_bound_n0(n)),
                ("kappa_y0", kappa(n0_matrix(n), self.tol)),
                ("n0_frobenius", n0_frobenius(n)),
                ("n0_frobenius_closed_form", n0_frobenius_closed_form(n)),
                ("n0_last_row", n0_last_row_pattern(n)),
            ]
        )
        text += "# Y0\n" + get_matrix_text(y0_matrix(n), self.config.output_format)
        return text, True

    def search(self):
        config = self.config
        self.ui.show_message(
            _("Ricerca esaustiva su K({n}): {total} matrici.").format(
                n=config.n, total=2 ** (config.n * (config.n - 1) // 2)
            )
        )
        started = time.monotonic()
        result = search_extremum(
            config.n,
            config.extremum,
            jobs=max(1, config.jobs),
            checkpoint_dir=config.checkpoint_dir,
            allow_large=config.allow_large,
            progress=self.ui.show_progress,
            ledger_path=self._ledger_path() if config.ledger else None,
            tol=self.tol,
        )
        self.ui.show_message(
            _("Ricerca completata in {elapsed}.").format(
                elapsed=format_elapsed(time.monotonic() - started)
            )
        )
        label = "C_n" if config.extremum == MAX else "c_n"
        self.ui.show_message(f"{label}({config.n}) = {result.value:.9g}")
        return get_search_result_text(result), True

    def verify_conjecture(self):
        checks = [
            verify_conjecture(k, **self._search_kwargs()) for k in range(1, self.config.n + 1)
        ]
        return get_conjecture_text(checks), all(check.holds for check in checks)

    def cn_table(self):
        rows = cn_table(self.config.n, **self._search_kwargs())
        return get_cn_table_text(rows, self.config.output_format), True

    def selftest(self):
        from selftest import run_selftest, get_selftest_text

        results = run_selftest(self.tol)
        return get_selftest_text(results), all(r.passed for r in results)
