"""
Interfaccia a riga di comando.

    latmat.py build   --poset SRC [--set L1,L2,..] [--func SRC] --exp a,b,g,d [--format csv|pretty]
    latmat.py factor  --poset SRC ... --exp a,b,g,d [--kind ideal|filter|meet-closed|join-closed|
                                                     structure-meet|structure-join|split]
    latmat.py bounds  --poset SRC ... --exp a,b,g,g [--c exact|y0|thm52|thm53|VALUE]
    latmat.py region  --poset SRC ... --exp a,b,g,g [--C exact|tn|VALUE] [--side meet|join]
    latmat.py constants --n N
    latmat.py search  --n N [--extremum min|max] [--jobs K] [--checkpoint-dir D] [--i-know] [--ledger]
    latmat.py verify-conjecture --n N
    latmat.py table1  --n N           (alias: cn-table)
    latmat.py selftest

Codici di uscita: 0 successo, 2 errore di validazione (ipotesi violata, file
malformato, opzione sconosciuta), 1 errore interno (registrato in error.log).
"""

import argparse

from models import RunConfig
from formats import parse_exponents, parse_label_list
from utils import append_error_log
from cli_adapter import CLIAdapter
from controller import LatmatController
from version import __version__

MATRIX_COMMANDS = ("build", "factor", "bounds", "region")
FACTOR_KINDS = (
    "ideal",
    "filter",
    "meet-closed",
    "join-closed",
    "structure-meet",
    "structure-join",
    "split",
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(_("'{text}' non è un intero.").format(text=text)) from None
    if value < 1:
        raise argparse.ArgumentTypeError(_("Serve un intero ≥ 1, ricevuto {value}.").format(value=value))
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(_("'{text}' non è un numero.").format(text=text)) from None
    if not value > 0:
        raise argparse.ArgumentTypeError(_("La tolleranza deve essere positiva."))
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, help=_("tolleranza di Jacobi"))
    common.add_argument("--format", dest="output_format", choices=("csv", "pretty"), default="csv")
    common.add_argument("--save", dest="save_dir", metavar="DIR", help=_("salva il report in DIR"))

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("--poset", required=True, help=_("file | divisors:d1,d2,.. | divlat:m | chain:n"))
    matrix.add_argument("--set", dest="set_labels", help=_("etichette di S, separate da virgole"))
    matrix.add_argument("--func", dest="func_source", default="N", help=_("N | const:c | file"))
    matrix.add_argument("--exp", dest="exponents", required=True, help="α,β,γ,δ")
    matrix.add_argument(
        "--restrict", action="store_true", help=_("lavora nell'intervallo ⟦∧S, ∨S⟧")
    )

    size = argparse.ArgumentParser(add_help=False)
    size.add_argument("--n", type=_positive_int, required=True)

    parser = argparse.ArgumentParser(
        prog="latmat", description=_("Matrici meet, join e combinate su reticoli finiti.")
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("build", parents=[common, matrix], help=_("costruisce M^{α,β,γ,δ}"))
    factor = sub.add_parser("factor", parents=[common, matrix], help=_("fattorizzazioni"))
    factor.add_argument("--kind", choices=FACTOR_KINDS, default="ideal")
    bounds = sub.add_parser("bounds", parents=[common, matrix], help=_("limiti inferiori per κ(M)"))
    bounds.add_argument("--c", dest="c_choice", default="exact")
    region = sub.add_parser("region", parents=[common, matrix], help=_("regione degli autovalori"))
    region.add_argument("--C", dest="C_choice", default="exact")
    region.add_argument("--side", choices=("meet", "join"))

    sub.add_parser("constants", parents=[common, size], help=_("T_n, minoranti di c_n, Y₀ e N₀"))
    search = sub.add_parser("search", parents=[common, size], help=_("ricerca esaustiva su K(n)"))
    search.add_argument("--extremum", choices=("min", "max"), default="min")
    search.add_argument("--jobs", type=_positive_int, default=1)
    search.add_argument("--checkpoint-dir", dest="checkpoint_dir")
    search.add_argument("--i-know", dest="allow_large", action="store_true",
                        help=_("consente n oltre il limite morbido"))
    search.add_argument("--ledger", action="store_true", help=_("accoda il risultato al registro CSV"))
    for name, aliases, text in (
        ("verify-conjecture", [], _("confronta c_n con κ(Y₀Y₀ᵀ) per 1..n")),
        ("table1", ["cn-table"], _("tabella dei minoranti e di c_n per 1..n")),
    ):
        extra = sub.add_parser(name, aliases=aliases, parents=[common, size], help=text)
        extra.add_argument("--i-know", dest="allow_large", action="store_true")
    sub.add_parser("selftest", parents=[common], help=_("verifica degli invarianti"))
    return parser


def config_from_args(args):
    data = dict(vars(args))
    if args.subcommand in MATRIX_COMMANDS:
        data["exponents"] = parse_exponents(args.exponents)
        data["set_labels"] = parse_label_list(args.set_labels) if args.set_labels else None
        data["poset_source"] = args.poset
    return RunConfig.from_dict(data)


def run(argv=None, ui=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_VALIDATION

    ui = ui or CLIAdapter()
    try:
        config = config_from_args(args)
        return LatmatController(ui).execute(config)
    except ValueError as e:
        ui.show_error(str(e))
        return EXIT_VALIDATION
    except KeyboardInterrupt:
        ui.show_error(_("Interrotto dall'utente."))
        return EXIT_INTERNAL
    except Exception as e:
        append_error_log(type(e), e, e.__traceback__)
        ui.show_error(
            _("Errore interno: {error}. I dettagli sono stati salvati in error.log.").format(error=e)
        )
        return EXIT_INTERNAL
