import builtins
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Dict, Any, Optional, Tuple, Union

import numpy as np

_ = getattr(builtins, "_", lambda s: s)

Number = Union[int, Fraction, float]
DenseMatrix = np.ndarray


# ---------------------------------------------------------------------------
# Eccezioni
# ---------------------------------------------------------------------------


class LatmatError(Exception):
    """Radice di tutti gli errori del pacchetto."""


class PosetError(LatmatError, ValueError):
    """Struttura d'ordine non valida o operazione non definita sull'insieme parziale."""


class NotALatticeError(PosetError):
    """Meet o join mancante (o non unico) dove serve un reticolo."""


class PowerError(LatmatError, ValueError):
    """Potenza f(x)^a non definita nei reali."""


class HypothesisError(LatmatError, ValueError):
    """Ipotesi violata di una fattorizzazione, di un limite o di una regione."""


class EmptyRegionError(LatmatError, ValueError):
    """Tutti i dischi hanno raggio negativo."""


class SearchCapError(LatmatError, ValueError):
    """n fuori dai limiti consentiti per la ricerca esaustiva."""


class ConvergenceError(LatmatError, ArithmeticError):
    """Il metodo di Jacobi non converge entro il numero massimo di sweep."""


class FormatError(LatmatError, ValueError):
    """Input testuale malformato; riporta il numero di riga quando noto."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = _("riga {line}: {message}").format(line=line, message=message)
        super().__init__(message)


# ---------------------------------------------------------------------------
# Insiemi parzialmente ordinati
# ---------------------------------------------------------------------------

# Valori speciali delle tabelle meet/join
NO_BOUND = -1
NOT_UNIQUE = -2


@dataclass(eq=False)
class Poset:
    labels: List[str]
    leq: np.ndarray  # leq[i, j] == True  <=>  elemento i ⪯ elemento j
    covers: List[Tuple[int, int]] = field(default_factory=list)
    meet_table: Optional[np.ndarray] = None
    join_table: Optional[np.ndarray] = None
    name: str = ""

    # Cache, non fanno parte dell'identità del poset
    index: Dict[str, int] = field(default_factory=dict, init=False, repr=False)
    bottom: Optional[int] = field(default=None, init=False)
    top: Optional[int] = field(default=None, init=False)
    mobius_cache: Optional["MobiusTable"] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.index = {label: i for i, label in enumerate(self.labels)}
        size = len(self.labels)
        if size:
            below_all = np.nonzero(self.leq.all(axis=1))[0]
            above_all = np.nonzero(self.leq.all(axis=0))[0]
            self.bottom = int(below_all[0]) if len(below_all) else None
            self.top = int(above_all[0]) if len(above_all) else None

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def has_bottom(self) -> bool:
        return self.bottom is not None

    @property
    def has_top(self) -> bool:
        return self.top is not None

    def index_of(self, x) -> int:
        """Indice denso dell'elemento con etichetta x (gli interi sono convertiti in stringa)."""
        try:
            return self.index[str(x)]
        except KeyError:
            raise PosetError(
                _("Elemento '{label}' non presente nell'insieme parziale.").format(
                    label=x
                )
            ) from None

    def is_leq(self, x, y) -> bool:
        return bool(self.leq[self.index_of(x), self.index_of(y)])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "elements": list(self.labels),
            "covers": [[self.labels[a], self.labels[b]] for a, b in self.covers],
            "bottom": self.labels[self.bottom] if self.has_bottom else None,
            "top": self.labels[self.top] if self.has_top else None,
        }


@dataclass(eq=False)
class ElementSubset:
    parent: Poset
    members: List[int]

    def __len__(self) -> int:
        return len(self.members)

    @property
    def labels(self) -> List[str]:
        return [self.parent.labels[i] for i in self.members]

    def to_dict(self) -> Dict[str, Any]:
        return {"parent": self.parent.name, "members": self.labels}


@dataclass(eq=False)
class MobiusTable:
    parent: Poset
    values: np.ndarray  # interi esatti, zero dove x ⋠ y

    def value(self, x, y) -> int:
        i = self.parent.index_of(x)
        j = self.parent.index_of(y)
        if not self.parent.leq[i, j]:
            raise PosetError(
                _("μ(x,y) è definita solo per x ⪯ y: '{x}' ⋠ '{y}'.").format(x=x, y=y)
            )
        return int(self.values[i, j])

    def to_dict(self) -> Dict[Tuple[str, str], int]:
        labels = self.parent.labels
        rows, cols = np.nonzero(self.parent.leq)
        return {
            (labels[i], labels[j]): int(self.values[i, j]) for i, j in zip(rows, cols)
        }


# ---------------------------------------------------------------------------
# Funzioni sull'insieme e convoluzioni
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class PosetFunction:
    parent: Poset
    values: Dict[str, Number]
    name: str = "f"

    def value(self, index: int) -> Number:
        label = self.parent.labels[index]
        if label not in self.values:
            raise PowerError(
                _("La funzione '{name}' non ha un valore per l'elemento '{label}'.").format(
                    name=self.name, label=label
                )
            )
        return self.values[label]

    def value_at(self, x) -> Number:
        return self.value(self.parent.index_of(x))


@dataclass
class ConvolutionVector:
    direction: str  # "down" | "up"
    exponent: Number
    labels: List[str]
    values: List[float]
    exact: Optional[List[Fraction]] = None

    @property
    def entries(self) -> Dict[str, float]:
        return dict(zip(self.labels, self.values))

    def entry(self, x) -> float:
        try:
            return self.values[self.labels.index(str(x))]
        except ValueError:
            raise PosetError(
                _("'{label}' non appartiene al supporto della convoluzione.").format(
                    label=x
                )
            ) from None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "direction": self.direction,
            "exponent": str(self.exponent),
            "entries": self.entries,
            "exact": self.exact is not None,
        }


# ---------------------------------------------------------------------------
# Matrici
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class CombinedSpec:
    alpha: Number
    beta: Number
    gamma: Number
    delta: Number
    subset: ElementSubset
    f: PosetFunction

    @property
    def exponents(self) -> Tuple[Number, Number, Number, Number]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    @property
    def is_symmetric(self) -> bool:
        return self.gamma == self.delta

    @property
    def n(self) -> int:
        return len(self.subset)


@dataclass(eq=False)
class StructureFactors:
    """M = diag(left) · (core ∘ g) · diag(right)."""

    left: np.ndarray
    core: DenseMatrix
    g: DenseMatrix
    right: np.ndarray

    def product(self) -> DenseMatrix:
        return (self.left[:, None] * (self.core * self.g)) * self.right[None, :]


# ---------------------------------------------------------------------------
# Spettri, limiti, regioni
# ---------------------------------------------------------------------------


@dataclass
class Spectrum:
    eigenvalues: List[float]
    iterations: int
    offdiag_residual: float

    @property
    def minimum(self) -> float:
        return self.eigenvalues[0]

    @property
    def maximum(self) -> float:
        return self.eigenvalues[-1]


@dataclass
class ConstantValue:
    n: int
    value: float
    provenance: str  # exact | y0 | tn-bound | n0-bound | tn | user


@dataclass
class BoundReport:
    side: str  # "meet" | "join"
    n: int
    bound: float
    c_value: float
    c_provenance: str
    min_conv: float
    min_fpow: float
    true_kappa: float
    holds: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "side": self.side,
            "n": self.n,
            "bound": self.bound,
            "c_value": self.c_value,
            "c_provenance": self.c_provenance,
            "min_conv": self.min_conv,
            "min_fpow": self.min_fpow,
            "true_kappa": self.true_kappa,
            "holds": self.holds,
        }


@dataclass
class RegionReport:
    side: str
    n: int
    discs: List[Tuple[float, float]]
    d_values: List[float]
    H: float
    C_value: float
    C_provenance: str
    eigenvalues: List[float]
    contained: bool

    @property
    def nonempty_discs(self) -> List[Tuple[float, float]]:
        return [(c, r) for c, r in self.discs if r >= 0.0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "side": self.side,
            "n": self.n,
            "H": self.H,
            "C_value": self.C_value,
            "C_provenance": self.C_provenance,
            "d_values": list(self.d_values),
            "eigenvalues": list(self.eigenvalues),
            "contained": self.contained,
            "discs": [list(d) for d in self.discs],
        }


# ---------------------------------------------------------------------------
# Ricerca su K(n)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriangularMask:
    n: int
    bits: int

    @property
    def size(self) -> int:
        """Numero di posizioni strettamente sotto la diagonale."""
        return self.n * (self.n - 1) // 2

    def to_matrix(self) -> DenseMatrix:
        x = np.eye(self.n, dtype=np.int64)
        k = 0
        for i in range(1, self.n):
            for j in range(i):
                if (self.bits >> k) & 1:
                    x[i, j] = 1
                k += 1
        return x

    @classmethod
    def from_matrix(cls, x) -> "TriangularMask":
        x = np.asarray(x)
        n = x.shape[0]
        if x.shape != (n, n) or not np.array_equal(np.diag(x), np.ones(n)):
            raise ValueError(_("La matrice non ha diagonale unitaria."))
        if np.any(np.triu(x, 1)) or not np.all((x == 0) | (x == 1)):
            raise ValueError(_("La matrice non è triangolare inferiore 0/1."))
        bits = 0
        k = 0
        for i in range(1, n):
            for j in range(i):
                if x[i, j]:
                    bits |= 1 << k
                k += 1
        return cls(n=n, bits=bits)


@dataclass
class SearchResult:
    n: int
    extremum: str  # "min" | "max"
    value: float
    witness: TriangularMask
    matrices_scanned: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "extremum": self.extremum,
            "value": self.value,
            "witness_bits": self.witness.bits,
            "scanned": self.matrices_scanned,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "SearchResult":
        n = int(d.get("n", 1))
        return cls(
            n=n,
            extremum=d.get("extremum", "min"),
            value=float(d.get("value", 0.0)),
            witness=TriangularMask(n=n, bits=int(d.get("witness_bits", 0))),
            matrices_scanned=int(d.get("scanned", 0)),
        )


@dataclass
class ChunkCheckpoint:
    n: int
    extremum: str
    lo: int
    hi: int
    scanned: int
    best_value: float
    best_bits: int

    @property
    def complete(self) -> bool:
        return self.scanned == self.hi - self.lo

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "extremum": self.extremum,
            "lo": self.lo,
            "hi": self.hi,
            "scanned": self.scanned,
            "best_value": self.best_value,
            "best_bits": self.best_bits,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "ChunkCheckpoint":
        return cls(
            n=int(d.get("n", 0)),
            extremum=d.get("extremum", "min"),
            lo=int(d.get("lo", 0)),
            hi=int(d.get("hi", 0)),
            scanned=int(d.get("scanned", 0)),
            best_value=float(d.get("best_value", "nan")),
            best_bits=int(d.get("best_bits", -1)),
        )


@dataclass
class ConjectureCheck:
    n: int
    holds: bool
    c_n: float
    kappa_y0: float


@dataclass
class CnTableRow:
    n: int
    tn_bound: float
    n0_bound: float
    c_n: float


# ---------------------------------------------------------------------------
# Configurazione di un'esecuzione da riga di comando
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    subcommand: str
    poset_source: Optional[str] = None
    set_labels: Optional[List[str]] = None
    func_source: str = "N"
    exponents: Optional[Tuple[Number, Number, Number, Number]] = None
    c_choice: str = "exact"
    C_choice: str = "exact"
    output_format: str = "csv"
    tol: Optional[float] = None
    n: Optional[int] = None
    extremum: str = "min"
    jobs: int = 1
    checkpoint_dir: Optional[str] = None
    allow_large: bool = False
    ledger: bool = False
    kind: Optional[str] = None
    side: Optional[str] = None
    restrict: bool = False
    save_dir: Optional[str] = None

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "RunConfig":
        known = cls.__dataclass_fields__.keys()
        return cls(**{k: v for k, v in d.items() if k in known})
