__version__ = "1.2.0"
__date__ = "2026.10.19"
__authors__ = "Latmat contributors"
__engine_info__ = "cyclic Jacobi eigensolver compiled with Numba."

VERSIONE = f"{__version__}, {__date__} by {__authors__}\n\t{__engine_info__}"
