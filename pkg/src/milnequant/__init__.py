"""Phase-amplitude quantization of non-Hermitian bound states."""
from .milne import energy_integral, wkb_integral
from .models import make_model
from .oracle import oracle_eigenvalue
from .quantize import scan_energy_integral, solve_level, spectrum

__version__ = "0.1.0"

__all__ = [
    "energy_integral",
    "make_model",
    "oracle_eigenvalue",
    "scan_energy_integral",
    "solve_level",
    "spectrum",
    "wkb_integral",
]
