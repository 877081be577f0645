"""str-DNNF laboratory - bottom-up compilation, Tseitin formulas and refutation analysis."""

__version__ = "0.1.0"

from sdnnf_lab.config import LabConfig
from sdnnf_lab.factory import LabFactory

__all__ = [
    "LabConfig",
    "LabFactory",
]
