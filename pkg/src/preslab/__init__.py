"""Machine-checkable finite certificates for preservation properties of maps:
connectedness on finite spaces, compactness on omega+1, and exact rational
constructions of the real-line counterexamples."""

from .errors import BoundError, DomainError, NoWitnessError, PreconditionError, PreslabError
from .report import Certificate, Report

__version__ = "0.1.0"

__all__ = [
    "BoundError",
    "Certificate",
    "DomainError",
    "NoWitnessError",
    "PreconditionError",
    "PreslabError",
    "Report",
    "__version__",
]
