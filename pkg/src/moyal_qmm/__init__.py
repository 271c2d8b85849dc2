"""moyal-qmm: cross-validated quartic Hermitian matrix-model partition functions."""

__version__ = "0.1.0"

REPORT_SCHEMA = "moyal-qmm/1"

from .model import Coupling, KineticSpectrum, PvRegulator  # noqa: F401
from .numerics import SignedLogReal  # noqa: F401
