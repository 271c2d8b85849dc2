"""Model parameters: kinetic spectrum, quartic coupling, regulator.

The spectrum can be given either as raw eigenvalues e_j or as a mean level
xi with zero-sum relative deviations eps_tilde_j, e_j = xi * (1 + eps_j).
Both parameterizations are kept exactly interconvertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "DegenerateSpectrumError",
    "KineticSpectrum",
    "Coupling",
    "PvRegulator",
    "spectrum_from_epsilons",
    "epsilons_from_spectrum",
    "spectrum_from_json_doc",
]

# Spectra with min_gap below this multiple of xi are flagged: routes that
# divide by the Vandermonde of the eigenvalues are singular there.
DEGENERACY_RTOL = 1e-8


class DegenerateSpectrumError(ValueError):
    """Raised by routes that divide by the eigenvalue Vandermonde."""


@dataclass(frozen=True, init=False)
class KineticSpectrum:
    """Kinetic eigenvalues e_j > 0, stored sorted ascending."""

    e: np.ndarray

    def __init__(self, e: Sequence[float]) -> None:
        arr = np.sort(np.asarray(e, dtype=float))
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("spectrum must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise ValueError("all kinetic eigenvalues must be finite and > 0")
        object.__setattr__(self, "e", arr)
        self.e.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.e.size)

    @property
    def xi(self) -> float:
        return float(np.mean(self.e))

    @property
    def eps_tilde(self) -> np.ndarray:
        return self.e / self.xi - 1.0

    @property
    def min_gap(self) -> float:
        if self.n < 2:
            return float("inf")
        return float(np.min(np.diff(self.e)))

    @property
    def is_degenerate(self) -> bool:
        return self.min_gap < DEGENERACY_RTOL * self.xi

    def require_distinct(self, context: str) -> None:
        if self.is_degenerate:
            raise DegenerateSpectrumError(
                f"{context}: (near-)repeated eigenvalues, min gap "
                f"{self.min_gap:.3e} below {DEGENERACY_RTOL:g} * xi"
            )


@dataclass(frozen=True)
class Coupling:
    """Quartic coupling g >= 0 (g = 0 is the free theory)."""

    g: float = 0.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.g) or self.g < 0.0:
            raise ValueError(f"coupling must be finite and >= 0, got {self.g}")


@dataclass(frozen=True)
class PvRegulator:
    """Regulator width for the principal-value kernel check."""

    eps: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.eps) or self.eps <= 0.0:
            raise ValueError(f"regulator must be finite and > 0, got {self.eps}")


def spectrum_from_epsilons(xi: float, eps_tilde: Sequence[float]) -> KineticSpectrum:
    """Build e_j = xi * (1 + eps_j) from a zero-sum deviation vector."""
    eps = np.asarray(eps_tilde, dtype=float)
    n = eps.size
    if xi <= 0.0:
        raise ValueError(f"xi must be > 0, got {xi}")
    if abs(float(np.sum(eps))) > 1e-10 * max(n, 1):
        raise ValueError(
            f"deviations must sum to zero (got {float(np.sum(eps)):.3e}): "
            "inconsistent parameterization"
        )
    if np.any(1.0 + eps <= 0.0):
        raise ValueError("deviations must satisfy 1 + eps_j > 0")
    return KineticSpectrum(xi * (1.0 + eps))


def epsilons_from_spectrum(spectrum: KineticSpectrum) -> tuple[float, np.ndarray]:
    return spectrum.xi, spectrum.eps_tilde


def spectrum_from_json_doc(doc: dict) -> KineticSpectrum:
    """Parse {"e": [..]} or {"xi": x, "eps_tilde": [..]} (exactly one form)."""
    has_e = "e" in doc
    has_eps = "xi" in doc or "eps_tilde" in doc
    if has_e and has_eps:
        raise ValueError('give either "e" or ("xi", "eps_tilde"), not both')
    if has_e:
        return KineticSpectrum(doc["e"])
    if "xi" in doc and "eps_tilde" in doc:
        return spectrum_from_epsilons(float(doc["xi"]), doc["eps_tilde"])
    raise ValueError('spectrum document needs "e" or both "xi" and "eps_tilde"')
