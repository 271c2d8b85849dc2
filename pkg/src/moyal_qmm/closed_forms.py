"""Closed-form endpoints of the polytope-factorization route.

The factorization through the subpolytope volume produces its own closed
forms for the free theory and for small coupling.  They are deliberately
kept separate from the exact free-theory formulas: the whole point of the
harness is to expose where they agree and where they provably do not.

Two weak-coupling forms are provided.  The raw one carries a
sqrt((N-1)/N) prefactor; the deviation-parameterized one silently drops it
(their ratio is reported rather than hidden).  The resummation factor
2^(binom(N,2)-1) from summing the full tower of radial terms is exposed as
an optional multiplier, off by default.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .eigen_integrals import EigenvalueVector, vandermonde
from .free_theory import symmetric_prefactor_log
from .model import Coupling, KineticSpectrum
from .numerics import SignedLogReal

__all__ = [
    "log_z_free_polytope_route",
    "log_z_weak_coupling",
    "log_z_weak_coupling_epsilon",
    "q0_term",
    "quartic_gaussian_log_integral",
    "meijer_factor",
]


def log_z_free_polytope_route(xi: float, eps_tilde: Sequence[float]) -> SignedLogReal:
    """Free-theory value computed through the asymptotic polytope volume."""
    eps = np.asarray(eps_tilde, dtype=float)
    n = eps.size
    e = xi * (1.0 + eps)
    if xi <= 0.0 or np.any(e <= 0.0):
        raise ValueError("deviations must keep all eigenvalues positive")
    s = {k: float(np.sum(eps**k)) for k in range(2, 5)}
    correction = (
        (n - 2) / 8 * s[2]
        - (n - 6) / 24 * s[3]
        + n / 64 * s[4]
        + 3 / 64 * s[2] ** 2
        - 1 / 16 * s[2] * s[3]
        + 7 / 128 * s[2] * s[4]
        + 3 / 128 * s[3] ** 2
        - 5 / 128 * s[3] * s[4]
        + 1 / (16 * n) * s[2] ** 3
        - 11 / (128 * n) * s[2] ** 2 * s[3]
    )
    return SignedLogReal(1, symmetric_prefactor_log(xi, e) + correction)


def log_z_weak_coupling(spectrum: KineticSpectrum, coupling: Coupling) -> SignedLogReal:
    """Small-coupling closed form in raw eigenvalues.

    sqrt((N-1)/N) [prod sqrt(pi/e_m) e_m^(1-N)]
    (pi N / (2 sum 1/e_m))^(N(N-1)/2) exp(-sum 3g/(4 e_m^2)).
    """
    e = spectrum.e
    n = spectrum.n
    if n < 2:
        raise ValueError("weak-coupling form needs N >= 2")
    inv_sum = float(np.sum(1.0 / e))
    log_val = (
        0.5 * math.log((n - 1.0) / n)
        + 0.5 * float(np.sum(np.log(math.pi / e)))
        + (1.0 - n) * float(np.sum(np.log(e)))
        + (n * (n - 1) / 2) * math.log(math.pi * n / (2.0 * inv_sum))
        - coupling.g * float(np.sum(0.75 / e**2))
    )
    return SignedLogReal(1, log_val)


def log_z_weak_coupling_epsilon(
    xi: float, eps_tilde: Sequence[float], coupling: Coupling
) -> SignedLogReal:
    """Small-coupling closed form in the deviation parameterization."""
    eps = np.asarray(eps_tilde, dtype=float)
    n = eps.size
    if n < 2:
        raise ValueError("weak-coupling form needs N >= 2")
    if np.any(np.abs(eps) >= 1.0):
        raise ValueError("requires |eps_j| < 1")
    e = xi * (1.0 + eps)
    if xi <= 0.0 or np.any(e <= 0.0):
        raise ValueError("deviations must keep all eigenvalues positive")
    s = {k: float(np.sum(eps**k)) for k in range(2, 7)}
    series = (
        (n - 1) / 6 * s[3]
        - (n - 1) / 4 * s[4]
        + 3 * (n - 1) / 10 * s[5]
        - (n - 1) / 3 * s[6]
        + (n - 1) / (4 * n) * s[2] ** 2
        - 0.5 * s[2] * s[3]
        + 0.5 * s[2] * s[4]
        + 0.25 * s[3] ** 2
        - 1 / (6 * n) * s[2] ** 3
    )
    log_val = (
        symmetric_prefactor_log(xi, e)
        - coupling.g * float(np.sum(0.75 / e**2))
        + series
    )
    return SignedLogReal(1, log_val)


def q0_term(spectrum: KineticSpectrum) -> SignedLogReal:
    """Leading radial term of the factorized weak-coupling integral.

    sqrt(pi) (N-1)/N sqrt(sum 1/e_m) (N/((N-1) sum 1/e_m))^(N(N-1)/2)
    Delta(1/e_1, ..., 1/e_N), sign carried by the reciprocal Vandermonde.
    """
    spectrum.require_distinct("q0 term")
    e = spectrum.e
    n = spectrum.n
    if n < 2:
        raise ValueError("q0 term needs N >= 2")
    inv_sum = float(np.sum(1.0 / e))
    delta_inv = vandermonde(EigenvalueVector(1.0 / e))
    log_val = (
        0.5 * math.log(math.pi)
        + math.log((n - 1.0) / n)
        + 0.5 * math.log(inv_sum)
        + (n * (n - 1) / 2) * math.log(n / ((n - 1.0) * inv_sum))
    )
    return SignedLogReal.from_log(log_val) * delta_inv


def quartic_gaussian_log_integral(e: float, g: float) -> tuple[float, float]:
    """log of int exp(-g x^4 - e x^2) dx: (adaptive-quadrature value, leading form).

    The leading form is log sqrt(pi/e) - 3g/(4 e^2); the exact value comes
    from adaptive quadrature on the half line.
    """
    if e <= 0.0:
        raise ValueError("requires e > 0")
    if g < 0.0:
        raise ValueError("requires g >= 0")
    scale = 1.0 / math.sqrt(e)  # integrate x = scale * y for conditioning

    def body(y: float) -> float:
        x = scale * y
        return math.exp(-g * x**4 - e * x**2)

    val, _ = quad(body, 0.0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
    exact = math.log(2.0 * scale * val)
    approx = 0.5 * math.log(math.pi / e) - 0.75 * g / e**2
    return exact, approx


def meijer_factor(n: int) -> SignedLogReal:
    """Optional resummation multiplier 2^(N(N-1)/2 - 1) for the weak route."""
    if n < 2:
        raise ValueError("requires N >= 2")
    return SignedLogReal.from_log((n * (n - 1) / 2 - 1) * math.log(2.0))
