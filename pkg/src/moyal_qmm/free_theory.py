"""Free-theory (g = 0) partition function.

Two forms: the exact Gaussian product over matrix components, and its
expansion in the zero-sum deviations around the symmetric spectrum.  The
product form is the ground truth every other route is measured against.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .model import KineticSpectrum
from .numerics import SignedLogReal

__all__ = ["log_z_free_product", "log_z_free_epsilon_expansion"]


def log_z_free_product(spectrum: KineticSpectrum) -> SignedLogReal:
    """Exact free value: prod_k sqrt(pi/e_k) * prod_{k<l} pi/(e_k + e_l)."""
    e = spectrum.e
    log_pi = math.log(math.pi)
    total = 0.5 * float(np.sum(log_pi - np.log(e)))
    pair_sums = e[:, None] + e[None, :]
    iu = np.triu_indices(spectrum.n, k=1)
    total += float(np.sum(log_pi - np.log(pair_sums[iu])))
    return SignedLogReal(1, total)


# Expansion terms as (degree, coefficient-of-N, constant, powers of the
# deviation power-sums).  A term contributes (cn * N + c0) * prod_k S_k^m_k,
# where S_k = sum_j eps_j^k and the degree is sum_k k * m_k.  Every
# coefficient follows from sum_{k<l} (eps_k + eps_l)^m = (1/2) [sum_m
# binom(m, j) S_j S_{m-j} - 2^m S_m]; in particular the (S_3)^2 weight is
# 10/384 = 5/192 (the commonly quoted 5/96 double-counts the j = 3 term and
# would leave an O(eps^6) defect against the exact product).
_EXPANSION_TERMS = (
    (2, (1 / 8, -2 / 8), {2: 1}),
    (3, (-1 / 24, 4 / 24), {3: 1}),
    (4, (1 / 64, -8 / 64), {4: 1}),
    (4, (0.0, 3 / 64), {2: 2}),
    (5, (-1 / 160, 16 / 160), {5: 1}),
    (5, (0.0, -1 / 16), {2: 1, 3: 1}),
    (6, (1 / 384, -32 / 384), {6: 1}),
    (6, (0.0, 5 / 128), {2: 1, 4: 1}),
    (6, (0.0, 5 / 192), {3: 2}),
)


def symmetric_prefactor_log(xi: float, e: np.ndarray) -> float:
    """log of prod_k sqrt(pi/e_k) * (pi/(2 xi))^(N(N-1)/2)."""
    n = e.size
    return 0.5 * float(np.sum(np.log(math.pi / e))) + (n * (n - 1) / 2) * math.log(
        math.pi / (2.0 * xi)
    )


def log_z_free_epsilon_expansion(
    xi: float, eps_tilde: Sequence[float], order: int = 6
) -> SignedLogReal:
    """Deviation expansion of the free value, truncated at total degree `order`.

    Mixed products count their total degree, e.g. S2*S3 is degree 5.
    """
    if order not in (2, 3, 4, 5, 6):
        raise ValueError(f"order must be in 2..6, got {order}")
    eps = np.asarray(eps_tilde, dtype=float)
    if np.any(np.abs(eps) >= 1.0):
        raise ValueError("expansion requires |eps_j| < 1")
    n = eps.size
    e = xi * (1.0 + eps)
    if np.any(e <= 0.0):
        raise ValueError("deviations must keep all eigenvalues positive")
    power_sums = {k: float(np.sum(eps**k)) for k in range(2, 7)}
    log_val = symmetric_prefactor_log(xi, e)
    for degree, (cn, c0), powers in _EXPANSION_TERMS:
        if degree > order:
            continue
        coef = cn * n + c0
        term = coef
        for k, m in powers.items():
            term *= power_sums[k] ** m
        log_val += term
    return SignedLogReal(1, log_val)
