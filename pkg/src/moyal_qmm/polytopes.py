"""Diagonal subpolytopes of symmetric stochastic matrices.

A marginal vector u prescribes the row sums of a symmetric, zero-diagonal,
entrywise-nonnegative N x N matrix; the feasible off-diagonal entries form a
polytope of dimension N(N-3)/2.  This module provides feasibility, exact
volumes for small N, Monte Carlo volume estimates, the closed asymptotic
volume formula with its applicability measure, and the exponential-integral
identity that ties the volumes back to the free partition function.

Measure convention: volumes are measured in a fixed "chart" given by a
subset of off-diagonal coordinates chosen so that (row-sum functionals +
chart selectors) has determinant +-2.  Any such chart yields the same
volume (transition maps between two valid charts are unimodular), and the
convention makes  prod dw f(u(w)) = (1/2) int du V_N(u) f(u)  hold exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .numerics import SignedLogReal, ln_gamma, log_mean_and_stderr, tree_logsumexp

__all__ = [
    "InfeasibleMarginalError",
    "DiagonalMarginal",
    "OffDiagonalMatrix",
    "PolytopeVolume",
    "FiberChart",
    "pair_list",
    "fiber_chart",
    "row_sums",
    "exact_volume_n3",
    "exact_volume_small_n",
    "mc_volume",
    "asymptotic_volume",
    "validity_condition",
    "validity_moments",
    "factorization_identity_check",
]

FEAS_ATOL = 1e-12


class InfeasibleMarginalError(ValueError):
    """Raised when an operation requires a nonempty polytope."""


def pair_list(n: int) -> list[tuple[int, int]]:
    """Canonical 0-based ordering of the off-diagonal index pairs (k < l)."""
    return [(k, l) for k in range(n) for l in range(k + 1, n)]


@dataclass(frozen=True, init=False)
class DiagonalMarginal:
    """Row sums u_j >= 0 of the off-diagonal part; h = 1 - u is the diagonal."""

    u: np.ndarray

    def __init__(self, u: Sequence[float]) -> None:
        arr = np.asarray(u, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("marginal must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise ValueError("marginal entries must be finite and >= 0")
        object.__setattr__(self, "u", arr)
        self.u.setflags(write=False)

    @property
    def n(self) -> int:
        return int(self.u.size)

    @property
    def s(self) -> float:
        return float(np.sum(self.u))

    @property
    def h(self) -> np.ndarray:
        return 1.0 - self.u

    @property
    def chi(self) -> float:
        return self.n - self.s

    @property
    def in_unit_range(self) -> bool:
        """True when the h-form (stochastic-matrix diagonal) is meaningful."""
        return bool(np.all(self.u <= 1.0))

    @property
    def feasible(self) -> bool:
        """Nonempty polytope iff twice the largest row sum fits in the total."""
        if self.n == 1:
            return self.u[0] <= FEAS_ATOL
        s = self.s
        return 2.0 * float(np.max(self.u)) <= s + FEAS_ATOL * max(1.0, s)

    @property
    def dimension(self) -> int:
        return self.n * (self.n - 3) // 2

    def require_feasible(self, context: str) -> None:
        if not self.feasible:
            raise InfeasibleMarginalError(f"{context}: marginal {self.u.tolist()} is infeasible")


@dataclass(frozen=True, init=False)
class OffDiagonalMatrix:
    """Off-diagonal entries w_{kl} >= 0, ordered like pair_list(n)."""

    w: np.ndarray
    n: int

    def __init__(self, w: Sequence[float], n: int) -> None:
        arr = np.asarray(w, dtype=float)
        if arr.size != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} entries for n={n}, got {arr.size}")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise ValueError("off-diagonal entries must be finite and >= 0")
        object.__setattr__(self, "w", arr)
        object.__setattr__(self, "n", int(n))
        self.w.setflags(write=False)


@dataclass(frozen=True)
class PolytopeVolume:
    """A volume in log form with its provenance and (for MC) uncertainty."""

    value: SignedLogReal
    method: str  # "exact" | "mc" | "asymptotic"
    std_error: float  # standard error of log-volume; 0 for exact/asymptotic
    dimension: int

    def __post_init__(self) -> None:
        if self.value.sign < 0:
            raise ValueError("volumes cannot be negative")
        if self.method not in ("exact", "mc", "asymptotic"):
            raise ValueError(f"unknown method {self.method!r}")


def row_sums(w: OffDiagonalMatrix, n: int) -> DiagonalMarginal:
    """Marginal u_k = sum of all entries whose pair contains k."""
    if n != w.n:
        raise ValueError(f"size mismatch: matrix built for n={w.n}, asked n={n}")
    u = np.zeros(n)
    for idx, (k, l) in enumerate(pair_list(n)):
        u[k] += w.w[idx]
        u[l] += w.w[idx]
    return DiagonalMarginal(u)


# ---------------------------------------------------------------------------
# Chart construction.  The N row-sum functionals, extended by selectors for a
# complement subset of pairs, must have |det| = 2.  That holds exactly when
# the non-selected pairs form a connected spanning subgraph with one odd
# cycle; the lexicographically first complement with this property is chosen
# greedily, using the fact that a completion exists iff the still-available
# pairs form a connected non-bipartite graph on all vertices.
# ---------------------------------------------------------------------------


def _connected_non_bipartite(n: int, edges: list[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for k, l in edges:
        adj[k].append(l)
        adj[l].append(k)
    color = [-1] * n
    color[0] = 0
    stack = [0]
    seen = 1
    odd = False
    while stack:
        v = stack.pop()
        for w_ in adj[v]:
            if color[w_] == -1:
                color[w_] = color[v] ^ 1
                seen += 1
                stack.append(w_)
            elif color[w_] == color[v]:
                odd = True
    return seen == n and odd


@dataclass(frozen=True)
class FiberChart:
    """Chart data for the fiber polytope over a marginal at fixed n."""

    n: int
    complement: tuple[int, ...]  # pair indices serving as free coordinates
    basis: tuple[int, ...]  # pair indices solved from the row sums
    basis_inv: np.ndarray  # inverse of the row-sum block on the basis pairs
    coupling: np.ndarray  # row-sum block on the complement pairs

    @property
    def dimension(self) -> int:
        return len(self.complement)

    def halfspaces(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Constraints G z <= d(u) describing the fiber in chart coordinates."""
        d = self.dimension
        G = np.vstack([-np.eye(d), self.basis_inv @ self.coupling])
        dvec = np.concatenate([np.zeros(d), self.basis_inv @ u])
        return G, dvec

    def basis_values(self, u: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Solved coordinates w_basis for chart point(s) z (last axis = dim)."""
        return (u - z @ self.coupling.T) @ self.basis_inv.T


@lru_cache(maxsize=None)
def fiber_chart(n: int) -> FiberChart:
    if n < 3:
        raise ValueError(f"chart requires n >= 3, got {n}")
    pairs = pair_list(n)
    p = len(pairs)
    dim = n * (n - 3) // 2
    complement: list[int] = []
    for idx in range(p):
        if len(complement) == dim:
            break
        trial = set(complement) | {idx}
        remaining = [pairs[i] for i in range(p) if i not in trial]
        if _connected_non_bipartite(n, remaining):
            complement.append(idx)
    if len(complement) != dim:
        raise RuntimeError(f"chart construction failed for n={n}")
    basis = tuple(i for i in range(p) if i not in set(complement))
    # row-sum matrix: column per pair, rows are the vertex sums
    A = np.zeros((n, p))
    for idx, (k, l) in enumerate(pairs):
        A[k, idx] = 1.0
        A[l, idx] = 1.0
    A_basis = A[:, list(basis)]
    A_comp = A[:, list(complement)] if dim else np.zeros((n, 0))
    # validate the +-2 determinant of (row sums + complement selectors)
    full = np.zeros((p, p))
    full[:n, :] = A
    for r, idx in enumerate(complement):
        full[n + r, idx] = 1.0
    _, logdet = np.linalg.slogdet(full)
    if abs(logdet - math.log(2.0)) > 1e-9:
        raise RuntimeError(f"chart for n={n} has |det| != 2 (log det {logdet})")
    return FiberChart(
        n=n,
        complement=tuple(complement),
        basis=basis,
        basis_inv=np.linalg.inv(A_basis),
        coupling=A_comp,
    )


# ---------------------------------------------------------------------------
# Exact volumes.
# ---------------------------------------------------------------------------


def exact_volume_n3(marginal: DiagonalMarginal) -> PolytopeVolume:
    """n=3 fiber is a single point; counting measure 1 if feasible else 0."""
    if marginal.n != 3:
        raise ValueError(f"requires n=3, got n={marginal.n}")
    u = marginal.u
    entries = 0.5 * np.array(
        [u[0] + u[1] - u[2], u[0] + u[2] - u[1], u[1] + u[2] - u[0]]
    )
    feasible = bool(np.all(entries >= -FEAS_ATOL * max(1.0, marginal.s)))
    value = SignedLogReal.one() if feasible else SignedLogReal.zero()
    return PolytopeVolume(value=value, method="exact", std_error=0.0, dimension=0)


def _enumerate_vertices(G: np.ndarray, d: np.ndarray) -> np.ndarray:
    """All vertices of {z : G z <= d} by basic-solution enumeration."""
    dim = G.shape[1]
    scale = max(1.0, float(np.max(np.abs(d))))
    verts = []
    for rows in combinations(range(G.shape[0]), dim):
        sub = G[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        z = np.linalg.solve(sub, d[list(rows)])
        if np.all(G @ z <= d + 1e-9 * scale):
            verts.append(z)
    if not verts:
        return np.zeros((0, dim))
    arr = np.array(verts)
    _, keep = np.unique(np.round(arr / scale, 9), axis=0, return_index=True)
    return arr[np.sort(keep)]


def exact_volume_small_n(marginal: DiagonalMarginal) -> PolytopeVolume:
    """Exact chart volume of the fiber for n in {4, 5} by vertex enumeration."""
    n = marginal.n
    if n not in (4, 5):
        raise ValueError(f"exact volumes implemented for n in {{4, 5}}, got {n}")
    dim = marginal.dimension
    if not marginal.feasible:
        return PolytopeVolume(SignedLogReal.zero(), "exact", 0.0, dim)
    chart = fiber_chart(n)
    G, d = chart.halfspaces(marginal.u)
    verts = _enumerate_vertices(G, d)
    if verts.shape[0] <= dim:
        return PolytopeVolume(SignedLogReal.zero(), "exact", 0.0, dim)
    try:
        vol = float(ConvexHull(verts).volume)
    except QhullError:
        vol = 0.0  # degenerate (lower-dimensional) fiber
    return PolytopeVolume(SignedLogReal.from_float(vol), "exact", 0.0, dim)


def fiber_area_batch_n4(u_batch: np.ndarray) -> np.ndarray:
    """Vectorized n=4 fiber areas for a (B, 4) batch of marginals.

    Same chart and measure as exact_volume_small_n; used where the area is
    needed at many marginals (the factorization-identity integral).
    """
    chart = fiber_chart(4)
    G, _ = chart.halfspaces(np.zeros(4))  # G is u-independent
    n_rows = G.shape[0]
    u_batch = np.atleast_2d(np.asarray(u_batch, dtype=float))
    B = u_batch.shape[0]
    dvec = np.concatenate(
        [np.zeros((B, chart.dimension)), u_batch @ chart.basis_inv.T], axis=1
    )
    pairs = list(combinations(range(n_rows), 2))
    inv = np.full((len(pairs), 2, 2), np.nan)
    ok = np.zeros(len(pairs), dtype=bool)
    for i, (r, s_) in enumerate(pairs):
        sub = G[[r, s_]]
        det = sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0]
        if abs(det) > 1e-12:
            inv[i] = np.array([[sub[1, 1], -sub[0, 1]], [-sub[1, 0], sub[0, 0]]]) / det
            ok[i] = True
    rows_a = np.array([p[0] for p in pairs])
    rows_b = np.array([p[1] for p in pairs])
    rhs = np.stack([dvec[:, rows_a], dvec[:, rows_b]], axis=2)  # (B, P, 2)
    cand = np.einsum("pij,bpj->bpi", inv, rhs)  # (B, P, 2)
    scale = np.maximum(1.0, np.max(np.abs(dvec), axis=1))[:, None]
    slack = dvec[:, None, :] - np.einsum("ri,bpi->bpr", G, cand)
    with np.errstate(invalid="ignore"):
        feas = ok[None, :] & np.all(slack >= -1e-9 * scale[..., None], axis=2)
    areas = np.zeros(B)
    any_feas = np.any(feas, axis=1)
    if not np.any(any_feas):
        return areas
    idx = np.where(any_feas)[0]
    pts = cand[idx]
    msk = feas[idx]
    first = np.argmax(msk, axis=1)
    fill = pts[np.arange(len(idx)), first][:, None, :]
    pts = np.where(msk[..., None], pts, fill)
    center = pts.mean(axis=1, keepdims=True)
    ang = np.arctan2(pts[..., 1] - center[..., 1], pts[..., 0] - center[..., 0])
    order = np.argsort(ang, axis=1)
    sorted_pts = np.take_along_axis(pts, order[..., None], axis=1)
    x, y = sorted_pts[..., 0], sorted_pts[..., 1]
    xn, yn = np.roll(x, -1, axis=1), np.roll(y, -1, axis=1)
    areas[idx] = 0.5 * np.abs(np.sum(x * yn - xn * y, axis=1))
    return areas


# ---------------------------------------------------------------------------
# Monte Carlo volumes.  Small n: rejection from the chart bounding box.
# Larger n: peel one vertex at a time, sampling the freed row sum uniformly
# on its simplex; the product of simplex volumes times the n=3 base density
# is an unbiased estimate of the pushforward density, i.e. of V_N / 2.
# ---------------------------------------------------------------------------

_REJECTION_MAX_N = 6
_MC_CHUNK = 1 << 16
_STREAM_STRIDE = 64  # jumped-stream slots reserved per chunk


def _chunk_rng(seed: int, chunk: int, slot: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed).jumped(chunk * _STREAM_STRIDE + slot))


def _rejection_log_volume(
    marginal: DiagonalMarginal, n_samples: int, seed: int
) -> tuple[float, float]:
    n = marginal.n
    chart = fiber_chart(n)
    u = marginal.u
    pairs = pair_list(n)
    box_hi = np.array([min(u[pairs[i][0]], u[pairs[i][1]]) for i in chart.complement])
    if np.any(box_hi <= 0.0):
        # a chart coordinate is pinned to zero: the fiber has zero chart volume
        return -math.inf, 0.0
    log_box = float(np.sum(np.log(box_hi)))
    hits = 0
    done = 0
    chunk_idx = 0
    while done < n_samples:
        m = min(_MC_CHUNK, n_samples - done)
        rng = _chunk_rng(seed, chunk_idx)
        z = rng.random((m, chart.dimension)) * box_hi
        wb = chart.basis_values(u, z)
        hits += int(np.count_nonzero(np.all(wb >= 0.0, axis=1)))
        done += m
        chunk_idx += 1
    if hits == 0:
        return -math.inf, math.inf
    p = hits / n_samples
    log_vol = log_box + math.log(p)
    se_log = math.sqrt((1.0 - p) / (p * n_samples))
    return log_vol, se_log


def _peeling_log_volume(
    marginal: DiagonalMarginal, n_samples: int, seed: int
) -> tuple[float, float]:
    n = marginal.n
    lse_parts: list[float] = []
    lse_sq_parts: list[float] = []
    done = 0
    chunk_idx = 0
    while done < n_samples:
        m = min(_MC_CHUNK, n_samples - done)
        v = np.broadcast_to(marginal.u, (m, n)).copy()
        logw = np.zeros(m)
        alive = np.ones(m, dtype=bool)
        for level in range(n, 3, -1):
            last = v[:, level - 1]
            alive &= last > 0.0
            safe_last = np.where(alive, last, 1.0)
            logw += (level - 2) * np.log(safe_last) - ln_gamma(level - 1)
            rng = _chunk_rng(seed, chunk_idx, slot=n - level + 1)
            t = rng.standard_exponential((m, level - 1))
            t *= (safe_last / np.sum(t, axis=1))[:, None]
            v = v[:, : level - 1] - t
            alive &= np.all(v >= 0.0, axis=1)
            s = np.sum(v, axis=1)
            alive &= 2.0 * np.max(v, axis=1) <= s + FEAS_ATOL * np.maximum(1.0, s)
        logw = np.where(alive, logw - math.log(2.0), -np.inf)
        lse_parts.append(tree_logsumexp(logw))
        lse_sq_parts.append(tree_logsumexp(2.0 * logw))
        done += m
        chunk_idx += 1
    log_sum = tree_logsumexp(lse_parts)
    log_sum_sq = tree_logsumexp(lse_sq_parts)
    log_density, se = log_mean_and_stderr(log_sum, log_sum_sq, n_samples)
    return log_density + math.log(2.0), se


def mc_volume(marginal: DiagonalMarginal, n_samples: int, seed: int) -> PolytopeVolume:
    """Monte Carlo chart volume; rejection for n <= 6, simplex peeling above."""
    n = marginal.n
    if n < 4:
        raise ValueError(f"Monte Carlo volumes require n >= 4, got {n}")
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    marginal.require_feasible("mc_volume")
    if n <= _REJECTION_MAX_N:
        log_vol, se = _rejection_log_volume(marginal, n_samples, seed)
    else:
        log_vol, se = _peeling_log_volume(marginal, n_samples, seed)
    value = SignedLogReal.zero() if log_vol == -math.inf else SignedLogReal(1, log_vol)
    return PolytopeVolume(value=value, method="mc", std_error=se, dimension=marginal.dimension)


# ---------------------------------------------------------------------------
# Asymptotic volume and its applicability measure.
# ---------------------------------------------------------------------------


def asymptotic_volume(marginal: DiagonalMarginal) -> PolytopeVolume:
    """Closed asymptotic volume formula, evaluated in log domain.

    Applicability is *not* gated here; callers judge it with
    validity_condition / validity_moments.
    """
    n = marginal.n
    s = marginal.s
    if s <= 0.0:
        raise ValueError("asymptotic volume requires a positive total row sum")
    binom = n * (n - 1) / 2.0
    dev = marginal.u - s / n
    d2 = float(np.sum(dev**2))
    d3 = float(np.sum(dev**3))
    d4 = float(np.sum(dev**4))
    log_val = (
        0.5 * math.log(2.0)
        + 7.0 / 6.0
        + binom * (1.0 + math.log(s) - math.log(n * (n - 1.0)))
        + (n / 2.0) * math.log(n * (n - 1.0) ** 2 / (2.0 * math.pi * s**2))
        - ((n - 1.0) ** 2 / (2.0 * s**2)) * (n + 2.0) * d2
        + (n * (n - 1.0) ** 3 / (3.0 * s**3)) * d3
        - (n * (n - 1.0) ** 4 / (4.0 * s**4)) * d4
        + ((n - 1.0) ** 4 / (4.0 * s**4)) * d2**2
    )
    return PolytopeVolume(
        value=SignedLogReal(1, log_val),
        method="asymptotic",
        std_error=0.0,
        dimension=marginal.dimension,
    )


def validity_condition(marginal: DiagonalMarginal) -> float:
    """max_j n^(1/4) (n-1)/S |u_j - S/n|; the formula needs this << 1."""
    s = marginal.s
    if s <= 0.0:
        raise ValueError("requires a positive total row sum")
    n = marginal.n
    return float(n**0.25 * (n - 1.0) / s * np.max(np.abs(marginal.u - s / n)))


def validity_moments(marginal: DiagonalMarginal, k_max: int = 4) -> dict[int, float]:
    """Diagnostic moment sums sum_j n^(k/4-1) ((n-1)/S)^k |u_j - S/n|^k, k >= 2."""
    s = marginal.s
    if s <= 0.0:
        raise ValueError("requires a positive total row sum")
    n = marginal.n
    dev = np.abs(marginal.u - s / n)
    return {
        k: float(n ** (k / 4.0 - 1.0) * np.sum(((n - 1.0) / s * dev) ** k))
        for k in range(2, k_max + 1)
    }


# ---------------------------------------------------------------------------
# Factorization identity:  prod_{k<l} 1/(e_k+e_l)
#                          = (1/2) int du V_N(u) exp(-sum u_m e_m).
# ---------------------------------------------------------------------------


def factorization_identity_check(
    spectrum_e: Sequence[float], n_points: int = 1 << 21
) -> tuple[SignedLogReal, SignedLogReal]:
    """Evaluate both sides of the volume identity for n in {3, 4}.

    n=4: the scaling law V(S y) = S^2 V(y) turns the radial integral into a
    Gamma function, leaving a 3-D integral of the continuous function
    V(y) / (y.e)^6 over the unit simplex, done with a fixed Sobol rule.
    n=3: the feasible band of the last coordinate integrates in closed form
    and the remaining square is split along its diagonal kink.
    """
    e = np.asarray(spectrum_e, dtype=float)
    n = e.size
    if np.any(e <= 0.0):
        raise ValueError("eigenvalues must be positive")
    pairs = pair_list(n)
    lhs_log = -float(np.sum(np.log(e[[k for k, _ in pairs]] + e[[l for _, l in pairs]])))
    lhs = SignedLogReal(1, lhs_log)
    if n == 4:
        rhs_val = _identity_rhs_n4(e, n_points)
    elif n == 3:
        rhs_val = _identity_rhs_n3(e)
    else:
        raise ValueError(f"identity check implemented for n in {{3, 4}}, got {n}")
    return lhs, SignedLogReal.from_float(rhs_val)


def _identity_rhs_n4(e: np.ndarray, n_points: int) -> float:
    # (1/2) int du V(u) e^(-u.e)  =  (1/2) Gamma(6) int_simplex V(y)/(y.e)^6 dy
    # and the simplex mean is taken with a deterministic Sobol rule mapped to
    # Dirichlet(1,1,1,1); the simplex has d^3y-volume 1/3!.
    from scipy.stats import qmc

    sob = qmc.Sobol(d=4, scramble=True, seed=20240229)
    total = 0.0
    done = 0
    batch = 1 << 17
    while done < n_points:
        m = min(batch, n_points - done)
        q = sob.random(m)
        g = -np.log1p(-q)  # exponential spacings -> uniform on the simplex
        y = g / np.sum(g, axis=1, keepdims=True)
        vals = fiber_area_batch_n4(y) / (y @ e) ** 6
        total += float(np.sum(vals))
        done += m
    mean = total / n_points
    return 0.5 * math.gamma(6.0) * mean / 6.0


def _identity_rhs_n3(e: np.ndarray, nodes: int = 120) -> float:
    # Feasibility at n=3 pins u3 to [|u1-u2|, u1+u2]; that axis integrates in
    # closed form.  The (u1, u2) square is split along u2 = u1 where the
    # closed form has a kink, each triangle mapped smoothly.
    from numpy.polynomial.legendre import leggauss

    x, w = leggauss(nodes)
    span = 40.0 / float(np.min(e))
    t = 0.5 * span * (x + 1.0)
    wt = 0.5 * span * w

    def band(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
        lo = np.abs(u1 - u2)
        hi = u1 + u2
        return (np.exp(-e[2] * lo) - np.exp(-e[2] * hi)) / e[2]

    total = 0.0
    for lower in (True, False):
        # triangle u2 in [0, u1] (lower) or u1 in [0, u2] (upper)
        outer = t
        frac = 0.5 * (x + 1.0)
        u_out = outer[:, None]
        u_in = u_out * frac[None, :]
        w_in = u_out * 0.5 * w[None, :]
        if lower:
            f = np.exp(-e[0] * u_out - e[1] * u_in) * band(u_out, u_in)
        else:
            f = np.exp(-e[0] * u_in - e[1] * u_out) * band(u_in, u_out)
        total += float(wt @ np.sum(f * w_in, axis=1))
    return 0.5 * total
