"""Route registry, cross-comparison harness, and polytope study driver.

A comparison run executes a set of named routes on one model configuration,
tabulates pairwise log differences with combined uncertainties, and judges
each pair against the configured thresholds: deterministic pairs against an
absolute log tolerance, pairs involving Monte Carlo against a multiple of
the combined standard error.  Reports serialize canonically so identical
configurations produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from . import REPORT_SCHEMA, __version__
from .closed_forms import (
    log_z_free_polytope_route,
    log_z_weak_coupling,
    log_z_weak_coupling_epsilon,
    meijer_factor,
)
from .eigen_integrals import QUADRATURE_MAX_N, log_z_eigen_quadrature, log_z_matrix_mc
from .free_theory import log_z_free_epsilon_expansion, log_z_free_product
from .model import Coupling, KineticSpectrum, spectrum_from_json_doc
from .numerics import SignedLogReal
from .polytopes import (
    DiagonalMarginal,
    asymptotic_volume,
    exact_volume_n3,
    exact_volume_small_n,
    mc_volume,
    validity_condition,
    validity_moments,
)

__all__ = [
    "ConfigError",
    "ComparisonConfig",
    "RouteResult",
    "ComparisonReport",
    "run_comparison",
    "PolytopeStudyConfig",
    "run_polytope_study",
    "polytope_volume_records",
    "report_to_json_bytes",
    "report_to_csv",
]

ROUTES = (
    "free_product",
    "free_expansion",
    "free_polytope",
    "eigen_quadrature",
    "matrix_mc",
    "weak_coupling",
    "weak_coupling_epsilon",
)

DEFAULT_TOLERANCE_LOG = 1e-6
DEFAULT_MC_SIGMA = 3.0
DEFAULT_NODES_PER_DIM = 120
DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 20240229


class ConfigError(ValueError):
    """Invalid run configuration (unknown route, bad spectrum, ...)."""


@dataclass(frozen=True)
class ComparisonConfig:
    spectrum: KineticSpectrum
    g: float = 0.0
    routes: tuple[str, ...] = ("free_product",)
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    nodes_per_dim: int = DEFAULT_NODES_PER_DIM
    expansion_order: int = 6
    tolerance_log: float = DEFAULT_TOLERANCE_LOG
    mc_sigma: float = DEFAULT_MC_SIGMA
    meijer_flag: bool = False
    timestamp: str | None = None  # echoed verbatim; omitted unless provided

    @staticmethod
    def from_dict(doc: dict) -> "ComparisonConfig":
        try:
            spectrum = spectrum_from_json_doc(doc)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad spectrum: {exc}") from exc
        routes = doc.get("routes")
        if not routes or not isinstance(routes, (list, tuple)):
            raise ConfigError('config needs a non-empty "routes" list')
        kwargs = {}
        for key, name in (
            ("g", "g"),
            ("samples", "samples"),
            ("seed", "seed"),
            ("nodes_per_dim", "nodes_per_dim"),
            ("expansion_order", "expansion_order"),
            ("tolerance_log", "tolerance_log"),
            ("mc_sigma", "mc_sigma"),
            ("meijer_factor", "meijer_flag"),
            ("timestamp", "timestamp"),
        ):
            if key in doc and doc[key] is not None:
                kwargs[name] = doc[key]
        try:
            return ComparisonConfig(spectrum=spectrum, routes=tuple(routes), **kwargs)
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        doc = {
            "e": [float(x) for x in self.spectrum.e],
            "g": self.g,
            "routes": list(self.routes),
            "samples": self.samples,
            "seed": self.seed,
            "nodes_per_dim": self.nodes_per_dim,
            "expansion_order": self.expansion_order,
            "tolerance_log": self.tolerance_log,
            "mc_sigma": self.mc_sigma,
            "meijer_factor": self.meijer_flag,
        }
        if self.timestamp is not None:
            doc["timestamp"] = self.timestamp
        return doc


@dataclass(frozen=True)
class RouteResult:
    route: str
    log_z: SignedLogReal
    std_error: float  # 0 for deterministic routes
    params: dict

    def to_dict(self) -> dict:
        return {
            "route": self.route,
            "log_z": {"sign": self.log_z.sign, "log_mag": self.log_z.log_mag},
            "std_error": self.std_error,
            "params": self.params,
        }


@dataclass(frozen=True)
class PairVerdict:
    route_a: str
    route_b: str
    dlog: float
    sigma: float
    threshold: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "route_a": self.route_a,
            "route_b": self.route_b,
            "dlog": self.dlog,
            "sigma": self.sigma,
            "threshold": self.threshold,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class ComparisonReport:
    config: ComparisonConfig
    results: tuple[RouteResult, ...]
    pairwise: tuple[PairVerdict, ...]

    @property
    def all_pass(self) -> bool:
        return all(p.passed for p in self.pairwise)

    def pairwise_matrix(self) -> list[list[float]]:
        logs = [r.log_z.log_mag * r.log_z.sign if r.log_z.sign else float("-inf") for r in self.results]
        return [[li - lj for lj in logs] for li in logs]

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "metadata": {
                "seed": self.config.seed,
                "version": __version__,
                "timestamp": self.config.timestamp,
            },
            "config": self.config.to_dict(),
            "results": [r.to_dict() for r in self.results],
            "pairwise": [p.to_dict() for p in self.pairwise],
            "pairwise_matrix": self.pairwise_matrix(),
            "verdicts": {
                "all_pass": self.all_pass,
                "n_fail": sum(not p.passed for p in self.pairwise),
            },
        }


def _route_runner(name: str, cfg: ComparisonConfig) -> tuple[SignedLogReal, float, dict]:
    s = cfg.spectrum
    g = Coupling(cfg.g)
    xi, eps = s.xi, s.eps_tilde
    if name == "free_product":
        if cfg.g != 0.0:
            raise ConfigError("free_product is only defined at g = 0")
        return log_z_free_product(s), 0.0, {}
    if name == "free_expansion":
        if cfg.g != 0.0:
            raise ConfigError("free_expansion is only defined at g = 0")
        val = log_z_free_epsilon_expansion(xi, eps, cfg.expansion_order)
        return val, 0.0, {"order": cfg.expansion_order}
    if name == "free_polytope":
        if cfg.g != 0.0:
            raise ConfigError("free_polytope is only defined at g = 0")
        return log_z_free_polytope_route(xi, eps), 0.0, {}
    if name == "eigen_quadrature":
        if s.n > QUADRATURE_MAX_N:
            raise ConfigError(f"eigen_quadrature requires N <= {QUADRATURE_MAX_N}")
        val = log_z_eigen_quadrature(s, g, cfg.nodes_per_dim)
        return val, 0.0, {"nodes_per_dim": cfg.nodes_per_dim}
    if name == "matrix_mc":
        est = log_z_matrix_mc(s, g, cfg.samples, cfg.seed)
        return (
            SignedLogReal(1, est.mean),
            est.std_error,
            {"samples": cfg.samples, "seed": cfg.seed},
        )
    if name == "weak_coupling":
        val = log_z_weak_coupling(s, g)
        if cfg.meijer_flag:
            val = val * meijer_factor(s.n)
        return val, 0.0, {"meijer_factor": cfg.meijer_flag}
    if name == "weak_coupling_epsilon":
        val = log_z_weak_coupling_epsilon(xi, eps, g)
        if cfg.meijer_flag:
            val = val * meijer_factor(s.n)
        return val, 0.0, {"meijer_factor": cfg.meijer_flag}
    raise ConfigError(f"unknown route {name!r} (known: {', '.join(ROUTES)})")


def run_comparison(config: ComparisonConfig) -> ComparisonReport:
    if len(config.routes) < 2:
        raise ConfigError("a comparison needs at least 2 routes")
    if len(set(config.routes)) != len(config.routes):
        raise ConfigError("route tags must be unique within a report")
    results = []
    for name in config.routes:
        try:
            value, se, extra = _route_runner(name, config)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"route {name!r}: {exc}") from exc
        params = {"n": config.spectrum.n, "g": config.g}
        params.update(extra)
        results.append(RouteResult(route=name, log_z=value, std_error=se, params=params))
    pairwise = []
    for i in range(len(results)):
        for j in range(i + 1, len(results)):
            a, b = results[i], results[j]
            dlog = (a.log_z.sign * a.log_z.log_mag) - (b.log_z.sign * b.log_z.log_mag)
            if a.log_z.sign != 1 or b.log_z.sign != 1:
                dlog = float("nan")
            sigma = math.hypot(a.std_error, b.std_error)
            threshold = config.mc_sigma * sigma if sigma > 0 else config.tolerance_log
            passed = bool(abs(dlog) <= threshold) if not math.isnan(dlog) else False
            pairwise.append(
                PairVerdict(a.route, b.route, dlog, sigma, threshold, passed)
            )
    return ComparisonReport(config=config, results=tuple(results), pairwise=tuple(pairwise))


# ---------------------------------------------------------------------------
# Polytope study: exact / MC / asymptotic volumes across a range of sizes.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolytopeStudyConfig:
    n_values: tuple[int, ...] = ()
    u_value: float = 0.9  # symmetric marginal entry for the n_values scan
    marginals: tuple[tuple[float, ...], ...] = ()  # explicit extra profiles
    samples: int = 200_000
    seed: int = DEFAULT_SEED
    timestamp: str | None = None

    @staticmethod
    def from_dict(doc: dict) -> "PolytopeStudyConfig":
        if not doc.get("n_values") and not doc.get("marginals"):
            raise ConfigError('study config needs "n_values" and/or "marginals"')
        kwargs = {}
        for key in ("u_value", "samples", "seed", "timestamp"):
            if key in doc and doc[key] is not None:
                kwargs[key] = doc[key]
        try:
            return PolytopeStudyConfig(
                n_values=tuple(int(n) for n in doc.get("n_values") or ()),
                marginals=tuple(tuple(float(x) for x in u) for u in doc.get("marginals") or ()),
                **kwargs,
            )
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        doc = {
            "n_values": list(self.n_values),
            "u_value": self.u_value,
            "marginals": [list(u) for u in self.marginals],
            "samples": self.samples,
            "seed": self.seed,
        }
        if self.timestamp is not None:
            doc["timestamp"] = self.timestamp
        return doc


def polytope_volume_records(
    marginal: DiagonalMarginal,
    methods: tuple[str, ...],
    samples: int = 200_000,
    seed: int = DEFAULT_SEED,
) -> list[dict]:
    """Volume records {n, u, method, log_volume, std_error, validity} per method."""
    records = []
    validity = validity_condition(marginal) if marginal.s > 0 else float("nan")
    for method in methods:
        if method == "exact":
            vol = exact_volume_n3(marginal) if marginal.n == 3 else exact_volume_small_n(marginal)
        elif method == "mc":
            vol = mc_volume(marginal, samples, seed)
        elif method == "asymptotic":
            vol = asymptotic_volume(marginal)
        else:
            raise ConfigError(f"unknown volume method {method!r}")
        records.append(
            {
                "n": marginal.n,
                "u": [float(x) for x in marginal.u],
                "method": method,
                "log_volume": vol.value.log_mag if vol.value.sign else None,
                "std_error": vol.std_error,
                "validity": validity,
                "feasible": marginal.feasible,
                "in_unit_range": marginal.in_unit_range,
                "dimension": vol.dimension,
            }
        )
    return records


def _study_row(marginal: DiagonalMarginal, samples: int, seed: int) -> dict:
    n = marginal.n
    binom = n * (n - 1) / 2.0
    row: dict = {
        "n": n,
        "u": [float(x) for x in marginal.u],
        "s": marginal.s,
        "feasible": marginal.feasible,
        "in_unit_range": marginal.in_unit_range,
        "validity": validity_condition(marginal) if marginal.s > 0 else None,
        "moment_diagnostics": validity_moments(marginal) if marginal.s > 0 else None,
        "dimension": marginal.dimension,
    }
    if not marginal.feasible:
        row.update(
            log_volume_exact=None,
            log_volume_mc=None,
            mc_std_error=0.0,
            log_volume_asymptotic=None,
            per_coordinate_gap=None,
        )
        return row
    exact_log = None
    if n == 3:
        vol = exact_volume_n3(marginal)
        exact_log = vol.value.log_mag if vol.value.sign else None
    elif n in (4, 5):
        vol = exact_volume_small_n(marginal)
        exact_log = vol.value.log_mag if vol.value.sign else None
    mc = mc_volume(marginal, samples, seed) if n >= 4 else None
    asym = asymptotic_volume(marginal)
    ref_log = exact_log if exact_log is not None else (mc.value.log_mag if mc else None)
    gap = abs(asym.value.log_mag - ref_log) / binom if ref_log is not None else None
    row.update(
        log_volume_exact=exact_log,
        log_volume_mc=mc.value.log_mag if mc and mc.value.sign else None,
        mc_std_error=mc.std_error if mc else 0.0,
        log_volume_asymptotic=asym.value.log_mag,
        per_coordinate_gap=gap,
    )
    return row


def run_polytope_study(config: PolytopeStudyConfig) -> dict:
    rows = [
        _study_row(DiagonalMarginal([config.u_value] * n), config.samples, config.seed)
        for n in config.n_values
    ]
    rows += [
        _study_row(DiagonalMarginal(u), config.samples, config.seed)
        for u in config.marginals
    ]
    return {
        "schema": REPORT_SCHEMA,
        "metadata": {
            "seed": config.seed,
            "version": __version__,
            "timestamp": config.timestamp,
        },
        "config": config.to_dict(),
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------


def report_to_json_bytes(doc: dict) -> bytes:
    """Canonical JSON bytes: sorted keys, fixed separators, trailing newline."""
    return (json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=True) + "\n").encode()


def report_to_csv(doc: dict) -> str:
    """Flat CSV: pairwise verdicts for comparisons, rows for studies."""
    out = io.StringIO()
    if "pairwise" in doc:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["route_a", "route_b", "dlog", "sigma", "threshold", "pass"])
        for p in doc["pairwise"]:
            writer.writerow(
                [p["route_a"], p["route_b"], repr(p["dlog"]), repr(p["sigma"]), repr(p["threshold"]), p["pass"]]
            )
    elif "rows" in doc or "records" in doc:
        rows = doc.get("rows", doc.get("records"))
        keys = [k for k in rows[0] if k != "moment_diagnostics"] if rows else []
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(keys)
        for r in rows:
            writer.writerow(
                [";".join(str(x) for x in r[k]) if isinstance(r[k], list) else r[k] for k in keys]
            )
    else:
        writer = csv.writer(out, lineterminator="\n")
        for key, value in sorted(doc.items()):
            if isinstance(value, (str, int, float, bool)) or value is None:
                writer.writerow([key, value])
    return out.getvalue()
