"""Command-line client for the comparison service.

The CLI is a thin client: it builds the same pydantic requests the HTTP
service accepts and either dispatches them to the in-process handlers
(default) or POSTs them to a running server given with --server.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from pydantic import ValidationError

from .harness import ConfigError, report_to_csv, report_to_json_bytes
from .service import schemas

EXIT_OK = 0
EXIT_VERDICT_FAIL = 1
EXIT_CONFIG_ERROR = 2

ROUTE_COMMANDS = {
    "free": "free_product",
    "eigen": "eigen_quadrature",
    "mc": "matrix_mc",
}


def _add_spectrum_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None, help="matrix size (checked against the spectrum)")
    p.add_argument("--e", type=str, default=None, help="comma-separated kinetic eigenvalues")
    p.add_argument("--xi", type=float, default=None, help="mean kinetic level")
    p.add_argument(
        "--eps-tilde", type=str, default=None, help="comma-separated zero-sum deviations"
    )
    p.add_argument("--spectrum-json", type=str, default=None, help="path to a spectrum JSON file")


# flag defaults stay None so explicit flags always beat config-file fields
_FLAG_DEFAULTS = {
    "g": 0.0,
    "samples": 100_000,
    "seed": 20240229,
    "nodes_per_dim": 120,
    "order": 6,
    "tolerance_log": 1e-6,
    "mc_sigma": 3.0,
}


def _add_common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--g", type=float, default=None, help="quartic coupling (>= 0)")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--nodes-per-dim", type=int, default=None)
    p.add_argument("--order", type=int, default=None, help="truncation order for the expansion route")
    p.add_argument("--tolerance-log", type=float, default=None)
    p.add_argument("--mc-sigma", type=float, default=None)
    p.add_argument(
        "--meijer-factor",
        action="store_true",
        help="apply the optional resummation multiplier to the weak-coupling routes",
    )
    p.add_argument("--out", type=str, default=None, help="write the report to this path")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--server", type=str, default=None, help="base URL of a running service")


def _effective(args: argparse.Namespace, doc: dict, flag: str, cfg_key: str):
    value = getattr(args, flag)
    if value is not None:
        return value
    if cfg_key in doc and doc[cfg_key] is not None:
        return doc[cfg_key]
    return _FLAG_DEFAULTS[flag]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moyal-qmm",
        description="Evaluate and cross-compare matrix-model partition-function routes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for cmd, help_text in (
        ("free", "exact free-theory product formula"),
        ("eigen", "eigenvalue-integral tensor quadrature (N <= 4)"),
        ("mc", "direct matrix Monte Carlo"),
        ("weak", "weak-coupling closed forms (both parameterizations)"),
    ):
        p = sub.add_parser(cmd, help=help_text)
        _add_spectrum_args(p)
        _add_common_args(p)

    p = sub.add_parser("compare", help="run several routes and cross-compare them")
    _add_spectrum_args(p)
    _add_common_args(p)
    p.add_argument(
        "--routes",
        type=str,
        required=False,
        default=None,
        help="comma-separated route names",
    )
    p.add_argument("--config", type=str, default=None, help="JSON config file (flags override)")

    p = sub.add_parser("polytope", help="volumes of one diagonal subpolytope")
    p.add_argument("--u", type=str, required=True, help="comma-separated marginal entries")
    p.add_argument("--methods", type=str, default="asymptotic", help="exact,mc,asymptotic")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=20240229)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--server", type=str, default=None)

    p = sub.add_parser("study-polytope", help="exact/MC vs asymptotic volumes across sizes")
    p.add_argument("--n-values", type=str, default=None, help="comma-separated sizes")
    p.add_argument("--u-value", type=float, default=0.9, help="symmetric marginal entry")
    p.add_argument(
        "--marginals",
        type=str,
        default=None,
        help="explicit profiles, semicolon-separated comma lists (e.g. '1,1,1,1;2,.1,.1,.1')",
    )
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=20240229)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--server", type=str, default=None)

    return parser


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad numeric list {text!r}") from exc


def _spectrum_spec(args: argparse.Namespace) -> schemas.SpectrumSpec:
    doc: dict = {}
    if args.spectrum_json:
        with open(args.spectrum_json) as fh:
            doc = json.load(fh)
    if args.e is not None:
        doc = {"e": _parse_floats(args.e)}
    if args.xi is not None or args.eps_tilde is not None:
        if args.e is not None:
            raise ConfigError("give either --e or --xi/--eps-tilde, not both")
        if args.xi is None or args.eps_tilde is None:
            raise ConfigError("--xi and --eps-tilde must be given together")
        doc = {"xi": args.xi, "eps_tilde": _parse_floats(args.eps_tilde)}
    if not doc:
        raise ConfigError("no spectrum given (use --e, --xi/--eps-tilde or --spectrum-json)")
    try:
        spec = schemas.SpectrumSpec(**doc)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    size = len(doc.get("e") or doc.get("eps_tilde") or [])
    if args.n is not None and args.n != size:
        raise ConfigError(f"--n {args.n} does not match the spectrum length {size}")
    return spec


def _dispatch(args: argparse.Namespace, endpoint: str, payload) -> dict:
    if args.server:
        import httpx

        resp = httpx.post(args.server.rstrip("/") + endpoint, json=payload.model_dump(), timeout=3600.0)
        if resp.status_code == 422:
            raise ConfigError(resp.text)
        resp.raise_for_status()
        return resp.json()
    from fastapi import HTTPException

    from .service import app as service

    handlers = {
        "/v1/compare": service.compare_handler,
        "/v1/routes": service.route_handler,
        "/v1/polytope/volume": service.polytope_volume_handler,
        "/v1/polytope/study": service.polytope_study_handler,
    }
    try:
        return handlers[endpoint](payload)
    except HTTPException as exc:
        raise ConfigError(str(exc.detail)) from exc


def _emit(doc: dict, args: argparse.Namespace) -> None:
    if args.format == "csv":
        text = report_to_csv(doc)
        data = text.encode()
    else:
        data = report_to_json_bytes(doc)
        text = data.decode()
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(text)


def _route_request(args: argparse.Namespace, spec: schemas.SpectrumSpec, route: str) -> schemas.RouteRequest:
    return schemas.RouteRequest(
        spectrum=spec,
        route=route,
        g=_effective(args, {}, "g", "g"),
        samples=_effective(args, {}, "samples", "samples"),
        seed=_effective(args, {}, "seed", "seed"),
        nodes_per_dim=_effective(args, {}, "nodes_per_dim", "nodes_per_dim"),
        expansion_order=_effective(args, {}, "order", "expansion_order"),
        meijer_factor=args.meijer_factor,
    )


def _run_single_route(args: argparse.Namespace, route: str) -> int:
    req = _route_request(args, _spectrum_spec(args), route)
    doc = _dispatch(args, "/v1/routes", req)
    _emit(doc, args)
    return EXIT_OK


def _run_weak(args: argparse.Namespace) -> int:
    spec = _spectrum_spec(args)
    docs = []
    for route in ("weak_coupling", "weak_coupling_epsilon"):
        docs.append(_dispatch(args, "/v1/routes", _route_request(args, spec, route)))
    ratio = docs[0]["log_z"]["log_mag"] - docs[1]["log_z"]["log_mag"]
    merged = {
        "schema": docs[0]["schema"],
        "results": docs,
        "log_ratio_raw_over_epsilon_form": ratio,
    }
    _emit(merged, args)
    return EXIT_OK


def _run_compare(args: argparse.Namespace) -> int:
    doc: dict = {}
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
    spectrum = None
    if args.e is not None or args.xi is not None or args.spectrum_json:
        spectrum = _spectrum_spec(args)
    elif doc:
        spectrum = schemas.SpectrumSpec(
            **{k: doc[k] for k in ("e", "xi", "eps_tilde") if k in doc}
        )
    if spectrum is None:
        raise ConfigError("compare needs a spectrum (flags or --config)")
    routes = doc.get("routes")
    if args.routes:
        routes = [r.strip() for r in args.routes.split(",") if r.strip()]
    if not routes:
        raise ConfigError("compare needs --routes or a config with routes")

    try:
        req = schemas.CompareRequest(
            spectrum=spectrum,
            routes=routes,
            g=_effective(args, doc, "g", "g"),
            samples=_effective(args, doc, "samples", "samples"),
            seed=_effective(args, doc, "seed", "seed"),
            nodes_per_dim=_effective(args, doc, "nodes_per_dim", "nodes_per_dim"),
            expansion_order=_effective(args, doc, "order", "expansion_order"),
            tolerance_log=_effective(args, doc, "tolerance_log", "tolerance_log"),
            mc_sigma=_effective(args, doc, "mc_sigma", "mc_sigma"),
            meijer_factor=args.meijer_factor or bool(doc.get("meijer_factor", False)),
            timestamp=doc.get("timestamp"),
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    report = _dispatch(args, "/v1/compare", req)
    _emit(report, args)
    return EXIT_OK if report["verdicts"]["all_pass"] else EXIT_VERDICT_FAIL


def _run_polytope(args: argparse.Namespace) -> int:
    try:
        req = schemas.PolytopeVolumeRequest(
            u=_parse_floats(args.u),
            methods=[m.strip() for m in args.methods.split(",") if m.strip()],
            samples=args.samples,
            seed=args.seed,
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
    doc = _dispatch(args, "/v1/polytope/volume", req)
    if args.format == "csv":
        doc = {"rows": doc["records"], "schema": doc["schema"]}
    _emit(doc, args)
    return EXIT_OK


def _run_study(args: argparse.Namespace) -> int:
    try:
        req = schemas.PolytopeStudyRequest(
            n_values=[int(x) for x in args.n_values.split(",") if x.strip()]
            if args.n_values
            else [],
            u_value=args.u_value,
            marginals=[_parse_floats(block) for block in args.marginals.split(";") if block]
            if args.marginals
            else [],
            samples=args.samples,
            seed=args.seed,
        )
    except (ValidationError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    doc = _dispatch(args, "/v1/polytope/study", req)
    _emit(doc, args)
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ROUTE_COMMANDS:
            return _run_single_route(args, ROUTE_COMMANDS[args.command])
        if args.command == "weak":
            return _run_weak(args)
        if args.command == "compare":
            return _run_compare(args)
        if args.command == "polytope":
            return _run_polytope(args)
        if args.command == "study-polytope":
            return _run_study(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (OSError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
