"""Pydantic request/response models for the HTTP service.

These mirror the harness configuration dictionaries one-to-one; the CLI
builds the same models, so both clients share a single wire contract.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

RouteName = Literal[
    "free_product",
    "free_expansion",
    "free_polytope",
    "eigen_quadrature",
    "matrix_mc",
    "weak_coupling",
    "weak_coupling_epsilon",
]

VolumeMethod = Literal["exact", "mc", "asymptotic"]


class SpectrumSpec(BaseModel):
    """Either raw eigenvalues or (xi, eps_tilde) — exactly one form."""

    model_config = ConfigDict(extra="forbid")

    e: Optional[list[float]] = None
    xi: Optional[float] = None
    eps_tilde: Optional[list[float]] = None

    @model_validator(mode="after")
    def _exactly_one_form(self) -> "SpectrumSpec":
        has_e = self.e is not None
        has_eps = self.xi is not None or self.eps_tilde is not None
        if has_e and has_eps:
            raise ValueError('give either "e" or ("xi", "eps_tilde"), not both')
        if not has_e and (self.xi is None or self.eps_tilde is None):
            raise ValueError('spectrum needs "e" or both "xi" and "eps_tilde"')
        return self

    def to_doc(self) -> dict:
        if self.e is not None:
            return {"e": self.e}
        return {"xi": self.xi, "eps_tilde": self.eps_tilde}


class CompareRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    spectrum: SpectrumSpec
    routes: list[RouteName] = Field(min_length=2)
    g: float = 0.0
    samples: int = Field(default=100_000, ge=2)
    seed: int = 20240229
    nodes_per_dim: int = Field(default=120, ge=8)
    expansion_order: int = Field(default=6, ge=2, le=6)
    tolerance_log: float = Field(default=1e-6, gt=0)
    mc_sigma: float = Field(default=3.0, gt=0)
    meijer_factor: bool = False
    timestamp: Optional[str] = None

    def to_doc(self) -> dict:
        doc = self.spectrum.to_doc()
        doc.update(
            routes=list(self.routes),
            g=self.g,
            samples=self.samples,
            seed=self.seed,
            nodes_per_dim=self.nodes_per_dim,
            expansion_order=self.expansion_order,
            tolerance_log=self.tolerance_log,
            mc_sigma=self.mc_sigma,
            meijer_factor=self.meijer_factor,
            timestamp=self.timestamp,
        )
        return doc


class RouteRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    spectrum: SpectrumSpec
    route: RouteName
    g: float = 0.0
    samples: int = Field(default=100_000, ge=2)
    seed: int = 20240229
    nodes_per_dim: int = Field(default=120, ge=8)
    expansion_order: int = Field(default=6, ge=2, le=6)
    meijer_factor: bool = False


class SignedLog(BaseModel):
    sign: int
    log_mag: float


class RouteResponse(BaseModel):
    schema_id: str = Field(alias="schema")
    route: RouteName
    log_z: SignedLog
    std_error: float
    params: dict

    model_config = ConfigDict(populate_by_name=True)


class PolytopeVolumeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u: list[float]
    methods: list[VolumeMethod] = ["asymptotic"]
    samples: int = Field(default=200_000, ge=2)
    seed: int = 20240229


class PolytopeStudyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_values: list[int] = []
    u_value: float = Field(default=0.9, gt=0)
    marginals: list[list[float]] = []
    samples: int = Field(default=200_000, ge=2)
    seed: int = 20240229
    timestamp: Optional[str] = None

    @model_validator(mode="after")
    def _something_to_do(self) -> "PolytopeStudyRequest":
        if not self.n_values and not self.marginals:
            raise ValueError("study needs n_values and/or marginals")
        return self


class HealthResponse(BaseModel):
    status: str
    version: str
    report_schema: str
