import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.core.entities.fractional import FracParams, PsiWeight
from src.core.entities.kspace import KSpaceContext
from src.core.entities.musielak import MusielakFunction
from src.core.entities.problem import Nonlinearity, SolverParams
from src.core.enums.anchors import CheckAnchor
from src.core.enums.families import (
    ConvexityPolicy,
    FracOperator,
    MusielakFamily,
    NonlinearityFamily,
    PsiFamily,
    StudyCase,
)
from src.core.exceptions import ConfigError
from src.infrastructure.config.settings import DEFAULT_SEED, HOLDER_FACTOR, OUTPUT_DIR


class PhiConfig(BaseModel):
    family: MusielakFamily = MusielakFamily.CONSTANT_POWER
    p: Optional[float] = Field(2.0, gt=1.0, description="Exponent of the constant-power family.")
    p0: Optional[float] = Field(None, description="p(0) of the affine family.")
    p1: Optional[float] = Field(None, description="Slope term: p(x) = p0 + p1 x / T.")

    class Config:
        extra = "forbid"

    @field_validator("family")
    def reject_custom(cls, v):
        if v == MusielakFamily.CUSTOM:
            raise ValueError("custom Musielak functions cannot be configured from JSON")
        return v

    @model_validator(mode="after")
    def check_family_parameters(self):
        if self.family == MusielakFamily.AFFINE_POWER:
            if self.p0 is None or self.p1 is None:
                raise ValueError("affine_power needs both p0 and p1")
            if not min(self.p0, self.p0 + self.p1) > 1.0:
                raise ValueError("affine_power needs p(x) > 1 on the whole interval")
        return self


class PsiConfig(BaseModel):
    family: PsiFamily = PsiFamily.LINEAR
    c: float = Field(1.0, gt=0.0, description="Rate of the exponential weight e^(ct).")
    gamma: float = Field(2.0, ge=1.0, description="Exponent of the power weight t^gamma.")

    class Config:
        extra = "forbid"

    @field_validator("family")
    def reject_custom(cls, v):
        if v == PsiFamily.CUSTOM:
            raise ValueError("custom weights cannot be configured from JSON")
        return v


class NonlinearityConfig(BaseModel):
    family: NonlinearityFamily = NonlinearityFamily.POWER
    mu: float = Field(6.0, gt=1.0, description="Ambrosetti–Rabinowitz exponent; h = |u|^(mu-2) u.")

    class Config:
        extra = "forbid"

    @field_validator("family")
    def reject_custom(cls, v):
        if v == NonlinearityFamily.CUSTOM:
            raise ValueError("custom nonlinearities cannot be configured from JSON")
        return v


class SolverConfig(BaseModel):
    path_points: int = Field(21, ge=3)
    budget: int = Field(10_000, ge=1)
    tolerance: float = Field(1e-6, gt=0.0)
    newton_switch: float = Field(1e-3, gt=0.0)
    geometry_directions: int = Field(50, ge=1)

    class Config:
        extra = "forbid"


class StudyConfig(BaseModel):
    cases: list[StudyCase] = Field(
        default_factory=lambda: [StudyCase.POWER_RULE, StudyCase.FTC],
        description="Studies to run; their rows share one CSV with a case column.",
    )
    sizes: list[int] = Field(default_factory=lambda: [129, 257, 513, 1025, 2049, 4097])
    power: float = Field(2.0, ge=0.0, description="k in the test function (psi(t) - psi(0))^k.")

    class Config:
        extra = "forbid"

    @model_validator(mode="after")
    def check_sizes(self):
        if len(self.sizes) < 2 or any(size < 3 for size in self.sizes):
            raise ValueError("study needs at least two grid sizes, each >= 3")
        if sorted(self.sizes) != self.sizes:
            raise ValueError("study sizes must be increasing")
        if not self.cases or len(set(self.cases)) != len(self.cases):
            raise ValueError("study cases must be nonempty and distinct")
        return self


class VerifyConfig(BaseModel):
    trials: int = Field(100, ge=1)
    checks: Optional[list[CheckAnchor]] = Field(
        None, description="Anchors to run; all checks when omitted."
    )
    holder_factor: float = Field(HOLDER_FACTOR, gt=0.0)

    class Config:
        extra = "forbid"


class FracOpConfig(BaseModel):
    operator: FracOperator = FracOperator.HILFER_LEFT
    input: Optional[str] = Field(None, description="CSV with a 'u' column (and optionally 't').")

    class Config:
        extra = "forbid"


class RunConfig(BaseModel):
    schema_version: Literal[1] = 1
    phi: PhiConfig = Field(default_factory=PhiConfig)
    psi: PsiConfig = Field(default_factory=PsiConfig)
    alpha: float = Field(0.9, gt=0.0, lt=1.0)
    beta: float = Field(1.0, ge=0.0, le=1.0)
    T: float = Field(1.0, gt=0.0)
    N: int = Field(513, ge=3, description="Number of grid nodes, endpoints included.")
    nonlinearity: NonlinearityConfig = Field(default_factory=NonlinearityConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    study: StudyConfig = Field(default_factory=StudyConfig)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)
    fracop: FracOpConfig = Field(default_factory=FracOpConfig)
    output: str = OUTPUT_DIR
    seed: int = DEFAULT_SEED
    convexity: ConvexityPolicy = ConvexityPolicy.WARN

    class Config:
        extra = "forbid"

    @classmethod
    def load(cls, path: Optional[str | Path]) -> "RunConfig":
        """Parse and validate a JSON run configuration; ``None`` gives the defaults."""
        if path is None:
            return cls()
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
            return cls.model_validate(document)
        except (OSError, json.JSONDecodeError) as error:
            raise ConfigError(f"Cannot read configuration {path}: {error}") from error
        except ValidationError as error:
            raise ConfigError(f"Invalid configuration {path}:\n{error}") from error

    def musielak_function(self) -> MusielakFunction:
        if self.phi.family == MusielakFamily.AFFINE_POWER:
            return MusielakFunction.affine_power(self.phi.p0, self.phi.p1, T=self.T)
        return MusielakFunction.constant_power(self.phi.p, T=self.T)

    def psi_weight(self) -> PsiWeight:
        if self.psi.family == PsiFamily.EXPONENTIAL:
            return PsiWeight.exponential(self.psi.c, T=self.T)
        if self.psi.family == PsiFamily.POWER:
            return PsiWeight.power(self.psi.gamma, T=self.T)
        return PsiWeight.linear(T=self.T)

    def frac_params(self) -> FracParams:
        return FracParams(self.alpha, self.beta)

    def context(self, grid_size: Optional[int] = None) -> KSpaceContext:
        return KSpaceContext(
            mf=self.musielak_function(),
            psi=self.psi_weight(),
            params=self.frac_params(),
            grid_size=grid_size or self.N,
            T=self.T,
            holder_factor=self.verify.holder_factor,
        )

    def nonlinearity_entity(self) -> Nonlinearity:
        if self.nonlinearity.family == NonlinearityFamily.ZERO:
            return Nonlinearity.zero()
        return Nonlinearity.power(self.nonlinearity.mu)

    def solver_params(self) -> SolverParams:
        return SolverParams(**self.solver.model_dump(), seed=self.seed)
