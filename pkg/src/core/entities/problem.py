from dataclasses import dataclass, field
from typing import Callable, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.core.entities.kspace import KSpaceContext
from src.core.entities.musielak import GridFunction
from src.core.enums.families import NonlinearityFamily
from src.core.exceptions import DomainError, PreconditionError

PointMap = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, kw_only=True)
class Nonlinearity:
    """
    Right-hand side h(t, u) of the boundary value problem.

    ``primitive`` is H(t, u) = ∫_0^u h(t, s) ds and ``slope`` is ∂h/∂u; when
    either is missing the solver falls back to quadrature or differences.
    """

    h: PointMap
    primitive: Optional[PointMap] = field(default=None, compare=False)
    slope: Optional[PointMap] = field(default=None, compare=False)
    family_tag: NonlinearityFamily = NonlinearityFamily.CUSTOM
    exponent: Optional[float] = None
    label: str = ""

    @classmethod
    def power(cls, mu: float) -> "Nonlinearity":
        """h(t, u) = |u|^(μ−2) u with H(t, u) = |u|^μ / μ."""
        if not mu > 1.0:
            raise DomainError(f"Power nonlinearity needs mu > 1, got {mu}")
        return cls(
            h=lambda t, u: np.sign(u) * np.power(np.abs(u), mu - 1.0),
            primitive=lambda t, u: np.power(np.abs(u), mu) / mu,
            slope=lambda t, u: (mu - 1.0) * np.power(np.abs(u), mu - 2.0),
            family_tag=NonlinearityFamily.POWER,
            exponent=mu,
            label=f"|u|^{mu - 2.0:g}u",
        )

    @classmethod
    def zero(cls) -> "Nonlinearity":
        return cls(
            h=lambda t, u: np.zeros(np.broadcast(t, u).shape),
            primitive=lambda t, u: np.zeros(np.broadcast(t, u).shape),
            slope=lambda t, u: np.zeros(np.broadcast(t, u).shape),
            family_tag=NonlinearityFamily.ZERO,
            label="0",
        )


@dataclass(frozen=True, kw_only=True)
class BVProblem:
    """The Dirichlet problem on the space of ``ctx`` with right-hand side ``nonlinearity``."""

    ctx: KSpaceContext
    nonlinearity: Nonlinearity
    mu: float
    k_delta2: float
    ell: float
    """inf{H(t, u) : |u| = 1}."""

    def __post_init__(self):
        if not self.mu > self.k_delta2:
            raise PreconditionError(
                f"mu={self.mu} must exceed the Delta_2 constant k={self.k_delta2}"
            )


class SolverParams(BaseModel):
    path_points: int = Field(21, ge=3, description="Points on the discrete path from 0 to e.")
    budget: int = Field(10_000, ge=1, description="Descent plus Newton iterations allowed.")
    tolerance: float = Field(1e-6, gt=0.0, description="Residual norm accepted as critical.")
    newton_switch: float = Field(1e-3, gt=0.0, description="Residual norm that starts Newton polishing.")
    armijo_factor: float = Field(0.5, gt=0.0, lt=1.0)
    armijo_c: float = Field(1e-4, gt=0.0, lt=1.0)
    geometry_directions: int = Field(50, ge=1, description="Random directions probed on the rim.")
    seed: int = 20240601

    class Config:
        extra = "forbid"
        frozen = True


class IterateRecord(BaseModel):
    iteration: int
    phase: Literal["descent", "newton"]
    u: GridFunction
    energy: float
    residual_norm: float
    path_max_energy: float
    step: float = 0.0

    class Config:
        arbitrary_types_allowed = True
        frozen = True


class Geometry(BaseModel):
    """Rim radius L, rim level θ and the far endpoint e of the mountain-pass paths."""

    L: float
    theta: float
    e: GridFunction
    phi_exponent: float = Field(description="φ⁺ when L < 1, φ⁻ otherwise.")

    class Config:
        arbitrary_types_allowed = True
        frozen = True


class MountainPassResult(BaseModel):
    u_star: GridFunction
    energy: float
    residual_norm: float
    path_max_energy: float
    theta: float
    L: float
    e: GridFunction
    iterations: int
    converged: bool
    note: str = ""
    history: list[IterateRecord] = Field(default_factory=list)

    class Config:
        arbitrary_types_allowed = True
