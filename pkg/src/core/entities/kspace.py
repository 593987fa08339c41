from dataclasses import dataclass, field

import numpy as np

from src.core.entities.fractional import FracParams, PsiWeight
from src.core.entities.musielak import GridFunction, MusielakFunction
from src.core.exceptions import DomainError
from src.infrastructure.config.settings import HOLDER_FACTOR


@dataclass(frozen=True, kw_only=True)
class KSpaceContext:
    """Everything needed to evaluate norms and modulars of the fractional Musielak space on one grid."""

    mf: MusielakFunction
    psi: PsiWeight
    params: FracParams
    grid_size: int
    T: float = 1.0
    holder_factor: float = field(default=HOLDER_FACTOR)

    def __post_init__(self):
        if self.grid_size < 3:
            raise DomainError(f"grid_size must be at least 3, got {self.grid_size}")
        if not (self.mf.T == self.T == self.psi.T):
            raise DomainError(
                f"Inconsistent interval lengths: mf.T={self.mf.T}, psi.T={self.psi.T}, T={self.T}"
            )
        if not self.holder_factor > 0.0:
            raise DomainError(f"holder_factor must be positive, got {self.holder_factor}")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.grid_size)

    @property
    def step(self) -> float:
        return self.T / (self.grid_size - 1)

    def grid(self, samples) -> GridFunction:
        return GridFunction(samples, self.T)

    def sample(self, f) -> GridFunction:
        return GridFunction.from_callable(f, self.T, self.grid_size)


@dataclass(frozen=True)
class EmbeddingConstants:
    """Constants of the integral-operator bound, the Poincaré-type inequality and the sup-norm bound."""

    c_minus: float
    c_plus: float
    r_sup: float

    def __post_init__(self):
        for name in ("c_minus", "c_plus", "r_sup"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be positive and finite, got {value}")
