from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from src.core.enums.families import PsiFamily
from src.core.exceptions import DomainError, InvariantViolationError

ScalarMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, kw_only=True, eq=False)
class PsiWeight:
    """
    The increasing C¹ weight ψ on [0, T] together with its derivative.

    Construction samples the weight and rejects it unless ψ′ > 0 on the
    interior (ψ′(0) = 0 is tolerated for the power family) and ψ′ agrees with
    a central difference of ψ to 1e-6 relative.

    Built-in families compare equal by (family, parameters, T), so weights
    rebuilt from the same configuration share cached operator tables; custom
    weights compare by their callables.
    """

    psi: ScalarMap
    dpsi: ScalarMap
    family_tag: PsiFamily = PsiFamily.CUSTOM
    T: float = 1.0
    parameters: tuple[float, ...] = ()
    label: str = ""

    def __post_init__(self):
        if not self.T > 0.0:
            raise DomainError(f"Interval length T must be positive, got {self.T}")
        self._validate()

    def _validate(self, samples: int = 65):
        t = np.linspace(0.0, self.T, samples)[1:-1]
        derivative = np.asarray(self.dpsi(t), dtype=float)
        if not np.all(derivative > 0.0):
            raise InvariantViolationError(
                f"psi '{self.label}' is not strictly increasing on the sampled interior"
            )
        delta = 1e-5 * self.T
        finite_difference = (
            np.asarray(self.psi(t + delta), dtype=float)
            - np.asarray(self.psi(t - delta), dtype=float)
        ) / (2.0 * delta)
        relative = np.abs(finite_difference - derivative) / np.maximum(
            np.abs(derivative), 1e-12
        )
        if np.max(relative) > 1e-6:
            raise InvariantViolationError(
                f"dpsi of '{self.label}' disagrees with the difference quotient of psi "
                f"(worst relative gap {np.max(relative):.3e})"
            )
        if self.family_tag != PsiFamily.POWER and not float(self.dpsi(np.array(0.0))) > 0.0:
            raise InvariantViolationError(f"dpsi of '{self.label}' vanishes at t=0")

    @property
    def key(self) -> tuple:
        if self.family_tag == PsiFamily.CUSTOM:
            return (self.family_tag, self.T, self.psi, self.dpsi)
        return (self.family_tag, self.T, self.parameters)

    def __eq__(self, other) -> bool:
        return isinstance(other, PsiWeight) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def values(self, nodes: np.ndarray) -> np.ndarray:
        return np.asarray(self.psi(np.asarray(nodes, dtype=float)), dtype=float)

    def derivative(self, nodes: np.ndarray) -> np.ndarray:
        return np.asarray(self.dpsi(np.asarray(nodes, dtype=float)), dtype=float)

    @property
    def span(self) -> float:
        """ψ(T) − ψ(0)."""
        return float(self.psi(np.array(self.T)) - self.psi(np.array(0.0)))

    @classmethod
    def linear(cls, T: float = 1.0) -> "PsiWeight":
        return cls(
            psi=lambda t: np.asarray(t, dtype=float),
            dpsi=lambda t: np.ones_like(np.asarray(t, dtype=float)),
            family_tag=PsiFamily.LINEAR,
            T=T,
            label="t",
        )

    @classmethod
    def exponential(cls, c: float = 1.0, T: float = 1.0) -> "PsiWeight":
        if not c > 0.0:
            raise DomainError(f"Exponential weight needs c > 0, got {c}")
        return cls(
            psi=lambda t: np.exp(c * np.asarray(t, dtype=float)),
            dpsi=lambda t: c * np.exp(c * np.asarray(t, dtype=float)),
            family_tag=PsiFamily.EXPONENTIAL,
            T=T,
            parameters=(float(c),),
            label=f"exp({c:g}t)",
        )

    @classmethod
    def power(cls, gamma: float = 2.0, T: float = 1.0) -> "PsiWeight":
        if not gamma >= 1.0:
            raise DomainError(f"Power weight needs gamma >= 1, got {gamma}")
        return cls(
            psi=lambda t: np.power(np.asarray(t, dtype=float), gamma),
            dpsi=lambda t: gamma * np.power(np.asarray(t, dtype=float), gamma - 1.0),
            family_tag=PsiFamily.POWER,
            T=T,
            parameters=(float(gamma),),
            label=f"t^{gamma:g}",
        )


@dataclass(frozen=True)
class FracParams:
    """Order α ∈ (0, 1) and type β ∈ [0, 1] of the ψ-Hilfer derivative (n = 1)."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError(f"beta must lie in [0, 1], got {self.beta}")

    @property
    def eta(self) -> float:
        """η = α(1 − β) + β, always in [α, 1]."""
        return self.alpha * (1.0 - self.beta) + self.beta
