from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from src.core.enums.families import MusielakFamily
from src.core.exceptions import DomainError, InvariantViolationError

ArrayFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
ExponentFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, kw_only=True)
class MusielakFunction:
    """
    The pair (φ_x, Φ_x) with φ_x(t) = a(x, |t|) t and Φ_x(t) = ∫_0^|t| φ_x(s) ds.

    Power families carry ``exponent`` (x ↦ p(x)) and are evaluated in closed
    form; custom families may carry a closed-form ``primitive``, otherwise Φ_x
    is obtained by adaptive quadrature of φ_x.
    """

    kernel_a: ArrayFn
    """Coefficient a(x, t) for t ≥ 0, vectorized over broadcastable arrays."""
    phi_lower: float
    """Declared lower growth exponent φ⁻ (> 1)."""
    phi_upper: float
    """Declared upper growth exponent φ⁺ (≥ φ⁻)."""
    family_tag: MusielakFamily = MusielakFamily.CUSTOM
    T: float = 1.0
    exponent: Optional[ExponentFn] = field(default=None, compare=False)
    """x ↦ p(x) for power-type families; enables the closed forms |t|^p/p."""
    primitive: Optional[ArrayFn] = field(default=None, compare=False)
    """Optional closed form of Φ_x(t) for t ≥ 0."""
    label: str = ""

    def __post_init__(self):
        if not self.phi_lower > 1.0:
            raise InvariantViolationError(
                f"phi_lower must exceed 1, got {self.phi_lower}"
            )
        if self.phi_upper < self.phi_lower:
            raise InvariantViolationError(
                f"phi_upper={self.phi_upper} is below phi_lower={self.phi_lower}"
            )
        if not self.T > 0.0:
            raise DomainError(f"Interval length T must be positive, got {self.T}")

    @property
    def has_closed_form(self) -> bool:
        return self.exponent is not None

    def exponent_at(self, x) -> np.ndarray:
        if self.exponent is None:
            raise DomainError(f"Family '{self.family_tag.value}' has no exponent map")
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(self.exponent(x), dtype=float), x.shape)

    @classmethod
    def constant_power(cls, p: float, T: float = 1.0) -> "MusielakFunction":
        """Φ_x(t) = |t|^p / p for every x."""
        return cls(
            kernel_a=lambda x, t: np.power(t, p - 2.0),
            phi_lower=p,
            phi_upper=p,
            family_tag=MusielakFamily.CONSTANT_POWER,
            T=T,
            exponent=lambda x: np.full_like(np.asarray(x, dtype=float), p),
            label=f"p={p:g}",
        )

    @classmethod
    def affine_power(cls, p0: float, p1: float, T: float = 1.0) -> "MusielakFunction":
        """Variable exponent p(x) = p0 + p1 x / T."""
        return cls(
            kernel_a=lambda x, t: np.power(t, p0 + p1 * x / T - 2.0),
            phi_lower=min(p0, p0 + p1),
            phi_upper=max(p0, p0 + p1),
            family_tag=MusielakFamily.AFFINE_POWER,
            T=T,
            exponent=lambda x: p0 + p1 * np.asarray(x, dtype=float) / T,
            label=f"p(x)={p0:g}+{p1:g}x/T",
        )

    @classmethod
    def custom(
        cls,
        kernel_a: ArrayFn,
        phi_lower: float,
        phi_upper: float,
        T: float = 1.0,
        primitive: Optional[ArrayFn] = None,
        exponent: Optional[ExponentFn] = None,
        label: str = "custom",
    ) -> "MusielakFunction":
        return cls(
            kernel_a=kernel_a,
            phi_lower=phi_lower,
            phi_upper=phi_upper,
            family_tag=MusielakFamily.CUSTOM,
            T=T,
            primitive=primitive,
            exponent=exponent,
            label=label,
        )


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A real function sampled on the uniform grid of N nodes over [0, T]."""

    samples: np.ndarray
    T: float = 1.0

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float, copy=True).reshape(-1)
        if samples.size < 2:
            raise DomainError(f"A grid needs at least 2 nodes, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            raise DomainError("Grid function samples must be finite")
        if not self.T > 0.0:
            raise DomainError(f"Interval length T must be positive, got {self.T}")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_callable(cls, f: Callable[[np.ndarray], np.ndarray], T: float, n: int):
        nodes = np.linspace(0.0, T, n)
        return cls(np.broadcast_to(np.asarray(f(nodes), dtype=float), nodes.shape), T)

    @classmethod
    def zeros(cls, T: float, n: int) -> "GridFunction":
        return cls(np.zeros(n), T)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def step(self) -> float:
        return self.T / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.n)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.samples)))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.samples)

    def with_samples(self, samples) -> "GridFunction":
        return GridFunction(samples, self.T)

    def same_grid(self, other: "GridFunction") -> bool:
        return self.n == other.n and self.T == other.T

    def _check_grid(self, other: "GridFunction"):
        if not self.same_grid(other):
            raise DomainError(
                f"Grid mismatch: (N={self.n}, T={self.T}) vs (N={other.n}, T={other.T})"
            )

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_grid(other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check_grid(other)
        return self.with_samples(self.samples - other.samples)

    def __mul__(self, scalar: float) -> "GridFunction":
        return self.with_samples(self.samples * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "GridFunction":
        return self.with_samples(self.samples / float(scalar))

    def __neg__(self) -> "GridFunction":
        return self.with_samples(-self.samples)
