import numpy as np
from scipy import integrate
from scipy.special import gamma

from src.application.bvp_solver import build_problem
from src.core.entities.fractional import FracParams, PsiWeight
from src.core.entities.kspace import KSpaceContext
from src.core.entities.musielak import GridFunction, MusielakFunction
from src.core.entities.problem import BVProblem, Nonlinearity


def model_context(n: int = 257, alpha: float = 0.9, beta: float = 1.0, p: float = 2.0) -> KSpaceContext:
    """p = 2, ψ(t) = t on [0, 1]; the setting of the model boundary value problem."""
    return KSpaceContext(
        mf=MusielakFunction.constant_power(p),
        psi=PsiWeight.linear(),
        params=FracParams(alpha, beta),
        grid_size=n,
    )


def affine_context(n: int = 257, alpha: float = 0.9, beta: float = 1.0) -> KSpaceContext:
    """Variable exponent p(x) = 2 + x on [0, 1] with ψ(t) = t."""
    return KSpaceContext(
        mf=MusielakFunction.affine_power(2.0, 1.0),
        psi=PsiWeight.linear(),
        params=FracParams(alpha, beta),
        grid_size=n,
    )


def model_problem(n: int = 129, alpha: float = 0.9, mu: float = 6.0) -> BVProblem:
    return build_problem(model_context(n, alpha=alpha), Nonlinearity.power(mu))


def sine(n: int, T: float = 1.0, amplitude: float = 1.0) -> GridFunction:
    return GridFunction.from_callable(lambda x: amplitude * np.sin(np.pi * x / T), T, n)


def parabola(n: int, scale: float = 1.0) -> GridFunction:
    """u(t) = t(1 − t) on [0, 1]."""
    return GridFunction.from_callable(lambda x: scale * x * (1.0 - x), 1.0, n)


def parabola_derivative(t, alpha: float = 0.9) -> np.ndarray:
    """Caputo-type derivative (β = 1, ψ(t) = t) of t(1 − t): t^(1−α)/Γ(2−α) − 2 t^(2−α)/Γ(3−α)."""
    t = np.asarray(t, dtype=float)
    return t ** (1.0 - alpha) / gamma(2.0 - alpha) - 2.0 * t ** (2.0 - alpha) / gamma(3.0 - alpha)


def parabola_derivative_square_integral(alpha: float = 0.9) -> float:
    """∫_0^1 (D[t(1 − t)])² dt by adaptive quadrature."""
    value, _ = integrate.quad(
        lambda t: float(parabola_derivative(t, alpha)) ** 2, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=200
    )
    return value
