"""
Quadrature and sampling helpers shared by the numerical modules.

Every integral over the interval uses the composite trapezoid rule on the
uniform grid, so weights are exposed explicitly: the modulars, the energy and
the weighted inner product of the solver all reuse the same vector.
"""

import numpy as np


def trapezoid_weights(n: int, step: float) -> np.ndarray:
    """Composite trapezoid weights for ``n`` uniformly spaced nodes."""
    if n < 2:
        raise ValueError("At least two nodes are required for the trapezoid rule")
    weights = np.full(n, step)
    weights[0] = weights[-1] = 0.5 * step
    return weights


def log_lattice(low: float = 1e-6, high: float = 1e6, size: int = 241) -> np.ndarray:
    """Log-spaced positive lattice used to estimate growth exponents."""
    return np.logspace(np.log10(low), np.log10(high), size)


def position_lattice(T: float, size: int = 64) -> np.ndarray:
    """Uniform positions in [0, T], endpoints included."""
    return np.linspace(0.0, T, size)


def fitted_order(sizes, errors) -> float:
    """
    Least-squares slope of ``-log(error)`` against ``log(N)``.

    Zero or non-finite errors are dropped; fewer than two usable points
    give ``nan``.
    """
    sizes = np.asarray(sizes, dtype=float)
    errors = np.asarray(errors, dtype=float)
    usable = np.isfinite(errors) & (errors > 0.0)
    if usable.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(sizes[usable]), np.log(errors[usable]), 1)
    return float(-slope)


def successive_orders(sizes, errors) -> list[float]:
    """Observed order between consecutive refinements; the first entry is ``nan``."""
    orders = [float("nan")]
    for i in range(1, len(errors)):
        previous, current = errors[i - 1], errors[i]
        if previous > 0.0 and current > 0.0:
            orders.append(
                float(np.log(previous / current) / np.log(sizes[i] / sizes[i - 1]))
            )
        else:
            orders.append(float("nan"))
    return orders


def fourier_sine_samples(
    rng: np.random.Generator,
    nodes: np.ndarray,
    T: float,
    count: int,
    modes: int = 6,
    log_amplitude: tuple[float, float] = (-1.5, 1.5),
) -> np.ndarray:
    """
    ``count`` random zero-trace functions Σ_k c_k sin(kπx/T) sampled at ``nodes``.

    Coefficients decay like 1/k² and every row is rescaled by 10^a with ``a``
    uniform in ``log_amplitude``, so both small and large norms occur.
    """
    k = np.arange(1, modes + 1)
    coefficients = rng.standard_normal((count, modes)) / k**2
    basis = np.sin(np.outer(k, np.asarray(nodes, dtype=float)) * np.pi / T)
    basis[:, 0] = 0.0
    basis[:, -1] = 0.0
    amplitude = 10.0 ** rng.uniform(*log_amplitude, size=(count, 1))
    return amplitude * (coefficients @ basis)
