"""Grid-refinement studies of the fractional operators against closed-form oracles."""

from typing import Sequence

import numpy as np
import pandas as pd
from scipy.special import gamma

from src.application.frac_calculus import frac_integral_left, hilfer_left
from src.core.entities.fractional import FracParams, PsiWeight
from src.core.entities.musielak import GridFunction
from src.core.enums.families import StudyCase
from src.core.exceptions import DomainError
from src.infrastructure.lib.logger import frac_logger
from src.infrastructure.lib.quadrature import fitted_order, successive_orders


def power_rule_error(psi: PsiWeight, alpha: float, power: float, n: int) -> float:
    """
    max |I^α v − v̂| for v = (ψ − ψ(0))^k with the power rule
    v̂ = Γ(k+1)/Γ(k+1+α) (ψ − ψ(0))^(k+α).
    """
    nodes = np.linspace(0.0, psi.T, n)
    shifted = psi.values(nodes) - psi.values(np.array(0.0))
    v = GridFunction(shifted**power, psi.T)
    exact = gamma(power + 1.0) / gamma(power + 1.0 + alpha) * shifted ** (power + alpha)
    return float(np.max(np.abs(frac_integral_left(psi, alpha, v).samples - exact)))


def ftc_error(psi: PsiWeight, params: FracParams, n: int) -> float:
    """max |I^α(ᴴD^(α,β) v) − v| for v(t) = sin(πt/T)."""
    v = GridFunction.from_callable(lambda x: np.sin(np.pi * x / psi.T), psi.T, n)
    recovered = frac_integral_left(psi, params.alpha, hilfer_left(psi, params, v))
    return float(np.max(np.abs(recovered.samples - v.samples)))


def convergence_study(
    case: StudyCase,
    psi: PsiWeight,
    params: FracParams,
    sizes: Sequence[int],
    power: float = 2.0,
) -> pd.DataFrame:
    """
    Errors over increasing grid sizes with successive observed orders.

    Columns ``N``, ``error``, ``order``; the least-squares order over all
    sizes is stored in ``frame.attrs["fitted_order"]``.
    """
    sizes = [int(size) for size in sizes]
    if len(sizes) < 2 or any(size < 3 for size in sizes):
        raise DomainError(f"convergence_study needs at least two sizes >= 3, got {sizes}")

    if case == StudyCase.POWER_RULE:
        errors = [power_rule_error(psi, params.alpha, power, n) for n in sizes]
    elif case == StudyCase.FTC:
        errors = [ftc_error(psi, params, n) for n in sizes]
    else:
        errors = [
            float(np.max(np.abs(frac_integral_left(psi, params.alpha, GridFunction.zeros(psi.T, n)).samples)))
            for n in sizes
        ]

    frame = pd.DataFrame({"N": sizes, "error": errors, "order": successive_orders(sizes, errors)})
    frame.attrs["fitted_order"] = fitted_order(sizes, errors)
    frac_logger.info(
        f"Convergence study '{case.value}' (psi={psi.label}, alpha={params.alpha:g}, "
        f"beta={params.beta:g}): fitted order {frame.attrs['fitted_order']:.3f}"
    )
    return frame
