"""
Norms, modulars and embedding inequalities of the fractional Musielak space.

Every quantity goes through the left ψ-Hilfer derivative of the context: the
seminorm [u] is the Luxemburg norm of that derivative, and the zero-trace
modular is its modular.
"""

from typing import Iterable

import numpy as np
from scipy.special import gamma

from src.application.frac_calculus import frac_integral_left, hilfer_left
from src.application.musielak_core import (
    chain_report,
    conjugate_value,
    luxemburg_norm,
    modular,
    norm_power_chain,
)
from src.core.entities.fractional import PsiWeight
from src.core.entities.kspace import EmbeddingConstants, KSpaceContext
from src.core.entities.musielak import GridFunction
from src.core.entities.report import CheckReport
from src.core.enums.anchors import CheckAnchor
from src.core.exceptions import DomainError, PreconditionError
from src.infrastructure.lib.logger import frac_logger
from src.infrastructure.lib.quadrature import position_lattice

BOUND_SLACK = 1e-6
UNIT_BAND = 1e-9


def _require_context_grid(ctx: KSpaceContext, u: GridFunction):
    if u.n != ctx.grid_size or u.T != ctx.T:
        raise DomainError(
            f"u lives on (N={u.n}, T={u.T}) but the context grid is (N={ctx.grid_size}, T={ctx.T})"
        )


def has_zero_trace(u: GridFunction) -> bool:
    scale = 1e-12 * max(1.0, u.max_abs)
    return abs(u.samples[0]) <= scale and abs(u.samples[-1]) <= scale


def _require_zero_trace(u: GridFunction, what: str):
    if not has_zero_trace(u):
        raise PreconditionError(
            f"{what} needs u(0)=u(T)=0, got u(0)={u.samples[0]:.3e}, u(T)={u.samples[-1]:.3e}"
        )


def embedding_constants(ctx: KSpaceContext) -> EmbeddingConstants:
    """
    c∓ = [(ψ(T)−ψ(0))^α / Γ(α+1)]^(1/φ∓) and
    r_sup = M (sup_x Φ̄_x(1))^(1/φ⁺) (ψ(T)−ψ(0))^(α/φ⁺) / Γ(α+1).
    """
    alpha = ctx.params.alpha
    span = ctx.psi.span
    base = span**alpha / gamma(alpha + 1.0)
    conjugate_at_one = float(
        np.max(conjugate_value(ctx.mf, position_lattice(ctx.T, 33), 1.0))
    )
    r_sup = (
        ctx.holder_factor
        * conjugate_at_one ** (1.0 / ctx.mf.phi_upper)
        * span ** (alpha / ctx.mf.phi_upper)
        / gamma(alpha + 1.0)
    )
    return EmbeddingConstants(
        c_minus=float(base ** (1.0 / ctx.mf.phi_lower)),
        c_plus=float(base ** (1.0 / ctx.mf.phi_upper)),
        r_sup=float(r_sup),
    )


def hilfer_derivative(ctx: KSpaceContext, u: GridFunction) -> GridFunction:
    _require_context_grid(ctx, u)
    return hilfer_left(ctx.psi, ctx.params, u)


def seminorm(ctx: KSpaceContext, u: GridFunction) -> float:
    """[u] = ‖ᴴD^(α,β;ψ)_{0+} u‖_Φ."""
    return luxemburg_norm(ctx.mf, hilfer_derivative(ctx, u))


def k_norm(ctx: KSpaceContext, u: GridFunction) -> float:
    """‖u‖_K = ‖u‖_Φ + [u]."""
    _require_context_grid(ctx, u)
    return luxemburg_norm(ctx.mf, u) + seminorm(ctx, u)


def k_modular(ctx: KSpaceContext, u: GridFunction) -> tuple[float, float]:
    """(ρ(u) + ρ(Du), ρ(Du)): the full modular and the zero-trace modular."""
    _require_context_grid(ctx, u)
    zero_trace = modular(ctx.mf, hilfer_derivative(ctx, u))
    return modular(ctx.mf, u) + zero_trace, zero_trace


def seminorm_modular_sandwich_check(ctx: KSpaceContext, u: GridFunction) -> CheckReport:
    """[u]^φ⁻ ≤ ⁰ρ(u) ≤ [u]^φ⁺ when [u] > 1; exponents swap when [u] < 1."""
    name, anchor = "seminorm_modular_relations", CheckAnchor.SEMINORM_MODULAR_RELATIONS
    if u.is_zero:
        return CheckReport.skip(name, anchor, "zero function")
    derivative = hilfer_derivative(ctx, u)
    semi = luxemburg_norm(ctx.mf, derivative)
    value = modular(ctx.mf, derivative)
    if abs(semi - 1.0) <= UNIT_BAND:
        frac_logger.warning(f"Skipping seminorm/modular relation at [u]={semi:.12f}")
        return CheckReport.skip(name, anchor, "seminorm equals 1", seminorm=semi, modular=value)
    lower, upper = norm_power_chain(semi, ctx.mf.phi_lower, ctx.mf.phi_upper)
    return chain_report(
        name,
        anchor,
        lower,
        value,
        upper,
        relative_tolerance=BOUND_SLACK,
        note="[u] > 1" if semi > 1.0 else "[u] < 1",
        seminorm=semi,
    )


def _case_bound(
    ctx: KSpaceContext, constants: EmbeddingConstants, source: float, image: float
):
    """Right-hand side c∓ · source^(φ±/φ∓) for the case both norms agree on, else None."""
    lower, upper = ctx.mf.phi_lower, ctx.mf.phi_upper
    if source > 1.0 and image > 1.0:
        return constants.c_minus * source ** (upper / lower), "norms > 1"
    if source < 1.0 and image < 1.0:
        return constants.c_plus * source ** (lower / upper), "norms < 1"
    return None, "mixed case"


def integral_bound_check(ctx: KSpaceContext, v: GridFunction) -> CheckReport:
    """‖I^(α;ψ)_{0+} v‖_Φ against c∓ ‖v‖_Φ^(φ±/φ∓); mixed cases are skipped."""
    name, anchor = "integral_operator_bound", CheckAnchor.INTEGRAL_OPERATOR_BOUND
    _require_context_grid(ctx, v)
    if v.is_zero:
        return CheckReport.inequality(name, anchor, 0.0, 0.0, tolerance=0.0, note="zero function")
    source = luxemburg_norm(ctx.mf, v)
    image = luxemburg_norm(ctx.mf, frac_integral_left(ctx.psi, ctx.params.alpha, v))
    rhs, note = _case_bound(ctx, embedding_constants(ctx), source, image)
    if rhs is None:
        return CheckReport.skip(name, anchor, note, norm=source, image_norm=image)
    return CheckReport.inequality(
        name,
        anchor,
        image,
        rhs,
        tolerance=BOUND_SLACK * max(1.0, rhs),
        note=note,
        details={"norm": source},
    )


def poincare_check(ctx: KSpaceContext, u: GridFunction) -> CheckReport:
    """
    ‖u‖_Φ ≤ c∓ [u]^(φ±/φ∓) for zero-trace u, mixed cases skipped.

    The details carry ‖I^α(Du)‖_Φ, the left side obtained through the
    reconstruction u = I^α(Du).
    """
    name, anchor = "poincare", CheckAnchor.POINCARE_INEQUALITY
    _require_context_grid(ctx, u)
    _require_zero_trace(u, "poincare_check")
    if u.is_zero:
        return CheckReport.inequality(name, anchor, 0.0, 0.0, tolerance=0.0, note="zero function")
    derivative = hilfer_derivative(ctx, u)
    semi = luxemburg_norm(ctx.mf, derivative)
    norm = luxemburg_norm(ctx.mf, u)
    reconstructed = luxemburg_norm(
        ctx.mf, frac_integral_left(ctx.psi, ctx.params.alpha, derivative)
    )
    rhs, note = _case_bound(ctx, embedding_constants(ctx), semi, norm)
    if rhs is None:
        return CheckReport.skip(name, anchor, note, norm=norm, seminorm=semi)
    return CheckReport.inequality(
        name,
        anchor,
        norm,
        rhs,
        tolerance=BOUND_SLACK * max(1.0, rhs),
        note=note,
        details={"seminorm": semi, "reconstructed_norm": reconstructed},
    )


def sup_bound_check(ctx: KSpaceContext, u: GridFunction) -> CheckReport:
    """max |u| ≤ r_sup [u] for zero-trace u, with the weight span taken over the whole interval."""
    name, anchor = "sup_norm_bound", CheckAnchor.SUP_NORM_BOUND
    _require_context_grid(ctx, u)
    if not has_zero_trace(u):
        return CheckReport.skip(name, anchor, "nonzero boundary values")
    r_sup = embedding_constants(ctx).r_sup
    semi = seminorm(ctx, u)
    return CheckReport.inequality(
        name,
        anchor,
        u.max_abs,
        r_sup * semi,
        tolerance=BOUND_SLACK,
        details={"r_sup": r_sup, "seminorm": semi},
    )


def psi_condition_pairs(
    psi: PsiWeight, alpha: float, nodes: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Node pairs t < s at least one grid step apart, with ψ′(t)(ψ(s)−ψ(t))^(α−1).

    The kernel condition asks this value to stay below 1.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    nodes = np.asarray(nodes, dtype=float)
    first, second = np.triu_indices(nodes.size, k=1)
    t, s = nodes[first], nodes[second]
    values = psi.derivative(t) * (psi.values(s) - psi.values(t)) ** (alpha - 1.0)
    return t, s, values


def psi_condition_check(psi: PsiWeight, alpha: float, nodes: np.ndarray) -> CheckReport:
    """Informational report of the pairs violating ψ′(t)(ψ(s)−ψ(t))^(α−1) < 1."""
    name, anchor = "psi_condition", CheckAnchor.PSI_KERNEL_CONDITION
    t, s, values = psi_condition_pairs(psi, alpha, nodes)
    if t.size == 0:
        return CheckReport(name=name, anchor=anchor, informational=True, note="no node pairs")
    violated = values >= 1.0
    worst = int(np.argmax(values))
    separation = float(np.max((s - t)[violated])) if np.any(violated) else 0.0
    return CheckReport(
        name=name,
        anchor=anchor,
        lhs=float(values[worst]),
        rhs=1.0,
        margin=float(1.0 - values[worst]),
        passed=not bool(np.any(violated)),
        informational=True,
        note=f"{int(violated.sum())} of {t.size} pairs violate the kernel condition",
        details={
            "pairs": int(t.size),
            "violations": int(violated.sum()),
            "max_violation_separation": separation,
            "worst_t": float(t[worst]),
            "worst_s": float(s[worst]),
        },
    )


def norm_equivalence_probe(ctx: KSpaceContext, samples: Iterable[GridFunction]) -> CheckReport:
    """
    Empirical range of ‖u‖_K / [u] over zero-trace samples.

    Each ratio must lie in [1, 1 + max(c⁻, c⁺) · max(1, [u]^(φ⁺/φ⁻−1), [u]^(φ⁻/φ⁺−1))].
    """
    name, anchor = "norm_equivalence", CheckAnchor.NORM_EQUIVALENCE
    constants = embedding_constants(ctx)
    factor = max(constants.c_minus, constants.c_plus)
    lower, upper = ctx.mf.phi_lower, ctx.mf.phi_upper
    ratios, bounds = [], []
    for u in samples:
        _require_context_grid(ctx, u)
        _require_zero_trace(u, "norm_equivalence_probe")
        if u.is_zero:
            continue
        semi = seminorm(ctx, u)
        ratios.append((luxemburg_norm(ctx.mf, u) + semi) / semi)
        bounds.append(
            1.0 + factor * max(1.0, semi ** (upper / lower - 1.0), semi ** (lower / upper - 1.0))
        )
    if not ratios:
        return CheckReport.skip(name, anchor, "no nonzero samples")
    ratios, bounds = np.array(ratios), np.array(bounds)
    slack = bounds - ratios
    worst = int(np.argmin(slack))
    return CheckReport(
        name=name,
        anchor=anchor,
        lhs=float(ratios[worst]),
        rhs=float(bounds[worst]),
        margin=float(slack[worst]),
        passed=bool(np.all(ratios >= 1.0) and np.all(slack >= -BOUND_SLACK)),
        details={
            "samples": int(ratios.size),
            "min_ratio": float(ratios.min()),
            "max_ratio": float(ratios.max()),
        },
    )
