"""
Musielak functions, modulars and Luxemburg norms.

Power-type families are evaluated in closed form (Φ_x(t) = |t|^p(x)/p(x),
conjugate t^q/q with q = p/(p-1)); custom kernels fall back to adaptive
quadrature of φ_x and bracketing root-finding for φ_x^{-1}. All integrals over
the interval are composite trapezoid sums on the grid of the GridFunction.
"""

from typing import Optional

import numpy as np
from scipy import integrate, optimize

from src.core.entities.musielak import GridFunction, MusielakFunction
from src.core.entities.report import CheckReport
from src.core.enums.anchors import CheckAnchor
from src.core.enums.families import ConvexityPolicy, MusielakFamily
from src.core.exceptions import DomainError, InvariantViolationError
from src.infrastructure.config.settings import HOLDER_FACTOR
from src.infrastructure.lib.logger import frac_logger
from src.infrastructure.lib.quadrature import (
    log_lattice,
    position_lattice,
    trapezoid_weights,
)

LUXEMBURG_RESIDUAL_TOL = 1e-10
LUXEMBURG_BRACKET_TOL = 1e-12
_MAX_BRACKET_STEPS = 2100


def _as_result(values: np.ndarray):
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


def _broadcast(x, t) -> tuple[np.ndarray, np.ndarray]:
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    return x, t


def _require_finite(t: np.ndarray, what: str = "t"):
    if not np.all(np.isfinite(t)):
        raise DomainError(f"{what} must be finite")


def _sample_pairs(x_samples, t_samples) -> tuple[np.ndarray, np.ndarray]:
    """Pair samples elementwise when shapes agree, otherwise take the full lattice."""
    x = np.asarray(x_samples, dtype=float).reshape(-1)
    t = np.asarray(t_samples, dtype=float).reshape(-1)
    if x.shape == t.shape:
        return x, t
    xx, tt = np.meshgrid(x, t, indexing="ij")
    return xx.reshape(-1), tt.reshape(-1)


def density_value(mf: MusielakFunction, x, t):
    """φ_x(t) = a(x, |t|) t, odd in t."""
    x, t = _broadcast(x, t)
    _require_finite(t)
    magnitude = np.abs(t)
    if mf.has_closed_form:
        p = mf.exponent_at(x)
        return _as_result(np.sign(t) * np.power(magnitude, p - 1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.asarray(mf.kernel_a(x, magnitude), dtype=float) * t
    return _as_result(np.where(magnitude == 0.0, 0.0, values))


def density_slope(mf: MusielakFunction, x, t):
    """d/dt φ_x(t); used by the Newton polishing of the solver."""
    x, t = _broadcast(x, t)
    magnitude = np.abs(t)
    if mf.has_closed_form:
        p = mf.exponent_at(x)
        with np.errstate(divide="ignore"):
            slope = (p - 1.0) * np.power(magnitude, p - 2.0)
        at_zero = np.select([p == 2.0, p > 2.0], [1.0, 0.0], default=np.inf)
        return _as_result(np.where(magnitude == 0.0, at_zero, slope))
    delta = 1e-6 * np.maximum(magnitude, 1e-3)
    upper = np.asarray(density_value(mf, x, magnitude + delta))
    lower = np.asarray(density_value(mf, x, np.maximum(magnitude - delta, 0.0)))
    return _as_result((upper - lower) / (magnitude + delta - np.maximum(magnitude - delta, 0.0)))


def _quadrature_primitive(mf: MusielakFunction, x: np.ndarray, magnitude: np.ndarray):
    def single(xi: float, ti: float) -> float:
        if ti == 0.0:
            return 0.0
        value, _ = integrate.quad(
            lambda s: float(density_value(mf, xi, s)),
            0.0,
            ti,
            limit=200,
            epsabs=1e-14,
            epsrel=1e-11,
        )
        return value

    return np.vectorize(single, otypes=[float])(x, magnitude)


def phi_value(mf: MusielakFunction, x, t):
    """Φ_x(|t|): closed form for power families, a supplied primitive, or adaptive quadrature of φ_x."""
    x, t = _broadcast(x, t)
    _require_finite(t)
    magnitude = np.abs(t)
    if mf.has_closed_form:
        p = mf.exponent_at(x)
        return _as_result(np.power(magnitude, p) / p)
    if mf.primitive is not None:
        return _as_result(np.asarray(mf.primitive(x, magnitude), dtype=float))
    return _as_result(_quadrature_primitive(mf, x, magnitude))


def inverse_density(mf: MusielakFunction, x, y):
    """φ_x^{-1}(y) for y ≥ 0 by bisection on [0, B], B grown geometrically."""
    x, y = _broadcast(x, y)
    _require_finite(y, "y")
    if np.any(y < 0.0):
        raise DomainError("inverse_density is defined for y >= 0")
    if mf.has_closed_form:
        p = mf.exponent_at(x)
        return _as_result(np.power(y, 1.0 / (p - 1.0)))

    def single(xi: float, yi: float) -> float:
        if yi == 0.0:
            return 0.0
        upper = 1.0
        for _ in range(_MAX_BRACKET_STEPS):
            if float(density_value(mf, xi, upper)) >= yi:
                break
            upper *= 2.0
        else:
            raise DomainError(f"Could not bracket phi^-1({yi}) at x={xi}")
        return optimize.brentq(
            lambda s: float(density_value(mf, xi, s)) - yi,
            0.0,
            upper,
            xtol=1e-14,
            rtol=4 * np.finfo(float).eps,
        )

    return _as_result(np.vectorize(single, otypes=[float])(x, y))


def conjugate_value(mf: MusielakFunction, x, t):
    """Φ̄_x(t) = ∫_0^t φ_x^{-1}(s) ds for t ≥ 0."""
    x, t = _broadcast(x, t)
    _require_finite(t)
    if np.any(t < 0.0):
        raise DomainError("conjugate_value is defined for t >= 0")
    if mf.has_closed_form:
        p = mf.exponent_at(x)
        q = p / (p - 1.0)
        return _as_result(np.power(t, q) / q)

    def single(xi: float, ti: float) -> float:
        if ti == 0.0:
            return 0.0
        value, _ = integrate.quad(
            lambda s: float(inverse_density(mf, xi, s)), 0.0, ti, limit=200, epsrel=1e-10
        )
        return value

    return _as_result(np.vectorize(single, otypes=[float])(x, t))


def conjugate_function(mf: MusielakFunction) -> MusielakFunction:
    """The conjugate pair (φ̄_x, Φ̄_x) as a MusielakFunction."""
    lower = mf.phi_upper / (mf.phi_upper - 1.0)
    upper = mf.phi_lower / (mf.phi_lower - 1.0)
    if mf.family_tag == MusielakFamily.CONSTANT_POWER:
        p = float(mf.exponent_at(0.0))
        return MusielakFunction.constant_power(p / (p - 1.0), T=mf.T)
    if mf.has_closed_form:
        return MusielakFunction.custom(
            kernel_a=lambda x, t: np.power(
                t, mf.exponent_at(x) / (mf.exponent_at(x) - 1.0) - 2.0
            ),
            phi_lower=lower,
            phi_upper=upper,
            T=mf.T,
            exponent=lambda x: mf.exponent_at(x) / (mf.exponent_at(x) - 1.0),
            label=f"conjugate({mf.label})",
        )
    return MusielakFunction.custom(
        kernel_a=lambda x, t: np.asarray(inverse_density(mf, x, t)) / t,
        phi_lower=lower,
        phi_upper=upper,
        T=mf.T,
        primitive=lambda x, t: conjugate_value(mf, x, t),
        label=f"conjugate({mf.label})",
    )


def exponents(
    mf: MusielakFunction,
    x_samples: Optional[np.ndarray] = None,
    t_samples: Optional[np.ndarray] = None,
) -> tuple[float, float]:
    """
    Estimate (φ⁻, φ⁺) as the inf and sup of t φ_x(t) / Φ_x(t) over the sample lattice.

    Raises InvariantViolationError when Φ_x vanishes at some t > 0 or the
    estimates contradict the declared exponents of ``mf``.
    """
    x_samples = position_lattice(mf.T) if x_samples is None else np.asarray(x_samples, dtype=float)
    t_samples = log_lattice() if t_samples is None else np.asarray(t_samples, dtype=float)
    if x_samples.size == 0 or t_samples.size == 0:
        raise DomainError("exponents needs nonempty sample sets")
    if np.any(t_samples <= 0.0):
        raise DomainError("exponents is estimated on t > 0 only")

    if mf.has_closed_form:
        p = mf.exponent_at(x_samples)
        lower, upper = float(np.min(p)), float(np.max(p))
        tolerance = 0.0
    else:
        x, t = _sample_pairs(x_samples, t_samples)
        primitive = np.asarray(phi_value(mf, x, t))
        if np.any(primitive <= 0.0):
            worst = int(np.argmin(primitive))
            raise InvariantViolationError(
                f"Phi_x(t) = {primitive[worst]:.3e} at x={x[worst]:.6g}, t={t[worst]:.6g} > 0"
            )
        ratio = t * np.asarray(density_value(mf, x, t)) / primitive
        lower, upper = float(np.min(ratio)), float(np.max(ratio))
        tolerance = 1e-6

    if lower < mf.phi_lower * (1.0 - tolerance) or upper > mf.phi_upper * (1.0 + tolerance):
        raise InvariantViolationError(
            f"Sampled exponents ({lower:.6g}, {upper:.6g}) contradict the declared "
            f"bounds ({mf.phi_lower:.6g}, {mf.phi_upper:.6g}) of '{mf.label}'"
        )
    return lower, upper


def modular(mf: MusielakFunction, u: GridFunction) -> float:
    """ρ(u) = ∫ Φ_x(|u(x)|) dx by the composite trapezoid rule."""
    weights = trapezoid_weights(u.n, u.step)
    return float(weights @ np.asarray(phi_value(mf, u.nodes, u.samples)))


def _luxemburg_from_samples(
    mf: MusielakFunction, nodes: np.ndarray, weights: np.ndarray, magnitude: np.ndarray
) -> float:
    if not np.any(magnitude):
        return 0.0

    def rho(scale: float) -> float:
        return float(weights @ np.asarray(phi_value(mf, nodes, magnitude / scale)))

    lower = upper = 1.0
    value = rho(1.0)
    if value == 1.0:
        return 1.0
    if value > 1.0:
        for _ in range(_MAX_BRACKET_STEPS):
            upper *= 2.0
            if rho(upper) <= 1.0:
                break
            lower = upper
    else:
        for _ in range(_MAX_BRACKET_STEPS):
            lower *= 0.5
            if rho(lower) > 1.0:
                break
            upper = lower
    frac_logger.debug(f"Luxemburg bracket [{lower:.6e}, {upper:.6e}]")

    for _ in range(400):
        middle = 0.5 * (lower + upper)
        value = rho(middle)
        if abs(value - 1.0) <= LUXEMBURG_RESIDUAL_TOL:
            return middle
        if value > 1.0:
            lower = middle
        else:
            upper = middle
        if upper - lower <= LUXEMBURG_BRACKET_TOL * upper:
            break
    return 0.5 * (lower + upper)


def luxemburg_norm(mf: MusielakFunction, u: GridFunction) -> float:
    """inf{λ > 0 : ρ(u/λ) ≤ 1} by bisection on the strictly decreasing map λ ↦ ρ(u/λ)."""
    return _luxemburg_from_samples(
        mf, u.nodes, trapezoid_weights(u.n, u.step), np.abs(u.samples)
    )


def delta2_constant(
    mf: MusielakFunction,
    t_samples: Optional[np.ndarray] = None,
    x_samples: Optional[np.ndarray] = None,
) -> float:
    """Least K with Φ_x(2t) ≤ K Φ_x(t) on the sample lattice; 2^max p(x) for power families."""
    x_samples = position_lattice(mf.T) if x_samples is None else np.asarray(x_samples, dtype=float)
    if mf.has_closed_form:
        return float(np.max(np.power(2.0, mf.exponent_at(x_samples))))
    t_samples = log_lattice(1e-3, 1e3, 61) if t_samples is None else np.asarray(t_samples, dtype=float)
    if np.any(t_samples <= 0.0):
        raise DomainError("delta2_constant is estimated on t > 0 only")
    x, t = _sample_pairs(x_samples, t_samples)
    return float(np.max(np.asarray(phi_value(mf, x, 2.0 * t)) / np.asarray(phi_value(mf, x, t))))


def holder_check(
    mf: MusielakFunction,
    u: GridFunction,
    v: GridFunction,
    holder_factor: float = HOLDER_FACTOR,
) -> CheckReport:
    """|∫ u v| ≤ M ‖u‖_Φ ‖v‖_Φ̄ with M = ``holder_factor``."""
    if not u.same_grid(v):
        raise DomainError("holder_check needs u and v on the same grid")
    weights = trapezoid_weights(u.n, u.step)
    lhs = abs(float(weights @ (u.samples * v.samples)))
    norm_u = luxemburg_norm(mf, u)
    norm_v = luxemburg_norm(conjugate_function(mf), v)
    rhs = holder_factor * norm_u * norm_v
    return CheckReport.inequality(
        "holder",
        CheckAnchor.HOLDER_INEQUALITY,
        lhs,
        rhs,
        tolerance=1e-8 * (1.0 + rhs),
        details={"norm_u": norm_u, "conjugate_norm_v": norm_v},
    )


def young_type_check(
    mf: MusielakFunction,
    x_samples: Optional[np.ndarray] = None,
    t_samples: Optional[np.ndarray] = None,
) -> CheckReport:
    """Φ̄_x(φ_x(t)) ≤ φ⁺ Φ_x(t) per sample, 1e-8 relative tolerance; reports the worst sample."""
    x_samples = position_lattice(mf.T) if x_samples is None else x_samples
    t_samples = log_lattice(1e-3, 1e3, 61) if t_samples is None else t_samples
    x, t = _sample_pairs(x_samples, t_samples)
    if np.any(t < 0.0):
        raise DomainError("young_type_check needs t >= 0")

    lhs = np.asarray(conjugate_value(mf, x, np.asarray(density_value(mf, x, t))))
    rhs = mf.phi_upper * np.asarray(phi_value(mf, x, t))
    slack = rhs + 1e-8 * np.abs(rhs) - lhs
    worst = int(np.argmin(slack))
    return CheckReport(
        name="young_type",
        anchor=CheckAnchor.YOUNG_TYPE_INEQUALITY,
        lhs=float(lhs[worst]),
        rhs=float(rhs[worst]),
        margin=float(rhs[worst] - lhs[worst]),
        passed=bool(np.all(slack >= 0.0)),
        details={"samples": int(t.size), "worst_x": float(x[worst]), "worst_t": float(t[worst])},
    )


def sandwich_check(
    mf: MusielakFunction,
    t_samples: Optional[np.ndarray] = None,
    x_samples: Optional[np.ndarray] = None,
) -> CheckReport:
    """Φ_x(s) ≤ s φ_x(s) ≤ Φ_x(2s) per sample."""
    x_samples = position_lattice(mf.T) if x_samples is None else x_samples
    t_samples = log_lattice(1e-3, 1e3, 61) if t_samples is None else t_samples
    x, s = _sample_pairs(x_samples, t_samples)
    if np.any(s < 0.0):
        raise DomainError("sandwich_check needs s >= 0")

    lower = np.asarray(phi_value(mf, x, s))
    middle = s * np.asarray(density_value(mf, x, s))
    upper = np.asarray(phi_value(mf, x, 2.0 * s))
    tolerance = 1e-10 * np.maximum(1.0, np.abs(upper))
    slack = np.minimum(middle - lower, upper - middle) + tolerance
    worst = int(np.argmin(slack))
    return CheckReport(
        name="sandwich",
        anchor=CheckAnchor.SANDWICH_INEQUALITY,
        lhs=float(middle[worst]),
        rhs=float(upper[worst]),
        margin=float(np.min(np.minimum(middle - lower, upper - middle))),
        passed=bool(np.all(slack >= 0.0)),
        details={
            "samples": int(s.size),
            "worst_lower": float(lower[worst]),
            "worst_x": float(x[worst]),
            "worst_s": float(s[worst]),
        },
    )


def chain_report(
    name: str,
    anchor: CheckAnchor,
    lower: float,
    middle: float,
    upper: float,
    relative_tolerance: float,
    note: str = "",
    **details,
) -> CheckReport:
    tolerance = relative_tolerance * max(1.0, abs(middle))
    return CheckReport(
        name=name,
        anchor=anchor,
        lhs=float(middle),
        rhs=float(upper),
        margin=float(min(middle - lower, upper - middle)),
        passed=bool(lower <= middle + tolerance and middle <= upper + tolerance),
        note=note,
        details={"lower": float(lower), **details},
    )


def norm_power_chain(norm: float, phi_lower: float, phi_upper: float):
    """
    Lower and upper powers of ``norm`` bracketing a modular value.

    Norm above 1: (‖·‖^φ⁻, ‖·‖^φ⁺); below 1: (‖·‖^φ⁺, ‖·‖^φ⁻).
    """
    if norm > 1.0:
        return norm**phi_lower, norm**phi_upper
    return norm**phi_upper, norm**phi_lower


def modular_norm_relations_check(mf: MusielakFunction, u: GridFunction) -> CheckReport:
    """‖u‖^φ⁻ ≤ ρ(u) ≤ ‖u‖^φ⁺ when ‖u‖ > 1, reversed exponents when ‖u‖ < 1."""
    name, anchor = "modular_norm_relations", CheckAnchor.MODULAR_NORM_RELATIONS
    if u.is_zero:
        return CheckReport.skip(name, anchor, "zero function")
    norm = luxemburg_norm(mf, u)
    value = modular(mf, u)
    if abs(norm - 1.0) <= 1e-9:
        frac_logger.warning(f"Skipping modular/norm relation at unit norm ({norm:.12f})")
        return CheckReport.skip(name, anchor, "norm equals 1", norm=norm, modular=value)
    lower, upper = norm_power_chain(norm, mf.phi_lower, mf.phi_upper)
    return chain_report(
        name,
        anchor,
        lower,
        value,
        upper,
        relative_tolerance=1e-8,
        note="norm > 1" if norm > 1.0 else "norm < 1",
        norm=norm,
    )


def modular_convergence_check(
    mf: MusielakFunction,
    w: GridFunction,
    scales: Optional[np.ndarray] = None,
) -> CheckReport:
    """
    ρ(u_n − u) → 0 exactly when ‖u_n − u‖ → 0 along u_n = u + ε_n w.

    Along the vanishing family the modular and the norm must both decrease,
    end below 1e-6 and 1e-4 respectively, and a norm at most 1e-4 must
    always come with a modular at most 1e-6.
    """
    name, anchor = "modular_norm_convergence", CheckAnchor.MODULAR_NORM_CONVERGENCE
    if w.is_zero:
        return CheckReport.skip(name, anchor, "zero perturbation")
    scales = np.logspace(0, -10, 21) / max(w.max_abs, 1e-300) if scales is None else scales
    norms = np.array([luxemburg_norm(mf, w * eps) for eps in scales])
    modulars = np.array([modular(mf, w * eps) for eps in scales])
    monotone = bool(np.all(np.diff(norms) <= 1e-15) and np.all(np.diff(modulars) <= 1e-15))
    small_norm_small_modular = bool(np.all(modulars[norms <= 1e-4] <= 1e-6))
    tails = bool(norms[-1] <= 1e-4 and modulars[-1] <= 1e-6)
    return CheckReport(
        name=name,
        anchor=anchor,
        lhs=float(modulars[-1]),
        rhs=float(norms[-1]),
        margin=float(1e-6 - modulars[-1]),
        passed=monotone and small_norm_small_modular and tails,
        details={"steps": int(scales.size), "monotone": monotone},
    )


def structure_check(
    mf: MusielakFunction,
    x_samples: Optional[np.ndarray] = None,
    t_samples: Optional[np.ndarray] = None,
) -> CheckReport:
    """Sampled conditions: φ_x odd, strictly increasing, φ_x(0)=0; Φ_x(0)=0, Φ_x>0 and nondecreasing on t>0."""
    x_samples = position_lattice(mf.T, 17) if x_samples is None else np.asarray(x_samples, dtype=float)
    t_samples = np.sort(log_lattice(1e-3, 1e3, 61) if t_samples is None else np.asarray(t_samples, dtype=float))
    xx, tt = np.meshgrid(x_samples, t_samples, indexing="ij")

    density = np.asarray(density_value(mf, xx, tt))
    primitive = np.asarray(phi_value(mf, xx, tt))
    odd = np.allclose(np.asarray(density_value(mf, xx, -tt)), -density, rtol=1e-12, atol=0.0)
    increasing = bool(np.all(np.diff(density, axis=1) > 0.0))
    at_zero = bool(
        np.all(np.asarray(density_value(mf, x_samples, 0.0)) == 0.0)
        and np.all(np.asarray(phi_value(mf, x_samples, 0.0)) == 0.0)
    )
    positive = bool(np.all(primitive > 0.0))
    nondecreasing = bool(np.all(np.diff(primitive, axis=1) >= 0.0))
    failures = [
        label
        for label, ok in (
            ("phi odd", odd),
            ("phi strictly increasing", increasing),
            ("values at zero", at_zero),
            ("Phi positive", positive),
            ("Phi nondecreasing", nondecreasing),
        )
        if not ok
    ]
    return CheckReport(
        name="structure",
        anchor=CheckAnchor.STRUCTURE_CONDITIONS,
        passed=not failures,
        note="; ".join(failures),
        details={"samples": int(xx.size)},
    )


def convexity_check(
    mf: MusielakFunction,
    x_samples: Optional[np.ndarray] = None,
    t_samples: Optional[np.ndarray] = None,
) -> CheckReport:
    """Midpoint convexity of t ↦ Φ_x(√t) on sampled triples (a, (a+b)/2, b)."""
    x_samples = position_lattice(mf.T, 17) if x_samples is None else np.asarray(x_samples, dtype=float)
    t_samples = np.sort(log_lattice(1e-3, 1e3, 61) if t_samples is None else np.asarray(t_samples, dtype=float))
    a, b = t_samples[:-2], t_samples[2:]
    xx, aa = np.meshgrid(x_samples, a, indexing="ij")
    _, bb = np.meshgrid(x_samples, b, indexing="ij")

    def g(s):
        return np.asarray(phi_value(mf, xx, np.sqrt(s)))

    lhs = g(0.5 * (aa + bb))
    rhs = 0.5 * (g(aa) + g(bb))
    slack = rhs + 1e-10 * np.maximum(1.0, np.abs(rhs)) - lhs
    worst = np.unravel_index(int(np.argmin(slack)), slack.shape)
    return CheckReport(
        name="convexity",
        anchor=CheckAnchor.CONVEXITY_CONDITION,
        lhs=float(lhs[worst]),
        rhs=float(rhs[worst]),
        margin=float(rhs[worst] - lhs[worst]),
        passed=bool(np.all(slack >= 0.0)),
        details={"triples": int(slack.size)},
    )


def enforce_convexity(mf: MusielakFunction, policy: ConvexityPolicy) -> CheckReport:
    """Apply the convexity policy: ``warn`` logs violations, ``fail`` raises InvariantViolationError."""
    report = convexity_check(mf)
    if not report.passed:
        message = (
            f"Phi_x(sqrt(t)) of '{mf.label}' is not midpoint convex "
            f"(worst gap {report.margin:.3e})"
        )
        if policy == ConvexityPolicy.FAIL:
            raise InvariantViolationError(message)
        frac_logger.warning(message)
        report = report.model_copy(update={"informational": True, "note": message})
    return report
