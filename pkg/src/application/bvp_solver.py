"""
Energy, weak-form residual and mountain-pass solver for the Dirichlet problem

    −(right Hilfer) a_x(|Du|) Du = h(t, u) on (0, T),  u(0) = u(T) = 0,

where D is the left ψ-Hilfer derivative of the problem's space.

The energy J(u) = ∫ Φ_x(Du) − ∫ H(t, u) is discretized with trapezoid
weights w and the Hilfer matrix D of the piecewise-linear interpolant, so
its exact discrete gradient is Dᵀ(w φ_x(Du)) − w h(t, u). Descent
directions use the metric DᵀWD of the zero-trace seminorm, and the residual
norm is the dual norm in that metric.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, linalg, optimize

from src.application.frac_calculus import hilfer_interpolant_matrix
from src.application.musielak_core import delta2_constant, density_slope, density_value, phi_value
from src.application.space_k import embedding_constants, has_zero_trace, k_norm, seminorm
from src.core.entities.kspace import KSpaceContext
from src.core.entities.musielak import GridFunction
from src.core.entities.problem import (
    BVProblem,
    Geometry,
    IterateRecord,
    MountainPassResult,
    Nonlinearity,
    SolverParams,
)
from src.core.entities.report import CheckReport
from src.core.enums.anchors import CheckAnchor
from src.core.exceptions import (
    DomainError,
    GeometryFailureError,
    NumericalFailureError,
    PreconditionError,
)
from src.infrastructure.lib.logger import frac_logger
from src.infrastructure.lib.quadrature import (
    fourier_sine_samples,
    log_lattice,
    position_lattice,
    trapezoid_weights,
)

AR_SLACK = 1e-10
GROWTH_TOLERANCE = 1e-8
PS_SLACK = 1e-6
RIM_SAFETY = 0.9
RIM_SHRINKS = 8
MAX_DOUBLINGS = 60
MIN_STEP = 1e-12
NEWTON_HALVINGS = 30
SLOPE_CAP = 1e12


def nonlinearity_value(nonlinearity: Nonlinearity, t, u) -> np.ndarray:
    t, u = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(u, dtype=float))
    return np.broadcast_to(np.asarray(nonlinearity.h(t, u), dtype=float), u.shape)


def primitive_value(nonlinearity: Nonlinearity, t, u) -> np.ndarray:
    """H(t, u): closed form when supplied, else adaptive quadrature of h in u."""
    t, u = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(u, dtype=float))
    if nonlinearity.primitive is not None:
        return np.broadcast_to(np.asarray(nonlinearity.primitive(t, u), dtype=float), u.shape)

    def single(ti: float, ui: float) -> float:
        if ui == 0.0:
            return 0.0
        value, _ = integrate.quad(
            lambda s: float(nonlinearity.h(np.array(ti), np.array(s))),
            0.0,
            ui,
            epsabs=1e-10,
            epsrel=1e-10,
            limit=200,
        )
        return value

    return np.vectorize(single, otypes=[float])(t, u)


def nonlinearity_slope(nonlinearity: Nonlinearity, t, u) -> np.ndarray:
    """∂h/∂u, by central differences when no closed form is supplied."""
    t, u = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(u, dtype=float))
    if nonlinearity.slope is not None:
        return np.broadcast_to(np.asarray(nonlinearity.slope(t, u), dtype=float), u.shape)
    delta = 1e-6 * np.maximum(1.0, np.abs(u))
    return (nonlinearity_value(nonlinearity, t, u + delta) - nonlinearity_value(nonlinearity, t, u - delta)) / (
        2.0 * delta
    )


def build_problem(
    ctx: KSpaceContext, nonlinearity: Nonlinearity, mu: Optional[float] = None
) -> BVProblem:
    """Attach the Δ₂ constant of ``ctx.mf`` and ℓ = inf{H(t, u) : |u| = 1} to a problem."""
    mu = nonlinearity.exponent if mu is None else mu
    if mu is None:
        raise PreconditionError(f"Nonlinearity '{nonlinearity.label}' needs an explicit mu")
    nodes = ctx.nodes
    ell = float(
        min(
            np.min(primitive_value(nonlinearity, nodes, 1.0)),
            np.min(primitive_value(nonlinearity, nodes, -1.0)),
        )
    )
    return BVProblem(
        ctx=ctx,
        nonlinearity=nonlinearity,
        mu=float(mu),
        k_delta2=delta2_constant(ctx.mf),
        ell=ell,
    )


@dataclass(frozen=True)
class _Discretization:
    nodes: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray
    metric: tuple


@lru_cache(maxsize=2)
def _discretization(prob: BVProblem) -> _Discretization:
    ctx = prob.ctx
    matrix = hilfer_interpolant_matrix(ctx.psi, ctx.params, ctx.grid_size)
    weights = trapezoid_weights(ctx.grid_size, ctx.step)
    interior = matrix[:, 1:-1]
    try:
        metric = linalg.cho_factor(interior.T @ (weights[:, None] * interior))
    except linalg.LinAlgError as error:
        raise NumericalFailureError(f"Seminorm metric is not positive definite: {error}") from error
    return _Discretization(ctx.nodes, weights, matrix, metric)


def _check_state(prob: BVProblem, u: GridFunction, what: str):
    if u.n != prob.ctx.grid_size or u.T != prob.ctx.T:
        raise DomainError(
            f"{what}: u lives on (N={u.n}, T={u.T}), the problem on (N={prob.ctx.grid_size}, T={prob.ctx.T})"
        )
    if not has_zero_trace(u):
        raise PreconditionError(
            f"{what} needs u(0)=u(T)=0, got u(0)={u.samples[0]:.3e}, u(T)={u.samples[-1]:.3e}"
        )


def _energy(prob: BVProblem, disc: _Discretization, samples: np.ndarray) -> float:
    derivative = disc.matrix @ samples
    kinetic = disc.weights @ np.asarray(phi_value(prob.ctx.mf, disc.nodes, derivative))
    potential = disc.weights @ primitive_value(prob.nonlinearity, disc.nodes, samples)
    return float(kinetic - potential)


def _gradient(prob: BVProblem, disc: _Discretization, samples: np.ndarray) -> np.ndarray:
    derivative = disc.matrix @ samples
    flux = disc.weights * np.asarray(density_value(prob.ctx.mf, disc.nodes, derivative))
    gradient = disc.matrix.T @ flux - disc.weights * nonlinearity_value(
        prob.nonlinearity, disc.nodes, samples
    )
    gradient[0] = gradient[-1] = 0.0
    return gradient


def _dual_norm(disc: _Discretization, gradient: np.ndarray) -> float:
    interior = gradient[1:-1]
    return float(np.sqrt(max(interior @ linalg.cho_solve(disc.metric, interior), 0.0)))


def _descent_direction(disc: _Discretization, gradient: np.ndarray) -> np.ndarray:
    direction = np.zeros_like(gradient)
    direction[1:-1] = -linalg.cho_solve(disc.metric, gradient[1:-1])
    return direction


def _hessian(prob: BVProblem, disc: _Discretization, samples: np.ndarray) -> np.ndarray:
    derivative = disc.matrix @ samples
    slope = np.nan_to_num(
        np.asarray(density_slope(prob.ctx.mf, disc.nodes, derivative)),
        posinf=SLOPE_CAP,
    )
    hessian = disc.matrix.T @ ((disc.weights * slope)[:, None] * disc.matrix)
    hessian -= np.diag(disc.weights * nonlinearity_slope(prob.nonlinearity, disc.nodes, samples))
    return hessian[1:-1, 1:-1]


def energy(prob: BVProblem, u: GridFunction) -> float:
    """J(u) = ∫ Φ_x(Du) dt − ∫ H(t, u) dt."""
    _check_state(prob, u, "energy")
    return _energy(prob, _discretization(prob), u.samples)


def residual(prob: BVProblem, u: GridFunction) -> GridFunction:
    """
    Riesz representative of φ ↦ ∫ a_x(|Du|) Du Dφ − ∫ h(t, u) φ in the trapezoid-weighted ℓ² product.

    Boundary entries are zero; ``pairing(prob, residual(prob, u), φ)`` is the
    directional derivative of the discrete energy along φ.
    """
    _check_state(prob, u, "residual")
    disc = _discretization(prob)
    gradient = _gradient(prob, disc, u.samples)
    representative = np.zeros_like(gradient)
    representative[1:-1] = gradient[1:-1] / disc.weights[1:-1]
    return u.with_samples(representative)


def residual_norm(prob: BVProblem, u: GridFunction) -> float:
    """Dual norm of the residual with respect to the seminorm metric."""
    _check_state(prob, u, "residual_norm")
    disc = _discretization(prob)
    return _dual_norm(disc, _gradient(prob, disc, u.samples))


def pairing(prob: BVProblem, f: GridFunction, g: GridFunction) -> float:
    """Σ w_i f_i g_i with the trapezoid weights of the problem grid."""
    return float(_discretization(prob).weights @ (f.samples * g.samples))


def ar_condition_check(
    prob: BVProblem,
    t_samples: Optional[np.ndarray] = None,
    u_samples: Optional[np.ndarray] = None,
) -> CheckReport:
    """0 < μ H(t, u) ≤ h(t, u) u on a lattice of (t, u ≠ 0); reports the worst violator."""
    t_samples = position_lattice(prob.ctx.T, 17) if t_samples is None else np.asarray(t_samples, dtype=float)
    if u_samples is None:
        magnitudes = log_lattice(1e-3, 1e3, 61)
        u_samples = np.concatenate([-magnitudes[::-1], magnitudes])
    u_samples = np.asarray(u_samples, dtype=float)
    u_samples = u_samples[u_samples != 0.0]
    name, anchor = "ambrosetti_rabinowitz", CheckAnchor.AMBROSETTI_RABINOWITZ
    if u_samples.size == 0 or t_samples.size == 0:
        return CheckReport.skip(name, anchor, "empty lattice")

    t, u = (grid.reshape(-1) for grid in np.meshgrid(t_samples, u_samples, indexing="ij"))
    lower = prob.mu * primitive_value(prob.nonlinearity, t, u)
    upper = nonlinearity_value(prob.nonlinearity, t, u) * u
    upper_slack = upper - lower + AR_SLACK * np.maximum(1.0, np.abs(upper))
    worst = int(np.argmin(np.minimum(lower, upper_slack)))
    passed = bool(np.all(lower > 0.0) and np.all(upper_slack >= 0.0))
    return CheckReport(
        name=name,
        anchor=anchor,
        lhs=float(lower[worst]),
        rhs=float(upper[worst]),
        margin=float(upper[worst] - lower[worst]),
        passed=passed,
        note="" if passed else f"worst violator at t={t[worst]:.6g}, u={u[worst]:.6g}",
        details={"samples": int(u.size), "worst_t": float(t[worst]), "worst_u": float(u[worst])},
    )


def _rim(prob: BVProblem, shrink: int) -> tuple[float, float, float]:
    """(L, θ, exponent) from R = r_sup and C̃ = sup{H(t, u) : |u| = 1}."""
    ctx, mu = prob.ctx, prob.mu
    radius = embedding_constants(ctx).r_sup
    c_tilde = float(
        max(
            np.max(primitive_value(prob.nonlinearity, ctx.nodes, 1.0)),
            np.max(primitive_value(prob.nonlinearity, ctx.nodes, -1.0)),
        )
    )

    def candidate(exponent: float) -> float:
        if mu <= exponent:
            raise GeometryFailureError(f"mu={mu} does not exceed the growth exponent {exponent}")
        cap = 1.0 / radius
        if c_tilde > 0.0:
            cap = min(cap, (1.0 / (radius**mu * ctx.T * c_tilde)) ** (1.0 / (mu - exponent)))
        return RIM_SAFETY * 0.5**shrink * cap

    exponent = ctx.mf.phi_upper
    L = candidate(exponent)
    if L >= 1.0:
        exponent = ctx.mf.phi_lower
        L = candidate(exponent)
    theta = L**exponent - L**mu * ctx.T * c_tilde * radius**mu
    return L, theta, exponent


def geometry_check(prob: BVProblem, params: Optional[SolverParams] = None) -> Geometry:
    """
    Rim radius L with J ≥ θ > 0 on [u] = L, and a far endpoint e with [e] > L and J(e) < 0.

    The rim is probed on random zero-trace directions rescaled to seminorm L;
    if a probe dips below θ the radius is halved and the rim recomputed.
    """
    params = params or SolverParams()
    ctx = prob.ctx
    disc = _discretization(prob)
    rng = np.random.default_rng(params.seed)
    directions = fourier_sine_samples(
        rng, ctx.nodes, ctx.T, params.geometry_directions, log_amplitude=(0.0, 0.0)
    )
    directions = [ctx.grid(row) for row in directions if np.any(row)]
    seminorms = [seminorm(ctx, direction) for direction in directions]

    for shrink in range(RIM_SHRINKS):
        L, theta, exponent = _rim(prob, shrink)
        if not theta > 0.0:
            raise GeometryFailureError(f"Rim level theta={theta:.3e} is not positive at L={L:.3e}")
        rim_energies = [
            _energy(prob, disc, (direction * (L / norm)).samples)
            for direction, norm in zip(directions, seminorms)
            if norm > 0.0
        ]
        lowest = min(rim_energies, default=np.inf)
        if lowest >= theta - GROWTH_TOLERANCE:
            break
        frac_logger.warning(
            f"Rim probe below theta (min J={lowest:.6e} < {theta:.6e}) at L={L:.6e}; shrinking"
        )
    else:
        raise GeometryFailureError("No rim radius satisfied J >= theta on the probed directions")

    profile = np.sin(np.pi * ctx.nodes / ctx.T)
    profile[[0, -1]] = 0.0
    bump = ctx.grid(profile)
    scale = 1.0
    for _ in range(MAX_DOUBLINGS):
        endpoint = bump * scale
        if _energy(prob, disc, endpoint.samples) < 0.0 and seminorm(ctx, endpoint) > L:
            frac_logger.info(
                f"Mountain-pass geometry: L={L:.6e}, theta={theta:.6e}, endpoint scale={scale:g}"
            )
            return Geometry(L=L, theta=theta, e=endpoint, phi_exponent=exponent)
        scale *= 2.0
    raise GeometryFailureError(
        f"No endpoint with negative energy after {MAX_DOUBLINGS} doublings of the sine bump"
    )


def _newton_polish(
    prob: BVProblem,
    disc: _Discretization,
    samples: np.ndarray,
    gradient_norm: float,
    params: SolverParams,
    iteration: int,
    path_max: float,
    history: list[IterateRecord],
) -> tuple[np.ndarray, float, int, str]:
    ctx = prob.ctx
    note = ""
    while iteration < params.budget and gradient_norm > params.tolerance:
        gradient = _gradient(prob, disc, samples)
        try:
            step = linalg.solve(_hessian(prob, disc, samples), -gradient[1:-1], assume_a="sym")
        except (linalg.LinAlgError, ValueError) as error:
            raise NumericalFailureError(f"Newton system is singular: {error}") from error
        if not np.all(np.isfinite(step)):
            raise NumericalFailureError("Newton step is not finite")

        damping = 1.0
        for _ in range(NEWTON_HALVINGS):
            trial = samples.copy()
            trial[1:-1] += damping * step
            trial_norm = _dual_norm(disc, _gradient(prob, disc, trial))
            if not np.isfinite(trial_norm):
                raise NumericalFailureError("Residual norm became NaN during Newton polishing")
            if trial_norm < gradient_norm:
                break
            damping *= 0.5
        else:
            note = "Newton polishing stalled"
            frac_logger.warning(f"{note} at residual {gradient_norm:.3e}")
            break

        samples, gradient_norm = trial, trial_norm
        iteration += 1
        value = _energy(prob, disc, samples)
        history.append(
            IterateRecord(
                iteration=iteration,
                phase="newton",
                u=ctx.grid(samples),
                energy=value,
                residual_norm=gradient_norm,
                path_max_energy=max(path_max, value),
                step=damping,
            )
        )
        frac_logger.debug(f"newton {iteration}: J={value:.10e}, residual={gradient_norm:.3e}")
    return samples, gradient_norm, iteration, note


def mountain_pass_solve(
    prob: BVProblem,
    params: Optional[SolverParams] = None,
    geometry: Optional[Geometry] = None,
) -> MountainPassResult:
    """
    Path deformation from 0 to e, then Newton polishing of the path maximizer.

    Each descent iteration moves the highest interior path point along the
    metric gradient with Armijo backtracking. Once its residual norm drops
    below ``newton_switch`` (or the line search stalls) damped Newton steps
    on the discrete Euler–Lagrange system finish the saddle, and the polished
    point replaces the maximizer on the path. Both phases share ``budget``.
    """
    params = params or SolverParams()
    geometry = geometry or geometry_check(prob, params)
    ctx = prob.ctx
    disc = _discretization(prob)

    fractions = np.linspace(0.0, 1.0, params.path_points)
    path = fractions[:, None] * geometry.e.samples[None, :]
    energies = np.array([_energy(prob, disc, point) for point in path])
    history: list[IterateRecord] = []
    iteration, step = 0, 1.0
    note = ""

    while iteration < params.budget:
        top = 1 + int(np.argmax(energies[1:-1]))
        gradient = _gradient(prob, disc, path[top])
        gradient_norm = _dual_norm(disc, gradient)
        history.append(
            IterateRecord(
                iteration=iteration,
                phase="descent",
                u=ctx.grid(path[top]),
                energy=float(energies[top]),
                residual_norm=gradient_norm,
                path_max_energy=float(energies.max()),
                step=step,
            )
        )
        if gradient_norm <= params.newton_switch:
            break

        direction = _descent_direction(disc, gradient)
        slope = float(gradient @ direction)
        step = min(1.0, 2.0 * step)
        while step >= MIN_STEP:
            trial = path[top] + step * direction
            trial_energy = _energy(prob, disc, trial)
            if not np.isfinite(trial_energy):
                raise NumericalFailureError(f"Energy became NaN in the line search at step {step:.3e}")
            if trial_energy <= energies[top] + params.armijo_c * step * slope:
                break
            step *= params.armijo_factor
        else:
            frac_logger.info(f"Line search stalled at residual {gradient_norm:.3e}; switching to Newton")
            break
        path[top], energies[top] = trial, trial_energy
        iteration += 1
        frac_logger.debug(
            f"descent {iteration}: max J={energies.max():.10e}, residual={gradient_norm:.3e}, step={step:.3e}"
        )

    top = 1 + int(np.argmax(energies[1:-1]))
    gradient_norm = _dual_norm(disc, _gradient(prob, disc, path[top]))
    if gradient_norm > params.tolerance and iteration < params.budget:
        frac_logger.info(f"Newton polishing from residual {gradient_norm:.3e}")
        polished, gradient_norm, iteration, note = _newton_polish(
            prob, disc, path[top], gradient_norm, params, iteration, float(energies.max()), history
        )
        path[top], energies[top] = polished, _energy(prob, disc, polished)

    u_star = ctx.grid(path[top])
    value = float(energies[top])
    converged = gradient_norm <= params.tolerance
    if not converged and not note:
        note = f"iteration budget of {params.budget} exhausted"
    if converged and k_norm(ctx, u_star) < 0.5 * geometry.L:
        converged, note = False, "converged to a trivial critical point (norm below L/2)"
    elif converged and value < geometry.theta - PS_SLACK:
        converged, note = False, f"critical value {value:.6e} below the rim level {geometry.theta:.6e}"

    log = frac_logger.info if converged else frac_logger.warning
    log(
        f"Mountain pass {'converged' if converged else 'did not converge'}: J={value:.10e}, "
        f"residual={gradient_norm:.3e}, iterations={iteration}{'; ' + note if note else ''}"
    )
    return MountainPassResult(
        u_star=u_star,
        energy=value,
        residual_norm=gradient_norm,
        path_max_energy=float(energies.max()),
        theta=geometry.theta,
        L=geometry.L,
        e=geometry.e,
        iterations=iteration,
        converged=converged,
        note=note,
        history=history,
    )


def ps_diagnostic(prob: BVProblem, history: Sequence[IterateRecord]) -> CheckReport:
    """
    (1 − k/μ) [u_k]^φ± ≤ J(u_k) − ⟨J′(u_k), u_k⟩/μ along the iterates.

    φ⁻ is used when [u_k] ≥ 1 and φ⁺ otherwise; the details carry the
    largest |J(u_k)| and the last residual norm.
    """
    if not history:
        raise PreconditionError("ps_diagnostic needs at least one iterate")
    disc = _discretization(prob)
    ctx = prob.ctx
    factor = 1.0 - prob.k_delta2 / prob.mu
    lhs, rhs = [], []
    for record in history:
        samples = record.u.samples
        value = _energy(prob, disc, samples)
        semi = seminorm(ctx, record.u)
        exponent = ctx.mf.phi_lower if semi >= 1.0 else ctx.mf.phi_upper
        lhs.append(factor * semi**exponent)
        rhs.append(value - float(_gradient(prob, disc, samples) @ samples) / prob.mu)
    lhs, rhs = np.array(lhs), np.array(rhs)
    slack = rhs - lhs + PS_SLACK * np.maximum(1.0, np.abs(rhs))
    worst = int(np.argmin(slack))
    return CheckReport(
        name="palais_smale",
        anchor=CheckAnchor.PALAIS_SMALE_BOUND,
        lhs=float(lhs[worst]),
        rhs=float(rhs[worst]),
        margin=float(rhs[worst] - lhs[worst]),
        passed=bool(np.all(slack >= 0.0)),
        details={
            "iterates": len(history),
            "worst_iteration": history[worst].iteration,
            "max_abs_energy": float(max(abs(record.energy) for record in history)),
            "final_residual_norm": float(history[-1].residual_norm),
        },
    )


def lemma_growth_checks(
    prob: BVProblem,
    t_samples: Optional[np.ndarray] = None,
    u_samples: Optional[np.ndarray] = None,
    pairs: int = 20,
    seed: int = 20240601,
) -> CheckReport:
    """
    Growth of the primitive H implied by the Ambrosetti–Rabinowitz condition.

    Pointwise: H(t, u) ≤ H(t, u/|u|)|u|^μ for 0 < |u| ≤ 1 and the reverse for
    |u| ≥ 1. Integrated, on random (s, u): ∫ H(t, su) ≥ ℓ|s|^μ ∫|u|^μ − Tℓ.
    """
    ctx = prob.ctx
    t_samples = position_lattice(ctx.T, 17) if t_samples is None else np.asarray(t_samples, dtype=float)
    if u_samples is None:
        magnitudes = log_lattice(1e-2, 1e2, 41)
        u_samples = np.concatenate([-magnitudes[::-1], magnitudes])
    u_samples = np.asarray(u_samples, dtype=float)
    u_samples = u_samples[u_samples != 0.0]
    t, u = (grid.reshape(-1) for grid in np.meshgrid(t_samples, u_samples, indexing="ij"))

    value = primitive_value(prob.nonlinearity, t, u)
    scaled = primitive_value(prob.nonlinearity, t, np.sign(u)) * np.abs(u) ** prob.mu
    tolerance = GROWTH_TOLERANCE * np.maximum(1.0, np.abs(scaled))
    inside = np.abs(u) <= 1.0
    small_slack = np.where(inside, scaled - value + tolerance, np.inf)
    large_slack = np.where(np.abs(u) >= 1.0, value - scaled + tolerance, np.inf)

    rng = np.random.default_rng(seed)
    weights = trapezoid_weights(ctx.grid_size, ctx.step)
    integral_slack = []
    for row in fourier_sine_samples(rng, ctx.nodes, ctx.T, pairs, log_amplitude=(-0.5, 0.5)):
        s = rng.uniform(0.5, 4.0) * rng.choice([-1.0, 1.0])
        lhs = float(weights @ primitive_value(prob.nonlinearity, ctx.nodes, s * row))
        rhs = prob.ell * abs(s) ** prob.mu * float(weights @ np.abs(row) ** prob.mu) - ctx.T * prob.ell
        integral_slack.append(lhs - rhs + GROWTH_TOLERANCE * max(1.0, abs(rhs)))

    margins = {
        "small_u": float(np.min(small_slack)) if small_slack.size else np.inf,
        "large_u": float(np.min(large_slack)) if large_slack.size else np.inf,
        "integrated": float(min(integral_slack, default=np.inf)),
    }
    failing = [part for part, margin in margins.items() if margin < 0.0]
    return CheckReport(
        name="primitive_growth",
        anchor=CheckAnchor.PRIMITIVE_GROWTH,
        lhs=0.0,
        rhs=float(min(margins.values())),
        margin=float(min(margins.values())),
        passed=not failing,
        note="; ".join(f"{part} violated" for part in failing),
        details={**margins, "samples": int(u.size), "pairs": pairs},
    )


def classical_limit_oracle(T: float = 1.0, mu: float = 6.0, n: int = 513) -> GridFunction:
    """
    Positive solution of −u″ = |u|^(μ−2) u, u(0) = u(T) = 0, by shooting on u′(0).

    The slope is scanned upward from a near-linear start until u(T) changes
    sign, then refined with Brent's method.
    """
    if not T > 0.0 or not mu > 2.0:
        raise DomainError(f"classical_limit_oracle needs T > 0 and mu > 2, got T={T}, mu={mu}")

    def vector_field(_, state):
        return [state[1], -np.abs(state[0]) ** (mu - 2.0) * state[0]]

    def endpoint(slope: float) -> float:
        solution = integrate.solve_ivp(
            vector_field, (0.0, T), [0.0, slope], method="DOP853", rtol=1e-11, atol=1e-12
        )
        return float(solution.y[0, -1])

    low, high = 0.5 / T, None
    for _ in range(400):
        candidate = low * 1.25
        if endpoint(candidate) < 0.0:
            high = candidate
            break
        low = candidate
    if high is None:
        raise NumericalFailureError("Shooting scan found no sign change of u(T)")

    slope = optimize.brentq(endpoint, low, high, xtol=1e-14, rtol=1e-13)
    nodes = np.linspace(0.0, T, n)
    solution = integrate.solve_ivp(
        vector_field, (0.0, T), [0.0, slope], method="DOP853", rtol=1e-11, atol=1e-12, t_eval=nodes
    )
    samples = solution.y[0].copy()
    samples[0] = samples[-1] = 0.0
    frac_logger.debug(f"Shooting oracle: u'(0)={slope:.12e}, max u={samples.max():.6e}")
    return GridFunction(samples, T)
