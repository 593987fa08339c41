"""
Randomized verification suites over a space context.

Each inequality is evaluated on ``trials`` random Fourier-sine samples with
zero trace and folded into one aggregated report per check. Failing trials
keep their samples under ``details["artifact"]`` for later inspection.
"""

from typing import Callable, Iterable, Optional

import numpy as np

from src.application.frac_calculus import ftc_compose_check
from src.application.musielak_core import (
    enforce_convexity,
    exponents,
    holder_check,
    modular_convergence_check,
    modular_norm_relations_check,
    sandwich_check,
    structure_check,
    young_type_check,
)
from src.application.space_k import (
    integral_bound_check,
    norm_equivalence_probe,
    poincare_check,
    psi_condition_check,
    seminorm_modular_sandwich_check,
    sup_bound_check,
)
from src.core.entities.kspace import KSpaceContext
from src.core.entities.musielak import GridFunction, MusielakFunction
from src.core.entities.report import CheckReport
from src.core.enums.anchors import CheckAnchor
from src.core.enums.families import ConvexityPolicy
from src.core.exceptions import InvariantViolationError
from src.infrastructure.config.settings import DEFAULT_SEED
from src.infrastructure.lib.logger import frac_logger
from src.infrastructure.lib.quadrature import fourier_sine_samples

CONVERGENCE_TRIALS = 5
PSI_CONDITION_MAX_NODES = 1025

FTC_PROBES: tuple[Callable[[np.ndarray], np.ndarray], ...] = (
    lambda s: np.sin(np.pi * s),
    lambda s: s * (1.0 - s),
    lambda s: s**2,
    lambda s: s**3 - s,
    lambda s: np.sin(2.0 * np.pi * s) + s,
)
"""Smooth probes on the unit interval, all vanishing at 0; rescaled to [0, T]."""


def _with_artifact(report: CheckReport, *samples: GridFunction) -> CheckReport:
    if not report.failed:
        return report
    artifact = [sample.samples.tolist() for sample in samples]
    return report.model_copy(update={"details": {**report.details, "artifact": artifact}})


def aggregate(name: str, anchor: CheckAnchor, reports: list[CheckReport]) -> CheckReport:
    """Fold per-trial reports into one: it fails when any trial fails and shows the tightest trial."""
    ran = [report for report in reports if not report.skipped]
    if not ran:
        note = reports[0].note if reports else "no trials"
        return CheckReport.skip(name, anchor, f"all {len(reports)} trials skipped ({note})")
    failures = [report for report in ran if report.failed]
    tightest = min(failures or ran, key=lambda report: report.margin)
    details = {
        "trials": len(reports),
        "skipped": len(reports) - len(ran),
        "failures": len(failures),
    }
    if failures:
        details["artifact"] = failures[0].details.get("artifact")
    return CheckReport(
        name=name,
        anchor=anchor,
        lhs=tightest.lhs,
        rhs=tightest.rhs,
        margin=tightest.margin,
        passed=not failures,
        informational=all(report.informational for report in ran),
        note=f"{len(failures)} of {len(ran)} trials failed" if failures else tightest.note,
        details=details,
    )


def growth_exponent_report(mf: MusielakFunction) -> CheckReport:
    name, anchor = "growth_exponents", CheckAnchor.GROWTH_EXPONENTS
    try:
        lower, upper = exponents(mf)
    except InvariantViolationError as error:
        return CheckReport(name=name, anchor=anchor, passed=False, note=str(error))
    return CheckReport(
        name=name,
        anchor=anchor,
        lhs=upper,
        rhs=mf.phi_upper,
        margin=min(lower - mf.phi_lower, mf.phi_upper - upper),
        details={"measured_lower": lower, "declared_lower": mf.phi_lower},
    )


def ftc_gate(ctx: KSpaceContext) -> CheckReport:
    """FTC composition on the smooth probes; the Poincaré-type suite only runs behind it."""
    reports = []
    for probe in FTC_PROBES:
        v = ctx.sample(lambda x: probe(x / ctx.T))
        reports.append(ftc_compose_check(ctx.psi, ctx.params, v))
    return aggregate("ftc_composition", CheckAnchor.FTC_COMPOSITION, reports)


def run_verification_suite(
    ctx: KSpaceContext,
    trials: int = 100,
    seed: int = DEFAULT_SEED,
    anchors: Optional[Iterable[CheckAnchor]] = None,
    policy: ConvexityPolicy = ConvexityPolicy.WARN,
) -> list[CheckReport]:
    """Run every selected check on ``ctx`` and return one report per check."""
    selected = set(anchors) if anchors is not None else set(CheckAnchor)
    mf = ctx.mf
    reports: list[CheckReport] = []

    if CheckAnchor.STRUCTURE_CONDITIONS in selected:
        reports.append(structure_check(mf))
    if CheckAnchor.CONVEXITY_CONDITION in selected:
        reports.append(enforce_convexity(mf, policy))
    if CheckAnchor.GROWTH_EXPONENTS in selected:
        reports.append(growth_exponent_report(mf))
    if CheckAnchor.SANDWICH_INEQUALITY in selected:
        reports.append(sandwich_check(mf))
    if CheckAnchor.YOUNG_TYPE_INEQUALITY in selected:
        reports.append(young_type_check(mf))

    rng = np.random.default_rng(seed)
    zero_trace = [ctx.grid(row) for row in fourier_sine_samples(rng, ctx.nodes, ctx.T, trials)]
    partners = [ctx.grid(row) for row in fourier_sine_samples(rng, ctx.nodes, ctx.T, trials)]
    offsets = rng.standard_normal(trials) * 10.0 ** rng.uniform(-1.5, 1.5, trials)
    general = [partner.with_samples(partner.samples + offset) for partner, offset in zip(partners, offsets)]

    gate_passed = True
    if CheckAnchor.FTC_COMPOSITION in selected or CheckAnchor.POINCARE_INEQUALITY in selected:
        gate = ftc_gate(ctx)
        gate_passed = gate.passed
        if CheckAnchor.FTC_COMPOSITION in selected:
            reports.append(gate)

    per_trial: list[tuple[str, CheckAnchor, Callable[[int], CheckReport]]] = [
        (
            "holder",
            CheckAnchor.HOLDER_INEQUALITY,
            lambda i: _with_artifact(
                holder_check(mf, zero_trace[i], general[i], ctx.holder_factor),
                zero_trace[i],
                general[i],
            ),
        ),
        (
            "modular_norm_relations",
            CheckAnchor.MODULAR_NORM_RELATIONS,
            lambda i: _with_artifact(modular_norm_relations_check(mf, general[i]), general[i]),
        ),
        (
            "seminorm_modular_relations",
            CheckAnchor.SEMINORM_MODULAR_RELATIONS,
            lambda i: _with_artifact(seminorm_modular_sandwich_check(ctx, zero_trace[i]), zero_trace[i]),
        ),
        (
            "integral_operator_bound",
            CheckAnchor.INTEGRAL_OPERATOR_BOUND,
            lambda i: _with_artifact(integral_bound_check(ctx, general[i]), general[i]),
        ),
        (
            "sup_norm_bound",
            CheckAnchor.SUP_NORM_BOUND,
            lambda i: _with_artifact(sup_bound_check(ctx, zero_trace[i]), zero_trace[i]),
        ),
    ]
    for name, anchor, run in per_trial:
        if anchor in selected:
            reports.append(aggregate(name, anchor, [run(i) for i in range(trials)]))

    if CheckAnchor.MODULAR_NORM_CONVERGENCE in selected:
        convergence = [
            _with_artifact(modular_convergence_check(mf, general[i]), general[i])
            for i in range(min(trials, CONVERGENCE_TRIALS))
        ]
        reports.append(aggregate("modular_norm_convergence", CheckAnchor.MODULAR_NORM_CONVERGENCE, convergence))

    if CheckAnchor.POINCARE_INEQUALITY in selected:
        if gate_passed:
            poincare = [_with_artifact(poincare_check(ctx, u), u) for u in zero_trace]
            reports.append(aggregate("poincare", CheckAnchor.POINCARE_INEQUALITY, poincare))
        else:
            frac_logger.warning("FTC composition failed; Poincaré-type checks are skipped")
            reports.append(
                CheckReport.skip("poincare", CheckAnchor.POINCARE_INEQUALITY, "FTC composition gate failed")
            )

    if CheckAnchor.PSI_KERNEL_CONDITION in selected:
        stride = max(1, -(-(ctx.grid_size - 1) // (PSI_CONDITION_MAX_NODES - 1)))
        reports.append(psi_condition_check(ctx.psi, ctx.params.alpha, ctx.nodes[::stride]))

    if CheckAnchor.NORM_EQUIVALENCE in selected:
        reports.append(norm_equivalence_probe(ctx, zero_trace))

    failed = sum(report.failed for report in reports)
    skipped = sum(report.skipped for report in reports)
    frac_logger.info(
        f"Verification suite on '{mf.label}', psi={ctx.psi.label}: "
        f"{len(reports)} checks, {failed} failed, {skipped} skipped ({trials} trials)"
    )
    return reports
