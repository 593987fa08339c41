from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from src.application.bvp_solver import (
    ar_condition_check,
    build_problem,
    geometry_check,
    lemma_growth_checks,
    mountain_pass_solve,
    ps_diagnostic,
)
from src.application.frac_calculus import (
    frac_integral_left,
    frac_integral_right,
    hilfer_left,
    hilfer_right,
    rl_derivative_left,
    rl_derivative_right,
)
from src.application.musielak_core import enforce_convexity, luxemburg_norm
from src.application.space_k import k_norm, psi_condition_pairs, seminorm
from src.application.study import convergence_study
from src.application.suites import PSI_CONDITION_MAX_NODES, run_verification_suite
from src.core.entities.kspace import KSpaceContext
from src.core.entities.musielak import GridFunction
from src.core.entities.report import CheckReport
from src.core.entities.run_config import RunConfig
from src.core.enums.anchors import CheckAnchor
from src.core.enums.families import FracOperator
from src.core.exceptions import ConfigError, DomainError, GeometryFailureError, InvariantViolationError
from src.infrastructure.lib.csv_writer import read_samples_csv, write_csv_atomic
from src.infrastructure.lib.logger import frac_logger

from .exit_codes import ExitCode


class RunService:
    def __init__(self, config: RunConfig):
        """
        Command handlers over one validated run configuration.

        Every handler writes its CSV reports under ``config.output`` and
        returns the process exit code; errors propagate to the caller, which
        maps them to exit codes.
        """
        self.config = config
        self.output = Path(config.output)

    def _checked_context(self, config: Optional[RunConfig] = None, grid_size: Optional[int] = None) -> KSpaceContext:
        config = config or self.config
        ctx = config.context(grid_size)
        try:
            enforce_convexity(ctx.mf, config.convexity)
        except InvariantViolationError as error:
            raise ConfigError(f"Musielak function rejected under --strict-convexity=fail: {error}") from error
        return ctx

    def _write(self, frame: pd.DataFrame, name: str) -> Path:
        path = write_csv_atomic(frame, self.output / name)
        frac_logger.info(f"Wrote {path}")
        return path

    def _write_reports(self, reports: list[CheckReport], name: str) -> Path:
        return self._write(pd.DataFrame([report.as_row() for report in reports]), name)

    def verify(self) -> ExitCode:
        ctx = self._checked_context()
        verify = self.config.verify
        reports = run_verification_suite(
            ctx,
            trials=verify.trials,
            seed=self.config.seed,
            anchors=verify.checks,
            policy=self.config.convexity,
        )
        self._write_reports(reports, "verify.csv")

        if verify.checks is None or CheckAnchor.PSI_KERNEL_CONDITION in verify.checks:
            stride = max(1, -(-(ctx.grid_size - 1) // (PSI_CONDITION_MAX_NODES - 1)))
            t, s, values = psi_condition_pairs(ctx.psi, ctx.params.alpha, ctx.nodes[::stride])
            violated = values >= 1.0
            self._write(
                pd.DataFrame({"t": t[violated], "s": s[violated], "value": values[violated]}),
                "psi_condition_violations.csv",
            )

        failed = [report.name for report in reports if report.failed]
        if failed:
            frac_logger.error(f"Failed checks: {', '.join(failed)}")
            return ExitCode.CHECKS_FAILED
        return ExitCode.OK

    def solve(self) -> ExitCode:
        ctx = self._checked_context()
        prob = build_problem(ctx, self.config.nonlinearity_entity(), self.config.nonlinearity.mu)
        params = self.config.solver_params()

        ar = ar_condition_check(prob)
        if ar.failed:
            raise GeometryFailureError(f"Ambrosetti–Rabinowitz condition fails: {ar.note}")
        growth = lemma_growth_checks(prob, seed=self.config.seed)

        geometry = geometry_check(prob, params)
        result = mountain_pass_solve(prob, params, geometry)
        checks = [ar, growth]
        if result.history:
            checks.append(ps_diagnostic(prob, result.history))

        self._write(pd.DataFrame({"t": ctx.nodes, "u": result.u_star.samples}), "solution.csv")
        self._write(
            pd.DataFrame(
                {
                    "iteration": [record.iteration for record in result.history],
                    "phase": [record.phase for record in result.history],
                    "path_max_energy": [record.path_max_energy for record in result.history],
                    "energy": [record.energy for record in result.history],
                    "residual_norm": [record.residual_norm for record in result.history],
                    "step": [record.step for record in result.history],
                }
            ),
            "diagnostics.csv",
        )
        self._write_reports(checks, "solve_checks.csv")

        summary = (
            f"J(u*)={result.energy:.6g}, residual={result.residual_norm:.3e}, "
            f"theta={result.theta:.6g}, L={result.L:.6g}, iterations={result.iterations}"
        )
        if not result.converged:
            frac_logger.error(f"Mountain-pass iteration did not converge ({result.note}): {summary}")
            return ExitCode.NOT_CONVERGED
        frac_logger.success(f"Critical point found: {summary}, ||u*||_K={k_norm(ctx, result.u_star):.6g}")
        return ExitCode.OK

    def study(self) -> ExitCode:
        study = self.config.study
        frames = []
        for case in study.cases:
            frame = convergence_study(
                case,
                self.config.psi_weight(),
                self.config.frac_params(),
                study.sizes,
                power=study.power,
            )
            frames.append(frame.assign(fitted_order=frame.attrs["fitted_order"]).assign(case=case.value))
        table = pd.concat(frames, ignore_index=True)
        self._write(table[["case", "N", "error", "order", "fitted_order"]], "study.csv")
        return ExitCode.OK

    def _read_input(self, path: str | Path) -> tuple[RunConfig, GridFunction]:
        """Load a sampled function; a ``t`` column fixes T and must be the uniform grid on [0, T]."""
        try:
            nodes, values = read_samples_csv(path)
        except (OSError, ValueError) as error:
            raise ConfigError(f"Cannot read samples from {path}: {error}") from error
        samples = values.to_numpy(dtype=float)
        if samples.size < 3:
            raise DomainError(f"{path}: need at least 3 samples, got {samples.size}")
        config = self.config
        if nodes is not None:
            t = nodes.to_numpy(dtype=float)
            T = float(t[-1])
            if T <= 0.0 or not np.allclose(t, np.linspace(0.0, T, t.size), rtol=0.0, atol=1e-9 * T):
                raise DomainError(f"{path}: 't' must be the uniform grid on [0, T] with T > 0")
            config = config.model_copy(update={"T": T})
        return config, GridFunction(samples, config.T)

    def norm(self, path: str | Path) -> ExitCode:
        config, u = self._read_input(path)
        ctx = self._checked_context(config, grid_size=u.n)
        luxemburg = luxemburg_norm(ctx.mf, u)
        semi = seminorm(ctx, u)
        full = k_norm(ctx, u)
        self._write(
            pd.DataFrame({"quantity": ["luxemburg_norm", "seminorm", "k_norm"], "value": [luxemburg, semi, full]}),
            "norm.csv",
        )
        print(f"luxemburg_norm={luxemburg:.16e}")
        print(f"seminorm={semi:.16e}")
        print(f"k_norm={full:.16e}")
        return ExitCode.OK

    def fracop(self, path: str | Path, operator: Optional[FracOperator] = None) -> ExitCode:
        operator = operator or self.config.fracop.operator
        config, v = self._read_input(path)
        psi, params = config.psi_weight(), config.frac_params()
        appliers = {
            FracOperator.INTEGRAL_LEFT: lambda: frac_integral_left(psi, params.alpha, v),
            FracOperator.INTEGRAL_RIGHT: lambda: frac_integral_right(psi, params.alpha, v),
            FracOperator.RL_LEFT: lambda: rl_derivative_left(psi, params.alpha, v),
            FracOperator.RL_RIGHT: lambda: rl_derivative_right(psi, params.alpha, v),
            FracOperator.HILFER_LEFT: lambda: hilfer_left(psi, params, v),
            FracOperator.HILFER_RIGHT: lambda: hilfer_right(psi, params, v),
        }
        result = appliers[operator]()
        frac_logger.info(f"Applied {operator.value} (psi={psi.label}, alpha={params.alpha:g}, beta={params.beta:g})")
        self._write(pd.DataFrame({"t": v.nodes, "u": v.samples, "value": result.samples}), "fracop.csv")
        return ExitCode.OK

