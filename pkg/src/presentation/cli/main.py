import argparse
from typing import Optional, Sequence

from src.core.entities.run_config import RunConfig
from src.core.enums.families import ConvexityPolicy, FracOperator
from src.core.exceptions import (
    ConfigError,
    DomainError,
    GeometryFailureError,
    InvariantViolationError,
    NumericalFailureError,
    PreconditionError,
)
from src.infrastructure.lib.logger import frac_logger

from .exit_codes import ExitCode
from .services import RunService

ERROR_CODES: tuple[tuple[type[Exception], ExitCode], ...] = (
    (ConfigError, ExitCode.CONFIG_ERROR),
    (PreconditionError, ExitCode.CONFIG_ERROR),
    (GeometryFailureError, ExitCode.GEOMETRY_FAILURE),
    (NumericalFailureError, ExitCode.NUMERICAL_FAILURE),
    (DomainError, ExitCode.NUMERICAL_FAILURE),
    (InvariantViolationError, ExitCode.NUMERICAL_FAILURE),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frac-musielak",
        description="Verification suites and mountain-pass solver for ψ-Hilfer problems in Musielak–Orlicz spaces",
    )
    parser.add_argument("--config", default=None, help="JSON run configuration (defaults when omitted)")
    parser.add_argument("--out", default=None, help="Directory for CSV reports (overrides the configuration)")
    parser.add_argument("--seed", type=int, default=None, help="Random seed (overrides the configuration)")
    parser.add_argument(
        "--strict-convexity",
        choices=[policy.value for policy in ConvexityPolicy],
        default=None,
        help="Reject (fail) or only report (warn) Musielak functions with non-convex t ↦ Φ(x, √t)",
    )

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("verify", help="Run the randomized inequality suite and write verify.csv")
    solve = commands.add_parser("solve", help="Find a mountain-pass critical point and write solution.csv")
    solve.add_argument(
        "--budget", type=int, default=None, help="Iteration budget of the solver (overrides the configuration)"
    )
    commands.add_parser("study", help="Grid-refinement study of the fractional operators")

    norm = commands.add_parser("norm", help="Luxemburg norm and K-norm of a sampled function")
    norm.add_argument("input", help="CSV with a 'u' column and optionally 't'")

    fracop = commands.add_parser("fracop", help="Apply a fractional operator to a sampled function")
    fracop.add_argument("input", nargs="?", default=None, help="CSV with a 'u' column and optionally 't'")
    fracop.add_argument(
        "--operator",
        choices=[operator.value for operator in FracOperator],
        default=None,
        help="Operator to apply (overrides the configuration)",
    )
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.load(args.config)
    overrides = {}
    if args.out is not None:
        overrides["output"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.strict_convexity is not None:
        overrides["convexity"] = ConvexityPolicy(args.strict_convexity)
    budget = getattr(args, "budget", None)
    if budget is not None:
        if budget < 1:
            raise ConfigError(f"--budget must be at least 1, got {budget}")
        overrides["solver"] = config.solver.model_copy(update={"budget": budget})
    return config.model_copy(update=overrides) if overrides else config


def dispatch(service: RunService, args: argparse.Namespace) -> ExitCode:
    if args.command == "verify":
        return service.verify()
    if args.command == "solve":
        return service.solve()
    if args.command == "study":
        return service.study()
    if args.command == "norm":
        return service.norm(args.input)
    path = args.input or service.config.fracop.input
    if path is None:
        raise ConfigError("fracop needs an input CSV (argument or fracop.input in the configuration)")
    operator = FracOperator(args.operator) if args.operator is not None else None
    return service.fracop(path, operator)


def run_tag(command: str, seed: int) -> str:
    return f"{command} seed={seed}"


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    tag = args.command
    try:
        config = load_config(args)
        tag = run_tag(args.command, config.seed)
        with frac_logger.contextualize(run=tag):
            frac_logger.info(f"Running '{args.command}' with output in {config.output}")
            return int(dispatch(RunService(config), args))
    except tuple(error for error, _ in ERROR_CODES) as error:
        code = next(code for kind, code in ERROR_CODES if isinstance(error, kind))
        frac_logger.bind(run=tag).error(f"{type(error).__name__}: {error}")
        return int(code)
