"""
oscillab command line.

    oscillab simulate  --config configs/oscillator_finite.ini --trials 100000
    oscillab exact     --horizon 12 --measure bernoulli:0.3333
    oscillab verify    --process doob_tight --depth 12
    oscillab bounds    --horizon 12
    oscillab mdl-demo  --delta 0.2 --m 3

Exit codes: 0 every verdict holds, 1 a bound is violated or a check fails,
2 usage or configuration error.
"""

import functools
import json
import logging
import os
import sys
from typing import Any, Callable, Dict, Optional

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .. import __version__
from ..bounds import doob_expectation_gap, summable_gap_example
from ..errors import EnumerationLimitError, OscillabError
from ..martingale import DEFAULT_TOLERANCE, round_trip_defects, verify_martingale
from ..mdl import mdl_oscillation_experiment
from ..measure import check_enumeration, verify_perpetual_entropy
from ..oscillator import validate_schedule
from ..oscillator.construction import ENTROPY_EPS
from .config import LabConfig, build_process, load_config
from .engine import run_monte_carlo
from .exact import run_exact
from .reports import emit_mdl_reports, emit_reports
from .summary import RunSummary

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
SCHEDULE_CHECK_LENGTH = 1000

console = Console()
err_console = Console(stderr=True)


def configure_logging(verbose: int) -> None:
    level = os.environ.get("OSCILLAB_LOG_LEVEL")
    if not level:
        level = ("WARNING", "INFO", "DEBUG")[min(verbose, 2)]
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, rich_tracebacks=True, show_path=False)],
        force=True,
    )


def run_options(command: Callable) -> Callable:
    """Options shared by every run-style subcommand."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="INI configuration file."),
        click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), help="Master seed (unsigned 64-bit)."),
        click.option("--trials", type=click.IntRange(min=1), help="Number of sampled paths."),
        click.option("--horizon", type=click.IntRange(min=0), help="Path length."),
        click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Directory for report files."),
        click.option("--measure", help="Reference measure, e.g. bernoulli:0.3333."),
        click.option("--schedule", help="finite:delta,m | logsq:delta | band:a,b | invlog:a,b."),
        click.option("--process", help="oscillator, doob_tight, quotient, constant, doubling, bounded_split, belief."),
        click.option("--workers", type=click.IntRange(min=1), help="Worker processes."),
        click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG."),
        click.option("--json", "as_json", is_flag=True, help="Print the JSON summary instead of a table."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def handle_errors(command: Callable) -> Callable:
    """Map library errors to exit code 2 with a one-line message."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (OscillabError, OSError) as exc:
            err_console.print(f"[bold red]error:[/bold red] {exc}")
            sys.exit(EXIT_USAGE)

    return wrapper


def resolve(options: Dict[str, Any], **extra: Any) -> LabConfig:
    configure_logging(options.get("verbose", 0))
    overrides = {
        "seed": options.get("seed"),
        "trials": options.get("trials"),
        "horizon": options.get("horizon"),
        "out_dir": options.get("out_dir"),
        "measure": options.get("measure"),
        "schedule": options.get("schedule"),
        "process": options.get("process"),
        "workers": options.get("workers"),
    }
    overrides.update(extra)
    return load_config(options.get("config_path"), overrides)


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6g}"


def reports_table(summary: RunSummary) -> Table:
    table = Table(title=f"{summary.mode}: {summary.process} under {summary.measure}")
    for column in ("bound", "band", "k", "empirical", "theoretical", "std_err", "verdict"):
        table.add_column(column, justify="left" if column in ("bound", "band", "verdict") else "right")
    styles = {"holds": "green", "tight": "cyan", "violated": "bold red"}
    for report in summary.reports:
        band = "" if report.band is None else f"({report.band[0]:.4g}, {report.band[1]:.4g})"
        verdict = report.verdict.value
        table.add_row(
            report.name, band, "" if report.k is None else str(report.k),
            _fmt(report.empirical), _fmt(report.theoretical), _fmt(report.std_err),
            f"[{styles[verdict]}]{verdict}[/{styles[verdict]}]",
        )
    return table


def _finish_run(summary: RunSummary, config: LabConfig, as_json: bool) -> None:
    if config.out_dir is not None:
        emit_reports(summary, config.out_dir, tallies=config.tallies)
    if as_json:
        click.echo(json.dumps(summary.to_dict(), indent=2, sort_keys=True))
    else:
        console.print(reports_table(summary))
        for band in summary.bands:
            if band.in_progress > 0.0:
                console.print(
                    f"band ({band.lo:.4g}, {band.hi:.4g}): {band.in_progress:.4%} of paths end mid-crossing"
                )
        if summary.max_defect is not None:
            console.print(
                f"max one-step defect {summary.max_defect:.3e}, "
                f"max |E[X_t] − X_0| {summary.expectation_defect:.3e}"
            )
        console.print(f"wall time {summary.wall_time:.2f}s")
    defect_failed = summary.max_defect is not None and (
        summary.max_defect > DEFAULT_TOLERANCE or summary.expectation_defect > DEFAULT_TOLERANCE
    )
    sys.exit(EXIT_VIOLATION if summary.violated or defect_failed else EXIT_OK)


# =============================================================================
# COMMANDS
# =============================================================================

@click.group()
@click.version_option(__version__, prog_name="oscillab")
def cli() -> None:
    """Oscillating martingales, crossing counts and their bounds."""


@cli.command()
@run_options
@handle_errors
def simulate(as_json: bool, **options: Any) -> None:
    """Seeded Monte Carlo run with bound reports."""
    config = resolve(options)
    _finish_run(run_monte_carlo(config), config, as_json)


@cli.command()
@run_options
@handle_errors
def exact(as_json: bool, **options: Any) -> None:
    """Exact enumeration of every path up to the horizon."""
    config = resolve(options)
    _finish_run(run_exact(config), config, as_json)


@cli.command()
@run_options
@click.option("--depth", type=click.IntRange(min=1), help="Enumeration depth of the checks.")
@handle_errors
def verify(as_json: bool, depth: Optional[int], **options: Any) -> None:
    """Perpetual entropy, martingale property, schedule and round-trip checks."""
    config = resolve(options, depth=depth)
    process, measure = build_process(config)
    entropy = verify_perpetual_entropy(measure, ENTROPY_EPS, config.depth)
    report = verify_martingale(process, measure, config.depth, DEFAULT_TOLERANCE)
    result: Dict[str, Any] = {
        "entropy": entropy.to_dict(),
        "martingale": report.to_dict(),
    }
    passed = entropy.passed and report.passed
    if config.process.kind == "oscillator":
        problems = validate_schedule(config.schedule.build(), SCHEDULE_CHECK_LENGTH)
        round_trip = round_trip_defects(process, measure, config.depth)
        result["schedule_problems"] = problems
        result["round_trip"] = round_trip.to_dict()
        passed = passed and not problems and round_trip.passed(DEFAULT_TOLERANCE)
    result["passed"] = passed

    if as_json:
        click.echo(json.dumps(result, indent=2, sort_keys=True))
    else:
        table = Table(title=f"verify: {process.name} under {measure!r} to depth {config.depth}")
        table.add_column("check")
        table.add_column("result", justify="right")
        table.add_row("perpetual entropy", entropy.status.value)
        table.add_row("max one-step defect", f"{report.max_martingale_defect:.3e}")
        table.add_row("max |E[X_t] − X_0|", f"{report.max_expectation_defect:.3e}")
        table.add_row("min value", f"{report.min_value:.6g}")
        table.add_row("martingale", report.verdict.value)
        if "round_trip" in result:
            table.add_row("schedule problems", str(len(result["schedule_problems"])))
            table.add_row("round-trip defect", f"{result['round_trip']['max_ratio_defect']:.3e}")
            table.add_row("additivity defect", f"{result['round_trip']['max_semimeasure_defect']:.3e}")
        console.print(table)
    sys.exit(EXIT_OK if passed else EXIT_VIOLATION)


@cli.command()
@run_options
@click.option("--delta", type=float, default=0.2, show_default=True, help="δ of the gap comparison.")
@click.option("--k", type=click.IntRange(min=1), default=3, show_default=True, help="Upcrossing count k.")
@handle_errors
def bounds(as_json: bool, delta: float, k: int, **options: Any) -> None:
    """Every applicable bound against the configured process, plus the closed-form gaps.

    The tree is enumerated exactly when |Σ|^horizon fits the enumeration
    limit; otherwise the run falls back to Monte Carlo.
    """
    config = resolve(options)
    gap = summable_gap_example(delta, k)
    gaps = [doob_expectation_gap(m) for m in range(1, 6)]
    process, measure = build_process(config)
    try:
        check_enumeration(measure.alphabet, config.horizon)
    except EnumerationLimitError:
        logger.info("horizon %d is too deep to enumerate, sampling %d paths", config.horizon, config.trials)
        summary = run_monte_carlo(config, process, measure)
    else:
        summary = run_exact(config, process, measure)
    if config.out_dir is not None:
        emit_reports(summary, config.out_dir, tallies=config.tallies)

    if as_json:
        payload = {
            "gap_example": gap.to_dict(),
            "doob_gaps": [{"m": m, "lower": g.lower, "upper": g.upper, "ratio": g.ratio}
                          for m, g in enumerate(gaps, start=1)],
            "mode": summary.mode,
            "reports": [report.to_dict() for report in summary.reports],
            "violated": summary.violated,
        }
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        console.print(reports_table(summary))
        table = Table(title=f"E_{{k,k}} with δ={delta}, k={k}")
        for column in ("lower 1 − δ", "Dubins upper", "gap", "limit e^-δ"):
            table.add_column(column, justify="right")
        table.add_row(*(f"{v:.6f}" for v in (gap.lower, gap.upper, gap.gap, gap.limit)))
        console.print(table)
        table = Table(title="expected upcrossings at δ = 1/2")
        for column in ("m", "attainable m(1 − δ)", "Doob cap", "ratio"):
            table.add_column(column, justify="right")
        for m, g in enumerate(gaps, start=1):
            table.add_row(str(m), f"{g.lower:.4f}", f"{g.upper:.4f}", f"{g.ratio:.4f}")
        console.print(table)
    sys.exit(EXIT_VIOLATION if summary.violated else EXIT_OK)


@cli.command("mdl-demo")
@run_options
@click.option("--delta", type=float, default=0.2, show_default=True, help="δ of the finite schedule.")
@click.option("--m", "m", type=click.IntRange(min=0), default=3, show_default=True, help="Upcrossings per path.")
@handle_errors
def mdl_demo(as_json: bool, delta: float, m: int, **options: Any) -> None:
    """Fraction of paths on which MDL over {P, Q} keeps switching."""
    config = resolve(options)
    result = mdl_oscillation_experiment(
        config.measure.build(), delta, m, config.horizon, config.trials, config.seed,
        batch_size=config.batch_size, workers=config.workers,
    )
    if config.out_dir is not None:
        emit_mdl_reports(result, config.out_dir)
    summary = result.to_summary()
    if as_json:
        click.echo(json.dumps(summary, indent=2, sort_keys=True))
    else:
        table = Table(title=f"MDL flips under {config.measure.label()}")
        for key in ("fraction", "threshold", "slack", "min_flips", "trials", "horizon"):
            table.add_column(key, justify="right")
        table.add_row(
            f"{summary['fraction']:.4f}", str(summary["threshold"]), f"{summary['slack']:.3g}",
            str(summary["min_flips"]), str(summary["trials"]), str(summary["horizon"]),
        )
        console.print(table)
    sys.exit(EXIT_OK if result.passed else EXIT_VIOLATION)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
