"""
Command-line interface.

Exit codes: 0 success, 1 failed verification, 2 configuration or input error,
3 solver non-convergence or incompatible Neumann data.
"""

import functools
import sys
from pathlib import Path
from typing import Optional, Tuple

import click
import pandas as pd
from pydantic import ValidationError

from config.settings import settings
from ..analysis.density import ArcSplit, density_experiment, density_sobolev_experiment
from ..coeff.coefficient import alpha_from_nu
from ..coeff.similarity import similarity_forward
from ..domains.transport import pde_residual_check, pullback_problem, pushforward_solution
from ..factor.factorization import factorize
from ..ops.area import beurling, cauchy_area, reflect_area
from ..ops.boundary import analytic_projection, cauchy_boundary, conjugation_h0
from ..solver.dirichlet import dirichlet_h, hilbert_nu_report
from ..solver.neumann import neumann
from ..solver.ode_oracle import RadialOracle
from ..utils.errors import CompatibilityError, ConfigurationError, ConvergenceError, GridError
from ..utils.logger import get_logger
from . import io
from .run_config import RunConfig
from .verify import CHECKS, VerifyContext, run_acceptance

logger = get_logger(__name__, settings.LOG_LEVEL)

EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
ORACLE_RADII = (0.3, 0.6, 0.9)


def guarded(command):
    """Map library errors to exit codes with a diagnostic on stderr."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (ConfigurationError, GridError, ValidationError, FileNotFoundError) as e:
            click.echo(f"configuration error: {e}", err=True)
            sys.exit(EXIT_CONFIG)
        except CompatibilityError as e:
            click.echo(f"incompatible data: {e}", err=True)
            sys.exit(EXIT_SOLVER)
        except ConvergenceError as e:
            click.echo(f"solver did not converge: {e}", err=True)
            sys.exit(EXIT_SOLVER)
        except Exception:
            logger.exception(f"{command.__name__}: unexpected failure")
            raise

    return wrapper


def _load(ctx: click.Context) -> RunConfig:
    options = ctx.obj
    overrides = list(options["overrides"])
    if options["threads"] is not None:
        overrides.append(f"threads={options['threads']}")
    if options["output_dir"] is not None:
        overrides.append(f"output_dir=\"{options['output_dir']}\"")
    return RunConfig.load(options["config"], overrides)


def _problem(run: RunConfig):
    grid, rule = run.build_grid()
    return grid, rule, run.coefficient.build(grid, rule), run.data.build(grid)


@click.group()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="JSON run configuration.")
@click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
              help="Override a config entry by dotted path, e.g. --set grid.n_theta=128.")
@click.option("--threads", type=int, default=None, envvar="BELTRAMI_LAB_THREADS",
              help="Worker cap for independent solves.")
@click.option("--output-dir", type=click.Path(path_type=Path), default=None)
@click.pass_context
def cli(ctx, config_path: Optional[Path], overrides: Tuple[str, ...], threads: Optional[int],
        output_dir: Optional[Path]):
    """Generalized Hardy space solvers on the unit disk."""
    ctx.obj = {"config": config_path, "overrides": overrides, "threads": threads, "output_dir": output_dir}


@cli.command()
@click.pass_context
@guarded
def solve(ctx):
    """
    Dirichlet problem Re tr f = phi.

    Writes field.csv (r, theta, re, im), trace.csv (theta, re, im) and
    report.json. With "oracle": true and a radial coefficient the report
    carries the ODE comparison of Re f. With a map other than the identity,
    nu and phi are read on psi(D), the problem is solved for the pulled-back
    data on the disk and omega.csv (x, y, re, im) holds the solution at the
    mapped nodes; the report records the PDE residual on psi(D).
    """
    run = _load(ctx)
    if run.map.kind == "identity":
        grid, rule, coef, phi = _problem(run)
        cmap = None
    else:
        grid, rule = run.build_grid()
        cmap = run.map.build()
        nu_text = run.coefficient.nu_on_omega()
        coef, phi = pullback_problem(cmap, nu_text, run.data.on_omega(), grid, rule)
    f, report = dirichlet_h(phi, coef, run.solver)
    if run.oracle and run.coefficient.kind == "radial":
        report.oracle = {"radial_ode": RadialOracle(run.coefficient.expression).compare(f.real(), phi, ORACLE_RADII)}
    out = run.output_dir
    if cmap is not None:
        report.diagnostics["map"] = {"spec": cmap.to_spec(),
                                     "pde_residual": pde_residual_check(cmap, nu_text, f.real())}
        io.write_table(pushforward_solution(cmap, f), out / "omega.csv")
    io.write_field_csv(f, out / "field.csv")
    io.write_trace_csv(f.boundary(), out / "trace.csv")
    io.write_report_json(report.to_dict(), out / "report.json")
    click.echo(f"solve: residual {report.residual:.3e}, outputs in {out}")


@cli.command()
@click.pass_context
@guarded
def hilbert(ctx):
    """Generalized conjugate function. Writes hilbert.csv (theta, value) and report.json."""
    run = _load(ctx)
    grid, rule, coef, phi = _problem(run)
    h, report = hilbert_nu_report(phi, coef, run.solver)
    out = run.output_dir
    io.write_table(pd.DataFrame({"theta": grid.theta, "value": h.samples()}), out / "hilbert.csv")
    io.write_report_json(report.to_dict(), out / "report.json")
    click.echo(f"hilbert: residual {report.residual:.3e}, outputs in {out}")


@cli.command(name="neumann")
@click.pass_context
@guarded
def neumann_command(ctx):
    """
    Neumann problem d_n u = g. Writes field.csv and trace.csv of u and report.json;
    exits 3 when (1/2pi) int sigma g does not vanish.
    """
    run = _load(ctx)
    grid, rule, coef, g = _problem(run)
    u, report = neumann(g, coef, run.solver)
    if run.oracle and run.coefficient.kind == "radial":
        report.oracle = {"radial_ode": RadialOracle(run.coefficient.expression).compare(u, g, ORACLE_RADII,
                                                                                         kind="neumann")}
    out = run.output_dir
    io.write_field_csv(u, out / "field.csv")
    io.write_trace_csv(u.boundary(), out / "trace.csv")
    io.write_report_json(report.to_dict(), out / "report.json")
    click.echo(f"neumann: residual {report.residual:.3e}, outputs in {out}")


@cli.command(name="factorize")
@click.pass_context
@guarded
def factorize_command(ctx):
    """
    Solve the Dirichlet problem, transform to w and factor w = exp(s) F.
    Writes s.csv and F.csv (field schema) and factorization.json.
    """
    run = _load(ctx)
    grid, rule, coef, phi = _problem(run)
    f, report = dirichlet_h(phi, coef, run.solver)
    w = similarity_forward(f, coef)
    result = factorize(w, alpha_from_nu(coef), run.variant, run.solver.holomorphy_threshold)
    out = run.output_dir
    io.write_field_csv(result.s, out / "s.csv")
    io.write_field_csv(result.F, out / "F.csv")
    io.write_report_json({"factorization": result.to_dict(), "solve": report.to_dict()},
                         out / "factorization.json")
    click.echo(f"factorize[{run.variant}]: {'certified' if result.passed else 'NOT certified'}, outputs in {out}")


@cli.command(name="density")
@click.pass_context
@guarded
def density_command(ctx):
    """Density experiment on the configured arcs. Writes density.csv (K, error_I, norm_J, c)."""
    run = _load(ctx)
    grid, rule = run.build_grid()
    coef = run.coefficient.build(grid, rule)
    split = ArcSplit.from_arcs(grid, run.density.arcs)
    experiment = density_sobolev_experiment if run.density.sobolev else density_experiment
    table = experiment(run.density.target_samples(grid), split, coef, run.solver,
                       schedule=run.density.schedule, threads=run.threads)
    out = run.output_dir
    io.write_table(table, out / "density.csv")
    click.echo(table.to_string(index=False))


@cli.command()
@click.option("--only", multiple=True, type=click.Choice(list(CHECKS)),
              help="Run only the named checks (repeatable).")
@click.pass_context
@guarded
def verify(ctx, only: Tuple[str, ...]):
    """Acceptance suite. Prints pass/fail JSON and exits 0 iff every check passes."""
    run = _load(ctx)
    grid, rule = run.build_grid()
    context = VerifyContext(grid, rule, run.solver, run.seed, run.threads)
    results = run_acceptance(context, only or None)
    payload = io.dumps_report(results)
    io.write_report_json(results, run.output_dir / "verify.json")
    click.echo(payload.decode())
    if not results["passed"]:
        sys.exit(EXIT_VERIFY_FAILED)


@cli.command()
@click.option("--name", type=click.Choice(["cauchy_boundary", "analytic_projection", "conjugation_h0",
                                           "hilbert_nu", "cauchy_area", "beurling", "reflect_area"]),
              default=None, help="Operator (defaults to op.name in the config).")
@click.option("--input", "input_path", type=click.Path(path_type=Path), default=None,
              help="Boundary CSV (theta, value | re, im) or field CSV (r, theta, re, im).")
@click.pass_context
@guarded
def op(ctx, name: Optional[str], input_path: Optional[Path]):
    """
    Apply one operator to CSV input and write op.csv.

    Boundary operators (analytic_projection, conjugation_h0, hilbert_nu) write
    (theta, re, im); cauchy_boundary and the area operators write the field schema.
    """
    run = _load(ctx)
    grid, rule = run.build_grid()
    name = name or run.op.name
    source = input_path or run.op.input
    out = run.output_dir / "op.csv"

    if name in ("cauchy_area", "beurling", "reflect_area"):
        if source is None:
            raise ConfigurationError(f"{name} needs a field CSV input")
        w = io.read_field_csv(source, grid, rule)
        image = {"cauchy_area": cauchy_area, "beurling": beurling}.get(name)
        result = image(w) if image else reflect_area(w, run.op.variant)
        io.write_field_csv(result, out)
    else:
        phi = io.read_boundary_csv(source, grid) if source is not None else run.data.build(grid)
        if name == "cauchy_boundary":
            io.write_field_csv(cauchy_boundary(phi, rule), out)
        elif name == "analytic_projection":
            io.write_trace_csv(analytic_projection(phi), out)
        elif name == "conjugation_h0":
            io.write_trace_csv(conjugation_h0(phi), out)
        else:
            coef = run.coefficient.build(grid, rule)
            h, _ = hilbert_nu_report(phi, coef, run.solver)
            io.write_trace_csv(h, out)
    click.echo(f"op {name}: wrote {out}")
