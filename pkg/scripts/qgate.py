"""
Command-line front end for gate analysis.

Usage:
    python -m scripts.qgate analyze data/catalog/ccz.qgate
    python -m scripts.qgate generate n-k0 --n 4 --param alpha=1.0 --param beta=0.5
    python -m scripts.qgate classify-diag3 data/catalog/wstate_gate.qgate
    python -m scripts.qgate sweep t3-k2a --grid theta=0.1:6.1:12 --grid phi=0.2:6.2:12
    python -m scripts.qgate examples toffoli --out toffoli.qgate

Exit codes: 0 ok, 2 parse error or unknown name, 3 non-unitary input,
4 parameter outside the family domain, 5 invariant breach.
"""
import logging
import os
import sys

import click
import numpy as np
from dotenv import load_dotenv

from config import Config
from utils.catalog import get_example
from utils.constants import (
    CATALOG_NAMES,
    EXIT_DOMAIN,
    EXIT_INVARIANT,
    EXIT_NOT_UNITARY,
    EXIT_PARSE,
)
from utils.diag3 import classify_diag3, format_diag3_report
from utils.errors import (
    DimensionError,
    InternalInvariantViolation,
    NotDiagonalError,
    NotUnitaryError,
    ParamDomainError,
    QgateError,
    QgateParseError,
)
from utils.families import (
    FamilyId,
    FamilySpec,
    default_grid,
    expand_grid,
    generate as generate_family,
    grid_axis,
    k0_seed_points,
    param_ranges,
)
from utils.qgate import read_qgate, write_qgate
from utils.schmidt import classify, format_report
from utils.sweep import breaches, point_tasks, run_sweep, seed_tasks, write_sweep
from utils.utils import parse_grid, parse_param, parse_permutation

load_dotenv()

FAMILY_NAMES = [fid.value for fid in FamilyId]


def _banner(title: str):
    click.echo(click.style("=" * 70, fg='cyan', bold=True))
    click.echo(click.style(f"  {title}", fg='cyan', bold=True))
    click.echo(click.style("=" * 70, fg='cyan', bold=True))


def _fail(message: str, code: int):
    click.echo(click.style(f"Error: {message}", fg='red', bold=True), err=True)
    sys.exit(code)


def _exit_code(error: QgateError) -> int:
    if isinstance(error, NotUnitaryError):
        return EXIT_NOT_UNITARY
    if isinstance(error, ParamDomainError):
        return EXIT_DOMAIN
    if isinstance(error, InternalInvariantViolation):
        return EXIT_INVARIANT
    return EXIT_PARSE


def _read(path: str, tol: float):
    try:
        return read_qgate(path, tol)
    except (QgateParseError, DimensionError) as e:
        _fail(str(e), EXIT_PARSE)


@click.group()
@click.option('--tol', type=float, default=None, help='Numeric rank tolerance (relative).')
@click.option('--verbose', is_flag=True, help='Log library diagnostics.')
@click.pass_context
def cli(ctx, tol, verbose):
    """Analyze multipartite unitary gates."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    config = Config.load_config()
    if tol is not None:
        config['tol'] = tol
    if not 0 < config['tol'] < 1:
        _fail(f"tolerance must lie in (0, 1), got {config['tol']}", EXIT_PARSE)
    ctx.obj = config


@cli.command()
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def analyze(config, path):
    """Schmidt ranks, genuineness and singular number of a QGATE file."""
    U = _read(path, config['tol'])
    try:
        label = classify(U)
        click.echo(format_report(label))
        if U.dims == (2, 2, 2) and U.is_diagonal():
            click.echo(format_diag3_report(classify_diag3(U)))
    except QgateError as e:
        _fail(str(e), _exit_code(e))


@cli.command()
@click.argument('family', type=click.Choice(FAMILY_NAMES))
@click.option('--n', 'n', type=int, default=None, help='Party count (families n-*).')
@click.option('--param', 'params', multiple=True, help='name=value, repeatable.')
@click.option('--permute', default=None, help='1-based party order, e.g. 2,1,3.')
@click.option('--out', default=None, help='Output QGATE path.')
@click.pass_obj
def generate(config, family, n, params, permute, out):
    """Write a member of a canonical family as a QGATE file."""
    family_id = FamilyId.from_cli(family)
    n = n or (3 if family_id.three_qubit else 4)
    try:
        values = dict(parse_param(p) for p in params)
        perm = parse_permutation(permute, n) if permute else None
        gate = generate_family(FamilySpec(family_id, n, values, perm))
    except QgateError as e:
        _fail(str(e), _exit_code(e))

    out = out or Config.get_gate_file(family)
    comment = f"{family} n={n} " + ' '.join(f'{k}={v}' for k, v in values.items())
    write_qgate(gate.operator, out, comment)
    click.echo(click.style(f"✓ {family} (k={gate.k}) written to {out}", fg='green'))


@cli.command('classify-diag3')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def classify_diag3_cmd(config, path):
    """Canonical form and GHZ/W verdict of a three-qubit diagonal gate."""
    U = _read(path, config['tol'])
    try:
        click.echo(format_diag3_report(classify_diag3(U)))
    except (NotDiagonalError, DimensionError) as e:
        _fail(str(e), EXIT_PARSE)
    except QgateError as e:
        _fail(str(e), _exit_code(e))


@cli.command()
@click.argument('family', type=click.Choice(FAMILY_NAMES))
@click.option('--n', 'n', type=int, default=None, help='Party count (families n-*).')
@click.option('--grid', 'grids', multiple=True, help='name=lo:hi:steps, repeatable.')
@click.option('--param', 'params', multiple=True, help='Fixed name=value, repeatable.')
@click.option('--steps', type=int, default=None, help='Points per parameter for the default grid.')
@click.option('--seeds', type=int, default=None, help='Solver seeds (t3-k0).')
@click.option('--spread', type=float, default=None, help='Seed perturbation size (t3-k0).')
@click.option('--rng-seed', type=int, default=0, show_default=True)
@click.option('--workers', type=int, default=None, help='Worker processes.')
@click.option('--out-dir', default=None, help='Directory for the CSV summary.')
@click.pass_obj
def sweep(config, family, n, grids, params, steps, seeds, spread, rng_seed, workers, out_dir):
    """Generate and classify a family over a parameter grid."""
    family_id = FamilyId.from_cli(family)
    n = n or (3 if family_id.three_qubit else 4)
    workers = workers or config['workers']

    try:
        if family_id is FamilyId.T3_K0:
            rng = np.random.default_rng(rng_seed)
            count = seeds or config['k0_seeds']
            tasks = seed_tasks(k0_seed_points(count, spread or config['k0_spread'], rng))
        else:
            axes = dict(parse_grid(g) for g in grids)
            fixed = dict(parse_param(p) for p in params)
            if not axes and not fixed and family in config['grids'] and not steps:
                axes = {k: tuple(v) for k, v in config['grids'][family].items()}
            if axes or fixed:
                ranges = param_ranges(family_id, n)
                for name in ranges:
                    if name not in axes and name not in fixed:
                        lo, hi = ranges[name]
                        axes[name] = grid_axis(lo, hi, steps or config['sweep_steps'], Config.GRID_MARGIN)
                points = [dict(p, **fixed) for p in expand_grid(axes)]
            else:
                points = default_grid(family_id, n, steps or config['sweep_steps'])
            tasks = point_tasks(family_id, n, points)
    except QgateError as e:
        _fail(str(e), _exit_code(e))

    if not tasks:
        _fail(f"grid for {family} has no in-domain points", EXIT_PARSE)

    _banner(f"SWEEP {family} (n={n}, {len(tasks)} points)")
    df = run_sweep(tasks, workers)
    path = write_sweep(df, Config.get_sweep_file(family, out_dir))

    flagged = int(df['flagged'].sum())
    click.echo(click.style("  Rows:      ", fg='white', bold=True) + click.style(f"{len(df)}", fg='green'))
    click.echo(click.style("  Flagged:   ", fg='white', bold=True) +
               click.style(f"{flagged}", fg='yellow' if flagged else 'green'))
    click.echo(click.style("  Output:    ", fg='white', bold=True) + click.style(path, fg='magenta'))

    bad = breaches(df)
    if len(bad):
        _fail(f"{len(bad)} flagged rows exceed unitarity residual {Config.SWEEP_FLAG_RESIDUAL:g}",
              EXIT_INVARIANT)


@cli.command()
@click.argument('name')
@click.option('--out', default=None, help='Output QGATE path.')
def examples(name, out):
    """Write a built-in example gate."""
    if name not in CATALOG_NAMES:
        _fail(f"unknown example {name!r}; choose from {', '.join(CATALOG_NAMES)}", EXIT_PARSE)
    out = out or os.path.join(Config.GATES_DIR, f"{name.replace('-', '_')}.qgate")
    write_qgate(get_example(name), out, name)
    click.echo(click.style(f"✓ {name} written to {out}", fg='green'))


def main():
    cli()


if __name__ == '__main__':
    main()
