#!/usr/bin/env python3
"""
Lattice Toolkit Command Line
Runs one command per invocation and writes its report to stdout or --out.

Exit status: 0 all checks pass, 1 a mathematical check failed or was skipped (the
conjecture harness never fails), 2 bad input or usage, 3 resource limit hit.
"""

import argparse
import logging
import sys
from dataclasses import replace
from typing import Callable, Dict, List, Optional

import pandas as pd

from arithmetic import claim_a1_floors, jacobi_table
from bounds import BOUND_CSV_COLUMNS, bounds_table, verify_census_against_bounds
from config import DEFAULT_CONFIG, Config, setup_logging
from descriptor_handler import load_lattice
from enumeration import compute_census
from errors import LatticeToolkitError, ResourceLimitExceeded, SizeExceedsClassification, TailNotCertifiable
from report_export import FORMATS, CheckReport, render, summary_frame, to_csv, to_structured, write_output
from roots import COMPONENT_COLUMNS, dgs_membership_check, extract_root_system, verify_k2_theorem
from theta import THETA_CSV_COLUMNS, conjecture_test, gaussian_mass, tau_star, verify_corollary

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

CENSUS_METHODS = ('pruned', 'dp', 'oracle', 'convolved')
DEFAULT_CONJECTURE_TAUS = (0.25, 0.5, 1.0, 2.0, 4.0)


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got '{text}'")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', help='Write the report here instead of stdout.')
    common.add_argument('--format', choices=FORMATS, default='csv', help='Report format (default: csv).')
    common.add_argument('--node-limit', type=positive_int, dest='node_limit',
                        help=f'Enumeration node ceiling (default: {DEFAULT_CONFIG.node_limit}).')
    common.add_argument('--rm-constant', type=positive_float, dest='rm_constant',
                        help=f'C in tau = C log^2(2n) (default: {DEFAULT_CONFIG.rm_constant}).')
    common.add_argument('--workers', type=positive_int, help='Processes for enumeration and pair scans.')
    noise = common.add_mutually_exclusive_group()
    noise.add_argument('--verbose', action='store_true', help='Debug logging on stderr.')
    noise.add_argument('--quiet', action='store_true', help='Warnings and errors only.')

    parser = argparse.ArgumentParser(
        prog='lattice-toolkit',
        description='Exact short-vector counts and counting-bound checks for integral lattices.')
    sub = parser.add_subparsers(dest='command', required=True)

    census = sub.add_parser('census', parents=[common], help='Count lattice vectors by norm.')
    census.add_argument('--lattice', required=True, help='Lattice descriptor (JSON).')
    census.add_argument('--max-norm', type=positive_int, required=True, dest='max_norm')
    census.add_argument('--method', choices=CENSUS_METHODS, default='pruned')

    bounds = sub.add_parser('bounds', parents=[common],
                            help='Evaluate the bounds for (n, k), or check a lattice census against them.')
    bounds.add_argument('--lattice', help='Lattice descriptor (JSON); omit to tabulate with --n/--k.')
    bounds.add_argument('--max-norm', type=positive_int, dest='max_norm')
    bounds.add_argument('--method', choices=CENSUS_METHODS, default='pruned')
    bounds.add_argument('--n', type=positive_int, help='Rank for the bound table.')
    bounds.add_argument('--k', type=positive_int, help='Largest norm for the bound table.')

    verify = sub.add_parser('verify', parents=[common], help='Census, bounds, roots and the Gaussian mass corollary.')
    verify.add_argument('--lattice', required=True)
    verify.add_argument('--max-norm', type=positive_int, required=True, dest='max_norm')
    verify.add_argument('--method', choices=CENSUS_METHODS, default='pruned')

    theta = sub.add_parser('theta', parents=[common], help='Truncated Gaussian mass with certified tail.')
    theta.add_argument('--lattice', required=True)
    theta.add_argument('--tau', type=positive_float, action='append',
                       help='Gaussian parameter; repeatable (default: 2 log(2n)).')
    theta.add_argument('--max-norm', type=positive_int, dest='max_norm',
                       help=f'Truncation norm (default: {DEFAULT_CONFIG.default_truncation}).')

    jacobi = sub.add_parser('jacobi', parents=[common], help='Jacobi square counts against the Z^n series.')
    jacobi.add_argument('--k-max', type=positive_int, default=20, dest='k_max')

    roots = sub.add_parser('roots', parents=[common], help='Root-system decomposition and the k=2 bound.')
    roots.add_argument('--lattice', required=True)

    conjecture = sub.add_parser('conjecture', parents=[common],
                                help='EXPERIMENTAL: compare Gaussian mass with Z^n.')
    conjecture.add_argument('--lattice', required=True)
    conjecture.add_argument('--tau', type=positive_float, action='append')
    conjecture.add_argument('--max-norm', type=positive_int, dest='max_norm')
    return parser


def config_from_args(args: argparse.Namespace) -> Config:
    overrides = {
        name: getattr(args, name)
        for name in ('node_limit', 'rm_constant', 'workers')
        if getattr(args, name, None) is not None
    }
    return replace(DEFAULT_CONFIG, **overrides)


def _emit(args, frame: pd.DataFrame, payload) -> None:
    write_output(render(frame, payload, args.format), args.out)


def _sections(args, reports: List[CheckReport], frames: Dict[str, pd.DataFrame]) -> None:
    """CSV: one '# name status' header and table per report; structured: a list of reports."""
    if args.format == 'structured':
        write_output(to_structured({'reports': [r.to_dict() for r in reports]}), args.out)
        return
    parts = [to_csv(summary_frame(reports))]
    for report in reports:
        frame = frames.get(report.name, report.to_frame())
        parts.append(f"# {report.name} {report.status}\n" + to_csv(frame))
    write_output('\n'.join(parts), args.out)


def _exit_code(reports: List[CheckReport]) -> int:
    failed = [f'{r.name} ({r.status})' for r in reports if not r.experimental and not r.passed]
    if failed:
        logger.error(f"❌ Not verified: {', '.join(failed)}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_census(args, config: Config) -> int:
    lattice = load_lattice(args.lattice)
    census = compute_census(lattice, args.max_norm, args.method, config)
    _emit(args, census.to_frame(), census.to_dict() | {'lattice': lattice.name})
    return EXIT_OK


def _bound_check_report(report) -> CheckReport:
    wrapped = CheckReport(f'counting_bounds_{report.lattice_id}', rows=report.rows)
    wrapped.details['zn_exceeded_at'] = report.zn_exceeded_at
    wrapped.details['det_gram'] = report.det_gram
    return wrapped


def cmd_bounds(args, config: Config) -> int:
    if args.lattice:
        if args.max_norm is None:
            raise argparse.ArgumentTypeError('bounds --lattice needs --max-norm')
        lattice = load_lattice(args.lattice)
        census = compute_census(lattice, args.max_norm, args.method, config)
        report = verify_census_against_bounds(census, lattice.name, lattice.det_gram)
        _emit(args, report.to_frame(), report)
        return EXIT_OK if report.passed else EXIT_FAILED
    if args.n is None or args.k is None:
        raise argparse.ArgumentTypeError('bounds needs either --lattice/--max-norm or --n/--k')
    table = bounds_table(args.n, args.k, config.rm_constant)
    _emit(args, table, {'n': args.n, 'k_max': args.k, 'rows': table.to_dict(orient='records')})
    return EXIT_OK


def cmd_verify(args, config: Config) -> int:
    lattice = load_lattice(args.lattice)
    census = compute_census(lattice, args.max_norm, args.method, config)
    bound_report = verify_census_against_bounds(census, lattice.name, lattice.det_gram)
    bounds_check = _bound_check_report(bound_report)
    reports = [bounds_check, verify_k2_theorem(lattice, config)]
    for k in range(1, min(2, args.max_norm) + 1):
        reports.append(dgs_membership_check(lattice, k, config=config))
    try:
        reports.append(verify_corollary(lattice, args.max_norm, census, config))
    except TailNotCertifiable as exc:
        logger.warning(f"Gaussian mass corollary skipped: {exc}")
        skipped = CheckReport(f'gaussian_mass_corollary_{lattice.name}')
        skipped.add_row(lattice=lattice.name, n=lattice.n, reason=str(exc), verdict='SKIPPED')
        reports.append(skipped)
    frames = {bounds_check.name: bound_report.to_frame(full=True).reindex(
        columns=BOUND_CSV_COLUMNS + ['sphere_tight', 'ball_tight'])}
    _sections(args, reports, frames)
    return _exit_code(reports)


def cmd_theta(args, config: Config) -> int:
    lattice = load_lattice(args.lattice)
    truncation = args.max_norm or config.default_truncation
    taus = args.tau or [tau_star(lattice.n)]
    census = compute_census(lattice, truncation, 'pruned', config)
    rows = [gaussian_mass(lattice, tau, truncation, census, config).to_dict() for tau in taus]
    frame = pd.DataFrame(rows).reindex(columns=['tau', 'partial_mass', 'tail_upper', 'certified'])
    _emit(args, frame, {'lattice': lattice.name, 'truncation': truncation, 'rows': rows})
    return EXIT_OK


def cmd_jacobi(args, config: Config) -> int:
    table = jacobi_table(args.k_max)
    floors = CheckReport('square_count_floors')
    for k in range(1, args.k_max + 1):
        floors.rows.extend(claim_a1_floors(k).rows)
    if args.format == 'structured':
        write_output(to_structured({'reports': [table.to_dict(), floors.to_dict()]}), args.out)
    else:
        frame = table.to_frame(['k', 'r4', 'r6', 'r8', 'census_match']).astype({'r4': 'Int64'})
        write_output(to_csv(frame), args.out)
    return _exit_code([table, floors])


def cmd_roots(args, config: Config) -> int:
    lattice = load_lattice(args.lattice)
    decomposition = extract_root_system(lattice, config)
    report = verify_k2_theorem(lattice, config, decomposition)
    d = report.details
    if args.format == 'structured':
        write_output(to_structured({'decomposition': decomposition.to_dict(), 'report': report.to_dict()}), args.out)
    else:
        verdict = f"# N2={d['N2']} f(n)+1={d['f'] + 1} verdict={report.status} tight={d['tight']}\n"
        write_output(to_csv(decomposition.to_frame().reindex(columns=COMPONENT_COLUMNS)) + verdict, args.out)
    return _exit_code([report])


def cmd_conjecture(args, config: Config) -> int:
    lattice = load_lattice(args.lattice)
    truncation = args.max_norm or config.default_truncation
    report = conjecture_test(lattice, args.tau or DEFAULT_CONJECTURE_TAUS, truncation, config=config)
    _emit(args, report.to_frame(THETA_CSV_COLUMNS), report)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, Config], int]] = {
    'census': cmd_census,
    'bounds': cmd_bounds,
    'verify': cmd_verify,
    'theta': cmd_theta,
    'jacobi': cmd_jacobi,
    'roots': cmd_roots,
    'conjecture': cmd_conjecture,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    setup_logging(level)
    config = config_from_args(args)

    try:
        return COMMANDS[args.command](args, config)
    except ResourceLimitExceeded as exc:
        logger.error(f"❌ Resource limit: {exc}")
        return EXIT_RESOURCE
    except SizeExceedsClassification as exc:
        logger.error(f"❌ Classification bound broken (implementation bug): {exc}")
        return EXIT_FAILED
    except (LatticeToolkitError, argparse.ArgumentTypeError, ValueError, OSError) as exc:
        logger.error(f"❌ {type(exc).__name__}: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
