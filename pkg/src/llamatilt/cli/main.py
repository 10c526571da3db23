#!/usr/bin/env python3
"""
Command-line interface (CLI) for LlamaTilt.

This module provides the main entry point for the LlamaTilt command-line
interface. Every subcommand parses exact inputs, calls the library and
writes a report envelope to stdout (or --output). Exit status 0 means the
computation ran, whatever its mathematical verdict; status 2 means the
inputs were rejected, with a JSON error object on stdout.
"""

import sys
import argparse
import logging
from pathlib import Path
from typing import Callable, Dict, List, NoReturn, Optional

from llamatilt import __version__
from llamatilt.chern import (
    ChernVector,
    CurveData,
    PolarizedGeometry,
    TiltParameter,
    from_chern_classes,
    line_bundle,
    shift,
    to_chern_classes,
)
from llamatilt.criteria import (
    ideal_sheaf_twist_report,
    line_bundle_thresholds,
    p3_family_report,
    points_ideal_phase_one_report,
    two_c_stability_check,
)
from llamatilt.jobfile import BOOLEAN_FIELDS, FIELD_PARSERS, JobfileError, JobSpec, load_jobfile
from llamatilt.report import FORMATS, ReportEnvelope, canonical_json, emit, error_object
from llamatilt.search import SearchBounds, case_split_2c, destabilizer_search
from llamatilt.tilt import (
    BmtForm,
    bmt_check,
    central_charge,
    discriminant_delta,
    discriminant_delta_bar,
    omega_delta_volume,
    phase_one_indicator,
    positivity_check,
    slope_mu,
    slope_nu_hat,
    tilt_slope_numerator,
    twisted,
)
from llamatilt.utils import (
    LlamaTiltError,
    ParseError,
    default_workers,
    ensure_directory,
    parse_integer,
    parse_rational,
)
from llamatilt.walls import wall_equation, wall_sample

# Set up module-level logger
logger = logging.getLogger(__name__)

__all__ = ['main', 'cli_app']

DEFAULTS = {
    "format": "json",
    "beta": "0",
    "D": "1",
    "lattice": "1,1,2,6",
    "form": "strong",
    "rank_bound": "4",
    "ch2_bound": "4",
    "count": "5",
    "length": "0",
}

PIC_ASSUMPTION = "Pic(X) = ZH"


def set_up_logging(verbose: bool = False) -> None:
    """Configure logging based on verbosity level.

    Args:
        verbose: If True, set logging level to DEBUG, otherwise INFO.
    """
    log_level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=log_level,
        format='%(asctime)s [%(levelname)s] %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )


class TiltArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports rejected arguments as ParseError.

    Option prefixes are never expanded, so ``--v`` cannot be read as
    ``--verbose`` or ``--version``.
    """

    def __init__(self, *args, **kwargs) -> None:
        kwargs.setdefault('allow_abbrev', False)
        super().__init__(*args, **kwargs)

    def error(self, message: str) -> NoReturn:
        raise ParseError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, help='Output format (default: json)')
    common.add_argument('--output', type=str, help='Output file path (defaults to stdout)')
    common.add_argument('--jobfile', type=str, help='Job file supplying defaults for every option')
    common.add_argument('--D', dest='D', type=str, help='Degree H^3 of the polarization (default: 1)')
    common.add_argument(
        '--lattice',
        type=str,
        help='Lattice denominators q0,q1,q2,q3 (default: 1,1,2,6)'
    )
    return common


def _tilt_options() -> argparse.ArgumentParser:
    tilt = argparse.ArgumentParser(add_help=False)
    tilt.add_argument('--alpha-sq', dest='alpha_sq', type=str, help='alpha^2 with omega = alpha H')
    tilt.add_argument('--beta', type=str, help='beta with B = beta H (default: 0)')
    return tilt


def _vector_options() -> argparse.ArgumentParser:
    vector = argparse.ArgumentParser(add_help=False)
    vector.add_argument(
        '--v',
        type=str,
        help='Chern vector v0,v1,v2,v3 of exact rationals (write --v=-1,... for a negative first entry)'
    )
    return vector


def create_parser() -> argparse.ArgumentParser:
    """Create the command-line argument parser.

    Returns:
        An ArgumentParser object with all arguments defined.
    """
    parser = TiltArgumentParser(
        description='LlamaTilt - exact tilt-stability invariants on Picard rank one threefolds.'
    )

    # Global arguments
    parser.add_argument(
        '-v', '--verbose',
        action='store_true',
        help='Enable verbose output'
    )
    parser.add_argument(
        '--version',
        action='store_true',
        help='Show version information and exit'
    )

    subparsers = parser.add_subparsers(
        title='commands',
        dest='command',
        help='Command to execute'
    )
    common, tilt, vector = _common_options(), _tilt_options(), _vector_options()

    subparsers.add_parser('slope', parents=[common, tilt, vector], help='Slopes mu and nu_hat')
    subparsers.add_parser('charge', parents=[common, tilt, vector], help='Central charge and phase one test')
    subparsers.add_parser('discriminant', parents=[common, tilt, vector], help='Delta and Delta_bar')

    bmt_parser = subparsers.add_parser('bmt', parents=[common, tilt, vector], help='ch_3 inequality')
    bmt_parser.add_argument('--form', choices=[f.value for f in BmtForm], help='Strong or weak form')

    line_parser = subparsers.add_parser(
        'line-bundle',
        parents=[common, tilt],
        help='Stability thresholds of O(k)[1], k < 0'
    )
    line_parser.add_argument('--k', type=str, help='Twist k of O(kH)')
    line_parser.add_argument('--m-sq', dest='m_sq', type=str, help='Test stability at this m^2')

    two_c_parser = subparsers.add_parser(
        'two-c',
        parents=[common, tilt, vector],
        help='Criteria for omega^2 tch_1 = 2c'
    )
    two_c_parser.add_argument('--mu-max', dest='mu_max', type=str, help='Maximal mu-slope of the HN filtration')
    two_c_parser.add_argument('--mu-max-sq', dest='mu_max_sq', type=str, help='Square of the maximal mu-slope')

    ideal_parser = subparsers.add_parser('ideal-sheaf', parents=[common], help='Report on L^2 (x) I_C')
    ideal_parser.add_argument('--d', type=str, help='Degree of the curve')
    ideal_parser.add_argument('--ch3-oc', dest='ch3_oc', type=str, help='ch_3(O_C)')
    ideal_parser.add_argument('--genus', type=str, help='Arithmetic genus of the curve')
    ideal_parser.add_argument(
        '--hypersurface',
        action='store_true',
        default=None,
        help='The threefold is a hypersurface in P^4'
    )

    family_parser = subparsers.add_parser('p3-family', parents=[common], help='Tilt-unstable family on P^3')
    family_parser.add_argument('--n', type=str, help='Twist n')
    family_parser.add_argument('--m', type=str, help='Scale m of omega')

    search_parser = subparsers.add_parser(
        'search',
        parents=[common, tilt, vector],
        help='Numerical destabilizer candidates'
    )
    search_parser.add_argument('--rank-bound', dest='rank_bound', type=str, help='Bound on |w0| (default: 4)')
    search_parser.add_argument('--ch2-bound', dest='ch2_bound', type=str, help='Bound on |w2| (default: 4)')
    search_parser.add_argument(
        '--no-quotient-check',
        dest='no_quotient_check',
        action='store_true',
        default=None,
        help='Do not test the quotient'
    )
    search_parser.add_argument('--prune', action='store_true', default=None, help='Prune by the slope bound')
    search_parser.add_argument(
        '--case-split',
        dest='case_split',
        action='store_true',
        default=None,
        help='Split candidates by omega^2 tch_1 in {0, c, 2c}'
    )
    search_parser.add_argument('--workers', type=str, help='Worker processes (default: $LLAMATILT_WORKERS or 1)')

    wall_parser = subparsers.add_parser('wall', parents=[common, vector], help='Wall of v against w')
    wall_parser.add_argument('--w', type=str, help='Second Chern vector w0,w1,w2,w3')
    wall_parser.add_argument('--beta-min', dest='beta_min', type=str, help='Lower end of the beta range')
    wall_parser.add_argument('--beta-max', dest='beta_max', type=str, help='Upper end of the beta range')
    wall_parser.add_argument('--count', type=str, help='Number of beta samples (default: 5)')

    points_parser = subparsers.add_parser(
        'points-ideal',
        parents=[common],
        help='Phase one test for twisted ideal sheaves of points'
    )
    points_parser.add_argument('--ell', type=str, help='Twist by O(ell H)')
    points_parser.add_argument('--length', type=str, help='Length of the subscheme (default: 0)')

    convert_parser = subparsers.add_parser(
        'convert',
        parents=[common, vector],
        help='Convert between Chern classes and the Chern character'
    )
    convert_parser.add_argument('--rank', type=str, help='Rank (0..3)')
    convert_parser.add_argument('--c1', type=str, help='c_1')
    convert_parser.add_argument('--c2', type=str, help='c_2')
    convert_parser.add_argument('--c3', type=str, help='c_3')

    run_parser = subparsers.add_parser('run', help='Run the job described by a job file')
    run_parser.add_argument('path', type=str, help='Job file')
    run_parser.add_argument('--format', choices=FORMATS, help='Output format')
    run_parser.add_argument('--output', type=str, help='Output file path (defaults to stdout)')

    return parser


def show_version() -> None:
    """Display version information for LlamaTilt and its dependencies."""
    import platform
    import pandas
    import sympy

    print(f"LlamaTilt version: {__version__}")
    print(f"Python version: {platform.python_version()}")
    print(f"Platform: {platform.platform()}")
    print(f"sympy version: {sympy.__version__}")
    print(f"pandas version: {pandas.__version__}")


def merge_jobfile(args: argparse.Namespace) -> JobSpec:
    """Fill options not given on the command line from --jobfile, then defaults.

    Returns:
        The merged job.

    Raises:
        JobfileError: If the job file names a different command.
    """
    source = None
    if getattr(args, 'jobfile', None):
        job = load_jobfile(args.jobfile)
        source = job.source
        if job.command is not None and job.command != args.command:
            raise JobfileError(
                f"Job file is for '{job.command}', not '{args.command}'",
                field="command"
            )
        for key, value in job.values.items():
            if key == "command" or getattr(args, key, None) is not None:
                continue
            setattr(args, key, FIELD_PARSERS[key](value, key) if key in BOOLEAN_FIELDS else value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key in BOOLEAN_FIELDS:
        if getattr(args, key, None) is None:
            setattr(args, key, False)
    return JobSpec.from_options(args.command, vars(args), source)


def _require(args: argparse.Namespace, name: str) -> str:
    value = getattr(args, name, None)
    if value is None:
        raise ParseError(f"Missing required field '{name}'", field=name)
    return value


def _optional_rational(args: argparse.Namespace, name: str):
    value = getattr(args, name, None)
    return None if value is None else parse_rational(value, name)


def _job(args: argparse.Namespace) -> JobSpec:
    return JobSpec.from_options(args.command, vars(args))


def _geometry(args: argparse.Namespace) -> PolarizedGeometry:
    return _job(args).geometry


def _parameter(args: argparse.Namespace) -> TiltParameter:
    _require(args, "alpha_sq")
    return _job(args).parameter


def _vector(args: argparse.Namespace, name: str = "v") -> ChernVector:
    return ChernVector.parse(_require(args, name), name)


def _geometry_inputs(geom: PolarizedGeometry) -> Dict[str, object]:
    return {"D": geom.degree_D, "lattice": ",".join(str(q) for q in geom.lattice_denoms)}


def _tilt_inputs(geom: PolarizedGeometry, p: TiltParameter) -> Dict[str, object]:
    inputs = _geometry_inputs(geom)
    inputs.update({"alpha_sq": p.alpha_sq, "beta": p.beta})
    return inputs


def handle_slope_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'slope' command."""
    geom, p, v = _geometry(args), _parameter(args), _vector(args)
    return ReportEnvelope.build(
        "slope",
        {**_tilt_inputs(geom, p), "v": v},
        {
            "twisted": twisted(v, p),
            "mu": slope_mu(v, p, geom),
            "nu_hat": slope_nu_hat(v, p, geom),
            "nu_hat_numerator": tilt_slope_numerator(v, p),
        },
        assumptions=[PIC_ASSUMPTION, "nu_hat = alpha * nu"],
        propositions=["slope functions mu and nu"],
    )


def handle_charge_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'charge' command."""
    geom, p, v = _geometry(args), _parameter(args), _vector(args)
    z = central_charge(v, p, geom)
    return ReportEnvelope.build(
        "charge",
        {**_tilt_inputs(geom, p), "v": v},
        {"re": z.re, "im_coef": z.im_coef, "phase_one": phase_one_indicator(v, p, geom)},
        assumptions=[PIC_ASSUMPTION, "Im Z = alpha * im_coef"],
        propositions=["central charge"],
    )


def handle_discriminant_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'discriminant' command."""
    geom, p, v = _geometry(args), _parameter(args), _vector(args)
    positivity = positivity_check(v, p, geom)
    return ReportEnvelope.build(
        "discriminant",
        {**_tilt_inputs(geom, p), "v": v},
        {
            "delta_coefficient": discriminant_delta(v, p, geom),
            "delta_bar": discriminant_delta_bar(v, p, geom),
            "omega_delta_volume": omega_delta_volume(v, p, geom),
            "delta_bar_ok": positivity.delta_bar_ok,
        },
        assumptions=[PIC_ASSUMPTION, "omega.Delta = alpha * delta_coefficient"],
        propositions=["Bogomolov inequality for tilt-semistable objects"],
    )


def handle_bmt_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'bmt' command."""
    geom, p, v = _geometry(args), _parameter(args), _vector(args)
    result = bmt_check(v, p, geom, BmtForm(args.form))
    return ReportEnvelope.build(
        "bmt",
        {**_tilt_inputs(geom, p), "v": v, "form": args.form},
        {
            "satisfied": result.satisfied,
            "margin": result.margin,
            "nu_hat_zero": result.nu_hat_zero,
            "checked": result.checked,
        },
        assumptions=[PIC_ASSUMPTION, *result.assumed],
        propositions=[f"ch_3 inequality ({result.form.value} form)"],
    )


def handle_line_bundle_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'line-bundle' command."""
    geom = _geometry(args)
    if args.alpha_sq is None:
        args.alpha_sq = "1"
    p = _parameter(args)
    k = parse_rational(_require(args, "k"), "k")
    thresholds = line_bundle_thresholds(k, p, geom)
    shifted = shift(line_bundle(k), 1)
    at_nu_zero = p.with_alpha_sq(thresholds.m_sq_nu_zero * p.alpha_sq)
    strong = bmt_check(shifted, at_nu_zero, geom, BmtForm.STRONG)
    weak = bmt_check(shifted, at_nu_zero, geom, BmtForm.WEAK)
    results = {
        "thresholds": thresholds,
        "chern": shifted,
        "stable_at_nu_zero": thresholds.stable_at(thresholds.m_sq_nu_zero),
        "nu_hat_at_nu_zero": slope_nu_hat(shifted, at_nu_zero, geom),
        "strong_margin_at_nu_zero": strong.margin,
        "weak_satisfied_at_nu_zero": weak.satisfied,
    }
    m_sq = _optional_rational(args, "m_sq")
    inputs = {**_tilt_inputs(geom, p), "k": k}
    if m_sq is not None:
        inputs["m_sq"] = m_sq
        results["stable_at_m_sq"] = thresholds.stable_at(m_sq)
    return ReportEnvelope.build(
        "line-bundle",
        inputs,
        results,
        assumptions=[PIC_ASSUMPTION, "B = 0", "c_1(E).omega^2 < 0"],
        propositions=["line bundle stability thresholds"],
    )


def handle_two_c_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'two-c' command."""
    geom, p, v = _geometry(args), _parameter(args), _vector(args)
    mu_max, mu_max_sq = _optional_rational(args, "mu_max"), _optional_rational(args, "mu_max_sq")
    report = two_c_stability_check(v, p, geom, mu_max_sq=mu_max_sq, mu_max=mu_max)
    warnings = [] if report.preconditions_ok else ["preconditions fail; criteria do not apply"]
    assumptions = [PIC_ASSUMPTION, "integral lattice for c"]
    if report.criterion1 is not None:
        assumptions.append("supplied maximal mu-slope is that of the HN filtration")
    inputs = {**_tilt_inputs(geom, p), "v": v}
    if mu_max is not None:
        inputs["mu_max"] = mu_max
    if mu_max_sq is not None:
        inputs["mu_max_sq"] = mu_max_sq
    return ReportEnvelope.build(
        "two-c",
        inputs,
        report,
        assumptions=assumptions,
        warnings=warnings,
        propositions=["criteria for twice the minimal omega^2 tch_1"],
    )


def handle_ideal_sheaf_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'ideal-sheaf' command."""
    geom = _geometry(args)
    d = parse_rational(_require(args, "d"), "d")
    genus = None if args.genus is None else parse_integer(args.genus, "genus")
    if args.ch3_oc is None:
        if genus is None or not args.hypersurface:
            raise ParseError("Missing required field 'ch3_oc'", field="ch3_oc")
        curve = CurveData.on_hypersurface(d, genus, geom)
    else:
        curve = CurveData(d, parse_rational(args.ch3_oc, "ch3_oc"), genus)
    report = ideal_sheaf_twist_report(curve, geom, hypersurface_in_P4=args.hypersurface)
    inputs = {**_geometry_inputs(geom), "d": d, "ch3_oc": curve.ch3_OC, "hypersurface": args.hypersurface}
    if genus is not None:
        inputs["genus"] = genus
    warnings = []
    if report.stability == "unknown":
        warnings.append("3D/2 <= d < 2D: stability is not decided by the available criteria")
    return ReportEnvelope.build(
        "ideal-sheaf",
        inputs,
        report,
        assumptions=[PIC_ASSUMPTION, "L = O(H)", "B = 0"],
        warnings=warnings,
        propositions=["twisted ideal sheaves of curves"],
    )


def handle_p3_family_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'p3-family' command."""
    n, m = parse_integer(_require(args, "n"), "n"), parse_integer(_require(args, "m"), "m")
    report = p3_family_report(n, m)
    rows = [
        {
            "n": member.n,
            "m": member.m,
            "c2": member.c2,
            "c3": member.c3,
            "ch0": member.chern_F.v0,
            "ch1": member.chern_F.v1,
            "ch2": member.chern_F.v2,
            "ch3": member.chern_F.v3,
            "nu_zero": member.nu_zero_verified,
            "bmt_violated": member.bmt_violated,
            "bmt_margin": member.bmt_margin,
            "within_displayed_bound": member.within_displayed_bound,
        }
        for member in report.members
    ]
    warnings = []
    if report.discrepancy:
        warnings.append(
            f"closed-form bound c3 < {report.bounds.displayed_upper} selects "
            f"{len(report.displayed_c3)} values, direct evaluation selects {len(report.members)}"
        )
    return ReportEnvelope.build(
        "p3-family",
        {"n": n, "m": m},
        {
            "bounds": report.bounds,
            "discrepancy": report.discrepancy,
            "displayed_c3": report.displayed_c3,
            "derived_c3": report.derived_c3,
            "rows": rows,
        },
        assumptions=["X = P^3, D = 1", "omega = m H, B = 0", "ch_3 inequality holds on P^3"],
        warnings=warnings,
        propositions=["tilt-unstable rank three family on P^3", "reflexive sheaf existence box"],
    )


def _workers(args: argparse.Namespace) -> int:
    return default_workers() if args.workers is None else parse_integer(args.workers, "workers")


def handle_search_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'search' command."""
    geom, p, v = _geometry(args), _parameter(args), _vector(args)
    bounds = SearchBounds(
        parse_integer(args.rank_bound, "rank_bound"),
        parse_rational(args.ch2_bound, "ch2_bound"),
    )
    check_quotient = not args.no_quotient_check
    result = destabilizer_search(
        v, p, geom, bounds,
        check_quotient=check_quotient,
        prune=args.prune,
        workers=_workers(args)
    )
    rows = [
        {
            "w0": candidate.w.v0,
            "w1": candidate.w.v1,
            "w2": candidate.w.v2,
            "nu_hat": candidate.nu_hat_w,
            "strict": candidate.strict,
            "sub_delta_bar": candidate.sub_delta_bar,
            "quotient_delta_bar": candidate.quotient_delta_bar,
        }
        for candidate in result.all_candidates()
    ]
    results = {
        "nu_hat_v": result.nu_hat_v,
        "strict_count": len(result.strict),
        "equal_count": len(result.equal),
        "infinite_slope_count": len(result.infinite_slope),
        "rows": rows,
    }
    if args.case_split:
        split = case_split_2c(v, p, geom, bounds, check_quotient=check_quotient)
        results["c"] = split.c
        results["cases"] = {
            label: [str(candidate.w) for candidate in items]
            for label, items in split.buckets.items()
        }
    return ReportEnvelope.build(
        "search",
        {
            **_tilt_inputs(geom, p),
            "v": v,
            "rank_bound": bounds.rank_bound,
            "ch2_bound": bounds.ch2_bound,
            "check_quotient": check_quotient,
            "prune": args.prune,
        },
        results,
        assumptions=[
            PIC_ASSUMPTION,
            "candidates are numerical; sub-objects are not constructed",
            "completeness only inside the search box",
        ],
        propositions=["Bogomolov inequality for tilt-semistable objects"],
    )


def handle_wall_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'wall' command."""
    geom, v, w = _geometry(args), _vector(args), _vector(args, "w")
    beta_min = parse_rational(_require(args, "beta_min"), "beta_min")
    beta_max = parse_rational(_require(args, "beta_max"), "beta_max")
    count = parse_integer(args.count, "count")
    eq = wall_equation(v, w, geom)
    rows = []
    for point in wall_sample(eq, beta_min, beta_max, count):
        rows.append({"beta": point.beta, "alpha_sq": "any" if point.vertical else point.alpha_sq})
    return ReportEnvelope.build(
        "wall",
        {**_geometry_inputs(geom), "v": v, "w": w, "beta_min": beta_min, "beta_max": beta_max, "count": count},
        {
            "equation": str(eq),
            "terms": [{"A": monom[0], "beta": monom[1], "coefficient": coeff} for monom, coeff in eq.terms()],
            "vertical": eq.vertical,
            "rows": rows,
        },
        assumptions=["numerical wall; not certified as an actual wall"],
        propositions=["tilt slope comparison"],
    )


def handle_points_ideal_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'points-ideal' command."""
    geom = _geometry(args)
    ell = parse_rational(_require(args, "ell"), "ell")
    length = parse_rational(args.length, "length")
    report = points_ideal_phase_one_report(ell, length, geom)
    return ReportEnvelope.build(
        "points-ideal",
        {**_geometry_inputs(geom), "ell": ell, "length": length},
        report,
        assumptions=[PIC_ASSUMPTION, "B = 0", "I_Z (x) O(ell H) is tilt-stable"],
        propositions=["derived duals of twisted ideal sheaves of points"],
    )


def handle_convert_command(args: argparse.Namespace) -> ReportEnvelope:
    """Handle the 'convert' command."""
    geom = _geometry(args)
    if args.v is not None:
        v = _vector(args)
        rank, c1, c2, c3 = to_chern_classes(v)
        return ReportEnvelope.build(
            "convert",
            {**_geometry_inputs(geom), "v": v},
            {"rank": rank, "c1": c1, "c2": c2, "c3": c3},
        )
    rank = parse_integer(_require(args, "rank"), "rank")
    classes = [parse_rational(_require(args, name), name) for name in ("c1", "c2", "c3")]
    v = from_chern_classes(rank, *classes, geom=geom)
    return ReportEnvelope.build(
        "convert",
        {**_geometry_inputs(geom), "rank": rank, "c1": classes[0], "c2": classes[1], "c3": classes[2]},
        {"v": v},
    )


HANDLERS: Dict[str, Callable[[argparse.Namespace], ReportEnvelope]] = {
    "slope": handle_slope_command,
    "charge": handle_charge_command,
    "discriminant": handle_discriminant_command,
    "bmt": handle_bmt_command,
    "line-bundle": handle_line_bundle_command,
    "two-c": handle_two_c_command,
    "ideal-sheaf": handle_ideal_sheaf_command,
    "p3-family": handle_p3_family_command,
    "search": handle_search_command,
    "wall": handle_wall_command,
    "points-ideal": handle_points_ideal_command,
    "convert": handle_convert_command,
}


def _write(content: str, output: Optional[str]) -> None:
    if output:
        output_path = Path(output)
        ensure_directory(output_path.parent)
        output_path.write_text(content, encoding='utf-8')
        logger.info(f"Report written to {output_path}")
    else:
        sys.stdout.write(content)


def handle_run_command(args: argparse.Namespace) -> int:
    """Handle the 'run' command by dispatching to the job's subcommand."""
    try:
        job = load_jobfile(args.path)
        if job.command is None:
            raise JobfileError("Job file has no 'command' entry", path=job.source, field="command")
    except LlamaTiltError as e:
        logger.error(f"Error reading job file: {e}")
        _write(canonical_json(error_object(e)), None)
        return 2
    argv = [job.command, '--jobfile', str(job.source)]
    if args.format:
        argv += ['--format', args.format]
    if args.output:
        argv += ['--output', args.output]
    return cli_app(argv)


def run_command(args: argparse.Namespace) -> int:
    """Run one subcommand and write its report.

    Returns:
        0 on success, 2 when the inputs are rejected.
    """
    try:
        job = merge_jobfile(args)
        logger.debug(f"Running '{job.command}' with {job.payload}")
        report = HANDLERS[args.command](args)
        _write(emit(report, args.format), args.output)
        return 0
    except LlamaTiltError as e:
        logger.error(f"Error in '{args.command}': {e}")
        _write(canonical_json(error_object(e)), None)
        return 2


def cli_app(args: Optional[List[str]] = None) -> int:
    """Execute the CLI application.

    Args:
        args: Command line arguments (if None, sys.argv is used)

    Returns:
        Exit code (0 for success, non-zero for failure)
    """
    parser = create_parser()
    try:
        parsed_args = parser.parse_args(args)
    except ParseError as e:
        logger.error(f"Rejected arguments: {e}")
        _write(canonical_json(error_object(e)), None)
        return 2

    # Set up logging
    set_up_logging(parsed_args.verbose)

    # Show version and exit if requested
    if parsed_args.version:
        show_version()
        return 0

    if parsed_args.command == 'run':
        return handle_run_command(parsed_args)
    if parsed_args.command in HANDLERS:
        return run_command(parsed_args)
    parser.print_help()
    return 1


def main() -> None:
    """Main entry point for the CLI application."""
    try:
        exit_code = cli_app()
        sys.exit(exit_code)
    except Exception as e:
        logger.error(f"Unhandled exception: {e}", exc_info=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
