"""Command line entry point.

Exit status: 0 when every check passes, 1 when a check fails, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigurationError, DomainError, EvaluationError
from .experiment import (compare_means, emit_report, format_compare_summary, format_kernel_check,
                         format_summary, kernel_check, load_config, report_passed,
                         run_rate_experiment, theorem_ratio_check)
from .fourier import compute_spectrum, format_spectrum_table
from .norms import modulus_validate, parse_modulus
from .periodic import DEFAULT_SEED, Grid2D, parse_corpus, sample

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _write(text: str, output):
    if output is None:
        sys.stdout.write(text)
    else:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def cmd_rate(args) -> int:
    cfg = load_config(args.config)
    report = run_rate_experiment(cfg)
    csv_path, summary_path = emit_report(report, cfg.output)
    sys.stdout.write(format_summary(report))
    print(f"wrote {csv_path} and {summary_path}")
    return EXIT_OK if report_passed(report) else EXIT_FAIL


def cmd_compare(args) -> int:
    cfgs = [load_config(path) for path in args.configs]
    reports, table = compare_means(cfgs)
    prefix = Path(args.output or cfgs[0].output + "_compare")
    _write(table, prefix.with_name(prefix.name + ".csv"))
    summary = format_compare_summary(cfgs, reports)
    _write(summary, prefix.with_name(prefix.name + ".summary.txt"))
    sys.stdout.write(summary)
    return EXIT_OK if all(theorem_ratio_check(r).passed for r in reports) else EXIT_FAIL


def cmd_kernel_check(args) -> int:
    rows = kernel_check(args.m, args.n, args.quad)
    _write(format_kernel_check(args.m, args.n, rows), args.output)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


def cmd_validate_modulus(args) -> int:
    report = modulus_validate(parse_modulus(args.descriptor))
    _write(report.format(), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_spectrum(args) -> int:
    f = parse_corpus(args.descriptor, seed=args.seed)
    grid = Grid2D.square(args.grid)
    cutoff = args.kmax if args.kmax is not None else args.grid // 2 - 1
    sp = compute_spectrum(sample(f, grid), cutoff, cutoff)
    _write(format_spectrum_table(sp), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delayed-means",
        description="Delayed arithmetic means of double Fourier series: rate experiments and checks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="run a rate ladder from a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("compare", help="compare several means on one ladder")
    p.add_argument("configs", nargs="+")
    p.add_argument("--output", help="path prefix (default: first config's output + '_compare')")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("kernel-check", help="kernel mass and combination identities")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--quad", type=int, default=None, help="quadrature points per axis")
    p.add_argument("--output", help="write the table here instead of stdout")
    p.set_defaults(func=cmd_kernel_check)

    p = sub.add_parser("validate-modulus", help="check modulus-of-continuity properties")
    p.add_argument("descriptor", help="pow:<alpha> or custom:<name>")
    p.add_argument("--output")
    p.set_defaults(func=cmd_validate_modulus)

    p = sub.add_parser("spectrum", help="dump the Fourier coefficients of a corpus function")
    p.add_argument("descriptor", help="e.g. trig_poly:2,2,7 or lip_pair:0.5")
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--kmax", type=int, default=None, help="cutoff degree (default grid/2 - 1)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--output")
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigurationError, DomainError, EvaluationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
