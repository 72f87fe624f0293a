"""Command-line entry point: ``qmclab <subcommand> ...``.

Exit status is 0 on success, 1 when a computed error exceeds one of its bounds
by more than the row tolerance, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .bounds import bound_report
from .discrepancy import extreme_discrepancy, star_discrepancy
from .functions import DEFAULT_GRID_SIZE, parse_function
from .harness import ConfigError, emit, load_config, parse_config, run_sweep, write_result
from .sequences import OutOfDomainError, load_points, parse_sequence, sequence_prefix
from .variation import nu_profile, total_p_variation

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _points(args):
    if args.file:
        return load_points(args.file)
    if args.n is None:
        raise UsageError("--n is required with --seq")
    return parse_sequence(args.seq, args.n, args.seed)


def cmd_gen(args, out):
    for x in sequence_prefix(args.seq, args.n, args.seed):
        out.write(f"{x:.17g}\n")
    return EXIT_OK


def cmd_disc(args, out):
    ps = _points(args)
    out.write("n,star,extreme\n")
    out.write(f"{ps.n},{star_discrepancy(ps).value:.17g},{extreme_discrepancy(ps).value:.17g}\n")
    return EXIT_OK


def cmd_nu(args, out):
    f = parse_function(args.function, args.grid_size)
    out.write("k,nu\n")
    for k, v in enumerate(nu_profile(f, args.kmax), 1):
        out.write(f"{k},{v:.17g}\n")
    return EXIT_OK


def cmd_var(args, out):
    f = parse_function(args.function, args.grid_size)
    out.write("p,var_p\n")
    for p in args.p:
        out.write(f"{p:g},{total_p_variation(f, p):.17g}\n")
    return EXIT_OK


def cmd_bound(args, out):
    f = parse_function(args.function, args.grid_size)
    ps = parse_sequence(args.seq, args.n, args.seed)
    report = bound_report(f, ps, p=2.0, sequence_id=args.seq)
    out.write(emit([report], args.format))
    return EXIT_VIOLATION if report.violations() else EXIT_OK


def cmd_sweep(args, out):
    overrides = dict(seed=args.seed, grid_size=args.grid_size, output=args.out,
                     format=args.format, jobs=args.jobs)
    if args.config:
        config = load_config(args.config, **overrides)
    else:
        text = "\n".join(
            f"{k} = {v}" for k, v in
            (("functions", args.functions), ("sequences", args.sequences), ("n_grid", args.n_grid))
            if v
        )
        config = parse_config(text, **overrides)
    result = run_sweep(config)
    if config.output:
        write_result(result, config.output, config.format)
        for (fid, seq), fits in result.fits.items():
            lc = fits["logcorrected"]
            ll = fits["loglog"]
            print(f"# {fid} {seq}: slope {ll.slope:.4f} (r2 {ll.r_squared:.4f}), "
                  f"max E*N/(log N)^2 = {lc.sup:.6g} at N = {lc.argmax_n}", file=sys.stderr)
    else:
        out.write(emit(result, config.format))
    bad = result.violations()
    for r, name in bad:
        print(f"violation: {r.function_id} {r.sequence_id} N={r.n} {name}: "
              f"error {r.error:.6g} > bound {r.bounds[name]:.6g}", file=sys.stderr)
    return EXIT_VIOLATION if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmclab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="print a sequence prefix, one point per line")
    p.add_argument("--seq", default="vdc:2", help="vdc[:base], midpoint, grid, random[:seed]")
    p.add_argument("-n", "--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("disc", help="star and extreme discrepancy")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--seq")
    src.add_argument("--file", help="one number per line, '#' comments")
    p.add_argument("-n", "--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("nu", help="modulus-of-variation profile of a corpus function")
    p.add_argument("--function", "-f", required=True)
    p.add_argument("--kmax", type=int, default=32)
    p.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE)
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("var", help="total p-variation of a corpus function")
    p.add_argument("--function", "-f", required=True)
    p.add_argument("-p", type=float, nargs="+", default=[1.0, 2.0])
    p.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE)
    p.set_defaults(func=cmd_var)

    p = sub.add_parser("bound", help="error and bounds for one function, sequence and N")
    p.add_argument("--function", "-f", required=True)
    p.add_argument("--seq", default="vdc:2")
    p.add_argument("-n", "--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="run a sweep from a key = value config file")
    p.add_argument("--config", "-c")
    p.add_argument("--functions", help="comma-separated ids, when no config is given")
    p.add_argument("--sequences", help="comma-separated ids, when no config is given")
    p.add_argument("--n-grid", help="e.g. '16, 32, 64' or '2^4..2^14'")
    p.add_argument("--seed", type=int)
    p.add_argument("--grid-size", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, ConfigError, OutOfDomainError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"qmclab {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
