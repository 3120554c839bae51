"""Check time scales, shift pairs and periodicity from the command line.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration
error, 3 the materialized window was too small for the request.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import shlex
import sys

from . import exprlang
from .calculus import ShiftMap, delta_integral, integral_invariance_check, substitution_check
from .errors import (IncompatibleFamily, OutsideDomain, TimeScaleError, UnsupportedFamily,
                     WindowExhausted)
from .periodicity import (check_sigma_commutativity, check_structure_preservation, find_period,
                          verify_delta_periodic_function, verify_periodic_function,
                          verify_periodic_timescale)
from .reports import CheckReport, Row, SampleConfig, write_csv
from .shifts import (FAMILIES, UserShift, check_axioms, check_lemma_properties,
                     make_builtin_shift)
from .specfile import load_scale, number

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_WINDOW = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ------------------------------------------------------------ arguments


def _window(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n_min:n_max, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("window needs n_min <= n_max")
    return lo, hi


def _value(text):
    try:
        return float(number(text))
    except TimeScaleError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ranges(text):
    """``a:b`` pieces separated by commas, e.g. ``-1000:-0.001,0.001:1000``."""
    out = []
    for piece in text.split(","):
        try:
            a, b = piece.split(":")
            out.append((_value(a), _value(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a:b, got {piece!r}") from None
    return out


def _points_list(text):
    return [_value(v) for v in text.split(",") if v.strip()]


def _positive(kind):
    def parse(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scale", help="scale file")
    common.add_argument("--shift", help="builtin family name or 'user plus=... minus=... t0=...'")
    common.add_argument("--t0", type=_value, help="initial point (rebases the shift pair)")
    common.add_argument("--fn", help="function of t")
    common.add_argument("--nu", help="substitution map (function of t)")
    common.add_argument("--T", dest="T", type=_value, help="shift size")
    common.add_argument("--P", dest="P", type=_value, help="period of the scale")
    common.add_argument("--tol", type=_positive(float), default=1e-9)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=_positive(int), default=1000)
    common.add_argument("--window", type=_window, help="lattice index window n_min:n_max")
    common.add_argument("--range", dest="ranges", type=_ranges, help="a:b[,c:d...]")
    common.add_argument("--points", type=_positive(int), default=None)
    common.add_argument("--at", type=_points_list, help="extra points, comma separated")
    common.add_argument("--spacing", choices=("linear", "log"), default="linear")
    common.add_argument("--direction", choices=("+", "-"), default="+")
    common.add_argument("--out", help="CSV output path")

    parser = argparse.ArgumentParser(prog="tscale", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "axioms": "check the shift axioms and derived properties",
        "classic-period": "check closure of the scale under t +- P",
        "ts-period": "find or verify the period in shifts",
        "verify-fn": "check f(delta(+-, T, t)) = f(t)",
        "verify-delta-fn": "check f(delta(+-, T, t)) * delta^Delta = f(t)",
        "commute": "check delta(+-, P, sigma(t)) = sigma(delta(+-, P, t))",
        "structure": "check that shifting by P preserves point types",
        "integrate": "Delta integral of --fn over --range",
        "invariance": "compare integrals before and after shifting both limits by T",
        "substitute": "check the substitution rule for --nu (or a shift by --T)",
        "sample": "CSV of --fn over --range",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


# ------------------------------------------------------------ loading


def _load(args, need_shift=True):
    if not args.scale:
        raise UsageError("--scale is required")
    try:
        scale, spec = load_scale(args.scale, args.window, args.tol)
    except OSError as exc:
        raise UsageError(f"cannot read scale file: {exc}") from None
    if not need_shift:
        return scale, None
    return scale, _make_pair(scale, args, spec.shift)


def _shift_fields(text):
    tokens = shlex.split(text)
    if not tokens:
        raise UsageError("empty --shift")
    fields = {"shift": tokens[0]}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise UsageError(f"bad shift option {tok!r}")
        fields[key] = value
    return fields


def _make_pair(scale, args, file_fields):
    fields = _shift_fields(args.shift) if args.shift else file_fields
    if not fields:
        raise UsageError("no shift given (use --shift or a shift= line in the scale file)")
    family = fields["shift"]
    t0 = args.t0 if args.t0 is not None else (
        float(number(fields["t0"])) if "t0" in fields else None)
    if family == "user":
        missing = [k for k in ("plus", "minus", "t0") if k not in fields]
        if missing:
            raise UsageError(f"user shift needs {', '.join(missing)}")
        base = float(number(fields["t0"]))
        pair = UserShift(scale, fields["plus"], fields["minus"], base,
                         fields.get("domain_plus"), fields.get("domain_minus"), args.tol)
        if args.t0 is not None and scale.contains(args.t0) != pair.t0:
            pair = pair.rebase(args.t0)
        return pair
    if family not in FAMILIES:
        raise UsageError(f"unknown shift {family!r}; known: user, {', '.join(sorted(FAMILIES))}")
    return make_builtin_shift(scale, family, t0, args.tol)


def _seed(args):
    env = os.environ.get("TSCALE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"TSCALE_SEED must be an integer, got {env!r}") from None
    return args.seed


def _sampler(args):
    return SampleConfig(samples=args.samples, seed=_seed(args), ranges=args.ranges,
                        spacing=args.spacing, tol=args.tol)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for {args.command}")


# ------------------------------------------------------------ reporting


def _emit(reports, args, out=None) -> int:
    """Print summary lines and counterexamples; write CSV; return exit code."""
    out = out or sys.stdout
    rows, lines = [], []
    for rep in reports:
        line = rep.summary_line()
        lines.append(line)
        print(line, file=out)
        if rep.counterexample is not None:
            r = rep.counterexample
            print(f"  counterexample: t={r.t!r} s={r.s!r}"
                  + (f" u={r.u!r}" if r.u is not None else "")
                  + f" lhs={r.lhs!r} rhs={r.rhs!r}", file=out)
            rows.append(r)
        elif rep.worst is not None:
            rows.append(rep.worst)
        for key in ("reason", "first_violation"):
            if key in rep.notes:
                print(f"  {key}: {rep.notes[key]}", file=out)
    if args.out:
        write_csv(args.out, rows, lines)
    return EXIT_OK if all(r.holds for r in reports) else EXIT_FAIL


def _single(name, ok, residual, count, row=None) -> CheckReport:
    rep = CheckReport(name)
    if row is not None:
        rep.record(ok, row)
    else:
        rep.holds = ok
    rep.max_residual = residual
    rep.samples_checked = count
    return rep


# ------------------------------------------------------------ commands


def cmd_axioms(args):
    scale, pair = _load(args)
    cfg = _sampler(args)
    reports = list(check_axioms(pair, cfg)) + list(check_lemma_properties(pair, cfg))
    return _emit(reports, args)


def cmd_classic_period(args):
    _require(args, "P")
    scale, _ = _load(args, need_shift=False)
    rep = scale.check_classic_periodic(args.P, args.tol)
    row = None
    if rep.counterexample is not None:
        t = rep.counterexample.value
        row = Row(t, args.P, t + args.P, t - args.P, math.inf, "classic_period")
    out = _single("classic_period", rep.holds, 0.0 if rep.holds else math.inf, rep.checked, row)
    out.samples_skipped = rep.skipped
    return _emit([out], args)


def cmd_ts_period(args):
    scale, pair = _load(args)
    cfg = _sampler(args)
    if args.P is not None:
        return _emit([verify_periodic_timescale(scale, pair, args.P, cfg)], args)
    try:
        cert = find_period(scale, pair, cfg)
    except UnsupportedFamily:
        raise UsageError(f"cannot search for a period with a {pair.family} pair; "
                         "pass --P to verify a candidate") from None
    print(cert.describe())
    if cert.periodic_in_shifts:
        return _emit([cert.report], args)
    if args.out:
        write_csv(args.out, [], ["FAIL periodic_timescale inf 0"])
    return EXIT_FAIL


def cmd_verify_fn(args):
    _require(args, "fn", "T")
    scale, pair = _load(args)
    return _emit([verify_periodic_function(args.fn, pair, args.T, _sampler(args), args.P)], args)


def cmd_verify_delta_fn(args):
    _require(args, "fn", "T")
    scale, pair = _load(args)
    return _emit([verify_delta_periodic_function(args.fn, pair, args.T, _sampler(args),
                                                 args.P)], args)


def _period(args, scale, pair, cfg):
    if args.P is not None:
        return args.P
    cert = find_period(scale, pair, cfg)
    if cert.period is None:
        raise UsageError(f"{cert.describe()}; pass --P explicitly")
    print(f"using period P={cert.period.value!r}")
    return cert.period


def cmd_commute(args):
    scale, pair = _load(args)
    cfg = _sampler(args)
    return _emit([check_sigma_commutativity(scale, pair, _period(args, scale, pair, cfg), cfg)],
                 args)


def cmd_structure(args):
    scale, pair = _load(args)
    cfg = _sampler(args)
    return _emit([check_structure_preservation(scale, pair, _period(args, scale, pair, cfg),
                                               cfg)], args)


def _one_range(args):
    if not args.ranges or len(args.ranges) != 1:
        raise UsageError(f"{args.command} needs exactly one --range a:b")
    return args.ranges[0]


def cmd_integrate(args):
    _require(args, "fn")
    scale, _ = _load(args, need_shift=False)
    a, b = _one_range(args)
    res = delta_integral(args.fn, scale, a, b)
    print(f"value {res.value!r}")
    print(f"scattered {res.scattered_contribution!r}")
    print(f"continuous {res.continuous_contribution!r}")
    print(f"abs_error_estimate {res.abs_error_estimate!r}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a", "b", "value", "scattered", "continuous", "abs_error_estimate"])
            w.writerow([repr(a), repr(b), repr(res.value), repr(res.scattered_contribution),
                        repr(res.continuous_contribution), repr(res.abs_error_estimate)])
    return EXIT_OK


def cmd_invariance(args):
    _require(args, "fn", "T")
    scale, pair = _load(args)
    if args.at:
        targets = args.at
    else:
        cfg = _sampler(args)
        pool = [p for p in cfg.points(scale) if p.value >= pair.t0.value]
        limit = args.points or 10
        step = max(1, len(pool) // limit)
        targets = [p.value for p in pool[::step][:limit]]
    rep = CheckReport("integral_invariance")
    for t in targets:
        try:
            chk = integral_invariance_check(args.fn, pair, args.T, scale, t, args.direction)
        except WindowExhausted:
            rep.skip()
            continue
        rep.record(chk.residual <= args.tol,
                   Row(t, args.T, chk.lhs.value, chk.rhs.value, chk.residual,
                       f"integral_invariance{args.direction}"))
    if rep.samples_checked == 0:
        rep.holds = False
        rep.notes["reason"] = "no upper limit could be checked inside the window"
    return _emit([rep], args)


def cmd_substitute(args):
    _require(args, "fn")
    a, b = _one_range(args)
    if args.nu is not None:
        scale, _ = _load(args, need_shift=False)
        nu = args.nu
    else:
        _require(args, "T")
        scale, pair = _load(args)
        nu = ShiftMap(pair, args.T, args.direction)
    chk = substitution_check(args.fn, nu, scale, a, b)
    print(chk.description)
    rep = _single("substitution", chk.residual <= args.tol, chk.residual, 1,
                  Row(a, b, chk.lhs.value, chk.rhs.value, chk.residual, "substitution"))
    return _emit([rep], args)


def _linspace(a, b, n, spacing):
    if n == 1:
        return [a]
    if spacing == "log":
        if a <= 0 < b or a < 0 <= b or a == 0 or b == 0:
            raise UsageError("log spacing needs range pieces that do not touch 0")
        sign = 1.0 if a > 0 else -1.0
        la, lb = math.log(abs(a)), math.log(abs(b))
        return [sign * math.exp(la + (lb - la) * i / (n - 1)) for i in range(n)]
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def cmd_sample(args):
    _require(args, "fn")
    fn = exprlang.function_of(args.fn)
    n = args.points or 1000
    xs = []
    if args.scale:
        scale, _ = _load(args, need_shift=False)
        for a, b in args.ranges or [(scale.lower, scale.upper)]:
            xs.extend(p.value for p in scale.enumerate_points(a, b, n, args.spacing))
    else:
        if not args.ranges:
            raise UsageError("sample needs --range (or --scale)")
        for a, b in args.ranges:
            xs.extend(_linspace(a, b, n, args.spacing))
    xs.extend(args.at or [])
    rows, skipped = [], 0
    for x in sorted(set(xs)):
        try:
            rows.append((x, fn(x)))
        except exprlang.EvalError:
            skipped += 1
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "f"])
            w.writerows((repr(x), repr(y)) for x, y in rows)
    else:
        w = csv.writer(sys.stdout)
        w.writerow(["t", "f"])
        w.writerows((repr(x), repr(y)) for x, y in rows)
    print(f"sampled {len(rows)} points, {skipped} undefined", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "axioms": cmd_axioms,
    "classic-period": cmd_classic_period,
    "ts-period": cmd_ts_period,
    "verify-fn": cmd_verify_fn,
    "verify-delta-fn": cmd_verify_delta_fn,
    "commute": cmd_commute,
    "structure": cmd_structure,
    "integrate": cmd_integrate,
    "invariance": cmd_invariance,
    "substitute": cmd_substitute,
    "sample": cmd_sample,
}


_VALUE_FLAGS = ("--range", "--at", "--t0", "--T", "--P", "--fn", "--nu")


def _glue_values(argv):
    """Turn ``--range -5:5`` into ``--range=-5:5`` so argparse does not read
    a value starting with '-' as an option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except WindowExhausted as exc:
        print(f"error: window exhausted: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except (UsageError, TimeScaleError, IncompatibleFamily, UnsupportedFamily, OutsideDomain,
            exprlang.ParseError, exprlang.EvalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
