"""Command-line front end.

Primary output (JSON, JSON lines or CSV) goes to stdout or ``--output``;
human-readable summaries go to stderr.  Exit codes: 0 success, 2 usage or
domain error, 3 failed verification, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import _streams
from .analysis import (
    calibrate_r1,
    dimension_scan,
    four_corner_cloud,
    holder_diagnostic,
    holder_satisfied,
    mass_distribution_check,
    seed_set_cloud,
    verify_lemmas,
)
from .errors import HurwitzError
from .formats import (
    CopyLine,
    CylinderDoc,
    DigitsDoc,
    PointsDoc,
    ScheduleDoc,
    ValueDoc,
    dumps,
    parse,
    parse_fraction,
)
from .gaussian import GaussianRational
from .hurwitz import DEFAULT_MAX_DIGITS, expand, reconstruct
from .ifs import DEFAULT_PREC, cylinder, verify_ifs_properties
from .patterns import find_copies, scan_digit_stream, verify_copy
from .seedset import eliminate, insert, make_schedule, sample_seed_word, square

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 2, 3, 4


class VerificationFailed(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


@contextmanager
def _sink(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _emit(args, lines) -> None:
    with _sink(args.output) as out:
        for line in lines:
            out.write(line if line.endswith("\n") else line + "\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------- commands


def cmd_expand(args) -> int:
    z = GaussianRational.from_parts(parse_fraction(args.re), parse_fraction(args.im))
    seq = expand(z, max_digits=args.max_digits)
    _emit(args, [dumps(DigitsDoc.of(seq))])
    return EXIT_OK


def cmd_eval(args) -> int:
    seq = parse(DigitsDoc, _read(args.input)).to_sequence()
    _emit(args, [dumps(ValueDoc.of(reconstruct(seq)))])
    return EXIT_OK


def cmd_cylinder(args) -> int:
    seq = parse(DigitsDoc, _read(args.input)).to_sequence()
    info = cylinder(seq.digits, prec=args.prec)
    doc = CylinderDoc(
        word=[(d.re, d.im) for d in seq],
        p=(info.center.p.re, info.center.p.im),
        q=(info.center.q.re, info.center.q.im),
        center=ValueDoc.of(info.center_value),
        log_diam_lo=info.log_diam_lo,
        log_diam_hi=info.log_diam_hi,
    )
    _emit(args, [dumps(doc)])
    return EXIT_OK


def cmd_seed_sample(args) -> int:
    seeds = _streams.child_seeds(args.rng_seed, args.count)
    _emit(args, (dumps(DigitsDoc.of(sample_seed_word(args.depth, s))) for s in seeds))
    return EXIT_OK


def cmd_schedule(args) -> int:
    s = make_schedule(args.epsilon, args.horizon, args.verify_to)
    if args.square is not None:
        _emit(args, [dumps(PointsDoc(points=[(g.re, g.im) for g in square(args.square, s)]))])
    else:
        _emit(args, [dumps(ScheduleDoc.of(s))])
    _note(f"schedule eps={args.epsilon}: levels {list(s.levels)}, verified to n={s.verified_to}")
    return EXIT_OK


def _load_schedule(path: str):
    return parse(ScheduleDoc, _read(path)).to_schedule()


def cmd_insert(args) -> int:
    s = _load_schedule(args.schedule)
    y = parse(DigitsDoc, _read(args.input)).to_sequence()
    _emit(args, [dumps(DigitsDoc.of(insert(y, s)))])
    return EXIT_OK


def cmd_eliminate(args) -> int:
    s = _load_schedule(args.schedule)
    x = parse(DigitsDoc, _read(args.input)).to_sequence()
    _emit(args, [dumps(DigitsDoc.of(eliminate(x, s)))])
    return EXIT_OK


def cmd_pattern_find(args) -> int:
    A = parse(PointsDoc, _read(args.pattern)).to_pattern()
    S = parse(PointsDoc, _read(args.set)).to_set()
    copies = find_copies(A, S, args.max_scale)
    _emit(args, (dumps(CopyLine.of(c, verify_copy(c, A, S))) for c in copies))
    _note(f"{len(copies)} copies")
    return EXIT_OK


def cmd_pattern_scan(args) -> int:
    A = parse(PointsDoc, _read(args.pattern)).to_pattern()
    digits = parse(DigitsDoc, _read(args.digits)).to_sequence()
    seen = set(digits)
    found = scan_digit_stream(A, digits, args.max_scale)
    _emit(args, (dumps(CopyLine.of(c, verify_copy(c, A, seen), pos)) for pos, c in found))
    _note(f"{len(found)} copies")
    return EXIT_OK


def _holder_report(args) -> dict:
    s = make_schedule(args.epsilon, 6)
    fit = holder_diagnostic(args.epsilon, s, args.trials, args.rng_seed, threads=args.threads)
    fresh = holder_diagnostic(args.epsilon, s, args.trials, args.rng_seed + 1, threads=args.threads)
    share = holder_satisfied(fit, fresh.pairs)
    rep = fit.summary()
    rep.update({"resampled_share": share, "pass": share >= 0.99})
    return rep


def _cover_report(args) -> dict:
    seeds = _streams.child_seeds(args.rng_seed, 8)
    words = [sample_seed_word(8, s).digits for s in seeds]
    cal = calibrate_r1(words, [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    return {
        "format": 1,
        "r1": cal["r1"],
        "fitted_C": cal["fitted_C"],
        "sweep": [{"r": r, "pass": ok} for r, ok in cal["sweep"]],
        "pass": cal["r1"] is not None,
    }


def cmd_verify(args) -> int:
    reports = {}
    if args.suite in ("all", "lemmas"):
        reports["lemmas"] = verify_lemmas(args.trials, args.rng_seed,
                                          gamma_scale=Fraction(args.gamma_scale),
                                          threads=args.threads)
    if args.suite == "ifs":
        reports["ifs"] = verify_ifs_properties(args.trials, args.rng_seed, threads=args.threads)
    if args.suite in ("all", "holder"):
        reports["holder"] = _holder_report(args)
    if args.suite in ("all", "cover"):
        reports["cover"] = _cover_report(args)
    ok = all(r["pass"] for r in reports.values())
    doc = {"format": 1, "suite": args.suite, "trials": args.trials, "seed": args.rng_seed,
           "pass": ok, "reports": reports}
    _emit(args, [dumps(doc)])
    for name, r in reports.items():
        _note(f"{name}: {'pass' if r['pass'] else 'FAIL'}")
    if not ok:
        raise VerificationFailed(args.suite)
    return EXIT_OK


def cmd_dim(args) -> int:
    if args.method == "massdist":
        rep = mass_distribution_check(args.epsilon, args.depth, args.samples,
                                      seed=args.rng_seed, threads=args.threads)
        _emit(args, [dumps(rep)])
        _note(f"alpha = {rep['alpha']:.4f}, threshold {rep['threshold']:.4f}")
        if not rep["pass"]:
            raise VerificationFailed("massdist")
        return EXIT_OK
    if args.source == "fourcorner":
        cloud = four_corner_cloud(args.depth)
    else:
        cloud = seed_set_cloud(args.depth, args.samples, args.rng_seed)
    scan = dimension_scan(cloud, args.r_min, args.r_max, args.steps)
    _emit(args, [scan.to_csv()])
    if args.summary:
        with _sink(args.summary) as fh:
            fh.write(dumps(scan.summary()) + "\n")
    _note(f"slope {scan.slope:.4f}, R^2 {scan.r_squared:.4f}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write primary output here instead of stdout")
    common.add_argument("--threads", type=_positive, default=None,
                        help="worker processes (default: $HCF_THREADS or 1)")

    p = argparse.ArgumentParser(prog="hurwitzcf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("expand", parents=[common], help="Hurwitz digits of an exact Gaussian rational")
    c.add_argument("--re", required=True, help="real part as p/q")
    c.add_argument("--im", required=True, help="imaginary part as p/q")
    c.add_argument("--max-digits", type=_positive, default=DEFAULT_MAX_DIGITS)
    c.set_defaults(fn=cmd_expand)

    c = sub.add_parser("eval", parents=[common], help="exact value of a digit word")
    c.add_argument("--input", default="-", help="digits JSON (default stdin)")
    c.set_defaults(fn=cmd_eval)

    c = sub.add_parser("cylinder", parents=[common], help="log-diameter bounds of a cylinder")
    c.add_argument("--input", default="-")
    c.add_argument("--prec", type=_positive, default=DEFAULT_PREC, help="interval precision in bits")
    c.set_defaults(fn=cmd_cylinder)

    seed = sub.add_parser("seed", help="seed-set utilities")
    seed_sub = seed.add_subparsers(dest="seed_command", required=True)
    c = seed_sub.add_parser("sample", parents=[common], help="sample seed words (JSON lines)")
    c.add_argument("--depth", type=_positive, required=True)
    c.add_argument("--count", type=_positive, default=1)
    c.add_argument("--rng-seed", type=_nonneg, default=0)
    c.set_defaults(fn=cmd_seed_sample)

    c = sub.add_parser("schedule", parents=[common], help="build and verify an insertion schedule")
    c.add_argument("--epsilon", type=float, required=True)
    c.add_argument("--horizon", type=_positive, required=True)
    c.add_argument("--verify-to", type=_positive, default=None)
    c.add_argument("--square", type=_positive, default=None, help="dump W_k instead")
    c.set_defaults(fn=cmd_schedule)

    for name, fn in (("insert", cmd_insert), ("eliminate", cmd_eliminate)):
        c = sub.add_parser(name, parents=[common], help=f"{name} the scheduled squares")
        c.add_argument("--schedule", required=True, help="schedule JSON")
        c.add_argument("--input", default="-", help="digits JSON (default stdin)")
        c.set_defaults(fn=fn)

    pat = sub.add_parser("pattern", help="homothetic copies of lattice patterns")
    pat_sub = pat.add_subparsers(dest="pattern_command", required=True)
    c = pat_sub.add_parser("find", parents=[common], help="copies inside a point set (JSON lines)")
    c.add_argument("--pattern", required=True)
    c.add_argument("--set", required=True)
    c.add_argument("--max-scale", type=_positive, required=True)
    c.set_defaults(fn=cmd_pattern_find)
    c = pat_sub.add_parser("scan", parents=[common], help="copies completed along a digit stream")
    c.add_argument("--pattern", required=True)
    c.add_argument("--digits", required=True)
    c.add_argument("--max-scale", type=_positive, required=True)
    c.set_defaults(fn=cmd_pattern_scan)

    c = sub.add_parser("verify", parents=[common], help="run verification suites")
    c.add_argument("--suite", choices=("all", "ifs", "lemmas", "holder", "cover"), default="all")
    c.add_argument("--trials", type=_positive, default=10_000)
    c.add_argument("--rng-seed", type=_nonneg, default=0)
    c.add_argument("--epsilon", type=float, default=0.1, help="epsilon for the holder suite")
    c.add_argument("--gamma-scale", default="1", help=argparse.SUPPRESS)
    c.set_defaults(fn=cmd_verify)

    c = sub.add_parser("dim", parents=[common], help="box-counting or mass-distribution scan")
    c.add_argument("--method", choices=("boxcount", "massdist"), default="boxcount")
    c.add_argument("--source", choices=("fourcorner", "seedset"), default="seedset")
    c.add_argument("--depth", type=_positive, default=5)
    c.add_argument("--samples", type=_positive, default=100_000)
    c.add_argument("--epsilon", type=float, default=0.2)
    c.add_argument("--r-min", type=float, default=1e-4)
    c.add_argument("--r-max", type=float, default=1e-1)
    c.add_argument("--steps", type=_positive, default=12)
    c.add_argument("--rng-seed", type=_nonneg, default=0)
    c.add_argument("--summary", help="write the JSON fit summary here")
    c.set_defaults(fn=cmd_dim)
    return p


def _join_fraction_values(argv: list[str]) -> list[str]:
    # "--im -15/61" would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--re", "--im") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_fraction_values(argv))
    try:
        return args.fn(args)
    except VerificationFailed as exc:
        _note(f"verification failed: {exc}")
        return EXIT_VERIFY
    except HurwitzError as exc:
        _note(f"error: {type(exc).__name__}: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _note(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
