"""Command-line interface.

Subcommands
-----------
sum      R_D(t) over a time range, by direct compensated summation
dft      the same curve through the fast transform path (equispaced times)
analyze  class-1 certificate and lemma verdict for a sampled function
pairs    cancellation pairing of grid points at one time
model    lemma prediction for a quantum model, optionally with evolution

Exit codes: 0 success / decoheres, 2 input error, 3 no decoherence,
4 inconclusive.
"""
import argparse
import math
import shlex
import sys
from contextlib import contextmanager

import numpy as np

from . import __version__
from .dft import sweep
from .errors import DecolemmaError, ValidationError
from .generators import GENERATORS, generate
from .grid import make_uniform_grid, sample
from .io import read_model, read_values
from .model import evolve_and_check, predict
from .quasicont import DEFAULT_MIN_P, GLOBAL, LOCAL
from .rlsum import (
    DECOHERES,
    DEFAULT_EPSILON,
    DEFAULT_ETA,
    DEFAULT_KAPPA,
    DEFAULT_TIME_SAMPLES,
    INCONCLUSIVE,
    delta_profile,
    lemma_verdict,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_DECOHERENCE = 3
EXIT_INCONCLUSIVE = 4

EVOLUTION_SAMPLES = 2048


def _status_code(status):
    if status == DECOHERES:
        return EXIT_OK
    if status == INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_NO_DECOHERENCE


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _header(args, argv):
    lines = [
        f"# decolemma {__version__} numpy {np.__version__}",
        f"# command: {shlex.join(['decolemma', *argv])}",
    ]
    params = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command") and v is not None
    }
    lines.append("# params: " + " ".join(f"{k}={v}" for k, v in params.items()))
    return lines


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _function(args):
    if args.input is not None:
        values = read_values(args.input)
        if values.size < 2:
            raise ValidationError(f"{args.input}: need at least two samples")
        return sample(make_uniform_grid(values.size - 1), values)
    if args.n is None:
        raise ValidationError("give --input PATH or --n N (constant function f = 1)")
    return sample(make_uniform_grid(args.n), np.ones(args.n + 1))


def _times(args, sf, log_allowed=True):
    t_max = args.t_max if args.t_max is not None else math.pi * sf.n_intervals
    t_min = args.t_min
    count = args.t_samples
    if t_max < t_min:
        raise ValidationError("--t-max must not be below --t-min")
    if t_min == t_max:
        return np.array([t_min])
    if log_allowed and args.log_times:
        if t_min <= 0:
            raise ValidationError("--log-times needs --t-min > 0")
        return np.geomspace(t_min, t_max, count)
    return np.linspace(t_min, t_max, count)


def cmd_sum(args, argv):
    sf = _function(args)
    series = sweep(sf, _times(args, sf), fast=False)
    with _output(args.output) as out:
        out.write("\n".join(_header(args, argv)) + "\n")
        out.write(f"# n_intervals: {sf.n_intervals}\n")
        series.write_csv(out)
    return EXIT_OK


def cmd_dft(args, argv):
    sf = _function(args)
    series = sweep(sf, _times(args, sf, log_allowed=False), fast=True)
    with _output(args.output) as out:
        out.write("\n".join(_header(args, argv)) + "\n")
        out.write(f"# n_intervals: {sf.n_intervals}\n# method: {series.method}\n")
        series.write_csv(out)
    return EXIT_OK


def cmd_analyze(args, argv):
    sf = _function(args)
    verdict = lemma_verdict(
        sf, args.eta, args.min_p, args.kappa, args.epsilon, args.t_samples, args.normalization
    )
    with _output(args.output) as out:
        out.write("\n".join(_header(args, argv)) + "\n")
        out.write(f"n_intervals: {sf.n_intervals}\n")
        out.write("\n".join(verdict.report_lines()) + "\n")
    return _status_code(verdict.status)


def cmd_pairs(args, argv):
    if not args.t > 0:
        raise ValidationError("--t must be positive")
    grid = make_uniform_grid(args.n)
    report = delta_profile(grid, args.t)
    partner = report.partner
    with _output(args.output) as out:
        out.write("\n".join(_header(args, argv)) + "\n")
        out.write(f"# offset: {report.offset:.17g}\n# delta_min: {report.delta_min:.17g}\n")
        out.write("i,x_i,cos(x_i t),partner,delta_i\n")
        for i, x in enumerate(grid.points):
            k = partner.get(i, "")
            d = report.deltas[i]
            if math.isnan(d) and i in partner:
                d = report.deltas[partner[i]]
            dtext = "" if math.isnan(d) else f"{d:.17g}"
            out.write(f"{i},{x:.17g},{math.cos(x * args.t):.17g},{k},{dtext}\n")
        out.write("uncancelled: " + " ".join(str(i) for i in report.uncancelled) + "\n")
    return EXIT_OK


def cmd_model(args, argv):
    if args.input is not None and args.generate is not None:
        raise ValidationError("give either --input or --generate, not both")
    if args.input is not None:
        model = read_model(args.input)
    elif args.generate is not None:
        model = generate(args.generate, levels=args.levels, seed=args.seed, hbar=args.hbar)
    else:
        raise ValidationError("give --input PATH or --generate NAME")
    prediction = predict(
        model, args.eta, args.min_p, args.kappa, args.epsilon, args.t_samples
    )
    lines = [f"levels: {model.levels}", *prediction.report_lines()]
    check = None
    if args.evolve:
        t_ref = prediction.recurrence_time
        if t_ref is None:
            t_ref = 2 * math.pi * model.hbar / max(float(np.ptp(model.energies)), 1.0)
        t_max = args.t_max if args.t_max is not None else 1.25 * t_ref
        times = np.linspace(0.0, t_max, args.evolve_samples)
        check = evolve_and_check(model, times, prediction=prediction)
        if check.max_deviation_in_window is not None:
            lines.append(f"max_deviation_in_window: {check.max_deviation_in_window:.17g}")
        revival = "none" if check.revival_time is None else f"{check.revival_time:.17g}"
        lines.append(f"revival_time: {revival}")
    with _output(args.output) as out:
        if check is None:
            out.write("\n".join(_header(args, argv)) + "\n")
            out.write("\n".join(lines) + "\n")
        else:
            out.write("\n".join(_header(args, argv)) + "\n")
            out.write("".join(f"# {line}\n" for line in lines))
            check.write_csv(out)
    return _status_code(prediction.status)


def _lemma_options(p):
    p.add_argument("--eta", type=_positive(float), default=DEFAULT_ETA, help="flatness tolerance")
    p.add_argument("--min-p", type=_positive(int), default=DEFAULT_MIN_P, help="smallest admissible P")
    p.add_argument("--kappa", type=float, default=DEFAULT_KAPPA, help="window starts at kappa*pi")
    p.add_argument("--epsilon", type=_positive(float), default=DEFAULT_EPSILON)


def _function_options(p):
    p.add_argument("--input", help="value file, one 're' or 're,im' per line")
    p.add_argument("--n", type=_positive(int), help="use f = 1 on a grid of N intervals")


def _time_options(p, samples=DEFAULT_TIME_SAMPLES, log=True):
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, help="default: pi * N")
    p.add_argument("--t-samples", type=_positive(int), default=samples)
    if log:
        p.add_argument("--log-times", action="store_true", help="log-spaced times")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="decolemma",
        description="Predict decoherence in discrete models from the discrete Riemann-Lebesgue sum.",
    )
    parser.add_argument("--version", action="version", version=f"decolemma {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum", help="R_D(t) by direct summation")
    _function_options(p)
    _time_options(p)
    p.add_argument("--output")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("dft", help="R_D(t) on equispaced times via the fast transform")
    _function_options(p)
    _time_options(p, log=False)
    p.add_argument("--output")
    p.set_defaults(func=cmd_dft)

    p = sub.add_parser("analyze", help="certificate and lemma verdict")
    _function_options(p)
    _lemma_options(p)
    p.add_argument("--t-samples", type=_positive(int), default=DEFAULT_TIME_SAMPLES,
                   help="window samples for the observed maximum")
    p.add_argument("--normalization", choices=[GLOBAL, LOCAL], default=GLOBAL)
    p.add_argument("--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("pairs", help="cancellation pairing at one time")
    p.add_argument("--n", type=_positive(int), required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("model", help="lemma prediction for a quantum model")
    p.add_argument("--input", help="sectioned model file")
    p.add_argument("--generate", choices=sorted(GENERATORS))
    p.add_argument("--levels", type=_positive(int))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hbar", type=_positive(float), default=1.0)
    _lemma_options(p)
    p.add_argument("--t-samples", type=_positive(int), default=DEFAULT_TIME_SAMPLES,
                   help="window samples for the observed maximum")
    p.add_argument("--evolve", action="store_true", help="also evolve by brute force")
    p.add_argument("--evolve-samples", type=_positive(int), default=EVOLUTION_SAMPLES)
    p.add_argument("--t-max", type=_positive(float),
                   help="end of the evolution range (default 1.25 x recurrence time)")
    p.add_argument("--output")
    p.set_defaults(func=cmd_model)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except (DecolemmaError, OSError, ValueError) as exc:
        print(f"decolemma {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
