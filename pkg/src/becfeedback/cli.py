"""Command-line front end: ``becfb bounds|simulate|verify|figure1``.

Every command writes CSV headed by a ``#``-prefixed JSON manifest line with
the command, its full parameter set, the seed and the tool version. The
manifest in the output is deterministic, so reruns with the same parameters
are byte-identical; the wall-clock duration is reported on stderr as a second
manifest line.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from . import _runner, bounds, oracle, schemes, sprt
from .huffman import average_length, equiprobable_code, reference_huffman

SCHEMES = ("huffman-repeat", "vlsf-iid", "vlsf-balanced", "vlsf-linear", "q-channel", "sprt")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def tool_version() -> str:
    from importlib.metadata import PackageNotFoundError, version

    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- formatting

def fmt(x: float | int | Fraction | None) -> str:
    """Nine significant digits for floats; integers verbatim; blank for None."""
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.9g}"


def fmt_exact(q: Fraction | None) -> str:
    if q is None:
        return ""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_m_range(text: str) -> list[int]:
    """``8``, ``2..64`` or a comma list of either."""
    values: list[int] = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = (int(s) for s in part.split(".."))
                values.extend(range(lo, hi + 1))
            else:
                values.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad M specification {text!r}; use 8, 2..64 or 2,4,8") from None
    if not values or min(values) < 2:
        raise argparse.ArgumentTypeError("every M must be at least 2")
    return sorted(set(values))


def parse_probability(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_kinds(text: str) -> list[bounds.Kind]:
    if text == "all":
        return list(bounds.Kind)
    valid = [k.value for k in bounds.Kind]
    chosen = []
    for name in text.split(","):
        if name not in valid:
            raise argparse.ArgumentTypeError(
                f"invalid kind {name!r}; valid kinds: all, {', '.join(valid)}")
        chosen.append(bounds.Kind(name))
    return [k for k in bounds.Kind if k in chosen]


def _manifest(command: str, params: dict) -> dict:
    return {"command": command, "params": params, "seed": params.get("seed"),
            "version": tool_version()}


def _emit(args: argparse.Namespace, manifest: dict, header: Sequence[str],
          rows: Iterator[Sequence[str]], started: float) -> None:
    buf = io.StringIO()
    buf.write("# " + json.dumps(manifest, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    duration = time.perf_counter() - started
    sys.stderr.write("# " + json.dumps({"duration_s": round(duration, 3)}) + "\n")


# ---------------------------------------------------------------- bounds

def _bound_row(M: int, kind: bounds.Kind, eps: Fraction, delta: Fraction) -> list[str]:
    """``M, kind, blocklength, rate, exact``; blank values where a kind does not apply."""
    if kind is bounds.Kind.VLSF_LINEAR and M & (M - 1):
        return [str(M), kind.value, "", "", ""]
    if kind is bounds.Kind.CONV_FANO and eps > 1 - Fraction(1, M):
        return [str(M), kind.value, "", "", ""]
    exact_capable = kind not in (bounds.Kind.CONV_FANO, bounds.Kind.VLSF_EXPURGATED) and not (
        kind is bounds.Kind.VLSF_IID and M > bounds.EXACT_IID_MAX_M)
    value = bounds.evaluate(bounds.BoundQuery(M, eps, delta, kind), exact=exact_capable)
    return [str(M), kind.value, fmt(value.blocklength), fmt(value.rate), fmt_exact(value.exact)]


def cmd_bounds(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    Ms = args.M if args.k is None else [1 << args.k]
    params = {"M": Ms, "eps": str(args.eps), "delta": str(args.delta),
              "kinds": [k.value for k in args.kinds]}
    rows = [_bound_row(M, kind, args.eps, args.delta) for M in Ms for kind in args.kinds]
    _emit(args, _manifest("bounds", params), ["M", "kind", "blocklength", "rate", "exact"],
          iter(rows), started)
    return EXIT_OK


# ---------------------------------------------------------------- simulate

SIM_HEADER = ["scheme", "M", "m", "delta", "eps", "seed", "cap", "mean", "stderr", "trials",
              "truncated", "empirical_error", "statistic", "statistic_stderr"]


def cmd_simulate(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    if args.k is not None:
        M = 1 << args.k
    elif args.M is not None:
        if len(args.M) != 1:
            raise UsageError("simulate takes a single M")
        M = args.M[0]
    else:
        M = 8
    delta, eps = float(args.delta), float(args.eps)
    workers = args.workers or _runner.default_workers()
    params = {"scheme": args.scheme, "M": M, "m": args.m, "variant": args.variant,
              "delta": str(args.delta), "eps": str(args.eps), "trials": args.trials,
              "seed": args.seed, "cap": args.cap}
    if args.scheme == "vlsf-linear" and M & (M - 1):
        raise UsageError("vlsf-linear needs M to be a power of two (use --k)")
    statistic = statistic_se = None
    m_col: int | None = None
    try:
        if args.scheme == "sprt":
            m_col = args.m
            spec = sprt.SprtSpec.single(args.m, args.variant)
            oc = sprt.sprt_operating_characteristics(spec, delta, args.trials, args.seed,
                                                     cap=args.cap, workers=workers)
            est = oc.under_p
            # mean/stderr refer to the sample size under P; the statistic is beta
            err = 1.0 - oc.beta
            statistic, statistic_se = oc.beta, oc.beta_stderr
            M_col: int | None = None
        elif args.scheme == "q-channel":
            res = schemes.simulate_q_channel_error(M, delta, args.trials, args.seed,
                                                   cap=args.cap, workers=workers)
            est, err = res.blocklength, 1.0 - res.success
            statistic, statistic_se = res.success, res.stderr
            M_col = M
        else:
            cfg = schemes.SimConfig(M, delta, eps, args.trials, args.seed, args.cap)
            if args.scheme == "huffman-repeat":
                est = schemes.simulate_vlf_huffman_repeat(cfg, workers=workers)
            else:
                est = schemes.simulate_vlsf(cfg, args.scheme.split("-", 1)[1], workers=workers)
            err = est.empirical_error
            M_col = M
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    row = [args.scheme, fmt(M_col), fmt(m_col), fmt(delta), fmt(eps), str(args.seed), str(args.cap),
           fmt(est.mean), fmt(est.stderr), str(est.trials), str(est.truncated), fmt(err),
           fmt(statistic), fmt(statistic_se)]
    _emit(args, _manifest("simulate", params), SIM_HEADER, iter([row]), started)
    return EXIT_OK


# ---------------------------------------------------------------- verify

Check = Callable[[str], tuple[bool, str]]


def _check_huffman(level: str) -> tuple[bool, str]:
    top = 64 if level == "quick" else 65536
    for M in range(2, top + 1):
        if average_length(equiprobable_code(M)) != bounds.lstar_exact(M):
            return False, f"M={M}"
    for M in range(2, 65):
        if sorted(reference_huffman(M).lengths) != sorted(equiprobable_code(M).lengths):
            return False, f"greedy merge differs at M={M}"
    return True, f"M<= {top}"


def _check_iid(level: str) -> tuple[bool, str]:
    worst = 0.0
    for M in range(2, bounds.EXACT_IID_MAX_M + 1):
        exact = float(bounds.iid_tau0_exact(M))
        worst = max(worst, abs(exact - oracle.series_expected_tau0_iid(M, 1e-10)))
    return worst <= 1e-9, f"max |exact - series| = {worst:.3g}"


def _check_linear(level: str) -> tuple[bool, str]:
    top = 10 if level == "quick" else 20
    for k in range(1, top + 1):
        if oracle.phase_type_expected_absorption(k) != bounds.linear_tau0_exact(k):
            return False, f"k={k}"
    return True, f"k<= {top}"


def _check_expurgated(level: str) -> tuple[bool, str]:
    top = 64 if level == "quick" else 4096
    worst = 0.0
    for M in range(3, top + 1):
        worst = max(worst, abs(bounds.vlsf_expurgated(M, 0).blocklength
                               - oracle.union_bound_series_balanced(M)))
    return worst <= 1e-9, f"max deviation {worst:.3g}"


def _check_tiny(level: str) -> tuple[bool, str]:
    for M in (2, 3, 4):
        iid = oracle.exhaustive_tau0_tiny(M, "iid", 20)
        if not iid.contains(float(bounds.iid_tau0_exact(M)), 1e-12):
            return False, f"iid M={M}"
        bal = oracle.exhaustive_tau0_tiny(M, "balanced", 20)
        if float(bal.lower) > bounds.vlsf_expurgated(M, 0).blocklength + 1e-12:
            return False, f"balanced M={M}"
    lin = oracle.exhaustive_tau0_tiny(4, "linear", 20)
    if not lin.contains(float(bounds.linear_tau0_exact(2)), 1e-12):
        return False, "linear M=4"
    return True, "M in {2,3,4}"


def _check_zero_error(level: str) -> tuple[bool, str]:
    top = 64 if level == "quick" else 4096
    for delta in (0.0, 0.1, 0.5, 0.9):
        for M in range(2, top + 1):
            target = bounds.lstar(M) / (1.0 - delta)
            a = bounds.ach_huffman(M, 0, delta).blocklength
            c = bounds.conv_sprt(M, 0, delta).blocklength
            z = bounds.zero_error_blocklength(M, delta).blocklength
            if max(abs(a - target), abs(c - target), abs(z - target)) > 1e-12:
                return False, f"M={M} delta={delta}"
    return True, f"M<= {top}"


def _check_converse(level: str) -> tuple[bool, str]:
    for M in (2, 3, 5, 8, 13, 64, 100):
        for eps in (0.0, 0.05, 0.2, 0.5):
            for delta in (0.0, 0.5):
                a = sprt.converse_from_sprt(M, eps, delta).blocklength
                b = bounds.conv_sprt(M, eps, delta).blocklength
                if abs(a - b) > 1e-12:
                    return False, f"SPRT mixture vs closed form at M={M} eps={eps}"
                if eps <= 1 - 1 / M and bounds.conv_fano(M, eps, delta).blocklength > b + 1e-12:
                    return False, f"Fano above SPRT converse at M={M} eps={eps}"
    return True, "grid of 56 points"


def _check_orderings(level: str) -> tuple[bool, str]:
    top = 10 if level == "quick" else 16
    for k in range(1, top + 1):
        lin = bounds.vlsf_linear(k, 0.5).blocklength
        if lin > bounds.vlsf_expurgated(1 << k, 0.5).blocklength + 1e-12:
            return False, f"linear above expurgated at k={k}"
        if k >= 6 and bounds.vlsf_iid(1 << k, 0.5, mode="series").blocklength > lin:
            return False, f"iid above linear at k={k}"
    for M in range(2, 1025):
        h = bounds.ach_huffman(M, 0, 0.5).blocklength
        r = bounds.ach_repeat(M, 0, 0.5).blocklength
        pow2 = M & (M - 1) == 0
        if h > r + 1e-12 or (abs(h - r) <= 1e-12) != pow2:
            return False, f"Huffman vs repeat at M={M}"
    return True, f"k<= {top}"


def _check_sprt_series(level: str) -> tuple[bool, str]:
    for m in range(1, 21):
        for delta in (0.1, 0.5, 0.9):
            if abs(sprt.q_correct_series(m, delta) - (1 - 2.0**-m)) > 1e-12:
                return False, f"m={m} delta={delta}"
    return True, "m<= 20"


CHECKS: list[tuple[str, Check]] = [
    ("huffman-vs-lstar", _check_huffman),
    ("iid-exact-vs-series", _check_iid),
    ("linear-vs-phase-type", _check_linear),
    ("expurgated-vs-union-series", _check_expurgated),
    ("tiny-exhaustive-brackets", _check_tiny),
    ("zero-error-tightness", _check_zero_error),
    ("sprt-converse-and-fano", _check_converse),
    ("bound-orderings", _check_orderings),
    ("sprt-negative-binomial", _check_sprt_series),
]


def cmd_verify(args: argparse.Namespace) -> int:
    failed = []
    for name, check in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = check(args.level)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name} ({detail}; {time.perf_counter() - t0:.2f}s)")
        if not ok:
            failed.append(name)
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return EXIT_FAIL
    print(f"all {len(CHECKS)} checks passed")
    return EXIT_OK


# ---------------------------------------------------------------- figure1

FIGURE_HEADER = ["M", "conv_vlf", "ach_iid", "ach_expurgated", "ach_linear",
                 "sim_linear_mean", "sim_linear_stderr", "gap"]


def figure1_rows(delta: float, M_max: int, trials: int, seed: int, cap: int,
                 workers: int) -> Iterator[list[str]]:
    """One row per ``M``; ``gap`` compares the converse rate with the best achievable rate."""
    for M in range(2, M_max + 1):
        conv = bounds.conv_sprt(M, 0, delta).blocklength
        iid = bounds.vlsf_iid(M, delta).blocklength
        exp = bounds.vlsf_expurgated(M, delta).blocklength
        lin = sim_mean = sim_se = None
        if M & (M - 1) == 0:
            lin = bounds.vlsf_linear(M.bit_length() - 1, delta).blocklength
            if trials > 0:
                est = schemes.simulate_vlsf(schemes.SimConfig(M, delta, 0.0, trials, seed, cap),
                                            "linear", workers=workers)
                sim_mean, sim_se = est.mean, est.stderr
        best = min(x for x in (iid, exp, lin) if x is not None)
        conv_rate, ach_rate = bounds.rate_of(M, conv), bounds.rate_of(M, best)
        gap = (conv_rate - ach_rate) / conv_rate
        yield [str(M), fmt(conv), fmt(iid), fmt(exp), fmt(lin), fmt(sim_mean), fmt(sim_se), fmt(gap)]


def cmd_figure1(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    workers = args.workers or _runner.default_workers()
    params = {"delta": str(args.delta), "M_max": args.M_max, "trials": args.trials,
              "seed": args.seed, "cap": args.cap}
    rows = list(figure1_rows(float(args.delta), args.M_max, args.trials, args.seed, args.cap,
                             workers))
    _emit(args, _manifest("figure1", params), FIGURE_HEADER, iter(rows), started)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="becfb", description="Feedback-code blocklength bounds and simulations for the BEC.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--delta", type=parse_probability, default=Fraction(1, 2),
                       help="erasure probability (default 0.5)")
        p.add_argument("--eps", type=parse_probability, default=Fraction(0),
                       help="target error probability (default 0)")
        p.add_argument("--out", help="write CSV here instead of stdout")

    def monte_carlo(p: argparse.ArgumentParser, trials: int) -> None:
        p.add_argument("--trials", type=int, default=trials)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=schemes.DEFAULT_CAP,
                       help="maximum channel uses per trial")
        p.add_argument("--workers", type=int, default=0,
                       help="worker threads (default: available parallelism)")

    p = sub.add_parser("bounds", help="tabulate closed-form bounds")
    p.add_argument("--M", type=parse_m_range, default=parse_m_range("2..64"),
                   help="message counts: 8, 2..64 or 2,4,8")
    p.add_argument("--k", type=int, help="message bits; overrides --M with M = 2**k")
    p.add_argument("--kinds", type=parse_kinds, default=list(bounds.Kind),
                   help="'all' or a comma list of " + ", ".join(k.value for k in bounds.Kind))
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="Monte Carlo run of one scheme")
    p.add_argument("--scheme", choices=SCHEMES, required=True)
    p.add_argument("--M", type=parse_m_range)
    p.add_argument("--k", type=int, help="message bits; M = 2**k")
    p.add_argument("--m", type=int, default=3, help="SPRT upper boundary in units of log 2")
    p.add_argument("--variant", default="open-lower",
                   choices=[v.label for v in sprt.Variant], help="SPRT boundary variant")
    common(p)
    monte_carlo(p, 100_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="cross-check closed forms against oracles")
    p.add_argument("level", choices=("quick", "full"), nargs="?", default="quick")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figure1", help="data for the bound-versus-M figure")
    p.add_argument("--M-max", dest="M_max", type=int, default=64)
    common(p)
    monte_carlo(p, 10_000)
    p.set_defaults(func=cmd_figure1)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", None) is not None and args.k < 1:
        parser.error("--k must be at least 1")
    for name in ("delta", "eps"):
        if hasattr(args, name):
            value = getattr(args, name)
            upper_ok = value < 1 if name == "delta" else value <= 1
            if not (0 <= value and upper_ok):
                parser.error(f"--{name} out of range: {value}")
    if getattr(args, "trials", 1) < 0 or getattr(args, "cap", 1) < 1:
        parser.error("--trials must be nonnegative and --cap positive")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
