"""Command-line entry point: ``tbell <subcommand> [flags]``.

Exit codes: 0 success, 1 failed validation, 2 bad input.
"""

from __future__ import annotations

import argparse
import re
import sys

from . import checks, classical, experiment, qsim, reports
from .estimators import TemporalBellEstimator

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _n_range(text: str) -> list[int]:
    """``3..12``, ``3-12`` or ``3,5,8``."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.|-)\s*(\d+)\s*", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n range {text!r}") from None


def _add_output(p, default_format="json"):
    p.add_argument("-o", "--output", help="write here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "table"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tbell",
        description="Temporal Bell inequality for classical and Grover oracle search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("run-quantum", help="Grover with mid-circuit output measurements")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--L", type=int, help="iteration budget (default ceil(sqrt(2^n)))")
    q.add_argument("--mode", choices=("analytic", "exact", "monte-carlo"), default="analytic")
    q.add_argument("--samples", type=int, default=100_000, help="copies per step (monte-carlo)")
    q.add_argument("--seed", type=int, help="64-bit seed (default $TBL_SEED)")
    q.add_argument("--variant", choices=("standard", "halt-on-hit"), default="standard")
    q.add_argument("--information", type=float, help="information target in bits (default n)")
    q.add_argument("--emit", choices=("report", "pairs", "records"), default="report",
                   help="records: raw (k, a_k, a_k1) rows of randomly-timed copies")
    _add_output(q)

    c = sub.add_parser("run-classical", help="fixed classical query schedule")
    c.add_argument("--n", type=int, help="problem size (sequential schedule)")
    c.add_argument("--schedule", help="schedule file: header n=<int>, one input per line")
    c.add_argument("--information", type=float)
    _add_output(c)

    k = sub.add_parser("check", help="evaluate the inequality on measured pair records")
    k.add_argument("--records", required=True, help="CSV with columns k,a_k,a_k1")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--L", type=int, help="steps expected (default: max k + 1)")
    k.add_argument("--information", type=float)
    k.add_argument("--seed", type=int)
    _add_output(k)

    s = sub.add_parser("sweep", help="inequality across problem sizes")
    s.add_argument("--n", type=_n_range, default=_n_range("3..12"), help="e.g. 3..12")
    s.add_argument("--policy", choices=("ceil-sqrt", "grover-optimal"), default="ceil-sqrt")
    s.add_argument("--mode", choices=("analytic", "exact", "monte-carlo"), default="analytic")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int)
    s.add_argument("--no-classical", action="store_true", help="skip classical baselines")
    _add_output(s, default_format="table")

    v = sub.add_parser("validate", help="run the invariant suites")
    v.add_argument("--n-max", type=int, default=10, help="largest n for full-statevector checks")
    return parser


def _seed(value):
    return experiment.default_seed() if value is None else value


def _table(items) -> str:
    def opt(value, spec):
        return "" if value is None else format(value, spec)

    lines = [f"{'kind':<9} {'n':>3} {'L':>6} {'calls':>7} {'I':>6} {'rhs_sum':>12} {'margin':>12} "
             f"{'bound':>10} {'P_succ':>8} {'classical':>10} {'H_joint':>9} violated"]
    for r in items:
        lines.append(
            f"{r.kind:<9} {r.n:>3} {r.L:>6} {opt(r.oracle_calls, 'd'):>7} {r.information_target:>6g} "
            f"{r.rhs_sum:>12.6f} {r.margin:>12.6f} {opt(r.paper_bound, '.6f'):>10} "
            f"{opt(r.success_probability, '.4f'):>8} {opt(r.classical_rhs_sum, '.6f'):>10} "
            f"{opt(r.joint_entropy, '.4f'):>9} {str(r.violated).lower()}")
    return "\n".join(lines) + "\n"


def _render(items, fmt: str, kind: str = "report") -> str:
    if kind == "pairs":
        return reports.pairs_to_csv(items) if fmt == "csv" else reports.pairs_to_json(items)
    if fmt == "csv":
        return reports.reports_to_csv(items)
    if fmt == "table":
        return _table(items)
    return reports.reports_to_json(items)


def _emit(text: str, output: str | None) -> None:
    if output:
        reports.atomic_write(output, text)
    else:
        sys.stdout.write(text)


def cmd_run_quantum(args) -> int:
    config = experiment.ExperimentConfig(
        n=args.n, L=args.L, mode=args.mode, samples=args.samples,
        seed=_seed(args.seed), variant=args.variant,
    )
    if args.emit == "records":
        if config.mode != "monte_carlo":
            raise UsageError("--emit records needs --mode monte-carlo")
        _emit(reports.records_to_csv(experiment.sample_random_pairs(config)), args.output)
        return EXIT_OK
    if args.emit == "pairs":
        if config.mode == "analytic":
            raise UsageError("--emit pairs needs --mode exact or monte-carlo")
        fmt = "csv" if args.format == "csv" else "json"
        _emit(_render(experiment.quantum_pair_distributions(config), fmt, "pairs"), args.output)
        return EXIT_OK
    report = experiment.run_quantum(config, args.information)
    _emit(_render([report], args.format), args.output)
    return EXIT_OK


def cmd_run_classical(args) -> int:
    if args.schedule:
        schedule = classical.read_schedule(args.schedule)
        if args.n is not None and args.n != schedule.n:
            raise UsageError(f"--n {args.n} disagrees with schedule header n={schedule.n}")
    elif args.n is not None:
        if not 1 <= args.n <= experiment.CLASSICAL_BASELINE_MAX_N:
            raise UsageError(f"--n must be in [1, {experiment.CLASSICAL_BASELINE_MAX_N}] "
                             f"for the sequential schedule, got {args.n}")
        schedule = classical.sequential_schedule(args.n)
    else:
        raise UsageError("give --n or --schedule")
    if not schedule.is_covering:
        print(f"note: schedule does not cover all {2**schedule.n} inputs; "
              "joint_entropy need not equal n", file=sys.stderr)
    report = experiment.run_classical(schedule, args.information)
    _emit(_render([report], args.format), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    with open(args.records) as fh:
        rows = reports.records_from_csv(fh.read())
    L = args.L if args.L is not None else int(rows[:, 0].max()) + 1
    target = args.n if args.information is None else args.information
    est = TemporalBellEstimator(information_target=target, n_steps=L,
                                random_state=_seed(args.seed)).fit(rows)
    report = experiment.evaluate_inequality(
        target, [est.per_step_[k] for k in range(L)],
        n=args.n, L=L,
        success_probability=None,
        paper_bound=experiment.paper_bound(args.n) if args.n >= 3 else None,
        kind="measured", method="plug_in",
    )
    _emit(_render([report], args.format), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    bad = [n for n in args.n if not experiment.MIN_N <= n <= experiment.MAX_N]
    if bad:
        raise UsageError(f"n must lie in [{experiment.MIN_N}, {experiment.MAX_N}], got {bad[0]}")
    extra = {"seed": _seed(args.seed), "samples": args.samples}
    items = experiment.sweep(args.n, args.policy, args.mode,
                             classical_baseline=not args.no_classical, **extra)
    _emit(_render(items, args.format), args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    if not 3 <= args.n_max <= qsim.FULL_MAX_N:
        raise UsageError(f"--n-max must be in [3, {qsim.FULL_MAX_N}], got {args.n_max}")
    status = EXIT_OK
    for result in checks.run_all(n_max=args.n_max):
        print(result.summary())
        if not result.passed:
            status = EXIT_FAILED
    return status


COMMANDS = {
    "run-quantum": cmd_run_quantum,
    "run-classical": cmd_run_classical,
    "check": cmd_check,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError, IndexError, OSError) as exc:
        print(f"tbell {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
