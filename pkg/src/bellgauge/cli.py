"""``bellgauge`` command line.

Exit codes: 0 ok, 1 verification failed, 2 invalid state, 3 parse error,
4 empty grid, 5 search exhausted, 6 I/O error, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from . import io
from .bell import chsh_max, chsh_value, optimize_settings
from .entanglement import partial_transpose_min_eigenvalue
from .errors import BellGaugeError, OutputError, ParseError
from .explorer import (
    ScanGrid,
    analyze,
    family_points,
    find_counterexamples,
    sample_records,
    scan_family,
)
from .fixtures import (
    PAPER_CHSH_RHO1,
    PAPER_CHSH_RHO2,
    PAPER_S12,
    RHO1_ENTRIES,
    RHO2_ENTRIES,
    SANTOS_THRESHOLD,
)
from .qstate import linear_entropy, validate

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 64

S12_TOL = 5e-4
CHSH_TOL = 1e-4

COMMANDS = ("analyze", "verify-paper", "chsh", "optimize", "scan", "sample", "family", "search")
CSV_COMMANDS = ("scan", "sample", "family", "search")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    seed: int = 0
    format: str = "text"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format == "csv" and self.command not in CSV_COMMANDS:
            raise UsageError(f"--format csv is only valid for {', '.join(CSV_COMMANDS)}")


def _default_seed() -> int:
    raw = os.environ.get("BELLGAUGE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"BELLGAUGE_SEED must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _load_state(path: str, trace_policy: str):
    mat, label = io.parse_state(_read(path))
    return validate(mat, trace_policy=trace_policy), label


def _dump_json(obj, out) -> None:
    out.write(json.dumps(obj, indent=2) + "\n")


def _write_csv(records, path: str | None, out) -> None:
    if path is None:
        io.write_records_csv(records, out)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            io.write_records_csv(records, fh)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror}") from exc


def _summary(records, err) -> None:
    n_viol = sum(r.violates_chsh for r in records)
    best = max((r.chsh_max for r in records), default=math.nan)
    err.write(f"rows={len(records)} violating={n_viol} max_chsh={io.fmt(best)}\n")


# -- commands ----------------------------------------------------------------


def cmd_analyze(args, out, err) -> int:
    rho, label = _load_state(args.file, args.trace_policy)
    rec = analyze(rho, label=label)
    corr = chsh_max(rho)
    report = {
        "label": rec.label,
        "purity": io.rounded(1.0 - rec.s12),
        "s12": io.rounded(rec.s12),
        "s_norm": io.rounded(rec.s_norm),
        "concurrence": io.rounded(rec.concurrence),
        "min_pt_eigenvalue": io.rounded(partial_transpose_min_eigenvalue(rho)),
        "m": io.rounded(corr.m),
        "chsh_max": io.rounded(rec.chsh_max),
        "satisfies_santos": rec.satisfies_santos,
        "violates_chsh": rec.violates_chsh,
        "eigenvalues": [io.rounded(x) for x in rho.eigenvalues],
    }
    if args.format == "json":
        _dump_json(report, out)
        return EXIT_OK
    for key, value in report.items():
        if isinstance(value, bool):
            value = io.fmt_bool(value)
        elif isinstance(value, list):
            value = " ".join(io.fmt(x) for x in value)
        elif isinstance(value, float):
            value = io.fmt(value)
        out.write(f"{key}: {value}\n")
    return EXIT_OK


def paper_checks(perturb: float = 0.0) -> list[dict]:
    """The six reproduction checks; ``perturb`` shifts both fixtures' coherence."""
    m1 = RHO1_ENTRIES.copy()
    m2 = RHO2_ENTRIES.copy()
    for m in (m1, m2):
        m[1, 2] += perturb
        m[2, 1] += perturb
    rho1 = validate(m1, trace_policy="strict")
    rho2 = validate(m2, trace_policy="renormalize")
    s1 = linear_entropy(rho1).linear_entropy
    s2 = linear_entropy(rho2).linear_entropy
    c1 = chsh_max(rho1).chsh_max
    c2 = chsh_max(rho2).chsh_max

    def numeric(name, expected, actual, tol):
        return {
            "check": name,
            "expected": expected,
            "actual": io.rounded(actual),
            "pass": abs(actual - expected) <= tol,
        }

    above = s1 >= SANTOS_THRESHOLD and s2 >= SANTOS_THRESHOLD
    split = c1 > 2.0 and not c2 > 2.0
    return [
        numeric("s12_rho1", PAPER_S12, s1, S12_TOL),
        numeric("s12_rho2", PAPER_S12, s2, S12_TOL),
        numeric("chsh_max_rho1", PAPER_CHSH_RHO1, c1, CHSH_TOL),
        numeric("chsh_max_rho2", PAPER_CHSH_RHO2, c2, CHSH_TOL),
        {"check": "entropies_above_threshold", "expected": True, "actual": above, "pass": above},
        {"check": "rho1_violates_rho2_satisfies", "expected": True, "actual": split, "pass": split},
    ]


def cmd_verify_paper(args, out, err) -> int:
    checks = paper_checks(args.perturb)
    ok = all(c["pass"] for c in checks)
    if args.format == "json":
        _dump_json(checks, out)
    else:
        for c in checks:
            status = "PASS" if c["pass"] else "FAIL"
            exp, act = c["expected"], c["actual"]
            if isinstance(exp, bool):
                line = f"{status} {c['check']}: {io.fmt_bool(act)}"
            else:
                line = (
                    f"{status} {c['check']}: expected {io.fmt(exp)} actual {io.fmt(act)} "
                    f"delta {act - exp:.3g}"
                )
            out.write(line + "\n")
        out.write(f"threshold 1/sqrt(2) - 1/4 = {io.fmt(SANTOS_THRESHOLD)}\n")
        out.write(f"Santos Theorem 1 refuted: {io.fmt_bool(ok)}\n")
    for c in checks:
        if not c["pass"]:
            if isinstance(c["expected"], bool):
                err.write(f"failed check {c['check']}\n")
            else:
                err.write(
                    f"failed check {c['check']}: delta {c['actual'] - c['expected']:.3g}\n"
                )
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_chsh(args, out, err) -> int:
    rho, _ = _load_state(args.state, args.trace_policy)
    settings = io.parse_settings(_read(args.settings))
    value = chsh_value(rho, settings)
    ceiling = chsh_max(rho).chsh_max
    if args.format == "json":
        _dump_json(
            {
                "value": io.rounded(value),
                "abs_value": io.rounded(abs(value)),
                "chsh_max": io.rounded(ceiling),
            },
            out,
        )
    else:
        out.write(f"tr(rho B): {io.fmt(value)}\n")
        out.write(f"|tr(rho B)|: {io.fmt(abs(value))}\n")
        out.write(f"chsh_max: {io.fmt(ceiling)}\n")
    return EXIT_OK


def cmd_optimize(args, out, err) -> int:
    rho, _ = _load_state(args.file, args.trace_policy)
    opt = optimize_settings(rho, budget=args.budget)
    ceiling = chsh_max(rho).chsh_max
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(io.settings_to_json(opt.settings))
        except OSError as exc:
            raise OutputError(f"cannot write {args.output}: {exc.strerror}") from exc
    report = {
        "value": io.rounded(opt.value),
        "signed_value": io.rounded(opt.signed_value),
        "chsh_max": io.rounded(ceiling),
        "sweeps": opt.sweeps,
        "degenerate": opt.degenerate,
        "settings": {k: [io.rounded(x) for x in v] for k, v in opt.settings.to_dict().items()},
    }
    if args.format == "json":
        _dump_json(report, out)
    else:
        out.write(f"value: {io.fmt(opt.value)}\n")
        out.write(f"signed_value: {io.fmt(opt.signed_value)}\n")
        out.write(f"chsh_max: {io.fmt(ceiling)}\n")
        for k, v in report["settings"].items():
            out.write(f"{k}: {' '.join(io.fmt(x) for x in v)}\n")
        if opt.degenerate:
            out.write("degenerate: true (correlation matrix vanishes)\n")
    return EXIT_OK


def cmd_scan(args, out, err) -> int:
    grid = ScanGrid(tuple(args.c), tuple(args.p22), tuple(args.p44), p11=args.p11)
    records = scan_family(grid, workers=args.workers)
    _write_csv(records, args.output, out)
    _summary(records, err)
    return EXIT_OK


def cmd_sample(args, out, err) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    records = sample_records(args.count, rank=args.rank, seed=args.seed)
    _write_csv(records, args.output, out)
    _summary(records, err)
    return EXIT_OK


def cmd_family(args, out, err) -> int:
    if args.points < 1:
        raise UsageError("--points must be at least 1")
    points = family_points(args.points, args.entropy)
    records = [analyze(p.rho, p.params, label=f"t={io.fmt(p.t)}") for p in points]
    _write_csv(records, args.output, out)
    _summary(records, err)
    return EXIT_OK


def cmd_search(args, out, err) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    if not 0.0 <= args.threshold <= 0.75:
        raise UsageError("--threshold must lie in [0, 0.75]")
    records = find_counterexamples(args.threshold, args.count, args.seed, args.max_evaluations)
    _write_csv(records, args.output, out)
    _summary(records, err)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

_VERIFY_HELP = (
    "Reproduce the published two-state counterexample to the claim that "
    "S12 >= 1/sqrt(2) - 1/4 forbids CHSH violation. The printed entries of the "
    "second state sum to 1.000003, so it is loaded with trace renormalisation; "
    "a strict trace check would reject the published data."
)


def build_parser(seed_default: int = 0) -> argparse.ArgumentParser:
    parser = _Parser(prog="bellgauge", description="Two-qubit CHSH violation versus mixedness.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def policy(p):
        p.add_argument(
            "--trace-policy", choices=("strict", "renormalize"), default="renormalize",
            help="trace check: strict (1e-10) or renormalize (|tr-1| <= 1e-4)",
        )

    p = sub.add_parser("analyze", help="report entropy, concurrence and CHSH maximum of a state")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    policy(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify-paper", help="reproduce the counterexample states", description=_VERIFY_HELP)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--perturb", type=float, default=0.0, help="add EPS to both fixtures' coherence")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("chsh", help="evaluate tr(rho B) for given settings")
    p.add_argument("state")
    p.add_argument("settings")
    p.add_argument("--format", choices=("text", "json"), default="text")
    policy(p)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("optimize", help="numerically optimise measurement settings")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("-o", "--output", help="write the optimal settings JSON here")
    p.add_argument("--format", choices=("text", "json"), default="text")
    policy(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("scan", help="grid scan of the X-state family")
    p.add_argument("--c", nargs=3, type=float, metavar=("LO", "HI", "STEPS"), default=(0.0, 0.25, 11))
    p.add_argument("--p22", nargs=3, type=float, metavar=("LO", "HI", "STEPS"), default=(0.3, 0.7, 9))
    p.add_argument("--p44", nargs=3, type=float, metavar=("LO", "HI", "STEPS"), default=(0.0, 0.1, 11))
    p.add_argument("--p11", type=float, default=0.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("csv",), default="csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sample", help="random Hilbert-Schmidt states")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--rank", type=int, choices=(1, 2, 3, 4), default=4)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("csv",), default="csv")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("family", help="constant-entropy family through rho1")
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--entropy", type=float, default=None, help="target S12 (default: S12 of rho1)")
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("csv",), default="csv")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("search", help="search X-states above an entropy threshold that violate CHSH")
    p.add_argument("--threshold", type=float, default=SANTOS_THRESHOLD)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--max-evaluations", type=int, default=100_000)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("csv",), default="csv")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        parser = build_parser(_default_seed())
        args = parser.parse_args(argv)
        RunConfig(
            command=args.command,
            input_path=getattr(args, "file", None) or getattr(args, "state", None),
            output_path=getattr(args, "output", None),
            seed=getattr(args, "seed", 0),
            format=args.format,
        )
        return args.func(args, out, err)
    except UsageError as exc:
        err.write(f"bellgauge: usage error: {exc}\n")
        return EXIT_USAGE
    except BellGaugeError as exc:
        err.write(f"bellgauge: {type(exc).__name__}: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
