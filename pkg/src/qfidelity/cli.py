"""Command-line interface: ``qfidelity compute|bench|verify|gen``.

Exit codes: 0 success, 1 property or benchmark failure, 2 invalid matrix
file, 3 dimension mismatch, 64 usage error, 74 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import _jit
from .bench import (
    BenchConfig,
    bench_sweep,
    emit_csv,
    emit_plot,
    format_fastest,
)
from .errors import MatrixError, MatrixFormatError, ValidationError
from .routes import FidelityMethod, all_methods, fidelity, spread
from .states import (
    StateFamily,
    default_rank,
    random_density,
    random_pure,
    read_density,
    sample_family,
    write_matrix,
)
from .verify import run_suites

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_DIM = 3
EXIT_USAGE = 64
EXIT_IO = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return repr(float(x))


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qfidelity", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="fidelity between two matrix files")
    c.add_argument("rho")
    c.add_argument("sigma")
    c.add_argument("--method", default="eigvals",
                   choices=[m.value for m in FidelityMethod] + ["all"])

    b = sub.add_parser("bench", help="timing sweep over qubit counts and methods")
    b.add_argument("--config", help="key = value file with k_min, k_max, runs_base, ...")
    b.add_argument("--k-min", type=int)
    b.add_argument("--k-max", type=int)
    b.add_argument("--runs-base", type=int)
    b.add_argument("--method", help="comma-separated method tags or 'all'")
    b.add_argument("--seed", type=int)
    b.add_argument("--warmup", type=int)
    b.add_argument("--csv", help="write the CSV report here")
    b.add_argument("--svg", help="write the SVG plot here")
    b.add_argument("--full-scale", "--full-paper-scale", dest="full_scale", action="store_true",
                   help="k = 1..13 with runs_base = 10000")
    b.add_argument("--schedule-only", action="store_true",
                   help="print the (k, dim, runs) schedule and exit without timing")

    v = sub.add_parser("verify", help="run the seeded property suites")
    v.add_argument("--dims", type=_int_list, default=[2, 4, 8])
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("gen", help="write random density matrices")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--rank", type=int)
    g.add_argument("--family", default=StateFamily.MIXED_FULL_RANK.value,
                   choices=[f.value for f in StateFamily])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    return p


def cmd_compute(args) -> int:
    try:
        rho = read_density(args.rho)
        sigma = read_density(args.sigma)
    except ValidationError as exc:
        print(f"invalid density matrix: {exc.cause} ({exc})", file=sys.stderr)
        return EXIT_INVALID
    except (MatrixFormatError, MatrixError) as exc:
        print(f"cannot parse matrix: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"cannot read matrix: {exc}", file=sys.stderr)
        return EXIT_IO
    if rho.dim != sigma.dim:
        print(f"dimension mismatch: {rho.dim} vs {sigma.dim}", file=sys.stderr)
        return EXIT_DIM
    if args.method == "all":
        vals = all_methods(rho, sigma)
        for m, v in vals.items():
            print(f"{m.value} {_fmt(v.value)}")
        print(f"spread {_fmt(spread(v.value for v in vals.values()))}")
    else:
        print(f"{args.method} {_fmt(fidelity(rho, sigma, args.method).value)}")
    return EXIT_OK


def _bench_config(args) -> BenchConfig:
    overrides = {}
    for key, attr in (("k_min", "k_min"), ("k_max", "k_max"), ("runs_base", "runs_base"),
                      ("seed", "seed"), ("warmup_runs", "warmup")):
        if getattr(args, attr) is not None:
            overrides[key] = getattr(args, attr)
    if args.method is not None:
        overrides["methods"] = args.method
    if args.full_scale:
        return BenchConfig.full_scale(**overrides)
    if args.config:
        return BenchConfig.from_text(Path(args.config).read_text(encoding="utf-8"), **overrides)
    return BenchConfig(**overrides)


def cmd_bench(args) -> int:
    try:
        cfg = _bench_config(args)
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.schedule_only:
        print("k dim runs")
        for k, dim, runs in cfg.schedule():
            print(f"{k} {dim} {runs}")
        return EXIT_OK
    print(f"# backend={_jit.BACKEND} seed={cfg.seed} workers=1", file=sys.stderr)
    report = bench_sweep(cfg, progress=lambda msg: print(msg, file=sys.stderr))
    try:
        if args.csv:
            Path(args.csv).write_bytes(emit_csv(report))
        if args.svg and len(report.cells) > len(report.failed):
            Path(args.svg).write_bytes(emit_plot(report))
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    print(format_fastest(report))
    for c in report.failed:
        print(f"error k={c.k} method={c.method}: {c.error}", file=sys.stderr)
    return EXIT_FAIL if report.failed else EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if not args.dims or min(args.dims) < 1:
        raise UsageError("--dims must list positive dimensions")
    results = run_suites(args.dims, args.trials, args.seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"first failing suite: {failed[0].name}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _pair_paths(out: str) -> tuple[str, str]:
    root, ext = os.path.splitext(out)
    return f"{root}_a{ext}", f"{root}_b{ext}"


def cmd_gen(args) -> int:
    family = StateFamily(args.family)
    if args.dim < 1:
        raise UsageError("--dim must be >= 1")
    if args.rank is not None and not 1 <= args.rank <= args.dim:
        raise UsageError(f"--rank must lie in [1, {args.dim}]")
    if args.rank is not None and family not in (StateFamily.RANK_DEFICIENT,
                                                StateFamily.MIXED_FULL_RANK,
                                                StateFamily.IDENTICAL_PAIR):
        raise UsageError(f"--rank does not apply to family {family.value}")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    if family.is_pair:
        mats = sample_family(family, args.dim, args.seed, args.rank)
        targets = list(zip(_pair_paths(args.out), mats))
    elif family is StateFamily.PURE:
        targets = [(args.out, random_pure(args.dim, args.seed))]
    else:
        rank = args.rank
        if family is StateFamily.RANK_DEFICIENT and rank is None:
            rank = default_rank(args.dim)
        targets = [(args.out, random_density(args.dim, rank, args.seed))]
    try:
        for path, m in targets:
            write_matrix(path, m.mat)
            print(path)
    except OSError as exc:
        print(f"cannot write {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "bench": cmd_bench, "verify": cmd_verify, "gen": cmd_gen}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qfidelity {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
