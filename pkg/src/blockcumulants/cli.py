"""Command-line interface.

Subcommands: moment, cumulants, bench, selftest, generate. Exit codes:
0 success, 1 validation error, 2 resource guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, _engines, bench, dataio, partitions, stats
from .cumulants import cumulants_upto
from .errors import ResourceGuardError, ValidationError
from .moments import moment, moment_parallel, moment_parallel_blocks

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_GUARD = 2


@dataclass
class RunConfig:
    """Echo of the parsed invocation, embedded in reports."""

    command: str
    input: str | None = None
    output: str | None = None
    order: int | None = None
    block_size: int = 2
    workers: int = 1
    parallel: str = "none"
    engine: str = "auto"
    seed: int = 0
    distribution: str | None = None
    n: int | None = None
    samples: int | None = None


def _add_compute_flags(sub):
    sub.add_argument("--input", required=True, help="input CSV path")
    sub.add_argument("--output", required=True, help="output path (or prefix)")
    sub.add_argument("--order", type=int, required=True, help="tensor order m")
    sub.add_argument("--block-size", type=int, default=2, help="block edge b")
    sub.add_argument("--workers", type=int, default=1, help="worker count p")
    sub.add_argument("--parallel", choices=("none", "samples", "blocks"),
                     default="none", help="parallel strategy")
    sub.add_argument("--engine", choices=("auto", "compiled", "gram", "blockwise"),
                     default="auto", help="moment engine")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockcumulants",
        description="Moment and cumulant tensors in blocked super-symmetric storage",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p_moment = subs.add_parser("moment", help="moment tensor of a CSV dataset")
    _add_compute_flags(p_moment)

    p_cum = subs.add_parser("cumulants", help="cumulant tensors of a CSV dataset")
    _add_compute_flags(p_cum)

    p_gen = subs.add_parser("generate", help="write synthetic data as CSV")
    p_gen.add_argument("--distribution", choices=dataio.DISTRIBUTIONS, required=True)
    p_gen.add_argument("--n", type=int, required=True, help="number of variables")
    p_gen.add_argument("--samples", type=int, required=True, help="number of rows")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--cov", help="optional covariance CSV (gaussian only)")
    p_gen.add_argument("--output", required=True, help="output CSV path")

    p_bench = subs.add_parser("bench", help="block vs naive engine timings")
    p_bench.add_argument("--n", type=int, default=16)
    p_bench.add_argument("--samples", type=int, default=20_000)
    p_bench.add_argument("--order", type=int, default=4)
    p_bench.add_argument("--block-size", type=int, default=2)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--distribution", choices=dataio.DISTRIBUTIONS,
                         default="gaussian")
    p_bench.add_argument("--engine", default="block,naive4",
                         help="comma list of block,naive4,naive-general")
    p_bench.add_argument("--impl", choices=("auto", "compiled", "python", "both"),
                         default="auto")
    p_bench.add_argument("--b-sweep", default="",
                         help="comma list of block sizes to sweep")
    p_bench.add_argument("--p-sweep", default="",
                         help="comma list of worker counts to sweep")
    p_bench.add_argument("--repeats", type=int, default=2)
    p_bench.add_argument("--output", help="write the JSON report here")

    p_self = subs.add_parser("selftest", help="combinatorial tables and spread test")
    p_self.add_argument("--max-order", type=int, default=10)
    p_self.add_argument("--replicates", type=int, default=200)
    p_self.add_argument("--samples", type=int, default=10_000)
    p_self.add_argument("--seed", type=int, default=0)

    return parser


def _cmd_moment(args) -> int:
    data = dataio.ingest_csv(args.input)
    if args.parallel == "samples":
        tensor = moment_parallel(data, args.order, args.block_size, args.workers,
                                 engine=args.engine)
    elif args.parallel == "blocks":
        tensor = moment_parallel_blocks(data, args.order, args.block_size,
                                        args.workers, engine=args.engine)
    else:
        tensor = moment(data, args.order, args.block_size, engine=args.engine)
    dataio.emit_tensor(tensor, args.output)
    print(f"wrote order-{args.order} moment tensor to {args.output}")
    return EXIT_OK


def _cmd_cumulants(args) -> int:
    data = dataio.ingest_csv(args.input)
    cumulant_set = cumulants_upto(data, args.order, args.block_size,
                                  engine=args.engine)
    paths = []
    tensors = [_engines.vector_blocks(cumulant_set.c1, args.block_size)]
    tensors.extend(cumulant_set.tensors)
    for order, tensor in enumerate(tensors, start=1):
        path = f"{args.output}_c{order}.json"
        dataio.emit_tensor(tensor, path)
        paths.append(path)
    print(f"wrote cumulant tensors of order 1..{args.order}: {', '.join(paths)}")
    return EXIT_OK


def _cmd_generate(args) -> int:
    cov = None
    if args.cov is not None:
        cov = dataio.ingest_csv(args.cov)
    data = dataio.generate(args.distribution, args.n, args.samples,
                           seed=args.seed, cov=cov)
    dataio.write_csv(args.output, data)
    print(f"wrote {args.samples} x {args.n} {args.distribution} samples "
          f"(seed {args.seed}) to {args.output}")
    return EXIT_OK


def _parse_int_list(text: str) -> tuple:
    if not text.strip():
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"expected a comma list of integers: {text!r}") from exc


def _cmd_bench(args) -> int:
    config = bench.BenchConfig(
        n=args.n,
        t=args.samples,
        m=args.order,
        b=args.block_size,
        seed=args.seed,
        distribution=args.distribution,
        engines=tuple(e.strip() for e in args.engine.split(",") if e.strip()),
        impl="auto" if args.impl == "both" else args.impl,
        compare_impls=args.impl == "both",
        b_sweep=_parse_int_list(args.b_sweep),
        p_sweep=_parse_int_list(args.p_sweep),
        repeats=args.repeats,
    )
    report = bench.run_bench(config)
    print(bench.format_report(report))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        print(f"report written to {args.output}")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    max_m = args.max_order
    print(f"partition tables for m <= {max_m}")
    print(f"{'m':>3} {'sigma':>6} {'S(m,sigma)':>12} {'S2+(m,sigma)':>13}")
    for m in range(1, max_m + 1):
        for sigma in range(1, m + 1):
            s = partitions.stirling2(m, sigma)
            smin2 = partitions.stirling2_min2(m, sigma) if sigma <= max(m // 2, 1) else 0
            print(f"{m:>3} {sigma:>6} {s:>12} {smin2:>13}")
    print()
    print(f"{'m':>3} {'Bell(m)':>10} {'F(m)':>8} {'N(m)':>8} {'U(m)':>8}")
    for m in range(2, max_m + 1):
        n_m = partitions.mult_count_N(m) if m >= 4 else 0
        u_m = partitions.mult_bound_U(m) if m >= 4 else 0
        print(f"{m:>3} {partitions.bell(m):>10} {partitions.count_F(m):>8} "
              f"{n_m:>8} {u_m:>8}")
    print()
    ok = True
    for m in range(2, max_m + 1):
        for sigma in range(1, m // 2 + 1):
            enum = len(partitions.enumerate_partitions_min2(m, sigma)) if sigma > 1 else 1
            formula = partitions.stirling2_min2_formula(m, sigma)
            if enum != formula:
                ok = False
                print(f"MISMATCH S2+({m},{sigma}): enumeration {enum} vs formula {formula}")
    print(f"enumeration vs closed forms: {'ok' if ok else 'MISMATCH'}")
    report = stats.estimator_spread_test(2, args.samples,
                                         replicates=args.replicates, seed=args.seed)
    print(
        f"estimator spread (order {report['order']}, t={report['t']}, "
        f"R={report['replicates']}): std {report['empirical_std']:.3e} vs "
        f"bound {report['bound']:.3e} (ratio {report['ratio']:.3f}) -> "
        f"{'pass' if report['passed'] else 'FAIL'}"
    )
    return EXIT_OK if ok and report["passed"] else EXIT_VALIDATION


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "moment": _cmd_moment,
        "cumulants": _cmd_cumulants,
        "generate": _cmd_generate,
        "bench": _cmd_bench,
        "selftest": _cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
