"""Desk-scale benchmark harness comparing block and naive engines.

Engine rows time the cumulant computation (block pipeline vs the dense
direct order-4 formula vs the dense general recursion). The block-size sweep
times the order-m moment tensor, which dominates the cumulant cost, so the
sweep reflects the storage layout rather than per-block dispatch overhead.
The worker sweep times the sample-split moment path.

Reports carry the full configuration, the library version and one wall-time
row per (engine, impl, shape) with its sample count; timings are wall-clock
best-of-``repeats``.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__, _engines, dataio, oracle
from .cumulants import cumulants_upto
from .errors import ResourceGuardError, ValidationError
from .moments import moment, moment_parallel

NAIVE_MAX_N = 64
NAIVE_MAX_M = 6

ENGINE_CHOICES = ("block", "naive4", "naive-general")


@dataclass
class BenchConfig:
    n: int = 16
    t: int = 20_000
    m: int = 4
    b: int = 2
    seed: int = 0
    distribution: str = "gaussian"
    engines: tuple = ("block", "naive4")
    impl: str = "auto"
    b_sweep: tuple = ()
    p_sweep: tuple = ()
    repeats: int = 2
    compare_impls: bool = False


def _resolve_impls(engine: str, impl: str) -> list[str]:
    if engine == "naive-general":
        return ["python"]
    if impl == "auto":
        return ["compiled"] if _engines.HAVE_COMPILED else ["python"]
    if impl == "both":
        return ["compiled", "python"] if _engines.HAVE_COMPILED else ["python"]
    if impl == "compiled" and not _engines.HAVE_COMPILED:
        raise ValidationError("compiled kernels requested but the extension is not built")
    return [impl]


def _guard_naive(n: int, m: int):
    if n > NAIVE_MAX_N or m > NAIVE_MAX_M:
        raise ResourceGuardError(
            f"timed naive runs are limited to n <= {NAIVE_MAX_N}, m <= {NAIVE_MAX_M}"
        )
    if n**m > oracle.DENSE_ELEMENT_GUARD:
        raise ResourceGuardError(
            f"dense tensor of {n}^{m} elements exceeds the memory guard"
        )


def _timed(fn, repeats: int):
    walls = []
    result = None
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        result = fn()
        walls.append((time.perf_counter() - t0) * 1000.0)
    return min(walls), walls, result


def _engine_runner(engine: str, impl: str, data: np.ndarray, m: int, b: int):
    if engine == "block":
        block_engine = "compiled" if impl == "compiled" else "gram"
        return lambda: cumulants_upto(data, m, b, engine=block_engine)
    if engine == "naive4":
        if m != 4:
            raise ValidationError("the naive4 engine is order-4 only")
        oracle_impl = "compiled" if impl == "compiled" else "numpy"
        return lambda: oracle.dense_cumulant4_direct(data, impl=oracle_impl)
    if engine == "naive-general":
        return lambda: oracle.dense_cumulants_upto(data, m)
    raise ValidationError(f"unknown engine {engine!r}, expected one of {ENGINE_CHOICES}")


def run_bench(config: BenchConfig) -> dict:
    """Run the configured sweeps and return the machine-readable report."""
    for engine in config.engines:
        if engine not in ENGINE_CHOICES:
            raise ValidationError(
                f"unknown engine {engine!r}, expected one of {ENGINE_CHOICES}"
            )
    t0 = time.perf_counter()
    data = dataio.generate(config.distribution, config.n, config.t, seed=config.seed)
    generate_ms = (time.perf_counter() - t0) * 1000.0

    rows = []

    def add_row(engine, impl, n, m, b, p, wall_ms, walls, extra=None):
        row = {
            "engine": engine,
            "impl": impl,
            "n": n,
            "m": m,
            "b": b,
            "p": p,
            "t": config.t,
            "wall_ms": wall_ms,
            "repeats": len(walls),
            "all_wall_ms": walls,
        }
        if extra:
            row.update(extra)
        rows.append(row)

    for engine in config.engines:
        if engine.startswith("naive"):
            _guard_naive(config.n, config.m)
        for impl in _resolve_impls(engine, "both" if config.compare_impls else config.impl):
            runner = _engine_runner(engine, impl, data, config.m, config.b)
            wall, walls, result = _timed(runner, config.repeats)
            extra = None
            if engine == "block":
                tensor = result[config.m]
                extra = {
                    "stored_elements": tensor.stored_element_count,
                    "dense_elements": config.n**config.m,
                }
            add_row(engine, impl, config.n, config.m,
                    config.b if engine == "block" else None, 1, wall, walls, extra)

    for b in config.b_sweep:
        impl = _resolve_impls("block", config.impl)[0]
        block_engine = "compiled" if impl == "compiled" else "gram"
        wall, walls, result = _timed(
            lambda: moment(data, config.m, b, engine=block_engine), config.repeats
        )
        add_row("block-moment", impl, config.n, config.m, b, 1, wall, walls,
                {"sweep": "b", "stored_elements": result.stored_element_count})

    for p in config.p_sweep:
        impl = _resolve_impls("block", config.impl)[0]
        block_engine = "compiled" if impl == "compiled" else "gram"
        wall, walls, _ = _timed(
            lambda: moment_parallel(data, config.m, config.b, p, engine=block_engine),
            config.repeats,
        )
        add_row("block-moment", impl, config.n, config.m, config.b, p, wall, walls,
                {"sweep": "p"})

    return {
        "config": asdict(config),
        "library_version": __version__,
        "compiled_kernels": _engines.HAVE_COMPILED,
        "phases": {"generate_ms": generate_ms},
        "rows": rows,
    }


def format_report(report: dict) -> str:
    """Human-readable table for a bench report."""
    lines = []
    cfg = report["config"]
    lines.append(
        f"blockcumulants {report['library_version']} bench: "
        f"n={cfg['n']} t={cfg['t']} m={cfg['m']} dist={cfg['distribution']} "
        f"seed={cfg['seed']} repeats={cfg['repeats']} "
        f"compiled={report['compiled_kernels']}"
    )
    lines.append(f"generate: {report['phases']['generate_ms']:.1f} ms")
    header = f"{'engine':<14} {'impl':<9} {'b':>3} {'p':>3} {'t':>9} {'wall_ms':>12}"
    lines.append(header)
    lines.append("-" * len(header))
    for row in report["rows"]:
        b = "-" if row["b"] is None else str(row["b"])
        lines.append(
            f"{row['engine']:<14} {row['impl']:<9} {b:>3} {row['p']:>3} "
            f"{row['t']:>9} {row['wall_ms']:>12.1f}"
        )
    return "\n".join(lines)
