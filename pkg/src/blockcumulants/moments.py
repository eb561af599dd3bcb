"""Centering and moment tensors of multivariate samples in block form.

All estimators normalise by the raw sample count t (no small-sample
correction anywhere), so the order-2 moment of centered data is the biased
covariance. Centering is never implicit: `moment` works on whatever it is
given, and the cumulant driver centers exactly once.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _engines
from ._engines import moment_block  # noqa: F401  (re-exported reference op)
from .errors import ValidationError
from .symtensor import BlockSymTensor

PARALLEL_STRATEGIES = ("none", "samples", "blocks")


def as_data_matrix(x) -> np.ndarray:
    """Validate and coerce a t x n observation matrix of finite float64."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValidationError(f"data must be 2-D (t x n), got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValidationError(f"data must be non-empty, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise ValidationError(
            f"non-finite value at row {bad[0] + 1}, column {bad[1] + 1}"
        )
    return arr


def center(x) -> np.ndarray:
    """Subtract each column's mean: realisations of the centered variable."""
    arr = as_data_matrix(x)
    return arr - arr.mean(axis=0)


def moment(x, m: int, b: int = 2, engine: str = "auto") -> BlockSymTensor:
    """Order-m moment tensor of the data, in block storage.

    Element i of the result is the sample mean of prod_k x[:, i_k]; only
    blocks with sorted block multi-index are computed and stored.
    """
    arr = as_data_matrix(x)
    if m < 1:
        raise ValidationError(f"order must be >= 1, got {m}")
    if b < 1:
        raise ValidationError(f"block size must be >= 1, got {b}")
    if m == 1:
        return _engines.moment_means(arr, b)
    eng = _engines.resolve_engine(engine)
    if eng == "compiled":
        return _engines.moment_compiled(arr, m, b)
    if eng == "gram":
        return _engines.moment_gram(arr, m, b)
    blocks = _engines.moment_blockwise(arr, m, b)
    return BlockSymTensor(arr.shape[1], m, b, blocks)


def _chunk_bounds(t: int, p: int) -> list[tuple[int, int]]:
    bounds = [t * s // p for s in range(p + 1)]
    return [(bounds[s], bounds[s + 1]) for s in range(p)]


def moment_parallel(x, m: int, b: int = 2, p: int = 1,
                    engine: str = "auto") -> BlockSymTensor:
    """Sample-split moment: p workers over contiguous row chunks.

    Each chunk's moment tensor is computed independently and the results are
    combined as the sample-count-weighted average, in fixed chunk order, so
    repeated runs reduce identically. With p=1 this is exactly `moment`.
    """
    arr = as_data_matrix(x)
    t = arr.shape[0]
    if p < 1:
        raise ValidationError(f"worker count must be >= 1, got {p}")
    if p > t:
        raise ValidationError(f"cannot split {t} rows into {p} non-empty chunks")
    if p == 1:
        return moment(arr, m, b, engine)
    chunks = _chunk_bounds(t, p)
    with ThreadPoolExecutor(max_workers=p) as pool:
        futures = [
            pool.submit(moment, arr[lo:hi], m, b, engine) for lo, hi in chunks
        ]
        parts = [f.result() for f in futures]
    total = parts[0].scale((chunks[0][1] - chunks[0][0]) / t)
    for (lo, hi), part in zip(chunks[1:], parts[1:]):
        total = total + part.scale((hi - lo) / t)
    return total


def moment_parallel_blocks(x, m: int, b: int = 2, p: int = 1,
                           engine: str = "auto") -> BlockSymTensor:
    """Block-split moment: p workers over disjoint ranges of block keys.

    Every element is still computed by exactly one worker with the serial
    summation order, so the result is identical to `moment` bit for bit on
    the compiled engine.
    """
    arr = as_data_matrix(x)
    if p < 1:
        raise ValidationError(f"worker count must be >= 1, got {p}")
    if m == 1 or p == 1:
        return moment(arr, m, b, engine)
    eng = _engines.resolve_engine(engine)
    t, n = arr.shape
    if eng == "compiled":
        keys, col0, edges, offs = _engines._block_layout(n, m, b)
        out = np.zeros(int(offs[-1]))
        layout = (keys, col0, edges, offs)
        bounds = [len(keys) * s // p for s in range(p + 1)]
        with ThreadPoolExecutor(max_workers=p) as pool:
            futures = [
                pool.submit(
                    _engines.moment_compiled, arr, m, b,
                    key_range=(bounds[s], bounds[s + 1]), out=out, layout=layout,
                )
                for s in range(p)
                if bounds[s] < bounds[s + 1]
            ]
            for f in futures:
                f.result()
        out /= t
        return _engines._pack(n, m, b, keys, edges, offs, out)
    # python fallback: split the key list over workers, one einsum per block
    keys = list(_engines.block_keys(-(-n // b), m))
    bounds = [len(keys) * s // p for s in range(p + 1)]
    with ThreadPoolExecutor(max_workers=p) as pool:
        futures = [
            pool.submit(_engines.moment_blockwise, arr, m, b,
                        keys[bounds[s]:bounds[s + 1]])
            for s in range(p)
            if bounds[s] < bounds[s + 1]
        ]
        blocks = {}
        for f in futures:
            blocks.update(f.result())
    return BlockSymTensor(n, m, b, blocks)
