"""Moment-computation engines and import-time kernel selection.

Three interchangeable implementations fill the block table of a moment
tensor:

* ``compiled``  - Cython kernel, per-block accumulation over sample chunks.
                  Deterministic summation order; threads may split the block
                  list without changing any result bit.
* ``gram``      - pure numpy: product columns for the leading half of the
                  modes form a wide matrix W whose Gram matrix W'W contains
                  every stored block as a sub-matrix. Fast through BLAS.
* ``blockwise`` - one einsum per block; the readable reference formulation.

``auto`` resolves to ``compiled`` when the extension imported, else ``gram``.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import ResourceGuardError, ValidationError
from .symtensor import BlockSymTensor, block_edges, block_keys

try:
    from . import _core
except ImportError:  # compiled extension unavailable; pure-python fallback
    _core = None

HAVE_COMPILED = _core is not None

ENGINES = ("auto", "compiled", "gram", "blockwise")


def resolve_engine(engine: str) -> str:
    if engine not in ENGINES:
        raise ValidationError(f"unknown engine {engine!r}, expected one of {ENGINES}")
    if engine == "auto":
        return "compiled" if HAVE_COMPILED else "gram"
    if engine == "compiled" and not HAVE_COMPILED:
        raise ValidationError("compiled kernel requested but the extension is not built")
    return engine


def _block_layout(n: int, m: int, b: int):
    """Key list plus the flat (col0, edges, offsets) arrays the kernel uses."""
    n_bar = -(-n // b)
    keys = list(block_keys(n_bar, m))
    col0 = np.array([[(j - 1) * b for j in k] for k in keys], dtype=np.int64)
    edges = np.array([block_edges(k, n, b) for k in keys], dtype=np.int64)
    offs = np.zeros(len(keys) + 1, dtype=np.int64)
    np.cumsum(edges.prod(axis=1), out=offs[1:])
    return keys, col0, edges, offs


def _pack(n, m, b, keys, edges, offs, flat) -> BlockSymTensor:
    blocks = {}
    for k, key in enumerate(keys):
        blocks[key] = flat[offs[k]:offs[k + 1]].reshape(tuple(edges[k]))
    return BlockSymTensor(n, m, b, blocks)


def vector_blocks(vec: np.ndarray, b: int) -> BlockSymTensor:
    """An n-vector as an order-1 block tensor."""
    n = vec.shape[0]
    n_bar = -(-n // b)
    blocks = {
        (j,): vec[(j - 1) * b : min(j * b, n)].copy()
        for j in range(1, n_bar + 1)
    }
    return BlockSymTensor(n, 1, b, blocks)


def moment_means(x: np.ndarray, b: int) -> BlockSymTensor:
    """Order-1 moment: the column means, split into blocks."""
    return vector_blocks(x.mean(axis=0), b)


# -- compiled engine ---------------------------------------------------------


def moment_compiled(x: np.ndarray, m: int, b: int, key_range=None,
                    out=None, layout=None) -> BlockSymTensor:
    """Block moment tensor via the Cython kernel.

    ``key_range``/``out``/``layout`` exist so that block-parallel callers can
    fill disjoint ranges of one shared buffer; plain calls leave them unset.
    """
    t, n = x.shape
    keys, col0, edges, offs = layout if layout is not None else _block_layout(n, m, b)
    if out is None:
        out = np.zeros(int(offs[-1]))
    k0, k1 = key_range if key_range is not None else (0, len(keys))
    xt = np.ascontiguousarray(x.T)
    _core.moment_blocks(xt, col0, edges, out, offs, k0, k1)
    if key_range is not None:
        return out
    out /= t
    return _pack(n, m, b, keys, edges, offs, out)


def naive_moment4_compiled(x: np.ndarray) -> np.ndarray:
    """Dense order-4 moment via the element-at-a-time Cython kernel."""
    t, n = x.shape
    out = np.zeros((n, n, n, n))
    _core.naive_moment4(np.ascontiguousarray(x.T), out)
    out /= t
    return out


# -- gram engine -------------------------------------------------------------

GRAM_CHUNK = 4096
GRAM_ELEMENT_GUARD = 2 * 10**8


def _gather_indices(tuples, h: int, n: int, b: int):
    """Per-mode source-column arrays for the stacked product-column matrix.

    Column c of the matrix is the elementwise product over modes q of data
    column gather[q][c]; per tuple the columns run row-major over the
    within-block offsets.
    """
    gather = [[] for _ in range(h)]
    for tup in tuples:
        ranges = [np.arange((j - 1) * b, min(j * b, n)) for j in tup]
        mesh = np.meshgrid(*ranges, indexing="ij")
        for q in range(h):
            gather[q].append(mesh[q].ravel())
    return [np.concatenate(g) for g in gather]


def _product_columns(xs: np.ndarray, gather) -> np.ndarray:
    w = xs[:, gather[0]]
    for g in gather[1:]:
        w = w * xs[:, g]
    return w


def moment_gram(x: np.ndarray, m: int, b: int) -> BlockSymTensor:
    """Block moment tensor from Gram matrices of product columns.

    Modes are split into a leading group of h = m // 2 and a trailing group
    of m - h; every stored block is a sub-matrix of (W_left)' @ (W_right).
    For even m both sides share one matrix and a single square product does
    the job; for odd m the left tuples are grouped by their largest entry so
    each group multiplies only the right tuples that can follow it.
    """
    t, n = x.shape
    n_bar = -(-n // b)
    h = m // 2
    square = (m - h) == h
    if square:
        left = list(block_keys(n_bar, h))
        right = left
    else:
        # grouped by last entry; within a group the order stays lexicographic
        left = sorted(block_keys(n_bar, h), key=lambda tup: (tup[-1], tup))
        right = list(block_keys(n_bar, m - h))

    def tuple_sizes(tuples):
        sizes = [int(np.prod(block_edges(tup, n, b))) for tup in tuples]
        starts = np.zeros(len(tuples) + 1, dtype=np.int64)
        np.cumsum(sizes, out=starts[1:])
        return starts

    lstarts = tuple_sizes(left)
    rstarts = lstarts if square else tuple_sizes(right)
    if int(lstarts[-1]) * int(rstarts[-1]) > GRAM_ELEMENT_GUARD:
        raise ResourceGuardError(
            f"gram engine would allocate {int(lstarts[-1])}x{int(rstarts[-1])} "
            "scratch; use the compiled engine for this size"
        )
    lgather = _gather_indices(left, h, n, b)
    rgather = lgather if square else _gather_indices(right, m - h, n, b)
    gram = np.zeros((int(lstarts[-1]), int(rstarts[-1])))
    if square:
        for s in range(0, t, GRAM_CHUNK):
            wl = _product_columns(x[s : s + GRAM_CHUNK], lgather)
            gram += wl.T @ wl
    else:
        # column starts of the valid right suffix and left rows per group
        group_cols = {}
        for k, tup in enumerate(left):
            v = tup[-1]
            lo, hi, rstart = group_cols.get(v, (lstarts[k], lstarts[k], None))
            if rstart is None:
                rfirst = next(i for i, r in enumerate(right) if r[0] >= v)
                rstart = int(rstarts[rfirst])
            group_cols[v] = (min(lo, int(lstarts[k])), int(lstarts[k + 1]), rstart)
        for s in range(0, t, GRAM_CHUNK):
            xs = x[s : s + GRAM_CHUNK]
            wl = _product_columns(xs, lgather)
            wr = _product_columns(xs, rgather)
            for lo, hi, rstart in group_cols.values():
                gram[lo:hi, rstart:] += wl[:, lo:hi].T @ wr[:, rstart:]
    gram /= t

    lindex = {tup: k for k, tup in enumerate(left)}
    rindex = lindex if square else {tup: k for k, tup in enumerate(right)}
    blocks = {}
    for key in block_keys(n_bar, m):
        ltup, rtup = key[:h], key[h:]
        li, ri = lindex[ltup], rindex[rtup]
        sub = gram[lstarts[li]:lstarts[li + 1], rstarts[ri]:rstarts[ri + 1]]
        blocks[key] = sub.reshape(block_edges(key, n, b)).copy()
    return BlockSymTensor(n, m, b, blocks)


# -- blockwise engine ---------------------------------------------------------

_SUBSCRIPTS = "abcdefghijkl"


def moment_block(x: np.ndarray, key, b: int) -> np.ndarray:
    """One dense block of the moment tensor, straight from the definition.

    Element at offsets (o_1..o_m) is the sample mean of the product of the
    referenced columns: (1/t) sum_l prod_k x[l, (j_k - 1) b + o_k].
    """
    t, n = x.shape
    m = len(key)
    if list(key) != sorted(key):
        raise ValidationError(f"block index {tuple(key)} is not sorted")
    n_bar = -(-n // b)
    if any(j < 1 or j > n_bar for j in key):
        raise ValidationError(f"block index {tuple(key)} out of range 1..{n_bar}")
    cols = [x[:, (j - 1) * b : min(j * b, n)] for j in key]
    sub = _SUBSCRIPTS[:m]
    expr = ",".join("t" + c for c in sub) + "->" + sub
    return np.einsum(expr, *cols, optimize=True) / t


def moment_blockwise(x: np.ndarray, m: int, b: int, keys=None) -> dict:
    """Assemble the block table one einsum at a time (reference path)."""
    t, n = x.shape
    n_bar = -(-n // b)
    if keys is None:
        keys = block_keys(n_bar, m)
    return {key: moment_block(x, key, b) for key in keys}
