"""Cumulant tensors of arbitrary order via the central-moment recursion.

The order-m cumulant of centered data equals the order-m central moment
minus, for every partition of the mode set into parts of size at least two,
the symmetrized outer product of the lower-order cumulants picked out by the
part sizes. Orders two and three have no such partitions and coincide with
the central moments; order m never needs order m-1.

The correction is applied block by block: for a stored block key j and a
partition, the sub-keys j restricted to each part are again sorted, so every
factor is itself a stored block of a lower cumulant and the whole summand is
a single outer-product contraction of small dense blocks.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ValidationError
from .moments import as_data_matrix, center, moment
from .partitions import MAX_M, enumerate_partitions_min2
from .symtensor import BlockSymTensor, block_keys

CENTERING_RTOL = 1e-10

_SUBSCRIPTS = "abcdefghijkl"


def _check_centered(x: np.ndarray):
    means = np.abs(x.mean(axis=0))
    rms = np.sqrt(np.mean(x * x, axis=0))
    bad = means > CENTERING_RTOL * np.maximum(rms, 1e-300)
    if bad.any():
        col = int(np.argmax(bad)) + 1
        raise ValidationError(
            f"data is not centered: column {col} has mean {means[col - 1]:.3e}"
        )


def _lower_by_order(lower: Sequence[BlockSymTensor],
                    needed_orders) -> dict[int, BlockSymTensor]:
    by_order = {}
    for tensor in lower:
        by_order[tensor.m] = tensor
    for k in needed_orders:
        if k not in by_order:
            raise ValidationError(f"missing lower cumulant of order {k}")
    return by_order


def outer_prod_cum(m: int, sigma: int, lower: Sequence[BlockSymTensor],
                   per_element: bool = False) -> BlockSymTensor:
    """Sum of symmetrized outer products of lower cumulants, in block form.

    For each stored block key and each min-size-2 partition of the modes into
    sigma parts, multiplies the matching sub-blocks of the lower cumulants
    into the block; summing over all class representatives makes the result
    super-symmetric. ``per_element`` switches to the slow one-element-at-a-
    time path, kept for differential testing of the blockwise route.
    """
    if per_element:
        return _outer_prod_cum_elementwise(m, sigma, lower)[0]
    if not 2 <= sigma <= m // 2:
        raise ValidationError(f"sigma must be in 2..m//2={m // 2}, got {sigma}")
    partitions = enumerate_partitions_min2(m, sigma)
    needed = sorted({len(part) for parts in partitions for part in parts})
    by_order = _lower_by_order(lower, needed)
    ref = by_order[needed[0]]
    n, b = ref.n, ref.b
    sub = _SUBSCRIPTS[:m]
    out = BlockSymTensor.zeros(n, m, b)
    for key, block in out.blocks.items():
        for parts in partitions:
            expr = ",".join("".join(sub[q - 1] for q in part) for part in parts)
            operands = [
                by_order[len(part)].blocks[tuple(key[q - 1] for q in part)]
                for part in parts
            ]
            # pure outer products of small blocks: the direct loop beats
            # per-call contraction-path search
            block += np.einsum(expr + "->" + sub, *operands, optimize=False)
    return out


def _outer_prod_cum_elementwise(m: int, sigma: int,
                                lower: Sequence[BlockSymTensor]) -> tuple[BlockSymTensor, int]:
    """Per-element reference for `outer_prod_cum`, counting multiplications.

    Returns the tensor together with the number of scalar products between
    part values, which is (sigma - 1) per partition per element.
    """
    if not 2 <= sigma <= m // 2:
        raise ValidationError(f"sigma must be in 2..m//2={m // 2}, got {sigma}")
    partitions = enumerate_partitions_min2(m, sigma)
    needed = sorted({len(part) for parts in partitions for part in parts})
    by_order = _lower_by_order(lower, needed)
    ref = by_order[needed[0]]
    n, b = ref.n, ref.b
    out = BlockSymTensor.zeros(n, m, b)
    mults = 0
    for key, block in out.blocks.items():
        for offsets in np.ndindex(block.shape):
            index = tuple((key[q] - 1) * b + offsets[q] + 1 for q in range(m))
            total = 0.0
            for parts in partitions:
                value = by_order[len(parts[0])].get(tuple(index[q - 1] for q in parts[0]))
                for part in parts[1:]:
                    value = value * by_order[len(part)].get(
                        tuple(index[q - 1] for q in part)
                    )
                    mults += 1
                total += value
            block[offsets] = total
    return out, mults


def cumulant(x_centered, m: int, lower: Sequence[BlockSymTensor], b: int = 2,
             engine: str = "auto") -> BlockSymTensor:
    """Order-m cumulant tensor of centered data.

    The order-m central moment minus the partition correction built from the
    lower-order cumulants (orders 2..m-2; empty for m in {2, 3}).
    """
    arr = as_data_matrix(x_centered)
    if m < 2:
        raise ValidationError(f"order must be >= 2, got {m}")
    _check_centered(arr)
    result = moment(arr, m, b, engine=engine)
    if m <= 3:
        return result
    _lower_by_order(lower, range(2, m - 1))
    for sigma in range(2, m // 2 + 1):
        result = result - outer_prod_cum(m, sigma, lower)
    return result


class CumulantSet:
    """Cumulant tensors C_1..C_m of one dataset, sharing (n, b).

    C_1 is the plain mean vector; higher orders are block tensors. Orders are
    1-based: ``cs[k]`` is the order-k cumulant.
    """

    def __init__(self, c1: np.ndarray, tensors: Sequence[BlockSymTensor], b: int):
        self.c1 = np.asarray(c1, dtype=np.float64)
        self.tensors = list(tensors)
        self.n = self.c1.shape[0]
        self.b = b
        for k, tensor in enumerate(self.tensors, start=2):
            if tensor.m != k or tensor.n != self.n or tensor.b != b:
                raise ValidationError("inconsistent cumulant sequence")

    @property
    def max_order(self) -> int:
        return 1 + len(self.tensors)

    def __len__(self) -> int:
        return self.max_order

    def __getitem__(self, order: int):
        if order == 1:
            return self.c1
        if not 2 <= order <= self.max_order:
            raise KeyError(f"no cumulant of order {order}")
        return self.tensors[order - 2]

    def __repr__(self):
        return f"CumulantSet(n={self.n}, b={self.b}, orders=1..{self.max_order})"


def cumulants_upto(x, m_max: int, b: int = 2, engine: str = "auto") -> CumulantSet:
    """All cumulant tensors of order 1..m_max of the raw data.

    C_1 is the column-mean vector of the raw input; the data is centered once
    and every higher order is built ascending, consuming the lower orders
    already computed. Orders two and higher are invariant under the shift, so
    computing everything from the centered data is equivalent to the raw
    definition.
    """
    arr = as_data_matrix(x)
    if not 1 <= m_max <= MAX_M:
        raise ValidationError(f"m_max must be in 1..{MAX_M}, got {m_max}")
    if m_max >= 2 and arr.shape[0] < 2:
        raise ValidationError("at least two samples are required for order >= 2")
    c1 = arr.mean(axis=0)
    tensors: list[BlockSymTensor] = []
    if m_max >= 2:
        centered = center(arr)
        for k in range(2, m_max + 1):
            tensors.append(cumulant(centered, k, tensors, b, engine=engine))
    return CumulantSet(c1, tensors, b)
