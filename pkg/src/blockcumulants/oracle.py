"""Naive dense reference implementations, for verification and baselines.

Everything here works on full n^m arrays with no symmetry exploitation and
is kept independent of the block code paths: moments come from a literal
chunked product-sum, the order-4 cumulant hard-codes its three pairings, and
the general cumulants use the classical raw-moment recursion over all set
partitions (including singleton parts) with the (|parts|-1)! (-1)^(|parts|-1)
coefficients - a different formula, partition set and data path than the
block pipeline, so agreement between the two is real evidence.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from .errors import ResourceGuardError, ValidationError
from .moments import as_data_matrix
from .partitions import MAX_M, enumerate_partitions

DENSE_ELEMENT_GUARD = 10**8
DENSE_MAX_ORDER = 6
_EINSUM_CHUNK = 512

_SUBSCRIPTS = "abcdefghijkl"


def _guard(n: int, m: int):
    if n**m > DENSE_ELEMENT_GUARD:
        raise ResourceGuardError(
            f"dense tensor of {n}^{m} elements exceeds the guard of "
            f"{DENSE_ELEMENT_GUARD} elements"
        )


def dense_moment(x, m: int, impl: str = "numpy") -> np.ndarray:
    """Order-m moment tensor as a full dense array, every index computed.

    impl="numpy" evaluates the defining product-sum by chunked einsum;
    impl="compiled" (m=4 only) runs the element-at-a-time kernel used as the
    benchmark baseline. Both are symmetry-oblivious.
    """
    arr = as_data_matrix(x)
    if m < 1:
        raise ValidationError(f"order must be >= 1, got {m}")
    t, n = arr.shape
    _guard(n, m)
    if impl == "compiled":
        if m != 4:
            raise ValidationError("the compiled naive kernel is order-4 only")
        from . import _engines

        if not _engines.HAVE_COMPILED:
            raise ValidationError("compiled kernel requested but not built")
        return _engines.naive_moment4_compiled(arr)
    if impl != "numpy":
        raise ValidationError(f"unknown impl {impl!r}")
    sub = _SUBSCRIPTS[:m]
    expr = ",".join("t" + c for c in sub) + "->" + sub
    out = np.zeros((n,) * m)
    for s in range(0, t, _EINSUM_CHUNK):
        xs = arr[s : s + _EINSUM_CHUNK]
        out += np.einsum(expr, *([xs] * m), optimize=True)
    out /= t
    return out


def dense_cumulant4_direct(x, impl: str = "numpy") -> np.ndarray:
    """Order-4 cumulant over all n^4 indices by the three-pairings formula.

    Central moment element minus cov(i1,i2)cov(i3,i4), cov(i1,i3)cov(i2,i4)
    and cov(i1,i4)cov(i2,i3).
    """
    arr = as_data_matrix(x)
    t, n = arr.shape
    if t < 2:
        raise ValidationError("at least two samples are required")
    _guard(n, 4)
    centered = arr - arr.mean(axis=0)
    m4 = dense_moment(centered, 4, impl=impl)
    cov = centered.T @ centered / t
    m4 -= np.einsum("ab,cd->abcd", cov, cov)
    m4 -= np.einsum("ac,bd->abcd", cov, cov)
    m4 -= np.einsum("ad,bc->abcd", cov, cov)
    return m4


def dense_cumulants_upto(x, m_max: int) -> list[np.ndarray]:
    """Dense cumulants of order 1..m_max from raw moments of all orders.

    For each order, sums over every partition of the mode set (singletons
    included) the outer product of the raw moments of the part sizes, scaled
    by (sigma - 1)! (-1)^(sigma - 1) where sigma is the part count.
    """
    arr = as_data_matrix(x)
    if not 1 <= m_max <= min(DENSE_MAX_ORDER, MAX_M):
        raise ValidationError(
            f"m_max must be in 1..{DENSE_MAX_ORDER} for the dense recursion"
        )
    n = arr.shape[1]
    _guard(n, m_max)
    raw = {k: dense_moment(arr, k) for k in range(1, m_max + 1)}
    out = []
    for m in range(1, m_max + 1):
        sub = _SUBSCRIPTS[:m]
        cum = np.zeros((n,) * m)
        for sigma in range(1, m + 1):
            coeff = factorial(sigma - 1) * (-1) ** (sigma - 1)
            for parts in enumerate_partitions(m, sigma):
                expr = ",".join("".join(sub[q - 1] for q in part) for part in parts)
                cum += coeff * np.einsum(
                    expr + "->" + sub, *[raw[len(part)] for part in parts],
                    optimize=False,
                )
        out.append(cum)
    return out
