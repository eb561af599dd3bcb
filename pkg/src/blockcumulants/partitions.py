"""Canonical set partitions of (1..m) and the counting functions built on them.

A partition is kept in canonical form: each part is an increasing tuple and
parts are ordered by their smallest element, so equality of canonical forms
is equality of partitions. Enumerations are cached per (m, sigma); m is
capped at 12, which is already beyond any practical cumulant order.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial

from .errors import ValidationError

MAX_M = 12

Partition = tuple[tuple[int, ...], ...]


def _check_m(m: int):
    if not 1 <= m <= MAX_M:
        raise ValidationError(f"m must be in 1..{MAX_M}, got {m}")


@lru_cache(maxsize=None)
def enumerate_partitions(m: int, sigma: int) -> tuple[Partition, ...]:
    """All canonical partitions of (1..m) into exactly sigma parts.

    Generated from restricted growth strings: element 1 opens part 1 and each
    later element either joins an existing part or opens the next one, which
    yields every class representative exactly once, already canonical.
    """
    _check_m(m)
    if not 1 <= sigma <= m:
        raise ValidationError(f"sigma must be in 1..m={m}, got {sigma}")
    out: list[Partition] = []
    parts: list[list[int]] = []

    def extend(element: int):
        if element > m:
            if len(parts) == sigma:
                out.append(tuple(tuple(p) for p in parts))
            return
        # remaining elements must still be able to open the missing parts
        remaining = m - element + 1
        missing = sigma - len(parts)
        if missing > remaining:
            return
        for p in parts:
            p.append(element)
            extend(element + 1)
            p.pop()
        if len(parts) < sigma:
            parts.append([element])
            extend(element + 1)
            parts.pop()

    extend(1)
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_partitions_min2(m: int, sigma: int) -> tuple[Partition, ...]:
    """Canonical partitions of (1..m) into sigma parts, all of size >= 2.

    Independent of :func:`enumerate_partitions`: a pruned search that never
    builds a partition with a part that cannot reach size two. Empty when no
    such partition exists (e.g. sigma > m // 2).
    """
    _check_m(m)
    if sigma < 1:
        raise ValidationError(f"sigma must be >= 1, got {sigma}")
    out: list[Partition] = []
    parts: list[list[int]] = []

    def extend(element: int, deficient: int):
        # deficient = number of open parts still of size one
        remaining = m - element + 1
        if element > m:
            if len(parts) == sigma and deficient == 0:
                out.append(tuple(tuple(p) for p in parts))
            return
        # every deficient part needs one more element, every unopened part two
        if remaining < deficient + 2 * (sigma - len(parts)):
            return
        for p in parts:
            was_single = len(p) == 1
            p.append(element)
            extend(element + 1, deficient - was_single)
            p.pop()
        if len(parts) < sigma:
            parts.append([element])
            extend(element + 1, deficient + 1)
            parts.pop()

    extend(1, 0)
    return tuple(out)


@lru_cache(maxsize=None)
def stirling2(m: int, sigma: int) -> int:
    """Stirling number of the second kind S(m, sigma), by the alternating sum.

    S(m, sigma) = (1/sigma!) * sum_{j=0..sigma} (-1)^(sigma-j) C(sigma, j) j^m
    """
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if not 1 <= sigma <= m:
        raise ValidationError(f"sigma must be in 1..m={m}, got {sigma}")
    total = sum((-1) ** (sigma - j) * comb(sigma, j) * j**m for j in range(sigma + 1))
    assert total % factorial(sigma) == 0
    return total // factorial(sigma)


def stirling2_min2(m: int, sigma: int) -> int:
    """Number of partitions of an m-set into sigma parts of size >= 2.

    Backed by the enumeration; `stirling2_min2_formula` computes the same
    value from the composition sum and the two are cross-checked in tests.
    Defined as 1 for sigma == 1 (for m >= 2 the single part has size m).
    """
    if sigma == 1:
        _check_m(m)
        return 1
    return len(enumerate_partitions_min2(m, sigma))


def stirling2_min2_formula(m: int, sigma: int) -> int:
    """Closed-form count of min-size-2 partitions via ordered compositions.

    Sums the multinomial m! / (m_1! ... m_sigma!) over ordered compositions
    of m into sigma parts of size >= 2, then divides by sigma!.
    """
    _check_m(m)
    if sigma == 1:
        return 1
    if sigma < 1 or 2 * sigma > m:
        return 0

    def compositions(total: int, parts: int):
        if parts == 1:
            if total >= 2:
                yield (total,)
            return
        for first in range(2, total - 2 * (parts - 1) + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    numerator = 0
    base = factorial(m)
    for composition in compositions(m, sigma):
        term = base
        for part_size in composition:
            term //= factorial(part_size)
        numerator += term
    assert numerator % factorial(sigma) == 0
    return numerator // factorial(sigma)


@lru_cache(maxsize=None)
def bell(m: int) -> int:
    """Bell number B(m): partitions of an m-set into any number of parts."""
    if m == 0:
        return 1
    _check_m(m)
    return sum(stirling2(m, sigma) for sigma in range(1, m + 1))


@lru_cache(maxsize=None)
def count_F(m: int) -> int:
    """Partitions of an m-set with no singleton part.

    F(2) = F(3) = 1 and F(m) = B(m-1) - F(m-1); equals
    1 + sum_{sigma=2..m//2} S'(m, sigma).
    """
    _check_m(m)
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    if m in (2, 3):
        return 1
    return bell(m - 1) - count_F(m - 1)


def mult_count_N(m: int) -> int:
    """Scalar multiplications per element for the order-m correction sum.

    N(m) = sum_{sigma=2..m//2} (sigma - 1) * S'(m, sigma).
    """
    if m < 4:
        raise ValidationError(f"m must be >= 4, got {m}")
    _check_m(m)
    return sum((sigma - 1) * stirling2_min2(m, sigma) for sigma in range(2, m // 2 + 1))


def mult_bound_U(m: int) -> int:
    """Upper bound U(m) = (m//2 - 1) * (F(m) - 1) on the count N(m)."""
    if m < 4:
        raise ValidationError(f"m must be >= 4, got {m}")
    _check_m(m)
    return (m // 2 - 1) * (count_F(m) - 1)
