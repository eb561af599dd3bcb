import itertools
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blockcumulants.errors import ValidationError
from blockcumulants.partitions import (
    bell,
    count_F,
    enumerate_partitions,
    enumerate_partitions_min2,
    mult_bound_U,
    mult_count_N,
    stirling2,
    stirling2_min2,
    stirling2_min2_formula,
)


def brute_force_partitions(m, sigma):
    """Independent oracle: all set partitions via assignment vectors."""
    seen = set()
    for labels in itertools.product(range(sigma), repeat=m):
        if len(set(labels)) != sigma:
            continue
        parts = {}
        for element, label in zip(range(1, m + 1), labels):
            parts.setdefault(label, []).append(element)
        canon = tuple(
            sorted((tuple(p) for p in parts.values()), key=lambda p: p[0])
        )
        seen.add(canon)
    return seen


def is_canonical(parts, m):
    flat = sorted(q for part in parts for q in part)
    if flat != list(range(1, m + 1)):
        return False
    if any(list(part) != sorted(part) for part in parts):
        return False
    mins = [part[0] for part in parts]
    return mins == sorted(mins)


class TestEnumerate:
    def test_single_class(self):
        assert enumerate_partitions(3, 1) == (((1, 2, 3),),)

    def test_singletons(self):
        assert enumerate_partitions(3, 3) == (((1,), (2,), (3,)),)

    def test_m4_sigma2_against_brute_force(self):
        got = set(enumerate_partitions(4, 2))
        want = brute_force_partitions(4, 2)
        assert got == want
        assert len(got) == 7

    @pytest.mark.parametrize("m", range(1, 8))
    def test_counts_and_canonical(self, m):
        for sigma in range(1, m + 1):
            parts_list = enumerate_partitions(m, sigma)
            assert len(parts_list) == stirling2(m, sigma)
            assert len(set(parts_list)) == len(parts_list)
            assert all(is_canonical(p, m) for p in parts_list)

    def test_sigma_out_of_range(self):
        with pytest.raises(ValidationError):
            enumerate_partitions(3, 4)
        with pytest.raises(ValidationError):
            enumerate_partitions(3, 0)


class TestEnumerateMin2:
    def test_three_pairings_of_four(self):
        got = set(enumerate_partitions_min2(4, 2))
        assert got == {
            ((1, 2), (3, 4)),
            ((1, 3), (2, 4)),
            ((1, 4), (2, 3)),
        }

    def test_five_into_two(self):
        assert len(enumerate_partitions_min2(5, 2)) == 10

    def test_impossible_split_is_empty(self):
        assert enumerate_partitions_min2(3, 2) == ()

    @pytest.mark.parametrize("m", range(2, 11))
    def test_subset_of_full_enumeration(self, m):
        for sigma in range(1, m // 2 + 1):
            full = set(enumerate_partitions(m, sigma))
            min2 = set(enumerate_partitions_min2(m, sigma))
            assert min2 <= full
            assert min2 == {p for p in full if all(len(part) >= 2 for part in p)}

    @given(st.integers(2, 9), st.integers(1, 4))
    def test_all_parts_at_least_two(self, m, sigma):
        for parts in enumerate_partitions_min2(m, sigma):
            assert all(len(part) >= 2 for part in parts)
            assert is_canonical(parts, m)


class TestCounts:
    def test_stirling_boundaries(self):
        for m in range(1, 11):
            assert stirling2(m, 1) == 1
            assert stirling2(m, m) == 1

    def test_stirling_4_2(self):
        assert stirling2(4, 2) == 7

    @pytest.mark.parametrize(
        "m,sigma,expected",
        [(4, 2, 3), (5, 2, 10), (6, 2, 25), (6, 3, 15), (8, 2, 119)],
    )
    def test_min2_values(self, m, sigma, expected):
        assert stirling2_min2(m, sigma) == expected
        assert stirling2_min2_formula(m, sigma) == expected

    @pytest.mark.parametrize("m", range(2, 11))
    def test_min2_formula_matches_enumeration(self, m):
        for sigma in range(2, m // 2 + 1):
            assert stirling2_min2(m, sigma) == stirling2_min2_formula(m, sigma)

    def test_bell_is_row_sum(self):
        for m in range(1, 11):
            assert bell(m) == sum(stirling2(m, s) for s in range(1, m + 1))
        assert [bell(m) for m in range(6)] == [1, 1, 2, 5, 15, 52]

    def test_F_values(self):
        assert count_F(2) == 1
        assert count_F(3) == 1
        assert count_F(4) == 4  # B(3) - F(3); also 1 + S'(4,2)
        assert count_F(5) == 11
        assert count_F(6) == 41  # 1 + 25 + 15

    @pytest.mark.parametrize("m", range(2, 13))
    def test_F_identity(self, m):
        total = 1 + sum(stirling2_min2(m, s) for s in range(2, m // 2 + 1))
        assert count_F(m) == total

    def test_N_values(self):
        assert mult_count_N(4) == 3
        assert mult_count_N(5) == 10
        assert mult_count_N(6) == 55

    def test_U_bound(self):
        assert mult_bound_U(6) == 2 * (41 - 1)
        for m in range(4, 13):
            assert mult_count_N(m) <= mult_bound_U(m)

    def test_N_requires_m_at_least_4(self):
        with pytest.raises(ValidationError):
            mult_count_N(3)

    def test_enumeration_cap(self):
        with pytest.raises(ValidationError):
            enumerate_partitions(13, 2)

    def test_exactness_large_m(self):
        # triangle recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1) as an
        # independent oracle for the alternating-sum formula
        dp = {(0, 0): 1}
        for n in range(1, 13):
            for k in range(1, n + 1):
                dp[(n, k)] = k * dp.get((n - 1, k), 0) + dp.get((n - 1, k - 1), 0)
        for k in range(1, 13):
            assert stirling2(12, k) == dp[(12, k)]
        assert bell(12) == 4213597
