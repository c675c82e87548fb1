"""Tests for exact binomials, divisor sums and the square-count floors."""

import math

import pytest
from hypothesis import given, strategies as st

from arithmetic import (
    PI_SQUARED_LOWER,
    binomial,
    chi,
    claim_a1_floors,
    divisor_table,
    footnote_identity_check,
    induction_step_check,
    jacobi_r4,
    jacobi_r6,
    jacobi_r8,
    jacobi_table,
    zn_lower_bound_check,
)
from enumeration import census_zn_dp
from errors import EvenArgument, RankTooSmall


@given(st.integers(min_value=0, max_value=300), st.integers(min_value=0, max_value=300))
def test_binomial_matches_math_comb(n, k):
    assert binomial(n, k) == math.comb(n, k)


def test_binomial_edges():
    assert binomial(5, 7) == 0
    assert binomial(0, 0) == 1
    with pytest.raises(ValueError):
        binomial(-1, 0)
    with pytest.raises(ValueError):
        binomial(3, -1)


def test_divisor_table():
    assert divisor_table(12).divisors == (1, 2, 3, 4, 6, 12)
    assert divisor_table(49).divisors == (1, 7, 49)
    assert divisor_table(12).sigma(1) == 28
    with pytest.raises(ValueError):
        divisor_table(0)


@pytest.mark.parametrize('m,expected', [(2, 0), (5, 1), (7, -1), (1, 1)])
def test_chi(m, expected):
    assert chi(m) == expected


@pytest.mark.parametrize('k,expected', [(1, 8), (3, 32), (9, 104)])
def test_r4(k, expected):
    assert jacobi_r4(k) == expected


def test_r4_rejects_even():
    with pytest.raises(EvenArgument):
        jacobi_r4(2)


@pytest.mark.parametrize('k,expected', [(1, 12), (2, 60)])
def test_r6(k, expected):
    assert jacobi_r6(k) == expected


@pytest.mark.parametrize('k,expected', [(1, 16), (2, 112), (3, 448)])
def test_r8(k, expected):
    assert jacobi_r8(k) == expected


def test_formulas_match_zn_series():
    z4, z6, z8 = census_zn_dp(4, 30), census_zn_dp(6, 30), census_zn_dp(8, 30)
    for k in range(1, 31):
        if k % 2:
            assert jacobi_r4(k) == z4.on_sphere[k]
        assert jacobi_r6(k) == z6.on_sphere[k]
        assert jacobi_r8(k) == z8.on_sphere[k]


def test_jacobi_table():
    report = jacobi_table(20)
    assert report.passed
    assert report.rows[1]['r4'] is None
    assert report.rows[8]['r4'] == 104


@pytest.mark.parametrize('k', range(1, 41))
def test_floors_hold(k):
    report = claim_a1_floors(k)
    assert report.passed, report.failures


def test_floor_rows_at_small_k():
    rows = {row['claim']: row for row in claim_a1_floors(1).rows}
    assert (rows['r6 >= C(k+2,2)']['lhs'], rows['r6 >= C(k+2,2)']['rhs']) == (12, 3)
    assert (rows['r8 >= C(k+3,3)']['lhs'], rows['r8 >= C(k+3,3)']['rhs']) == (16, 4)
    assert (rows['r4 >= 2k+3']['lhs'], rows['r4 >= 2k+3']['rhs']) == (8, 5)
    even = {row['claim']: row for row in claim_a1_floors(2).rows}
    assert 'r4 >= 2k+3' not in even
    assert even['r8 >= 14k^3']['lhs'] == 112


def test_footnote_identity_examples():
    assert footnote_identity_check(2, 0).passed
    report = footnote_identity_check(2, 3)
    assert report.rows[0]['lhs'] == 10
    assert report.passed


@given(st.integers(min_value=2, max_value=15), st.integers(min_value=0, max_value=20))
def test_footnote_identity(m, k):
    assert footnote_identity_check(m, k).passed


@pytest.mark.parametrize('n', [6, 7, 8, 11, 12])
def test_zn_lower_bound(n):
    report = zn_lower_bound_check(n, 6)
    assert report.passed
    reductions = [row for row in report.rows if 'Z^{n-1}' in row['claim']]
    assert bool(reductions) == bool(n % 2)


def test_zn_lower_bound_needs_rank_six():
    with pytest.raises(RankTooSmall):
        zn_lower_bound_check(5, 3)


@pytest.mark.parametrize('n,k_max', [(5, 5), (8, 5), (10, 10), (12, 10)])
def test_induction_step(n, k_max):
    report = induction_step_check(n, k_max)
    assert report.passed
    assert len(report.rows) == k_max + 1


def test_r6_floor_uses_a_lower_bound_on_pi_squared():
    assert PI_SQUARED_LOWER < math.pi ** 2
    true_coefficient = 32 - 8 * math.pi ** 2 / 3
    for k in (1, 7, 30):
        row = next(r for r in claim_a1_floors(k).rows if r['claim'] == 'r6 >= (32 - 8pi^2/3) k^2')
        assert row['rhs'] >= true_coefficient * k * k
