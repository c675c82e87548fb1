"""Tests for the counting bounds and census-against-bound reports."""

import math

import pytest
from hypothesis import given, strategies as st

from bounds import (
    BOUND_CSV_COLUMNS,
    asymptotic_leading,
    ball_bound,
    bounds_table,
    dgs_bound,
    minkowski_approximation,
    minkowski_lower_bound,
    minkowski_point_floor,
    rm_bound,
    sphere_bound,
    telescoping_check,
    verify_census_against_bounds,
    zn_exceedance,
    zn_sphere_lower_bound,
)
from conftest import zn
from enumeration import Census, census_zn_dp, count_by_norm
from errors import RankTooSmall
from lattice_core import family, random_integral_lattice


@pytest.mark.parametrize('n,k,expected', [(5, 1, 10), (8, 2, 240), (7, 2, 168), (1, 1, 2)])
def test_sphere_bound(n, k, expected):
    assert sphere_bound(n, k) == expected


@pytest.mark.parametrize('n,k,expected', [(5, 1, 11), (8, 2, 329), (1, 1, 3)])
def test_ball_bound(n, k, expected):
    assert ball_bound(n, k) == expected


@pytest.mark.parametrize('n,k,expected', [(4, 1, 8), (10, 2, 400), (5, 3, 2000)])
def test_asymptotic_leading(n, k, expected):
    assert asymptotic_leading(n, k) == expected


@pytest.mark.parametrize('n,k,expected', [(6, 1, 3), (8, 2, 10), (12, 3, 56)])
def test_zn_sphere_lower_bound(n, k, expected):
    assert zn_sphere_lower_bound(n, k) == expected


def test_zn_sphere_lower_bound_needs_rank_six():
    with pytest.raises(RankTooSmall):
        zn_sphere_lower_bound(5, 1)


@pytest.mark.parametrize('n,a,expected', [(7, 0, 14), (8, 1, 240), (3, 1, 20)])
def test_dgs_bound(n, a, expected):
    assert dgs_bound(n, a) == expected


def test_sphere_bound_is_dgs_with_k_minus_one_angles():
    for n in range(1, 65):
        for k in range(1, 65):
            assert sphere_bound(n, k) == dgs_bound(n, k - 1)


def test_bad_arguments():
    with pytest.raises(ValueError):
        sphere_bound(0, 1)
    with pytest.raises(ValueError):
        ball_bound(3, 0)
    with pytest.raises(ValueError):
        dgs_bound(3, -1)
    with pytest.raises(ValueError):
        minkowski_lower_bound(3, 0)


def test_minkowski_lower_bound():
    assert minkowski_lower_bound(2, 1) == pytest.approx(math.pi / 4, rel=1e-12)
    assert minkowski_lower_bound(1, 1) == pytest.approx(1.0, rel=1e-12)
    assert minkowski_lower_bound(8, 2) == pytest.approx(math.pi ** 4 * 16 / (24 * 256), rel=1e-12)


def test_minkowski_point_floor():
    assert minkowski_point_floor(2, 1) == 1
    # 2^-2 vol(sqrt(4) B_2) = pi
    assert minkowski_point_floor(2, 4) == 7
    assert minkowski_approximation(8, 2) > 0


def test_rm_bound():
    assert rm_bound(2, 1, 1) == pytest.approx(2 * math.exp(math.log(4) ** 2), rel=1e-12)
    assert rm_bound(8, 1, 1) == pytest.approx(2 * math.exp(math.log(16) ** 2), rel=1e-12)
    assert rm_bound(5, 1e-12, 3.0) == pytest.approx(2.0, rel=1e-9)
    assert rm_bound(2, 1) == rm_bound(2, 1, 1.0)
    with pytest.raises(ValueError):
        rm_bound(2, 1, 0)


def test_bounds_table():
    table = bounds_table(8, 2)
    assert table['sphere_upper'].tolist() == [16, 240]
    assert table['ball_upper'].tolist() == [17, 329]
    assert table['dgs'].tolist() == [16, 240]


@given(st.integers(min_value=1, max_value=40), st.integers(min_value=1, max_value=12))
def test_telescoping(n, k):
    assert telescoping_check(n, k).passed


def test_z8_census_passes():
    report = verify_census_against_bounds(count_by_norm(zn(8), 2), 'Z8', 1)
    assert report.passed
    rows = {row['k']: row for row in report.rows}
    assert (rows[1]['on_sphere'], rows[1]['sphere_upper']) == (16, 16)
    assert (rows[2]['in_ball'], rows[2]['ball_upper']) == (129, 329)
    assert report.zn_exceeded_at == []


def test_e8_meets_sphere_bound_with_equality(e8):
    report = verify_census_against_bounds(count_by_norm(e8, 2), 'E8', e8.det_gram)
    assert report.passed
    assert report.rows[1]['on_sphere'] == report.rows[1]['sphere_upper'] == 240
    assert report.rows[1]['sphere_tight']
    assert 'minkowski_floor' in report.rows[1]
    assert report.zn_exceeded_at == [2]


def test_z1_is_tight_at_one():
    report = verify_census_against_bounds(census_zn_dp(1, 1), 'Z1', 1)
    assert report.passed
    assert report.rows[0]['sphere_tight'] and report.rows[0]['ball_tight']


def test_impossible_census_fails():
    report = verify_census_against_bounds(Census(1, 1, (1, 4), 'dp'), 'fake')
    assert not report.passed
    assert report.verdict == 'FAIL'


def test_bound_report_frame():
    report = verify_census_against_bounds(census_zn_dp(3, 3), 'Z3', 1)
    assert list(report.to_frame().columns) == BOUND_CSV_COLUMNS
    assert 'asymptotic_leading' in report.to_frame(full=True).columns
    assert report.to_dict()['verdict'] == 'PASS'


def test_zn_exceedance_never_for_zn():
    assert zn_exceedance(census_zn_dp(5, 6)) == []


@given(st.integers(min_value=2, max_value=60), st.integers(min_value=1, max_value=15))
def test_bounds_increase_strictly(n, k):
    assert sphere_bound(n + 1, k) > sphere_bound(n, k)
    assert sphere_bound(n, k + 1) > sphere_bound(n, k)
    assert ball_bound(n + 1, k) > ball_bound(n, k)
    assert ball_bound(n, k + 1) > ball_bound(n, k)


def test_rank_one_sphere_bound_is_flat():
    assert {sphere_bound(1, k) for k in range(1, 10)} == {2}
    assert [ball_bound(1, k) for k in range(1, 5)] == [3, 7, 11, 15]


@pytest.mark.parametrize('name,rank', [
    ('Zn', 8), ('An', 4), ('Dn', 4), ('Dn', 5), ('E6', 6), ('E7', 7), ('E8', 8),
])
def test_family_censuses_pass_up_to_norm_six(name, rank):
    lattice = family(name, rank)
    report = verify_census_against_bounds(count_by_norm(lattice, 6), lattice.name, lattice.det_gram)
    assert report.passed, report.rows
    assert len(report.rows) == 6


@pytest.mark.slow
@pytest.mark.parametrize('seed', range(20))
def test_random_integral_censuses_pass_up_to_norm_six(seed):
    lattice = random_integral_lattice(1 + seed % 8, seed, entry_bound=2)
    report = verify_census_against_bounds(count_by_norm(lattice, 6), lattice.name, lattice.det_gram)
    assert report.passed, report.rows
