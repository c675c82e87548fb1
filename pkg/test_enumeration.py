"""Tests for the three census methods and their cross-checks."""

from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from config import DEFAULT_CONFIG
from conftest import e8_plus_z, zn
from enumeration import (
    Census,
    census_by_components,
    census_convolve,
    census_oracle,
    census_zn_dp,
    certified_box_radius,
    compute_census,
    count_by_norm,
    list_vectors_with_norm,
    point_census,
    smallest_eigenvalue_lower_bound,
)
from errors import InsufficientTruncation, MethodMismatch, ResourceLimitExceeded
from lattice_core import ExplicitDescriptor, direct_sum, family, make_lattice, random_integral_lattice


def test_z4_norm_one():
    census = count_by_norm(zn(4), 1)
    assert census.on_sphere == (1, 8)


def test_e8_has_240_roots(e8):
    census = count_by_norm(e8, 2)
    assert census.on_sphere == (1, 0, 240)
    assert census.in_ball(2) == 241


def test_z8_ball_of_norm_two():
    census = count_by_norm(zn(8), 2)
    assert census.on_sphere == (1, 16, 112)
    assert census.in_ball(2) == 129


def test_z2_by_every_method():
    expected = (1, 4, 4, 0, 4)
    assert count_by_norm(zn(2), 4).on_sphere == expected
    assert census_oracle(zn(2), 4).on_sphere == expected
    assert census_zn_dp(2, 4).on_sphere == expected


def test_hexagonal_lattice_only_has_even_norms(a2):
    census = census_oracle(a2, 8)
    assert census.on_sphere == (1, 0, 6, 0, 0, 0, 6, 0, 6)
    assert count_by_norm(a2, 8).on_sphere == census.on_sphere


def test_z1_squares():
    census = count_by_norm(zn(1), 9)
    assert [k for k, m in enumerate(census.on_sphere) if m] == [0, 1, 4, 9]
    assert all(m == 2 for m in census.on_sphere[1:] if m)


@pytest.mark.parametrize('n,k,expected', [(8, 2, 112), (6, 2, 60), (1, 4, 2), (1, 5, 0)])
def test_zn_dp_values(n, k, expected):
    assert census_zn_dp(n, max(k, 2)).on_sphere[k] == expected


def test_convolution_matches_dp():
    z4 = count_by_norm(zn(4), 2)
    assert census_convolve(z4, z4, 2).on_sphere == census_zn_dp(8, 2).on_sphere


def test_point_census_is_identity():
    z3 = census_zn_dp(3, 5)
    assert census_convolve(z3, point_census(5), 5).on_sphere == z3.on_sphere


def test_e8_plus_z1_by_convolution(e8):
    convolved = census_convolve(count_by_norm(e8, 2), census_zn_dp(1, 2), 2)
    # 240 from E8, nothing of norm 2 from Z1
    assert convolved.on_sphere[2] == 240
    assert count_by_norm(e8_plus_z(1), 2).on_sphere == convolved.on_sphere
    assert census_by_components(e8_plus_z(1), 2).on_sphere == convolved.on_sphere


def test_convolve_needs_enough_truncation():
    with pytest.raises(InsufficientTruncation):
        census_convolve(census_zn_dp(2, 2), census_zn_dp(2, 4), 4)


def test_census_rejects_impossible_counts():
    with pytest.raises(ValueError):
        Census(1, 1, (1, 3), 'dp')
    with pytest.raises(ValueError):
        Census(1, 1, (2, 2), 'dp')
    with pytest.raises(ValueError):
        Census(1, 2, (1, 2), 'dp')


def test_dp_only_for_zn(e8):
    with pytest.raises(MethodMismatch):
        compute_census(e8, 2, 'dp')
    assert compute_census(zn(5), 2, 'dp').method == 'dp'
    with pytest.raises(MethodMismatch):
        compute_census(e8, 2, 'convolved')


def test_node_limit():
    tight = replace(DEFAULT_CONFIG, node_limit=10)
    with pytest.raises(ResourceLimitExceeded) as excinfo:
        count_by_norm(zn(8), 4, tight)
    assert excinfo.value.limit == 10


def test_oracle_limits(e8):
    with pytest.raises(ResourceLimitExceeded):
        census_oracle(e8, 2)
    small_box = replace(DEFAULT_CONFIG, oracle_max_points=10)
    with pytest.raises(ResourceLimitExceeded):
        census_oracle(zn(3), 4, small_box)


def test_certified_box_radius():
    assert smallest_eigenvalue_lower_bound([[1, 0], [0, 1]]) <= 1
    assert certified_box_radius([[1, 0], [0, 1]], 4) >= 2
    # A2 has smallest eigenvalue 1, so norm 8 needs |x_i| up to sqrt(8)
    assert certified_box_radius([[2, 1], [1, 2]], 8) >= 2


def test_short_vector_lists(e8, a2):
    roots = list_vectors_with_norm(e8, 2)
    assert len(roots.vectors) == 120
    assert roots.count == 240
    assert all(e8.norm(v) == 2 for v in roots.vectors)
    assert len(set(roots.with_negatives())) == 240
    assert len(list_vectors_with_norm(zn(3), 1).vectors) == 3
    assert len(list_vectors_with_norm(a2, 2).vectors) == 3


def test_first_nonzero_coordinate_is_positive():
    for v in list_vectors_with_norm(zn(3), 2).vectors:
        assert next(c for c in v if c) > 0


def test_workers_give_identical_counts():
    lattice = family('Dn', 5)
    serial = count_by_norm(lattice, 4)
    parallel = count_by_norm(lattice, 4, workers=2)
    assert serial.on_sphere == parallel.on_sphere


def test_float_pruning_agrees_with_exact():
    lattice = family('Dn', 6)
    exact = count_by_norm(lattice, 4)
    floating = count_by_norm(lattice, 4, replace(DEFAULT_CONFIG, exact_decomposition_max_rank=2))
    assert exact.on_sphere == floating.on_sphere


def test_census_frame_columns():
    frame = census_zn_dp(2, 4).to_frame()
    assert list(frame.columns) == ['k', 'on_sphere', 'in_ball']
    assert frame['in_ball'].tolist() == [1, 5, 9, 9, 13]


@given(st.integers(min_value=1, max_value=3), st.integers(min_value=0, max_value=2_000))
def test_pruned_matches_oracle_on_random_lattices(rank, seed):
    lattice = random_integral_lattice(rank, seed)
    max_norm = 4
    assert count_by_norm(lattice, max_norm).on_sphere == census_oracle(lattice, max_norm).on_sphere


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=6))
def test_pruned_matches_dp_on_zn(n, max_norm):
    assert count_by_norm(zn(n), max_norm).on_sphere == census_zn_dp(n, max_norm).on_sphere


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=1, max_value=5))
def test_dp_is_convolution_of_parts(n1, n2):
    assert census_convolve(census_zn_dp(n1, 6), census_zn_dp(n2, 6), 6).on_sphere == census_zn_dp(n1 + n2, 6).on_sphere


def test_explicit_gram_equivalent_to_family(a2):
    explicit = make_lattice(ExplicitDescriptor(((2, 1), (1, 2))))
    assert count_by_norm(explicit, 6).on_sphere == count_by_norm(a2, 6).on_sphere


@pytest.mark.parametrize('name,rank', [('Zn', 4), ('Zn', 6), ('An', 4), ('An', 5), ('Dn', 4), ('Dn', 5)])
def test_oracle_matches_pruned_up_to_rank_six(name, rank):
    lattice = family(name, rank)
    assert census_oracle(lattice, 6).on_sphere == count_by_norm(lattice, 6).on_sphere


@pytest.mark.slow
def test_oracle_matches_pruned_on_random_lattices_up_to_rank_six():
    checked = 0
    for seed in range(36):
        lattice = random_integral_lattice(4 + seed % 3, seed)
        try:
            oracle = census_oracle(lattice, 6)
        except ResourceLimitExceeded:
            continue
        assert oracle.on_sphere == count_by_norm(lattice, 6).on_sphere, seed
        checked += 1
    assert checked > 0


def test_direct_sum_census_is_convolution_of_parts(a2):
    d4 = family('Dn', 4)
    summed = direct_sum(a2, d4)
    convolved = census_convolve(count_by_norm(a2, 6), count_by_norm(d4, 6), 6)
    assert count_by_norm(summed, 6).on_sphere == convolved.on_sphere
    assert census_by_components(summed, 6).on_sphere == convolved.on_sphere
