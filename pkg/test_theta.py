"""Tests for Gaussian mass evaluation and its certified tails."""

import math
from dataclasses import replace
from fractions import Fraction

import pytest

import theta
from config import DEFAULT_CONFIG
from conftest import zn
from errors import TailNotCertifiable
from theta import (
    THETA_CSV_COLUMNS,
    conjecture_test,
    corollary_closed_form,
    corollary_series,
    gaussian_mass,
    negative_binomial_check,
    sphere_bound_tail,
    tau_star,
    verify_corollary,
    zn_mass,
    zn_tightness_chain,
)


def test_z1_mass_at_log_four():
    mass = gaussian_mass(zn(1), math.log(4), 8)
    assert mass.partial_mass == pytest.approx(1 + 2 / 4 + 2 / 4 ** 4, abs=1e-12)
    assert mass.certified
    assert 0 < mass.tail_upper < 1e-4


def test_large_tau_leaves_only_the_origin():
    mass = gaussian_mass(zn(3), 50, 1)
    assert mass.partial_mass == pytest.approx(1.0, abs=1e-15)
    assert mass.tail_upper < 1e-15


def test_z2_mass_at_tau_star():
    mass = gaussian_mass(zn(2), 2 * math.log(4), 8)
    assert mass.partial_mass == pytest.approx(1.26569, abs=1e-5)
    assert corollary_closed_form(2) == pytest.approx(1 + 0.25 * ((3 / 4) ** -2 - (5 / 4) ** -2), rel=1e-12)
    assert mass.upper <= corollary_closed_form(2)


def test_zn_mass_matches_gaussian_mass_for_z1():
    for tau in (0.3, 1.0, 2.5):
        assert zn_mass(1, tau, 16).partial_mass == pytest.approx(gaussian_mass(zn(1), tau, 16).partial_mass, abs=1e-12)


def test_zn_mass_at_tau_star_reaches_one_plus_one_over_2n():
    for n in (1, 2, 5, 8, 16):
        assert zn_mass(n, tau_star(n), 16).partial_mass >= 1 + 1 / (2 * n)
    expected = (1 + 2 * sum(256.0 ** -(z * z) for z in range(1, 4))) ** 8
    assert zn_mass(8, tau_star(8), 12).partial_mass == pytest.approx(expected, abs=1e-12)


def test_mass_decreases_with_tau(a2):
    masses = [gaussian_mass(a2, tau, 6).partial_mass for tau in (0.5, 1.0, 2.0, 4.0)]
    assert masses == sorted(masses, reverse=True)
    assert all(m >= 1 for m in masses)


def test_tail_bound_dominates_unseen_terms():
    exact = gaussian_mass(zn(2), 1.0, 20).partial_mass
    truncated = gaussian_mass(zn(2), 1.0, 5)
    assert truncated.partial_mass <= exact <= truncated.upper


def test_tiny_tau_is_not_certifiable():
    short_scan = replace(DEFAULT_CONFIG, tail_scan_window=100)
    tail, certified = sphere_bound_tail(8, 1e-6, 1, short_scan)
    assert not certified
    assert math.isinf(tail)
    mass = gaussian_mass(zn(8), 1e-6, 1, config=short_scan)
    assert not mass.certified
    assert math.isinf(mass.upper)


def test_verify_corollary_passes(e8):
    z2 = verify_corollary(zn(2), 8)
    assert z2.passed
    assert z2.rows[0]['slack'] == pytest.approx(0.0187, abs=1e-3)

    e8_report = verify_corollary(e8, 2)
    assert e8_report.passed
    assert e8_report.rows[0]['partial_mass'] == pytest.approx(1 + 240 / 16 ** 4, rel=1e-12)
    assert e8_report.rows[0]['implied_constant'] == pytest.approx(8 * 240 / 16 ** 4, rel=1e-12)
    assert e8_report.details['series_form'] == pytest.approx(corollary_closed_form(8), rel=1e-12)
    assert verify_corollary(zn(1), 4).passed


def test_verify_corollary_refuses_uncertified_tail(monkeypatch):
    monkeypatch.setattr(theta, 'sphere_bound_tail', lambda *args, **kwargs: (float('inf'), False))
    with pytest.raises(TailNotCertifiable):
        verify_corollary(zn(2), 4)


@pytest.mark.parametrize('n', [1, 2, 3, 8, 20, 64])
def test_closed_form_is_the_series(n):
    assert corollary_series(n) == pytest.approx(corollary_closed_form(n), rel=1e-12)


@pytest.mark.parametrize('n', [1, 2, 7, 24])
def test_zn_tightness_chain(n):
    assert zn_tightness_chain(n).passed


def test_negative_binomial_partial_sums():
    assert negative_binomial_check(3, Fraction(1, 4), 60).passed
    assert not negative_binomial_check(3, Fraction(1, 4), 2).passed


def test_conjecture_on_zn_is_equality():
    report = conjecture_test(zn(3), [0.5, 1.0, 3.0], 6)
    assert report.experimental
    assert [row['verdict'] for row in report.rows] == ['confirmed'] * 3
    assert list(report.to_frame(THETA_CSV_COLUMNS).columns) == THETA_CSV_COLUMNS


def test_conjecture_on_e8_at_tau_star(e8):
    report = conjecture_test(e8, [float(tau_star(8))], 2)
    row = report.rows[0]
    assert row['verdict'] == 'confirmed'
    assert row['partial_mass'] == pytest.approx(1.00366, abs=1e-5)
    assert row['zn_mass'] > row['partial_mass'] + row['tail_upper']


def test_conjecture_on_a2(a2):
    report = conjecture_test(a2, [1.0], 6)
    assert report.rows[0]['verdict'] == 'confirmed'
    assert report.passed


def test_uncertified_mass_is_indeterminate(e8):
    short_scan = replace(DEFAULT_CONFIG, tail_scan_window=10)
    report = conjecture_test(e8, [1e-6], 2, config=short_scan)
    assert report.rows[0]['verdict'] == 'indeterminate'


@pytest.mark.parametrize('n', range(1, 9))
def test_mass_intervals_contain_the_zn_mass(n):
    for tau in (1.0, 2.0, float(tau_star(n))):
        reference = zn_mass(n, tau, 400).partial_mass
        lattice_side = gaussian_mass(zn(n), tau, 12)
        series_side = zn_mass(n, tau, 12)
        assert lattice_side.certified
        assert lattice_side.partial_mass <= reference <= lattice_side.upper
        assert series_side.partial_mass <= reference <= series_side.upper


@pytest.mark.parametrize('n', range(1, 17))
def test_negative_binomial_at_tau_star(n):
    report = negative_binomial_check(n, Fraction(1, (2 * n) ** 2), 64)
    assert report.passed
    assert report.rows[0]['remainder'] >= 0
