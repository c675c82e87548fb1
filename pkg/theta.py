#!/usr/bin/env python3
"""
Theta Module
Gaussian mass sum_y exp(-tau ||y||^2) of a lattice, with a certified bound on
what truncation leaves out.

The tail past the truncation norm K is bounded with the sphere bound
m_k <= 2 C(n+2k-2, 2k-1). Consecutive terms of that majorant have the ratio
exp(-tau) (n+2k)(n+2k-1) / ((2k+1) 2k), which never increases with k, so once
it drops below 1 the rest is closed by a geometric series.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Any, Dict, Iterable, Optional, Tuple

import mpmath

from arithmetic import binomial
from config import DEFAULT_CONFIG, Config
from enumeration import Census, count_by_norm
from errors import TailNotCertifiable
from lattice_core import Lattice
from report_export import CheckReport

logger = logging.getLogger(__name__)

THETA_CSV_COLUMNS = ['tau', 'partial_mass', 'tail_upper', 'zn_mass', 'zn_tail', 'verdict']


@dataclass(frozen=True)
class ThetaEvaluation:
    tau: float
    truncation: int
    partial_mass: float
    tail_upper: float
    certified: bool
    n: int = 0
    lattice_id: str = ''

    @property
    def upper(self) -> float:
        return self.partial_mass + self.tail_upper

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lattice': self.lattice_id,
            'n': self.n,
            'tau': self.tau,
            'truncation': self.truncation,
            'partial_mass': self.partial_mass,
            'tail_upper': self.tail_upper,
            'certified': self.certified,
        }


def tau_star(n: int):
    """2 log(2n), where exp(-tau) = 1/(2n)^2."""
    return 2 * mpmath.log(2 * n)


def sphere_bound_tail(n: int, tau, truncation: int, config: Config = DEFAULT_CONFIG) -> Tuple[mpmath.mpf, bool]:
    """Upper bound on sum_{k > K} 2 C(n+2k-2, 2k-1) exp(-tau k) and whether it is certified."""
    x = mpmath.exp(-mpmath.mpf(tau))
    k = truncation + 1
    term = 2 * binomial(n + 2 * k - 2, 2 * k - 1) * x ** k
    total = mpmath.mpf(0)

    def ratio(j):
        return x * mpmath.mpf((n + 2 * j) * (n + 2 * j - 1)) / ((2 * j + 1) * (2 * j))

    for _ in range(config.tail_scan_window):
        r = ratio(k)
        if r < 1 and term <= config.tail_negligible:
            return total + term / (1 - r), True
        total += term
        term *= r
        k += 1
    r = ratio(k)
    if r < 1:
        return total + term / (1 - r), True
    logger.debug(f"Tail ratio still {float(r):.6f} after {config.tail_scan_window} terms (n={n}, tau={float(tau)})")
    return mpmath.inf, False


def gaussian_mass(lattice: Lattice, tau, truncation: int, census: Optional[Census] = None,
                  config: Config = DEFAULT_CONFIG) -> ThetaEvaluation:
    """Truncated mass from an exact census plus a certified tail bound.

    When the tail cannot be certified the evaluation comes back with
    certified=False and an infinite tail.
    """
    if census is None:
        census = count_by_norm(lattice, truncation, config)
    elif census.max_norm < truncation:
        census = count_by_norm(lattice, truncation, config)
    with mpmath.workdps(config.mp_dps):
        tau = mpmath.mpf(tau)
        x = mpmath.exp(-tau)
        partial = mpmath.fsum(census.on_sphere[k] * x ** k for k in range(truncation + 1))
        tail, certified = sphere_bound_tail(lattice.n, tau, truncation, config)
        evaluation = ThetaEvaluation(float(tau), truncation, float(partial), float(tail), certified,
                                     lattice.n, lattice.name)
    if not certified:
        logger.warning(f"Tail of {lattice.name} at tau={float(tau):.6g} is not certifiable within "
                       f"{config.tail_scan_window} terms")
    return evaluation


def zn_mass(n: int, tau, truncation: int, config: Config = DEFAULT_CONFIG) -> ThetaEvaluation:
    """(sum_z exp(-tau z^2))^n with |z| <= floor(sqrt(K)) kept and the 1-D tail pushed through the power."""
    with mpmath.workdps(config.mp_dps):
        tau = mpmath.mpf(tau)
        x = mpmath.exp(-tau)
        top = isqrt(truncation)
        one_dim = 1 + 2 * mpmath.fsum(x ** (z * z) for z in range(1, top + 1))
        # term ratios exp(-tau (2z+1)) shrink with z
        one_dim_tail = 2 * x ** ((top + 1) ** 2) / (1 - x ** (2 * top + 3))
        partial = one_dim ** n
        tail = (one_dim + one_dim_tail) ** n - partial
        return ThetaEvaluation(float(tau), truncation, float(partial), float(tail), True, n, f'Z{n}')


def corollary_closed_form(n: int, config: Config = DEFAULT_CONFIG) -> float:
    """1 + (1/(2n)) ((1 - 1/(2n))^-n - (1 + 1/(2n))^-n)."""
    with mpmath.workdps(config.mp_dps):
        h = mpmath.mpf(1) / (2 * n)
        return float(1 + h * ((1 - h) ** (-n) - (1 + h) ** (-n)))


def corollary_series(n: int, terms: int = 200, config: Config = DEFAULT_CONFIG) -> float:
    """1 + 2 sum_k (2n)^{-2k} C(n+2k-2, 2k-1), the series the closed form sums."""
    with mpmath.workdps(config.mp_dps):
        x = mpmath.mpf(1) / (2 * n) ** 2
        return float(1 + 2 * mpmath.fsum(x ** k * binomial(n + 2 * k - 2, 2 * k - 1) for k in range(1, terms + 1)))


def verify_corollary(lattice: Lattice, truncation: int, census: Optional[Census] = None,
                     config: Config = DEFAULT_CONFIG) -> CheckReport:
    """Mass at tau* = 2 log(2n) against the closed form; also reports C = n (mass - 1)."""
    n = lattice.n
    with mpmath.workdps(config.mp_dps):
        tau = tau_star(n)
    evaluation = gaussian_mass(lattice, tau, truncation, census, config)
    if not evaluation.certified:
        raise TailNotCertifiable(f"tail of {lattice.name} at tau*={float(tau):.6g} not certified")
    closed = corollary_closed_form(n, config)
    holds = evaluation.upper <= closed * (1 + 1e-12)
    report = CheckReport(f'gaussian_mass_corollary_{lattice.name}')
    report.add_row(
        lattice=lattice.name,
        n=n,
        tau=evaluation.tau,
        partial_mass=evaluation.partial_mass,
        tail_upper=evaluation.tail_upper,
        closed_form=closed,
        slack=closed - evaluation.upper,
        implied_constant=n * (evaluation.partial_mass - 1),
        verdict='PASS' if holds else 'FAIL',
    )
    report.details['series_form'] = corollary_series(n, config=config)
    if not holds:
        logger.error(f"❌ Gaussian mass of {lattice.name} at tau* exceeds the closed form: "
                     f"{evaluation.upper:.15g} > {closed:.15g}")
    return report


def zn_tightness_chain(n: int, truncation: int = 16, config: Config = DEFAULT_CONFIG) -> CheckReport:
    """(sum_z e^{-tau* z^2})^n >= (1 + 2e^{-tau*})^n >= 1 + 2n e^{-tau*} = 1 + 1/(2n)."""
    report = CheckReport(f'zn_mass_tightness_n{n}')
    with mpmath.workdps(config.mp_dps):
        mass = zn_mass(n, tau_star(n), truncation, config)
    # exp(-tau*) = 1/(4n^2) exactly
    x = Fraction(1, 4 * n * n)
    two_term = (1 + 2 * x) ** n
    linear = 1 + 2 * n * x
    target = 1 + Fraction(1, 2 * n)
    report.add_row(claim='theta_Z(tau*)^n >= (1+2e^-tau*)^n', lhs=mass.partial_mass, rhs=float(two_term),
                   verdict='PASS' if mass.partial_mass >= float(two_term) * (1 - 1e-15) else 'FAIL')
    report.add_row(claim='(1+2e^-tau*)^n >= 1+2n e^-tau*', lhs=float(two_term), rhs=float(linear),
                   verdict='PASS' if two_term >= linear else 'FAIL')
    report.add_row(claim='1+2n e^-tau* = 1+1/(2n)', lhs=float(linear), rhs=float(target),
                   verdict='PASS' if linear == target else 'FAIL')
    return report


def negative_binomial_check(n: int, x: Fraction, terms: int, tolerance: float = 1e-10) -> CheckReport:
    """Exact partial sums of sum_k x^k C(n+k-1, k) against (1-x)^-n."""
    report = CheckReport(f'negative_binomial_n{n}')
    x = Fraction(x)
    partial = sum(x ** k * binomial(n + k - 1, k) for k in range(terms + 1))
    closed = (1 - x) ** (-n)
    remainder = closed - partial
    holds = 0 <= remainder < Fraction(tolerance)
    report.add_row(n=n, x=float(x), terms=terms, partial=float(partial), closed=float(closed),
                   remainder=float(remainder), verdict='PASS' if holds else 'FAIL')
    return report


def conjecture_test(lattice: Lattice, taus: Iterable[float], truncation: int, census: Optional[Census] = None,
                    config: Config = DEFAULT_CONFIG) -> CheckReport:
    """EXPERIMENTAL: compare mass(L, tau) with mass(Z^n, tau) on certified intervals.

    Verdicts are confirmed / violated / indeterminate; a violation is output,
    never an error.
    """
    report = CheckReport(f'zn_mass_maximality_{lattice.name}', experimental=True)
    report.details['note'] = 'experimental: mass(L) <= mass(Z^n) is an open question'
    if census is None or census.max_norm < truncation:
        census = count_by_norm(lattice, truncation, config)
    for tau in taus:
        mass = gaussian_mass(lattice, tau, truncation, census, config)
        zn = zn_mass(lattice.n, tau, truncation, config)
        if lattice.is_identity():
            verdict = 'confirmed'
        elif mass.certified and mass.upper + config.separation <= zn.partial_mass:
            verdict = 'confirmed'
        elif zn.upper + config.separation <= mass.partial_mass:
            verdict = 'violated'
            logger.warning(f"*** {lattice.name} has MORE Gaussian mass than Z^{lattice.n} at tau={tau}: "
                           f"{mass.partial_mass:.15g} > {zn.upper:.15g} ***")
        else:
            verdict = 'indeterminate'
        report.add_row(tau=mass.tau, partial_mass=mass.partial_mass, tail_upper=mass.tail_upper,
                       zn_mass=zn.partial_mass, zn_tail=zn.tail_upper, verdict=verdict)
    return report
