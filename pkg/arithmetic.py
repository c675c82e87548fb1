#!/usr/bin/env python3
"""
Arithmetic Module
Exact divisor sums: Jacobi's four-, six- and eight-square formulas, the
character chi, and the binomial identities behind the Z^n lower bound.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Tuple

from enumeration import census_convolve, census_zn_dp, count_by_norm
from errors import EvenArgument, RankTooSmall
from lattice_core import family
from report_export import CheckReport

logger = logging.getLogger(__name__)

# rational lower bound on pi^2 = 9.86960440...
PI_SQUARED_LOWER = Fraction(98696, 10000)


def binomial(n: int, k: int) -> int:
    """Exact C(n, k) for n >= 0, with C(n, k) = 0 when k > n."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if n < 0:
        raise ValueError("n must be non-negative")
    if k > n:
        return 0
    k = min(k, n - k)
    result = 1
    for i in range(1, k + 1):
        result = result * (n - k + i) // i
    return result


@dataclass(frozen=True)
class DivisorTable:
    k: int
    divisors: Tuple[int, ...]

    def sigma(self, power: int = 1) -> int:
        return sum(d ** power for d in self.divisors)


def divisor_table(k: int) -> DivisorTable:
    """Positive divisors of k by trial division up to sqrt(k)."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    small, large = [], []
    for d in range(1, isqrt(k) + 1):
        if k % d == 0:
            small.append(d)
            if d != k // d:
                large.append(k // d)
    return DivisorTable(k, tuple(small + large[::-1]))


def chi(m: int) -> int:
    """0 for even m, 1 for m = 1 mod 4, -1 for m = 3 mod 4."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m % 2 == 0:
        return 0
    return 1 if m % 4 == 1 else -1


def jacobi_r4(k: int) -> int:
    """Number of ways to write odd k as a sum of 4 squares: 8 sum_{d|k} d."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k % 2 == 0:
        raise EvenArgument(f"the four-square formula is only used for odd k, got {k}")
    return 8 * divisor_table(k).sigma()


def jacobi_r6(k: int) -> int:
    """4 sum_{d|k} (k/d)^2 (4 chi(d) - chi(k/d))."""
    return 4 * sum((k // d) ** 2 * (4 * chi(d) - chi(k // d)) for d in divisor_table(k).divisors)


def jacobi_r8(k: int) -> int:
    """16 sum_{d|k} (-1)^{d+k} d^3."""
    return 16 * sum((-1) ** (d + k) * d ** 3 for d in divisor_table(k).divisors)


def _row(report: CheckReport, claim: str, k: int, lhs, rhs, holds: bool):
    report.add_row(claim=claim, k=k, lhs=lhs, rhs=rhs, verdict='PASS' if holds else 'FAIL')


def claim_a1_floors(k: int) -> CheckReport:
    """Floors on r6, r8 (and r4 for odd k), plus the intermediate floors of their proofs."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    report = CheckReport('square_count_floors')
    r6, r8 = jacobi_r6(k), jacobi_r8(k)
    _row(report, 'r6 >= C(k+2,2)', k, r6, binomial(k + 2, 2), r6 >= binomial(k + 2, 2))
    _row(report, 'r8 >= C(k+3,3)', k, r8, binomial(k + 3, 3), r8 >= binomial(k + 3, 3))

    # r6 >= (12 - pi^2/6 - 20(pi^2/8 - 1)) k^2 = (32 - 8 pi^2 / 3) k^2
    r6_floor = (32 - Fraction(8, 3) * PI_SQUARED_LOWER) * k * k
    _row(report, 'r6 >= (32 - 8pi^2/3) k^2', k, r6, float(r6_floor), r6 >= r6_floor)
    if k % 2:
        r4 = jacobi_r4(k)
        _row(report, 'r4 >= 2k+3', k, r4, 2 * k + 3, r4 >= 2 * k + 3)
        _row(report, 'r4 >= 8k', k, r4, 8 * k, r4 >= 8 * k)
        _row(report, 'r8 >= 16k^3', k, r8, 16 * k ** 3, r8 >= 16 * k ** 3)
    else:
        _row(report, 'r8 >= 14k^3', k, r8, 14 * k ** 3, r8 >= 14 * k ** 3)
    return report


def footnote_identity_check(m: int, k: int) -> CheckReport:
    """C(m+k, m) = sum_{i=0}^k C(m+k-i-2, m-2) (i+1), exactly."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    report = CheckReport('binomial_convolution_identity')
    lhs = binomial(m + k, m)
    rhs = sum(binomial(m + k - i - 2, m - 2) * (i + 1) for i in range(k + 1))
    _row(report, 'C(m+k,m) = sum C(m+k-i-2,m-2)(i+1)', k, lhs, rhs, lhs == rhs)
    report.rows[-1]['m'] = m
    return report


def zn_lower_bound_check(n: int, k_max: int) -> CheckReport:
    """m_k(Z^n) >= C(floor(n/2)+k-1, k) for k <= k_max, from the exact Z^n series."""
    if n < 6:
        raise RankTooSmall(f"the Z^n sphere lower bound is proved for n >= 6, got {n}")
    report = CheckReport(f'zn_sphere_lower_bound_n{n}')
    census = census_zn_dp(n, k_max)
    for k in range(1, k_max + 1):
        floor = binomial(n // 2 + k - 1, k)
        _row(report, 'm_k(Z^n) >= C(n/2+k-1,k)', k, census.on_sphere[k], floor, census.on_sphere[k] >= floor)
    if n % 2:
        # odd ranks reduce to n-1 through m_k(Z^n) >= m_k(Z^{n-1})
        lower = census_zn_dp(n - 1, k_max)
        for k in range(1, k_max + 1):
            _row(report, 'm_k(Z^n) >= m_k(Z^{n-1})', k, census.on_sphere[k], lower.on_sphere[k],
                 census.on_sphere[k] >= lower.on_sphere[k])
    return report


def induction_step_check(n: int, k_max: int) -> CheckReport:
    """m_k(Z^n) = sum_i m_{k-i}(Z^{n-4}) m_i(Z^4), with the Z^4 side enumerated."""
    if n < 5:
        raise RankTooSmall(f"the induction step needs n > 4, got {n}")
    report = CheckReport(f'zn_convolution_n{n}')
    direct = census_zn_dp(n, k_max)
    split = census_convolve(census_zn_dp(n - 4, k_max), count_by_norm(family('Zn', 4), k_max), k_max)
    for k in range(k_max + 1):
        _row(report, 'm_k(Z^n) = sum m_{k-i}(Z^{n-4}) m_i(Z^4)', k, direct.on_sphere[k], split.on_sphere[k],
             direct.on_sphere[k] == split.on_sphere[k])
    return report


def jacobi_table(k_max: int) -> CheckReport:
    """Rows k, r4, r6, r8, census_match against the Z^4, Z^6, Z^8 series."""
    report = CheckReport('jacobi')
    z4, z6, z8 = (census_zn_dp(n, k_max) for n in (4, 6, 8))
    for k in range(1, k_max + 1):
        r4 = jacobi_r4(k) if k % 2 else None
        r6, r8 = jacobi_r6(k), jacobi_r8(k)
        match = (r4 is None or r4 == z4.on_sphere[k]) and r6 == z6.on_sphere[k] and r8 == z8.on_sphere[k]
        report.add_row(k=k, r4=r4, r6=r6, r8=r8, census_match=match, verdict='PASS' if match else 'FAIL')
    if not report.passed:
        logger.error(f"❌ Jacobi formulas disagree with the Z^n series at k={[r['k'] for r in report.failures]}")
    return report
