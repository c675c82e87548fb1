#!/usr/bin/env python3
"""
Bounds Module
Every counting bound for integral lattices, evaluated exactly where it is an
integer, and the comparison of a census against them.

Verdicts only ever use the exact sphere and ball bounds (and the Minkowski
floor for unimodular lattices). The leading term 2^k (k-1)! n^k is a reference
value: the statement it comes from has an unspecified o(n^k) term.
"""

import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Dict, List, Optional

import mpmath
import pandas as pd

from arithmetic import binomial
from config import DEFAULT_CONFIG
from enumeration import Census, census_zn_dp
from errors import RankTooSmall
from report_export import CheckReport

logger = logging.getLogger(__name__)

BOUND_CSV_COLUMNS = ['k', 'on_sphere', 'sphere_upper', 'in_ball', 'ball_upper', 'verdict']


def _check_positive(**values):
    for name, value in values.items():
        if value < 1:
            raise ValueError(f"{name} must be >= 1, got {value}")


def sphere_bound(n: int, k: int) -> int:
    """m_k <= 2 C(n+2k-2, 2k-1)."""
    _check_positive(n=n, k=k)
    return 2 * binomial(n + 2 * k - 2, 2 * k - 1)


def ball_bound(n: int, k: int) -> int:
    """N_k <= 2 C(n+2k-1, 2k-1) - 1."""
    _check_positive(n=n, k=k)
    return 2 * binomial(n + 2 * k - 1, 2 * k - 1) - 1


def asymptotic_leading(n: int, k: int) -> int:
    """2^k (k-1)! n^k; reference only, never a verdict."""
    _check_positive(n=n, k=k)
    return 2 ** k * factorial(k - 1) * n ** k


def zn_sphere_lower_bound(n: int, k: int) -> int:
    """C(floor(n/2)+k-1, k), a lower bound on m_k(Z^n) for n >= 6."""
    if n < 6:
        raise RankTooSmall(f"the Z^n sphere lower bound is proved for n >= 6, got {n}")
    _check_positive(k=k)
    return binomial(n // 2 + k - 1, k)


def dgs_bound(n: int, a: int) -> int:
    """At most 2 C(n+2a, 2a+1) unit vectors with |A| = a allowed non-trivial |inner products|."""
    if a < 0:
        raise ValueError(f"a must be >= 0, got {a}")
    _check_positive(n=n)
    return 2 * binomial(n + 2 * a, 2 * a + 1)


def _ball_volume_fraction(n: int, k) -> mpmath.mpf:
    """2^-n vol(sqrt(k) B_2^n), via log-gamma."""
    n = mpmath.mpf(n)
    k = mpmath.mpf(k)
    log_value = (n / 2) * mpmath.log(mpmath.pi * k) - mpmath.loggamma(n / 2 + 1) - n * mpmath.log(2)
    return mpmath.exp(log_value)


def minkowski_lower_bound(n: int, k: float) -> float:
    """2^-n vol(sqrt(k) B_2^n), the point count guaranteed when det(L) <= 1."""
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    with mpmath.workdps(DEFAULT_CONFIG.mp_dps):
        return float(_ball_volume_fraction(n, k))


def minkowski_point_floor(n: int, k: float) -> int:
    """2 floor(2^-n vol(sqrt(k) B_2^n)) + 1, the integer form of the same bound."""
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    with mpmath.workdps(DEFAULT_CONFIG.mp_dps):
        return 2 * int(mpmath.floor(_ball_volume_fraction(n, k))) + 1


def minkowski_approximation(n: int, k: float) -> float:
    """(pi e k / (2n))^{n/2}."""
    with mpmath.workdps(DEFAULT_CONFIG.mp_dps):
        return float((mpmath.pi * mpmath.e * k / (2 * n)) ** (mpmath.mpf(n) / 2))


def rm_bound(n: int, k: float, c: Optional[float] = None) -> float:
    """2 exp(tau k) with tau = c log^2(2n); c has no agreed explicit value, so it is a parameter."""
    c = DEFAULT_CONFIG.rm_constant if c is None else c
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    with mpmath.workdps(DEFAULT_CONFIG.mp_dps):
        tau = c * mpmath.log(2 * n) ** 2
        return float(2 * mpmath.exp(tau * k))


@dataclass(frozen=True)
class BoundSet:
    n: int
    k: int
    sphere_upper: int
    ball_upper: int
    asymptotic_leading: int
    zn_sphere_lower: Optional[int]
    dgs: int
    minkowski_lower: float
    rm_upper: float

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def bound_set(n: int, k: int, c: Optional[float] = None) -> BoundSet:
    return BoundSet(
        n=n,
        k=k,
        sphere_upper=sphere_bound(n, k),
        ball_upper=ball_bound(n, k),
        asymptotic_leading=asymptotic_leading(n, k),
        zn_sphere_lower=zn_sphere_lower_bound(n, k) if n >= 6 else None,
        dgs=dgs_bound(n, k - 1),
        minkowski_lower=minkowski_lower_bound(n, k),
        rm_upper=rm_bound(n, k, c),
    )


def bounds_table(n: int, k_max: int, c: Optional[float] = None) -> pd.DataFrame:
    frame = pd.DataFrame([bound_set(n, k, c).to_dict() for k in range(1, k_max + 1)])
    # no lower bound below rank 6
    return frame.astype({'zn_sphere_lower': 'Int64'})


def telescoping_check(n: int, k: int) -> CheckReport:
    """1 + 2 sum_{i=1}^{2k-1} C(n+i-1, i) = ball bound, and the sphere bounds sum below it."""
    report = CheckReport('ball_from_sphere')
    ball = ball_bound(n, k)
    full = 1 + 2 * sum(binomial(n + i - 1, i) for i in range(1, 2 * k))
    spheres = 1 + 2 * sum(binomial(n + 2 * j - 2, 2 * j - 1) for j in range(1, k + 1))
    report.add_row(claim='1 + 2 sum_i C(n+i-1,i) = ball bound', n=n, k=k, lhs=full, rhs=ball,
                   verdict='PASS' if full == ball else 'FAIL')
    report.add_row(claim='1 + sum of sphere bounds <= ball bound', n=n, k=k, lhs=spheres, rhs=ball,
                   verdict='PASS' if spheres <= ball else 'FAIL')
    return report


def zn_exceedance(census: Census) -> List[int]:
    """Norms k where N_k(L) > N_k(Z^n); integral lattices can beat Z^n (E8 at k=2)."""
    if census.n < 1:
        return []
    zn = census_zn_dp(census.n, census.max_norm)
    return [k for k in range(1, census.max_norm + 1) if census.in_ball(k) > zn.in_ball(k)]


@dataclass
class BoundReport:
    lattice_id: str
    n: int
    rows: List[Dict[str, Any]] = field(default_factory=list)
    det_gram: Optional[int] = None
    zn_exceeded_at: List[int] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return 'PASS' if all(row['verdict'] == 'PASS' for row in self.rows) else 'FAIL'

    @property
    def passed(self) -> bool:
        return self.verdict == 'PASS'

    @property
    def status(self) -> str:
        return self.verdict

    def to_frame(self, full: bool = False) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows)
        return frame if full else frame.reindex(columns=BOUND_CSV_COLUMNS)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lattice': self.lattice_id,
            'n': self.n,
            'det_gram': self.det_gram,
            'verdict': self.verdict,
            'zn_exceeded_at': self.zn_exceeded_at,
            'rows': self.rows,
        }


def verify_census_against_bounds(census: Census, lattice_id: str = '', det_gram: Optional[int] = None) -> BoundReport:
    """Check m_k <= sphere bound and N_k <= ball bound for every k <= max_norm.

    With det_gram == 1 the Minkowski floor N_k >= 2 floor(2^-n vol) + 1 is
    checked as well.
    """
    n = census.n
    report = BoundReport(lattice_id or f'rank{n}', n, det_gram=det_gram)
    for k in range(1, census.max_norm + 1):
        m_k, n_k = census.on_sphere[k], census.in_ball(k)
        sphere, ball = sphere_bound(n, k), ball_bound(n, k)
        row = {
            'k': k,
            'on_sphere': m_k,
            'sphere_upper': sphere,
            'in_ball': n_k,
            'ball_upper': ball,
            'asymptotic_leading': asymptotic_leading(n, k),
            'zn_sphere_lower': zn_sphere_lower_bound(n, k) if n >= 6 else None,
            'sphere_tight': m_k == sphere,
            'ball_tight': n_k == ball,
        }
        holds = m_k <= sphere and n_k <= ball
        if det_gram == 1:
            floor = minkowski_point_floor(n, k)
            row['minkowski_floor'] = floor
            holds = holds and n_k >= floor
        row['verdict'] = 'PASS' if holds else 'FAIL'
        if not holds:
            logger.error(f"❌ Bound violated for {report.lattice_id} at k={k}: m_k={m_k} (<= {sphere}), "
                         f"N_k={n_k} (<= {ball}); an integral lattice cannot do this, so this is a bug")
        report.rows.append(row)
    report.zn_exceeded_at = zn_exceedance(census)
    if report.zn_exceeded_at:
        logger.warning(f"{report.lattice_id} has more short vectors than Z^{n} at k={report.zn_exceeded_at}")
    return report
