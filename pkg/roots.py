#!/usr/bin/env python3
"""
Roots Module
The norm-{1,2} vectors of an integral lattice form a root system. This module
extracts it, splits it into pairwise-orthogonal irreducible components, and
checks the tight bound N_2(L) <= f(n) + 1 against it.

Labels are matched from (rank, size, norm1_count) only and never decide a
verdict; sizes and ranks do.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from bounds import dgs_bound
from config import DEFAULT_CONFIG, Config
from enumeration import count_by_norm, list_vectors_up_to, list_vectors_with_norm
from errors import SizeExceedsClassification
from lattice_core import Lattice, integer_rank
from report_export import CheckReport

logger = logging.getLogger(__name__)

LABELS = ('A', 'B', 'D', 'E6', 'E7', 'E8', 'unclassified')
COMPONENT_COLUMNS = ['rank', 'size', 'norm1_count', 'label']

EXCEPTIONAL_SIZES = {(6, 72, 0): 'E6', (7, 126, 0): 'E7', (8, 240, 0): 'E8'}


def f_of(n: int) -> int:
    """Largest possible N_2(L) - 1 for an integral lattice of rank n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 7:
        return 126
    if 8 <= n <= 11:
        return 240 + 2 * (n - 8) ** 2
    return 2 * n * n


def g_of(n: int) -> int:
    """Largest irreducible root system of rank n: 2n^2, except E7 and E8."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return {7: 126, 8: 240}.get(n, 2 * n * n)


@dataclass(frozen=True)
class RootComponent:
    rank: int
    size: int
    norm1_count: int
    label: str
    # one representative per +- pair
    representatives: Tuple[Tuple[int, ...], ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {'rank': self.rank, 'size': self.size, 'norm1_count': self.norm1_count, 'label': self.label}


@dataclass
class RootSystemDecomposition:
    lattice_id: str
    n: int
    phi_size: int
    components: List[RootComponent] = field(default_factory=list)

    @property
    def total_rank(self) -> int:
        return sum(c.rank for c in self.components)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([c.to_dict() for c in self.components], columns=COMPONENT_COLUMNS)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lattice': self.lattice_id,
            'n': self.n,
            'phi_size': self.phi_size,
            'components': [c.to_dict() for c in self.components],
        }


def classify_component(rank: int, size: int, norm1_count: int) -> str:
    if size > g_of(rank):
        raise SizeExceedsClassification(
            f"component of rank {rank} has {size} roots, more than g({rank}) = {g_of(rank)}")
    if (rank, size, norm1_count) in EXCEPTIONAL_SIZES:
        return EXCEPTIONAL_SIZES[(rank, size, norm1_count)]
    if size == rank * (rank + 1) and norm1_count == 0:
        return 'A'
    if size == 2 * rank * rank and norm1_count == 2 * rank:
        return 'B'
    if size == 2 * rank * (rank - 1) and norm1_count == 0:
        return 'D'
    return 'unclassified'


def _pair_inner_products(vectors: List[Tuple[int, ...]], gram) -> np.ndarray:
    x = np.array(vectors, dtype=np.int64).reshape(len(vectors), -1)
    return x @ np.array(gram, dtype=np.int64) @ x.T


def _components(adjacent: np.ndarray) -> List[List[int]]:
    """Connected components, each sorted, in order of their smallest index."""
    seen = np.zeros(len(adjacent), dtype=bool)
    found = []
    for start in range(len(adjacent)):
        if seen[start]:
            continue
        seen[start] = True
        queue, members = deque([start]), []
        while queue:
            i = queue.popleft()
            members.append(i)
            for j in np.flatnonzero(adjacent[i] & ~seen):
                seen[j] = True
                queue.append(int(j))
        found.append(sorted(members))
    return found


def extract_root_system(lattice: Lattice, config: Config = DEFAULT_CONFIG) -> RootSystemDecomposition:
    """Phi = all y with y^T G y in {1, 2}, split by connectivity under non-zero inner products."""
    short = list_vectors_up_to(lattice, 2, config)
    norm1 = list(short[1].vectors)
    reps = norm1 + list(short[2].vectors)
    decomposition = RootSystemDecomposition(lattice.name, lattice.n, 2 * len(reps))
    if not reps:
        return decomposition

    products = _pair_inner_products(reps, lattice.gram.as_lists())
    components = []
    for members in _components(products != 0):
        vectors = [reps[i] for i in members]
        rank = integer_rank(vectors)
        size = 2 * len(members)
        norm1_count = 2 * sum(1 for i in members if i < len(norm1))
        components.append(RootComponent(rank, size, norm1_count, classify_component(rank, size, norm1_count),
                                        tuple(vectors)))
    components.sort(key=lambda c: (-c.size, -c.rank, c.label))
    decomposition.components = components
    logger.info(f"✅ Root system of {lattice.name}: {decomposition.phi_size} roots in {len(components)} component(s)")
    return decomposition


def verify_k2_theorem(lattice: Lattice, config: Config = DEFAULT_CONFIG,
                      decomposition: Optional[RootSystemDecomposition] = None) -> CheckReport:
    """N_2(L) <= f(n) + 1 with the component-wise argument behind it; records tightness."""
    if decomposition is None:
        decomposition = extract_root_system(lattice, config)
    n = lattice.n
    f = f_of(n)
    n2 = 1 + decomposition.phi_size
    report = CheckReport(f'k2_root_bound_{lattice.name}')

    def check(claim, lhs, rhs, holds):
        report.add_row(claim=claim, lhs=lhs, rhs=rhs, verdict='PASS' if holds else 'FAIL')

    check('N_2 <= f(n) + 1', n2, f + 1, n2 <= f + 1)
    for c in decomposition.components:
        check(f'|Phi_i| <= g(n_i) [{c.label}, rank {c.rank}]', c.size, g_of(c.rank), c.size <= g_of(c.rank))
    g_total = sum(g_of(c.rank) for c in decomposition.components)
    check('sum g(n_i) <= f(n)', g_total, f, g_total <= f)
    check('sum n_i <= n', decomposition.total_rank, n, decomposition.total_rank <= n)
    census_n2 = count_by_norm(lattice, 2, config).in_ball(2)
    check('phi_size = N_2 - 1 from the census', decomposition.phi_size, census_n2 - 1,
          decomposition.phi_size == census_n2 - 1)

    report.details.update({'n': n, 'N2': n2, 'f': f, 'tight': n2 == f + 1})
    if not report.passed:
        logger.error(f"❌ k=2 root bound failed for {lattice.name}: {report.failures}")
    elif n2 == f + 1:
        logger.info(f"✅ {lattice.name} attains N_2 = f({n}) + 1 = {n2}")
    return report


def _block_distribution(args) -> Dict[int, int]:
    vectors, gram, start, stop = args
    x = np.array(vectors, dtype=np.int64).reshape(len(vectors), -1)
    products = x[start:stop] @ np.array(gram, dtype=np.int64) @ x.T
    counts: Dict[int, int] = {}
    for offset, row in enumerate(products):
        values, hits = np.unique(row[start + offset + 1:], return_counts=True)
        for value, hit in zip(values.tolist(), hits.tolist()):
            # each +- line pair realises both +ip and -ip
            counts[value] = counts.get(value, 0) + hit
            if value:
                counts[-value] = counts.get(-value, 0) + hit
    return counts


def dgs_membership_check(lattice: Lattice, k: int, workers: Optional[int] = None,
                         config: Config = DEFAULT_CONFIG) -> CheckReport:
    """Inner products among norm-k vectors stay in {-k..k} and m_k <= dgs_bound(n, k-1).

    The distribution counts each unordered pair of distinct +- lines once per
    sign, so Z^n at k=1 realises only {0}.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    workers = config.workers if workers is None else workers
    vectors = list(list_vectors_with_norm(lattice, k, config).vectors)
    gram = lattice.gram.as_lists()
    m = len(vectors)

    distribution: Dict[int, int] = {}
    if m > 1:
        step = max(1, -(-m // max(1, workers)))
        blocks = [(vectors, gram, start, min(m, start + step)) for start in range(0, m, step)]
        if workers > 1 and len(blocks) > 1:
            with Pool(workers) as pool:
                parts = pool.map(_block_distribution, blocks)
        else:
            parts = [_block_distribution(b) for b in blocks]
        for part in parts:
            for value, hits in part.items():
                distribution[value] = distribution.get(value, 0) + hits
    distribution = dict(sorted(distribution.items()))

    report = CheckReport(f'restricted_inner_products_{lattice.name}_k{k}')
    largest = max((abs(v) for v in distribution), default=0)
    report.add_row(claim='|<y_i, y_j>| <= k', lhs=largest, rhs=k, verdict='PASS' if largest <= k else 'FAIL')
    report.add_row(claim='|<y_i, y_j>| < k for distinct lines', lhs=largest, rhs=k,
                   verdict='PASS' if largest < k or m < 2 else 'FAIL')
    bound = dgs_bound(lattice.n, k - 1)
    report.add_row(claim='m_k <= dgs_bound(n, k-1)', lhs=2 * m, rhs=bound,
                   verdict='PASS' if 2 * m <= bound else 'FAIL')
    report.details.update({'k': k, 'm_k': 2 * m, 'inner_products': distribution})
    return report


def check_root_axioms(lattice: Lattice, config: Config = DEFAULT_CONFIG) -> CheckReport:
    """Reflection closure, integral Cartan ratios and only +-y as multiples, on all of Phi."""
    short = list_vectors_up_to(lattice, 2, config)
    reps = list(short[1].vectors) + list(short[2].vectors)
    report = CheckReport(f'root_axioms_{lattice.name}')
    if not reps:
        report.add_row(claim='Phi is empty', lhs=0, rhs=0, verdict='PASS')
        return report

    phi = np.array(reps + [tuple(-v for v in r) for r in reps], dtype=np.int64)
    gram = np.array(lattice.gram.as_lists(), dtype=np.int64)
    products = phi @ gram @ phi.T
    norms = np.diag(products)
    twice = 2 * products
    integral = twice % norms[None, :] == 0
    members = {row.tobytes() for row in phi}

    ratio = twice // norms[None, :]
    missing = 0
    for j in range(len(phi)):
        reflected = phi - ratio[:, j][:, None] * phi[j][None, :]
        missing += sum(1 for row in reflected if row.tobytes() not in members)
    doubled = sum(1 for row in phi if (2 * row).tobytes() in members)

    bad_ratios = int((~integral).sum())
    report.add_row(claim='2<y_i,y_j>/|y_j|^2 is an integer', lhs=bad_ratios, rhs=0,
                   verdict='PASS' if bad_ratios == 0 else 'FAIL')
    report.add_row(claim='reflections stay in Phi', lhs=missing, rhs=0, verdict='PASS' if missing == 0 else 'FAIL')
    report.add_row(claim='only +-y are multiples of y in Phi', lhs=doubled, rhs=0,
                   verdict='PASS' if doubled == 0 else 'FAIL')
    report.details['phi_size'] = len(phi)
    return report


def check_f_properties(max_n: int = 64, max_pair: int = 32) -> CheckReport:
    """f >= g on 1..max_n and f superadditive on all pairs up to max_pair."""
    report = CheckReport('f_g_table')
    below = [n for n in range(1, max_n + 1) if f_of(n) < g_of(n)]
    report.add_row(claim=f'f(n) >= g(n) for 1 <= n <= {max_n}', lhs=len(below), rhs=0,
                   verdict='PASS' if not below else 'FAIL')
    broken = [(a, b) for a in range(1, max_pair + 1) for b in range(a, max_pair + 1)
              if f_of(a + b) < f_of(a) + f_of(b)]
    report.add_row(claim=f'f(a+b) >= f(a) + f(b) for a, b <= {max_pair}', lhs=len(broken), rhs=0,
                   verdict='PASS' if not broken else 'FAIL')
    if below or broken:
        report.details['counterexamples'] = {'f_below_g': below, 'not_superadditive': broken[:20]}
    return report
