#!/usr/bin/env python3
"""
Enumeration Module
Exact counts of lattice vectors by squared norm.

Three independent counters are provided so that they can check one another:
  - count_by_norm: pruned depth-first enumeration over coefficient vectors
    (Fincke-Pohst style, on a triangular decomposition of the Gram matrix)
  - census_zn_dp / census_convolve: power-series products for Z^n and
    direct sums
  - census_oracle: exhaustive scan of a certified coefficient box

Pruning may use floating point above `exact_decomposition_max_rank`, but every
leaf is re-verified with the exact integer quadratic form, which is the only
thing that decides whether a vector is counted.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import sympy

from config import DEFAULT_CONFIG, Config
from errors import InsufficientTruncation, MethodMismatch, ResourceLimitExceeded
from lattice_core import DirectSumDescriptor, Lattice, make_lattice

logger = logging.getLogger(__name__)

METHODS = ('pruned', 'dp', 'oracle', 'convolved')


@dataclass(frozen=True)
class Census:
    """On-sphere counts m_0..m_K of a rank-n lattice."""
    n: int
    max_norm: int
    on_sphere: Tuple[int, ...]
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"Unknown census method '{self.method}'")
        if len(self.on_sphere) != self.max_norm + 1:
            raise ValueError(f"Census needs {self.max_norm + 1} counts, got {len(self.on_sphere)}")
        if self.on_sphere[0] != 1:
            raise ValueError(f"m_0 must be 1, got {self.on_sphere[0]}")
        for k, m in enumerate(self.on_sphere[1:], start=1):
            if m < 0 or m % 2:
                raise ValueError(f"m_{k} = {m} must be a non-negative even count")

    def in_ball(self, k: int) -> int:
        return sum(self.on_sphere[:k + 1])

    @property
    def in_ball_counts(self) -> Tuple[int, ...]:
        return tuple(itertools.accumulate(self.on_sphere))

    def truncated(self, max_norm: int) -> 'Census':
        if max_norm > self.max_norm:
            raise InsufficientTruncation(f"Census reaches norm {self.max_norm}, {max_norm} requested")
        return Census(self.n, max_norm, self.on_sphere[:max_norm + 1], self.method)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'k': range(self.max_norm + 1),
            'on_sphere': list(self.on_sphere),
            'in_ball': list(self.in_ball_counts),
        })

    def to_dict(self) -> Dict:
        return {
            'n': self.n,
            'max_norm': self.max_norm,
            'method': self.method,
            'on_sphere': list(self.on_sphere),
            'in_ball': list(self.in_ball_counts),
        }


@dataclass(frozen=True)
class ShortVectorList:
    """One representative of each +-pair of vectors with x^T G x = norm_target."""
    norm_target: int
    vectors: Tuple[Tuple[int, ...], ...]
    halved: bool = True

    @property
    def count(self) -> int:
        """m_k, i.e. both signs."""
        return 2 * len(self.vectors) if self.halved else len(self.vectors)

    def with_negatives(self) -> List[Tuple[int, ...]]:
        return [v for x in self.vectors for v in (x, tuple(-c for c in x))]


# --- pruned enumeration ----------------------------------------------------

def _decompose_exact(gram) -> Tuple[List[Fraction], List[List[Fraction]]]:
    """q(x) = sum_i q_i (x_i + sum_{j>i} u_ij x_j)^2 in exact rationals."""
    n = len(gram)
    m = [[Fraction(v) for v in row] for row in gram]
    for i in range(n):
        for j in range(i + 1, n):
            m[j][i] = m[i][j]
            m[i][j] = m[i][j] / m[i][i]
        for k in range(i + 1, n):
            for col in range(k, n):
                m[k][col] -= m[k][i] * m[i][col]
    return [m[i][i] for i in range(n)], m


def _decompose_float(gram) -> Tuple[List[float], List[List[float]]]:
    n = len(gram)
    m = np.array(gram, dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            m[j, i] = m[i, j]
            m[i, j] = m[i, j] / m[i, i]
        for k in range(i + 1, n):
            m[k, k:] -= m[k, i] * m[i, k:]
    return [float(m[i, i]) for i in range(n)], m.tolist()


class PruningTree:
    """Depth-first coefficient tree for x^T G x <= max_norm.

    Coordinates are processed in reverse so that x_0 is the outermost level;
    every non-zero vector is reached once with its first non-zero coefficient
    positive.
    """

    def __init__(self, gram, max_norm: int, config: Config = DEFAULT_CONFIG):
        self.gram = [list(row) for row in gram]
        self.n = len(self.gram)
        self.max_norm = max_norm
        self.config = config
        self.exact = self.n <= config.exact_decomposition_max_rank
        reversed_gram = [[self.gram[self.n - 1 - i][self.n - 1 - j] for j in range(self.n)] for i in range(self.n)]
        if self.exact:
            self.q, self.u = _decompose_exact(reversed_gram)
            self.slack = 0
        else:
            self.q, self.u = _decompose_float(reversed_gram)
            self.slack = config.float_margin * (max_norm + 1)
        self.nodes = 0

    def exact_norm(self, x: Sequence[int]) -> int:
        g = self.gram
        return sum(x[i] * sum(g[i][j] * x[j] for j in range(self.n) if x[j]) for i in range(self.n) if x[i])

    def candidates(self, level: int, y: List[int], remaining, nonneg: bool):
        """Integer values for y[level] with q (y + c)^2 <= remaining, and what is left after each."""
        q = self.q[level]
        row = self.u[level]
        center = sum((row[j] * y[j] for j in range(level + 1, self.n) if y[j]), Fraction(0) if self.exact else 0.0)
        bound = remaining + self.slack
        if bound < 0:
            return []
        radius = math.sqrt(float(bound / q)) * (1 + self.config.float_margin)
        c = float(center)
        lo = math.floor(-c - radius) - 1
        hi = math.ceil(-c + radius) + 1
        if nonneg:
            lo = max(lo, 0)
        found = []
        for value in range(lo, hi + 1):
            z = value + center
            used = q * z * z
            if used <= bound:
                found.append((value, remaining - used))
        return found

    def _count_node(self):
        self.nodes += 1
        if self.nodes > self.config.node_limit:
            raise ResourceLimitExceeded(
                f"Enumeration exceeded {self.config.node_limit} nodes (rank {self.n}, max norm {self.max_norm})",
                nodes=self.nodes, limit=self.config.node_limit)

    def _leaf(self, y: List[int], visit: Callable):
        x = tuple(reversed(y))
        norm = self.exact_norm(x)
        if norm <= self.max_norm:
            visit(x, norm)

    def _walk(self, level: int, y: List[int], remaining, on_top: bool, visit: Callable):
        for value, rest in self.candidates(level, y, remaining, on_top):
            self._count_node()
            y[level] = value
            if level == 0:
                self._leaf(y, visit)
            else:
                self._walk(level - 1, y, rest, on_top and value == 0, visit)
        y[level] = 0

    def top_candidates(self):
        y = [0] * self.n
        return self.candidates(self.n - 1, y, Fraction(self.max_norm) if self.exact else float(self.max_norm), True)

    def walk_branch(self, value: int, rest, visit: Callable):
        """Walk the subtree under a fixed outermost coefficient."""
        y = [0] * self.n
        y[self.n - 1] = value
        self._count_node()
        if self.n == 1:
            self._leaf(y, visit)
        else:
            self._walk(self.n - 2, y, rest, value == 0, visit)

    def walk(self, visit: Callable):
        for value, rest in self.top_candidates():
            self.walk_branch(value, rest, visit)


def _tally(counts: List[int]) -> Callable:
    def visit(x, norm):
        counts[norm] += 1 if norm == 0 else 2
    return visit


def _count_branch(args):
    gram, max_norm, config, value, rest = args
    tree = PruningTree(gram, max_norm, config)
    counts = [0] * (max_norm + 1)
    tree.walk_branch(value, rest, _tally(counts))
    return counts, tree.nodes


def count_by_norm(lattice: Lattice, max_norm: int, config: Config = DEFAULT_CONFIG,
                  workers: Optional[int] = None) -> Census:
    """Exact m_k for k <= max_norm by pruned enumeration."""
    if max_norm < 1:
        raise ValueError(f"max_norm must be >= 1, got {max_norm}")
    workers = config.workers if workers is None else workers
    gram = lattice.gram.as_lists()
    tree = PruningTree(gram, max_norm, config)
    counts = [0] * (max_norm + 1)

    if workers > 1:
        branches = tree.top_candidates()
        jobs = [(gram, max_norm, config, value, rest) for value, rest in branches]
        with Pool(processes=workers) as pool:
            partials = pool.map(_count_branch, jobs)
        nodes = 0
        for partial, branch_nodes in partials:
            counts = [a + b for a, b in zip(counts, partial)]
            nodes += branch_nodes
        if nodes > config.node_limit:
            raise ResourceLimitExceeded(f"Enumeration exceeded {config.node_limit} nodes", nodes=nodes,
                                        limit=config.node_limit)
    else:
        tree.walk(_tally(counts))
        nodes = tree.nodes

    mode = 'exact' if tree.exact else 'guarded-float'
    logger.info(f"✅ Census of {lattice.name} up to norm {max_norm}: {nodes} nodes ({mode} pruning, {workers} worker(s))")
    return Census(lattice.n, max_norm, tuple(counts), 'pruned')


def list_vectors_up_to(lattice: Lattice, max_norm: int, config: Config = DEFAULT_CONFIG) -> Dict[int, ShortVectorList]:
    """Representatives of every non-zero vector with norm <= max_norm, grouped by norm."""
    tree = PruningTree(lattice.gram.as_lists(), max_norm, config)
    found: Dict[int, List[Tuple[int, ...]]] = {k: [] for k in range(1, max_norm + 1)}

    def visit(x, norm):
        if norm > 0:
            found[norm].append(x)

    tree.walk(visit)
    return {k: ShortVectorList(k, tuple(vectors)) for k, vectors in found.items()}


def list_vectors_with_norm(lattice: Lattice, k: int, config: Config = DEFAULT_CONFIG) -> ShortVectorList:
    """All vectors with x^T G x = k, one per +- pair."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return list_vectors_up_to(lattice, k, config)[k]


# --- brute-force oracle ----------------------------------------------------

def smallest_eigenvalue_lower_bound(gram) -> Fraction:
    """Exact positive rational below the smallest eigenvalue of G.

    Isolates the real roots of the exact characteristic polynomial and
    refines until the lowest isolating interval starts above zero and its
    left end is at least 3/4 of its right end.
    """
    x = sympy.Symbol('x')
    poly = sympy.Poly(sympy.Matrix(gram).charpoly(x).as_expr(), x)
    eps = sympy.Rational(1, 2)
    for _ in range(200):
        intervals = poly.intervals(eps=eps)
        (lower, upper), _ = min(intervals, key=lambda item: item[0][0])
        if lower > 0 and 4 * lower >= 3 * upper:
            lower = sympy.Rational(lower)
            return Fraction(int(lower.p), int(lower.q))
        eps /= 4
    raise ValueError("Gram matrix is not positive definite (no positive eigenvalue bound)")


def certified_box_radius(gram, max_norm: int) -> int:
    """Smallest B with B^2 * lambda >= K, so x^T G x <= K forces |x_i| <= B."""
    lam = smallest_eigenvalue_lower_bound(gram)
    bound = math.isqrt(math.floor(Fraction(max_norm) / lam))
    while bound * bound * lam < max_norm:
        bound += 1
    return bound


def census_oracle(lattice: Lattice, max_norm: int, config: Config = DEFAULT_CONFIG) -> Census:
    """Exhaustive count over the box [-B, B]^n with a certified radius B."""
    n = lattice.n
    if n > config.oracle_max_rank:
        raise ResourceLimitExceeded(f"Oracle supports rank <= {config.oracle_max_rank}, got {n}")
    gram = lattice.gram.as_lists()
    radius = certified_box_radius(gram, max_norm)
    width = 2 * radius + 1
    if width ** n > config.oracle_max_points:
        raise ResourceLimitExceeded(
            f"Oracle box {width}^{n} exceeds {config.oracle_max_points} points", nodes=width ** n,
            limit=config.oracle_max_points)
    largest = max(abs(v) for row in gram for v in row)
    if n * n * radius * radius * largest >= 2 ** 62:
        raise ResourceLimitExceeded("Oracle box too large for exact int64 evaluation")

    g = np.array(gram, dtype=np.int64)
    if n == 1:
        rest = np.zeros((1, 0), dtype=np.int64)
    else:
        rest = np.indices((width,) * (n - 1)).reshape(n - 1, -1).T.astype(np.int64) - radius
    base = np.einsum('ij,jk,ik->i', rest, g[1:, 1:], rest)
    cross = rest @ g[0, 1:]

    counts = np.zeros(max_norm + 1, dtype=np.int64)
    for x0 in range(-radius, radius + 1):
        norms = g[0, 0] * x0 * x0 + 2 * x0 * cross + base
        inside = norms[norms <= max_norm]
        counts += np.bincount(inside, minlength=max_norm + 1)[:max_norm + 1]

    logger.info(f"✅ Oracle census of {lattice.name} up to norm {max_norm}: box radius {radius}, {width ** n} points")
    return Census(n, max_norm, tuple(int(c) for c in counts), 'oracle')


# --- power series ----------------------------------------------------------

def truncated_product(a: Sequence[int], b: Sequence[int], max_norm: int) -> List[int]:
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(max_norm + 1)]


def census_zn_dp(n: int, max_norm: int) -> Census:
    """Coefficients of (sum_z x^{z^2})^n up to degree max_norm."""
    if n < 1 or max_norm < 1:
        raise ValueError(f"n and max_norm must be positive, got n={n}, max_norm={max_norm}")
    one_dim = [0] * (max_norm + 1)
    one_dim[0] = 1
    z = 1
    while z * z <= max_norm:
        one_dim[z * z] = 2
        z += 1
    series = [1] + [0] * max_norm
    for _ in range(n):
        series = truncated_product(series, one_dim, max_norm)
    return Census(n, max_norm, tuple(series), 'dp')


def point_census(max_norm: int) -> Census:
    """Census of the rank-0 lattice, the identity for census_convolve."""
    return Census(0, max_norm, (1,) + (0,) * max_norm, 'convolved')


def census_convolve(a: Census, b: Census, max_norm: int) -> Census:
    """m_k(A+B) = sum_i m_i(A) m_{k-i}(B)."""
    for name, census in (('left', a), ('right', b)):
        if census.max_norm < max_norm:
            raise InsufficientTruncation(f"{name} census reaches norm {census.max_norm}, {max_norm} requested")
    return Census(a.n + b.n, max_norm, tuple(truncated_product(a.on_sphere, b.on_sphere, max_norm)), 'convolved')


def census_by_components(lattice: Lattice, max_norm: int, config: Config = DEFAULT_CONFIG) -> Census:
    """Convolve pruned censuses of the direct-sum components."""
    if not isinstance(lattice.descriptor, DirectSumDescriptor):
        raise MethodMismatch(f"{lattice.name} is not a direct sum")
    census = point_census(max_norm)
    for part in lattice.descriptor.parts:
        census = census_convolve(census, count_by_norm(make_lattice(part), max_norm, config), max_norm)
    return census


def compute_census(lattice: Lattice, max_norm: int, method: str = 'pruned', config: Config = DEFAULT_CONFIG) -> Census:
    """Dispatch to one counting method; dp only applies to Z^n."""
    if method == 'pruned':
        return count_by_norm(lattice, max_norm, config)
    if method == 'oracle':
        return census_oracle(lattice, max_norm, config)
    if method == 'dp':
        if not lattice.is_identity():
            raise MethodMismatch(f"dp counts only Z^n; {lattice.name} has a non-identity Gram matrix")
        return census_zn_dp(lattice.n, max_norm)
    if method == 'convolved':
        return census_by_components(lattice, max_norm, config)
    raise MethodMismatch(f"Unknown method '{method}'")
