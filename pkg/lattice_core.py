#!/usr/bin/env python3
"""
Lattice Core Module
Exact representation, construction and validation of integral lattices.

A lattice is carried only by its integer Gram matrix. Every check on this path
(symmetry, positive definiteness, determinant) is done in integer arithmetic;
positive definiteness is read off the leading principal minors produced by
fraction-free (Bareiss) elimination.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from errors import NonIntegralGram, NotPositiveDefinite, UnsupportedFamilyRank, DescriptorError
from lattice_families import FAMILY_FIXED_RANK, FAMILY_MIN_RANK, family_gram

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class GramMatrix:
    """Square integer matrix of pairwise basis inner products."""
    entries: Matrix

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def as_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


@dataclass
class ValidationReport:
    """Every violated Gram-matrix invariant; empty means a valid integral Gram."""
    violations: List[Dict[str, Any]] = field(default_factory=list)
    leading_minors: List[int] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        return 'PASS' if self.valid else 'FAIL'

    def add(self, check: str, location: Any, detail: str):
        self.violations.append({'check': check, 'location': location, 'detail': detail})


# --- descriptors -----------------------------------------------------------

@dataclass(frozen=True)
class FamilyDescriptor:
    family: str
    rank: int


@dataclass(frozen=True)
class ExplicitDescriptor:
    gram: Matrix


@dataclass(frozen=True)
class DirectSumDescriptor:
    parts: Tuple['LatticeDescriptor', ...]


@dataclass(frozen=True)
class ScaledDescriptor:
    inner: 'LatticeDescriptor'
    factor: int


LatticeDescriptor = Union[FamilyDescriptor, ExplicitDescriptor, DirectSumDescriptor, ScaledDescriptor]


def lattice_label(descriptor: LatticeDescriptor) -> str:
    """Short human-readable id, e.g. 'E8+Z2' or '3*A2'."""
    if isinstance(descriptor, FamilyDescriptor):
        if descriptor.family in FAMILY_FIXED_RANK:
            return descriptor.family
        return f"{descriptor.family[0]}{descriptor.rank}"
    if isinstance(descriptor, ExplicitDescriptor):
        return f"gram[{len(descriptor.gram)}]"
    if isinstance(descriptor, DirectSumDescriptor):
        return '+'.join(lattice_label(part) for part in descriptor.parts)
    if isinstance(descriptor, ScaledDescriptor):
        inner = lattice_label(descriptor.inner)
        if isinstance(descriptor.inner, DirectSumDescriptor):
            inner = f"({inner})"
        return f"{descriptor.factor}*{inner}"
    raise DescriptorError(f"Unknown descriptor type: {type(descriptor).__name__}")


@dataclass(frozen=True)
class Lattice:
    gram: GramMatrix
    descriptor: LatticeDescriptor
    det_gram: int

    @property
    def n(self) -> int:
        return self.gram.n

    @property
    def name(self) -> str:
        return lattice_label(self.descriptor)

    def inner(self, x, y) -> int:
        """Exact inner product of two coefficient vectors."""
        g = self.gram.entries
        return sum(x[i] * sum(g[i][j] * y[j] for j in range(len(y)) if y[j]) for i in range(len(x)) if x[i])

    def norm(self, x) -> int:
        return self.inner(x, x)

    def is_identity(self) -> bool:
        g = self.gram.entries
        return all(g[i][j] == (1 if i == j else 0) for i in range(self.n) for j in range(self.n))


# --- exact linear algebra --------------------------------------------------

def leading_minors(entries) -> List[int]:
    """Leading principal minors by Bareiss elimination, stopping after the first non-positive one."""
    m = [list(row) for row in entries]
    n = len(m)
    minors = []
    prev = 1
    for k in range(n):
        pivot = m[k][k]
        minors.append(pivot)
        if pivot <= 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return minors


def integer_rank(rows) -> int:
    """Exact rank of an integer matrix by fraction-free elimination with row pivoting."""
    m = [list(row) for row in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot_row = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        pivot = m[rank][col]
        for r in range(rank + 1, n_rows):
            for c in range(col + 1, n_cols):
                m[r][c] = (m[r][c] * pivot - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = pivot
        rank += 1
        if rank == n_rows:
            break
    return rank


def check_integral(entries) -> ValidationReport:
    """Report every reason `entries` fails to be an integral-lattice Gram matrix."""
    report = ValidationReport()
    rows = [list(row) for row in entries]
    n = len(rows)
    if n == 0:
        report.add('shape', None, 'empty matrix')
        return report
    if any(len(row) != n for row in rows):
        report.add('shape', None, f'matrix is not square ({n} rows)')
        return report

    integral = True
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                report.add('integer', (i, j), f'entry {value!r} is not an integer')
                integral = False
    if not integral:
        return report
    rows = [[int(v) for v in row] for row in rows]

    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                report.add('symmetric', (i, j), f'entries[{i}][{j}]={rows[i][j]} != entries[{j}][{i}]={rows[j][i]}')

    for i in range(n):
        if rows[i][i] < 1:
            report.add('diagonal', i, f'diagonal entry {rows[i][i]} < 1')

    minors = leading_minors(rows)
    report.leading_minors = minors
    if minors[-1] <= 0:
        index = len(minors)
        report.add('positive_definite', index, f'leading minor {index} is {minors[-1]}')
    return report


def gram_determinant(gram: GramMatrix) -> int:
    """Exact determinant of a valid Gram matrix; no floating arithmetic."""
    entries = gram.entries if isinstance(gram, GramMatrix) else gram
    minors = leading_minors(entries)
    if len(minors) < len(entries) or minors[-1] <= 0:
        raise NotPositiveDefinite(f"leading minor {len(minors)} is {minors[-1]}",
                                  minor_index=len(minors), minor_value=minors[-1])
    return minors[-1]


def _validated_gram(entries) -> Tuple[GramMatrix, int]:
    report = check_integral(entries)
    if not report.valid:
        shape_errors = [v for v in report.violations if v['check'] in ('shape', 'integer', 'symmetric')]
        if shape_errors:
            raise NonIntegralGram('; '.join(v['detail'] for v in shape_errors))
        pd = [v for v in report.violations if v['check'] == 'positive_definite']
        index = pd[0]['location'] if pd else None
        value = report.leading_minors[-1] if report.leading_minors else None
        raise NotPositiveDefinite('; '.join(v['detail'] for v in report.violations),
                                  minor_index=index, minor_value=value)
    gram = GramMatrix(tuple(tuple(int(v) for v in row) for row in entries))
    return gram, report.leading_minors[-1]


def block_diagonal(blocks: List[Matrix]) -> Matrix:
    size = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for block in blocks:
        for row in block:
            full = [0] * size
            full[offset:offset + len(row)] = row
            rows.append(tuple(full))
        offset += len(block)
    return tuple(rows)


# --- construction ----------------------------------------------------------

def _check_family_rank(family: str, rank: int):
    if family not in FAMILY_MIN_RANK:
        raise DescriptorError(f"Unknown lattice family '{family}'")
    if family in FAMILY_FIXED_RANK:
        if rank != FAMILY_FIXED_RANK[family]:
            raise UnsupportedFamilyRank(f"{family} has fixed rank {FAMILY_FIXED_RANK[family]}, got {rank}")
        return
    if not isinstance(rank, int) or rank < FAMILY_MIN_RANK[family]:
        raise UnsupportedFamilyRank(f"{family} needs rank >= {FAMILY_MIN_RANK[family]}, got {rank}")


def make_lattice(descriptor: LatticeDescriptor) -> Lattice:
    """Build and validate the lattice a descriptor names."""
    if isinstance(descriptor, FamilyDescriptor):
        _check_family_rank(descriptor.family, descriptor.rank)
        gram, det = _validated_gram(family_gram(descriptor.family, descriptor.rank))
        lattice = Lattice(gram, descriptor, det)
    elif isinstance(descriptor, ExplicitDescriptor):
        gram, det = _validated_gram(descriptor.gram)
        lattice = Lattice(gram, descriptor, det)
    elif isinstance(descriptor, DirectSumDescriptor):
        if not descriptor.parts:
            raise DescriptorError("direct_sum needs at least one component")
        parts = [make_lattice(part) for part in descriptor.parts]
        lattice = parts[0]
        for part in parts[1:]:
            lattice = direct_sum(lattice, part)
        lattice = Lattice(lattice.gram, descriptor, lattice.det_gram)
    elif isinstance(descriptor, ScaledDescriptor):
        if isinstance(descriptor.factor, bool) or not isinstance(descriptor.factor, int) or descriptor.factor < 1:
            raise DescriptorError(f"scale factor must be a positive integer, got {descriptor.factor!r}")
        inner = make_lattice(descriptor.inner)
        c = descriptor.factor
        entries = tuple(tuple(c * v for v in row) for row in inner.gram.entries)
        lattice = Lattice(GramMatrix(entries), descriptor, c ** inner.n * inner.det_gram)
    else:
        raise DescriptorError(f"Unknown descriptor type: {type(descriptor).__name__}")
    logger.debug(f"Built lattice {lattice.name}: rank {lattice.n}, det_gram {lattice.det_gram}")
    return lattice


def direct_sum(a: Lattice, b: Lattice) -> Lattice:
    """Orthogonal direct sum; the Gram matrix is block diagonal and determinants multiply."""
    entries = block_diagonal([a.gram.entries, b.gram.entries])
    parts = []
    for lattice in (a, b):
        if isinstance(lattice.descriptor, DirectSumDescriptor):
            parts.extend(lattice.descriptor.parts)
        else:
            parts.append(lattice.descriptor)
    return Lattice(GramMatrix(entries), DirectSumDescriptor(tuple(parts)), a.det_gram * b.det_gram)


def family(name: str, rank: Optional[int] = None) -> Lattice:
    """Shorthand: family('E8'), family('Zn', 4)."""
    if rank is None:
        rank = FAMILY_FIXED_RANK.get(name)
    return make_lattice(FamilyDescriptor(name, rank))


def random_integral_lattice(rank: int, seed: int, entry_bound: int = 1, max_tries: int = 100) -> Lattice:
    """Gram = B^T B for a seeded random nonsingular integer matrix B."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        basis = rng.integers(-entry_bound, entry_bound + 1, size=(rank, rank))
        columns = [[int(v) for v in basis[:, j]] for j in range(rank)]
        if integer_rank(columns) < rank:
            continue
        entries = tuple(
            tuple(sum(a * b for a, b in zip(columns[i], columns[j])) for j in range(rank))
            for i in range(rank)
        )
        return make_lattice(ExplicitDescriptor(entries))
    raise UnsupportedFamilyRank(f"Could not draw a nonsingular {rank}x{rank} basis with seed {seed}")


def k2_witness(n: int) -> Lattice:
    """Lattice meeting the k=2 bound: E7 (n=7), E8+Z^{n-8} (8<=n<=11), Z^n otherwise."""
    if n == 7:
        return family('E7')
    if n == 8:
        return family('E8')
    if 9 <= n <= 11:
        return make_lattice(DirectSumDescriptor((FamilyDescriptor('E8', 8), FamilyDescriptor('Zn', n - 8))))
    return family('Zn', n)
