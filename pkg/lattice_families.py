#!/usr/bin/env python3
"""
Lattice Families Module
Gram matrices of the named lattice families.

The exceptional Gram matrices are the Cartan matrices of E6, E7 and E8
(simply laced, so the roots have squared norm 2 and the Cartan matrix is the
Gram matrix of a root basis). The infinite families are built from explicit
integer basis vectors so that every entry stays an exact integer.
"""

# Bourbaki node order: 1-3, 3-4, 4-5, 5-6, ... with node 2 attached to node 4.
E6_GRAM = (
    (2, 0, -1, 0, 0, 0),
    (0, 2, 0, -1, 0, 0),
    (-1, 0, 2, -1, 0, 0),
    (0, -1, -1, 2, -1, 0),
    (0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, -1, 2),
)

E7_GRAM = (
    (2, 0, -1, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0),
    (0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, -1, 2),
)

E8_GRAM = (
    (2, 0, -1, 0, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, 0, -1, 2),
)

EXCEPTIONAL_GRAMS = {'E6': E6_GRAM, 'E7': E7_GRAM, 'E8': E8_GRAM}

# family -> smallest supported rank (None = fixed rank)
FAMILY_MIN_RANK = {'Zn': 1, 'An': 1, 'Dn': 2, 'E6': None, 'E7': None, 'E8': None}
FAMILY_FIXED_RANK = {'E6': 6, 'E7': 7, 'E8': 8}


def expected_invariants(family, rank):
    """(determinant, minimal squared norm, kissing count) used to audit the literal data."""
    if family == 'Zn':
        return 1, 1, 2 * rank
    if family == 'An':
        return rank + 1, 2, rank * (rank + 1)
    if family == 'Dn':
        # D2 = A1+A1 and D3 = A3 keep the 2n(n-1) count
        return 4, 2, 2 * rank * (rank - 1)
    return {'E6': (3, 2, 72), 'E7': (2, 2, 126), 'E8': (1, 2, 240)}[family]


def _gram_from_vectors(vectors):
    return tuple(
        tuple(sum(a * b for a, b in zip(u, v)) for v in vectors)
        for u in vectors
    )


def zn_gram(rank):
    return tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))


def an_gram(rank):
    """A_n from e_i - e_{i+1} in Z^{n+1}."""
    vectors = []
    for i in range(rank):
        v = [0] * (rank + 1)
        v[i], v[i + 1] = 1, -1
        vectors.append(v)
    return _gram_from_vectors(vectors)


def dn_gram(rank):
    """D_n from e_1 - e_2, ..., e_{n-1} - e_n, e_{n-1} + e_n in Z^n."""
    vectors = []
    for i in range(rank - 1):
        v = [0] * rank
        v[i], v[i + 1] = 1, -1
        vectors.append(v)
    last = [0] * rank
    last[rank - 2], last[rank - 1] = 1, 1
    vectors.append(last)
    return _gram_from_vectors(vectors)


def family_gram(family, rank):
    """Return the Gram matrix of a named family; rank validation is the caller's job."""
    if family == 'Zn':
        return zn_gram(rank)
    if family == 'An':
        return an_gram(rank)
    if family == 'Dn':
        return dn_gram(rank)
    return EXCEPTIONAL_GRAMS[family]
