"""Shared brute-force oracles and generators for the test suite.

The oracles deliberately use different algorithms from the library (dynamic
programming, full enumeration, counters) so cross-checks are meaningful.
"""

import itertools
import random
from collections import Counter
from fractions import Fraction

import pytest

from idealforge import EdgeSet, NatSet, is_positive
from idealforge.canonical import PAIR_CASES, _fs_case_flags, \
    _pair_case_flags, high_bit, low_bit


def dp_longest_ap(xs) -> int:
    """Longest progression via the classic ending-pair DP."""
    xs = sorted(set(xs))
    n = len(xs)
    if n == 0:
        return 0
    if n == 1:
        return 1
    idx = {x: i for i, x in enumerate(xs)}
    best = 2
    L = [[2] * n for _ in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            i = idx.get(2 * xs[j] - xs[k])
            if i is not None and i < j:
                L[j][k] = L[i][j] + 1
            best = max(best, L[j][k])
    return best


def naive_clique(G: EdgeSet, k: int):
    """First k-clique by full enumeration of vertex combinations."""
    if k == 1:
        return (0,) if G.n else None
    for verts in itertools.combinations(range(G.n), k):
        if all(G.has(i, j) for i, j in itertools.combinations(verts, 2)):
            return verts
    return None


def subset_sum_counts(elements) -> Counter:
    """How many nonempty subsets reach each sum; 1 everywhere iff sparse."""
    counts: Counter = Counter()
    xs = list(elements)
    for r in range(1, len(xs) + 1):
        for combo in itertools.combinations(xs, r):
            counts[sum(combo)] += 1
    return counts


def harmonic(n: int) -> Fraction:
    total = Fraction(0)
    for i in range(1, n + 1):
        total += Fraction(1, i)
    return total


def naive_find_canonical(phi, m):
    """Full-enumeration oracle for the least classified pair ground set."""
    for T in itertools.combinations(range(phi.n), m):
        pairs = list(itertools.combinations(T, 2))
        values = [phi(p) for p in pairs]
        flags = _pair_case_flags(pairs, values)
        alive = [c for c in PAIR_CASES if flags[c]]
        if alive:
            assert len(alive) == 1
            return NatSet(T), alive[0]
    return None


def fs_flags_oracle(points, values):
    """Direct biconditional table for the finite-sums cases."""
    mins = [low_bit(x) for x in points]
    maxs = [high_bit(x) for x in points]
    return _fs_case_flags(points, values, mins, maxs)


def naive_search_reduction(src, dst):
    """Try every assignment dst carrier -> src carrier in lex order."""
    from idealforge.reduction import positive_family

    dst_carrier = dst.carrier()
    src_carrier = src.carrier()
    family = positive_family(dst)
    elems = [sorted(B.edges) if isinstance(B, EdgeSet) else list(B.elements)
             for B in family]
    for values in itertools.product(src_carrier, repeat=len(dst_carrier)):
        f = dict(zip(dst_carrier, values))
        if all(
            is_positive(src.as_carrier_set(f[x] for x in es), src.ideal, src.params)
            for es in elems
        ):
            return f
    return None


def random_pool(rng: random.Random, bands: int = 27, per_band: int = 2) -> NatSet:
    """Log-uniform pool: a few draws from every dyadic band [2^j, 2^(j+1)).

    Dense at every scale, so doubling-sum greedy selections can always climb.
    """
    out = set()
    for j in range(bands):
        for _ in range(per_band):
            out.add(rng.randrange(1 << j, 1 << (j + 1)))
    return NatSet(out)


def random_block_basis(rng: random.Random, size: int):
    """Random basis with binary supports in disjoint bit blocks."""
    from idealforge.canonical import BlockBasis

    elements = []
    bit = 0
    for _ in range(size):
        width = rng.randint(1, 3)
        value = rng.randint(1, (1 << width) - 1) << bit
        elements.append(value)
        bit += width + rng.randint(0, 2)
    return BlockBasis(elements)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
