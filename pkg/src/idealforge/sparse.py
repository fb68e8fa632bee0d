"""Finite-sums sets, sparse and very sparse bases, and decompositions.

A basis D is *sparse* when all nonempty subset sums are distinct, so every
x in FS(D) has a unique decomposition alpha(x).  It is *very sparse* when,
additionally, overlapping decompositions force the sum back out of FS(D).
Everything here is exact integer arithmetic over immutable values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

from .errors import NotInFS, NotSparse, PoolExhausted, TooLarge
from .ideals import NatSet

FS_CAP = 24  # 2^|B| enumeration bound for fs / sparseness checks
VERY_SPARSE_CAP = 16  # quadratic scan over FS pairs


def _as_elements(B) -> Tuple[int, ...]:
    if isinstance(B, NatSet):
        return B.elements
    if isinstance(B, SparseBasis):
        return B.elements
    return NatSet(B).elements


def fs(B) -> NatSet:
    """All sums of nonempty subsets of B, duplicates collapsed."""
    xs = _as_elements(B)
    if len(xs) > FS_CAP:
        raise TooLarge(f"|B| = {len(xs)} exceeds the fs cap {FS_CAP}")
    sums = {0}
    for b in xs:
        sums |= {s + b for s in sums}
    sums.discard(0)
    return NatSet(sums)


def is_sparse(D) -> bool:
    """True iff all 2^|D| - 1 nonempty subset sums are pairwise distinct."""
    xs = _as_elements(D)
    if len(xs) > FS_CAP:
        raise TooLarge(f"|D| = {len(xs)} exceeds the sparseness cap {FS_CAP}")
    return len(fs(NatSet(xs))) == (1 << len(xs)) - 1


def _is_super_increasing(xs: Tuple[int, ...]) -> bool:
    total = 0
    for x in xs:
        if x <= total:
            return False
        total += x
    return bool(xs) and xs[0] > 0


class SparseBasis:
    """Validated ascending basis with unique subset-sum decompositions.

    Construction verifies sparseness.  Super-increasing bases (each element
    larger than the sum of its predecessors) are accepted without the
    exponential enumeration and decompose by greedy descent; everything else
    is table-backed from a full subset-sum sweep.
    """

    __slots__ = ("elements", "_table", "_fs")

    def __init__(self, elements: Iterable[int]):
        xs = _as_elements(elements)
        if len(set(xs)) != len(xs):
            raise NotSparse("duplicate elements")
        self.elements: Tuple[int, ...] = xs
        self._fs: Optional[NatSet] = None
        if _is_super_increasing(xs):
            self._table: Optional[Dict[int, Tuple[int, ...]]] = None
            return
        if len(xs) > FS_CAP:
            raise TooLarge(
                f"|D| = {len(xs)} exceeds the validation cap {FS_CAP}"
            )
        table: Dict[int, Tuple[int, ...]] = {}
        for r in range(1, len(xs) + 1):
            for combo in itertools.combinations(xs, r):
                s = sum(combo)
                if s in table:
                    raise NotSparse(
                        f"{s} = sum{table[s]} = sum{combo}; decompositions collide"
                    )
                table[s] = combo
        self._table = table

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparseBasis):
            return self.elements == other.elements
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"SparseBasis({list(self.elements)!r})"

    def fs_set(self) -> NatSet:
        if self._fs is None:
            self._fs = fs(NatSet(self.elements))
        return self._fs

    def __contains__(self, x: int) -> bool:
        if self._table is not None:
            return x in self._table
        return self._greedy(x) is not None

    def _greedy(self, x: int) -> Optional[Tuple[int, ...]]:
        parts = []
        rest = x
        for d in reversed(self.elements):
            if d <= rest:
                parts.append(d)
                rest -= d
        return tuple(reversed(parts)) if rest == 0 and parts else None

    def alpha(self, x: int) -> NatSet:
        """The unique subset of the basis summing to x."""
        if self._table is not None:
            combo = self._table.get(x)
        else:
            combo = self._greedy(x)
        if combo is None:
            raise NotInFS(f"{x} has no decomposition over {list(self.elements)}")
        return NatSet(combo)


@dataclass(frozen=True)
class VerySparseFlag:
    verified: bool
    counterexample: Optional[Tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.verified


def is_very_sparse(D) -> VerySparseFlag:
    """Check that overlapping decompositions push sums out of FS(D).

    Scans distinct pairs x < y of FS(D) in lexicographic order and reports
    the first pair with alpha(x) meeting alpha(y) but x + y back in FS(D).
    """
    xs = _as_elements(D)
    if len(xs) > VERY_SPARSE_CAP:
        raise TooLarge(
            f"|D| = {len(xs)} exceeds the very-sparse cap {VERY_SPARSE_CAP}"
        )
    basis = SparseBasis(xs)  # raises NotSparse if uniqueness fails
    points = basis.fs_set().elements
    alphas = {x: set(basis.alpha(x)) for x in points}
    members = set(points)
    for i, x in enumerate(points):
        ax = alphas[x]
        for y in points[i + 1 :]:
            if ax & alphas[y] and (x + y) in members:
                return VerySparseFlag(False, (x, y))
    return VerySparseFlag(True)


def very_sparse_subset(pool, k: int) -> SparseBasis:
    """Greedy very sparse sub-basis of size k.

    Growth rule: take the next pool element strictly larger than twice the
    running sum.  That keeps every multiplicity-2 representation unique,
    hence very-sparseness; the verification pass stays as defense in depth.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    xs = _as_elements(pool)
    if not xs:
        raise PoolExhausted("empty pool")
    chosen = []
    total = 0
    for x in xs:
        if x > 2 * total:
            chosen.append(x)
            total += x
            if len(chosen) == k:
                break
    if len(chosen) < k:
        raise PoolExhausted(
            f"greedy reached {len(chosen)} of {k}; next element must exceed {2 * total}"
        )
    flag = is_very_sparse(NatSet(chosen)) if k <= VERY_SPARSE_CAP else VerySparseFlag(True)
    if not flag.verified:
        raise AssertionError(
            f"growth rule produced a non-very-sparse basis {chosen}: {flag.counterexample}"
        )
    return SparseBasis(chosen)


def find_fs_subset(A: NatSet, k: int) -> Optional[NatSet]:
    """Least basis B in A with distinct subset sums and fs(B) inside A.

    Backtracks over candidates in increasing order, pruning as soon as a
    partial sum escapes A or collides with an earlier sum.  Singletons of
    FS(B) force B inside A.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not isinstance(A, NatSet):
        A = NatSet(A)
    xs = A.elements
    if len(xs) < k:
        return None
    if k == 1:
        return NatSet([xs[0]])

    def dfs(start: int, basis: list, sums: set) -> Optional[Tuple[int, ...]]:
        if len(basis) == k:
            return tuple(basis)
        for idx in range(start, len(xs)):
            if len(xs) - idx < k - len(basis):
                break
            c = xs[idx]
            fresh = {c}
            fresh.update(s + c for s in sums)
            if len(fresh) != len(sums) + 1 or fresh & sums:
                continue  # a subset-sum collision; basis would not be sparse
            if not all(v in A for v in fresh):
                continue
            found = dfs(idx + 1, basis + [c], sums | fresh)
            if found is not None:
                return found
        return None

    hit = dfs(0, [], set())
    return NatSet(hit) if hit is not None else None


def conflict_set(D: SparseBasis, y: int) -> NatSet:
    """All x in FS(D) whose decomposition meets the decomposition of y."""
    ay = set(D.alpha(y))
    return NatSet(x for x in D.fs_set() if ay & set(D.alpha(x)))


def binary_alpha(x: int) -> NatSet:
    """Decomposition over the base of powers of two: the binary expansion."""
    if x < 0:
        raise ValueError("natural expected")
    return NatSet(1 << i for i in range(x.bit_length()) if (x >> i) & 1)


def shift(A: NatSet, n: int, direction: str = "up") -> NatSet:
    """A + n, or A - n keeping only elements >= n."""
    if direction == "up":
        return A + n
    if direction == "down":
        return A - n
    raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
