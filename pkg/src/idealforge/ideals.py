"""Finite-scale membership oracles for Ramsey-type ideals.

The ideals themselves are defined through infinite witnesses, so at desk
scale every membership question becomes a positivity proxy: a set is
"positive" when it contains a witness of the configured size (an arithmetic
progression, a clique, a finite-sums basis, a reciprocal mass, a heavy
column).  All oracles here are pure functions of immutable values.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Tuple

from .errors import CannotAvoid, CarrierMismatch


class NatSet:
    """Immutable finite set of naturals, kept as an ascending tuple.

    Supports O(1) membership, iteration in increasing order, and the two
    shift operations ``A + n`` and ``A - n`` where the downward shift keeps
    only elements ``a >= n``.
    """

    __slots__ = ("elements", "_members")

    def __init__(self, iterable: Iterable[int] = ()):
        members = frozenset(iterable)
        for x in members:
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise ValueError(f"natural number expected, got {x!r}")
        self.elements: Tuple[int, ...] = tuple(sorted(members))
        self._members = members

    def __contains__(self, x) -> bool:
        return x in self._members

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __bool__(self) -> bool:
        return bool(self.elements)

    def __eq__(self, other) -> bool:
        if isinstance(other, NatSet):
            return self.elements == other.elements
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"NatSet({list(self.elements)!r})"

    def __add__(self, n: int) -> "NatSet":
        if n < 0:
            raise ValueError("shift offset must be >= 0")
        return NatSet(a + n for a in self.elements)

    def __sub__(self, n: int) -> "NatSet":
        if n < 0:
            raise ValueError("shift offset must be >= 0")
        return NatSet(a - n for a in self.elements if a >= n)

    def min(self) -> int:
        return self.elements[0]

    def max(self) -> int:
        return self.elements[-1]

    def union(self, other: Iterable[int]) -> "NatSet":
        return NatSet(itertools.chain(self.elements, other))

    def intersection(self, other: Iterable[int]) -> "NatSet":
        members = set(other)
        return NatSet(a for a in self.elements if a in members)

    def difference(self, other: Iterable[int]) -> "NatSet":
        members = set(other)
        return NatSet(a for a in self.elements if a not in members)

    def issubset(self, other: "NatSet") -> bool:
        return self._members <= other._members


class EdgeSet:
    """Set of unordered pairs over the vertices ``0 .. n-1``.

    Pairs are normalized to ``(i, j)`` with ``i < j``.  ``gamma()`` gives the
    ordered view ``(max, min)`` used when pair sets are read as subsets of
    ``{(z0, z1) : z0 > z1}``.
    """

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be >= 0")
        norm = set()
        for e in edges:
            i, j = e
            if i == j:
                raise ValueError(f"degenerate edge ({i},{j})")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range for n={n}")
            norm.add((min(i, j), max(i, j)))
        self.n = n
        self.edges = frozenset(norm)

    @classmethod
    def complete(cls, n: int) -> "EdgeSet":
        return cls(n, itertools.combinations(range(n), 2))

    def gamma(self) -> frozenset:
        return frozenset((j, i) for (i, j) in self.edges)

    def has(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def __contains__(self, e) -> bool:
        i, j = e
        return self.has(i, j)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def __eq__(self, other) -> bool:
        if isinstance(other, EdgeSet):
            return self.n == other.n and self.edges == other.edges
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"EdgeSet(n={self.n}, edges={sorted(self.edges)!r})"


class IdealId(Enum):
    VDW = "vdw"
    HINDMAN = "hindman"
    RAMSEY = "ramsey"
    SUMMABLE = "summable"
    FIN = "fin"
    FIN2 = "fin2"


# Ideals whose carrier is a set of naturals rather than a set of pairs.
NAT_IDEALS = (IdealId.VDW, IdealId.HINDMAN, IdealId.SUMMABLE, IdealId.FIN)


@dataclass(frozen=True)
class ScaleParams:
    """Finite positivity proxies for the ideals.

    Defaults are the smallest scales at which every construction in the
    toolkit runs in seconds; they are pragmatic knobs, not canonical values.
    """

    ap_len: int = 5
    clique_size: int = 4
    fs_size: int = 3
    tau: Fraction = Fraction(2)
    window: int = 256

    def __post_init__(self):
        object.__setattr__(self, "tau", Fraction(self.tau))
        if self.ap_len < 3:
            raise ValueError("ap_len must be >= 3")
        if self.clique_size < 3:
            raise ValueError("clique_size must be >= 3")
        if self.fs_size < 2:
            raise ValueError("fs_size must be >= 2")
        if self.tau <= 0:
            raise ValueError("tau must be > 0")
        if self.window <= 0:
            raise ValueError("window must be > 0")


def longest_ap(A: NatSet) -> int:
    """Length of the longest arithmetic progression inside A.

    0 for the empty set, 1 for singletons.  Scans all (start, difference)
    pairs and extends each maximal start, so O(|A|^2 * L).
    """
    xs = A.elements
    if not xs:
        return 0
    if len(xs) == 1:
        return 1
    best = 2
    for i, a in enumerate(xs):
        for b in xs[i + 1 :]:
            d = b - a
            if a - d in A:
                continue  # not a maximal start; counted at its true start
            length = 2
            nxt = b + d
            while nxt in A:
                length += 1
                nxt += d
            if length > best:
                best = length
    return best


def find_ap(A: NatSet, k: int) -> Optional[Tuple[int, int]]:
    """First (start, difference) of a k-term progression in A, or None.

    Tie-break: smallest start, then smallest difference.  For k = 1 the
    difference is reported as 1 by convention.  Only realized differences
    are scanned (the second term must itself lie in A), so O(|A|^2 k).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    xs = A.elements
    if len(xs) < k:
        return None
    if k == 1:
        return (xs[0], 1)
    top = xs[-1]
    for i, a in enumerate(xs):
        for b in xs[i + 1 :]:
            d = b - a
            if a + (k - 1) * d > top:
                break
            if all(a + j * d in A for j in range(2, k)):
                return (a, d)
    return None


def reciprocal_sum(A: NatSet) -> Fraction:
    """Exact value of sum over a in A of 1/(a+1)."""
    total = Fraction(0)
    for a in A:
        total += Fraction(1, a + 1)
    return total


def find_clique(G: EdgeSet, k: int) -> Optional[NatSet]:
    """Lexicographically least k-clique of G, or None.

    Backtracking over ascending vertices with bitset neighborhood
    intersection and a remaining-candidates prune.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = G.n
    if n == 0 or k > n:
        return None
    if k == 1:
        return NatSet([0])
    adj = [0] * n
    for (i, j) in G.edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i

    def dfs(chosen: list, cand: int) -> Optional[Tuple[int, ...]]:
        if len(chosen) == k:
            return tuple(chosen)
        need = k - len(chosen)
        m = cand
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m &= m - 1
            above = cand & ~((1 << (v + 1)) - 1)
            if 1 + (adj[v] & above).bit_count() < need:
                continue
            found = dfs(chosen + [v], adj[v] & above)
            if found is not None:
                return found
        return None

    hit = dfs([], (1 << n) - 1)
    return NatSet(hit) if hit is not None else None


def heavy_columns(pairs: Iterable[Tuple[int, int]], t: int) -> NatSet:
    """Columns n with at least t members k among the given (n, k) pairs."""
    if t < 1:
        raise ValueError("threshold must be >= 1")
    counts: Counter = Counter()
    for p in set(map(tuple, pairs)):
        n, k = p
        if n < 0 or k < 0:
            raise ValueError(f"pair {p!r} has a negative coordinate")
        counts[n] += 1
    return NatSet(n for n, c in counts.items() if c >= t)


def _as_pair_collection(A) -> frozenset:
    if isinstance(A, EdgeSet):
        return A.gamma()
    if isinstance(A, (set, frozenset, list, tuple)):
        return frozenset(map(tuple, A))
    raise CarrierMismatch(f"pair collection expected, got {type(A).__name__}")


def _require_natset(A, ideal: IdealId, window: int) -> NatSet:
    if not isinstance(A, NatSet):
        raise CarrierMismatch(
            f"{ideal.value} takes a NatSet, got {type(A).__name__}"
        )
    if A and A.max() >= window:
        raise ValueError(
            f"set reaches {A.max()} but the window is {window}; raise --window"
        )
    return A


def is_positive(A, ideal: IdealId, params: ScaleParams = ScaleParams()) -> bool:
    """Finite positivity of A for the given ideal at the given scale.

    VDW: contains an ap_len-term progression.  HINDMAN: contains fs(B) for a
    distinct-sums basis of size fs_size.  RAMSEY: contains a clique_size
    clique.  SUMMABLE: reciprocal mass at least tau.  FIN: at least half the
    window.  FIN2: some column with fs_size members.
    """
    if ideal is IdealId.VDW:
        return longest_ap(_require_natset(A, ideal, params.window)) >= params.ap_len
    if ideal is IdealId.HINDMAN:
        from .sparse import find_fs_subset

        A = _require_natset(A, ideal, params.window)
        return find_fs_subset(A, params.fs_size) is not None
    if ideal is IdealId.SUMMABLE:
        return reciprocal_sum(_require_natset(A, ideal, params.window)) >= params.tau
    if ideal is IdealId.FIN:
        return 2 * len(_require_natset(A, ideal, params.window)) >= params.window
    if ideal is IdealId.RAMSEY:
        if not isinstance(A, EdgeSet):
            raise CarrierMismatch(
                f"ramsey takes an EdgeSet, got {type(A).__name__}"
            )
        return find_clique(A, params.clique_size) is not None
    if ideal is IdealId.FIN2:
        if isinstance(A, NatSet):
            raise CarrierMismatch("fin2 takes a pair collection, not a NatSet")
        return bool(heavy_columns(_as_pair_collection(A), params.fs_size))
    raise CarrierMismatch(f"unknown ideal {ideal!r}")


def _greedy_ap_free(A: NatSet, target: int) -> NatSet:
    chosen: list = []
    members = set()
    for a in A:
        ok = True
        for y in chosen:
            x = 2 * y - a  # a would close the 3-term progression x, y, a
            if x in members and x != y:
                ok = False
                break
        if ok:
            chosen.append(a)
            members.add(a)
            if len(chosen) == target:
                break
    return NatSet(chosen)


def _greedy_sum_free(A: NatSet, target: int) -> NatSet:
    chosen: list = []
    sums = set()
    for a in A:
        if a == 0 or a in sums:
            continue  # 0 + x = x would sit inside any set containing 0
        for u in chosen:
            sums.add(u + a)
        sums.add(a + a)
        chosen.append(a)
        if len(chosen) == target:
            break
    return NatSet(chosen)


def _greedy_matching(G: EdgeSet, target: int) -> EdgeSet:
    used = set()
    picked = []
    for (i, j) in sorted(G.edges):
        if i in used or j in used:
            continue
        picked.append((i, j))
        used.update((i, j))
        if len(picked) == target:
            break
    return EdgeSet(G.n, picked)


def tall_witness(A, ideal: IdealId, params: ScaleParams, target: int):
    """Subset of A of size >= target that is NOT positive for the ideal.

    The finite content of tallness: inside any large enough set sits a large
    non-positive one.  Raises CannotAvoid when the strategy cannot reach the
    requested size (the caller should lower target).
    """
    if target < 0:
        raise ValueError("target must be >= 0")
    if len(A) < target:
        raise CannotAvoid(f"input has {len(A)} elements, target is {target}")

    if ideal is IdealId.VDW:
        B = _greedy_ap_free(_require_natset(A, ideal, params.window), target)
    elif ideal is IdealId.HINDMAN:
        B = _greedy_sum_free(_require_natset(A, ideal, params.window), target)
    elif ideal is IdealId.SUMMABLE:
        A = _require_natset(A, ideal, params.window)
        B = NatSet(A.elements[-target:]) if target else NatSet()
    elif ideal is IdealId.FIN:
        A = _require_natset(A, ideal, params.window)
        B = NatSet(A.elements[:target])
    elif ideal is IdealId.RAMSEY:
        if not isinstance(A, EdgeSet):
            raise CarrierMismatch("ramsey takes an EdgeSet")
        B = _greedy_matching(A, target)
    elif ideal is IdealId.FIN2:
        pairs = sorted(_as_pair_collection(A))
        per_col: Counter = Counter()
        picked = []
        for (n, k) in pairs:
            if per_col[n] < params.fs_size - 1:
                per_col[n] += 1
                picked.append((n, k))
                if len(picked) == target:
                    break
        B = frozenset(picked)
    else:
        raise CarrierMismatch(f"unknown ideal {ideal!r}")

    if len(B) < target:
        raise CannotAvoid(
            f"{ideal.value} strategy reached only {len(B)} of {target} elements"
        )
    if is_positive(B, ideal, params):
        raise CannotAvoid(
            f"{ideal.value} witness of size {target} is still positive"
        )
    return B
