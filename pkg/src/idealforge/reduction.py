"""Exhaustive micro-scale search for order-reduction maps between finite
ideal truncations.

A candidate map f from the destination carrier into the source carrier is a
reduction witness at this scale when the image of every minimal positive
destination set is positive in the source.  The search is tiny by design:
its job is quantitative evidence, never a theorem, and every report says so.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Union

from .errors import TooLarge
from .ideals import EdgeSet, IdealId, NatSet, ScaleParams, is_positive
from .report import Report
from .sparse import fs, is_sparse

FINITE_SCALE_CAVEAT = (
    "micro-scale result: evidence about finite truncations only, not a theorem"
)

_NAT_CARRIERS = (IdealId.VDW, IdealId.HINDMAN, IdealId.SUMMABLE, IdealId.FIN)


@dataclass(frozen=True)
class FiniteIdealSpec:
    """A finite truncation: an ideal, its scale, and an explicit carrier.

    ``ground`` is a NatSet for the number-carried ideals (an initial
    segment, or a finite-sums fragment), or an int vertex count for the
    pair-carried Ramsey truncation.
    """

    ideal: IdealId
    params: ScaleParams
    ground: Union[NatSet, int]

    def carrier(self) -> List:
        if self.ideal is IdealId.RAMSEY:
            if not isinstance(self.ground, int):
                raise TypeError("ramsey ground is a vertex count")
            return list(itertools.combinations(range(self.ground), 2))
        if self.ideal is IdealId.FIN2:
            raise TypeError(
                "fin2 truncations have no canonical carrier enumeration; "
                "check explicit maps with verify_reduction"
            )
        if not isinstance(self.ground, NatSet):
            raise TypeError(f"{self.ideal.value} ground is a NatSet")
        return list(self.ground.elements)

    def as_carrier_set(self, elements: Iterable):
        if self.ideal is IdealId.RAMSEY:
            return EdgeSet(self.ground, elements)
        if self.ideal is IdealId.FIN2:
            return frozenset(map(tuple, elements))
        return NatSet(elements)


def positive_family(spec: FiniteIdealSpec) -> List:
    """All inclusion-minimal positive-at-scale subsets of the carrier.

    Progressions for VDW, clique edge sets for RAMSEY, finite-sums sets of
    distinct-sums bases for HINDMAN, first-crossing reciprocal sets for
    SUMMABLE, half-window subsets for FIN.
    """
    p = spec.params
    if spec.ideal is IdealId.VDW:
        A = spec.ground
        if len(A) > 20:
            raise TooLarge(f"carrier size {len(A)} exceeds the cap 20")
        k = p.ap_len
        top = A.max() if A else 0
        out = []
        for a in A:
            for d in range(1, (top - a) // (k - 1) + 1):
                if all(a + j * d in A for j in range(1, k)):
                    out.append(NatSet(a + j * d for j in range(k)))
        return out

    if spec.ideal is IdealId.RAMSEY:
        n = spec.ground
        if n > 8:
            raise TooLarge(f"{n} vertices exceeds the cap 8")
        return [
            EdgeSet(n, itertools.combinations(verts, 2))
            for verts in itertools.combinations(range(n), p.clique_size)
        ]

    if spec.ideal is IdealId.HINDMAN:
        A = spec.ground
        if len(A) > 20:
            raise TooLarge(f"carrier size {len(A)} exceeds the cap 20")
        seen = set()
        out = []
        for basis in itertools.combinations(A.elements, p.fs_size):
            if not is_sparse(NatSet(basis)):
                continue
            sums = fs(NatSet(basis))
            if all(s in A for s in sums) and sums.elements not in seen:
                seen.add(sums.elements)
                out.append(sums)
        return out

    if spec.ideal is IdealId.SUMMABLE:
        A = spec.ground
        if len(A) > 20:
            raise TooLarge(f"carrier size {len(A)} exceeds the cap 20")
        xs = A.elements  # ascending elements = descending reciprocals
        suffix = [Fraction(0)] * (len(xs) + 1)
        for i in range(len(xs) - 1, -1, -1):
            suffix[i] = suffix[i + 1] + Fraction(1, xs[i] + 1)
        out = []

        def grow(idx: int, members: List[int], total: Fraction):
            if total >= p.tau:
                out.append(NatSet(members))
                return  # first crossing: every removal drops below tau
            for i in range(idx, len(xs)):
                if total + suffix[i] < p.tau:
                    break
                grow(i + 1, members + [xs[i]], total + Fraction(1, xs[i] + 1))

        grow(0, [], Fraction(0))
        return out

    if spec.ideal is IdealId.FIN:
        A = spec.ground
        size = (p.window + 1) // 2
        count = 1
        for i in range(size):
            count = count * (len(A) - i) // (i + 1)
            if count > 100_000:
                raise TooLarge("half-window subset family too large")
        return [NatSet(c) for c in itertools.combinations(A.elements, size)]

    raise TooLarge(f"no minimal-family enumeration for {spec.ideal.value}")


def verify_reduction(f, src: FiniteIdealSpec, dst: FiniteIdealSpec) -> Report:
    """Check the contrapositive form on minimal sets: the image of every
    minimal dst-positive set must be src-positive."""
    mapping = f if callable(f) else (lambda x, table=dict(f): table[x])
    report = Report(meta={"caveat": FINITE_SCALE_CAVEAT,
                          "src": src.ideal.value, "dst": dst.ideal.value})
    family = positive_family(dst)
    report.meta["minimal_sets"] = len(family)
    for B in family:
        elems = sorted(B.edges) if isinstance(B, EdgeSet) else list(B.elements)
        image = src.as_carrier_set(mapping(x) for x in elems)
        if not is_positive(image, src.ideal, src.params):
            report.add("positive-images", False,
                       f"minimal set {elems} has non-positive image")
            return report
    report.add("positive-images", True,
               f"all {len(family)} minimal positive images verified")
    return report


@dataclass
class SearchOutcome:
    """Result of the exhaustive map search."""

    found: Optional[Dict] = None
    exhausted: bool = False
    nodes: int = 0
    caveat: str = FINITE_SCALE_CAVEAT

    def to_json_dict(self):
        from .report import jsonable

        return {
            "found": None if self.found is None else
            [[jsonable(k), jsonable(v)] for k, v in sorted(self.found.items())],
            "exhausted": self.exhausted,
            "nodes": self.nodes,
            "caveat": self.caveat,
        }


def search_reduction(src: FiniteIdealSpec, dst: FiniteIdealSpec,
                     node_limit: int = 5_000_000) -> SearchOutcome:
    """Depth-first search for the lexicographically least reduction map.

    Assigns destination carrier elements in canonical order with source
    values ascending; prunes the moment a fully assigned minimal positive
    set has a non-positive image.  Exceeding node_limit raises TooLarge
    rather than faking an exhausted verdict.
    """
    dst_carrier = dst.carrier()
    src_carrier = src.carrier()
    if len(dst_carrier) > 10 or len(src_carrier) > 10:
        raise TooLarge(
            f"search space {len(src_carrier)}^{len(dst_carrier)} exceeds the cap"
        )
    index = {x: i for i, x in enumerate(dst_carrier)}
    family = positive_family(dst)
    completes_at: List[List[int]] = [[] for _ in dst_carrier]
    family_elems = []
    for fi, B in enumerate(family):
        elems = sorted(B.edges) if isinstance(B, EdgeSet) else list(B.elements)
        family_elems.append(elems)
        last = max(index[x] for x in elems)
        completes_at[last].append(fi)

    assignment: List = [None] * len(dst_carrier)
    nodes = 0

    def image_positive(fi: int) -> bool:
        elems = family_elems[fi]
        image = src.as_carrier_set(assignment[index[x]] for x in elems)
        return is_positive(image, src.ideal, src.params)

    def dfs(pos: int) -> Optional[Dict]:
        nonlocal nodes
        if pos == len(dst_carrier):
            return dict(zip(dst_carrier, assignment))
        for value in src_carrier:
            nodes += 1
            if nodes > node_limit:
                raise TooLarge(f"search exceeded {node_limit} nodes")
            assignment[pos] = value
            if all(image_positive(fi) for fi in completes_at[pos]):
                hit = dfs(pos + 1)
                if hit is not None:
                    return hit
        assignment[pos] = None
        return None

    found = dfs(0)
    return SearchOutcome(found=found, exhausted=found is None, nodes=nodes)
