"""Counterexample construction engines and condition-system checkers.

Each ``defeat_*`` strategy replays an inductive construction against a
concrete candidate reduction: it picks witnesses step by step, records every
threshold inequality it relied on, and emits a transcript whose certificate
is an exact rational that can be recomputed from scratch.  Infinitary
existence steps become bounded searches; running out of candidates raises
SearchExhausted, which is an expected outcome for inputs that witness
nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .canonical import BlockBasis, CanonicalCase, NatColoring, PairColoring, \
    classify_fs_on, classify_pairs_on
from .errors import CaseMismatch, DegeneratePair, MalformedBundle, NoSuchC, \
    SearchExhausted, ZeroInput
from .ideals import NatSet, reciprocal_sum
from .report import Report, rational_str
from .sparse import SparseBasis, conflict_set, find_fs_subset, fs, is_very_sparse


@dataclass(frozen=True)
class SearchBudget:
    """Bounds for the construction searches."""

    max_element: int = 32768
    max_steps: int = 10
    candidate_cap: int = 8

    def __post_init__(self):
        if self.max_element <= 0 or self.max_steps <= 0 or self.candidate_cap <= 0:
            raise ValueError("budget fields must be positive")


@dataclass(frozen=True)
class StepCheck:
    """One recorded inequality, re-verifiable against the coloring."""

    kind: str  # "nat" or "pair"
    args: Tuple[int, ...]
    value: int
    relation: str  # ">", ">=", "=="
    bound: int

    def holds(self) -> bool:
        if self.relation == ">":
            return self.value > self.bound
        if self.relation == ">=":
            return self.value >= self.bound
        if self.relation == "==":
            return self.value == self.bound
        raise ValueError(f"unknown relation {self.relation!r}")

    def describe(self) -> str:
        point = self.args[0] if self.kind == "nat" else set(self.args)
        return f"phi({point}) = {self.value} {self.relation} {self.bound}"

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "args": list(self.args),
            "value": self.value,
            "relation": self.relation,
            "bound": self.bound,
        }


@dataclass
class TranscriptStep:
    index: int
    chosen: Tuple[int, ...]
    threshold: int
    relation: str
    checks: Tuple[StepCheck, ...]
    note: str = ""

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "chosen": list(self.chosen),
            "threshold": self.threshold,
            "relation": self.relation,
            "checks": [c.to_json_dict() for c in self.checks],
            "note": self.note,
        }


@dataclass
class Transcript:
    """Ordered record of a construction plus its exact certificate.

    ``coloring`` and ``basis`` are live references used for re-verification
    and replay; serialization keeps only the structural content.
    """

    strategy: str
    params: Dict[str, Any]
    steps: List[TranscriptStep]
    witness: Dict[str, Any]
    image: Optional[NatSet]
    certified_sum: Optional[Fraction]
    majorant: Optional[Fraction]
    coloring: Any = None
    basis: Any = None

    def to_json_dict(self) -> Dict[str, Any]:
        from .report import jsonable

        return {
            "strategy": self.strategy,
            "params": jsonable(self.params),
            "steps": [s.to_json_dict() for s in self.steps],
            "witness": jsonable(self.witness),
            "image": list(self.image.elements) if self.image is not None else None,
            "certificate": {
                "sum": rational_str(self.certified_sum)
                if self.certified_sum is not None else None,
                "majorant": rational_str(self.majorant)
                if self.majorant is not None else None,
            },
        }


def fin2_to_h_map(x: int) -> Tuple[int, int]:
    """Split x >= 1 as 2^k (2n + 1); the column injection (k, n)."""
    if x < 1:
        raise ZeroInput("x must be >= 1")
    k = (x & -x).bit_length() - 1
    odd = x >> k
    return (k, (odd - 1) // 2)


def fin2_to_r_map(pair) -> Tuple[int, int]:
    """Send the pair {k, i}, k < i, to row k with in-row index i - k - 1."""
    a, b = pair
    if a == b:
        raise DegeneratePair(f"pair ({a},{b}) has equal endpoints")
    k, i = min(a, b), max(a, b)
    return (k, i - k - 1)


def _nat_check(phi: NatColoring, x: int, relation: str, bound: int) -> StepCheck:
    return StepCheck("nat", (x,), phi(x), relation, bound)


def _pair_check(phi: PairColoring, pair, relation: str, bound: int) -> StepCheck:
    i, j = min(pair), max(pair)
    return StepCheck("pair", (i, j), phi((i, j)), relation, bound)


def defeat_w_summable(phi: NatColoring, budget: SearchBudget = SearchBudget()) -> Transcript:
    """Build progressions F_n inside {x : phi(x) >= n 2^n} for n = 1..n_max.

    The witness has unbounded progression length while the image reciprocal
    mass stays under the exact majorant sum of n / (n 2^n + 1).
    """
    bound = min(phi.window, budget.max_element)
    steps: List[TranscriptStep] = []
    blocks: List[NatSet] = []
    for n in range(1, budget.max_steps + 1):
        thr = n * (1 << n)
        good = NatSet(x for x in range(bound) if phi(x) >= thr)
        hit = _find_ap_of(good, n)
        if hit is None:
            raise SearchExhausted(
                n, f"no {n}-term progression with phi >= {thr} in [0, {bound})"
            )
        a, d = hit
        F = NatSet(a + i * d for i in range(n))
        checks = tuple(_nat_check(phi, x, ">=", thr) for x in F)
        steps.append(TranscriptStep(
            index=n, chosen=F.elements, threshold=thr, relation=">=",
            checks=checks,
            note=f"start {a}, difference {d}, scanned [0, {bound})",
        ))
        blocks.append(F)
    witness = NatSet(itertools.chain.from_iterable(b.elements for b in blocks))
    image = NatSet(phi(x) for x in witness)
    certified = reciprocal_sum(image)
    majorant = sum(
        (Fraction(n, n * (1 << n) + 1) for n in range(1, budget.max_steps + 1)),
        Fraction(0),
    )
    return Transcript(
        strategy="w-summable",
        params={"n_max": budget.max_steps, "scan_bound": bound},
        steps=steps,
        witness={"set": witness, "blocks": blocks},
        image=image,
        certified_sum=certified,
        majorant=majorant,
        coloring=phi,
    )


def _find_ap_of(A: NatSet, k: int):
    from .ideals import find_ap

    return find_ap(A, k)


def _h_majorant(case: CanonicalCase, n_max: int, const_value: Optional[int]) -> Fraction:
    if case is CanonicalCase.CONST:
        return Fraction(1, const_value + 1)
    if case in (CanonicalCase.MIN, CanonicalCase.MAX):
        return sum((Fraction(1, (1 << n) + 1) for n in range(n_max)), Fraction(0))
    if case is CanonicalCase.MINMAX:
        return sum(
            (Fraction(n + 1, n * (1 << n) + 1) for n in range(n_max)), Fraction(0)
        )
    if case is CanonicalCase.INJ:
        return sum(
            (Fraction(1 << n, (1 << (2 * n)) + 1) for n in range(n_max)), Fraction(0)
        )
    raise CaseMismatch(f"unknown case {case!r}")


def defeat_h_summable(phi: NatColoring, C: BlockBasis, case: CanonicalCase,
                      budget: SearchBudget = SearchBudget(),
                      check_prefix: int = 5) -> Transcript:
    """Select a sub-basis D of C whose finite-sums image has small mass.

    Case rules: CONST takes a prefix; MIN and MAX pick elements with value
    above 2^n; MINMAX demands n 2^n on the element and on all pair sums with
    earlier picks; INJ walks past the finite preimage of [0, m] and demands
    2^(2n) on the element and on all shifted sums.  The declared case is
    verified on a prefix up front and on the selected D afterwards.
    """
    if len(C) < 3:
        raise CaseMismatch("pool has fewer than 3 blocks")
    got = classify_fs_on(phi, C.prefix(min(len(C), max(3, check_prefix))))
    if got is not case:
        raise CaseMismatch(f"declared {case.value}, prefix classifies as "
                           f"{got.value if got else 'none'}")
    n_max = budget.max_steps
    cs = C.elements
    window = phi.window
    steps: List[TranscriptStep] = []

    if case is CanonicalCase.CONST:
        chosen: List[int] = []
        total = 0
        for c in cs:
            if len(chosen) == n_max:
                break
            if total + c >= window:
                break
            chosen.append(c)
            total += c
        if not chosen:
            raise SearchExhausted(0, "window too small for any block")
        value = phi(chosen[0])
        checks = []
        for x in fs(NatSet(chosen)):
            ck = _nat_check(phi, x, "==", value)
            if not ck.holds():
                raise CaseMismatch(
                    f"constant case broken at {x}: phi = {ck.value} != {value}"
                )
            checks.append(ck)
        steps.append(TranscriptStep(
            index=0, chosen=tuple(chosen), threshold=value, relation="==",
            checks=tuple(checks), note="constant image",
        ))
        D = chosen
        const_value = value
    else:
        chosen = []
        last_idx = -1
        total = 0
        const_value = None
        for n in range(n_max):
            if case in (CanonicalCase.MIN, CanonicalCase.MAX):
                thr = 1 << n
            elif case is CanonicalCase.MINMAX:
                thr = n * (1 << n)
            else:
                thr = 1 << (2 * n)

            scan_floor = -1
            if case is CanonicalCase.INJ:
                m = thr
                for x in fs(NatSet(chosen)):
                    m = max(m, phi(x))
                scan_bound = min(window, budget.max_element)
                for z in range(scan_bound):
                    if phi(z) <= m:
                        scan_floor = max(scan_floor, z)

            picked = None
            for idx in range(last_idx + 1, len(cs)):
                c = cs[idx]
                if total + c >= window:
                    break  # finite sums would leave the coloring's domain
                if c <= scan_floor:
                    continue
                checks = [_nat_check(phi, c, ">", thr)]
                if case in (CanonicalCase.MINMAX, CanonicalCase.INJ):
                    extras = chosen if case is CanonicalCase.MINMAX \
                        else fs(NatSet(chosen)).elements
                    for e in extras:
                        checks.append(_nat_check(phi, c + e, ">", thr))
                if all(ck.holds() for ck in checks):
                    picked = (idx, c, checks)
                    break
            if picked is None:
                raise SearchExhausted(
                    n, f"no block with phi > {thr} ({case.value} rule) past "
                       f"index {last_idx} within window {window}"
                )
            last_idx, c, checks = picked
            total += c
            chosen.append(c)
            steps.append(TranscriptStep(
                index=n, chosen=(c,), threshold=thr, relation=">",
                checks=tuple(checks),
                note=f"pool index {last_idx}"
                     + (f", preimage scan floor {scan_floor}" if scan_floor >= 0 else ""),
            ))
        D = chosen
        if len(D) >= 3:
            got = classify_fs_on(phi, BlockBasis(D))
            if got is not case:
                raise CaseMismatch(
                    f"selected basis classifies as {got.value if got else 'none'}, "
                    f"not {case.value}"
                )

    image = NatSet(phi(x) for x in fs(NatSet(D)))
    certified = reciprocal_sum(image)
    majorant = _h_majorant(case, len(D) if case is CanonicalCase.CONST else n_max,
                           const_value)
    return Transcript(
        strategy="h-summable",
        params={"n_max": n_max, "case": case.value, "window": window},
        steps=steps,
        witness={"basis": NatSet(D)},
        image=image,
        certified_sum=certified,
        majorant=majorant,
        coloring=phi,
        basis=C,
    )


def _r_majorant(case: CanonicalCase, n_max: int, const_value: Optional[int]) -> Fraction:
    if case is CanonicalCase.CONST:
        return Fraction(1, const_value + 1)
    return sum((Fraction(1, 1 << n) for n in range(n_max)), Fraction(0))


def defeat_r_summable(phi: PairColoring, T: NatSet, case: CanonicalCase,
                      budget: SearchBudget = SearchBudget(),
                      check_prefix: int = 12) -> Transcript:
    """Select H inside T whose pair-image has small reciprocal mass.

    MIN and MAX exploit that rows (columns) of the coloring are constant on
    T with pairwise distinct values; INJ uses the pigeonhole room above
    n 2^n.  Thresholds are re-recorded against pairs inside H so the
    certificate depends only on recorded facts plus the verified case.
    """
    if case is CanonicalCase.MINMAX:
        raise CaseMismatch("minmax is not a pair-coloring case")
    T = T if isinstance(T, NatSet) else NatSet(T)
    if len(T) < 3:
        raise CaseMismatch("ground set has fewer than 3 points")
    prefix = NatSet(T.elements[: max(3, min(len(T), check_prefix))])
    got = classify_pairs_on(phi, prefix)
    if got is not case:
        raise CaseMismatch(f"declared {case.value}, prefix classifies as "
                           f"{got.value if got else 'none'}")
    n_max = budget.max_steps
    ts = T.elements
    steps: List[TranscriptStep] = []
    const_value = None

    def succ(t: int) -> Optional[int]:
        i = ts.index(t)
        return ts[i + 1] if i + 1 < len(ts) else None

    if case is CanonicalCase.CONST:
        H = list(ts[: max(2, n_max)])
        const_value = phi((H[0], H[1]))
        checks = []
        for p in itertools.combinations(H, 2):
            ck = _pair_check(phi, p, "==", const_value)
            if not ck.holds():
                raise CaseMismatch(f"constant case broken at {p}")
            checks.append(ck)
        steps.append(TranscriptStep(
            index=0, chosen=tuple(H), threshold=const_value, relation="==",
            checks=tuple(checks), note="constant image",
        ))
    elif case in (CanonicalCase.MIN, CanonicalCase.MAX):
        chosen: List[int] = []
        pool = [t for t in ts[:-1]] if case is CanonicalCase.MIN else [t for t in ts[1:]]
        for n in range(n_max):
            thr = 1 << n
            picked = None
            for t in pool:
                if t in chosen:
                    continue
                partner = succ(t) if case is CanonicalCase.MIN else ts[0]
                if partner == t:
                    continue
                if phi((t, partner)) > thr:
                    picked = t
                    break
            if picked is None:
                raise SearchExhausted(
                    n, f"no row value above {thr} left in the ground set"
                )
            chosen.append(picked)
        H = sorted(chosen)
        # Re-record thresholds against partners inside H where possible.
        hi, lo = H[-1], H[0]
        for n, t in enumerate(chosen):
            if case is CanonicalCase.MIN:
                partner = hi if t != hi else succ(t)
            else:
                partner = lo if t != lo else ts[0]
            ck = _pair_check(phi, (t, partner), ">", 1 << n)
            if not ck.holds():
                raise CaseMismatch(
                    f"row value of {t} differs between partners; case unstable"
                )
            steps.append(TranscriptStep(
                index=n, chosen=(t,), threshold=1 << n, relation=">",
                checks=(ck,), note="row value witness",
            ))
    else:  # INJ
        chosen = []
        for n in range(n_max):
            thr = n * (1 << n)
            picked = None
            for t in ts:
                if t in chosen:
                    continue
                checks = [_pair_check(phi, (ti, t), ">", thr) for ti in chosen]
                if all(ck.holds() for ck in checks):
                    picked = (t, checks)
                    break
            if picked is None:
                raise SearchExhausted(
                    n, f"no point with all pair values above {thr}"
                )
            t, checks = picked
            chosen.append(t)
            steps.append(TranscriptStep(
                index=n, chosen=(t,), threshold=thr, relation=">",
                checks=tuple(checks), note="pairs against earlier picks",
            ))
        H = sorted(chosen)

    Hset = NatSet(H)
    if len(Hset) >= 3:
        got = classify_pairs_on(phi, Hset)
        if got is not case:
            raise CaseMismatch(
                f"selected set classifies as {got.value if got else 'none'}, "
                f"not {case.value}"
            )
    image = NatSet(phi(p) for p in itertools.combinations(Hset.elements, 2))
    certified = reciprocal_sum(image)
    majorant = _r_majorant(case, n_max, const_value)
    return Transcript(
        strategy="r-summable",
        params={"n_max": n_max, "case": case.value, "ground_size": len(T)},
        steps=steps,
        witness={"h": Hset},
        image=image,
        certified_sum=certified,
        majorant=majorant,
        coloring=phi,
    )


def _shifted_image_free(f: PairColoring, anchor: int, pool: Sequence[int],
                        y: int, fs_size: int) -> bool:
    values = {f((anchor, b)) for b in pool if b != anchor}
    shifted = NatSet(v - y for v in values if v >= y)
    return find_fs_subset(shifted, fs_size) is None


def defeat_r_hindman(f: PairColoring, D: SparseBasis,
                     budget: SearchBudget = SearchBudget(max_element=32,
                                                         max_steps=4,
                                                         candidate_cap=4),
                     fs_size: int = 2) -> Transcript:
    """Grow points b_0 < b_1 < ... with nested reservoirs B_n such that pair
    images avoid the decomposition-conflict sets of all earlier pair images
    and shifted row images carry no finite-sums basis.

    Each reservoir is the lexicographically least subset of the previous one
    (largest feasible size up to the candidate cap) satisfying both
    conditions and still containing a point above the last pick.
    """
    window = min(f.n, budget.max_element)
    fsD = set(D.fs_set())
    for p in itertools.combinations(range(window), 2):
        if f(p) not in fsD:
            raise ValueError(
                f"f({set(p)}) = {f(p)} lies outside the finite sums of the basis"
            )

    b = [0]
    reservoirs: List[NatSet] = [NatSet(range(window))]
    steps: List[TranscriptStep] = []

    for n in range(1, budget.max_steps):
        prev = reservoirs[-1].elements
        ys = sorted({f(p) for p in itertools.combinations(b, 2)})
        conflicts: set = set()
        for y in ys:
            conflicts |= set(conflict_set(D, y))

        def pairs_ok(subset: List[int], new: int) -> bool:
            return all(f((u, new)) not in conflicts for u in subset)

        def rows_ok(subset: List[int]) -> bool:
            for bi in b:
                for y in ys:
                    if not _shifted_image_free(f, bi, subset, y, fs_size):
                        return False
            return True

        def search(size: int) -> Optional[List[int]]:
            def dfs(acc: List[int], nxt: int) -> Optional[List[int]]:
                if len(acc) == size:
                    return acc if max(acc) > b[-1] else None
                for idx in range(nxt, len(prev)):
                    if len(prev) - idx < size - len(acc):
                        break
                    cand = prev[idx]
                    if not pairs_ok(acc, cand):
                        continue
                    if not rows_ok(acc + [cand]):
                        continue
                    hit = dfs(acc + [cand], idx + 1)
                    if hit is not None:
                        return hit
                return None

            return dfs([], 0)

        found = None
        for size in range(min(budget.candidate_cap, len(prev)), 0, -1):
            found = search(size)
            if found is not None:
                break
        if found is None:
            raise SearchExhausted(
                n, "no reservoir avoids the conflict sets of "
                   f"{ys} while keeping shifted rows basis-free"
            )
        Bn = NatSet(found)
        bn = min(x for x in Bn if x > b[-1])
        steps.append(TranscriptStep(
            index=n, chosen=(bn,), threshold=0, relation=">",
            checks=(),
            note=f"reservoir {list(Bn.elements)}, avoided values {ys}",
        ))
        reservoirs.append(Bn)
        b.append(bn)

    image = NatSet(f(p) for p in itertools.combinations(b, 2)) if len(b) > 1 else NatSet()
    certified = reciprocal_sum(image)
    return Transcript(
        strategy="r-hindman",
        params={"depth": budget.max_steps, "window": window, "fs_size": fs_size},
        steps=steps,
        witness={"b": NatSet(b), "reservoirs": reservoirs},
        image=image,
        certified_sum=certified,
        majorant=None,
        coloring=f,
        basis=D,
    )


def check_hnr_conditions(b: Sequence[int], B: Sequence[NatSet], f: PairColoring,
                         D: SparseBasis, fs_size: int = 2) -> Report:
    """Itemized verification of a grown (b, B) chain against f and D.

    (a) picks ascend and sit in their reservoirs; (b) reservoirs nest;
    (c) reservoir pair images avoid the conflict sets of earlier pair
    images; (d) shifted row images carry no finite-sums basis.
    """
    report = Report(meta={"fs_size": fs_size, "depth": len(b)})
    if len(b) != len(B):
        raise MalformedBundle(f"{len(b)} picks vs {len(B)} reservoirs")

    ok_a, detail_a = True, ""
    for n, bn in enumerate(b):
        if bn not in B[n]:
            ok_a, detail_a = False, f"b_{n} = {bn} not in its reservoir"
            break
        if n > 0 and bn <= b[n - 1]:
            ok_a, detail_a = False, f"b_{n} = {bn} <= b_{n-1} = {b[n - 1]}"
            break
    report.add("(a)", ok_a, detail_a)

    ok_b, detail_b = True, ""
    for n in range(1, len(B)):
        if not B[n].issubset(B[n - 1]):
            ok_b, detail_b = False, f"B_{n} not inside B_{n-1}"
            break
    report.add("(b)", ok_b, detail_b)

    ok_c, detail_c = True, ""
    ok_d, detail_d = True, ""
    for n in range(len(b)):
        ys = sorted({f(p) for p in itertools.combinations(b[:n], 2)})
        conflicts: set = set()
        for y in ys:
            conflicts |= set(conflict_set(D, y))
        if ok_c:
            for p in itertools.combinations(B[n].elements, 2):
                if f(p) in conflicts:
                    ok_c = False
                    detail_c = f"f({set(p)}) = {f(p)} hits a conflict set at step {n}"
                    break
        if ok_d:
            for i in range(n):
                for y in ys:
                    if not _shifted_image_free(f, b[i], B[n].elements, y, fs_size):
                        ok_d = False
                        detail_d = (f"row of b_{i} shifted by {y} carries a "
                                    f"size-{fs_size} basis at step {n}")
                        break
                if not ok_d:
                    break
    report.add("(c)", ok_c, detail_c)
    report.add("(d)", ok_d, detail_d)
    return report


def replay_final_contradiction(transcript: Transcript, C: NatSet) -> Report:
    """Partition the pairs of the grown points around the pair producing the
    least element of C, and check the top block's shifted image misses the
    finite sums of C minus that element.

    Requires fs(C) inside the pair image; failure of that precondition is
    itself evidence and raises NoSuchC.
    """
    if transcript.strategy != "r-hindman":
        raise ValueError("final-contradiction replay needs an r-hindman transcript")
    f: PairColoring = transcript.coloring
    D: SparseBasis = transcript.basis
    pts = transcript.witness["b"].elements
    if len(C) < 2:
        raise NoSuchC(f"|C| = {len(C)} < 2")
    image = {f(p) for p in itertools.combinations(pts, 2)}
    missing = [x for x in fs(C) if x not in image]
    if missing:
        raise NoSuchC(
            f"fs(C) escapes the pair image at {missing[:5]}; "
            "no admissible C at this scale"
        )
    c = C.min()
    pivot = None
    for j in range(len(pts)):
        for n in range(j + 1, len(pts)):
            if f((pts[j], pts[n])) == c:
                pivot = (j, n)
                break
        if pivot:
            break
    assert pivot is not None
    _, n_idx = pivot

    lower = pts[: n_idx + 1]
    upper = pts[n_idx + 1 :]
    X = list(itertools.combinations(lower, 2))
    Y = [(i, k) for i in lower for k in upper]
    Z = list(itertools.combinations(upper, 2))

    report = Report(meta={
        "c": c, "pivot": [pts[pivot[0]], pts[pivot[1]]],
        "sizes": {"X": len(X), "Y": len(Y), "Z": len(Z)},
    })
    total = len(pts) * (len(pts) - 1) // 2
    report.add("partition", len(X) + len(Y) + len(Z) == total,
               f"|X|+|Y|+|Z| = {len(X) + len(Y) + len(Z)}, pairs = {total}")

    rest = fs(NatSet(x for x in C if x != c))
    shifted_Z = NatSet(v - c for v in (f(p) for p in Z) if v >= c)
    overlap = [x for x in rest if x in shifted_Z]
    report.add("z-intersection", not overlap,
               f"witnesses {overlap[:5]}" if overlap else "empty as required")

    ok_alpha, detail_alpha = True, "no in-basis sums to inspect"
    fsD = set(D.fs_set())
    alpha_c = set(D.alpha(c)) if c in fsD else set()
    for a in rest:
        if a in fsD and (a + c) in fsD:
            aa = set(D.alpha(a))
            if aa & alpha_c:
                continue  # additivity only applies to disjoint decompositions
            union = aa | alpha_c
            if set(D.alpha(a + c)) != union:
                ok_alpha = False
                detail_alpha = f"alpha({a}+{c}) != alpha({a}) | alpha({c})"
                break
            detail_alpha = "decomposition additivity verified"
    report.add("alpha-additivity", ok_alpha, detail_alpha)
    return report


class GammaMap:
    """Finite map from naturals into ordered pairs (z0, z1) with z0 > z1."""

    __slots__ = ("table",)

    def __init__(self, table: Dict[int, Tuple[int, int]]):
        norm: Dict[int, Tuple[int, int]] = {}
        for x, pair in table.items():
            z0, z1 = pair
            if x < 0 or z1 < 0 or z0 <= z1:
                raise ValueError(f"f({x}) = ({z0},{z1}) is not a strict pair")
            norm[x] = (z0, z1)
        self.table = norm

    def __contains__(self, x: int) -> bool:
        return x in self.table

    def __call__(self, x: int) -> Tuple[int, int]:
        if x not in self.table:
            raise MalformedBundle(f"f undefined at {x}")
        return self.table[x]

    def get(self, x: int) -> Optional[Tuple[int, int]]:
        return self.table.get(x)

    def inv_second(self, m: int) -> NatSet:
        """Preimage of the column {(z0, m) : z0 > m}."""
        return NatSet(x for x, (z0, z1) in self.table.items() if z1 == m)

    def inv_point(self, pair: Tuple[int, int]) -> NatSet:
        return NatSet(x for x, v in self.table.items() if v == tuple(pair))


@dataclass
class RnhCase1Bundle:
    """Finite fragment of the column-avoidance construction."""

    k: int
    D: SparseBasis
    xs: List[int]
    Ds: List[SparseBasis]


@dataclass
class RnhCase2Bundle:
    """Finite fragment of the column-hitting construction."""

    ns: List[int]
    js: List[int]
    ks: List[int]
    Fs: List[frozenset]
    xs: List[int]
    Ds: List[SparseBasis]


def _alpha_or_empty(basis: SparseBasis, x: int) -> set:
    if x in basis:
        return set(basis.alpha(x))
    return set()


def _check_rnh_case1(bundle: RnhCase1Bundle, f: GammaMap, X: SparseBasis) -> Report:
    k, D, xs, Ds = bundle.k, bundle.D, bundle.xs, bundle.Ds
    if len(xs) != len(Ds):
        raise MalformedBundle(f"{len(xs)} points vs {len(Ds)} bases")
    if k < 0:
        raise MalformedBundle("k must be >= 0")
    report = Report(meta={"case": 1, "depth": len(xs), "k": k})

    base_ok = bool(is_very_sparse(NatSet(D.elements))) and \
        D.fs_set().issubset(X.fs_set())
    report.add("(base)", base_ok,
               "ambient basis very sparse with sums inside the ground sums"
               if base_ok else "ambient basis fails the hypothesis")

    def basis_at(n: int) -> SparseBasis:
        return D if n < 0 else Ds[n]

    oks = {key: (True, "") for key in ("(a)", "(b)", "(c)", "(d)", "(e)", "(f)")}

    def fail(key: str, detail: str):
        if oks[key][0]:
            oks[key] = (False, detail)

    for n in range(len(xs)):
        xn = xs[n]
        prev = basis_at(n - 1)
        if xn not in prev:
            fail("(a)", f"x_{n} = {xn} not a finite sum of the step-{n-1} basis")
        if xn in xs[:n]:
            fail("(a)", f"x_{n} repeats an earlier point")
        for i in range(n):
            for j in range(n):
                aj = _alpha_or_empty(Ds[j], xs[i])
                if aj and xn in Ds[j] and set(Ds[j].alpha(xn)) & aj:
                    fail("(a)", f"x_{n} meets the conflict set of x_{i} over D_{j}")
        flag = is_very_sparse(NatSet(Ds[n].elements))
        if not flag:
            fail("(b)", f"D_{n} not very sparse: {flag.counterexample}")
        if not fs(NatSet(xs[: n + 1])).issubset(D.fs_set()):
            fail("(c)", f"finite sums of x_0..x_{n} escape the ambient sums")
        if not Ds[n].fs_set().issubset(prev.fs_set()):
            fail("(d)", f"FS(D_{n}) not inside FS(D_{n-1})")
        if not Ds[n].fs_set().issubset(D.fs_set()):
            fail("(d)", f"FS(D_{n}) not inside FS(D)")
        fsn = set(Ds[n].fs_set())
        for i in range(1, n + 2):
            col = f.inv_second(k + i)
            for x in fs(NatSet(xs[: n + 1])):
                for z in col:
                    if z >= x and (z - x) in fsn:
                        fail("(e)", f"column {k + i} shifted by {x} meets FS(D_{n}) at {z - x}")
            for z in col:
                if z in fsn:
                    fail("(f)", f"column {k + i} meets FS(D_{n}) at {z}")

    for key in ("(a)", "(b)", "(c)", "(d)", "(e)", "(f)"):
        ok, detail = oks[key]
        report.add(key, ok, detail)
    return report


def _check_rnh_case2(bundle: RnhCase2Bundle, f: GammaMap, X: SparseBasis) -> Report:
    ns, js, ks, Fs, xs, Ds = (bundle.ns, bundle.js, bundle.ks, bundle.Fs,
                              bundle.xs, bundle.Ds)
    depth = len(xs)
    if not (len(ns) == len(js) == len(ks) == len(Fs) == len(Ds) == depth):
        raise MalformedBundle("bundle lists have mismatched lengths")
    if any(j not in (0, 1) for j in js):
        raise MalformedBundle("branch flags must be 0 or 1")
    report = Report(meta={"case": 2, "depth": depth})

    def basis_at(i: int) -> SparseBasis:
        return X if i < 0 else Ds[i]

    keys = ("(a1)", "(a2)", "(b1)", "(b2)", "(c1)", "(c2)", "(c3)", "(c4)",
            "(d1)", "(d2)", "(d3a)", "(d3b)", "(d4)", "(e1)", "(e2)", "(e3)",
            "(f)", "(g1)", "(g2)")
    oks = {key: (True, "") for key in keys}

    def fail(key: str, detail: str):
        if oks[key][0]:
            oks[key] = (False, detail)

    def banned(i: int) -> set:
        out: set = set()
        for q in range(i + 1):
            out |= set(Fs[q])
        return out

    for i in range(depth):
        prev = basis_at(i - 1)
        # (a)
        if ns[i] <= (ns[i - 1] if i > 0 else -1):
            fail("(a1)", f"n_{i} = {ns[i]} does not increase")
        coord_bound = 0
        for x in fs(NatSet(xs[:i])):
            got = f.get(x)  # image of a partial map skips undefined points
            if got is not None:
                coord_bound = max(coord_bound, got[0])
        if ns[i] <= coord_bound:
            fail("(a2)", f"n_{i} = {ns[i]} not above the image coordinates {coord_bound}")
        # (b)
        if not Ds[i].fs_set().issubset(prev.fs_set()):
            fail("(b1)", f"FS(D_{i}) not inside FS(D_{i-1})")
        if not Ds[i].fs_set().issubset(X.fs_set()):
            fail("(b1)", f"FS(D_{i}) not inside FS(X)")
        flag = is_very_sparse(NatSet(Ds[i].elements))
        if not flag:
            fail("(b2)", f"D_{i} not very sparse: {flag.counterexample}")
        # branch items
        if js[i] == 0:
            if ks[i] != -1:
                fail("(c1)", f"k_{i} = {ks[i]} but the branch flag is 0")
            if set(Fs[i]):
                fail("(c2)", f"F_{i} nonempty on branch 0")
            got = f.get(xs[i])
            if xs[i] not in prev or got is None or got[1] != ns[i]:
                fail("(c3)", f"x_{i} not a previous-basis sum landing in column {ns[i]}")
            for d in Ds[i].fs_set():
                got = f.get(xs[i] + d)
                if got is None or got[1] != ns[i]:
                    fail("(c4)", f"x_{i} + {d} does not land in column {ns[i]}")
                    break
        else:
            eligible = {u for u in range(i)
                        if u not in banned(i - 1) and js[u] == 0}
            if ks[i] not in eligible:
                fail("(d1)", f"k_{i} = {ks[i]} not an eligible branch-0 index")
            if set(Fs[i]) != set(range(ks[i], i)):
                fail("(d2)", f"F_{i} != {{k_{i}, ..., {i - 1}}}")
            target = (ns[i], ns[ks[i]]) if 0 <= ks[i] < depth else None
            if target is None or f.get(xs[i]) != target:
                fail("(d3a)", f"x_{i} does not map to ({ns[i]}, n_k)")
            mids = {0} | set(fs(NatSet(
                xs[r] for r in range(ks[i] + 1, i) if r not in banned(i - 1)
            )))
            hit = any(
                xs[i] == xs[ks[i]] + mid + d
                for mid in mids for d in prev.fs_set()
            ) if 0 <= ks[i] < depth else False
            if not hit:
                fail("(d3b)", f"x_{i} not reachable from x_k plus middle sums plus FS(D_{i-1})")
            if target is not None:
                for d in Ds[i].fs_set():
                    if f.get(xs[i] + d) != target:
                        fail("(d4)", f"x_{i} + {d} does not map to {target}")
                        break
        # (e)
        allowed = [t for t in range(i) if t not in banned(i)]
        for r in range(1, len(allowed) + 1):
            for S in itertools.combinations(allowed, r):
                x = sum(xs[t] for t in S)
                target = (ns[i], ns[S[0]])
                for d in Ds[i].fs_set():
                    if f.get(x + xs[i] + d) == target:
                        fail("(e1)", f"x + x_{i} + FS(D_{i}) hits {target}")
                        break
                for d in Ds[i].fs_set():
                    if f.get(x + d) == target:
                        fail("(e2)", f"x + FS(D_{i}) hits {target}")
                        break
                if f.get(x + xs[i]) == target:
                    fail("(e3)", f"x + x_{i} maps to {target}")
        # (f)
        for t in range(-1, i):
            Dt = basis_at(t)
            for u in range(i + 1):
                if xs[u] not in Dt:
                    continue
                au = set(Dt.alpha(xs[u]))
                for y in Ds[i].fs_set():
                    if y in Dt and set(Dt.alpha(y)) & au:
                        fail("(f)", f"FS(D_{i}) meets the conflict set of x_{u} over D_{t}")
                        break
        # (g)
        allowed_incl = [t for t in range(i + 1) if t not in banned(i)]
        if not fs(NatSet(xs[t] for t in allowed_incl)).issubset(X.fs_set()):
            fail("(g1)", f"allowed sums up to {i} escape FS(X)")
        for r in range(2, len(allowed_incl) + 1):
            for S in itertools.combinations(allowed_incl, r):
                total = sum(xs[t] for t in S)
                t0 = S[0]
                if (total - xs[t0]) not in basis_at(t0):
                    fail("(g2)", f"sum over {S} not in x_{t0} + FS(D_{t0})")

    for key in keys:
        ok, detail = oks[key]
        report.add(key, ok, detail)
    return report


def check_rnh_conditions(case: int, bundle, f: GammaMap, X: SparseBasis) -> Report:
    """Itemized verification of a column-construction bundle.

    Case 1 checks items (a) through (f) of the avoidance construction;
    case 2 checks items (a1) through (g2) of the hitting construction.
    """
    if case == 1:
        if not isinstance(bundle, RnhCase1Bundle):
            raise MalformedBundle("case 1 expects an RnhCase1Bundle")
        return _check_rnh_case1(bundle, f, X)
    if case == 2:
        if not isinstance(bundle, RnhCase2Bundle):
            raise MalformedBundle("case 2 expects an RnhCase2Bundle")
        return _check_rnh_case2(bundle, f, X)
    raise MalformedBundle(f"case must be 1 or 2, got {case!r}")


def verify_transcript(t: Transcript, coloring=None) -> Report:
    """Re-verify a transcript against a coloring: every recorded inequality
    must hold on fresh queries, the stored image must equal the recomputed
    one, and the certificate must match and respect its majorant."""
    phi = coloring if coloring is not None else t.coloring
    report = Report(meta={"strategy": t.strategy})

    ok, detail = True, ""
    for step in t.steps:
        for ck in step.checks:
            fresh = phi(ck.args[0]) if ck.kind == "nat" else phi(ck.args)
            if fresh != ck.value or not ck.holds():
                ok, detail = False, f"step {step.index}: {ck.describe()} (fresh {fresh})"
                break
        if not ok:
            break
    report.add("checks", ok, detail)

    if t.strategy == "w-summable":
        recomputed = NatSet(phi(x) for x in t.witness["set"])
    elif t.strategy == "h-summable":
        recomputed = NatSet(phi(x) for x in fs(t.witness["basis"]))
    elif t.strategy == "r-summable":
        recomputed = NatSet(
            phi(p) for p in itertools.combinations(t.witness["h"].elements, 2)
        )
    elif t.strategy == "r-hindman":
        recomputed = NatSet(
            phi(p) for p in itertools.combinations(t.witness["b"].elements, 2)
        )
    else:
        raise ValueError(f"unknown strategy {t.strategy!r}")
    report.add("image", recomputed == t.image,
               "" if recomputed == t.image else "image drifted on re-query")
    report.add("certificate", t.certified_sum == reciprocal_sum(recomputed),
               rational_str(t.certified_sum))
    if t.majorant is not None:
        report.add("majorant", t.certified_sum <= t.majorant,
                   f"{rational_str(t.certified_sum)} <= {rational_str(t.majorant)}")
    return report
