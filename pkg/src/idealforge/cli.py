"""Command-line front end.

Subcommands: ``oracle`` (positivity and witness queries), ``fs`` (finite
sums and sparse-basis operations), ``canonize`` (coloring classification),
``adversary`` (construction strategies, each emitting a self-verified
transcript), ``search`` (reduction-map search), ``verify`` (re-verification
of maps, grown chains, condition bundles, and the closing replay).

Reports are JSON with a fixed field order and no timestamps: identical
invocations produce byte-identical output.  Exit codes: 0 completed, 1
input error, 2 a bounded construction exhausted its budget.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from . import __version__
from .adversary import GammaMap, RnhCase1Bundle, RnhCase2Bundle, SearchBudget, \
    Transcript, check_hnr_conditions, check_rnh_conditions, defeat_h_summable, \
    defeat_r_hindman, defeat_r_summable, defeat_w_summable, \
    replay_final_contradiction, verify_transcript
from .canonical import BlockBasis, CanonicalCase, NatColoring, PairColoring, \
    classify_fs_on, classify_pairs_on, find_block_basis, find_canonical_subset
from .errors import IdealforgeError, ParseError, SearchExhausted
from .ideals import EdgeSet, IdealId, NatSet, ScaleParams, find_ap, find_clique, \
    heavy_columns, is_positive, longest_ap, reciprocal_sum, tall_witness
from .reduction import FiniteIdealSpec, search_reduction, verify_reduction
from .report import dumps_stable, jsonable, rational_str
from .sparse import SparseBasis, conflict_set, find_fs_subset, fs, is_sparse, \
    is_very_sparse, shift, very_sparse_subset

_TOKEN = re.compile(r"[,\s]+")
_RANGE = re.compile(r"^(\d+)\.\.(\d+)$")
_POW2 = re.compile(r"^pow2\((\d+)\)$")


def parse_set_literal(text: str) -> NatSet:
    """Grammar: naturals, ranges ``a..b``, and ``pow2(n)`` for the first n
    powers of two, separated by commas or whitespace."""
    out: List[int] = []
    pos = 0
    for token in _TOKEN.split(text):
        if not token:
            continue
        at = text.find(token, pos)
        pos = at + len(token)
        if token.isdigit():
            out.append(int(token))
            continue
        m = _RANGE.match(token)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise ParseError(f"empty range {token!r}", at)
            out.extend(range(lo, hi + 1))
            continue
        m = _POW2.match(token)
        if m:
            out.extend(1 << i for i in range(int(m.group(1))))
            continue
        raise ParseError(f"bad token {token!r}", at)
    return NatSet(out)


def parse_pair_literal(text: str) -> List[Tuple[int, int]]:
    """Pairs ``a b`` separated by commas or semicolons."""
    pairs = []
    for chunk in re.split(r"[,;]+", text):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(f"bad pair {chunk!r}", text.find(chunk))
        pairs.append((int(parts[0]), int(parts[1])))
    return pairs


def _table_lines(path: str) -> List[List[int]]:
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if not all(p.isdigit() for p in parts):
                raise ParseError(f"line {lineno}: bad entry {line!r}", lineno)
            rows.append([int(p) for p in parts])
    return rows


_NAT_BUILTINS = {
    "identity": NatColoring.identity,
    "min-alpha": NatColoring.min_alpha,
    "max-alpha": NatColoring.max_alpha,
    "minmax-alpha": NatColoring.minmax_alpha,
}

_PAIR_BUILTINS = {
    "min": PairColoring.minimum,
    "max": PairColoring.maximum,
    "pairing": PairColoring.pairing,
}


def load_coloring(spec: str, window: int, kind: str):
    """A coloring from a builtin name or a table file.

    ``kind`` is "nat" or "pair".  Nat tables have lines ``x value``; pair
    tables have lines ``i j value``; '#' starts a comment.  Totality over
    the window is enforced, missing entries are an error.
    """
    if kind not in ("nat", "pair"):
        raise ValueError(f"kind must be nat or pair, got {kind!r}")
    if spec.startswith("const:"):
        v = spec.split(":", 1)[1]
        if not v.isdigit():
            raise ParseError(f"bad constant {spec!r}")
        if kind == "nat":
            return NatColoring.constant(window, int(v))
        return PairColoring.constant(window, int(v))
    builtins = _NAT_BUILTINS if kind == "nat" else _PAIR_BUILTINS
    if spec in builtins:
        return builtins[spec](window)
    if not os.path.exists(spec):
        known = ", ".join(sorted(builtins) + ["const:v"])
        raise ParseError(f"{spec!r} is neither a file nor a builtin ({known})")
    rows = _table_lines(spec)
    if kind == "nat":
        table = {}
        for row in rows:
            if len(row) != 2:
                raise ParseError(f"nat table rows are 'x value', got {row}")
            table[row[0]] = row[1]
        return NatColoring.from_table(window, table)
    table = {}
    for row in rows:
        if len(row) != 3:
            raise ParseError(f"pair table rows are 'i j value', got {row}")
        table[(row[0], row[1])] = row[2]
    return PairColoring.from_table(window, table)


def _scale_params(args: argparse.Namespace, ground: Optional[NatSet] = None) -> ScaleParams:
    window = getattr(args, "window", None)
    if window is None:
        window = (ground.max() + 1) if ground else ScaleParams().window
    return ScaleParams(
        ap_len=getattr(args, "ap_len", None) or 5,
        clique_size=getattr(args, "clique_size", None) or 4,
        fs_size=getattr(args, "fs_size", None) or 3,
        tau=Fraction(getattr(args, "tau", None) or 2),
        window=window,
    )


def _budget(args: argparse.Namespace) -> SearchBudget:
    return SearchBudget(
        max_element=getattr(args, "budget_max_element", None) or 32768,
        max_steps=getattr(args, "nmax", None) or 10,
        candidate_cap=getattr(args, "candidate_cap", None) or 8,
    )


def _edge_set(args: argparse.Namespace) -> EdgeSet:
    if args.edges is None:
        raise ParseError("this operation needs --edges")
    pairs = parse_pair_literal(args.edges)
    n = args.n if args.n is not None else (max((max(p) for p in pairs), default=-1) + 1)
    return EdgeSet(n, pairs)


def _cmd_oracle(args) -> Dict[str, Any]:
    ideal = IdealId(args.ideal)
    op = args.op
    body: Dict[str, Any] = {"ideal": ideal.value, "op": op}
    if ideal in (IdealId.RAMSEY,):
        carrier = _edge_set(args)
        params = _scale_params(args)
    elif ideal is IdealId.FIN2:
        carrier = frozenset(parse_pair_literal(args.pairs or ""))
        params = _scale_params(args)
    else:
        if args.set is None:
            raise ParseError("this ideal needs --set")
        carrier = parse_set_literal(args.set)
        params = _scale_params(args, carrier)
    if op == "positive":
        body["positive"] = is_positive(carrier, ideal, params)
    elif op == "longest-ap":
        body["longest_ap"] = longest_ap(carrier)
    elif op == "find-ap":
        hit = find_ap(carrier, args.k)
        body["progression"] = None if hit is None else {"start": hit[0], "difference": hit[1]}
    elif op == "sum":
        body["reciprocal_sum"] = rational_str(reciprocal_sum(carrier))
    elif op == "clique":
        hit = find_clique(carrier, args.k if args.k is not None else params.clique_size)
        body["clique"] = None if hit is None else list(hit.elements)
    elif op == "heavy-columns":
        body["heavy_columns"] = list(heavy_columns(carrier, args.k or params.fs_size).elements)
    elif op == "tall-witness":
        witness = tall_witness(carrier, ideal, params, args.target)
        body["witness"] = jsonable(witness)
    else:
        raise ParseError(f"unknown oracle op {op!r}")
    body["params"] = {
        "ap_len": params.ap_len, "clique_size": params.clique_size,
        "fs_size": params.fs_size, "tau": rational_str(params.tau),
        "window": params.window,
    }
    return body


def _cmd_fs(args) -> Dict[str, Any]:
    op = args.op
    body: Dict[str, Any] = {"op": op}
    if op == "fs":
        body["fs"] = jsonable(fs(parse_set_literal(args.set)))
    elif op == "sparse":
        body["sparse"] = is_sparse(parse_set_literal(args.set))
    elif op == "alpha":
        basis = SparseBasis(parse_set_literal(args.set))
        body["alpha"] = jsonable(basis.alpha(args.x))
    elif op == "very-sparse":
        flag = is_very_sparse(parse_set_literal(args.set))
        body["verified"] = flag.verified
        body["counterexample"] = list(flag.counterexample) if flag.counterexample else None
    elif op == "very-sparse-subset":
        basis = very_sparse_subset(parse_set_literal(args.pool), args.k)
        body["basis"] = list(basis.elements)
    elif op == "fs-subset":
        hit = find_fs_subset(parse_set_literal(args.set), args.k)
        body["basis"] = None if hit is None else list(hit.elements)
    elif op == "conflict":
        basis = SparseBasis(parse_set_literal(args.set))
        body["conflict_set"] = jsonable(conflict_set(basis, args.y))
    elif op == "shift":
        body["shifted"] = jsonable(
            shift(parse_set_literal(args.set), args.offset, args.direction)
        )
    else:
        raise ParseError(f"unknown fs op {op!r}")
    return body


def _cmd_canonize(args) -> Dict[str, Any]:
    body: Dict[str, Any] = {"kind": args.kind, "op": args.op}
    if args.kind == "pairs":
        phi = load_coloring(args.phi, args.window, "pair")
        if args.op == "classify":
            T = parse_set_literal(args.ground)
            case = classify_pairs_on(phi, T)
            body["case"] = case.value if case else None
        else:
            hit = find_canonical_subset(phi, args.m)
            body["result"] = None if hit is None else {
                "set": jsonable(hit[0]), "case": hit[1].value,
            }
    else:
        phi = load_coloring(args.phi, args.window, "nat")
        pool = BlockBasis(parse_set_literal(args.ground))
        if args.op == "classify":
            case = classify_fs_on(phi, pool)
            body["case"] = case.value if case else None
        else:
            hit = find_block_basis(phi, pool, args.m)
            body["result"] = None if hit is None else {
                "basis": list(hit[0].elements), "case": hit[1].value,
            }
    return body


def _cmd_adversary(args) -> Dict[str, Any]:
    budget = _budget(args)
    strategy = args.strategy
    if strategy == "w-summable":
        window = args.window or budget.max_element
        phi = load_coloring(args.phi, window, "nat")
        t = defeat_w_summable(phi, budget)
    elif strategy == "h-summable":
        pool = BlockBasis(parse_set_literal(args.basis))
        window = args.window or (sum(pool.elements) + 1)
        phi = load_coloring(args.phi, window, "nat")
        t = defeat_h_summable(phi, pool, CanonicalCase(args.case), budget)
    elif strategy == "r-summable":
        T = parse_set_literal(args.ground)
        window = args.window or (T.max() + 1)
        phi = load_coloring(args.phi, window, "pair")
        t = defeat_r_summable(phi, T, CanonicalCase(args.case), budget)
    elif strategy == "r-hindman":
        basis = SparseBasis(parse_set_literal(args.basis))
        window = args.window or budget.max_element
        phi = load_coloring(args.phi, window, "pair")
        t = defeat_r_hindman(phi, basis, budget, fs_size=args.fs_size or 2)
    else:
        raise ParseError(f"unknown strategy {strategy!r}")
    check = verify_transcript(t)
    return {"strategy": strategy, "transcript": t.to_json_dict(),
            "reverified": check.to_json_dict()}


def _finite_spec(ideal: str, ground: str, params: ScaleParams) -> FiniteIdealSpec:
    ideal_id = IdealId(ideal)
    if ideal_id is IdealId.RAMSEY:
        return FiniteIdealSpec(ideal_id, params, int(ground))
    return FiniteIdealSpec(ideal_id, params, parse_set_literal(ground))


def _cmd_search(args) -> Dict[str, Any]:
    params_src = _scale_params(args)
    src = _finite_spec(args.src_ideal, args.src_ground, params_src)
    dst = _finite_spec(args.dst_ideal, args.dst_ground, params_src)
    outcome = search_reduction(src, dst)
    return {"src": args.src_ideal, "dst": args.dst_ideal,
            "outcome": outcome.to_json_dict()}


def _load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _gamma_from_rows(rows: List[List[int]]) -> GammaMap:
    return GammaMap({row[0]: (row[1], row[2]) for row in rows})


def _cmd_verify(args) -> Dict[str, Any]:
    what = args.what
    bundle = _load_json(args.bundle)
    if what == "reduction":
        params = _scale_params(args)
        src = _finite_spec(bundle["src"]["ideal"], bundle["src"]["ground"], params)
        dst = _finite_spec(bundle["dst"]["ideal"], bundle["dst"]["ground"], params)
        table = {}
        for key, value in bundle["map"]:
            key = tuple(key) if isinstance(key, list) else key
            value = tuple(value) if isinstance(value, list) else value
            table[key] = value
        report = verify_reduction(table, src, dst)
        return {"what": what, "report": report.to_json_dict()}
    if what == "hnr":
        f = PairColoring.from_table(
            bundle["window"], {(i, j): v for i, j, v in bundle["f"]}
        )
        report = check_hnr_conditions(
            bundle["b"], [NatSet(B) for B in bundle["B"]], f,
            SparseBasis(bundle["D"]), fs_size=bundle.get("fs_size", 2),
        )
        return {"what": what, "report": report.to_json_dict()}
    if what == "final":
        f = PairColoring.from_table(
            bundle["window"], {(i, j): v for i, j, v in bundle["f"]}
        )
        t = Transcript(
            strategy="r-hindman", params={}, steps=[],
            witness={"b": NatSet(bundle["b"]), "reservoirs": []},
            image=None, certified_sum=None, majorant=None,
            coloring=f, basis=SparseBasis(bundle["D"]),
        )
        report = replay_final_contradiction(t, NatSet(bundle["C"]))
        return {"what": what, "report": report.to_json_dict()}
    if what == "rnh":
        f = _gamma_from_rows(bundle["f"])
        X = SparseBasis(bundle["X"])
        if bundle["case"] == 1:
            data = RnhCase1Bundle(
                k=bundle["k"], D=SparseBasis(bundle["D"]),
                xs=list(bundle["x"]),
                Ds=[SparseBasis(d) for d in bundle["Dn"]],
            )
        else:
            data = RnhCase2Bundle(
                ns=list(bundle["n"]), js=list(bundle["j"]),
                ks=list(bundle["k"]), Fs=[frozenset(F) for F in bundle["F"]],
                xs=list(bundle["x"]),
                Ds=[SparseBasis(d) for d in bundle["Dn"]],
            )
        report = check_rnh_conditions(bundle["case"], data, f, X)
        return {"what": what, "report": report.to_json_dict()}
    raise ParseError(f"unknown verify target {what!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idealforge",
        description="Finite-scale workbench for Ramsey-type ideals.",
    )
    parser.add_argument("--out", help="write the report to this path")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed echoed into the header for reproducibility")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def scale_flags(p):
        p.add_argument("--window", type=int)
        p.add_argument("--ap-len", dest="ap_len", type=int)
        p.add_argument("--clique-size", dest="clique_size", type=int)
        p.add_argument("--fs-size", dest="fs_size", type=int)
        p.add_argument("--tau", type=str)

    p = sub.add_parser("oracle", help="positivity and witness queries")
    p.add_argument("--ideal", required=True,
                   choices=[i.value for i in IdealId])
    p.add_argument("--op", default="positive",
                   choices=["positive", "longest-ap", "find-ap", "sum",
                            "clique", "heavy-columns", "tall-witness"])
    p.add_argument("--set", help="set literal, e.g. '1,3,9' or '0..8' or 'pow2(6)'")
    p.add_argument("--edges", help="edge list, e.g. '0 1, 0 2, 1 2'")
    p.add_argument("--pairs", help="ordered pairs, e.g. '0 0, 0 1, 1 5'")
    p.add_argument("--n", type=int, help="vertex count for edge sets")
    p.add_argument("--k", type=int, help="progression/clique/threshold size")
    p.add_argument("--target", type=int, default=2, help="tall-witness size")
    scale_flags(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("fs", help="finite sums and sparse bases")
    p.add_argument("--op", required=True,
                   choices=["fs", "sparse", "alpha", "very-sparse",
                            "very-sparse-subset", "fs-subset", "conflict", "shift"])
    p.add_argument("--set", help="basis or carrier literal")
    p.add_argument("--pool", help="pool literal for very-sparse-subset")
    p.add_argument("--k", type=int, help="requested basis size")
    p.add_argument("--x", type=int, help="value to decompose")
    p.add_argument("--y", type=int, help="value whose conflict set is wanted")
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--direction", choices=["up", "down"], default="up")
    p.set_defaults(func=_cmd_fs)

    p = sub.add_parser("canonize", help="canonical coloring classification")
    p.add_argument("--kind", required=True, choices=["pairs", "fs"])
    p.add_argument("--op", default="classify", choices=["classify", "find"])
    p.add_argument("--phi", required=True, help="builtin name or table file")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--ground", help="T literal (pairs) or block pool literal (fs)")
    p.add_argument("--m", type=int, default=3)
    p.set_defaults(func=_cmd_canonize)

    p = sub.add_parser("adversary", help="construction strategies")
    p.add_argument("--strategy", required=True,
                   choices=["w-summable", "h-summable", "r-summable", "r-hindman"])
    p.add_argument("--phi", required=True, help="builtin name or table file")
    p.add_argument("--case", choices=[c.value for c in CanonicalCase],
                   help="declared canonical case (h/r-summable)")
    p.add_argument("--basis", help="block pool (h-summable) or sparse basis (r-hindman)")
    p.add_argument("--ground", help="T literal for r-summable")
    p.add_argument("--window", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--budget-max-element", dest="budget_max_element", type=int)
    p.add_argument("--candidate-cap", dest="candidate_cap", type=int)
    p.add_argument("--fs-size", dest="fs_size", type=int)
    p.set_defaults(func=_cmd_adversary)

    p = sub.add_parser("search", help="micro-scale reduction-map search")
    p.add_argument("--src-ideal", required=True, choices=[i.value for i in IdealId])
    p.add_argument("--src-ground", required=True,
                   help="set literal, or vertex count for ramsey")
    p.add_argument("--dst-ideal", required=True, choices=[i.value for i in IdealId])
    p.add_argument("--dst-ground", required=True)
    scale_flags(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("verify", help="re-verify maps, chains, and bundles")
    p.add_argument("--what", required=True,
                   choices=["reduction", "hnr", "rnh", "final"])
    p.add_argument("--bundle", required=True, help="JSON bundle path")
    scale_flags(p)
    p.set_defaults(func=_cmd_verify)
    return parser


def _thread_cap() -> int:
    raw = os.environ.get("IDEALFORGE_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise ParseError(f"IDEALFORGE_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise ParseError("IDEALFORGE_THREADS must be >= 1")
    return cap


def run(args: argparse.Namespace) -> Tuple[int, Dict[str, Any]]:
    """Dispatch one parsed invocation; returns (exit code, report dict)."""
    options = {
        key: value for key, value in sorted(vars(args).items())
        if key not in ("func", "out") and value is not None
    }
    header = {
        "tool": "idealforge",
        "version": __version__,
        "subcommand": args.subcommand,
        "options": options,
    }
    _thread_cap()  # validated; execution is sequential either way
    try:
        body = args.func(args)
        body.setdefault("status", "ok")
        return 0, {"header": header, "body": body}
    except SearchExhausted as exc:
        body = {"status": "exhausted", "error": {
            "code": exc.code(), "step": exc.step, "message": str(exc),
        }}
        return 2, {"header": header, "body": body}
    except IdealforgeError as exc:
        body = {"status": "error", "error": {
            "code": exc.code(), "message": str(exc),
        }}
        return 1, {"header": header, "body": body}
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        body = {"status": "error", "error": {
            "code": type(exc).__name__, "message": str(exc),
        }}
        return 1, {"header": header, "body": body}


def main(argv: Optional[List[str]] = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    code, report = run(args)
    text = dumps_stable(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    sys.exit(code)


if __name__ == "__main__":
    main()
