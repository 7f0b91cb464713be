"""Command-line surface with an append-only JSONL result ledger.

Each subcommand maps to one library operation and appends a single
record to the ledger (default stdout):

    {"schema_version": 1, "command": ..., "params": {...}, "seed": ...,
     "result": {...}, "timestamp": "..."}

Identical (command, params, seed) runs produce identical result payloads
once timing fields are set aside; --no-timestamp drops those fields so
reruns are byte-identical.  Families whose bitmaps exceed the inline
limit are written to sidecar files and referenced by path plus content
hash.  Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from .bitops import family_full_bitmap, iter_bits, mask_elements, mask_from_elements
from .constructions import (
    Partition,
    balanced_block,
    janzer_size,
    linked_cubes,
    linked_cubes_size,
    pair_of_cubes,
    series_of_cubes,
    series_of_cubes_size,
)
from .core import (
    KwiseMode,
    SetFamily,
    addable_sets,
    is_k_wise_intersecting,
    is_maximal_k_wise,
    maximal_closure,
)
from .disjointness import build_bipartite, build_graph, count_edges_touching, stability_stats
from .generator import coverage
from .search import SearchConfig, audit_claim_counts, search_min

SCHEMA_VERSION = 1
INLINE_FAMILY_BITS = 1 << 20
MAX_INLINE_EDGES = 4096
VOLATILE_RESULT_KEYS = ("seconds",)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_family(n: int, text: str) -> SetFamily:
    if text.startswith("@"):
        text = Path(text[1:]).read_text().strip()
    return SetFamily.from_hex(n, text)


def _parse_elements(n: int, text: str) -> int:
    elems = [int(t) for t in text.split(",") if t.strip()]
    return mask_from_elements(elems, n)


def _family_payload(family: SetFamily, sidecar_dir: Path) -> Any:
    """Inline hex for small grounds, path plus sha256 sidecar for large ones."""
    text = family.to_hex()
    if (1 << family.n) <= INLINE_FAMILY_BITS:
        return text
    digest = hashlib.sha256(text.encode("ascii")).hexdigest()
    path = sidecar_dir / f"family_{digest[:16]}.hex"
    path.write_text(text + "\n", encoding="ascii")
    return {"path": str(path), "sha256": digest}


def _cmd_check(args) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    mode = KwiseMode.parse(args.mode)
    fam = _parse_family(args.n, args.family)
    kwise = is_k_wise_intersecting(fam, args.k, mode)
    maximal = False
    witness: Optional[int] = None
    if kwise:
        maximal = is_maximal_k_wise(fam, args.k, mode)
        if not maximal:
            witness = next(iter_bits(addable_sets(fam, args.k, mode).bitmap))
    params = {"n": args.n, "k": args.k, "mode": mode.value, "family": args.family}
    result = {
        "size": len(fam),
        "kwise": kwise,
        "maximal": maximal,
        "addable_witness": witness,
    }
    return params, result


def _cmd_closure(args) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    mode = KwiseMode.parse(args.mode)
    fam = _parse_family(args.n, args.family)
    closed = maximal_closure(fam, args.k, mode)
    params = {"n": args.n, "k": args.k, "mode": mode.value, "family": args.family}
    result = {
        "input_size": len(fam),
        "size": len(closed),
        "added": len(closed) - len(fam),
        "family": _family_payload(closed, args.sidecar_dir),
    }
    return params, result


def _cmd_construct(args) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    name = args.construction
    params: Dict[str, Any] = {"construction": name, "n": args.n}
    if name == "series-of-cubes":
        partition = Partition.contiguous(args.n, args.parts)
        fam = series_of_cubes(partition)
        params["parts"] = args.parts
    else:
        s = _parse_elements(args.n, args.s) if args.s else balanced_block(args.n)
        fam = linked_cubes(args.n, s) if name == "linked-cubes" else pair_of_cubes(args.n, s)
        params["s"] = mask_elements(s)
    result = {"size": len(fam), "family": _family_payload(fam, args.sidecar_dir)}
    return params, result


def _cmd_gen_coverage(args) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    fam = _parse_family(args.n, args.family)
    cov = coverage(fam, args.k)
    uncovered = family_full_bitmap(args.n) & ~cov.covered.bitmap
    sample = list(itertools.islice(iter_bits(uncovered), 8))
    params = {"n": args.n, "k": args.k, "family": args.family}
    result = {
        "count": cov.count,
        "fraction": _frac(cov.fraction),
        "uncovered_sample": sample,
    }
    return params, result


def _cmd_disjointness(args) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    fams = [_parse_family(args.n, f) for f in args.family]
    if len(fams) == 1:
        graph = build_graph(fams[0])
    elif len(fams) == 2:
        graph = build_bipartite(fams[0], fams[1])
    else:
        raise ValueError("disjointness expects one or two --family values")
    params = {"n": args.n, "family": list(args.family)}
    edge_count = graph.edge_count()
    result: Dict[str, Any] = {
        "bipartite": graph.bipartite,
        "left_size": len(graph.left),
        "right_size": len(graph.right),
        "edge_count": edge_count,
    }
    if edge_count <= MAX_INLINE_EDGES:
        result["edges"] = [[u, v] for u, v in graph.edges()]
    else:
        result["edges_truncated"] = True
    if args.elem is not None:
        params["elem"] = args.elem
        result["edges_touching"] = count_edges_touching(graph, args.elem)
    return params, result


def _cmd_stats(args) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    if len(args.family) != 2:
        raise ValueError("stats expects exactly two --family values")
    x = _parse_family(args.n, args.family[0])
    y = _parse_family(args.n, args.family[1])
    elem = args.elem if args.elem is not None else args.n
    stats = stability_stats(x, y, args.ell, elem)
    params = {
        "n": args.n,
        "family": list(args.family),
        "ell": args.ell,
        "elem": elem,
    }
    result = {
        "alpha": _frac(stats.alpha),
        "beta": _frac(stats.beta),
        "x_ratios": [_frac(r) for r in stats.x_ratios],
        "y_ratios": [_frac(r) for r in stats.y_ratios],
        "e_total": stats.e_total,
        "e_elem": stats.e_elem,
        "theta": _frac(stats.theta),
        "phi": _frac(stats.phi),
        "threshold_x": stats.threshold_x,
        "threshold_y": stats.threshold_y,
    }
    return params, result


def _cmd_search_min(args) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    mode = KwiseMode.parse(args.mode)
    config = SearchConfig(n=args.n, k=args.k, mode=mode, budget=args.budget)
    report = search_min(config)
    params = {"n": args.n, "k": args.k, "mode": mode.value, "budget": args.budget}
    result = {
        "f": report.f_value,
        "witnesses": [w.to_hex() for w in report.witnesses],
        "matched_linked_cubes": list(report.matched_linked_cubes),
        "nodes": report.nodes_explored,
        "seconds": round(report.elapsed, 6),
        "optimal": report.optimal,
        "lower_bound": report.lower_bound,
    }
    return params, result


def _cmd_audit(args) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    fam = _parse_family(args.n, args.family)
    s = _parse_elements(args.n, args.s)
    eps = Fraction(args.eps)
    report = audit_claim_counts(fam, s, eps)
    params = {"n": args.n, "family": args.family, "s": mask_elements(s), "eps": args.eps}
    result = {
        "ell": report.ell,
        "family_size": report.family_size,
        "cube_pair_size": report.cube_pair_size,
        "g1_size": report.g1_size,
        "g2_size": report.g2_size,
        "g3_size": report.g3_size,
        "sym_diff_size": report.sym_diff_size,
        "hypotheses_met": report.hypotheses_met,
        "outside_count": report.outside_count,
        "chain_lower": report.chain_lower,
        "pair_bound": _frac(report.pair_bound),
        "pair_bound_holds": report.pair_bound_holds,
        "product_bound": report.product_bound,
        "product_bound_holds": report.product_bound_holds,
        "product_bound_equality": report.product_bound_equality,
        "g3_empty": report.g3_empty,
    }
    return params, result


_HANDLERS = {
    "check": _cmd_check,
    "closure": _cmd_closure,
    "construct": _cmd_construct,
    "gen-coverage": _cmd_gen_coverage,
    "disjointness": _cmd_disjointness,
    "stats": _cmd_stats,
    "search-min": _cmd_search_min,
    "audit": _cmd_audit,
}


def _stable_payload(result: Dict[str, Any]) -> str:
    trimmed = {k: v for k, v in result.items() if k not in VOLATILE_RESULT_KEYS}
    return json.dumps(trimmed, sort_keys=True)


def _run_report(args) -> int:
    path = Path(args.ledger)
    text = path.read_text(encoding="utf-8")
    records = []
    malformed = 0
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict) or "command" not in rec or "params" not in rec:
                raise ValueError("missing required keys")
            records.append(rec)
        except (json.JSONDecodeError, ValueError):
            malformed += 1
    if malformed:
        print(f"warning: skipped {malformed} malformed ledger line(s)", file=sys.stderr)

    seen: Dict[Tuple[str, str, Any], str] = {}
    for rec in records:
        key = (
            rec.get("command"),
            json.dumps(rec.get("params"), sort_keys=True),
            rec.get("seed"),
        )
        payload = _stable_payload(rec.get("result") or {})
        if key in seen and seen[key] != payload:
            print(
                f"error: ledger integrity violation for {key[0]} with params {key[1]}",
                file=sys.stderr,
            )
            return 1
        seen.setdefault(key, payload)

    f_rows = {}
    for rec in records:
        if rec.get("command") != "search-min":
            continue
        params = rec.get("params", {})
        result = rec.get("result", {})
        n, k, mode = params.get("n"), params.get("k"), params.get("mode")
        if not isinstance(n, int) or not isinstance(k, int) or result.get("f") is None:
            continue
        balanced = linked_cubes_size(n, n // 2) if n >= 2 else ""
        try:
            series = series_of_cubes_size(n, k - 1)
        except ValueError:
            series = ""
        try:
            janzer = janzer_size(n, k)
        except ValueError:
            janzer = ""
        f_rows.setdefault((n, k, mode), [n, k, mode, result["f"], balanced, series, janzer])

    max_rows = {}
    for rec in records:
        if rec.get("command") != "check":
            continue
        params = rec.get("params", {})
        result = rec.get("result", {})
        n = params.get("n")
        family = params.get("family")
        if not isinstance(n, int) or not 2 <= n <= 26 or not isinstance(family, str):
            continue
        if family.startswith("@"):
            continue
        expected = linked_cubes(n, balanced_block(n)).to_hex()
        if family.strip().lower() != expected:
            continue
        row_key = (n, params.get("k"), params.get("mode"))
        max_rows.setdefault(
            row_key,
            [n, params.get("k"), params.get("mode"), result.get("size"), result.get("maximal")],
        )

    base = path.with_suffix("")
    f_path = Path(f"{base}_f_table.csv")
    m_path = Path(f"{base}_linked_cubes_maximality.csv")
    with f_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "k", "mode", "f", "balanced_pair_size", "series_size", "janzer_size"])
        for key in sorted(f_rows, key=lambda t: (t[0], t[1], str(t[2]))):
            writer.writerow(f_rows[key])
    with m_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "k", "mode", "size", "maximal"])
        for key in sorted(max_rows, key=lambda t: (t[0], str(t[1]), str(t[2]))):
            writer.writerow(max_rows[key])

    params = {"ledger": str(path)}
    result = {
        "f_table": str(f_path),
        "maximality_table": str(m_path),
        "f_rows": len(f_rows),
        "maximality_rows": len(max_rows),
        "skipped_lines": malformed,
    }
    _emit_record(args, "report", params, result)
    return 0


def _emit_record(args, command: str, params: Dict[str, Any], result: Dict[str, Any]) -> None:
    record: Dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "seed": args.seed,
        "result": result,
    }
    if args.no_timestamp:
        for key in VOLATILE_RESULT_KEYS:
            result.pop(key, None)
    else:
        record["timestamp"] = datetime.now(timezone.utc).isoformat()
    line = json.dumps(record, sort_keys=True, separators=(",", ":"))
    if args.out:
        with open(args.out, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
    else:
        print(line)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kwise",
        description="Construct, check, and search maximal k-wise intersecting set families.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="ledger file to append to (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="recorded in every ledger line")
    common.add_argument(
        "--no-timestamp",
        action="store_true",
        help="omit timestamp and timing fields so reruns are byte-identical",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="k-wise and maximality verdicts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in KwiseMode], default="distinct")
    p.add_argument("--family", required=True, help="hex bitmap, or @path to a hex file")

    p = sub.add_parser("closure", parents=[common], help="grow a family to a maximal one")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in KwiseMode], default="distinct")
    p.add_argument("--family", required=True, help="hex bitmap, or @path to a hex file")

    p = sub.add_parser("construct", parents=[common], help="emit a reference construction")
    p.add_argument(
        "construction",
        choices=["pair-of-cubes", "linked-cubes", "series-of-cubes"],
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", help="comma-separated block elements (default: balanced block)")
    p.add_argument("--parts", type=int, default=2, help="block count for series-of-cubes")

    p = sub.add_parser("gen-coverage", parents=[common], help="k-step coverage of a family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--family", required=True, help="hex bitmap, or @path to a hex file")

    p = sub.add_parser("disjointness", parents=[common], help="disjointness graph edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--family",
        action="append",
        required=True,
        help="hex bitmap or @path; give twice for the bipartite graph",
    )
    p.add_argument("--elem", type=int, help="also count edges touching this element")

    p = sub.add_parser("stats", parents=[common], help="stability statistics for two families")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", action="append", required=True, help="give exactly twice")
    p.add_argument("--ell", type=int, required=True, help="scale exponent for the ratios")
    p.add_argument("--elem", type=int, help="pivot element (default: n)")

    p = sub.add_parser("search-min", parents=[common], help="exact minimum maximal-family size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in KwiseMode], default="distinct")
    p.add_argument("--budget", type=float, default=60.0, help="wall-clock seconds")

    p = sub.add_parser("audit", parents=[common], help="exact counting audit for a cube split")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", required=True, help="hex bitmap, or @path to a hex file")
    p.add_argument("--s", required=True, help="comma-separated block elements")
    p.add_argument("--eps", required=True, help="rational slack, e.g. 1/8")

    p = sub.add_parser("report", parents=[common], help="render CSV tables from a ledger")
    p.add_argument("ledger", help="path to a JSONL ledger")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    args.sidecar_dir = Path(args.out).resolve().parent if args.out else Path.cwd()
    try:
        if args.command == "report":
            return _run_report(args)
        params, result = _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit_record(args, args.command, params, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
