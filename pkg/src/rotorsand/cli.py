"""Command-line interface: one-shot computations and verification sweeps.

Output is deterministic JSON on stdout (DOT with --dot where offered).
Exit codes: 0 success, 2 malformed input, 3 a mathematical guarantee failed
(either an InvariantViolation or a verification suite with violations).
Reports carry a schema tag, the configuration echo, the seed, and wall time.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from multiprocessing import Pool

from . import catalog, moves, sandpile, torsor
from .errors import InvariantViolation
from .matroid import (
    RegularMatroid,
    SignaturePair,
    bby_act,
    bby_vector,
    check_acyclic_pair,
    conjecture_search,
    default_signatures,
)
from .multigraph import Multigraph
from .ribbon import RibbonGraph
from .rotor import route_chip, verify_full_spin, verify_reversal_equivalence
from .sandpile import Divisor

SCHEMA = "rotorsand-report-v1"


class InputError(ValueError):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_graph(path) -> Multigraph:
    try:
        return Multigraph.from_obj(_load_json(path))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_ribbon(path) -> RibbonGraph:
    try:
        return RibbonGraph.from_obj(_load_json(path))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_tree(path):
    obj = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("edges")
    if not isinstance(obj, list):
        raise InputError("tree file must be a list of edge ids")
    return frozenset(obj)


def _load_divisor(path) -> Divisor:
    obj = _load_json(path)
    if not isinstance(obj, dict) or not all(isinstance(v, int) for v in obj.values()):
        raise InputError("divisor file must map vertex ids to integers")
    return Divisor(obj)


def _emit(obj):
    print(json.dumps(obj, sort_keys=True, indent=2))


def _dot_ribbon(rg: RibbonGraph) -> str:
    lines = ["graph {"]
    for v in rg.graph.vertices:
        order = " ".join(rg.rotation[v])
        lines.append(f'  "{v}";  // rotation: {order}')
    for e in rg.graph.edges:
        u, w = rg.graph.ends(e)
        lines.append(f'  "{u}" -- "{w}" [label="{e}"];')
    lines.append("}")
    return "\n".join(lines)


def _dot_rotors(g: Multigraph, tree, s) -> str:
    from .rotor import tree_to_rotors

    rho = tree_to_rotors(g, tree, s).as_dict()
    lines = ["digraph {"]
    for v, e in sorted(rho.items()):
        lines.append(f'  "{v}" -> "{g.other(e, v)}" [label="{e}"];')
    lines.append("}")
    return "\n".join(lines)


# -- one-shot commands ---------------------------------------------------------


def cmd_trees(args):
    g = _load_graph(args.graph)
    _emit([sorted(t) for t in g.spanning_trees()])


def cmd_group(args):
    g = _load_graph(args.graph)
    s = sandpile.group_structure(g)
    _emit({"invariant_factors": list(s.invariant_factors), "order": s.order})


def cmd_genus(args):
    rg = _load_ribbon(args.graph)
    if args.dot:
        print(_dot_ribbon(rg))
        return
    _emit(
        {
            "faces": len(rg.faces()),
            "genus": rg.euler_genus(),
            "plane": rg.is_plane(),
        }
    )


def cmd_route(args):
    rg = _load_ribbon(args.graph)
    tree = _load_tree(args.tree)
    out, steps = route_chip(rg, tree, args.chip, args.sink, trace=args.trace)
    if args.dot:
        print(_dot_rotors(rg.graph, out, args.sink))
        return
    result = {"tree": sorted(out)}
    if args.trace:
        result["trace"] = [
            {
                "step": st.step,
                "chip": st.chip,
                "rotatedVertex": st.rotated_vertex,
                "newRotor": st.new_rotor,
            }
            for st in steps
        ]
    _emit(result)


def cmd_act(args):
    rg = _load_ribbon(args.graph)
    tree = _load_tree(args.tree)
    d = _load_divisor(args.divisor)
    action = torsor.TorsorAction(rg, args.variant)
    _emit({"tree": sorted(action.act(d, tree)), "variant": args.variant})


def cmd_reduce(args):
    g = _load_graph(args.graph)
    d = _load_divisor(args.divisor)
    q = args.sink if args.sink else g.vertices[0]
    _emit({"reduced": sandpile.reduce(g, d, q).to_dict(), "sink": q})


def cmd_moves(args):
    rg = _load_ribbon(args.graph)
    t1 = _load_tree(args.src)
    t2 = _load_tree(args.dst)
    if args.leaf_swap:
        path = moves.leaf_swap_path(rg.graph, t1, t2)
        _emit({"trees": [sorted(t) for t in path]})
        return
    seq = moves.source_turn_path(rg, t1, t2)
    _emit(
        {
            "moves": [
                {"c": mv.c, "s": mv.s, "removed": mv.removed, "added": mv.added}
                for mv in seq
            ],
            "trees": [sorted(t1)] + [sorted(mv.result) for mv in seq],
        }
    )


def cmd_telescope(args):
    ks = [int(x) for x in args.ks.split(",")] if args.ks else [0]
    rg, labels = moves.telescope(args.n, ks)
    obj = rg.to_obj()
    obj["labels"] = {
        "c": labels.c,
        "s": labels.s,
        "x": labels.x,
        "f": labels.f,
        "g": labels.g,
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(obj, fh, sort_keys=True, indent=2)
    else:
        _emit(obj)


def _load_matroid(args) -> RegularMatroid:
    return RegularMatroid.from_obj(_load_json(args.matroid))


def _load_signatures(args, m: RegularMatroid) -> SignaturePair:
    if not args.signatures:
        return default_signatures(m)
    obj = _load_json(args.signatures)
    try:
        pair = SignaturePair(
            tuple(tuple(int(x) for x in v) for v in obj["circuits"]),
            tuple(tuple(int(x) for x in v) for v in obj["cocircuits"]),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed signature file: {exc}") from exc
    _check_signature_choice(pair.circuits, set(m.circuits()), "circuit")
    _check_signature_choice(pair.cocircuits, set(m.cocircuits()), "cocircuit")
    if not check_acyclic_pair(pair):
        raise InputError("provided signatures are not acyclic")
    return pair


def _check_signature_choice(chosen, family, kind):
    seen = set()
    for v in chosen:
        base = v if v in family else tuple(-x for x in v)
        if base not in family:
            raise InputError(f"{list(v)} is not a signed {kind} of this matroid")
        if base in seen:
            raise InputError(f"both orientations of a {kind} were chosen")
        seen.add(base)
    if len(seen) != len(family):
        raise InputError(f"signature must choose one orientation per {kind}")


def cmd_bby(args):
    m = _load_matroid(args)
    pair = _load_signatures(args, m)
    basis = frozenset(args.basis.split(","))
    if args.action == "vector":
        _emit({"vector": list(bby_vector(m, pair, basis))})
        return
    vec = [0] * m.size
    for part in args.cls.split("+"):
        part = part.strip()
        if part:
            if part not in m.labels:
                raise InputError(f"unknown ground element {part!r}")
            vec[m.labels.index(part)] += 1
    _emit({"basis": sorted(bby_act(m, pair, vec, basis))})


# -- verification suites --------------------------------------------------------


def _graph_key(rg: RibbonGraph) -> str:
    return rg.to_json()

def _run_torsor(payload):
    text, variant = payload
    rg = RibbonGraph.from_json(text)
    rep = torsor.verify_torsor_axioms(rg, variant=variant)
    return text, rep.checked, rep.violations, rep.notes


def _run_sink(payload):
    rg = RibbonGraph.from_json(payload[0])
    rep = torsor.verify_sink_invariance(rg)
    return payload[0], rep.checked, rep.violations, rep.notes


def _run_consistency(payload):
    text, variant = payload
    rg = RibbonGraph.from_json(text)
    rep = torsor.verify_consistency(rg, variant)
    return text, rep.checked, rep.violations, rep.notes


def _run_moves(payload):
    rg = RibbonGraph.from_json(payload[0])
    g = rg.graph
    trees = g.spanning_trees()
    checked = 0
    violations = []
    for t1 in trees:
        for t2 in trees:
            checked += 1
            try:
                seq = moves.source_turn_path(rg, t1, t2)
            except InvariantViolation as exc:
                violations.append({"pair": [sorted(t1), sorted(t2)], "error": str(exc)})
                continue
            cur = t1
            for mv in seq:
                cur = mv.result
            if cur != t2:
                violations.append({"pair": [sorted(t1), sorted(t2)], "error": "bad path"})
    for t1 in trees:
        for t2 in trees:
            checked += 1
            try:
                path = moves.leaf_swap_path(g, t1, t2)
            except InvariantViolation as exc:
                violations.append(
                    {"pair": [sorted(t1), sorted(t2)], "error": f"leaf swap: {exc}"}
                )
                continue
            if path[0] != t1 or path[-1] != t2:
                violations.append({"pair": [sorted(t1), sorted(t2)], "error": "bad leaf path"})
    return payload[0], checked, violations, []


def _run_unicycle(payload):
    rg = RibbonGraph.from_json(payload[0])
    rep = verify_full_spin(rg)
    return payload[0], rep["orbits"], list(rep["violations"]), []


def _pool_map(fn, payloads, workers):
    if workers <= 1:
        return [fn(p) for p in payloads]
    with Pool(workers) as pool:
        return list(pool.imap(fn, payloads, chunksize=4))


def cmd_verify(args):
    t0 = time.time()
    seed = args.seed if args.seed is not None else random.randrange(2**32)
    workers = args.workers or int(os.environ.get("ROTORSAND_WORKERS", "1"))
    suite = args.suite
    config = {
        "suite": suite,
        "max_edges": args.max_edges,
        "variant": args.variant,
        "include_nonplanar": args.include_nonplanar,
        "seed": seed,
        "workers": workers,
    }
    report = {
        "schema": SCHEMA,
        "tool_version": _version(),
        "config": config,
        "instances": 0,
        "checked": 0,
        "violations": [],
        "findings": [],
        "notes": [],
    }

    if suite in ("torsor", "sink-invariance", "consistency", "moves"):
        two_connected = suite == "moves"
        graphs = catalog.plane_graphs(args.max_edges, two_connected=two_connected)
        runner = {
            "torsor": _run_torsor,
            "sink-invariance": _run_sink,
            "consistency": _run_consistency,
            "moves": _run_moves,
        }[suite]
        payloads = sorted((_graph_key(rg), args.variant) for rg in graphs)
        results = _pool_map(runner, payloads, workers)
        for key, checked, violations, notes in sorted(results):
            report["instances"] += 1
            report["checked"] += checked
            for v in violations:
                report["violations"].append({"graph": key, "detail": v})
            report["notes"].extend(notes)
        if suite == "sink-invariance" and args.include_nonplanar:
            for rg in catalog.ribbon_graphs(args.max_edges):
                if rg.is_plane():
                    continue
                rep = torsor.verify_sink_invariance(rg)
                report["instances"] += 1
                report["checked"] += rep.checked
                if rep.violations:
                    report["findings"].append(
                        {
                            "graph": _graph_key(rg),
                            "disagreements": len(rep.violations),
                            "expected": "sink dependence is forced off the plane",
                        }
                    )
    elif suite == "unicycle":
        graphs = catalog.ribbon_graphs(args.max_edges)
        payloads = sorted((_graph_key(rg),) for rg in graphs)
        results = _pool_map(_run_unicycle, payloads, workers)
        for key, checked, violations, _notes in sorted(results):
            report["instances"] += 1
            report["checked"] += checked
            for v in violations:
                report["violations"].append({"graph": key, "detail": v})
        for rg, name in _reversal_instances():
            rep = verify_reversal_equivalence(rg)
            report["instances"] += 1
            if not rep["equivalence_holds"]:
                report["violations"].append(
                    {"graph": name, "detail": "reversal equivalence failed"}
                )
    elif suite == "telescope":
        from itertools import product as iproduct

        for n in range(0, 3):
            for ks in iproduct(range(3), repeat=n + 1):
                rg, labels = moves.telescope(n, list(ks))
                report["instances"] += 1
                report["checked"] += 1
                if not moves.verify_telescope_equivalence(rg, labels):
                    report["violations"].append({"telescope": [n, list(ks)]})
    elif suite == "matroid":
        sweep = conjecture_search(args.max_edges, include_r10=args.max_elements >= 10)
        report["instances"] = sweep["instances"]
        report["checked"] = sweep["checked"]
        report["findings"] = sweep["findings"]
        report["notes"].append("matroid consistency findings are reported, not asserted")
    else:
        raise InputError(f"unknown suite {suite!r}")

    report["wall_time_s"] = round(time.time() - t0, 3)
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text + "\n")
    print(text)
    if report["violations"]:
        return 3
    return 0


def _reversal_instances():
    from .multigraph import banana_graph, complete_graph

    e3 = banana_graph(3)
    out = [
        (RibbonGraph(e3, {"x": ("e0", "e1", "e2"), "y": ("e2", "e1", "e0")}), "triple edge, plane"),
        (RibbonGraph(e3, {"x": ("e0", "e1", "e2"), "y": ("e0", "e1", "e2")}), "triple edge, genus 1"),
    ]
    k4 = complete_graph(4)
    plane_rot = {
        "v0": ("e0_1", "e0_3", "e0_2"),
        "v1": ("e1_2", "e1_3", "e0_1"),
        "v2": ("e0_2", "e2_3", "e1_2"),
        "v3": ("e1_3", "e2_3", "e0_3"),
    }
    rg_plane = RibbonGraph(k4, plane_rot)
    out.append((rg_plane, "complete graph on 4, plane"))
    genus1 = None
    for rg in catalog.rotation_systems(k4):
        if rg.euler_genus() == 1:
            genus1 = rg
            break
    out.append((genus1, "complete graph on 4, genus 1"))
    return out


def _version():
    from . import __version__

    return __version__


def build_parser():
    p = argparse.ArgumentParser(prog="rotorsand", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("trees", help="list spanning trees")
    sp.add_argument("graph")
    sp.set_defaults(fn=cmd_trees)

    sp = sub.add_parser("group", help="sandpile group structure")
    sp.add_argument("graph")
    sp.set_defaults(fn=cmd_group)

    sp = sub.add_parser("genus", help="faces, genus, planarity of a ribbon graph")
    sp.add_argument("graph")
    sp.add_argument("--dot", action="store_true")
    sp.set_defaults(fn=cmd_genus)

    sp = sub.add_parser("route", help="route one chip to the sink")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--tree", required=True)
    sp.add_argument("--chip", required=True)
    sp.add_argument("--sink", required=True)
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--dot", action="store_true")
    sp.set_defaults(fn=cmd_route)

    sp = sub.add_parser("act", help="apply a sandpile class to a tree")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--tree", required=True)
    sp.add_argument("--divisor", required=True)
    sp.add_argument("--variant", default="r", choices=list(torsor.VARIANTS))
    sp.set_defaults(fn=cmd_act)

    sp = sub.add_parser("reduce", help="canonical reduced divisor")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--divisor", required=True)
    sp.add_argument("--sink", default=None)
    sp.set_defaults(fn=cmd_reduce)

    sp = sub.add_parser("moves", help="tree-to-tree move sequences")
    sp.add_argument("action", choices=["path"])
    sp.add_argument("--graph", required=True)
    sp.add_argument("--from", dest="src", required=True)
    sp.add_argument("--to", dest="dst", required=True)
    sp.add_argument("--leaf-swap", action="store_true")
    sp.set_defaults(fn=cmd_moves)

    sp = sub.add_parser("telescope", help="generate a telescope graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ks", default="")
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_telescope)

    sp = sub.add_parser("bby", help="BBY vectors and action")
    sp.add_argument("action", choices=["act", "vector"])
    sp.add_argument("--matroid", required=True)
    sp.add_argument("--signatures", default=None)
    sp.add_argument("--class", dest="cls", default="")
    sp.add_argument("--basis", required=True)
    sp.set_defaults(fn=cmd_bby)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument(
        "suite",
        choices=[
            "torsor",
            "sink-invariance",
            "consistency",
            "moves",
            "unicycle",
            "telescope",
            "matroid",
        ],
    )
    sp.add_argument("--max-edges", type=int, default=5)
    sp.add_argument("--max-elements", type=int, default=6)
    sp.add_argument("--variant", default="r", choices=list(torsor.VARIANTS))
    sp.add_argument("--include-nonplanar", action="store_true")
    sp.add_argument("--report", default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.fn(args)
        return out if isinstance(out, int) else 0
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
