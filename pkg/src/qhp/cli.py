"""Command-line front end: ``qhp <command> ...``.

Exit status is 0 on success, 1 when the input is well formed but fails a check (invalid
arrangement, schema violation, not a Q-homology plane, bounds exceeded) and 2 on usage
errors (bad arguments, unknown row or center, malformed weight). Errors are reported on
one stderr line as ``error: <kind>: <message>``.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import catalog as cat
from .arrangement import Arrangement
from .boundary_io import Boundary, SchemaError, center_from_dict, load_boundary
from .expansion import ExpansionCenter, ExpansionError, expand_many, parse_weight
from .graph import bounds_report, en_diagram, graph_automorphisms, maximal_twigs
from .homology import Prepared, ZhpSearch, detm_symbolic, m_matrix, qhp_check_direct, zhp_weights
from .poly import Poly
from .resolution import InvalidArrangement, minimal_log_resolution


class Usage(Exception):
    pass


class Failure(Exception):
    pass


def _out(args, data, text):
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _weight(s) -> Fraction:
    try:
        w = parse_weight(s)
    except (ValueError, ZeroDivisionError):
        raise Usage(f"malformed-weight: {s!r}") from None
    if w <= 0:
        raise Usage(f"malformed-weight: {s!r} is not positive")
    return w


def _row(key):
    try:
        return cat.get_row(key)
    except cat.UnknownRow as exc:
        raise Usage(f"unknown-row: {exc.args[0]}") from None


def _combo(row, texts):
    try:
        return row.find_combo(texts)
    except cat.UnknownCenter as exc:
        raise Usage(f"unknown-center: {exc.args[0]}") from None


def _row_centers(args):
    """Row, combo and weights from --row/--centers/--weights."""
    row = _row(args.row)
    combo = _combo(row, args.centers)
    if len(args.weights) != len(combo.centers):
        raise Usage(f"usage: {len(combo.centers)} weights needed, got {len(args.weights)}")
    return row, combo, [_weight(w) for w in args.weights]


def _load(path) -> Boundary:
    try:
        return load_boundary(path)
    except FileNotFoundError:
        raise Usage(f"no-such-file: {path}") from None
    except SchemaError as exc:
        raise Failure(f"schema: {exc}") from None


def _graph_source(args) -> Boundary:
    """The boundary named by --graph, or the expanded boundary of --row/--centers/--weights."""
    if args.graph:
        return _load(args.graph)
    if not args.row:
        raise Usage("usage: give --graph or --row with --centers and --weights")
    row, combo, ws = _row_centers(args)
    b = cat.build_row(row, args.xi)
    _, D = b.check(combo, ws, with_discriminant=False)
    return Boundary(D)


# commands

def cmd_catalog(args):
    if args.action == "list":
        rows = cat.list_rows()
        data = [{"index": r.index, "label": r.label, "table": r.table,
                 "degree": r.load_arrangement().total_degree, "n": r.n_centers} for r in rows]
        _out(args, data, "\n".join(f"{d['index']:>2} {d['label']:<22} table={d['table']} deg={d['degree']} n={d['n']}"
                                   for d in data))
        return
    if not args.row:
        raise Usage("usage: catalog show <row>")
    r = _row(args.row)
    combos = [{"centers": [str(c) for c in cb.centers], "poly": cb.poly, "extra": cb.extra, "z": cb.z}
              for cb in r.combos]
    data = {"index": r.index, "label": r.label, "table": r.table, "arrangement": r.load_arrangement().to_dict(),
            "deleted": list(r.deleted), "xi_choices": len(r.xi_choices), "combos": combos,
            **{k: v for k, v in r.meta.items() if v is not None}}
    lines = [f"{r.id} {r.label} (table {r.table})",
             "components: " + " ".join(f"{c.id}[{c.degree}]" for c in r.load_arrangement().components),
             "deleted: " + (" ".join(r.deleted) or "-")]
    for c in combos:
        z = {True: "Z", False: "-", None: "?"}[c["z"]]
        cond = " and ".join(x for x in (c["poly"], c["extra"]) if x) or "any"
        lines.append(f"  {' '.join(c['centers'])}  [{cond}]  {z}")
    _out(args, data, "\n".join(lines))


def cmd_resolve(args):
    try:
        arr = Arrangement.load(args.arrangement)
    except FileNotFoundError:
        raise Usage(f"no-such-file: {args.arrangement}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise Failure(f"schema: {exc}") from None
    try:
        res = minimal_log_resolution(arr)
    except InvalidArrangement as exc:
        raise Failure(f"invalid-arrangement: {exc}") from None
    if args.dot:
        Path(args.dot).write_text(res.graph.to_dot())
    b = Boundary(res.graph, res.lattice, res.classes, meta={"exceptional_order": res.exceptional_order})
    print(b.dumps())


def cmd_build(args):
    row = _row(args.row)
    try:
        b = cat.build_row(row, args.xi)
    except ValueError as exc:
        raise Usage(f"usage: {exc}") from None
    meta = {"row": row.label, "n": b.n, "coker": b.coker,
            "kernel": [b.kernel.relation(j) for j in range(b.n)]}
    print(Boundary(b.graph, b.lattice, b.classes, meta=meta).dumps())


def _parse_center(text, weight) -> ExpansionCenter:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) not in (2, 3) or not all(parts):
        raise Usage(f"usage: center must be U,W[,node], got {text!r}")
    try:
        return ExpansionCenter(parts[0], parts[1], weight, parts[2] if len(parts) == 3 else None)
    except ValueError as exc:
        raise Usage(f"usage: {exc}") from None


def cmd_expand(args):
    src = _load(args.graph)
    if len(args.center) != len(args.weight):
        raise Usage("usage: one --weight per --center")
    centers = [_parse_center(c, _weight(w)) for c, w in zip(args.center, args.weight)]
    try:
        g, lat, classes, _ = expand_many(src.graph, src.lattice, src.classes, centers)
    except ExpansionError as exc:
        raise Usage(f"unknown-center: {exc}") from None
    base = Boundary(src.graph, src.lattice, src.classes)
    out = Boundary(g, lat, classes, base=base, records=centers)
    print(out.dumps())


def _verdict_text(v) -> str:
    if v.is_qhp:
        return f"QHP h1={v.h1_order} detm={v.detm} coker={v.coker} d(D)={v.d_of_D}"
    return "not a QHP: " + "; ".join(v.reasons)


def cmd_check(args):
    src = _load(args.graph)
    base, records = src, []
    if args.records:
        try:
            records = [_parse_center_dict(d) for d in json.loads(Path(args.records).read_text())]
        except FileNotFoundError:
            raise Usage(f"no-such-file: {args.records}") from None
    elif src.base is not None:
        base, records = src.base, src.records
    if base.classes is None:
        raise Failure("schema: the boundary carries no classes")
    if records:
        try:
            v, _ = Prepared(base.graph, base.lattice, base.classes).check(records)
        except ValueError as exc:
            raise Usage(f"unknown-center: {exc}") from None
    else:
        v = qhp_check_direct(base.graph, base.lattice, base.classes)
    _out(args, v.to_dict(), _verdict_text(v))
    if not v.is_qhp:
        raise SystemExit(1)


def _parse_center_dict(d):
    try:
        return center_from_dict(d)
    except (SchemaError, ValueError) as exc:
        raise Failure(f"schema: {exc}") from None


def cmd_h1(args):
    row, combo, ws = _row_centers(args)
    b = cat.build_row(row, args.xi)
    v, _ = b.check(combo, ws)
    ok, failed = combo.admissible(ws)
    data = {**v.to_dict(), "row": row.label, "centers": [str(c) for c in combo.centers],
            "weights": [str(w) for w in ws], "admissible": ok}
    text = f"h1={v.h1_order}" if v.is_qhp else _verdict_text(v)
    if not ok:
        text += "  (outside the tabulated conditions: " + ", ".join(failed) + ")"
    _out(args, data, text)
    if not v.is_qhp:
        raise SystemExit(1)


def cmd_detm(args):
    row = _row(args.row)
    combo = _combo(row, args.centers)
    b = cat.build_row(row, args.xi)
    if len(combo.centers) != b.n:
        raise Failure(f"size: {b.n} relations but {len(combo.centers)} centers")
    if args.symbolic or not args.weights:
        p, _, ok = cat.constraint_locus(b, combo)
        names = combo.variables
        dehom = p
        for i, v in enumerate(names):
            dehom = _dehomogenize(dehom, i, v)
        printed = combo.poly
        data = {"detm": str(p), "scale": str(_scale(b, combo)), "in_table_weights": str(dehom),
                "printed": printed, "locus_matches": ok}
        text = f"detm = {_scale(b, combo)} * ({p})\nwith {', '.join(f'{v}=u{i + 1}/w{i + 1}' for i, v in enumerate(names))}: {dehom}"
        if printed:
            text += f"\nprinted: {printed}  locus {'matches' if ok else 'DIFFERS'}"
        _out(args, data, text)
        return
    ws = [_weight(w) for w in args.weights]
    if len(ws) != len(combo.centers):
        raise Usage(f"usage: {len(combo.centers)} weights needed")
    d = m_matrix(b.kernel, b.centers(combo, ws)).det()
    _out(args, {"detm": d}, f"detm={d}")


def _scale(b, combo):
    return detm_symbolic(b.kernel, [(c.U, c.W) for c in combo.centers])[1]


def _dehomogenize(p, i, name):
    """Set u_i -> name and w_i -> 1."""
    u, w = f"u{i + 1}", f"w{i + 1}"
    out = Poly()
    for m, c in p.terms.items():
        mono = []
        for v, e in m:
            if v == u:
                mono.append((name, e))
            elif v != w:
                mono.append((v, e))
        out = out + Poly({tuple(mono): c})
    return out


def cmd_enumerate(args):
    row = _row(args.row)
    b = cat.build_row(row, args.xi)
    combos = None
    if args.centers:
        combos = [row.combos.index(_combo(row, args.centers))]
    results = []
    for r in cat.enumerate(row, args.max_height, h1=args.h1, zhp=args.zhp, bounds=args.bounds,
                           combos=combos, built=b):
        cb = row.combos[r.combo]
        item = {"centers": [str(c) for c in cb.centers], "weights": [str(w) for w in r.weights],
                "h1": r.verdict.h1_order, "detm": r.verdict.detm}
        if args.bounds:
            item["bounds_ok"] = r.bounds.ok
            item["bounds"] = {k: getattr(r.bounds, k) for k in r.bounds.LIMITS}
        results.append(item)
    if args.json:
        print(json.dumps(results, sort_keys=True))
    else:
        for it in results:
            extra = ""
            if args.bounds:
                extra = "  bounds " + ("ok" if it["bounds_ok"] else "FAIL") + " " + json.dumps(it["bounds"], sort_keys=True)
            print(f"{' '.join(it['centers'])}  weights={','.join(it['weights'])}  h1={it['h1']}{extra}")
        print(f"{len(results)} boundaries")
    if args.bounds and not all(it["bounds_ok"] for it in results):
        raise SystemExit(1)


def cmd_zhp(args):
    row = _row(args.row)
    combo = _combo(row, [args.center])
    b = cat.build_row(row, args.xi)
    if b.n != 1:
        raise Usage(f"usage: zhp needs a row with one center, {row.label} has {b.n}")
    p, s = detm_symbolic(b.kernel, [(combo.centers[0].U, combo.centers[0].W)])
    form = (int(s * p.terms.get((("u1", 1),), 0)), int(s * p.terms.get((("w1", 1),), 0)))
    if args.h1 < 1:
        raise Usage("usage: --h1 must be positive")
    # #H_1 = |det m| * #coker, so det m must reach h1 / #coker
    if args.h1 % b.coker:
        res = ZhpSearch([], False, f"#coker = {b.coker} does not divide {args.h1}")
    else:
        res = zhp_weights(form, args.h1 // b.coker, args.count, args.bound)
    pairs = [f"{u}/{w}" for u, w in res.pairs]
    data = {"form": list(form), "h1": args.h1, "weights": pairs, "found": res.found, "reason": res.reason}
    text = f"|{form[0]}u{form[1]:+d}w| = {args.h1}: " + (" ".join(pairs) if res.found else res.reason)
    _out(args, data, text)
    if not res.found:
        raise SystemExit(1)


def cmd_diagram(args):
    g = _graph_source(args).graph
    if args.en:
        en = en_diagram(g)
        verts = [sorted(v) for v in en.vertices]
        data = {"vertices": verts, "edges": sorted(list(e) for e in en.edges)}
        text = "\n".join(f"{i}: {' '.join(v)}" for i, v in enumerate(verts))
        text += "\nedges: " + " ".join(f"{a}-{b}" for a, b in sorted(en.edges))
        _out(args, data, text)
    else:
        print(g.to_dot(), end="")


def cmd_bounds(args):
    g = _graph_source(args).graph
    rep = bounds_report(g)
    data = {k: getattr(rep, k) for k in rep.LIMITS}
    data["ok"] = rep.ok
    data["witnesses"] = rep.witnesses
    text = " ".join(f"{k}={getattr(rep, k)}/{lim}" for k, lim in rep.LIMITS.items())
    text += "  ok" if rep.ok else "  EXCEEDED"
    text += f"\ntwigs: " + "; ".join("-".join(t.chain) for t in maximal_twigs(g))
    _out(args, data, text)
    if not rep.ok:
        raise SystemExit(1)


def cmd_aut(args):
    g = _graph_source(args).graph
    a = graph_automorphisms(g)
    _out(args, {"order": a.order, "generators": [dict(sorted(m.items())) for m in a.generators]}, f"order={a.order}")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    p = argparse.ArgumentParser(prog="qhp", description="Q-homology planes from line and conic arrangements.")
    p.add_argument("--version", action="version", version=f"qhp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        s = sub.add_parser(name, parents=[common], help=help)
        s.set_defaults(func=func)
        return s

    def row_opts(s, centers=True):
        s.add_argument("--row")
        s.add_argument("--xi", type=int, default=0, help="choice of ordering for multiply-meeting pairs")
        if centers:
            s.add_argument("--centers", nargs="+", default=[], metavar="U,W[,node]")
            s.add_argument("--weights", nargs="+", default=[], metavar="u/w")

    s = add("catalog", cmd_catalog, "list rows or show one")
    s.add_argument("action", choices=["list", "show"])
    s.add_argument("row", nargs="?")

    s = add("resolve", cmd_resolve, "minimal log resolution of an arrangement file")
    s.add_argument("--arrangement", required=True)
    s.add_argument("--dot")

    s = add("build", cmd_build, "boundary D' of a catalog row")
    s.add_argument("--row", required=True)
    s.add_argument("--xi", type=int, default=0)

    s = add("expand", cmd_expand, "expand a boundary at one or more centers")
    s.add_argument("--graph", required=True)
    s.add_argument("--center", action="append", required=True, metavar="U,W[,node]")
    s.add_argument("--weight", action="append", required=True, metavar="u/w")

    s = add("check", cmd_check, "Q-homology plane criterion")
    s.add_argument("--graph", required=True)
    s.add_argument("--records")

    s = add("h1", cmd_h1, "order of H_1 for a row, centers and weights")
    row_opts(s)

    s = add("detm", cmd_detm, "det m, numeric or symbolic")
    row_opts(s)
    s.add_argument("--symbolic", action="store_true")

    s = add("enumerate", cmd_enumerate, "all Q-homology planes of a row up to a weight height")
    row_opts(s)
    s.add_argument("--max-height", type=int, required=True)
    s.add_argument("--h1", type=int)
    s.add_argument("--zhp", action="store_true")
    s.add_argument("--bounds", action="store_true")

    s = add("zhp", cmd_zhp, "weights with a given H_1 order for a one-center row")
    s.add_argument("--row", required=True)
    s.add_argument("--xi", type=int, default=0)
    s.add_argument("--center", required=True)
    s.add_argument("--h1", type=int, default=1)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--bound", type=int, default=1000)

    for name, func, help in (("diagram", cmd_diagram, "DOT graph or EN diagram"),
                             ("bounds", cmd_bounds, "twig, core, branching and EN counts"),
                             ("aut", cmd_aut, "automorphisms of the weighted graph")):
        s = add(name, func, help)
        s.add_argument("--graph")
        row_opts(s)
        if name == "diagram":
            s.add_argument("--en", action="store_true")
    return p


def run(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
