"""Command-line interface.  Exit codes: 0 ok, 2 invalid input, 3 budget exceeded."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import io
from .errors import BudgetExceeded, InvalidInput

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


def _emit(obj: Any, fmt: str, text: str | None = None) -> None:
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True))
        return
    if text is not None:
        print(text)
    elif isinstance(obj, dict):
        for k, v in obj.items():
            print(f"{k}\t{json.dumps(v) if isinstance(v, (list, dict)) else v}")
    else:
        print(obj)


# --- fan ---------------------------------------------------------------------------


def _cmd_fan_build(a) -> dict:
    from .fan import fan_of_building_set

    if a.building_set:
        f = fan_of_building_set(io.read_building_set(a.building_set))
    elif a.graph:
        from .combinatorics import graphical_building_set

        f = fan_of_building_set(graphical_building_set(io.read_graph(a.graph)))
    elif a.cubeahedron:
        from .cubeahedra import cubeahedron_fan

        f = cubeahedron_fan(io.read_graph(a.cubeahedron))
    else:
        from .roots import root_datum, weyl_fan

        f = weyl_fan(root_datum(a.root_system))
    if a.plot:
        from .plotting import plot_fan_2d

        plot_fan_2d(f, a.plot)
    return f.to_json()


def _cmd_fan_check(a) -> dict:
    from .fan import fan_report

    return fan_report(io.read_fan(a.file))


# --- classify ------------------------------------------------------------------------


def _cmd_classify_graph(a) -> dict:
    from .criteria import Classification, cubeahedron_fano, cubeahedron_weak_fano, graph_fano, graph_weak_fano

    g = io.read_graph(a.file)
    if a.cubeahedron:
        c = cubeahedron_weak_fano(g)
        c = Classification(cubeahedron_fano(g), c.weak_fano, c.witness)
    else:
        c = graph_weak_fano(g)
        c = Classification(graph_fano(g), c.weak_fano, c.witness)
    return c.to_json()


def _cmd_classify_building_set(a) -> dict:
    from .criteria import building_set_fano

    return building_set_fano(io.read_building_set(a.file)).to_json()


def _cmd_classify_root_system(a) -> dict:
    from .criteria import root_system_fano_weak_fano
    from .roots import RootDatum, root_datum

    if os.path.exists(a.name):
        r = RootDatum.from_matrix(io.read_cartan(a.name))
    else:
        r = root_datum(a.name)
    return root_system_fano_weak_fano(r).to_json()


# --- polytopes / digraphs ----------------------------------------------------------------


def _polytope_from_file(path: str):
    from .polytopes import hull

    dim, pts = io.read_points(path)
    return hull(pts, dim=dim)


def _cmd_polytope_from_fan(a) -> dict:
    from .polytopes import polytope_of_weak_fano_fan

    p = polytope_of_weak_fano_fan(io.read_fan(a.file))
    return p.to_json()


def _cmd_polytope_check(a) -> dict:
    from .polytopes import is_pseudo_symmetric, is_reflexive, is_smooth_fano

    p = _polytope_from_file(a.file)
    smooth = is_smooth_fano(p)
    return {
        "reflexive": is_reflexive(p),
        "smooth_fano": smooth,
        "pseudo_symmetric": is_pseudo_symmetric(p) if smooth else None,
        "vertices": len(p.vertices),
        "facets": len(p.facets),
    }


def _cmd_polytope_normal_form(a) -> dict:
    from .polytopes import normal_form

    return {"normal_form": normal_form(_polytope_from_file(a.file)).decode()}


def _cmd_digraph_polytope(a) -> dict:
    from .polytopes import digraph_polytope, is_reflexive, is_smooth_fano

    p = digraph_polytope(io.read_digraph(a.file))
    out = p.to_json()
    out.update(reflexive=is_reflexive(p), smooth_fano=is_smooth_fano(p))
    return out


def _cmd_digraph_realize(a) -> dict:
    from .polytopes import find_digraph_realization

    g = find_digraph_realization(io.read_building_set(a.building_set), max_nodes=a.max_nodes)
    if g is None:
        return {"found": False, "digraph": None}
    return {"found": True, "digraph": g.to_json()}


# --- 2-Fano ------------------------------------------------------------------------------------


def _cmd_two_fano(a) -> dict:
    from .chern2 import two_fano_report

    return two_fano_report(io.read_building_set(a.building_set)).to_json()


# --- enumeration -----------------------------------------------------------------------------------


def _write_outputs(report, out_dir: str | None) -> None:
    if not out_dir:
        return
    from .plotting import plot_table

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, f"{report.name}.tsv"), "w") as fh:
        fh.write(report.to_text() + "\n")
    plot_table(report, os.path.join(out_dir, f"{report.name}.png"))


def _cmd_enumerate(a):
    from . import enumeration as en

    if a.table == "table1":
        report = en.table1()
    elif a.table == "table3":
        report = en.table3()
    else:
        report = en.table2(a.max_dim, extended=a.extended, checkpoint=a.checkpoint, jobs=a.jobs)
    _write_outputs(report, a.output_dir)
    return report.to_json(), report.to_text()


def _cmd_cross_validate(a):
    from .enumeration import cross_validate

    corpus = a.corpus.replace("≤", "<=")
    res = cross_validate(corpus, jobs=a.jobs)
    if a.output_dir:
        os.makedirs(a.output_dir, exist_ok=True)
        name = corpus.replace("<=", "_le")
        with open(os.path.join(a.output_dir, f"cross_validate_{name}.json"), "w") as fh:
            json.dump(res, fh, indent=1, sort_keys=True)
    text = f"{res['corpus']}\tchecked={res['checked']}\tdisagreements={len(res['disagreements'])}"
    return res, text


# --- parser ----------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")

    # no set_defaults here: parent actions are shared, so a default would clobber the top-level value
    p = argparse.ArgumentParser(prog="nestfan", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def leaf(parent, name, fn, **kw):
        sp = parent.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=fn)
        return sp

    fan = sub.add_parser("fan").add_subparsers(dest="action", required=True)
    b = leaf(fan, "build", _cmd_fan_build, help="construct a fan as JSON")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--building-set", metavar="FILE")
    src.add_argument("--graph", metavar="FILE", help="graph associahedron")
    src.add_argument("--cubeahedron", metavar="FILE")
    src.add_argument("--root-system", metavar="TYPE")
    b.add_argument("--plot", metavar="PNG", help="draw a 2-D fan")
    leaf(fan, "check", _cmd_fan_check).add_argument("file")

    cl = sub.add_parser("classify").add_subparsers(dest="action", required=True)
    g = leaf(cl, "graph", _cmd_classify_graph)
    g.add_argument("file")
    g.add_argument("--cubeahedron", action="store_true")
    leaf(cl, "building-set", _cmd_classify_building_set).add_argument("file")
    leaf(cl, "root-system", _cmd_classify_root_system).add_argument("name", help="type such as A2xB3, or a Cartan file")

    po = sub.add_parser("polytope").add_subparsers(dest="action", required=True)
    leaf(po, "from-fan", _cmd_polytope_from_fan).add_argument("file")
    leaf(po, "check", _cmd_polytope_check).add_argument("file")
    leaf(po, "normal-form", _cmd_polytope_normal_form).add_argument("file")

    dg = sub.add_parser("digraph").add_subparsers(dest="action", required=True)
    leaf(dg, "polytope", _cmd_digraph_polytope).add_argument("file")
    r = leaf(dg, "realize", _cmd_digraph_realize)
    r.add_argument("--building-set", metavar="FILE", required=True)
    r.add_argument("--max-nodes", type=int, default=5)

    ch = sub.add_parser("check").add_subparsers(dest="action", required=True)
    leaf(ch, "two-fano", _cmd_two_fano).add_argument("--building-set", metavar="FILE", required=True)

    e = leaf(sub, "enumerate", _cmd_enumerate)
    e.add_argument("table", choices=("table1", "table2", "table3"))
    e.add_argument("--max-dim", type=int, default=4)
    e.add_argument("--extended", action="store_true", help="allow the dimension-5 run")
    e.add_argument("--checkpoint", metavar="PATH")
    e.add_argument("--output-dir", metavar="DIR", help="write TSV and PNG here")

    cv = leaf(sub, "cross-validate", _cmd_cross_validate)
    cv.add_argument("corpus", help="graphs<=5 | building-sets<=4 | cubeahedra<=4 | roots<=3")
    cv.add_argument("--output-dir", metavar="DIR")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.format = getattr(args, "format", "json")
    args.jobs = getattr(args, "jobs", 1)
    try:
        result = args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if isinstance(result, tuple):
        _emit(result[0], args.format, result[1])
    else:
        _emit(result, args.format)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
