"""Command-line front end: one tool, many verbs, JSON on standard output.

Subcommands cover the whole pipeline: triangulation inspection (info,
faces, dual, hasse, subdivide), graph encoding (encode), tree
decompositions (tw check|make|lift-encoded|lift-hasse), formula checking
and solving (mso check|opt|eval), and the three applications (taut,
morse, tv).  Every run prints a single JSON document and exits 0, or a
machine-readable error object and exits 1.
"""

import argparse
import json
import random
import sys

from . import mso
from .graphs import encode_simple, encoded_to_json, parse_graph
from .hasse import build_hasse, hasse_to_json
from .morse import morse_optimal
from .taut import taut_bruteforce, taut_dp
from .treedecomp import (decompose, lift_to_encoded, lift_to_hasse,
                         parse_decomposition, validate_decomposition)
from .triangulation import (compute_skeleton, dual_graph, load_and_validate,
                            subdivide_simplex)
from .tv import load_tv_table, tv_bruteforce, tv_dp, unit_table


class CliError(ValueError):
    pass


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError("cannot read %s: %s" % (path, exc.strerror))


def _load_tri(path):
    t = load_and_validate(_read(path))
    return t, compute_skeleton(t)


def _load_td(args):
    if not getattr(args, "td", None):
        return None
    return parse_decomposition(_read(args.td))


def _td_doc(td):
    return {
        "width": td.width,
        "bags": {str(x): sorted(td.bags[x]) for x in td.tree_nodes},
        "links": [list(l) for l in td.tree_links],
    }


def _parse_sort(text):
    parts = text.split()
    if parts[0] in ("node", "arc", "nodeset", "arcset") and len(parts) == 1:
        return (parts[0],)
    if parts[0] in ("face", "faceset") and len(parts) == 2:
        return (parts[0], int(parts[1]))
    raise CliError("bad sort %r" % text)


def _parse_signature(text):
    parts = text.split()
    if len(parts) != 2 or parts[0] not in ("graph", "hasse", "tri"):
        raise CliError("signature must be 'graph k', 'hasse d' or 'tri d'")
    return (parts[0], int(parts[1]))


def _load_structure(path, signature):
    if signature[0] == "tri":
        return _load_tri(path)
    if signature[0] == "hasse":
        t, sk = _load_tri(path)
        return build_hasse(t, sk)
    return parse_graph(_read(path))


def _load_problem(path, extremum):
    doc = json.loads(_read(path))
    formula = mso.parse_formula(doc["formula"])
    names = tuple((n, _parse_sort(s)) for n, s in doc["free_vars"])
    if extremum:
        return mso.ExtremumProblem(formula, names,
                                   tuple(doc["coefficients"]))
    return names, formula, doc.get("mode", "multiplicative")


def cmd_info(args):
    t, sk = _load_tri(args.input)
    dg = dual_graph(t)
    return {
        "dim": t.dim,
        "simplices": t.n,
        "closed": t.is_closed(),
        "f_vector": list(sk.f_vector),
        "self_identified": sk.self_identified,
        "dual_degrees": [dg.degree(v) for v in dg.nodes],
    }


def cmd_faces(args):
    t, sk = _load_tri(args.input)
    out = []
    for i in range(t.dim + 1):
        out.append([{"id": f.id,
                     "instances": [[s, list(e)] for s, e in f.instances],
                     "self_identified": len(f.instances) > len(
                         {(s, frozenset(e)) for s, e in f.instances})}
                    for f in sk.faces[i]])
    return {"dim": t.dim, "faces": out}


def cmd_dual(args):
    t, _ = _load_tri(args.input)
    dg = dual_graph(t)
    return {"nodes": list(dg.nodes), "arcs": [list(a) for a in dg.arcs]}


def cmd_hasse(args):
    t, sk = _load_tri(args.input)
    return json.loads(hasse_to_json(build_hasse(t, sk)))


def cmd_subdivide(args):
    t, _ = _load_tri(args.input)
    out = subdivide_simplex(t, args.simplex)
    return {"dim": out.dim, "simplices": out.n, "text": out.to_text()}


def cmd_encode(args):
    g = parse_graph(_read(args.input))
    if not hasattr(g, "colours"):
        raise CliError("encode needs an edge-coloured graph")
    return json.loads(encoded_to_json(encode_simple(g)))


def cmd_tw(args):
    if args.action == "make":
        g = parse_graph(_read(args.input))
        td = decompose(g, mode="exact" if args.exact else "heuristic")
        return _td_doc(td)
    if args.action == "check":
        td = _load_td(args)
        if td is None:
            raise CliError("tw check needs --td")
        g = parse_graph(_read(args.input))
        ok, report = validate_decomposition(g, td)
        return {"valid": ok, "violation": report and
                {"condition": report["condition"],
                 "witness": repr(report["witness"])}}
    if args.action == "lift-encoded":
        g = parse_graph(_read(args.input))
        if not hasattr(g, "colours"):
            raise CliError("lift-encoded needs an edge-coloured graph")
        td = _load_td(args) or decompose(g.node_skeleton())
        out = lift_to_encoded(td, g, encode_simple(g))
        return _td_doc(out)
    # lift-hasse
    t, sk = _load_tri(args.input)
    td = _load_td(args) or decompose(dual_graph(t))
    out = lift_to_hasse(td, t, sk, build_hasse(t, sk))
    return _td_doc(out)


def cmd_mso(args):
    if args.action == "check":
        sig = _parse_signature(args.signature)
        f = mso.parse_formula(_read(args.formula), signature=sig)
        return {"well_sorted": True, "formula": mso.formula_to_text(f)}
    sig = _parse_signature(args.signature)
    structure = _load_structure(args.input, sig)
    if args.action == "eval":
        if args.problem:
            names, formula, mode = _load_problem(args.problem, extremum=False)
            st = mso.as_structure(structure)
            weights = tuple({x: 1 for x in
                             st.carrier(mso.element_sort_of(s))}
                            for _, s in names)
            prob = mso.EvaluationProblem(formula, names, mode, weights)
            val = mso.solve_evaluation(structure, prob, budget=args.budget)
            val = complex(val)
            return {"value": [val.real, val.imag]}
        f = mso.parse_formula(_read(args.formula), signature=sig)
        return {"value": mso.evaluate(structure, f)}
    # opt
    prob = _load_problem(args.problem, extremum=True)
    best = mso.solve_extremum(structure, prob, budget=args.budget)
    if best is None:
        return {"satisfiable": False}
    val, sets = best
    return {"satisfiable": True, "optimum": str(val),
            "witness": [sorted(map(repr, s)) for s in sets]}


def cmd_taut(args):
    t, sk = _load_tri(args.input)
    if args.oracle:
        choices = taut_bruteforce(t, sk)
        backend = "bruteforce"
    else:
        td = _load_td(args) or decompose(dual_graph(t))
        choices = taut_dp(t, sk, td)
        backend = "dp"
    return {"taut": None if choices is None else list(choices),
            "backend": backend}


def cmd_morse(args):
    t, sk = _load_tri(args.input)
    h = build_hasse(t, sk)
    c, M = morse_optimal(h)
    return {"c_min": c, "matching_size": len(M)}


def cmd_tv(args):
    t, sk = _load_tri(args.input)
    table = load_tv_table(_read(args.table)) if args.table \
        else unit_table(args.r)
    if args.oracle:
        val = tv_bruteforce(t, sk, args.r, table)
        backend = "bruteforce"
    else:
        td = _load_td(args) or decompose(dual_graph(t))
        val = tv_dp(t, sk, args.r, table, td)
        backend = "dp"
    val = complex(val)
    return {"value": [val.real, val.imag], "backend": backend}


def build_parser():
    p = argparse.ArgumentParser(prog="triwidth")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-9)
    sub = p.add_subparsers(dest="command", required=True)

    def tri_cmd(name, fn):
        q = sub.add_parser(name)
        q.add_argument("input")
        q.set_defaults(fn=fn)
        return q

    tri_cmd("info", cmd_info)
    tri_cmd("faces", cmd_faces)
    tri_cmd("dual", cmd_dual)
    tri_cmd("hasse", cmd_hasse)
    q = tri_cmd("subdivide", cmd_subdivide)
    q.add_argument("--simplex", type=int, default=0)
    tri_cmd("encode", cmd_encode)

    q = sub.add_parser("tw")
    q.add_argument("action",
                   choices=["check", "make", "lift-encoded", "lift-hasse"])
    q.add_argument("input")
    q.add_argument("--td")
    q.add_argument("--exact", action="store_true")
    q.set_defaults(fn=cmd_tw)

    q = sub.add_parser("mso")
    q.add_argument("action", choices=["check", "opt", "eval"])
    q.add_argument("--signature", required=True)
    q.add_argument("--formula")
    q.add_argument("--problem")
    q.add_argument("--budget", type=int, default=mso.DEFAULT_BUDGET)
    q.add_argument("input", nargs="?")
    q.set_defaults(fn=cmd_mso)

    q = tri_cmd("taut", cmd_taut)
    q.add_argument("--td")
    q.add_argument("--oracle", action="store_true")

    tri_cmd("morse", cmd_morse)

    q = tri_cmd("tv", cmd_tv)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--table")
    q.add_argument("--td")
    q.add_argument("--oracle", action="store_true")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    random.seed(args.seed)
    try:
        doc = args.fn(args)
    except (ValueError, RuntimeError) as exc:
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(err, indent=2))
        return 1
    print(json.dumps(doc, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
