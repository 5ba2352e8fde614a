"""Command-line front end: ``invlattice {analyze,classify,lattice,search,verify}``.

Exit codes: 0 success, 1 property violation, 2 parse error, 3 hypothesis
failure (non-split characteristic polynomial, non-invariant subspace, wrong
field), 4 cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from .classify import decompose_and_classify, is_invariant
from .exactla import DEFAULT_VECTOR_CAP, EnumerationTooLarge, Subspace
from .lattice import (DEFAULT_SUBSPACE_CAP, SubspaceLattice, enumerate_chinv, enumerate_hinv,
                      enumerate_invariant_subspaces, search_characteristic_not_hyperinvariant)
from .markedcalc import (NotAdmissible, LengthMismatch, SearchBudgetExceeded, as_tuple,
                         build_W_r, build_W_rU)
from .operator import NonSplitCharPoly, NotInvariant, decompose, jordan_structure
from .problem import ParseError, ProblemInput, fixture_names, load_fixture, load_problem
from .suite import SuiteReport, run_problem, run_random

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_HYPOTHESIS, EXIT_CAP = 0, 1, 2, 3, 4


class WrongField(ValueError):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def format_vector(v) -> str:
    terms = []
    for i, c in enumerate(np.asarray(v).tolist()):
        if c:
            terms.append(f"e{i + 1}" if c == 1 else f"{c}e{i + 1}")
    return "+".join(terms) or "0"


def format_subspace(x: Subspace) -> str:
    return "<" + ", ".join(format_vector(row) for row in x.basis) + ">"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _subspace_names(problem: ProblemInput) -> dict[Subspace, list[str]]:
    try:
        lat = enumerate_hinv(problem.operator)
    except NonSplitCharPoly:
        return {}
    return dict(zip(lat.elements, lat.labels))


# --- commands ------------------------------------------------------------------------

def cmd_analyze(problem: ProblemInput, args) -> tuple[int, dict, list[str]]:
    f = problem.operator
    comps = []
    lines = [f"GF({problem.p}), n = {f.n}"]
    for c in decompose(f):
        js = jordan_structure(c.nilpotent)
        gens = [c.vector_to_ambient(u) for u in js.generators]
        comps.append({"eigenvalue": c.eigenvalue, "dim": c.dim, "exponents": list(js.exponents),
                      "generators": [g.tolist() for g in gens]})
        lines.append(f"λ = {c.eigenvalue}, t = {js.exponents}, "
                     f"U = ({', '.join(format_vector(g) for g in gens)})")
    out = {"p": problem.p, "n": f.n, "components": comps}

    r = _parse_r(args.r) if args.r else problem.r
    if r is not None:
        if len(comps) != 1 or comps[0]["eigenvalue"] != 0:
            raise ParseError("--r needs a nilpotent operator")
        js = jordan_structure(f)
        try:
            rt = as_tuple(r, js.exponents)
            w_u, w = build_W_rU(f, js, rt), build_W_r(f, rt)
        except (LengthMismatch, NotAdmissible) as exc:
            raise ParseError(str(exc)) from exc
        out["r"] = {"r": list(rt.r), "monotone": rt.monotone, "W_rU": w_u.rows(),
                    "W_r": w.rows(), "equal": w_u == w}
        lines.append(f"r = {rt.r}: monotone = {rt.monotone}, W(r,U) = {format_subspace(w_u)}, "
                     f"W(r) = {format_subspace(w)}")
    return EXIT_OK, out, lines


def _parse_r(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise ParseError(f"--r expects comma-separated integers, got {text!r}") from exc


def _select_subspaces(problem: ProblemInput, name: str | None) -> dict[str, Subspace]:
    if name is None:
        if not problem.subspaces:
            raise ParseError("input defines no subspaces")
        return dict(sorted(problem.subspaces.items()))
    if name not in problem.subspaces:
        raise ParseError(f"no subspace named {name!r}; have {sorted(problem.subspaces)}")
    return {name: problem.subspaces[name]}


def cmd_classify(problem: ProblemInput, args) -> tuple[int, dict, list[str]]:
    f = problem.operator
    decompose(f)
    names = _subspace_names(problem)
    method = "enumerate" if args.force_bruteforce else "auto"
    code, out, lines = EXIT_OK, {}, []
    for key, x in _select_subspaces(problem, args.subspace).items():
        if not is_invariant(f, x):
            entry = {"invariant": False, "marked": None, "characteristic": None,
                     "hyperinvariant": None, "witnesses": {}}
            code = EXIT_HYPOTHESIS
        else:
            entry = decompose_and_classify(f, x, characteristic_method=method,
                                           cap=args.cap_vectors).to_dict()
        entry["rref"] = x.rows()
        entry["names"] = names.get(x, [])
        out[key] = entry
        flags = " ".join(f"{k}={_flag(entry[k])}"
                         for k in ("invariant", "marked", "characteristic", "hyperinvariant"))
        alias = f" [{', '.join(entry['names'])}]" if entry["names"] else ""
        lines.append(f"{key} = {format_subspace(x)}{alias}: {flags}")
        for wk, wv in sorted(entry["witnesses"].items()):
            lines.append(f"  {wk}: {json.dumps(wv, sort_keys=True)}")
    return code, {"subspaces": out}, lines


def _flag(v) -> str:
    return {True: "yes", False: "no", None: "unknown"}[v]


def _lattice_report(lat: SubspaceLattice) -> list[str]:
    lines = [f"{lat.kind}: {len(lat)} subspaces, {len(lat.hasse_edges)} covering pairs, "
             f"closed = {lat.closed}"]
    for i, x in enumerate(lat.elements):
        tags = ", ".join(lat.labels[i])
        lines.append(f"  [{i}] dim {x.dim} {format_subspace(x)}" + (f"  {tags}" if tags else ""))
    return lines


def cmd_lattice(problem: ProblemInput, args) -> tuple[int, dict, list[str]]:
    f = problem.operator
    if args.kind == "hinv":
        lat = enumerate_hinv(f)
    elif args.kind == "chinv":
        method = "enumerate" if args.force_bruteforce else "auto"
        lat = enumerate_chinv(f, method=method, cap=args.cap_subspaces)
    else:
        names = _subspace_names(problem)
        lat = SubspaceLattice.build(
            ((x, names.get(x, [])) for x in enumerate_invariant_subspaces(f, cap=args.cap_subspaces)),
            "Inv")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(lat.to_dot(args.kind))
    return EXIT_OK, lat.to_dict(), _lattice_report(lat)


def cmd_search(problem: ProblemInput, args) -> tuple[int, dict, list[str]]:
    f = problem.operator
    if problem.p != 2 and not args.force:
        raise WrongField(
            f"search needs p = 2: over GF({problem.p}) every characteristic subspace is "
            "hyperinvariant, so the result is empty (pass --force to check anyway)")
    found = search_characteristic_not_hyperinvariant(f, method="group", cap=args.cap_subspaces)
    lines = [f"{len(found)} characteristic, non-hyperinvariant subspace(s)"]
    lines += [f"  dim {x.dim} {format_subspace(x)}" for x in found]
    return EXIT_OK, {"found": [x.rows() for x in found]}, lines


def cmd_verify(problem: ProblemInput | None, args) -> tuple[int, dict, list[str]]:
    caps = {"cap_vectors": args.cap_vectors, "cap_subspaces": args.cap_subspaces,
            "force_bruteforce": args.force_bruteforce}
    report = SuiteReport()
    if args.random:
        p, n, count = args.random
        run_random(p, n, count, args.seed, report, **caps)
    if problem is not None:
        run_problem(problem, report, label=problem.name, **caps)
    if problem is None and not args.random:
        for name in fixture_names():
            fx = load_fixture(name)
            if fx.expect is None or name.endswith("_mislabelled"):
                continue
            run_problem(fx, report, label=name, **caps)
    return (EXIT_OK if report.ok else EXIT_VIOLATION), report.to_dict(), report.lines()


COMMANDS = {"analyze": cmd_analyze, "classify": cmd_classify, "lattice": cmd_lattice,
            "search": cmd_search, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(prog="invlattice",
                            description="Classify invariant subspaces of a matrix over GF(p).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="problem JSON file, or the name of a bundled fixture")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--cap-vectors", type=int, default=DEFAULT_VECTOR_CAP)
    common.add_argument("--cap-subspaces", type=int, default=DEFAULT_SUBSPACE_CAP)
    common.add_argument("--force-bruteforce", action="store_true",
                        help="use full enumeration where a shortcut exists")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("analyze", parents=[common], help="eigenvalues, Jordan exponents, generators")
    p.add_argument("--r", help='exponent tuple such as "1,0"')
    p = sub.add_parser("classify", parents=[common], help="classify named subspaces")
    p.add_argument("--subspace", help="name of the subspace (default: all)")
    p = sub.add_parser("lattice", parents=[common], help="list a lattice, optionally as DOT")
    p.add_argument("--dot", help="write the Hasse diagram to this file")
    p.add_argument("--kind", choices=("hinv", "chinv", "inv"), default="hinv")
    p = sub.add_parser("search", parents=[common],
                       help="characteristic subspaces that are not hyperinvariant")
    p.add_argument("--force", action="store_true", help="run even when p != 2")
    p = sub.add_parser("verify", parents=[common], help="run the property suite")
    p.add_argument("--random", nargs=3, type=int, metavar=("P", "N", "COUNT"))
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        problem = load_problem(args.input) if args.input else None
        if problem is None and args.command != "verify":
            raise ParseError("--input is required")
        code, data, lines = COMMANDS[args.command](problem, args)
    except ParseError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NonSplitCharPoly, NotInvariant, WrongField) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (EnumerationTooLarge, SearchBudgetExceeded) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CAP
    print(_dump(data) if args.json else "\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
