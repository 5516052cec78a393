"""Command line interface: ``resgraph analyze|cover|blowup|classify|enumerate``.

Exit status is 0 on success, 1 when an analysis refuses its input (or a
``--check`` finds a violation) and 2 for usage and parse errors.  Results go
to standard output, diagnostics to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from math import lcm
from typing import Any, Sequence

from .blowup import blow_up, parse_center, verify_transport
from .classify import ClassificationError, continuant, dynkin_detect, enumerate_graphs, enumerate_profiles, shape
from .cover import CaseKind, Verdict, cover_step, cover_verdict, is_prime, prime_factors
from .discrepancy import (
    AnalysisError,
    NotLogTerminalError,
    PairClass,
    classify_pair,
    cycle_numbers,
    discrepancies,
    fundamental_cycle,
    rationality_check,
)
from .document import GraphDocument, ParseError, load, serialize_document
from .graph import GraphError, ResolutionGraph, validate

EXIT_OK, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2


def q(x: Fraction | int | None) -> str | None:
    """A rational as an exact ``"num/den"`` string for machine output (``"0/1"`` for zero)."""
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def h(x: Fraction | int) -> str:
    """A rational for the human tables: ``1/2``, ``0``, ``-1``."""
    return str(Fraction(x))


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _emit(data: dict[str, Any], as_json: bool, human: str) -> None:
    if as_json:
        print(json.dumps(data, indent=2))
    else:
        print(human)


def _cycle_text(z: dict[str, int]) -> str:
    return " + ".join(f"{m}{v}" if m != 1 else v for v, m in z.items())


# -- analyze ---------------------------------------------------------------


def cmd_analyze(doc: GraphDocument, args: argparse.Namespace) -> int:
    g = doc.graph
    report = validate(g)
    if not report.is_negative_definite:
        # the solve below refuses; say what validation found first
        for message in report.messages:
            print(f"resgraph: note: {message}", file=sys.stderr)
    profile = discrepancies(g)
    pclass = classify_pair(profile)
    bare = g.without_boundary()
    z = fundamental_cycle(bare)
    nums = cycle_numbers(bare, z)
    try:
        check = rationality_check(g)
        inequality: bool | None = check.holds
        multiplicity = check.multiplicity
    except NotLogTerminalError:
        inequality, multiplicity = None, None

    data = {
        "name": doc.name,
        "validation": {
            "negative_definite": report.is_negative_definite,
            "tree": report.is_tree,
            "minimal": report.is_minimal,
            "messages": list(report.messages),
        },
        "coefficients": {k: q(v) for k, v in profile.coefficients.items()},
        "index": profile.index,
        "index_is_numerical_only": profile.numerical_only,
        "class": pclass.value,
        "fundamental_cycle": dict(z.multiplicities),
        "z_squared": nums.z_squared,
        "z_dot_k": nums.z_dot_k,
        "p_a": q(nums.p_a),
        "multiplicity": multiplicity,
        "rationality_inequality": inequality,
    }
    rows = [["vertex", "self", "boundary", "a_j"]]
    rows += [[v.id, str(v.self_int), str(g.boundary_of(v.id)), h(profile[v.id])] for v in g.vertices]
    yes = {True: "yes", False: "no"}
    human = [
        f"graph {doc.name or '(unnamed)'}: {len(g)} vertices, {len(g.edges)} edges",
        f"negative definite: {yes[report.is_negative_definite]}  tree: {yes[report.is_tree]}"
        f"  minimal: {yes[report.is_minimal]}",
        *[f"  note: {m}" for m in report.messages],
        "",
        _table(rows),
        "",
        f"index: {profile.index}" + (" (numerical only: not log terminal)" if profile.numerical_only else ""),
        f"class: {pclass}",
        f"fundamental cycle: {_cycle_text(z.multiplicities)}" + (" (boundary ignored)" if g.has_boundary else ""),
        f"Z^2 = {nums.z_squared}  Z.K = {nums.z_dot_k}  p_a = {h(nums.p_a)}",
        f"multiplicity: {multiplicity if multiplicity is not None else 'n/a'}",
        "Z^2 + Z.K < 0: " + ("n/a (not log terminal)" if inequality is None else yes[inequality]),
    ]
    _emit(data, args.json, "\n".join(human))
    return EXIT_OK


# -- cover -----------------------------------------------------------------


def cmd_cover(doc: GraphDocument, args: argparse.Namespace) -> int:
    g = doc.graph
    p = args.char
    profile = discrepancies(g)
    report = cover_verdict(g, profile, p)
    scaled = profile.scaled()
    case_rows = []
    for vid in g.ids:
        c = report.cases.get(vid)
        case_rows.append(
            {
                "vertex": vid,
                "a": q(profile[vid]),
                "r_a": scaled[vid],
                "residue": report.residues[vid] if report.residues else None,
                "case": c.kind.value if c else None,
                "value": q(c.value) if c else None,
                "value_is_lower_bound": c.is_lower_bound if c else None,
                "pullback_multiplicity": c.pullback_multiplicity if c else None,
            }
        )
    data = {
        "name": doc.name,
        "p": p,
        "index": profile.index,
        "components": case_rows,
        "step_index_after": report.step_index_after,
        "boundary_reduced": report.boundary_reduced,
        "verdict": report.verdict.value,
        "failing": list(report.failing),
        "provenance": report.provenance,
    }
    rows = [["vertex", "a_j", "r*a_j", "m_j mod p", "case", "new coeff", "pi^*C mult"]]
    for r in case_rows:
        c = report.cases.get(r["vertex"])
        value = h(c.value) if c and c.value is not None else None
        if value is not None and r["value_is_lower_bound"]:
            value = f">= {value}"
        rows.append(
            [
                r["vertex"],
                h(profile[r["vertex"]]),
                str(r["r_a"]),
                "-" if r["residue"] is None else str(r["residue"]),
                r["case"] or "-",
                value or "-",
                "-" if r["pullback_multiplicity"] is None else str(r["pullback_multiplicity"]),
            ]
        )
    human = [f"graph {doc.name or '(unnamed)'}: characteristic {p}, index {profile.index}", ""]
    if report.verdict is not Verdict.TAME_CANONICAL:
        human += [_table(rows), ""]
        human.append(f"index after one step: {report.step_index_after}")
    human.append(f"verdict: {report.verdict}")
    if report.failing:
        human.append(f"failing vertices: {', '.join(report.failing)}")
    human.append(f"provenance: {report.provenance}")
    _emit(data, args.json, "\n".join(human))
    return EXIT_OK


# -- blowup ----------------------------------------------------------------


def cmd_blowup(doc: GraphDocument, args: argparse.Namespace) -> int:
    g = doc.graph
    center = args.at
    profile = discrepancies(g)
    new_graph, moved = blow_up(g, profile, center)
    new_doc = GraphDocument(f"{doc.name}+{center}" if doc.name else str(center), new_graph)
    text = serialize_document(new_doc)
    verified = verify_transport(g, center) if args.verify else None
    data = {
        "document": json.loads(text),
        "coefficients": {k: q(v) for k, v in moved.coefficients.items()},
        "index": moved.index,
        "verified": verified,
    }
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    rows = [["vertex", "self", "a_j"]] + [[v.id, str(v.self_int), h(moved[v.id])] for v in new_graph.vertices]
    human = [] if args.output else [text]
    human += [_table(rows), f"index: {moved.index}"]
    if verified is not None:
        human.append(f"transport verified against a fresh solve: {'yes' if verified else 'NO'}")
    _emit(data, args.json, "\n".join(human))
    return EXIT_OK if verified is not False else EXIT_REFUSED


# -- classify --------------------------------------------------------------


def cmd_classify(doc: GraphDocument, args: argparse.Namespace) -> int:
    res = shape(doc.graph)
    label = dynkin_detect(doc.graph)
    data = {
        "name": doc.name,
        "shape": res.shape.value,
        "center": res.center,
        "branches": [list(b) for b in res.branches],
        "branch_determinants": list(res.branch_determinants),
        "lt_type": res.lt_type,
        "dynkin": label,
    }
    human = [f"shape: {res.shape}"]
    if res.center:
        human.append(f"center: {res.center}")
        for branch in res.branches:
            det = continuant([doc.graph.self_int(v) for v in branch])
            human.append(f"  branch {' - '.join(branch)}: determinant {det}")
        human.append(f"branch determinants: {tuple(res.branch_determinants)}")
    human.append(f"log terminal type: {res.lt_type or 'none'}")
    human.append(f"Dynkin diagram: {label or 'none'}")
    _emit(data, args.json, "\n".join(human))
    return EXIT_OK


# -- enumerate -------------------------------------------------------------


def check_dichotomy(graph: ResolutionGraph, profile, char_min: int) -> list[str]:
    """Violations of the two-case dichotomy for every prime ``p >= char_min`` dividing the index."""
    problems = []
    for p in prime_factors(profile.index):
        if p < char_min:
            continue
        step = cover_step(graph, profile, p)
        for vid, case in step.cases.items():
            if case.kind not in (CaseKind.CASE1, CaseKind.CASE2):
                problems.append(f"p={p} {vid}: {case.kind}")
            elif case.value.numerator >= case.value.denominator:
                problems.append(f"p={p} {vid}: new coefficient {case.value} >= 1")
        if step.verdict is not Verdict.STEP_LOG_TERMINAL or step.step_index_after * p != profile.index:
            problems.append(f"p={p}: verdict {step.verdict}, index after {step.step_index_after}")
        elif not problems:
            # the new coefficients must have denominators dividing r/p
            new_index = lcm(*(case.value.denominator for case in step.cases.values()))
            if step.step_index_after % new_index:
                problems.append(f"p={p}: new denominators need index {new_index}, not dividing {step.step_index_after}")
    return problems


def cmd_enumerate(args: argparse.Namespace) -> int:
    lt_only = args.filter in ("lt", "canonical")
    total = checked = pairs = 0
    violations: list[str] = []
    for graph, profile in enumerate_profiles(args.max_vertices, args.min_weight, log_terminal_only=lt_only):
        pclass = classify_pair(profile)
        if args.filter == "canonical" and pclass is not PairClass.CANONICAL:
            continue
        total += 1
        if not args.quiet:
            weights = ",".join(str(w) for w in graph.weights)
            edges = ",".join(f"{u}-{v}" for u, v in graph.edges) or "-"
            print(f"{total}\t{len(graph)}\t{weights}\t{edges}\t{profile.index}\t{pclass}")
        if args.check == "dichotomy" and profile.is_log_terminal:
            checked += 1
            pairs += sum(1 for p in prime_factors(profile.index) if p >= args.char_min)
            for problem in check_dichotomy(graph, profile, args.char_min):
                violations.append(f"[{','.join(map(str, graph.weights))} | {graph.edges}] {problem}")
    print(f"graphs: {total}", file=sys.stderr)
    if args.check:
        print(f"dichotomy check: {checked} log terminal graphs, {pairs} (graph, p) pairs, "
              f"{len(violations)} violations", file=sys.stderr)
        for v in violations[:20]:
            print(f"  violation: {v}", file=sys.stderr)
        return EXIT_REFUSED if violations else EXIT_OK
    return EXIT_OK


# -- entry point -----------------------------------------------------------


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not a prime")
    return p


def _center(text: str):
    try:
        return parse_center(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resgraph", description="Exact analysis of resolution dual graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="discrepancies, index, class, fundamental cycle")
    p.add_argument("file", help="graph document path or corpus name (e.g. example5-1)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("cover", help="one degree-p step of the index 1 cover")
    p.add_argument("file")
    p.add_argument("--char", type=_prime, required=True, metavar="P", help="a prime characteristic")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("blowup", help="blow up a point and transport the discrepancies")
    p.add_argument("file")
    p.add_argument("--at", type=_center, required=True, metavar="CENTER", help="free:C1 | edge:C1,C2 | boundary:C3 | boundary:-")
    p.add_argument("-o", "--output", metavar="PATH", help="write the blown-up document here")
    p.add_argument("--verify", action="store_true", help="compare with a fresh solve")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("classify", help="chain/fork shape and Dynkin label")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("enumerate", help="negative definite trees up to isomorphism")
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--min-weight", type=int, required=True)
    p.add_argument("--filter", choices=["lt", "canonical"])
    p.add_argument("--check", choices=["dichotomy"])
    p.add_argument("--char-min", type=int, default=5)
    p.add_argument("-q", "--quiet", action="store_true", help="suppress the per-graph table")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "enumerate" and (args.max_vertices < 1 or args.min_weight > -2):
        parser.error("need --max-vertices >= 1 and --min-weight <= -2")
    try:
        with warnings.catch_warnings():
            # notes such as "boundary ignored" are part of the printed report
            warnings.simplefilter("ignore")
            if args.command == "enumerate":
                return cmd_enumerate(args)
            doc = load(args.file)
            handler = {
                "analyze": cmd_analyze,
                "cover": cmd_cover,
                "blowup": cmd_blowup,
                "classify": cmd_classify,
            }[args.command]
            return handler(doc, args)
    except (ParseError, FileNotFoundError) as exc:
        print(f"resgraph: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AnalysisError, ClassificationError, GraphError, ValueError) as exc:
        print(f"resgraph: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
