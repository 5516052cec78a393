"""Regenerate the bundled corpus under src/resgraph/corpus/."""

from pathlib import Path

from resgraph.document import serialize
from resgraph.graph import ResolutionGraph

OUT = Path(__file__).resolve().parents[1] / "src" / "resgraph" / "corpus"


def chain(weights):
    ids = [f"C{i}" for i in range(1, len(weights) + 1)]
    return list(zip(ids, weights)), list(zip(ids, ids[1:]))


def graphs():
    for n in range(1, 9):
        yield f"A{n}", ResolutionGraph.build(*chain([-2] * n))
    for n in range(4, 9):
        # leaves C1, C2 on C3, then the chain C3 - ... - Cn
        vs = [(f"C{i}", -2) for i in range(1, n + 1)]
        es = [("C1", "C3"), ("C2", "C3")] + [(f"C{i}", f"C{i + 1}") for i in range(3, n)]
        yield f"D{n}", ResolutionGraph.build(vs, es)
    for n in (6, 7, 8):
        vs, es = chain([-2] * (n - 1))
        yield f"E{n}", ResolutionGraph.build(vs + [(f"C{n}", -2)], es + [("C3", f"C{n}")])
    yield "example5-1", ResolutionGraph.build(
        [("C1", -2), ("C2", -2), ("C3", -2), ("C4", -3)],
        [("C1", "C2"), ("C1", "C3"), ("C1", "C4")],
    )
    yield "example5-2", ResolutionGraph.build(
        [("C1", -2), ("C2", -2), ("C3", -2), ("C4", -2), ("C5", -3)],
        [("C1", "C2"), ("C1", "C3"), ("C3", "C4"), ("C1", "C5")],
    )
    for n in range(2, 8):
        yield f"single-{n}", ResolutionGraph.build([("C1", -n)])


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for name, g in graphs():
        (OUT / f"{name}.json").write_text(serialize(g, name), encoding="utf-8")
        print(name)
