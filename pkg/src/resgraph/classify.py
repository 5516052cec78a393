"""Shape recognition for resolution graphs and exhaustive tree enumeration.

Log terminal graphs with empty boundary are chains or forks whose three
branch determinants form a platonic triple.  The enumerator below does not
assume that; it generates weighted trees up to isomorphism and filters them
by exact computation, so the shape law can be tested against it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, NamedTuple

from .discrepancy import AnalysisError, DiscrepancyProfile, discrepancies
from .graph import ResolutionGraph


class ClassificationError(AnalysisError):
    pass


class Shape(enum.Enum):
    CHAIN = "Chain"
    FORK = "Fork"
    OTHER = "Other"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ShapeResult:
    shape: Shape
    center: str | None = None
    branches: tuple[tuple[str, ...], ...] = ()
    branch_determinants: tuple[int, ...] = ()
    lt_type: str | None = None


def continuant(weights: list[int] | tuple[int, ...]) -> int:
    """``det(-M)`` for a chain with self-intersections ``weights``."""
    prev, cur = 1, 1
    first = True
    for w in weights:
        if first:
            prev, cur = 1, -w
            first = False
        else:
            prev, cur = cur, -w * cur - prev
    return cur


def _require_tree(graph: ResolutionGraph) -> None:
    if graph.has_boundary:
        raise ClassificationError("shape classification is defined for graphs with empty boundary")
    if not graph.is_tree():
        raise ClassificationError("shape classification needs a connected tree")


def _branches_from(graph: ResolutionGraph, center: int) -> list[list[int]]:
    adj = graph.adjacency
    branches = []
    for start in adj[center]:
        path = [start]
        prev, cur = center, start
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if len(nxt) != 1:
                break
            prev, cur = cur, nxt[0]
            path.append(cur)
        branches.append(path)
    return branches


_PLATONIC = {(2, 3, 3): "E6", (2, 3, 4): "E7", (2, 3, 5): "E8"}


def shape(graph: ResolutionGraph) -> ShapeResult:
    _require_tree(graph)
    degrees = [len(n) for n in graph.adjacency]
    if max(degrees) <= 2:
        return ShapeResult(Shape.CHAIN, lt_type="A")
    forks = [i for i, d in enumerate(degrees) if d >= 3]
    if len(forks) != 1 or degrees[forks[0]] != 3:
        return ShapeResult(Shape.OTHER)
    center = forks[0]
    ids = graph.ids
    weights = graph.weights
    branches = _branches_from(graph, center)
    dets = tuple(sorted(continuant([weights[j] for j in b]) for b in branches))
    if dets[0] == 2 and dets[1] == 2:
        lt: str | None = "D"
    else:
        lt = _PLATONIC.get(dets)
    return ShapeResult(
        Shape.FORK,
        center=ids[center],
        branches=tuple(tuple(ids[j] for j in b) for b in branches),
        branch_determinants=dets,
        lt_type=lt,
    )


def dynkin_detect(graph: ResolutionGraph) -> str | None:
    """ADE label (``"A4"``, ``"D5"``, ``"E6"``...) of an all ``-2`` tree, else ``None``."""
    if not graph.vertices or graph.has_boundary or not graph.is_tree():
        return None
    if any(w != -2 for w in graph.weights):
        return None
    n = len(graph)
    degrees = [len(a) for a in graph.adjacency]
    if max(degrees, default=0) <= 2:
        return f"A{n}"
    forks = [i for i, d in enumerate(degrees) if d >= 3]
    if len(forks) != 1 or degrees[forks[0]] != 3:
        return None
    lengths = tuple(sorted(len(b) for b in _branches_from(graph, forks[0])))
    if lengths[:2] == (1, 1):
        return f"D{n}"
    return {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}.get(lengths)


def canonical_form(graph: ResolutionGraph) -> tuple:
    """Isomorphism invariant of a labelled tree, complete for trees.

    The tree is rooted at its centroid(s) and encoded bottom-up with sorted
    child codes; vertex labels are ``(self_int, boundary)``.
    """
    if not graph.is_tree():
        raise ClassificationError("canonical forms are implemented for trees only")
    n = len(graph)
    adj = graph.adjacency
    labels = list(zip(graph.weights, graph.boundary_vector))

    def encode(root: int, avoid: int = -1) -> tuple:
        def rec(v: int, parent: int) -> tuple:
            return (labels[v],) + tuple(sorted(rec(u, v) for u in adj[v] if u != parent and u != avoid))

        return rec(root, avoid)

    # subtree sizes from vertex 0 to locate centroids
    order, parent = [0], [-1] * n
    for v in order:
        for u in adj[v]:
            if u != parent[v]:
                parent[u] = v
                order.append(u)
    size = [1] * n
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    centroids = []
    for v in range(n):
        largest = n - size[v]
        for u in adj[v]:
            if u != parent[v]:
                largest = max(largest, size[u])
        if 2 * largest <= n:
            centroids.append(v)
    if len(centroids) == 1:
        return ("uni", encode(centroids[0]))
    a, b = centroids
    return ("bi",) + tuple(sorted((encode(a, b), encode(b, a))))


# -- enumeration ---------------------------------------------------------------
#
# A rooted subtree T hanging below a parent p is summarized by exact rationals
#   eff   pivot at the root after eliminating T's other vertices
#   rhs   reduced right-hand side at the root
#   bound the root coefficient must stay below this for T to remain log terminal
#   thr   T stays log terminal iff the parent coefficient is < thr
# so that a_root = (rhs - a_p) / eff.  Coefficients only grow when vertices are
# added (the inverse of a negative definite tree matrix is entrywise
# negative and the right-hand side is <= 0 for weights <= -2), so both
# negative definiteness and log terminality pass to connected subtrees and can
# be used to prune partial assemblies.

_ONE = Fraction(1)


class _Rooted(NamedTuple):
    size: int
    eff: Fraction
    rhs: Fraction
    bound: Fraction
    thr: Fraction
    code: tuple


def _attach(eff: Fraction, rhs: Fraction, bound: Fraction, child: _Rooted):
    e = eff - 1 / child.eff
    r = rhs - child.rhs / child.eff
    return e, r, min(bound, child.thr)


def _acceptable(eff: Fraction, rhs: Fraction, bound: Fraction, lt_only: bool) -> bool:
    if eff >= 0:
        return False
    return not lt_only or rhs / eff < bound


def _build_pool(max_size: int, weights: list[int], lt_only: bool) -> list[_Rooted]:
    pool: list[_Rooted] = []
    for k in range(1, max_size + 1):
        fresh: list[_Rooted] = []
        for w in weights:

            def rec(start: int, budget: int, eff, rhs, bound, children: tuple) -> None:
                if budget == 0:
                    fresh.append(_Rooted(k, eff, rhs, bound, rhs - bound * eff, (w,) + children))
                    return
                for idx in range(start, len(pool)):
                    child = pool[idx]
                    if child.size > budget:
                        break
                    e, r, b = _attach(eff, rhs, bound, child)
                    if _acceptable(e, r, b, lt_only):
                        rec(idx, budget - child.size, e, r, b, children + (child.code,))

            rec(0, k - 1, Fraction(w), Fraction(w + 2), _ONE, ())
        # within one size, larger thresholds first: the attach test below can
        # then stop at the first child whose threshold is too small
        fresh.sort(key=lambda t: (-t.thr, t.code))
        pool.extend(fresh)
    return pool


def _graph_from_code(code: tuple, extra: tuple | None = None) -> ResolutionGraph:
    weights: list[int] = []
    parents: list[int] = []

    def walk(node: tuple, parent: int) -> None:
        k = len(weights)
        weights.append(node[0])
        parents.append(parent)
        for child in node[1:]:
            walk(child, k)

    walk(code, -1)
    if extra is not None:
        walk(extra, 0)
    return ResolutionGraph._from_tree_walk(weights, parents)


class _Packed(NamedTuple):
    """A pool entry with its summary as integer (numerator, positive denominator) pairs."""

    size: int
    en: int
    ed: int
    rn: int
    rd: int
    bn: int
    bd: int
    tn: int
    td: int
    code: tuple


def _pack(t: _Rooted) -> _Packed:
    return _Packed(
        t.size,
        t.eff.numerator, t.eff.denominator,
        t.rhs.numerator, t.rhs.denominator,
        t.bound.numerator, t.bound.denominator,
        t.thr.numerator, t.thr.denominator,
        t.code,
    )


def _attach_packed(en: int, ed: int, rn: int, rd: int, bn: int, bd: int, c: _Packed):
    # integer-pair version of _attach; c.en < 0
    q = -c.en
    en, ed = en * q + c.ed * ed, ed * q
    rn, rd = rn * c.rd * q + c.rn * c.ed * rd, rd * c.rd * q
    g = gcd(en, ed)
    en, ed = en // g, ed // g
    g = gcd(rn, rd)
    rn, rd = rn // g, rd // g
    if c.tn * bd < bn * c.td:
        bn, bd = c.tn, c.td
    return en, ed, rn, rd, bn, bd


def _packed_ok(en: int, ed: int, rn: int, rd: int, bn: int, bd: int, lt_only: bool) -> bool:
    if en >= 0:
        return False
    # rhs/eff < bound, multiplied through by rd*en*bd < 0
    return not lt_only or rn * ed * bd > bn * rd * en


def _thr_at_most_alpha(c: _Packed, en: int, ed: int, rn: int, rd: int) -> bool:
    # c.thr <= rhs/eff, multiplied through by c.td*rd*en < 0
    return c.tn * rd * en >= rn * ed * c.td


def _trees_of_size(n: int, pool: list[_Packed], weights: list[int], lt_only: bool) -> Iterator[tuple]:
    """Yield ``(code, extra)`` for every tree on ``n`` vertices passing the filter.

    Trees with a unique centroid are rooted there (every branch has at most
    ``(n-1)//2`` vertices); trees with two centroids are an unordered pair of
    rooted halves of size ``n/2``, joined at their roots.  Each isomorphism
    class appears once.
    """
    half = (n - 1) // 2
    group_end = [0] * len(pool)
    for i in range(len(pool) - 1, -1, -1):
        nxt = i + 1
        group_end[i] = group_end[nxt] if nxt < len(pool) and pool[nxt].size == pool[i].size else nxt

    for w in weights:

        def rec(start: int, budget: int, state: tuple, children: tuple) -> Iterator[tuple]:
            if budget == 0:
                yield (w,) + children, None
                return
            en, ed, rn, rd = state[:4]
            idx = start
            while idx < len(pool):
                child = pool[idx]
                if child.size > half or child.size > budget:
                    break
                # the root coefficient only grows as children are added
                if lt_only and _thr_at_most_alpha(child, en, ed, rn, rd):
                    idx = group_end[idx]
                    continue
                nxt = _attach_packed(*state, child)
                if _packed_ok(*nxt, lt_only):
                    yield from rec(idx, budget - child.size, nxt, children + (child.code,))
                idx += 1

        root = (w, 1, w + 2, 1, 1, 1)
        if _packed_ok(*root, lt_only):
            yield from rec(0, n - 1, root, ())

    if n % 2 == 0:
        group = [t for t in pool if t.size == n // 2]
        for i, a in enumerate(group):
            for b in group[i:]:
                if lt_only and _thr_at_most_alpha(b, a.en, a.ed, a.rn, a.rd):
                    break
                joined = _attach_packed(a.en, a.ed, a.rn, a.rd, a.bn, a.bd, b)
                if _packed_ok(*joined, lt_only):
                    yield a.code, b.code


def enumerate_profiles(
    max_vertices: int, min_weight: int, *, log_terminal_only: bool = False
) -> Iterator[tuple[ResolutionGraph, DiscrepancyProfile]]:
    """Like :func:`enumerate_graphs` but also yields each graph's discrepancy profile."""
    for graph in enumerate_graphs(max_vertices, min_weight, log_terminal_only=log_terminal_only):
        yield graph, discrepancies(graph)


def enumerate_graphs(max_vertices: int, min_weight: int, *, log_terminal_only: bool = False) -> Iterator[ResolutionGraph]:
    """Every negative definite tree on at most ``max_vertices`` vertices, up to isomorphism.

    Weights range over ``[min_weight, -2]``.  With ``log_terminal_only`` the
    search is pruned to log terminal trees, which is much faster.  The order
    is deterministic: by vertex count, then by construction order.

    Membership is decided exactly while the tree is assembled, so no
    separate solve is needed here.
    """
    if max_vertices < 1:
        raise ValueError("max_vertices must be at least 1")
    if min_weight > -2:
        raise ValueError("min_weight must be <= -2")
    weights = list(range(-2, min_weight - 1, -1))
    pool = [_pack(t) for t in _build_pool(max_vertices // 2, weights, log_terminal_only)]
    for n in range(1, max_vertices + 1):
        for code, extra in _trees_of_size(n, pool, weights, log_terminal_only):
            yield _graph_from_code(code, extra)
