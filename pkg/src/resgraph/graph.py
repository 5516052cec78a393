"""Resolution dual graphs: exceptional curves, their intersections, boundary incidence."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, NamedTuple

from . import linalg


class GraphError(ValueError):
    """Structural problem with a graph; ``element`` names the offending piece."""

    def __init__(self, message: str, element: object = None):
        super().__init__(message)
        self.element = element


class Vertex(NamedTuple):
    id: str
    self_int: int


@lru_cache(maxsize=None)
def _generated_ids(n: int) -> tuple[str, ...]:
    return tuple(f"C{k + 1}" for k in range(n))


@dataclass(frozen=True)
class ResolutionGraph:
    """Weighted dual graph of the exceptional curves ``C_j`` of a resolution.

    ``edges`` are transversal simple intersections, ``boundary`` holds the
    intersection number of each curve with the strict transform of the
    boundary divisor (vertices with zero incidence are omitted).  Instances
    are normalized on construction, so two graphs that differ only in edge
    order or orientation compare equal.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[str, str], ...] = ()
    boundary: tuple[tuple[str, int], ...] = field(default=())

    def __post_init__(self) -> None:
        vertices = tuple(Vertex(str(v[0]), int(v[1])) for v in self.vertices)
        index: dict[str, int] = {}
        for i, v in enumerate(vertices):
            if not v.id:
                raise GraphError(f"vertex {i} has an empty id", i)
            if v.id in index:
                raise GraphError(f"duplicate vertex id {v.id!r}", v.id)
            index[v.id] = i

        seen: set[tuple[int, int]] = set()
        for pair in self.edges:
            if len(pair) != 2:
                raise GraphError(f"edge {pair!r} does not have exactly two endpoints", pair)
            u, v = pair
            for end in (u, v):
                if end not in index:
                    raise GraphError(f"edge ({u}, {v}) references unknown vertex id {end!r}", end)
            if u == v:
                raise GraphError(f"self-loop at vertex {u!r}", u)
            key = (min(index[u], index[v]), max(index[u], index[v]))
            if key in seen:
                raise GraphError(
                    f"duplicate edge ({u}, {v}); intersections of multiplicity > 1 are not representable",
                    (u, v),
                )
            seen.add(key)
        edges = tuple((vertices[i].id, vertices[j].id) for i, j in sorted(seen))

        bmap: dict[str, int] = {}
        for vid, mult in self.boundary:
            if vid not in index:
                raise GraphError(f"boundary references unknown vertex id {vid!r}", vid)
            if vid in bmap:
                raise GraphError(f"boundary lists vertex {vid!r} twice", vid)
            if int(mult) < 0:
                raise GraphError(f"boundary incidence of {vid!r} is negative ({mult})", vid)
            bmap[vid] = int(mult)
        boundary = tuple((v.id, bmap[v.id]) for v in vertices if bmap.get(v.id, 0) > 0)

        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "boundary", boundary)

    @classmethod
    def build(
        cls,
        vertices: Iterable[tuple[str, int]],
        edges: Iterable[tuple[str, str]] = (),
        boundary: Mapping[str, int] | None = None,
    ) -> ResolutionGraph:
        return cls(tuple(vertices), tuple(tuple(e) for e in edges), tuple((boundary or {}).items()))

    @classmethod
    def _from_tree_walk(cls, weights: list[int], parents: list[int]) -> ResolutionGraph:
        """Fast path for generated trees: vertex ``k`` is ``C{k+1}``, ``parents[k] < k``.

        Skips the validation in ``__post_init__``; the caller guarantees a
        well-formed tree with no boundary.
        """
        self = object.__new__(cls)
        ids = _generated_ids(len(weights))
        pairs = sorted((p, k) for k, p in enumerate(parents) if p >= 0)
        nbrs: list[list[int]] = [[] for _ in weights]
        for p, k in pairs:
            nbrs[p].append(k)
            nbrs[k].append(p)
        object.__setattr__(self, "vertices", tuple(map(Vertex, ids, weights)))
        object.__setattr__(self, "edges", tuple((ids[p], ids[k]) for p, k in pairs))
        object.__setattr__(self, "boundary", ())
        d = self.__dict__
        d["ids"] = ids
        d["weights"] = tuple(weights)
        d["boundary_vector"] = (0,) * len(weights)
        # parent < k < children, so every list is already ascending
        d["adjacency"] = tuple(map(tuple, nbrs))
        d["_acyclic"] = True
        # vertex order is a preorder, so reversed order eliminates leaves first
        d["_tree_parents"] = parents
        return self

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def weights(self) -> tuple[int, ...]:
        return tuple(v.self_int for v in self.vertices)

    @cached_property
    def index_of(self) -> dict[str, int]:
        return {v.id: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor indices of every vertex, ascending."""
        nbrs: list[list[int]] = [[] for _ in self.vertices]
        idx = self.index_of
        for u, v in self.edges:
            nbrs[idx[u]].append(idx[v])
            nbrs[idx[v]].append(idx[u])
        return tuple(tuple(sorted(n)) for n in nbrs)

    def neighbors(self, vid: str) -> tuple[str, ...]:
        ids = self.ids
        return tuple(ids[j] for j in self.adjacency[self.index_of[vid]])

    def degree(self, vid: str) -> int:
        return len(self.adjacency[self.index_of[vid]])

    def self_int(self, vid: str) -> int:
        return self.vertices[self.index_of[vid]].self_int

    def boundary_of(self, vid: str) -> int:
        return dict(self.boundary).get(vid, 0)

    @cached_property
    def boundary_vector(self) -> tuple[int, ...]:
        b = dict(self.boundary)
        return tuple(b.get(v.id, 0) for v in self.vertices)

    @property
    def has_boundary(self) -> bool:
        return bool(self.boundary)

    def without_boundary(self) -> ResolutionGraph:
        return ResolutionGraph(self.vertices, self.edges)

    def is_connected(self) -> bool:
        n = len(self.vertices)
        if n == 0:
            return False
        seen = {0}
        stack = [0]
        adj = self.adjacency
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == n

    def is_forest(self) -> bool:
        """True iff the graph has no cycles (each component is a tree)."""
        return self._acyclic

    @cached_property
    def _acyclic(self) -> bool:
        parent = list(range(len(self.vertices)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        idx = self.index_of
        for u, v in self.edges:
            ru, rv = find(idx[u]), find(idx[v])
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1 and self.is_connected()


@dataclass(frozen=True)
class ValidationReport:
    is_negative_definite: bool
    is_tree: bool
    is_minimal: bool
    messages: tuple[str, ...] = ()


def intersection_matrix(graph: ResolutionGraph) -> list[list[int]]:
    """Symmetric matrix of intersection numbers ``(C_i . C_j)`` in vertex order."""
    n = len(graph.vertices)
    m = [[0] * n for _ in range(n)]
    for i, w in enumerate(graph.weights):
        m[i][i] = w
    for i, nbrs in enumerate(graph.adjacency):
        for j in nbrs:
            m[i][j] = 1
    return m


def validate(graph: ResolutionGraph) -> ValidationReport:
    messages: list[str] = []
    nd = linalg.is_negative_definite(intersection_matrix(graph))
    if not nd:
        messages.append("intersection matrix is not negative definite")
    for v in graph.vertices:
        if v.self_int >= 0:
            messages.append(f"{v.id}: self-intersection {v.self_int} is not that of an exceptional curve")
    tree = graph.is_tree()
    if not graph.vertices:
        messages.append("graph has no vertices")
    elif not tree:
        if graph.is_connected():
            messages.append("graph contains a cycle; shape classification will refuse it")
        else:
            messages.append("graph is disconnected")
    minimal = all(w <= -2 for w in graph.weights)
    if not minimal:
        ones = ", ".join(v.id for v in graph.vertices if v.self_int > -2)
        messages.append(f"not a minimal resolution: {ones} has self-intersection >= -1")
    return ValidationReport(nd, tree, minimal, tuple(messages))
