"""Blowing up points of a resolution and transporting the discrepancies.

If ``e`` is the exceptional curve of a blow-up at a point lying on the
curves ``C_i`` (and possibly the boundary), the new coefficient is the sum of
the old coefficients through the point minus one, with the boundary counting
as coefficient one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Union

from .discrepancy import DiscrepancyProfile, discrepancies
from .graph import GraphError, ResolutionGraph, Vertex


class InvalidCenterError(GraphError):
    pass


@dataclass(frozen=True)
class FreePoint:
    """A general point of one exceptional curve."""

    vertex: str

    def __str__(self) -> str:
        return f"free:{self.vertex}"


@dataclass(frozen=True)
class EdgePoint:
    """The intersection point of two adjacent exceptional curves."""

    u: str
    v: str

    def __str__(self) -> str:
        return f"edge:{self.u},{self.v}"


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the boundary's strict transform, on ``vertex`` or off the exceptional locus."""

    vertex: str | None = None

    def __str__(self) -> str:
        return f"boundary:{self.vertex if self.vertex is not None else '-'}"


BlowUpCenter = Union[FreePoint, EdgePoint, BoundaryPoint]


def parse_center(text: str) -> BlowUpCenter:
    """Parse ``free:C1``, ``edge:C1,C2``, ``boundary:C3`` or ``boundary:-``."""
    kind, sep, rest = text.partition(":")
    rest = rest.strip()
    if not sep or not rest:
        raise ValueError(f"bad center spec {text!r}; expected free:ID, edge:ID,ID, boundary:ID or boundary:-")
    kind = kind.strip().lower()
    if kind == "free":
        return FreePoint(rest)
    if kind == "edge":
        parts = [s.strip() for s in rest.split(",")]
        if len(parts) != 2 or not all(parts):
            raise ValueError(f"bad edge center {text!r}; expected edge:ID,ID")
        return EdgePoint(*parts)
    if kind == "boundary":
        return BoundaryPoint(None if rest == "-" else rest)
    raise ValueError(f"unknown center kind {kind!r} in {text!r}")


def valid_centers(graph: ResolutionGraph) -> list[BlowUpCenter]:
    """All centers the calculus can blow up on ``graph``."""
    centers: list[BlowUpCenter] = [FreePoint(v) for v in graph.ids]
    centers += [EdgePoint(u, v) for u, v in graph.edges]
    centers += [BoundaryPoint(v) for v, _ in graph.boundary]
    centers.append(BoundaryPoint(None))
    return centers


def _fresh_id(graph: ResolutionGraph) -> str:
    used = set(graph.ids)
    k = 1
    while f"E{k}" in used:
        k += 1
    return f"E{k}"


def _check_center(graph: ResolutionGraph, center: BlowUpCenter) -> None:
    def need(vid: str) -> None:
        if vid not in graph.index_of:
            raise InvalidCenterError(f"center {center}: unknown vertex {vid!r}", center)

    if isinstance(center, FreePoint):
        need(center.vertex)
    elif isinstance(center, EdgePoint):
        need(center.u)
        need(center.v)
        if center.v not in graph.neighbors(center.u):
            raise InvalidCenterError(f"center {center}: {center.u} and {center.v} do not meet", center)
    elif isinstance(center, BoundaryPoint):
        if center.vertex is not None:
            need(center.vertex)
            if graph.boundary_of(center.vertex) < 1:
                raise InvalidCenterError(f"center {center}: the boundary does not meet {center.vertex}", center)
    else:
        raise InvalidCenterError(f"not a blow-up center: {center!r}", center)


def blow_up(
    graph: ResolutionGraph, profile: DiscrepancyProfile, center: BlowUpCenter
) -> tuple[ResolutionGraph, DiscrepancyProfile]:
    _check_center(graph, center)
    if list(profile.coefficients) != list(graph.ids):
        raise ValueError("profile does not belong to this graph")
    e = _fresh_id(graph)
    weights = dict(zip(graph.ids, graph.weights))
    edges = list(graph.edges)
    boundary = dict(graph.boundary)
    coeffs = dict(profile.coefficients)

    if isinstance(center, FreePoint):
        weights[center.vertex] -= 1
        edges.append((e, center.vertex))
        coeffs[e] = coeffs[center.vertex] - 1
    elif isinstance(center, EdgePoint):
        u, v = center.u, center.v
        edges = [x for x in edges if set(x) != {u, v}]
        weights[u] -= 1
        weights[v] -= 1
        edges += [(e, u), (e, v)]
        coeffs[e] = coeffs[u] + coeffs[v] - 1
    else:
        v = center.vertex
        boundary[e] = 1
        if v is None:
            coeffs[e] = Fraction(0)
        else:
            weights[v] -= 1
            edges.append((e, v))
            boundary[v] -= 1
            # boundary coefficient 1, plus a_v, minus 1
            coeffs[e] = coeffs[v]
    weights[e] = -1

    vertices = tuple(Vertex(vid, weights[vid]) for vid in (*graph.ids, e))
    new_graph = ResolutionGraph(vertices, tuple(edges), tuple(boundary.items()))
    index = lcm(*(c.denominator for c in coeffs.values()))
    new_profile = DiscrepancyProfile(coeffs, index, numerical_only=any(c >= 1 for c in coeffs.values()))
    return new_graph, new_profile


def verify_transport(graph: ResolutionGraph, center: BlowUpCenter) -> bool:
    """Transported profile equals a fresh solve on the blown-up graph, exactly."""
    profile = discrepancies(graph)
    new_graph, moved = blow_up(graph, profile, center)
    solved = discrepancies(new_graph)
    return moved.coefficients == solved.coefficients and moved.index == solved.index
