"""Graph documents: the JSON file format for resolution graphs, and the bundled corpus.

A document looks like::

    {
      "name": "example5-1",
      "vertices": [
        {"id": "C1", "self": -2},
        {"id": "C2", "self": -2}
      ],
      "edges": [
        ["C1", "C2"]
      ],
      "boundary": [
        {"vertex": "C2", "mult": 1}
      ]
    }

``boundary`` is optional.  See ``docs/FORMAT.md`` for the grammar.
"""

from __future__ import annotations

import json
import json.decoder
import json.scanner
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .graph import GraphError, ResolutionGraph


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = ", ".join(x for x in (f"line {line}" if line else None, field) if x)
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.field = field


@dataclass(frozen=True)
class GraphDocument:
    name: str
    graph: ResolutionGraph


class _LocatedDict(dict):
    line = 0


class _LocatedList(list):
    line = 0


def _line_at(s: str, pos: int) -> int:
    return s.count("\n", 0, pos) + 1


def _decoder() -> json.JSONDecoder:
    """A decoder whose objects and arrays remember the line they start on."""
    dec = json.JSONDecoder()

    def parse_object(s_and_end, *args):
        s, end = s_and_end
        value, new_end = json.decoder.JSONObject(s_and_end, *args)
        out = _LocatedDict(value)
        out.line = _line_at(s, end - 1)
        return out, new_end

    def parse_array(s_and_end, scan_once):
        s, end = s_and_end
        value, new_end = json.decoder.JSONArray(s_and_end, scan_once)
        out = _LocatedList(value)
        out.line = _line_at(s, end - 1)
        return out, new_end

    dec.parse_object = parse_object
    dec.parse_array = parse_array
    dec.scan_once = json.scanner.py_make_scanner(dec)
    return dec


def _line(node) -> int | None:
    return getattr(node, "line", None) or None


def _int_field(node: dict, key: str, path: str) -> int:
    if key not in node:
        raise ParseError(f"missing field {key!r}", _line(node), path)
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}", _line(node), f"{path}.{key}")
    return value


def _str_field(node: dict, key: str, path: str) -> str:
    if key not in node:
        raise ParseError(f"missing field {key!r}", _line(node), path)
    value = node[key]
    if not isinstance(value, str) or not value:
        raise ParseError(f"expected a non-empty string, got {value!r}", _line(node), f"{path}.{key}")
    return value


def parse_document(text: str) -> GraphDocument:
    try:
        root = _decoder().decode(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(root, dict):
        raise ParseError("top level must be an object", 1)
    unknown = set(root) - {"name", "vertices", "edges", "boundary"}
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", _line(root))
    name = root.get("name", "")
    if not isinstance(name, str):
        raise ParseError(f"expected a string, got {name!r}", _line(root), "name")

    raw_vertices = root.get("vertices")
    if not isinstance(raw_vertices, list):
        raise ParseError("expected a list of vertices", _line(root), "vertices")
    vertices = []
    seen: dict[str, int] = {}
    for i, node in enumerate(raw_vertices):
        path = f"vertices[{i}]"
        if not isinstance(node, dict):
            raise ParseError("expected an object {id, self}", _line(raw_vertices), path)
        extra = set(node) - {"id", "self"}
        if extra:
            raise ParseError(f"unknown field(s) {sorted(extra)}", _line(node), path)
        vid = _str_field(node, "id", path)
        if vid in seen:
            raise ParseError(f"duplicate vertex id {vid!r} (first at vertices[{seen[vid]}])", _line(node), path)
        seen[vid] = i
        vertices.append((vid, _int_field(node, "self", path)))

    raw_edges = root.get("edges", [])
    if not isinstance(raw_edges, list):
        raise ParseError("expected a list of edges", _line(root), "edges")
    edges = []
    pairs: dict[frozenset, int] = {}
    for i, pair in enumerate(raw_edges):
        path = f"edges[{i}]"
        line = _line(pair) or _line(raw_edges)
        if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(x, str) for x in pair):
            raise ParseError("expected a pair of vertex ids", line, path)
        for k, vid in enumerate(pair):
            if vid not in seen:
                raise ParseError(f"unknown vertex id {vid!r}", line, f"{path}[{k}]")
        if pair[0] == pair[1]:
            raise ParseError(f"self-loop at {pair[0]!r}", line, path)
        key = frozenset(pair)
        if key in pairs:
            raise ParseError(
                f"duplicate edge (first at edges[{pairs[key]}]); tangencies are not representable", line, path
            )
        pairs[key] = i
        edges.append((pair[0], pair[1]))

    raw_boundary = root.get("boundary", [])
    if not isinstance(raw_boundary, list):
        raise ParseError("expected a list", _line(root), "boundary")
    boundary: dict[str, int] = {}
    for i, node in enumerate(raw_boundary):
        path = f"boundary[{i}]"
        if not isinstance(node, dict):
            raise ParseError("expected an object {vertex, mult}", _line(raw_boundary), path)
        extra = set(node) - {"vertex", "mult"}
        if extra:
            raise ParseError(f"unknown field(s) {sorted(extra)}", _line(node), path)
        vid = _str_field(node, "vertex", path)
        if vid not in seen:
            raise ParseError(f"unknown vertex id {vid!r}", _line(node), f"{path}.vertex")
        if vid in boundary:
            raise ParseError(f"vertex {vid!r} listed twice", _line(node), path)
        mult = _int_field(node, "mult", path)
        if mult < 0:
            raise ParseError(f"multiplicity must be >= 0, got {mult}", _line(node), f"{path}.mult")
        boundary[vid] = mult

    try:
        graph = ResolutionGraph.build(vertices, edges, boundary)
    except GraphError as exc:
        raise ParseError(str(exc)) from None
    return GraphDocument(name, graph)


def parse(text: str) -> ResolutionGraph:
    return parse_document(text).graph


def serialize_document(doc: GraphDocument) -> str:
    """Normalized text: one vertex, edge or boundary entry per line."""
    g = doc.graph
    dump = json.dumps
    lines = ["{", f'  "name": {dump(doc.name)},']
    vs = [f'    {{"id": {dump(v.id)}, "self": {v.self_int}}}' for v in g.vertices]
    es = [f"    [{dump(u)}, {dump(v)}]" for u, v in g.edges]
    sections = [("vertices", vs), ("edges", es)]
    if g.boundary:
        sections.append(("boundary", [f'    {{"vertex": {dump(v)}, "mult": {m}}}' for v, m in g.boundary]))
    for k, (key, items) in enumerate(sections):
        tail = "," if k < len(sections) - 1 else ""
        if items:
            lines.append(f'  "{key}": [')
            lines.append(",\n".join(items))
            lines.append(f"  ]{tail}")
        else:
            lines.append(f'  "{key}": []{tail}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize(graph: ResolutionGraph, name: str = "") -> str:
    return serialize_document(GraphDocument(name, graph))


def corpus_names() -> list[str]:
    files = resources.files("resgraph").joinpath("corpus")
    return sorted(p.name[: -len(".json")] for p in files.iterdir() if p.name.endswith(".json"))


def corpus_text(name: str) -> str:
    return resources.files("resgraph").joinpath("corpus", f"{name}.json").read_text(encoding="utf-8")


def load(source: str) -> GraphDocument:
    """Read a document from a path, or from the bundled corpus by name."""
    path = Path(source)
    if path.is_file():
        return parse_document(path.read_text(encoding="utf-8"))
    if source in corpus_names():
        return parse_document(corpus_text(source))
    raise FileNotFoundError(f"no such file or corpus graph: {source!r}")
