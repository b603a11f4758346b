"""Combinatorial square complexes and the quotient-complex builder.

A generic square complex is a set of vertices, directed edges and
squares whose boundaries are closed walks of four directed edges.  The
builder materialises finite height-truncations of the quotient complex
for parameters (m, k): one vertex orbit per height (coefficients reduced
modulo the height's stabiliser), m free edge orbits per height and m
free square orbits per layer, glued according to the fundamental-domain
incidence rules.

Every built edge points upwards (head one height above tail).  Edge and
square coefficients are never reduced: those cells are in free orbit,
and two distinct edges may share both endpoints when consecutive
heights both branch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

from cubespec.coeff_group import Elem, GroupParams, constant, prefix, unit

DEFAULT_SIZE_CAP = 65536


class SpanError(ValueError):
    """Height span too small to hold at least one square layer."""


class SizeCapError(RuntimeError):
    """Requested build exceeds the configured coefficient-group size cap."""


class ComplexFormatError(ValueError):
    """A complex document violates the schema; message carries the path."""


# ---------------------------------------------------------------------------
# parameterised cell references


@dataclass(frozen=True)
class VertexRef:
    height: int
    coeff: Elem  # canonical form, see canonical_vertex


@dataclass(frozen=True)
class EdgeRef:
    height: int  # height of the head (top) vertex
    type_j: int
    coeff: Elem


@dataclass(frozen=True)
class SquareRef:
    height: int  # height of the mid layer
    type_j: int
    coeff: Elem


def canonical_vertex(g: Elem, i: int) -> VertexRef:
    """Reduce a coefficient modulo the stabiliser of a height-i vertex.

    The stabiliser is generated by the constant vector i, so its elements
    are the constant vectors with entries in multiples of gcd(i, k).  The
    canonical representative shifts the first exponent into
    [0, gcd(i, k)).  For prime k that means first exponent 0 at branching
    heights (k does not divide i) and no reduction elsewhere.
    """
    k = g.params.k
    step = math.gcd(i % k, k)
    shift = g.exps[0] - g.exps[0] % step
    if shift:
        return VertexRef(i, g * constant(g.params, -shift))
    return VertexRef(i, g)


def edge_endpoints(ref: EdgeRef) -> tuple[VertexRef, VertexRef]:
    """Tail and head of a built edge; the tail sits one height below."""
    params = ref.coeff.params
    tail = canonical_vertex(ref.coeff * prefix(params, ref.type_j - 1), ref.height - 1)
    head = canonical_vertex(ref.coeff, ref.height)
    return tail, head


def square_boundary(ref: SquareRef) -> tuple[tuple[EdgeRef, str], ...]:
    """Boundary cycle of a built square, from the bottom vertex.

    Sides come in order bottom-right (up), top-right (up), top-left
    (down), bottom-left (down); opposite pairs are positions (0, 2)
    carrying type j and (1, 3) carrying type j+1.  The last type closes
    up cyclically: squares of type m mix types m and 1, and their two
    type-1 sides pick up the constant vector of the layer above.
    """
    params = ref.coeff.params
    j, i, g = ref.type_j, ref.height, ref.coeff
    if not 1 <= j <= params.m:
        raise ValueError(f"type index must be in [1, m], got {j}")
    if j < params.m:
        br = EdgeRef(i, j, g * prefix(params, j))
        tr = EdgeRef(i + 1, j + 1, g)
        tl = EdgeRef(i + 1, j, g)
        bl = EdgeRef(i, j + 1, g * prefix(params, j - 1))
    else:
        d_above = constant(params, i + 1)
        br = EdgeRef(i, params.m, g * prefix(params, params.m))
        tr = EdgeRef(i + 1, 1, g * d_above)
        tl = EdgeRef(i + 1, params.m, g)
        bl = EdgeRef(i, 1, g * d_above * unit(params, params.m).inverse())
    return ((br, "+"), (tr, "+"), (tl, "-"), (bl, "-"))


def _exps_str(e: Elem) -> str:
    return ",".join(str(x) for x in e.exps)


def vertex_id(ref: VertexRef) -> str:
    return f"v/{ref.height}/{_exps_str(ref.coeff)}"


def edge_id(ref: EdgeRef) -> str:
    return f"e/{ref.height}/{ref.type_j}/{_exps_str(ref.coeff)}"


def square_id(ref: SquareRef) -> str:
    return f"s/{ref.height}/{ref.type_j}/{_exps_str(ref.coeff)}"


# ---------------------------------------------------------------------------
# generic complex


@dataclass
class Vertex:
    id: str
    height: Optional[int] = None
    extra: dict = field(default_factory=dict)


@dataclass
class Edge:
    id: str
    tail: str
    head: str
    type: Optional[int] = None
    extra: dict = field(default_factory=dict)


@dataclass
class Square:
    id: str
    boundary: tuple[tuple[str, str], ...]  # four (edge id, "+"/"-") sides
    extra: dict = field(default_factory=dict)


@dataclass
class SquareComplex:
    vertices: dict[str, Vertex] = field(default_factory=dict)
    edges: dict[str, Edge] = field(default_factory=dict)
    squares: dict[str, Square] = field(default_factory=dict)
    params: Optional[GroupParams] = None
    extra: dict = field(default_factory=dict)
    # builder annotations; absent for loaded or hand-made complexes
    edge_refs: dict[str, EdgeRef] = field(default_factory=dict)
    square_refs: dict[str, SquareRef] = field(default_factory=dict)

    def edge_top_height(self, eid: str) -> int:
        e = self.edges[eid]
        heights = [self.vertices[e.tail].height, self.vertices[e.head].height]
        if any(h is None for h in heights):
            raise ValueError(f"edge {eid}: missing height metadata on endpoints")
        return max(heights)

    def incident_edges(self) -> dict[str, list[str]]:
        """Vertex id to sorted list of distinct incident edge ids."""
        out: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self.edges.values():
            out[e.tail].add(e.id)
            out[e.head].add(e.id)
        return {v: sorted(es) for v, es in out.items()}

    def counts(self) -> dict[str, int]:
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "squares": len(self.squares),
        }


def _side_endpoints(X: SquareComplex, side: tuple[str, str]) -> tuple[str, str]:
    """(start, end) of a boundary side when traversed along the cycle."""
    e = X.edges[side[0]]
    return (e.tail, e.head) if side[1] == "+" else (e.head, e.tail)


def validate_complex(X: SquareComplex) -> None:
    for e in X.edges.values():
        for endpoint in (e.tail, e.head):
            if endpoint not in X.vertices:
                raise ComplexFormatError(
                    f"edges[{e.id!r}]: unknown vertex {endpoint!r}"
                )
    for s in X.squares.values():
        if len(s.boundary) != 4:
            raise ComplexFormatError(
                f"squares[{s.id!r}].boundary: expected 4 sides, got {len(s.boundary)}"
            )
        for n, (eid, d) in enumerate(s.boundary):
            if eid not in X.edges:
                raise ComplexFormatError(
                    f"squares[{s.id!r}].boundary[{n}].edge: unknown edge {eid!r}"
                )
            if d not in ("+", "-"):
                raise ComplexFormatError(
                    f"squares[{s.id!r}].boundary[{n}].dir: expected '+' or '-', got {d!r}"
                )
        ends = [_side_endpoints(X, side) for side in s.boundary]
        for n in range(4):
            here, there = ends[n][1], ends[(n + 1) % 4][0]
            if here != there:
                raise ComplexFormatError(
                    f"squares[{s.id!r}].boundary: walk does not close "
                    f"(side {n} ends at {here!r}, side {(n + 1) % 4} starts at {there!r})"
                )


# ---------------------------------------------------------------------------
# builder


def _canonical_coeffs(params: GroupParams, i: int) -> Iterator[Elem]:
    """Canonical vertex coefficients at height i, in lexicographic order."""
    step = math.gcd(i % params.k, params.k)
    for first in range(step):
        for rest in itertools.product(range(params.k), repeat=params.m - 1):
            yield Elem(params, (first,) + rest)


def _all_coeffs(params: GroupParams) -> Iterator[Elem]:
    for exps in itertools.product(range(params.k), repeat=params.m):
        yield Elem(params, exps)


def build_quotient_complex(
    params: GroupParams,
    h_min: int,
    h_max: int,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> SquareComplex:
    """Materialise the height-truncation of the quotient complex.

    Vertices appear at every height in [h_min, h_max], edges at every
    height with a layer below, and squares on every layer with room both
    above and below.  Boundary layers simply lack the squares that would
    extend past the truncation; downstream checks compensate with a core
    margin.  Cell ids are deterministic.
    """
    if h_max < h_min + 2:
        raise SpanError(
            f"need h_max >= h_min + 2 for at least one square layer, "
            f"got [{h_min}, {h_max}]"
        )
    if params.order > size_cap:
        raise SizeCapError(
            f"coefficient group order {params.order} exceeds size cap {size_cap}"
        )
    X = SquareComplex(params=params)
    for i in range(h_min, h_max + 1):
        for g in _canonical_coeffs(params, i):
            ref = VertexRef(i, g)
            X.vertices[vertex_id(ref)] = Vertex(vertex_id(ref), height=i)
    for i in range(h_min + 1, h_max + 1):
        for j in range(1, params.m + 1):
            for g in _all_coeffs(params):
                ref = EdgeRef(i, j, g)
                tail, head = edge_endpoints(ref)
                eid = edge_id(ref)
                X.edges[eid] = Edge(eid, vertex_id(tail), vertex_id(head), type=j)
                X.edge_refs[eid] = ref
    for i in range(h_min + 1, h_max):
        for j in range(1, params.m + 1):
            for g in _all_coeffs(params):
                ref = SquareRef(i, j, g)
                sides = tuple(
                    (edge_id(er), d) for er, d in square_boundary(ref)
                )
                sid = square_id(ref)
                X.squares[sid] = Square(sid, sides)
                X.square_refs[sid] = ref
    validate_complex(X)
    return X


# ---------------------------------------------------------------------------
# links and curvature


LinkNode = tuple[str, str]  # (edge id, "tail" | "head"): the end at the vertex


@dataclass
class LinkAdjacency:
    a: LinkNode
    b: LinkNode
    square: str
    corner: int


@dataclass
class LinkGraph:
    vertex: str
    nodes: list[LinkNode]
    adjacencies: list[LinkAdjacency]

    def multiplicity(self) -> dict[tuple[LinkNode, LinkNode], int]:
        out: dict[tuple[LinkNode, LinkNode], int] = {}
        for adj in self.adjacencies:
            key = tuple(sorted((adj.a, adj.b)))
            out[key] = out.get(key, 0) + 1
        return out

    def _induced(self, end: str) -> tuple[list[LinkNode], list[LinkAdjacency]]:
        nodes = [n for n in self.nodes if n[1] == end]
        node_set = set(nodes)
        adjs = [
            adj
            for adj in self.adjacencies
            if adj.a in node_set and adj.b in node_set
        ]
        return nodes, adjs

    def ascending(self) -> tuple[list[LinkNode], list[LinkAdjacency]]:
        """Subgraph on ends where the vertex is the edge's tail."""
        return self._induced("tail")

    def descending(self) -> tuple[list[LinkNode], list[LinkAdjacency]]:
        """Subgraph on ends where the vertex is the edge's head."""
        return self._induced("head")


def _corner_nodes(
    X: SquareComplex, square: Square
) -> list[tuple[str, LinkNode, LinkNode]]:
    """Per corner: (shared vertex, end of incoming side, end of outgoing side)."""
    out = []
    for n in range(4):
        eid_in, d_in = square.boundary[n]
        eid_out, d_out = square.boundary[(n + 1) % 4]
        shared = _side_endpoints(X, square.boundary[n])[1]
        node_in = (eid_in, "head" if d_in == "+" else "tail")
        node_out = (eid_out, "tail" if d_out == "+" else "head")
        out.append((shared, node_in, node_out))
    return out


def vertex_link(X: SquareComplex, v: str) -> LinkGraph:
    """Link graph at v: edge-ends as nodes, square corners as adjacencies."""
    if v not in X.vertices:
        raise KeyError(f"unknown vertex {v!r}")
    nodes = []
    for e in X.edges.values():
        if e.tail == v:
            nodes.append((e.id, "tail"))
        if e.head == v:
            nodes.append((e.id, "head"))
    nodes.sort()
    adjacencies = []
    for sid in sorted(X.squares):
        for corner, (shared, na, nb) in enumerate(_corner_nodes(X, X.squares[sid])):
            if shared == v:
                adjacencies.append(LinkAdjacency(na, nb, sid, corner))
    return LinkGraph(v, nodes, adjacencies)


@dataclass
class NpcReport:
    passed: bool
    failures: list[dict]

    def to_json(self) -> dict:
        return {"passed": self.passed, "failures": self.failures}


def check_npc(X: SquareComplex) -> NpcReport:
    """Nonpositive curvature: every vertex link simple with girth >= 4.

    Failures are reported, never raised: self-adjacencies, repeated
    adjacencies between the same two ends, and link triangles.
    """
    failures: list[dict] = []
    corners_by_vertex: dict[str, list[tuple[LinkNode, LinkNode, str, int]]] = {
        v: [] for v in X.vertices
    }
    for sid in sorted(X.squares):
        for corner, (shared, na, nb) in enumerate(_corner_nodes(X, X.squares[sid])):
            corners_by_vertex[shared].append((na, nb, sid, corner))
    for v in sorted(X.vertices):
        seen: dict[tuple[LinkNode, LinkNode], str] = {}
        neighbours: dict[LinkNode, set[LinkNode]] = {}
        for na, nb, sid, corner in corners_by_vertex[v]:
            if na == nb:
                failures.append(
                    {
                        "kind": "self_adjacency",
                        "vertex": v,
                        "node": list(na),
                        "square": sid,
                    }
                )
                continue
            key = tuple(sorted((na, nb)))
            if key in seen:
                failures.append(
                    {
                        "kind": "double_adjacency",
                        "vertex": v,
                        "nodes": [list(na), list(nb)],
                        "squares": sorted({seen[key], sid}),
                    }
                )
            else:
                seen[key] = sid
            neighbours.setdefault(na, set()).add(nb)
            neighbours.setdefault(nb, set()).add(na)
        for na in sorted(neighbours):
            for nb in sorted(neighbours[na]):
                if nb <= na:
                    continue
                common = neighbours[na] & neighbours[nb]
                for nc in sorted(common):
                    if nc > nb:
                        failures.append(
                            {
                                "kind": "triangle",
                                "vertex": v,
                                "nodes": [list(na), list(nb), list(nc)],
                            }
                        )
    return NpcReport(not failures, failures)


# ---------------------------------------------------------------------------
# JSON round trip


_VERTEX_KEYS = {"id", "height"}
_EDGE_KEYS = {"id", "tail", "head", "type"}
_SQUARE_KEYS = {"id", "boundary"}
_TOP_KEYS = {"params", "vertices", "edges", "squares"}


def complex_to_json(X: SquareComplex) -> dict:
    doc: dict = {
        "params": (
            {"m": X.params.m, "k": X.params.k} if X.params is not None else None
        ),
        "vertices": [
            {"id": v.id, "height": v.height, **dict(sorted(v.extra.items()))}
            for v in X.vertices.values()
        ],
        "edges": [
            {
                "id": e.id,
                "tail": e.tail,
                "head": e.head,
                "type": e.type,
                **dict(sorted(e.extra.items())),
            }
            for e in X.edges.values()
        ],
        "squares": [
            {
                "id": s.id,
                "boundary": [{"edge": eid, "dir": d} for eid, d in s.boundary],
                **dict(sorted(s.extra.items())),
            }
            for s in X.squares.values()
        ],
    }
    for key in sorted(X.extra):
        doc[key] = X.extra[key]
    return doc


def _require(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ComplexFormatError(f"{path}: {message}")


def _opt_int(value, path: str) -> Optional[int]:
    if value is None:
        return None
    _require(isinstance(value, int) and not isinstance(value, bool), path, "expected an integer or null")
    return value


def complex_from_json(doc: dict) -> SquareComplex:
    """Parse and validate a complex document; unknown fields are preserved."""
    _require(isinstance(doc, dict), "$", "expected a JSON object")
    for key in ("vertices", "edges", "squares"):
        _require(key in doc, "$", f"missing key {key!r}")
        _require(isinstance(doc[key], list), key, "expected a list")
    params = None
    raw_params = doc.get("params")
    if raw_params is not None:
        _require(isinstance(raw_params, dict), "params", "expected an object or null")
        for key in ("m", "k"):
            _require(key in raw_params, "params", f"missing key {key!r}")
        try:
            params = GroupParams(raw_params["m"], raw_params["k"])
        except (TypeError, ValueError) as exc:
            raise ComplexFormatError(f"params: {exc}") from exc
    X = SquareComplex(params=params)
    for n, rec in enumerate(doc["vertices"]):
        path = f"vertices[{n}]"
        _require(isinstance(rec, dict), path, "expected an object")
        _require("id" in rec and isinstance(rec["id"], str), path, "missing string 'id'")
        _require(rec["id"] not in X.vertices, path, f"duplicate vertex id {rec['id']!r}")
        X.vertices[rec["id"]] = Vertex(
            rec["id"],
            height=_opt_int(rec.get("height"), f"{path}.height"),
            extra={k: v for k, v in rec.items() if k not in _VERTEX_KEYS},
        )
    for n, rec in enumerate(doc["edges"]):
        path = f"edges[{n}]"
        _require(isinstance(rec, dict), path, "expected an object")
        for key in ("id", "tail", "head"):
            _require(
                key in rec and isinstance(rec[key], str), path, f"missing string {key!r}"
            )
        _require(rec["id"] not in X.edges, path, f"duplicate edge id {rec['id']!r}")
        X.edges[rec["id"]] = Edge(
            rec["id"],
            rec["tail"],
            rec["head"],
            type=_opt_int(rec.get("type"), f"{path}.type"),
            extra={k: v for k, v in rec.items() if k not in _EDGE_KEYS},
        )
    for n, rec in enumerate(doc["squares"]):
        path = f"squares[{n}]"
        _require(isinstance(rec, dict), path, "expected an object")
        _require("id" in rec and isinstance(rec["id"], str), path, "missing string 'id'")
        _require(rec["id"] not in X.squares, path, f"duplicate square id {rec['id']!r}")
        raw_boundary = rec.get("boundary")
        _require(isinstance(raw_boundary, list), f"{path}.boundary", "expected a list")
        _require(
            len(raw_boundary) == 4,
            f"{path}.boundary",
            f"expected 4 sides, got {len(raw_boundary)}",
        )
        sides = []
        for sn, side in enumerate(raw_boundary):
            spath = f"{path}.boundary[{sn}]"
            _require(isinstance(side, dict), spath, "expected an object")
            _require(
                "edge" in side and isinstance(side["edge"], str),
                spath,
                "missing string 'edge'",
            )
            _require(
                side.get("dir") in ("+", "-"), f"{spath}.dir", "expected '+' or '-'"
            )
            sides.append((side["edge"], side["dir"]))
        X.squares[rec["id"]] = Square(
            rec["id"],
            tuple(sides),
            extra={k: v for k, v in rec.items() if k not in _SQUARE_KEYS},
        )
    X.extra = {k: v for k, v in doc.items() if k not in _TOP_KEYS}
    validate_complex(X)
    return X
