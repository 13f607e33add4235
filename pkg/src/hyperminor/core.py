"""Immutable hypergraph model, validation, paths, isomorphism and (de)serialization."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

LABEL_RE = re.compile(r"^[A-Za-z0-9_@']+$")


class HypergraphError(ValueError):
    """Domain rejection: bad input, unknown id or a failed guard."""

    def __init__(self, message: str, code: str = "error", ids: Sequence[str] = ()):
        super().__init__(message)
        self.code = code
        self.ids = tuple(ids)


class GuardError(HypergraphError):
    """Raised when an operation is applied while its precondition fails."""


class ParseError(HypergraphError):
    def __init__(self, message: str, line: int = 0, column: int = 0, where: str = ""):
        pos = f"line {line}, column {column}" if line else where
        super().__init__(f"{pos}: {message}" if pos else message, code="parse-error")
        self.line = line
        self.column = column
        self.where = where


@dataclass(frozen=True)
class Edge:
    id: str
    source: frozenset
    range: frozenset

    def __post_init__(self):
        if not isinstance(self.source, frozenset):
            object.__setattr__(self, "source", frozenset(self.source))
        if not isinstance(self.range, frozenset):
            object.__setattr__(self, "range", frozenset(self.range))

    def __repr__(self):
        return f"Edge({self.id!r}, {sorted(self.source)}, {sorted(self.range)})"


class Hypergraph:
    """A finite directed hypergraph (E0, E1, r, s).

    Vertices are kept sorted and edges sorted by id, so every iteration order
    in the library is deterministic. Instances are never mutated; operations
    build new ones.
    """

    __slots__ = ("_vertices", "_vset", "_edges", "_index", "_out", "_in", "_hash")

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable = ()):
        vs = list(vertices)
        vset = frozenset(vs)
        if len(vset) != len(vs):
            dup = sorted({v for v in vs if vs.count(v) > 1})
            raise HypergraphError(f"duplicate vertex id {dup[0]!r}", "duplicate-vertex", dup)
        es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        index = {e.id: e for e in es}
        if len(index) != len(es):
            seen, dup = set(), []
            for e in es:
                if e.id in seen:
                    dup.append(e.id)
                seen.add(e.id)
            raise HypergraphError(f"duplicate edge id {dup[0]!r}", "duplicate-edge", dup)
        self._vertices = tuple(sorted(vset))
        self._vset = vset
        self._edges = tuple(sorted(es, key=lambda e: e.id))
        self._index: Dict[str, Edge] = index
        self._out: Optional[Dict[str, Tuple[str, ...]]] = None
        self._in: Optional[Dict[str, Tuple[str, ...]]] = None
        self._hash: Optional[int] = None

    # -- accessors -------------------------------------------------------
    @property
    def vertices(self) -> Tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def edge_ids(self) -> Tuple[str, ...]:
        return tuple(e.id for e in self._edges)

    def edge(self, f: str) -> Edge:
        try:
            return self._index[f]
        except KeyError:
            raise HypergraphError(f"unknown edge {f!r}", "unknown-edge", [f]) from None

    def has_edge(self, f: str) -> bool:
        return f in self._index

    def has_vertex(self, v: str) -> bool:
        return v in self._vset

    def require_vertex(self, v: str) -> None:
        if v not in self._vset:
            raise HypergraphError(f"unknown vertex {v!r}", "unknown-vertex", [v])

    def source(self, f: str) -> frozenset:
        return self.edge(f).source

    def range(self, f: str) -> frozenset:
        return self.edge(f).range

    def _incidence(self):
        out: Dict[str, list] = {v: [] for v in self._vertices}
        inc: Dict[str, list] = {v: [] for v in self._vertices}
        for e in self._edges:
            for v in e.source:
                out.setdefault(v, []).append(e.id)
            for v in e.range:
                inc.setdefault(v, []).append(e.id)
        self._out = {v: tuple(ids) for v, ids in out.items()}
        self._in = {v: tuple(ids) for v, ids in inc.items()}

    def out_edges(self, v: str) -> Tuple[str, ...]:
        """Ids of edges whose source contains v, sorted."""
        if self._out is None:
            self._incidence()
        return self._out.get(v, ())

    def in_edges(self, v: str) -> Tuple[str, ...]:
        """Ids of edges whose range contains v, sorted."""
        if self._in is None:
            self._incidence()
        return self._in.get(v, ())

    def replace(self, vertices=None, edges=None) -> "Hypergraph":
        return Hypergraph(self._vertices if vertices is None else vertices,
                          self._edges if edges is None else edges)

    # -- value semantics -------------------------------------------------
    def _key(self):
        return (self._vertices, tuple((e.id, tuple(sorted(e.source)), tuple(sorted(e.range)))
                                      for e in self._edges))

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        es = ", ".join(f"{e.id}:{sorted(e.source)}->{sorted(e.range)}" for e in self._edges)
        return f"Hypergraph(vertices={list(self._vertices)}, edges=[{es}])"

    def __len__(self):
        return len(self._vertices)


# -- validation ----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    ids: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok,
                "violations": [{"code": v.code, "message": v.message, "ids": list(v.ids)}
                               for v in self.violations]}


def validate(H: Hypergraph) -> ValidationReport:
    out: List[Violation] = []
    for v in H.vertices:
        if not isinstance(v, str) or not LABEL_RE.match(v):
            out.append(Violation("bad-label", f"vertex label {v!r} is not over [A-Za-z0-9_@']", (str(v),)))
    for e in H.edges:
        if not isinstance(e.id, str) or not LABEL_RE.match(e.id):
            out.append(Violation("bad-label", f"edge label {e.id!r} is not over [A-Za-z0-9_@']", (str(e.id),)))
        if not e.source:
            out.append(Violation("empty-source", f"edge {e.id!r} has an empty source", (e.id,)))
        for v in sorted(e.source | e.range):
            if not H.has_vertex(v):
                out.append(Violation("dangling-vertex",
                                     f"edge {e.id!r} references unknown vertex {v!r}", (e.id, v)))
    return ValidationReport(tuple(out))


def check_valid(H: Hypergraph) -> None:
    rep = validate(H)
    if not rep.ok:
        v = rep.violations[0]
        raise HypergraphError(v.message, v.code, v.ids)


# -- constructors and simple predicates -----------------------------------

def from_directed_graph(arcs: Iterable, isolated: Iterable[str] = ()) -> Hypergraph:
    """Hypergraph of a directed graph: every arc becomes an edge with
    singleton source and singleton range."""
    edges, verts = [], set(isolated)
    for a in arcs:
        if isinstance(a, dict):
            eid, src, dst = a["id"], a["src"], a["dst"]
        else:
            eid, src, dst = a
        edges.append(Edge(eid, frozenset([src]), frozenset([dst])))
        verts.update((src, dst))
    return Hypergraph(verts, edges)


def hypergraph(vertices: Iterable[str], edges: Dict[str, Tuple[Iterable[str], Iterable[str]]]) -> Hypergraph:
    """Shorthand: hypergraph(['a', 'b'], {'e': (['a'], ['b'])})."""
    return Hypergraph(vertices, [Edge(k, frozenset(s), frozenset(r)) for k, (s, r) in edges.items()])


def is_sink(H: Hypergraph, v: str) -> bool:
    H.require_vertex(v)
    return not H.out_edges(v)


def is_undirected(H: Hypergraph) -> bool:
    return all(not e.range for e in H.edges)


# -- paths and cycles ----------------------------------------------------

def is_path(H: Hypergraph, p: Sequence[str]) -> bool:
    if not p or not all(H.has_edge(f) for f in p):
        return False
    return all(H.range(a) & H.source(b) for a, b in zip(p, p[1:]))


def check_path(H: Hypergraph, p: Sequence[str]) -> None:
    if not is_path(H, p):
        raise HypergraphError(f"not a path: {list(p)}", "invalid-path", list(p))


def is_closed(H: Hypergraph, p: Sequence[str]) -> bool:
    check_path(H, p)
    return bool(H.range(p[-1]) & H.source(p[0]))


def is_cycle(H: Hypergraph, p: Sequence[str]) -> bool:
    if not is_closed(H, p):
        return False
    n = len(p)
    for i in range(n):
        for j in range(n):
            allowed = j == i + 1 or (j == 0 and i == n - 1)
            if not allowed and H.range(p[i]) & H.source(p[j]):
                return False
    return True


# -- fixtures ------------------------------------------------------------

def g1() -> Hypergraph:
    s = ["v1", "v2", "v3"]
    return hypergraph(s, {"e": (s, []), "f": (s, [])})


def g2() -> Hypergraph:
    s = ["v1", "v2"]
    return hypergraph(s, {"e": (s, []), "f": (s, []), "g": (s, [])})


def g3() -> Hypergraph:
    s = ["v", "w"]
    return hypergraph(s, {"e": (s, []), "f": (s, ["w"])})


def g4() -> Hypergraph:
    return hypergraph(["v1", "v2", "w"], {"e": (["v1", "v2"], ["w"]), "f": (["v1", "v2"], ["w"])})


# -- isomorphism ---------------------------------------------------------

@dataclass(frozen=True)
class IsoWitness:
    vertex_map: Dict[str, str] = field(default_factory=dict)
    edge_map: Dict[str, str] = field(default_factory=dict)

    def inverse(self) -> "IsoWitness":
        return IsoWitness({b: a for a, b in self.vertex_map.items()},
                          {b: a for a, b in self.edge_map.items()})

    def to_dict(self) -> dict:
        return {"vertex_map": dict(sorted(self.vertex_map.items())),
                "edge_map": dict(sorted(self.edge_map.items()))}


def check_witness(H1: Hypergraph, H2: Hypergraph, iso: IsoWitness) -> bool:
    """True iff iso is a bijection carrying H1 onto H2 exactly."""
    vm, em = iso.vertex_map, iso.edge_map
    if set(vm) != set(H1.vertices) or sorted(vm.values()) != list(H2.vertices):
        return False
    if set(em) != set(H1.edge_ids) or sorted(em.values()) != list(H2.edge_ids):
        return False
    for e in H1.edges:
        t = H2.edge(em[e.id])
        if frozenset(vm[v] for v in e.source) != t.source:
            return False
        if frozenset(vm[v] for v in e.range) != t.range:
            return False
    return True


def _refine(H: Hypergraph, colors: Dict[str, int]) -> Dict[str, int]:
    """Colour refinement on vertices until the partition is stable."""
    n_cls = len(set(colors.values()))
    while True:
        esig = {}
        for e in H.edges:
            esig[e.id] = (tuple(sorted(colors[v] for v in e.source)),
                          tuple(sorted(colors[v] for v in e.range)))
        sig = {}
        for v in H.vertices:
            inc = []
            for f in H.out_edges(v):
                inc.append((0, v in H.range(f)) + esig[f])
            for f in H.in_edges(v):
                if v not in H.source(f):
                    inc.append((1, False) + esig[f])
            sig[v] = (colors[v], tuple(sorted(inc)))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in H.vertices}
        k = len(ranks)
        if k == n_cls:
            return new
        colors, n_cls = new, k


def _encode(H: Hypergraph, order: Dict[str, int]):
    return tuple(sorted((tuple(sorted(order[v] for v in e.source)),
                         tuple(sorted(order[v] for v in e.range))) for e in H.edges))


def canonical_labeling(H: Hypergraph) -> Tuple[tuple, Tuple[str, ...]]:
    """Return (key, vertex order). Two hypergraphs are isomorphic iff their
    keys are equal; the order lists vertices by canonical position."""
    if not H.vertices:
        return ((0, _encode(H, {})), ())
    colors = _refine(H, {v: 0 for v in H.vertices})
    best: list = [None, None]

    def search(cols: Dict[str, int]):
        cells: Dict[int, list] = {}
        for v, c in cols.items():
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = c
                break
        if target is None:
            code = _encode(H, cols)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, dict(cols)
            return
        members = sorted(cells[target])
        inc = {v: (H.out_edges(v), H.in_edges(v)) for v in members}
        if len(set(inc.values())) == 1:
            # twins are swapped by an automorphism, one branch suffices
            members = members[:1]
        for v in members:
            # individualise v: it becomes strictly smaller than its cell mates
            trial = {u: 2 * c + (0 if c != target or u == v else 1) for u, c in cols.items()}
            search(_refine(H, trial))

    search(colors)
    order = best[1]
    verts = tuple(sorted(H.vertices, key=lambda v: order[v]))
    return (len(verts), best[0]), verts


def canonical_key(H: Hypergraph) -> tuple:
    return canonical_labeling(H)[0]


def are_isomorphic(H1: Hypergraph, H2: Hypergraph) -> Optional[IsoWitness]:
    if len(H1.vertices) != len(H2.vertices) or len(H1.edges) != len(H2.edges):
        return None
    k1, o1 = canonical_labeling(H1)
    k2, o2 = canonical_labeling(H2)
    if k1 != k2:
        return None
    vm = dict(zip(o1, o2))
    pos2 = {v: i for i, v in enumerate(o2)}
    buckets: Dict[tuple, list] = {}
    for e in H2.edges:
        key = (tuple(sorted(pos2[v] for v in e.source)), tuple(sorted(pos2[v] for v in e.range)))
        buckets.setdefault(key, []).append(e.id)
    pos1 = {v: i for i, v in enumerate(o1)}
    em = {}
    for e in H1.edges:
        key = (tuple(sorted(pos1[v] for v in e.source)), tuple(sorted(pos1[v] for v in e.range)))
        em[e.id] = buckets[key].pop(0)
    iso = IsoWitness(vm, em)
    assert check_witness(H1, H2, iso)
    return iso


def canonical_form(H: Hypergraph) -> Hypergraph:
    """The canonical representative: vertices v0.., edges e0.. in canonical order."""
    _, order = canonical_labeling(H)
    pos = {v: i for i, v in enumerate(order)}
    width = len(str(max(len(order), len(H.edges), 1) - 1))
    name = {v: f"v{i:0{width}d}" for i, v in enumerate(order)}
    rows = sorted((tuple(sorted(pos[v] for v in e.source)), tuple(sorted(pos[v] for v in e.range)))
                  for e in H.edges)
    edges = [Edge(f"e{i:0{width}d}", frozenset(name[order[j]] for j in s),
                  frozenset(name[order[j]] for j in r)) for i, (s, r) in enumerate(rows)]
    return Hypergraph(name.values(), edges)


# -- serialization -------------------------------------------------------

def to_document(H: Hypergraph) -> dict:
    return {"vertices": list(H.vertices),
            "edges": [{"id": e.id, "source": sorted(e.source), "range": sorted(e.range)}
                      for e in H.edges]}


def serialize(H: Hypergraph) -> str:
    return json.dumps(to_document(H), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _strings(value, where: str) -> List[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise ParseError("expected an array of strings", where=where)
    if len(set(value)) != len(value):
        raise ParseError("duplicate entry", where=where)
    return value


def from_document(doc) -> Hypergraph:
    if not isinstance(doc, dict):
        raise ParseError("document must be an object", where="$")
    extra = set(doc) - {"vertices", "edges"}
    if extra:
        raise ParseError(f"unknown key {sorted(extra)[0]!r}", where="$")
    verts = _strings(doc.get("vertices", []), "$.vertices")
    raw = doc.get("edges", [])
    if not isinstance(raw, list):
        raise ParseError("expected an array", where="$.edges")
    edges, seen = [], set()
    for i, item in enumerate(raw):
        where = f"$.edges[{i}]"
        if not isinstance(item, dict) or not isinstance(item.get("id"), str):
            raise ParseError("edge must be an object with a string id", where=where)
        extra = set(item) - {"id", "source", "range"}
        if extra:
            raise ParseError(f"unknown key {sorted(extra)[0]!r}", where=where)
        if item["id"] in seen:
            raise ParseError(f"duplicate edge id {item['id']!r}", where=where)
        seen.add(item["id"])
        edges.append(Edge(item["id"], frozenset(_strings(item.get("source", []), where + ".source")),
                          frozenset(_strings(item.get("range", []), where + ".range"))))
    return Hypergraph(verts, edges)


def parse(text: str) -> Hypergraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return from_document(doc)
