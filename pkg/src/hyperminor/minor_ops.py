"""The seven minor operations, composite rewrites built from them, and traces."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (Edge, GuardError, Hypergraph, HypergraphError, LABEL_RE,
                   check_path)

PRIMITIVES = ("DeleteVertex", "DeleteEdge", "ForwardContract", "BackwardContract",
              "CutEdge", "SeparateSource", "DecomposeRange")
COMPOSITES = ("RemoveVertexFromSource", "DeleteSet", "ContractPath", "SeparateSourceOfEdge")
KINDS = PRIMITIVES + COMPOSITES


@dataclass(frozen=True)
class Operation:
    """One applied operation. ``fresh`` lists the ids it created, if any."""
    kind: str
    args: Tuple[str, ...]
    fresh: Tuple[str, ...] = ()

    def to_line(self) -> str:
        parts = [self.kind, *self.args]
        if self.fresh:
            parts.append("fresh=" + ",".join(self.fresh))
        return " ".join(parts)

    @staticmethod
    def from_line(line: str) -> "Operation":
        parts = line.split()
        if not parts or parts[0] not in KINDS:
            raise HypergraphError(f"unknown operation in {line!r}", "bad-trace")
        fresh: Tuple[str, ...] = ()
        if parts[-1].startswith("fresh="):
            fresh = tuple(x for x in parts.pop()[6:].split(",") if x)
        for a in parts[1:]:
            if not LABEL_RE.match(a.split(":", 1)[-1]):
                raise HypergraphError(f"bad argument {a!r} in {line!r}", "bad-trace")
        return Operation(parts[0], tuple(parts[1:]), fresh)

    def __str__(self):
        return self.to_line()


# -- fresh names ---------------------------------------------------------

def fresh_vertex(H: Hypergraph, w: str) -> str:
    n = 1
    while H.has_vertex(f"{w}@s{n}"):
        n += 1
    return f"{w}@s{n}"


def decomposition_ids(H: Hypergraph, f: str) -> Tuple[str, ...]:
    """Ids for the pieces of f, one per range vertex in sorted order."""
    taken = set(H.edge_ids)
    out = []
    for v in sorted(H.range(f)):
        name = f"{f}@{v}"
        n = 1
        while name in taken:
            name = f"{f}@{v}@{n}"
            n += 1
        taken.add(name)
        out.append(name)
    return tuple(out)


# -- primitives ----------------------------------------------------------

def delete_vertex(H: Hypergraph, v: str) -> Hypergraph:
    H.require_vertex(v)
    edges = [Edge(e.id, e.source - {v}, e.range - {v}) for e in H.edges if e.source != {v}]
    return Hypergraph([u for u in H.vertices if u != v], edges)


def delete_edge(H: Hypergraph, f: str) -> Hypergraph:
    H.edge(f)
    return H.replace(edges=[e for e in H.edges if e.id != f])


def _only_start(H: Hypergraph, f: str, src: frozenset) -> Optional[str]:
    for e in H.edges:
        if e.id != f and e.source & src:
            return e.id
    return None


def forward_contract(H: Hypergraph, f: str) -> Hypergraph:
    ef = H.edge(f)
    if len(ef.source) != 1:
        raise GuardError(f"forward contraction of {f!r}: source is not a singleton",
                         "non-singleton-source", [f])
    (w,) = ef.source
    other = _only_start(H, f, ef.source)
    if other is not None:
        raise GuardError(f"forward contraction of {f!r}: edge {other!r} also starts from {w!r}",
                         "sibling-start", [f, other])
    for e in H.edges:
        if w in e.range and e.range & ef.range:
            raise GuardError(f"forward contraction of {f!r}: edge {e.id!r} ranges into {w!r} "
                             f"and meets r({f})", "range-overlap", [f, e.id])
    edges = [Edge(e.id, e.source, (e.range - {w}) | ef.range if w in e.range else e.range)
             for e in H.edges if e.id != f]
    return Hypergraph([u for u in H.vertices if u != w], edges)


def backward_contract(H: Hypergraph, f: str) -> Hypergraph:
    ef = H.edge(f)
    if len(ef.range) != 1:
        raise GuardError(f"backward contraction of {f!r}: range is not a singleton",
                         "non-singleton-range", [f])
    (w,) = ef.range
    other = _only_start(H, f, ef.source)
    if other is not None:
        raise GuardError(f"backward contraction of {f!r}: edge {other!r} also starts from s({f})",
                         "sibling-start", [f, other])
    for e in H.edges:
        if w in e.range and e.range & ef.source:
            raise GuardError(f"backward contraction of {f!r}: edge {e.id!r} ranges into {w!r} "
                             f"and meets s({f})", "range-overlap", [f, e.id])

    def sub(xs: frozenset) -> frozenset:
        return (xs - {w}) | ef.source if w in xs else xs

    edges = [Edge(e.id, sub(e.source), sub(e.range)) for e in H.edges if e.id != f]
    return Hypergraph([u for u in H.vertices if u != w], edges)


def cut_edge(H: Hypergraph, f: str) -> Hypergraph:
    ef = H.edge(f)
    if not ef.range:
        return H
    return H.replace(edges=[Edge(e.id, e.source, frozenset()) if e.id == f else e for e in H.edges])


def _check_separation(H: Hypergraph, F: Iterable[str], w: str) -> frozenset:
    F = frozenset(F)
    H.require_vertex(w)
    for f in sorted(F):
        H.edge(f)
    if not F:
        raise GuardError("source separation needs a nonempty edge set", "empty-set", [w])
    start = frozenset(H.out_edges(w))
    bad = sorted(F - start)
    if bad:
        raise GuardError(f"source separation at {w!r}: {bad[0]!r} does not start from {w!r}",
                         "not-in-source", [w, bad[0]])
    if F == start:
        raise GuardError(f"source separation at {w!r}: the edge set is not a strict subset "
                         f"of the edges starting from {w!r}", "not-strict", [w])
    return F


def separate_source(H: Hypergraph, F: Iterable[str], w: str,
                    fresh: Optional[str] = None) -> Tuple[Hypergraph, str]:
    F = _check_separation(H, F, w)
    if fresh is None:
        fresh = fresh_vertex(H, w)
    elif H.has_vertex(fresh) or not LABEL_RE.match(fresh):
        raise GuardError(f"fresh vertex {fresh!r} is not fresh", "not-fresh", [fresh])
    edges = []
    for e in H.edges:
        src = (e.source - {w}) | {fresh} if e.id in F else e.source
        rng = e.range | {fresh} if w in e.range else e.range
        edges.append(Edge(e.id, src, rng))
    return Hypergraph(H.vertices + (fresh,), edges), fresh


def decompose_range_map(H: Hypergraph, f: str,
                        fresh: Optional[Sequence[str]] = None) -> Tuple[Hypergraph, Dict[str, str]]:
    """Range decomposition, also returning range vertex -> new edge id."""
    ef = H.edge(f)
    if not ef.range:
        raise GuardError(f"range decomposition of {f!r}: empty range", "empty-range", [f])
    if fresh is None:
        fresh = decomposition_ids(H, f)
    fresh = tuple(fresh)
    taken = set(H.edge_ids)
    if len(fresh) != len(ef.range) or len(set(fresh)) != len(fresh) or taken & set(fresh):
        raise GuardError(f"range decomposition of {f!r}: bad fresh ids {list(fresh)}",
                         "not-fresh", [f])
    names = dict(zip(sorted(ef.range), fresh))
    edges = [e for e in H.edges if e.id != f]
    edges += [Edge(names[v], ef.source, frozenset([v])) for v in sorted(ef.range)]
    return H.replace(edges=edges), names


def decompose_range(H: Hypergraph, f: str, fresh: Optional[Sequence[str]] = None) -> Hypergraph:
    return decompose_range_map(H, f, fresh)[0]


# -- composite operations and predicates -----------------------------------

def remove_vertex_from_source(H: Hypergraph, f: str, w: str) -> Hypergraph:
    ef = H.edge(f)
    H.require_vertex(w)
    if w not in ef.source:
        raise GuardError(f"{w!r} is not in the source of {f!r}", "not-in-source", [f, w])
    if ef.range:
        raise GuardError(f"{f!r} has nonempty range", "nonempty-range", [f])
    others = [e for e in H.out_edges(w) if e != f]
    if others:
        raise GuardError(f"edge {others[0]!r} also starts from {w!r}", "sibling-start", [f, others[0]])
    if ef.source == {w}:
        return delete_edge(H, f)
    return H.replace(edges=[Edge(e.id, e.source - {w}, e.range) if e.id == f else e
                            for e in H.edges])


def _check_members(H: Hypergraph, vertices, edges) -> Tuple[frozenset, frozenset]:
    V, E = frozenset(vertices), frozenset(edges)
    for v in sorted(V):
        H.require_vertex(v)
    for e in sorted(E):
        H.edge(e)
    return V, E


def is_ideally_closed(H: Hypergraph, vertices: Iterable[str] = (), edges: Iterable[str] = ()) -> bool:
    V, E = _check_members(H, vertices, edges)
    for e in H.edges:
        if e.id in E and not e.range <= V:
            return False
        if (e.source <= V or (e.range and e.range <= V)) and e.id not in E:
            return False
    for v in H.vertices:
        out = H.out_edges(v)
        if out and all(e in E for e in out) and v not in V:
            return False
    return True


def delete_set(H: Hypergraph, vertices: Iterable[str] = (), edges: Iterable[str] = ()) -> Hypergraph:
    V, E = _check_members(H, vertices, edges)
    for e in sorted(E):
        H = delete_edge(H, e)
    for v in sorted(V):
        H = delete_vertex(H, v)
    return H


def star_condition(H: Hypergraph, F: Iterable[str], w: str) -> bool:
    """Every edge g outside F starting from w meets each s(f), f in F, only in w.

    F must be a nonempty set of edges starting from w; strictness is not
    required, so the condition holds vacuously when F is all of them.
    """
    try:
        F = _check_separation(H, F, w)
    except GuardError as exc:
        if exc.code != "not-strict":
            raise
        return True
    for g in H.out_edges(w):
        if g in F:
            continue
        for f in F:
            if H.source(f) & H.source(g) != {w}:
                return False
    return True


def separate_source_of_edge(H: Hypergraph, f: str) -> Hypergraph:
    rec = Recorder(H)
    rec.separate_source_of_edge(f)
    return rec.H


def contract_path(H: Hypergraph, p: Sequence[str]) -> Hypergraph:
    """Path contraction: f2..fn disappear and r(f1) becomes r(fn).

    The result is produced by replaying explicit minor operations, so surviving
    edges that had a contracted vertex in their range come back renamed; see
    ``Recorder.contract_path`` for the id bookkeeping.
    """
    rec = Recorder(H)
    rec.contract_path(p)
    return rec.H


# -- replay --------------------------------------------------------------

def _split_set_args(args: Sequence[str]) -> Tuple[List[str], List[str]]:
    vs, es = [], []
    for a in args:
        tag, _, name = a.partition(":")
        if tag == "v":
            vs.append(name)
        elif tag == "e":
            es.append(name)
        else:
            raise HypergraphError(f"DeleteSet member {a!r} must be tagged v: or e:", "bad-trace")
    return vs, es


def _arity(op: Operation, n: int) -> None:
    if len(op.args) != n:
        raise HypergraphError(f"{op.kind} takes {n} argument(s): {op.to_line()!r}", "bad-trace")


def apply(H: Hypergraph, op: Operation) -> Hypergraph:
    """Apply one recorded operation, reusing its recorded fresh ids."""
    k, a = op.kind, op.args
    if k in ("DeleteVertex", "DeleteEdge", "ForwardContract", "BackwardContract", "CutEdge",
             "DecomposeRange", "SeparateSourceOfEdge"):
        _arity(op, 1)
    if k == "DeleteVertex":
        return delete_vertex(H, a[0])
    if k == "DeleteEdge":
        return delete_edge(H, a[0])
    if k == "ForwardContract":
        return forward_contract(H, a[0])
    if k == "BackwardContract":
        return backward_contract(H, a[0])
    if k == "CutEdge":
        return cut_edge(H, a[0])
    if k == "SeparateSource":
        if len(a) < 2 or len(op.fresh) > 1:
            raise HypergraphError(f"bad SeparateSource step {op.to_line()!r}", "bad-trace")
        return separate_source(H, a[1:], a[0], op.fresh[0] if op.fresh else None)[0]
    if k == "DecomposeRange":
        return decompose_range(H, a[0], op.fresh or None)
    if k == "RemoveVertexFromSource":
        _arity(op, 2)
        return remove_vertex_from_source(H, a[0], a[1])
    if k == "DeleteSet":
        vs, es = _split_set_args(a)
        return delete_set(H, vs, es)
    if k == "ContractPath":
        return contract_path(H, a)
    if k == "SeparateSourceOfEdge":
        return separate_source_of_edge(H, a[0])
    raise HypergraphError(f"unknown operation {k!r}", "bad-trace")


@dataclass
class Trace:
    start: Hypergraph
    steps: List[Operation] = field(default_factory=list)

    def replay(self, start: Optional[Hypergraph] = None) -> Hypergraph:
        H = self.start if start is None else start
        for op in self.steps:
            H = apply(H, op)
        return H

    def states(self) -> List[Hypergraph]:
        H, out = self.start, [self.start]
        for op in self.steps:
            H = apply(H, op)
            out.append(H)
        return out

    def to_text(self) -> str:
        return "".join(op.to_line() + "\n" for op in self.steps)

    def __len__(self):
        return len(self.steps)


def parse_trace(text: str) -> Tuple[List[Operation], Dict[str, str]]:
    """Parse a trace log into its steps and its ``# key: value`` directives."""
    steps, meta = [], {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        steps.append(Operation.from_line(line))
    return steps, meta


class Recorder:
    """Applies operations to a current hypergraph while recording them.

    Composite operations are expanded into primitive steps, so the recorded
    trace replays with the seven operations alone.
    """

    def __init__(self, H: Hypergraph):
        self.start = H
        self.H = H
        self.steps: List[Operation] = []

    def trace(self) -> Trace:
        return Trace(self.start, list(self.steps))

    def _push(self, H: Hypergraph, op: Operation) -> None:
        self.H = H
        self.steps.append(op)

    def delete_vertex(self, v: str) -> None:
        self._push(delete_vertex(self.H, v), Operation("DeleteVertex", (v,)))

    def delete_edge(self, f: str) -> None:
        self._push(delete_edge(self.H, f), Operation("DeleteEdge", (f,)))

    def forward_contract(self, f: str) -> None:
        self._push(forward_contract(self.H, f), Operation("ForwardContract", (f,)))

    def backward_contract(self, f: str) -> None:
        self._push(backward_contract(self.H, f), Operation("BackwardContract", (f,)))

    def cut_edge(self, f: str) -> None:
        self._push(cut_edge(self.H, f), Operation("CutEdge", (f,)))

    def separate_source(self, F: Iterable[str], w: str) -> str:
        F = sorted(set(F))
        H, fresh = separate_source(self.H, F, w)
        self._push(H, Operation("SeparateSource", (w, *F), (fresh,)))
        return fresh

    def decompose_range(self, f: str) -> Dict[str, str]:
        H, names = decompose_range_map(self.H, f)
        self._push(H, Operation("DecomposeRange", (f,), tuple(names[v] for v in sorted(names))))
        return names

    def remove_vertex_from_source(self, f: str, w: str) -> None:
        self._push(remove_vertex_from_source(self.H, f, w), Operation("RemoveVertexFromSource", (f, w)))

    def delete_set(self, vertices: Iterable[str] = (), edges: Iterable[str] = (),
                   expand: bool = True) -> None:
        V, E = _check_members(self.H, vertices, edges)
        if not expand:
            args = tuple(f"e:{e}" for e in sorted(E)) + tuple(f"v:{v}" for v in sorted(V))
            self._push(delete_set(self.H, V, E), Operation("DeleteSet", args))
            return
        for e in sorted(E):
            self.delete_edge(e)
        for v in sorted(V):
            self.delete_vertex(v)

    def keep_only(self, vertices: Iterable[str], edges: Iterable[str]) -> None:
        """Delete every edge and vertex not listed."""
        keep_e, keep_v = set(edges), set(vertices)
        self.delete_set([v for v in self.H.vertices if v not in keep_v],
                        [e for e in self.H.edge_ids if e not in keep_e])

    def separate_source_of_edge(self, f: str) -> Dict[str, str]:
        """Separate every shared source vertex of f; returns old -> fresh vertex."""
        self.H.edge(f)
        out = {}
        for w in sorted(self.H.source(f)):
            if any(e != f for e in self.H.out_edges(w)):
                out[w] = self.separate_source([f], w)
        return out

    def contract_path(self, p: Sequence[str]) -> Dict[str, Optional[str]]:
        """Contract a path in place.

        Returns a map from each edge id before the call to its id afterwards
        (None for removed edges). The first edge ends with range r(fn).
        """
        H = self.H
        check_path(H, p)
        p = list(p)
        names: Dict[str, Optional[str]] = {e: e for e in H.edge_ids}
        if len(p) == 1:
            return names
        from .normalization import is_normal
        if not is_normal(H):
            raise GuardError("path contraction needs a normal host", "non-normal", p)
        if p[0] in p[1:]:
            raise GuardError("the first edge of the path occurs again", "repeated-first", [p[0]])
        for f in p[1:]:
            if len(H.source(f)) != 1:
                raise GuardError(f"edge {f!r} on the path has a non-singleton source",
                                 "non-singleton-source", [f])
        # loop-erase the vertex walk s(f2), ..., s(fn), r(fn)
        walk: List[Tuple[object, Optional[int]]] = []
        stops = [next(iter(H.source(f))) for f in p[1:]]
        last = H.range(p[-1])
        stops.append(next(iter(last)) if last else object())
        for k, u in enumerate(stops):
            out_edge = k + 1 if k + 1 < len(p) else None
            hit = next((i for i, (x, _) in enumerate(walk) if x == u), None)
            if hit is not None:
                del walk[hit:]
            walk.append((u, out_edge))
        kept = [p[0]] + [p[i] for _, i in walk if i is not None]
        erased = [f for f in dict.fromkeys(p[1:]) if f not in kept]

        for k in range(len(kept) - 1, 0, -1):
            a, b = names[kept[k - 1]], names[kept[k]]
            (u,) = self.H.source(b)
            assert self.H.range(a) == {u}, (a, b)
            if not [e for e in self.H.out_edges(u) if e != b]:
                raise GuardError(f"no second edge starts from {u!r}", "lonely-vertex", [b])
            u2 = self.separate_source([b], u)
            current = {v: k2 for k2, v in names.items() if v is not None}
            for e in [e for e in self.H.edge_ids if u2 in self.H.range(e)]:
                pieces = self.decompose_range(e)
                keep, drop = (pieces[u2], pieces[u]) if e == a else (pieces[u], pieces[u2])
                self.delete_edge(drop)
                if e in current:
                    names[current[e]] = keep
            self.forward_contract(b)
            names[kept[k]] = None
        for f in erased:
            if names[f] is not None:
                self.delete_edge(names[f])
                names[f] = None
        return names
