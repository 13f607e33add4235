"""Forbidden minors, constructive minor derivation and verdicts.

Every construction below is replayed on a ``Recorder`` and only accepted when
the endpoint is isomorphic to the catalog entry it aims for, so a wrong turn
in the case analysis can cost completeness but never soundness.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from .core import (Hypergraph, HypergraphError, IsoWitness, are_isomorphic,
                   check_witness, g1, g2, g3, g4, is_undirected)
from .minor_ops import Operation, Recorder, Trace, apply, is_ideally_closed, parse_trace
from .reduction import is_reduced, reduce

log = logging.getLogger(__name__)

NAMES = ("g1", "g2", "g3", "g4")


def forbidden_catalog() -> List[Hypergraph]:
    return [g1(), g2(), g3(), g4()]


def match_forbidden(H: Hypergraph) -> Optional[int]:
    for i, G in enumerate(forbidden_catalog(), 1):
        if are_isomorphic(H, G) is not None:
            return i
    return None


@dataclass(frozen=True)
class Certificate:
    start: Hypergraph
    steps: Tuple[Operation, ...]
    target_index: int
    iso: IsoWitness
    case: str = ""

    @property
    def trace(self) -> Trace:
        return Trace(self.start, list(self.steps))

    def endpoint(self) -> Hypergraph:
        return self.trace.replay()

    def to_text(self) -> str:
        # index 0 marks a search certificate for a target outside the catalog
        name = NAMES[self.target_index - 1] if self.target_index else "custom"
        lines = [f"# target: {name}"]
        if self.case:
            lines.append(f"# case: {self.case}")
        lines.append("# vertex-map: " + " ".join(f"{a}={b}" for a, b in sorted(self.iso.vertex_map.items())))
        lines.append("# edge-map: " + " ".join(f"{a}={b}" for a, b in sorted(self.iso.edge_map.items())))
        lines += [op.to_line() for op in self.steps]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(start: Hypergraph, text: str) -> "Certificate":
        steps, meta = parse_trace(text)
        try:
            idx = 0 if meta["target"] == "custom" else NAMES.index(meta["target"]) + 1
        except (KeyError, ValueError):
            raise HypergraphError("certificate has no valid target directive", "bad-certificate") from None

        def pairs(key):
            return dict(p.split("=", 1) for p in meta.get(key, "").split() if "=" in p)

        return Certificate(start, tuple(steps), idx, IsoWitness(pairs("vertex-map"), pairs("edge-map")),
                           meta.get("case", ""))


def verify_certificate(start: Hypergraph, c: Certificate) -> bool:
    if not 1 <= c.target_index <= 4:
        return False
    H = start
    try:
        for op in c.steps:
            H = apply(H, op)
    except HypergraphError as exc:
        log.debug("certificate replay failed: %s", exc)
        return False
    return check_witness(H, forbidden_catalog()[c.target_index - 1], c.iso)


# -- construction toolkit ------------------------------------------------

class _Skip(Exception):
    pass


def _need(cond) -> None:
    if not cond:
        raise _Skip


def _single(xs) -> str:
    _need(len(xs) == 1)
    return next(iter(xs))


def _attempt(H: Hypergraph, case: str, build: Callable[[Recorder], int]) -> Optional[Certificate]:
    rec = Recorder(H)
    try:
        idx = build(rec)
    except (_Skip, HypergraphError):
        return None
    iso = are_isomorphic(rec.H, forbidden_catalog()[idx - 1])
    if iso is None:
        log.debug("construction %s did not reach g%d", case, idx)
        return None
    return Certificate(H, tuple(rec.steps), idx, iso, case)


def _partners(H: Hypergraph, e: str, exclude: Sequence[str] = (), avoid: Sequence[str] = ()) -> List[str]:
    """Edges sharing at least two source vertices (outside ``avoid``) with e."""
    out = []
    for g in H.edge_ids:
        if g == e or g in exclude:
            continue
        if len((H.source(e) & H.source(g)) - set(avoid)) >= 2:
            out.append(g)
    return out


def _cut(rec: Recorder, f: str) -> None:
    if rec.H.range(f):
        rec.cut_edge(f)


# each pattern works on rec.H and returns the catalog index it aims for

def _g3_cut(rec: Recorder, e: str, f: str) -> int:
    """r(e)={w} with w in s(e); f also starts from w and shares another vertex."""
    H = rec.H
    w = _single(H.range(e))
    _need(f != e and w in H.source(e) and w in H.source(f))
    common = sorted((H.source(e) & H.source(f)) - {w})
    _need(common)
    _cut(rec, f)
    rec.keep_only([common[0], w], [e, f])
    return 3


def _g1_backward(rec: Recorder, e: str, f: str) -> int:
    """r(e)=r(f)={w}, w in s(e) but not in s(f), |s(f)| >= 2."""
    H = rec.H
    w = _single(H.range(e))
    _need(f != e and H.range(f) == {w} and w in H.source(e) and w not in H.source(f))
    _need(len(H.source(f)) >= 2 and len(H.source(e)) >= 2)
    v = min(H.source(e) - {w})
    rec.separate_source_of_edge(f)
    u1, u2 = sorted(rec.H.source(f))[:2]
    rec.keep_only([v, w, u1, u2], [e, f])
    rec.backward_contract(f)
    for piece in rec.decompose_range(e).values():
        rec.cut_edge(piece)
    return 1


def _g2_split(rec: Recorder, h: str, sep: str, third: str) -> int:
    """r(h)={u}, a second edge leaves u: split u so that h decomposes in two,
    then keep h's pieces and ``third`` over two common vertices."""
    H = rec.H
    u = _single(H.range(h))
    _need(third != h and sep in H.out_edges(u) and len(H.out_edges(u)) >= 2)
    common = sorted((H.source(h) & H.source(third)) - {u})
    _need(len(common) >= 2)
    v1, v2 = common[:2]
    _cut(rec, third)
    rec.separate_source([sep], u)
    pieces = rec.decompose_range(h)
    rec.keep_only([v1, v2], list(pieces.values()) + [third])
    return 2


def _g2_backward(rec: Recorder, e: str, f: str, third: str) -> int:
    """r(e)=r(f)={w}, w in neither source, |s(f)| >= 2, third shares two
    source vertices with e: contract f backwards so e's range doubles."""
    H = rec.H
    w = _single(H.range(e))
    _need(f != e and third not in (e, f) and H.range(f) == {w})
    _need(w not in H.source(e) and w not in H.source(f) and len(H.source(f)) >= 2)
    common = sorted(H.source(e) & H.source(third))
    _need(len(common) >= 2)
    v1, v2 = common[:2]
    _cut(rec, third)
    rec.separate_source_of_edge(f)
    u1, u2 = sorted(rec.H.source(f))[:2]
    rec.keep_only([v1, v2, u1, u2, w], [e, third, f])
    rec.backward_contract(f)
    pieces = list(rec.decompose_range(e).values())
    for p in pieces:
        rec.cut_edge(p)
    rec.keep_only([v1, v2], pieces + [third])
    return 2


def _g4_delete(rec: Recorder, e: str, f: str) -> int:
    H = rec.H
    w = _single(H.range(e))
    _need(f != e and H.range(f) == {w} and w not in H.source(e) | H.source(f))
    common = sorted(H.source(e) & H.source(f))
    _need(len(common) >= 2)
    rec.keep_only(common[:2] + [w], [e, f])
    return 4


def _g3_loop(rec: Recorder, e: str, path: Sequence[str]) -> int:
    """path = e f2 .. fn with r(fn) = r(e): contract f2..fn into a loop at w."""
    H = rec.H
    w = _single(H.range(e))
    _need(len(path) >= 2 and path[0] == e and w not in H.source(e) and len(H.source(e)) >= 2)
    names = rec.contract_path(path[1:])
    e, f2 = names[e], names[path[1]]
    _need(e is not None and f2 is not None)
    _need(rec.H.source(f2) == {w} and rec.H.range(f2) == {w})
    v1, v2 = sorted(rec.H.source(e))[:2]
    rec.keep_only([v1, v2, w], [e, f2])
    rec.backward_contract(e)
    pieces = rec.decompose_range(f2)
    rec.cut_edge(pieces[v1])
    return 3


def _g1_shared(rec: Recorder, h: str, f: str, f2: str) -> int:
    """r(h)={v} with v inside two sources sharing two vertices: contracting h
    backwards grows both sources to three common vertices."""
    H = rec.H
    v = _single(H.range(h))
    _need(len({h, f, f2}) == 3 and len(H.source(h)) >= 2 and v not in H.source(h))
    common = sorted((H.source(f) & H.source(f2)) - {v})
    _need(v in H.source(f) & H.source(f2) and common)
    _cut(rec, f)
    _cut(rec, f2)
    rec.separate_source_of_edge(h)
    u1, u2 = sorted(rec.H.source(h))[:2]
    rec.keep_only([v, common[0], u1, u2], [h, f, f2])
    rec.backward_contract(h)
    return 1


def _g1_delete(rec: Recorder, e: str, f: str) -> int:
    common = sorted(rec.H.source(e) & rec.H.source(f))
    _need(e != f and len(common) >= 3)
    _cut(rec, e)
    _cut(rec, f)
    rec.keep_only(common[:3], [e, f])
    return 1


def _g2_delete(rec: Recorder, u: str, v: str, edges: Sequence[str]) -> int:
    _need(len(set(edges)) == 3 and all({u, v} <= rec.H.source(e) for e in edges))
    for e in edges:
        _cut(rec, e)
    rec.keep_only([u, v], edges)
    return 2


def _with_path(path: Sequence[str], then: Callable[[Recorder, dict], int]) -> Callable[[Recorder], int]:
    """Contract a path first, then continue with the renamed ids."""
    def build(rec: Recorder) -> int:
        names = rec.contract_path(path)
        return then(rec, names)
    return build


# -- easy paths ------------------------------------------------------------

def _easy_path(H: Hypergraph, e: str) -> Optional[Tuple[str, ...]]:
    if len(H.source(e)) > 1:
        return (e,)
    # dist[g] = number of edges from g to e along singleton-source successors
    dist = {e: 0}
    layer = [e]
    starts = []
    while layer and not starts:
        nxt = []
        for g in layer:
            for h in sorted({x for v in H.source(g) for x in H.in_edges(v)}):
                if h in dist:
                    continue
                dist[h] = dist[g] + 1
                if len(H.source(h)) > 1:
                    starts.append(h)
                else:
                    nxt.append(h)
        layer = sorted(set(nxt))
    if not starts:
        return None
    path = [min(starts)]
    while path[-1] != e:
        d = dist[path[-1]] - 1
        succ = sorted(g for g, k in dist.items() if k == d and len(H.source(g)) == 1
                      and H.range(path[-1]) & H.source(g))
        path.append(succ[0])
    return tuple(path)


def easy_path_to(H: Hypergraph, e: str) -> Tuple[str, ...]:
    """Shortest (then lexicographically least) path e1..en = e with
    |s(e1)| > 1 and singleton sources afterwards."""
    if not H.range(e):
        raise HypergraphError(f"edge {e!r} has empty range", "empty-range", [e])
    if not is_reduced(H):
        raise HypergraphError("easy paths need a reduced hypergraph", "non-reduced")
    p = _easy_path(H, e)
    if p is None:
        raise HypergraphError(f"no easy path ends in {e!r}", "no-path", [e])
    return p


# -- the case analysis -----------------------------------------------------

Attempt = Tuple[str, Callable[[Recorder], int]]


def _case_a(H: Hypergraph, e: str, w: str) -> Iterator[Attempt]:
    for f in H.out_edges(w):
        if f != e:
            yield "A1", lambda rec, f=f: _g3_cut(rec, e, f)
    for f in H.in_edges(w):
        if f == e:
            continue
        if len(H.source(f)) >= 2:
            yield "A2", lambda rec, f=f: _g1_backward(rec, e, f)
            continue
        path = _easy_path(H, f)
        if path is None or e in path:
            continue
        yield "A3", _with_path(path, lambda rec, n, p=path: _g1_backward(rec, n[e], n[p[0]]))


def _case_c(H: Hypergraph, e: str, w: str) -> Iterator[Attempt]:
    empty = [f for f in H.out_edges(w) if f != e and not H.range(f)]
    if len(empty) >= 2:
        for third in _partners(H, e):
            yield "C", lambda rec, t=third: _g2_split(rec, e, empty[0], t)


def _d_after(rec: Recorder, e: str, f: str) -> int:
    """Continue case D once f has a big source (possibly after contraction)."""
    for third in _partners(rec.H, e, exclude=[f]):
        snapshot = (rec.H, len(rec.steps))
        try:
            return _g2_backward(rec, e, f, third)
        except (_Skip, HypergraphError):
            rec.H = snapshot[0]
            del rec.steps[snapshot[1]:]
    return _g4_delete(rec, e, f)


def _case_d(H: Hypergraph, e: str, w: str) -> Iterator[Attempt]:
    for f in H.in_edges(w):
        if f == e:
            continue
        if len(H.source(f)) >= 2:
            if w in H.source(f):
                continue
            for third in _partners(H, e, exclude=[f]):
                yield ("D1" if not H.source(e) & H.source(f) else "D2"), \
                    lambda rec, f=f, t=third: _g2_backward(rec, e, f, t)
            yield "D2", lambda rec, f=f: _g4_delete(rec, e, f)
            continue
        path = _easy_path(H, f)
        if path is None:
            continue
        f1 = path[0]
        if f1 == e:
            yield "D3.2", lambda rec, p=path: _g3_loop(rec, e, p)
            continue
        if e in path:
            continue
        if len(H.source(f1) & H.source(e)) >= 2 and len(path) >= 2:
            (u2,) = H.source(path[1])
            for sib in H.out_edges(u2):
                if sib != path[1]:
                    yield "D3.3", lambda rec, s=sib, f1=f1: _g2_split(rec, f1, s, e)
        case = "D3.1" if not H.source(f1) & H.source(e) else "D3.3"
        yield case, _with_path(path, lambda rec, n, f1=f1: _d_after(rec, n[e], n[f1]))


def _case_b(H: Hypergraph, e: str, w: str) -> Iterator[Attempt]:
    outs = H.out_edges(w)
    for f in outs:
        if f == e or not H.range(f):
            continue
        if len(H.source(f)) == 1:
            if H.range(f) == H.source(f):
                continue  # handled as case D
            for sib in outs:
                for third in _partners(H, e):
                    yield "B1", lambda rec, s=sib, t=third: _g2_split(rec, e, s, t)
        else:
            yield from _case_b2(H, e)
            return


def _case_b2(H: Hypergraph, e: str) -> Iterator[Attempt]:
    seq, cur = [e], e
    for _ in range(len(H.edges) + 1):
        if len(H.range(cur)) != 1:
            return
        (w,) = H.range(cur)
        nxt = [g for g in H.out_edges(w) if g != cur and H.range(g) and len(H.source(g)) >= 2]
        if not nxt:
            return
        if nxt[0] in seq:
            cycle = seq[seq.index(nxt[0]):]
            break
        seq.append(nxt[0])
        cur = nxt[0]
    else:
        log.warning("case B2 chain exceeded |E1|+1 steps from %s", e)
        return
    n = len(cycle)
    for i, fi in enumerate(cycle):
        (vi,) = H.range(fi)
        for other in H.out_edges(vi):
            if other != cycle[(i + 1) % n]:
                for third in _partners(H, fi, avoid=[vi]):
                    yield "B2", lambda rec, h=fi, s=other, t=third: _g2_split(rec, h, s, t)
        for other in H.in_edges(vi):
            if other != fi:
                yield from _case_d(H, fi, vi)
                break


def _extra(H: Hypergraph) -> Iterator[Attempt]:
    """Direct constructions used in the G4-only analysis; they also catch
    configurations where the candidate loop above stops short."""
    for e, f in combinations(H.edge_ids, 2):
        if len(H.source(e) & H.source(f)) >= 3:
            yield "shared-3", lambda rec, e=e, f=f: _g1_delete(rec, e, f)
    for u, v in combinations(H.vertices, 2):
        common = [e for e in H.out_edges(u) if v in H.source(e)]
        if len(common) >= 3:
            yield "shared-pair", lambda rec, u=u, v=v, c=common[:3]: _g2_delete(rec, u, v, c)
    for h in H.edge_ids:
        if len(H.range(h)) != 1:
            continue
        (v,) = H.range(h)
        pairs = [(f, f2) for f, f2 in combinations([x for x in H.out_edges(v) if x != h], 2)
                 if len(H.source(f) & H.source(f2)) >= 2]
        if not pairs:
            continue
        if len(H.source(h)) >= 2:
            for f, f2 in pairs:
                yield "G4-step4", lambda rec, f=f, f2=f2, h=h: _g1_shared(rec, h, f, f2)
        else:
            path = _easy_path(H, h)
            if path is None or any(x in path for pr in pairs for x in pr):
                continue
            for f, f2 in pairs:
                yield "G4-step4", _with_path(
                    path, lambda rec, n, f=f, f2=f2, p=path: _g1_shared(rec, n[p[0]], n[f], n[f2]))


def _candidates(H: Hypergraph) -> List[str]:
    return [e.id for e in H.edges if len(e.range) == 1 and len(e.source) >= 2]


def _attempts(H: Hypergraph) -> Iterator[Attempt]:
    for e in _candidates(H):
        (w,) = H.range(e)
        if w in H.source(e):
            yield from _case_a(H, e, w)
        else:
            yield from _case_c(H, e, w)
            yield from _case_d(H, e, w)
            yield from _case_b(H, e, w)
    yield from _extra(H)


def derive_all(H: Hypergraph, stop_early: bool = True) -> List[Certificate]:
    """Run the constructions; with stop_early, stop at the first index <= 3."""
    out = []
    for case, build in _attempts(H):
        c = _attempt(H, case, build)
        if c is None:
            continue
        out.append(c)
        if stop_early and c.target_index <= 3:
            break
    return out


def derive_forbidden_minor(H: Hypergraph) -> Optional[Tuple[int, Certificate]]:
    if not is_reduced(H):
        raise HypergraphError("derive_forbidden_minor needs a reduced hypergraph", "non-reduced")
    if is_undirected(H):
        return None
    found = derive_all(H)
    if not found:
        raise AssertionError("no forbidden minor derived although some range is nonempty")
    best = min(found, key=lambda c: c.target_index)
    return best.target_index, best


# -- the G4-only analysis ----------------------------------------------------

def hgamma4_analysis(H: Hypergraph) -> Tuple[Optional[Certificate], List[str]]:
    """G4 by removing w from one source and deleting an ideally closed set;
    returns the certificate (or None) and notes on which step failed."""
    notes: List[str] = []
    big = [e.id for e in H.edges if len(e.source) >= 2 and e.range]
    busy = set().union(*[e.source for e in H.edges if e.range]) if H.edges else set()
    for f in big:
        if len(H.range(f)) != 1:
            notes.append(f"step 1: {f} has a range of size {len(H.range(f))}")
            continue
        (w,) = H.range(f)
        if w in busy:
            notes.append(f"step 2: r({f}) meets the source of an edge with nonempty range")
            continue
        for f2 in big:
            if f2 == f or H.range(f2) != {w} or len(H.source(f) & H.source(f2)) < 2:
                continue
            if any(e not in (f, f2) for e in H.in_edges(w)):
                notes.append(f"step 3: a third edge ranges into {w}")
                continue
            for v1, v2 in combinations(sorted(H.source(f) & H.source(f2)), 2):
                if H.in_edges(v1) or H.in_edges(v2):
                    notes.append(f"step 4: an edge ranges into {{{v1}, {v2}}}")
                    continue
                outs = H.out_edges(w)
                if len(outs) > 1:
                    notes.append(f"step 5: {len(outs)} edges start from {w}")
                    continue
                rec = Recorder(H)
                if outs:
                    rec.remove_vertex_from_source(outs[0], w)
                S_v = [v for v in rec.H.vertices if v not in (v1, v2, w)]
                S_e = [e for e in rec.H.edge_ids if e not in (f, f2)]
                if not is_ideally_closed(rec.H, S_v, S_e):
                    raise AssertionError("complement of the G4 core is not ideally closed")
                if S_v or S_e:
                    rec.delete_set(S_v, S_e, expand=False)
                iso = are_isomorphic(rec.H, g4())
                if iso is None:
                    raise AssertionError("G4-only analysis did not reach g4")
                return Certificate(H, tuple(rec.steps), 4, iso, "G4-only"), notes
    if not notes:
        notes.append("step 1: no pair of edges with a common singleton range and two shared vertices")
    return None, notes


def hgamma4_only_analysis(H: Hypergraph) -> Optional[Certificate]:
    return hgamma4_analysis(H)[0]


# -- undirected case and verdicts --------------------------------------------

def undirected_conditions(H: Hypergraph) -> bool:
    if not is_undirected(H):
        return False
    for u, v in combinations(H.vertices, 2):
        if sum(1 for e in H.out_edges(u) if v in H.source(e)) > 2:
            return False
    for e, f in combinations(H.edges, 2):
        if len(e.source & f.source) > 2:
            return False
    return True


def undirected_forbidden_minor(H: Hypergraph) -> Optional[Certificate]:
    """G1 or G2 by deletions alone; exists iff a pair of remark bullets fails."""
    for case, build in _extra(H):
        if case in ("shared-3", "shared-pair"):
            c = _attempt(H, case, build)
            if c is not None:
                return c
    return None


@dataclass(frozen=True)
class Verdict:
    kind: str                      # NotExact | NotNuclear | UndirectedReduced
    reduced: Hypergraph
    reduction_trace: Trace
    certificate: Optional[Certificate] = None
    restricted: Optional[bool] = None
    remark_ok: Optional[bool] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def index(self) -> Optional[int]:
        return self.certificate.target_index if self.certificate else None

    def full_certificate(self) -> Optional[Certificate]:
        """The certificate prefixed with the reduction steps, starting from the input."""
        c = self.certificate
        if c is None:
            return None
        steps = tuple(self.reduction_trace.steps) + c.steps
        return Certificate(self.reduction_trace.start, steps, c.target_index, c.iso, c.case)

    def to_dict(self) -> dict:
        d = {"verdict": self.kind}
        if self.certificate is not None:
            d["index"] = self.index
        if self.restricted is not None:
            d["restricted"] = self.restricted
        if self.remark_ok is not None:
            d["remark_ok"] = self.remark_ok
        return d


def classify(H: Hypergraph) -> Verdict:
    reduced, rtrace = reduce(H)
    found = derive_forbidden_minor(reduced)
    if found is not None:
        idx, cert = found
        if idx <= 3:
            return Verdict("NotExact", reduced, rtrace, cert)
        cert4, notes = hgamma4_analysis(reduced)
        if cert4 is not None:
            return Verdict("NotNuclear", reduced, rtrace, cert4, restricted=True)
        log.warning("G4-only analysis failed although no smaller minor was derived: %s", notes)
        return Verdict("NotNuclear", reduced, rtrace, cert, restricted=False, notes=tuple(notes))
    cert = undirected_forbidden_minor(reduced)
    if cert is not None:
        return Verdict("NotExact", reduced, rtrace, cert)
    return Verdict("UndirectedReduced", reduced, rtrace, remark_ok=undirected_conditions(reduced))
