"""Easy edges, easy cycles, simple quasisinks and the reduction procedure."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, FrozenSet, List, Optional, Tuple

from .core import Hypergraph, check_valid
from .minor_ops import Recorder, Trace
from .normalization import is_normal, normalize_into


@dataclass(frozen=True)
class ReductionStep:
    tag: str          # EasyEdgeSetCut | EasyCycleCut | QuasisinkCut | LoneEmptyEdgeDelete
    payload: Tuple[str, ...]


def predecessors(H: Hypergraph, f: str) -> List[str]:
    """Edges e with r(e) meeting s(f)."""
    return sorted({e for v in H.source(f) for e in H.in_edges(v)})


def backward_closure(H: Hypergraph, f0: str) -> FrozenSet[str]:
    """All edges that admit a path ending in f0 (f0 included)."""
    seen, todo = {f0}, [f0]
    while todo:
        for e in predecessors(H, todo.pop()):
            if e not in seen:
                seen.add(e)
                todo.append(e)
    return frozenset(seen)


def easy_edge_set(H: Hypergraph, f0: str) -> Optional[FrozenSet[str]]:
    H.edge(f0)
    F = backward_closure(H, f0)
    if all(len(H.source(f)) == 1 and len(H.range(f)) == 1 for f in F):
        return F
    return None


def is_easy(H: Hypergraph, f: str) -> bool:
    return easy_edge_set(H, f) is not None


def find_easy_edge(H: Hypergraph) -> Optional[str]:
    for e in H.edges:
        if len(e.source) == 1 and len(e.range) == 1 and is_easy(H, e.id):
            return e.id
    return None


def is_closed_under_source_entries(H: Hypergraph, F) -> bool:
    F = frozenset(F)
    for f in sorted(F):
        H.edge(f)
    return all(e in F for f in F for e in predecessors(H, f))


def is_closed_under_range_exits(H: Hypergraph, F) -> bool:
    F = frozenset(F)
    for f in sorted(F):
        H.edge(f)
    return all(e in F for f in F for v in H.range(f) for e in H.out_edges(v))


def _cycle_successor(H: Hypergraph, f: str) -> Optional[str]:
    r = H.range(f)
    if len(r) != 1:
        return None
    (w,) = r
    ins, outs = H.in_edges(w), H.out_edges(w)
    if len(ins) == 1 and len(outs) == 1:
        return outs[0]
    return None


def find_easy_cycle(H: Hypergraph) -> Optional[Tuple[str, ...]]:
    """An easy cycle starting at its smallest edge id, or None."""
    for e in H.edge_ids:
        path, seen = [e], {e}
        nxt = _cycle_successor(H, e)
        while nxt is not None and nxt not in seen:
            path.append(nxt)
            seen.add(nxt)
            nxt = _cycle_successor(H, nxt)
        if nxt == e:
            return tuple(path)
    return None


def is_simple_quasisink(H: Hypergraph, w: str) -> bool:
    H.require_vertex(w)
    outs, ins = H.out_edges(w), H.in_edges(w)
    if len(outs) > 1 or len(ins) > 1:
        return False
    return not outs or not H.range(outs[0])


def find_quasisink_edge(H: Hypergraph) -> Optional[Tuple[str, str]]:
    for e in H.edges:
        if len(e.range) == 1:
            (w,) = e.range
            if is_simple_quasisink(H, w):
                return e.id, w
    return None


def find_lone_empty_edge(H: Hypergraph) -> Optional[str]:
    """An empty-range edge whose source meets no other source."""
    for e in H.edges:
        if not e.range and all(g == e.id for v in e.source for g in H.out_edges(v)):
            return e.id
    return None


def is_reduced(H: Hypergraph) -> bool:
    return (is_normal(H) and find_easy_edge(H) is None and find_easy_cycle(H) is None
            and find_quasisink_edge(H) is None)


def measure(H: Hypergraph) -> Tuple[int, int]:
    return sum(1 for e in H.edges if e.range), len(H.edges)


LoopHook = Callable[[ReductionStep, Hypergraph, Hypergraph], None]


def reduce(H: Hypergraph, log: Optional[List[ReductionStep]] = None,
           hook: Optional[LoopHook] = None) -> Tuple[Hypergraph, Trace]:
    """Normalize, then cut easy edge sets, easy cycles and quasisink edges
    and delete lone empty-range edges until none is left."""
    check_valid(H)
    rec = Recorder(H)
    normalize_into(rec)

    def note(step: ReductionStep, before: Hypergraph) -> None:
        if log is not None:
            log.append(step)
        if hook is not None:
            hook(step, before, rec.H)

    def sweep() -> None:
        # a cut can leave an edge with no source partner; delete it at once
        while True:
            lone = find_lone_empty_edge(rec.H)
            if lone is None:
                return
            before = rec.H
            rec.delete_edge(lone)
            note(ReductionStep("LoneEmptyEdgeDelete", (lone,)), before)

    while True:
        before = rec.H
        f0 = find_easy_edge(rec.H)
        if f0 is not None:
            F = sorted(easy_edge_set(rec.H, f0))
            for f in F:
                rec.cut_edge(f)
            step = ReductionStep("EasyEdgeSetCut", tuple(F))
        else:
            cyc = find_easy_cycle(rec.H)
            if cyc is not None:
                for f in cyc:
                    rec.cut_edge(f)
                step = ReductionStep("EasyCycleCut", cyc)
            else:
                hit = find_quasisink_edge(rec.H)
                if hit is not None:
                    rec.cut_edge(hit[0])
                    step = ReductionStep("QuasisinkCut", hit)
                else:
                    lone = find_lone_empty_edge(rec.H)
                    if lone is None:
                        break
                    rec.delete_edge(lone)
                    step = ReductionStep("LoneEmptyEdgeDelete", (lone,))
        assert measure(rec.H) < measure(before)
        note(step, before)
        sweep()
    return rec.H, rec.trace()
