"""Normal hypergraphs and the normalization procedure."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from .core import Hypergraph, check_valid
from .minor_ops import Recorder, Trace, star_condition


@dataclass(frozen=True)
class NormalityViolations:
    s1: frozenset            # edges violating condition (2)
    s2: frozenset            # ordered pairs violating condition (3)
    range_violations: frozenset  # edges with |r(e)| > 1

    @property
    def n1(self) -> int:
        return len(self.s1)

    @property
    def n2(self) -> int:
        return len(self.s2)

    def empty(self) -> bool:
        return not (self.s1 or self.s2 or self.range_violations)


def _cond2_holds(H: Hypergraph, e) -> bool:
    if e.range and e.range <= e.source:
        return True
    return any(g != e.id for v in e.source for g in H.out_edges(v))


def violating_pairs(H: Hypergraph) -> List[Tuple[str, str]]:
    """Ordered pairs of distinct edges that violate condition (3), sorted."""
    out = []
    for e in H.edges:
        partners = sorted({g for v in e.source for g in H.out_edges(v)} - {e.id})
        for fid in partners:
            f = H.edge(fid)
            common = e.source & f.source
            if len(common) != 1:
                continue
            if len(e.source) == 1 and len(f.source) == 1:
                continue
            if any(g != e.id and common < (e.source & H.source(g)) for g in partners):
                continue
            out.append((e.id, fid))
    return out


def normality_violations(H: Hypergraph) -> NormalityViolations:
    s1 = frozenset(e.id for e in H.edges if not _cond2_holds(H, e))
    s2 = frozenset(violating_pairs(H))
    big = frozenset(e.id for e in H.edges if len(e.range) > 1)
    return NormalityViolations(s1, s2, big)


def is_normal(H: Hypergraph) -> bool:
    if any(len(e.range) > 1 for e in H.edges):
        return False
    if any(not _cond2_holds(H, e) for e in H.edges):
        return False
    return not violating_pairs(H)


def _decompose_all(rec: Recorder) -> None:
    for f in [e.id for e in rec.H.edges if len(e.range) > 1]:
        rec.decompose_range(f)


# A hook receives (kind, before, after) for every loop step; tests use it to
# check the termination measures.
StepHook = Callable[[str, Hypergraph, Hypergraph], None]


def normalize_into(rec: Recorder, hook: Optional[StepHook] = None) -> None:
    """Run the normalization loop on ``rec.H``, recording every step."""
    check_valid(rec.H)
    _decompose_all(rec)
    while True:
        before = rec.H
        pairs = violating_pairs(rec.H)
        if pairs:
            e, f = pairs[0]
            (w,) = rec.H.source(e) & rec.H.source(f)
            assert star_condition(rec.H, [e], w), (e, f, w)
            rec.separate_source([e], w)
            assert len(violating_pairs(rec.H)) < len(pairs)
            kind = "separate"
        elif any(len(e.range) > 1 for e in rec.H.edges):
            # separation appends the fresh vertex to ranges; split them again
            _decompose_all(rec)
            kind = "decompose"
        else:
            bad = [e for e in rec.H.edges if not _cond2_holds(rec.H, e)]
            if not bad:
                break
            e = bad[0]
            if not e.range:
                rec.delete_edge(e.id)
                kind = "delete"
            else:
                rec.backward_contract(e.id)
                _decompose_all(rec)
                assert len(rec.H.vertices) < len(before.vertices)
                kind = "contract"
        if hook is not None:
            hook(kind, before, rec.H)


def normalize(H: Hypergraph, hook: Optional[StepHook] = None) -> Tuple[Hypergraph, Trace]:
    rec = Recorder(H)
    normalize_into(rec, hook)
    return rec.H, rec.trace()
