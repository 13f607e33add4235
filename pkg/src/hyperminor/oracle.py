"""Small-hypergraph enumeration and a budgeted breadth-first minor search.

The search is a semi-decision tool: a returned certificate is a proof, a
``None`` only means nothing was found within the budget.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .classification import Certificate, forbidden_catalog
from .core import Edge, Hypergraph, HypergraphError, are_isomorphic, canonical_form, canonical_key
from .minor_ops import Operation, apply

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBudget:
    max_separations: int = 2
    max_decompositions: int = 2
    max_total_steps: int = 10
    max_frontier: int = 200000

    def __post_init__(self):
        for name in ("max_separations", "max_decompositions", "max_total_steps", "max_frontier"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @staticmethod
    def parse(text: str) -> "SearchBudget":
        """Parse ``steps=10,sep=2,dec=2,frontier=1000``."""
        keys = {"steps": "max_total_steps", "sep": "max_separations",
                "dec": "max_decompositions", "frontier": "max_frontier"}
        kw = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            k, _, v = part.partition("=")
            if k not in keys or not v.isdigit():
                raise ValueError(f"bad budget entry {part!r}")
            kw[keys[k]] = int(v)
        return SearchBudget(**kw)


# -- enumeration ---------------------------------------------------------

def _subsets(vs: Sequence[str], nonempty: bool) -> List[frozenset]:
    out = [frozenset(c) for k in range(len(vs) + 1) for c in combinations(vs, k)]
    return [s for s in out if s or not nonempty]


def _enumerate(max_v: int, max_e: int, kinds, exact: bool) -> Iterator[Hypergraph]:
    if max_v < 0 or max_e < 0:
        raise ValueError("bounds must be nonnegative")
    v_range = [max_v] if exact else range(1, max_v + 1)
    e_range = [max_e] if exact else range(0, max_e + 1)
    for n in v_range:
        if n == 0:
            if not exact or max_e == 0:
                yield Hypergraph([], [])
            continue
        vs = [f"v{i}" for i in range(1, n + 1)]
        pairs = kinds(vs)
        for m in e_range:
            seen = set()
            found = []
            for combo in combinations_with_replacement(range(len(pairs)), m):
                H = Hypergraph(vs, [Edge(f"e{i}", *pairs[j]) for i, j in enumerate(combo, 1)])
                key = canonical_key(H)
                if key not in seen:
                    seen.add(key)
                    found.append((key, H))
            for _, H in sorted(found, key=lambda t: t[0]):
                yield canonical_form(H)


def enumerate_hypergraphs(max_v: int, max_e: int, allow_empty_range: bool = True,
                          exact: bool = False) -> Iterator[Hypergraph]:
    """One canonical representative per isomorphism class with 1..max_v
    vertices and 0..max_e edges; ``exact`` fixes both counts instead."""
    def kinds(vs):
        srcs = _subsets(vs, True)
        rngs = _subsets(vs, not allow_empty_range)
        return [(s, r) for s in srcs for r in rngs]
    return _enumerate(max_v, max_e, kinds, exact)


def enumerate_directed_graphs(max_v: int, max_e: int, exact: bool = False) -> Iterator[Hypergraph]:
    """Directed multigraphs (loops allowed) as hypergraphs, up to isomorphism."""
    def kinds(vs):
        return [(frozenset([a]), frozenset([b])) for a in vs for b in vs]
    return _enumerate(max_v, max_e, kinds, exact)


# -- minor search ------------------------------------------------------------

def _finish(H: Hypergraph, T: Hypergraph) -> Optional[Tuple[List[Operation], Dict[str, str], Dict[str, str]]]:
    """Cheapest way (over all embeddings) to reach T from H by cuts and deletions.

    Cuts come first, then the unused edges that keep a vertex, then the unused
    vertices (which take the remaining unused edges with them). Returns the
    operations plus the vertex and edge maps from T into H.
    """
    if len(T.vertices) > len(H.vertices) or len(T.edges) > len(H.edges):
        return None
    best = None
    for image in permutations(H.vertices, len(T.vertices)):
        phi = dict(zip(T.vertices, image))
        kept = frozenset(image)
        options = []
        for t in T.edges:
            src, rng = frozenset(phi[v] for v in t.source), frozenset(phi[v] for v in t.range)
            opts = []
            for e in H.edges:
                if e.source & kept != src:
                    continue
                r = e.range & kept
                if r == rng:
                    opts.append((e.id, False))
                elif not rng and r:
                    opts.append((e.id, True))
            if not opts:
                break
            options.append(opts)
        else:
            # edges with their whole source deleted vanish with the vertices
            doomed = sum(1 for e in H.edges if not e.source & kept)
            for choice in _distinct(options):
                cuts = sum(1 for _, c in choice if c)
                cost = cuts + len(H.edges) - len(T.edges) - doomed + len(H.vertices) - len(T.vertices)
                if best is None or cost < best[0]:
                    best = (cost, phi, choice)
    if best is None:
        return None
    _, phi, choice = best
    used = {e for e, _ in choice}
    ops = [Operation("CutEdge", (e,)) for e, c in choice if c]
    kept = frozenset(phi.values())
    ops += [Operation("DeleteEdge", (e.id,)) for e in H.edges if e.id not in used and e.source & kept]
    ops += [Operation("DeleteVertex", (v,)) for v in H.vertices if v not in phi.values()]
    vmap = {h: t for t, h in phi.items()}
    emap = {e: t.id for t, (e, _) in zip(T.edges, choice)}
    return ops, vmap, emap


def _distinct(options):
    def rec(i, used):
        if i == len(options):
            yield ()
            return
        for eid, cut in options[i]:
            if eid not in used:
                for rest in rec(i + 1, used | {eid}):
                    yield ((eid, cut),) + rest
    return rec(0, frozenset())


def _successors(H: Hypergraph, seps_left: int, decs_left: int) -> Iterator[Tuple[Operation, str]]:
    """Candidate operations in canonical order, tagged by budget class."""
    for v in H.vertices:
        yield Operation("DeleteVertex", (v,)), ""
    for e in H.edges:
        yield Operation("DeleteEdge", (e.id,)), ""
    for e in H.edges:
        if e.range:
            yield Operation("CutEdge", (e.id,)), ""
    for e in H.edges:
        if len(e.source) == 1:
            yield Operation("ForwardContract", (e.id,)), ""
        if len(e.range) == 1:
            yield Operation("BackwardContract", (e.id,)), ""
    if seps_left:
        for w in H.vertices:
            outs = H.out_edges(w)
            for k in range(1, len(outs)):
                for F in combinations(outs, k):
                    yield Operation("SeparateSource", (w,) + F), "sep"
    if decs_left:
        for e in H.edges:
            if len(e.range) >= 2:
                yield Operation("DecomposeRange", (e.id,)), "dec"


def minor_search_any(H: Hypergraph, targets: Sequence[Hypergraph],
                     budget: Optional[SearchBudget] = None) -> Optional[Tuple[int, Certificate]]:
    """Breadth-first search for any of ``targets``; returns (position, certificate).

    States are deduplicated by canonical key together with the growth
    budget spent, so the frontier never holds two isomorphic states with the
    same counters.
    """
    budget = budget or SearchBudget()
    catalog = forbidden_catalog()
    n_min = min(len(T.vertices) for T in targets)
    # undirected states need not be expanded when every target is G1, G2 or
    # has a nonempty range (see the comment in the loop)
    dead_ends = all(any(e.range for e in T.edges) or are_isomorphic(T, catalog[0])
                    or are_isomorphic(T, catalog[1]) for T in targets)

    def goal(G: Hypergraph, depth: int):
        for i, T in enumerate(targets):
            hit = _finish(G, T)
            if hit is not None and depth + len(hit[0]) <= budget.max_total_steps:
                return i, hit
        return None

    def certificate(i, path, hit) -> Certificate:
        ops, _, _ = hit
        steps = tuple(path) + tuple(ops)
        end = H
        for op in steps:
            end = apply(end, op)
        T = targets[i]
        idx = next((k for k, G in enumerate(catalog, 1) if are_isomorphic(G, T)), 0)
        ref = catalog[idx - 1] if idx else T
        iso = are_isomorphic(end, ref)
        assert iso is not None
        return Certificate(H, steps, idx, iso, "search")

    frontier = [(H, (), 0, 0)]
    seen = {(canonical_key(H), 0, 0)}
    truncated = False
    for depth in range(budget.max_total_steps + 1):
        nxt = []
        for G, path, seps, decs in frontier:
            hit = goal(G, depth)
            if hit is not None:
                return hit[0], certificate(hit[0], path, hit[1])
            if depth == budget.max_total_steps:
                continue
            if dead_ends and all(not e.range for e in G.edges):
                # With all ranges empty no operation creates a range vertex, and
                # neither the largest pairwise source intersection nor the
                # largest number of sources through a vertex pair can grow; the
                # deletions already tried by the goal test are the only way on.
                continue
            left = budget.max_total_steps - depth - 1
            for op, tag in _successors(G, budget.max_separations - seps, budget.max_decompositions - decs):
                try:
                    G2 = apply(G, op)
                except HypergraphError:
                    continue
                s2, d2 = seps + (tag == "sep"), decs + (tag == "dec")
                if len(G2.vertices) + budget.max_separations - s2 < n_min:
                    continue
                if len(G2.vertices) - n_min > left:
                    continue
                key = (canonical_key(G2), s2, d2)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((G2, path + (op,), s2, d2))
        if len(nxt) > budget.max_frontier:
            truncated = True
            nxt = nxt[:budget.max_frontier]
        frontier = nxt
        if not frontier:
            break
    if truncated:
        log.info("minor search frontier was truncated at %d states", budget.max_frontier)
    return None


def minor_search(H: Hypergraph, target: Hypergraph,
                 budget: Optional[SearchBudget] = None) -> Optional[Certificate]:
    found = minor_search_any(H, [target], budget)
    return found[1] if found else None
