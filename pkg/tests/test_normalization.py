from __future__ import annotations

from hypothesis import given

from conftest import hypergraphs
from hyperminor import Hypergraph, are_isomorphic, g1, g2, g3, g4, hypergraph, parse_trace
from hyperminor.minor_ops import Trace, star_condition
from hyperminor.normalization import (is_normal, normality_violations, normalize,
                                      violating_pairs)
from oracles import def_normal

FEEDER = hypergraph(["a1", "a2", "b1", "b2", "c"],
                    {"e": (["a1", "a2"], ["b1", "b2"]), "f": (["b1"], ["c"])})
LOOP2 = hypergraph(["v", "w"], {"e": (["v", "w"], ["v", "w"])})

ALLOWED = {"DecomposeRange", "SeparateSource", "DeleteEdge", "BackwardContract"}


class TestViolations:
    def test_g1_clean(self):
        assert normality_violations(g1()).empty()

    def test_double_loop(self):
        nv = normality_violations(LOOP2)
        assert nv.range_violations == {"e"} and not nv.s1 and not nv.s2

    def test_lone_empty_edge(self):
        H = hypergraph(["a", "b", "c"], {"e": (["a"], []), "f": (["b", "c"], ["b"]), "g": (["b"], ["c"])})
        assert normality_violations(H).s1 == {"e"}

    def test_pair_sharing_one_vertex(self):
        H = hypergraph(["a", "b", "w"], {"e": (["a", "w"], []), "f": (["b", "w"], [])})
        nv = normality_violations(H)
        assert nv.s2 == {("e", "f"), ("f", "e")} and nv.n2 == 2

    def test_singleton_pair_is_fine(self):
        H = hypergraph(["w"], {"e": (["w"], []), "f": (["w"], [])})
        assert not normality_violations(H).s2


class TestIsNormal:
    def test_catalog(self):
        assert all(is_normal(G) for G in (g1(), g2(), g3(), g4()))

    def test_feeder_input(self):
        assert not is_normal(FEEDER)

    def test_edgeless(self):
        assert is_normal(Hypergraph(["a", "b"], []))
        assert is_normal(Hypergraph([], []))

    @given(hypergraphs())
    def test_matches_definition(self, H):
        assert is_normal(H) == def_normal(H) == normality_violations(H).empty()


class TestNormalize:
    def test_feeder(self):
        R, tr = normalize(FEEDER)
        assert [op.kind for op in tr.steps] == ["DecomposeRange", "BackwardContract"]
        assert len(R.vertices) == 4 and len(R.edges) == 2
        assert all(len(e.source) == 2 and len(e.range) == 1 for e in R.edges)
        assert R.range("e@b1") != R.range("e@b2")

    def test_double_loop(self):
        R, tr = normalize(LOOP2)
        assert R == hypergraph(["v", "w"], {"e@v": (["v", "w"], ["v"]), "e@w": (["v", "w"], ["w"])})
        assert len(tr.steps) == 1

    def test_normal_input_untouched(self):
        R, tr = normalize(g2())
        assert R == g2() and not tr.steps

    def test_separation_site(self):
        H = hypergraph(["a", "b", "w"], {"e": (["a", "w"], []), "f": (["b", "w"], [])})
        seen = []

        def hook(kind, before, after):
            if kind == "separate":
                e, f = violating_pairs(before)[0]
                (w,) = before.source(e) & before.source(f)
                seen.append(star_condition(before, [e], w))
        R, _ = normalize(H, hook)
        assert seen == [True] and is_normal(R)

    @given(hypergraphs())
    def test_postconditions(self, H):
        steps = []

        def hook(kind, before, after):
            if kind == "separate":
                assert len(violating_pairs(after)) < len(violating_pairs(before))
            if kind == "contract":
                assert len(after.vertices) < len(before.vertices)
            steps.append(kind)
        R, tr = normalize(H, hook)
        assert is_normal(R) and def_normal(R)
        assert {op.kind for op in tr.steps} <= ALLOWED
        assert Trace(H, tr.steps).replay() == R
        assert normalize(R)[0] == R

    def test_trace_text_replays(self):
        R, tr = normalize(FEEDER)
        steps, _ = parse_trace(tr.to_text())
        assert Trace(FEEDER, steps).replay() == R
        assert are_isomorphic(R, normalize(R)[0])
