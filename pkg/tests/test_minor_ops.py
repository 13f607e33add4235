from __future__ import annotations

from collections import Counter
from itertools import permutations

import pytest
from hypothesis import assume, given, strategies as st

from conftest import hypergraphs
from hyperminor import (GuardError, HypergraphError, Operation, Recorder, Trace, are_isomorphic,
                        g1, g2, g3, g4, hypergraph, parse_trace, validate)
from hyperminor.minor_ops import (apply, backward_contract, contract_path, cut_edge, decompose_range,
                                  delete_edge, delete_set, delete_vertex, forward_contract,
                                  is_ideally_closed, remove_vertex_from_source, separate_source,
                                  separate_source_of_edge, star_condition)
from hyperminor.normalization import is_normal
from oracles import def_ideally_closed


def undirected(n_edges, vertices):
    return hypergraph(vertices, {f"e{i}": (vertices, []) for i in range(n_edges)})


class TestDeletion:
    def test_delete_vertex_from_g1(self):
        H = delete_vertex(g1(), "v3")
        assert are_isomorphic(H, cut_edge(g3(), "f"))

    def test_delete_w_from_g4(self):
        H = delete_vertex(g4(), "w")
        assert H.source("e") == H.source("f") == {"v1", "v2"}
        assert are_isomorphic(H, delete_edge(g2(), "g"))

    def test_delete_isolated_vertex(self):
        H = hypergraph(["a", "b", "z"], {"e": (["a"], ["b"])})
        assert delete_vertex(H, "z") == hypergraph(["a", "b"], {"e": (["a"], ["b"])})

    def test_delete_vertex_drops_singleton_source_edges(self):
        H = hypergraph(["a", "b"], {"e": (["a"], ["b"]), "f": (["a", "b"], ["a"])})
        assert delete_vertex(H, "a") == hypergraph(["b"], {"f": (["b"], [])})

    def test_delete_edge(self):
        assert are_isomorphic(delete_edge(g2(), "g"), undirected(2, ["v1", "v2"]))
        assert not delete_edge(hypergraph(["a"], {"e": (["a"], [])}), "e").edges
        assert are_isomorphic(delete_edge(g3(), "f"), undirected(1, ["v", "w"]))

    def test_unknown_ids(self):
        with pytest.raises(HypergraphError):
            delete_vertex(g1(), "zz")
        with pytest.raises(HypergraphError):
            delete_edge(g1(), "zz")
        with pytest.raises(HypergraphError):
            cut_edge(g1(), "zz")


class TestContraction:
    def test_forward_chain(self):
        H = hypergraph(["a", "w", "b"], {"f1": (["a"], ["w"]), "f": (["w"], ["b"])})
        assert forward_contract(H, "f") == hypergraph(["a", "b"], {"f1": (["a"], ["b"])})

    def test_forward_empty_range(self):
        H = hypergraph(["a", "w"], {"f": (["w"], []), "g": (["a"], [])})
        assert forward_contract(H, "f") == hypergraph(["a"], {"g": (["a"], [])})

    def test_forward_guards(self):
        with pytest.raises(GuardError) as exc:
            forward_contract(g3(), "f")
        assert exc.value.code == "non-singleton-source"
        H = hypergraph(["w", "b"], {"f": (["w"], ["b"]), "g": (["w"], [])})
        with pytest.raises(GuardError) as exc:
            forward_contract(H, "f")
        assert exc.value.code == "sibling-start"
        H = hypergraph(["a", "w", "b"], {"f": (["w"], ["b"]), "e": (["a"], ["w", "b"])})
        with pytest.raises(GuardError) as exc:
            forward_contract(H, "f")
        assert exc.value.code == "range-overlap" and "e" in exc.value.ids

    def test_backward_feeder_pattern(self):
        H = hypergraph(["a1", "a2", "b1", "b2", "c"],
                       {"e@b1": (["a1", "a2"], ["b1"]), "e@b2": (["a1", "a2"], ["b2"]),
                        "f": (["b1"], ["c"])})
        R = backward_contract(H, "f")
        assert R.vertices == ("a1", "a2", "b1", "b2") and R.edge_ids == ("e@b1", "e@b2")

    def test_backward_merges_into_source(self):
        H = hypergraph(["u", "w", "x"], {"f": (["u"], ["w"]), "e": (["w", "x"], ["w"])})
        R = backward_contract(H, "f")
        assert R == hypergraph(["u", "x"], {"e": (["u", "x"], ["u"])})

    def test_backward_absorbs_isolated_range(self):
        H = hypergraph(["u", "w", "z"], {"f": (["u"], ["w"]), "g": (["z"], [])})
        R = backward_contract(H, "f")
        assert len(R.vertices) == 2 and len(R.edges) == 1

    def test_backward_guards(self):
        with pytest.raises(GuardError):
            backward_contract(g4(), "e")   # f also starts from s(e)
        with pytest.raises(GuardError):
            backward_contract(hypergraph(["a"], {"e": (["a"], [])}), "e")


class TestCutAndDecompose:
    def test_cut(self):
        assert are_isomorphic(cut_edge(g3(), "f"), undirected(2, ["v", "w"]))
        assert cut_edge(g1(), "e") == g1()
        H = cut_edge(g4(), "f")
        assert H.source("f") == {"v1", "v2"} and not H.range("f")

    def test_double_loop_decomposition(self):
        H = hypergraph(["v", "w"], {"e": (["v", "w"], ["v", "w"])})
        R = decompose_range(H, "e")
        assert R == hypergraph(["v", "w"], {"e@v": (["v", "w"], ["v"]), "e@w": (["v", "w"], ["w"])})

    def test_singleton_range_is_renaming(self):
        R = decompose_range(g4(), "e")
        assert R.edge_ids == ("e@w", "f") and are_isomorphic(R, g4())

    def test_fresh_id_collision(self):
        H = hypergraph(["a", "b"], {"e": (["a"], ["a", "b"]), "e@a": (["b"], [])})
        assert decompose_range(H, "e").edge_ids == ("e@a", "e@a@1", "e@b")

    def test_empty_range_rejected(self):
        with pytest.raises(GuardError):
            decompose_range(g1(), "e")


class TestSeparation:
    def test_g3_at_v(self):
        H, fresh = separate_source(g3(), ["f"], "v")
        assert fresh == "v@s1"
        assert H.source("f") == {"v@s1", "w"} and H.source("e") == {"v", "w"}
        assert H.range("f") == {"w"}

    def test_range_gains_fresh_vertex(self):
        H = hypergraph(["u", "w", "a"], {"g": (["u"], ["w"]), "e1": (["w"], []), "e2": (["w", "a"], [])})
        R, fresh = separate_source(H, ["e1"], "w")
        assert R.range("g") == {"w", fresh} and R.source("e1") == {fresh}

    def test_guards(self):
        with pytest.raises(GuardError):
            separate_source(g3(), ["e", "f"], "w")
        with pytest.raises(GuardError):
            separate_source(g3(), [], "w")
        with pytest.raises(GuardError):
            separate_source(g4(), ["e"], "w")

    def test_fresh_names_skip_taken(self):
        H = hypergraph(["v", "v@s1"], {"e": (["v"], []), "f": (["v"], []), "g": (["v@s1"], [])})
        assert separate_source(H, ["e"], "v")[1] == "v@s2"

    def test_separate_source_of_edge(self):
        H = separate_source_of_edge(g3(), "f")
        assert H.source("f") == {"v@s1", "w@s1"} and H.source("e") == {"v", "w"}
        H = separate_source_of_edge(g4(), "e")
        assert H.source("e") == {"v1@s1", "v2@s1"} and H.source("f") == {"v1", "v2"}
        lone = hypergraph(["a", "b"], {"e": (["a"], []), "f": (["b"], [])})
        assert separate_source_of_edge(lone, "e") == lone

    def test_star_condition(self):
        assert not star_condition(g1(), ["e"], "v1")
        H = hypergraph(["a", "b", "w"], {"e": (["a", "w"], []), "f": (["b", "w"], [])})
        assert star_condition(H, ["e"], "w")
        assert star_condition(hypergraph(["w"], {"e": (["w"], [])}), ["e"], "w")
        with pytest.raises(HypergraphError):
            star_condition(g1(), ["e"], "zz")


class TestComposites:
    def test_remove_vertex_forced_deletion(self):
        H = hypergraph(["w", "a"], {"f": (["w"], []), "g": (["a"], [])})
        assert remove_vertex_from_source(H, "f", "w").edge_ids == ("g",)

    def test_remove_vertex_shrinks_source(self):
        H = hypergraph(["w", "u"], {"f": (["w", "u"], []), "g": (["u"], [])})
        assert remove_vertex_from_source(H, "f", "w").source("f") == {"u"}

    def test_remove_vertex_guards(self):
        with pytest.raises(GuardError):
            remove_vertex_from_source(g1(), "e", "v1")       # f also starts from v1
        with pytest.raises(GuardError):
            remove_vertex_from_source(hypergraph(["w"], {"f": (["w"], ["w"])}), "f", "w")

    def test_ideally_closed_trivial_sets(self):
        for G in (g1(), g2(), g3(), g4()):
            assert is_ideally_closed(G)
            assert is_ideally_closed(G, G.vertices, G.edge_ids)
        with pytest.raises(HypergraphError):
            is_ideally_closed(g1(), ["zz"])

    def test_delete_set_basics(self):
        assert delete_set(g4()) == g4()
        assert delete_set(g4(), ["w"]) == delete_vertex(g4(), "w")

    @given(hypergraphs(max_v=3, max_e=3), st.data())
    def test_delete_set_order_independent(self, H, data):
        V = data.draw(st.sets(st.sampled_from(H.vertices)))
        E = data.draw(st.sets(st.sampled_from(H.edge_ids))) if H.edges else set()
        expected = delete_set(H, V, E)
        items = [("e", e) for e in E] + [("v", v) for v in V]
        for order in list(permutations(items))[:24]:
            G = H
            for kind, x in order:
                if kind == "e" and G.has_edge(x):
                    G = delete_edge(G, x)
                elif kind == "v":
                    G = delete_vertex(G, x)
            assert G == expected

    @given(hypergraphs(max_v=3, max_e=3), st.data())
    def test_ideally_closed_matches_definition(self, H, data):
        V = data.draw(st.sets(st.sampled_from(H.vertices)))
        E = data.draw(st.sets(st.sampled_from(H.edge_ids))) if H.edges else set()
        assert is_ideally_closed(H, V, E) == def_ideally_closed(H, V, E)


class TestContractPath:
    host = hypergraph(["x", "y", "a", "b"],
                      {"f1": (["x", "y"], ["a"]), "f2": (["a"], ["b"]),
                       "g": (["a"], []), "h": (["x", "y"], [])})

    def test_length_one_is_identity(self):
        assert contract_path(self.host, ["f1"]) == self.host

    def test_chain(self):
        assert is_normal(self.host)
        rec = Recorder(self.host)
        names = rec.contract_path(["f1", "f2"])
        R = rec.H
        assert names["f2"] is None
        assert R.range(names["f1"]) == {"b"} and R.source(names["f1"]) == {"x", "y"}
        direct = hypergraph(["x", "y", "a", "b"],
                            {"f1": (["x", "y"], ["b"]), "g": (["a"], []), "h": (["x", "y"], [])})
        assert are_isomorphic(R, direct)
        assert Trace(self.host, rec.steps).replay() == R
        assert all(op.kind in ("SeparateSource", "DecomposeRange", "DeleteEdge", "ForwardContract")
                   for op in rec.steps)

    def test_interior_cycle_is_erased(self):
        H = hypergraph(["x", "y", "a", "c", "b"],
                       {"f1": (["x", "y"], ["a"]), "p": (["a"], ["c"]), "q": (["c"], ["a"]),
                        "f2": (["a"], ["b"]), "h": (["x", "y"], []), "k": (["c"], [])})
        assert is_normal(H)
        with_cycle = contract_path(H, ["f1", "p", "q", "f2"])
        without = contract_path(H, ["f1", "f2"])
        # the explicit sequence also deletes the cycle edges
        assert are_isomorphic(with_cycle, delete_edge(delete_edge(without, "p"), "q@a"))

    def test_rejects_non_normal_host(self):
        H = hypergraph(["x", "y", "a", "b"], {"f1": (["x", "y"], ["a"]), "f2": (["a"], ["b"])})
        with pytest.raises(GuardError) as exc:
            contract_path(H, ["f1", "f2"])
        assert exc.value.code == "non-normal"

    def test_rejects_non_path(self):
        with pytest.raises(HypergraphError):
            contract_path(self.host, ["f2", "f1"])


class TestTraces:
    def test_line_round_trip(self):
        for op in (Operation("SeparateSource", ("w", "e1", "e2"), ("w@s1",)),
                   Operation("DeleteSet", ("e:f", "v:u")), Operation("CutEdge", ("e",))):
            assert Operation.from_line(op.to_line()) == op

    def test_parse_trace_directives(self):
        steps, meta = parse_trace("# target: g3\n# a comment\n\nCutEdge e@w\n")
        assert meta == {"target": "g3"} and steps == [Operation("CutEdge", ("e@w",))]

    def test_bad_lines(self):
        for line in ("Frobnicate e", "CutEdge a b", "CutEdge", "DeleteSet x:y", "CutEdge a$"):
            with pytest.raises(HypergraphError):
                apply(g3(), Operation.from_line(line))

    def test_composites_replay(self):
        H = hypergraph(["w", "u"], {"f": (["w", "u"], []), "g": (["u"], [])})
        for op in (Operation("RemoveVertexFromSource", ("f", "w")), Operation("DeleteSet", ("e:g", "v:w")),
                   Operation("SeparateSourceOfEdge", ("f",))):
            apply(H, op)
        host = TestContractPath.host
        assert apply(host, Operation("ContractPath", ("f1", "f2"))) == contract_path(host, ["f1", "f2"])


# independent statements of the guards, for the rejection property
def fwd_ok(H, f):
    e = H.edge(f)
    if len(e.source) != 1:
        return False
    (w,) = e.source
    if any(g.id != f and w in g.source for g in H.edges):
        return False
    return not any(w in g.range and g.range & e.range for g in H.edges)


def bwd_ok(H, f):
    e = H.edge(f)
    if len(e.range) != 1:
        return False
    (w,) = e.range
    if any(g.id != f and g.source & e.source for g in H.edges):
        return False
    return not any(g.range & e.source and w in g.range for g in H.edges)


@given(hypergraphs(), st.data())
def test_every_operation_validates_or_is_rejected(H, data):
    assume(H.edges)
    f = data.draw(st.sampled_from(H.edge_ids))
    v = data.draw(st.sampled_from(H.vertices))
    for name, fn, ok in (("fwd", forward_contract, fwd_ok), ("bwd", backward_contract, bwd_ok)):
        if ok(H, f):
            assert validate(fn(H, f)).ok
        else:
            with pytest.raises(GuardError):
                fn(H, f)
    for fn in (delete_vertex,):
        assert validate(fn(H, v)).ok
    for fn in (delete_edge, cut_edge, separate_source_of_edge):
        assert validate(fn(H, f)).ok
    assert cut_edge(cut_edge(H, f), f) == cut_edge(H, f)
    if H.range(f):
        R = decompose_range(H, f)
        assert R.vertices == H.vertices and validate(R).ok
        # every piece keeps s(f): the multiset of sources gains |r(f)|-1 copies
        grown = Counter(e.source for e in H.edges)
        grown[H.source(f)] += len(H.range(f)) - 1
        assert Counter(e.source for e in R.edges) == grown
        assert len(R.edges) == len(H.edges) - 1 + len(H.range(f))
    outs = H.out_edges(v)
    if len(outs) >= 2:
        F = data.draw(st.sets(st.sampled_from(outs), min_size=1, max_size=len(outs) - 1))
        R, fresh = separate_source(H, F, v)
        assert validate(R).ok
        assert len(R.vertices) == len(H.vertices) + 1 and len(R.edges) == len(H.edges)
        assert all(v not in R.source(e) and fresh in R.source(e) for e in F)
