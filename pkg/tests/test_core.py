from __future__ import annotations

import json
from itertools import permutations

import pytest
from hypothesis import given

from conftest import hypergraphs
from hyperminor import (Edge, Hypergraph, HypergraphError, ParseError, are_isomorphic,
                        canonical_form, canonical_key, check_witness, from_directed_graph,
                        g1, g2, g3, g4, hypergraph, parse, serialize, validate)
from hyperminor.core import is_closed, is_cycle, is_path, is_sink
from hyperminor.oracle import enumerate_hypergraphs
from oracles import brute_isomorphic


def rename(H, vmap, emap=None):
    emap = emap or {}
    return Hypergraph([vmap[v] for v in H.vertices],
                      [Edge(emap.get(e.id, e.id), {vmap[v] for v in e.source}, {vmap[v] for v in e.range})
                       for e in H.edges])


class TestModel:
    def test_fixtures_match_catalog(self):
        assert [len(G.vertices) for G in (g1(), g2(), g3(), g4())] == [3, 2, 2, 3]
        assert g3().range("f") == {"w"} and not g3().range("e")
        assert g4().source("e") == g4().source("f") == {"v1", "v2"}

    def test_duplicate_ids_rejected(self):
        with pytest.raises(HypergraphError):
            Hypergraph(["a"], [Edge("e", {"a"}, ()), Edge("e", {"a"}, ())])
        with pytest.raises(HypergraphError):
            Hypergraph(["a", "a"], [])

    def test_ordering_is_deterministic(self):
        H = hypergraph(["b", "a"], {"z": (["a"], []), "y": (["b"], ["a"])})
        assert H.vertices == ("a", "b")
        assert H.edge_ids == ("y", "z")

    def test_incidence_lists(self):
        assert g3().out_edges("w") == ("e", "f")
        assert g3().in_edges("w") == ("f",)
        assert g4().in_edges("v1") == ()


class TestValidate:
    def test_fixtures_ok(self):
        for G in (g1(), g2(), g3(), g4()):
            assert validate(G).ok

    def test_empty_source(self):
        rep = validate(Hypergraph(["a"], [Edge("e", (), ())]))
        assert not rep.ok and rep.violations[0].code == "empty-source"

    def test_dangling_vertex(self):
        rep = validate(Hypergraph(["a"], [Edge("e", {"a"}, {"x"})]))
        assert [v.code for v in rep.violations] == ["dangling-vertex"]
        assert rep.violations[0].ids == ("e", "x")

    def test_bad_label(self):
        assert validate(Hypergraph(["a b"], [])).violations[0].code == "bad-label"

    def test_report_dict(self):
        assert validate(g1()).to_dict() == {"ok": True, "violations": []}


class TestDirectedGraphs:
    def test_double_arc(self):
        H = from_directed_graph([("e", "v", "w"), ("f", "v", "w")])
        assert H.vertices == ("v", "w")
        assert all(e.source == {"v"} and e.range == {"w"} for e in H.edges)

    def test_isolated_only(self):
        H = from_directed_graph([], isolated=["v"])
        assert H.vertices == ("v",) and not H.edges

    def test_self_loop_and_dict_arcs(self):
        H = from_directed_graph([{"id": "e", "src": "v", "dst": "v"}])
        assert H.source("e") == H.range("e") == {"v"}

    def test_duplicate_arc_ids(self):
        with pytest.raises(HypergraphError):
            from_directed_graph([("e", "a", "b"), ("e", "b", "a")])

    @given(hypergraphs(directed_only=True))
    def test_singleton_incidences(self, H):
        arcs = [(e.id, next(iter(e.source)), next(iter(e.range))) for e in H.edges]
        D = from_directed_graph(arcs, isolated=H.vertices)
        assert all(len(e.source) == len(e.range) == 1 for e in D.edges)
        assert D == H


class TestPaths:
    ring = hypergraph(["a1", "a2", "b1", "b2"],
                      {"f1": (["a1", "a2"], ["b1"]), "f2": (["b1", "b2"], ["a2"])})

    def test_sinks(self):
        assert not is_sink(g3(), "w")
        assert is_sink(g4(), "w")
        assert is_sink(Hypergraph(["v"], []), "v")
        with pytest.raises(HypergraphError):
            is_sink(g4(), "zz")

    def test_ring_is_cycle(self):
        assert is_cycle(self.ring, ["f1", "f2"])

    def test_ring_with_extra_edge_still_a_cycle(self):
        H = hypergraph(self.ring.vertices, {"f1": (["a1", "a2"], ["b1"]), "f2": (["b1", "b2"], ["a2"]),
                                            "g": (["b1", "b2"], ["b2"])})
        assert is_cycle(H, ["f1", "f2"])

    def test_open_edge_not_cycle(self):
        H = hypergraph(["a", "b"], {"e": (["a"], ["b"])})
        assert not is_cycle(H, ["e"])

    def test_chord_breaks_cycle(self):
        H = hypergraph(["a", "b", "c"], {"x": (["a"], ["b", "c"]), "y": (["b"], ["c"]), "z": (["c"], ["a"])})
        assert is_closed(H, ["x", "y", "z"])
        assert not is_cycle(H, ["x", "y", "z"])   # r(x) meets s(z)

    def test_invalid_path_rejected(self):
        with pytest.raises(HypergraphError):
            is_cycle(g4(), ["e", "f"])

    def test_implication_chain_on_small_instances(self):
        for H in enumerate_hypergraphs(2, 2):
            for n in (1, 2):
                for p in permutations(H.edge_ids, n):
                    if is_path(H, p) and is_cycle(H, p):
                        assert is_closed(H, p)


class TestIsomorphism:
    def test_relabeled_g1(self):
        H = rename(g1(), {"v1": "p", "v2": "q", "v3": "r"}, {"e": "x", "f": "y"})
        iso = are_isomorphic(g1(), H)
        assert iso is not None and check_witness(g1(), H, iso)

    def test_g1_g2_differ(self):
        assert are_isomorphic(g1(), g2()) is None

    def test_g3_g4_exhaustive(self):
        # the brute-force check walks all 2!*2! and 3!*2! candidates
        assert are_isomorphic(g3(), g4()) is None
        assert not brute_isomorphic(g3(), g4())

    def test_witness_inverse(self):
        H = rename(g3(), {"v": "a", "w": "b"}, {"e": "p", "f": "q"})
        iso = are_isomorphic(g3(), H)
        assert iso.vertex_map == {"v": "a", "w": "b"} and iso.edge_map == {"e": "p", "f": "q"}
        assert check_witness(H, g3(), iso.inverse())

    def test_bad_witness(self):
        from hyperminor import IsoWitness
        assert not check_witness(g3(), g3(), IsoWitness({"v": "w", "w": "v"}, {"e": "e", "f": "f"}))

    @given(hypergraphs(), hypergraphs())
    def test_agrees_with_brute_force(self, H1, H2):
        assert (are_isomorphic(H1, H2) is not None) == brute_isomorphic(H1, H2)

    @given(hypergraphs())
    def test_reflexive_symmetric_and_canonical(self, H):
        perm = list(reversed(H.vertices))
        vmap = dict(zip(H.vertices, [f"y{i}" for i in range(len(perm))]))
        K = rename(H, vmap)
        iso = are_isomorphic(H, K)
        assert iso is not None and check_witness(H, K, iso)
        assert check_witness(K, H, iso.inverse())
        assert canonical_key(H) == canonical_key(K)
        assert canonical_form(H) == canonical_form(K)
        assert are_isomorphic(H, H) is not None


class TestSerialization:
    def test_canonical_g4_document(self):
        text = serialize(g4())
        assert parse(text) == g4()
        assert text.endswith("}\n") and " \n" not in text
        assert list(json.loads(text)) == ["edges", "vertices"]

    def test_out_of_order_edges(self):
        doc = {"vertices": ["w", "v2", "v1"],
               "edges": [{"id": "f", "source": ["v2", "v1"], "range": ["w"]},
                         {"id": "e", "source": ["v1", "v2"], "range": ["w"]}]}
        H = parse(json.dumps(doc))
        assert H == g4()
        assert serialize(H) == serialize(g4())

    def test_duplicate_edge_id(self):
        doc = {"vertices": ["a"], "edges": [{"id": "e", "source": ["a"], "range": []}] * 2}
        with pytest.raises(ParseError) as exc:
            parse(json.dumps(doc))
        assert "$.edges[1]" in str(exc.value)

    def test_malformed_text_has_position(self):
        with pytest.raises(ParseError) as exc:
            parse('{"vertices": [\n  "a",\n  ]}')
        assert exc.value.line == 3

    def test_schema_errors(self):
        for bad in ('[]', '{"vertices": "a"}', '{"edges": [{"source": []}]}', '{"nodes": []}'):
            with pytest.raises(ParseError):
                parse(bad)

    @given(hypergraphs())
    def test_round_trip(self, H):
        assert parse(serialize(H)) == H
        assert serialize(parse(serialize(H))) == serialize(H)

    def test_round_trip_enumerated(self):
        for H in enumerate_hypergraphs(2, 2):
            assert parse(serialize(H)) == H
