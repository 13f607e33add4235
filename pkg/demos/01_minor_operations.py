"""Walk through the primitive minor operations on small hypergraphs.

Each step prints the operation line as it would appear in a trace file, then
the resulting hypergraph. At the end the recorded trace is replayed from the
start and compared with the live result.

    python3 demos/01_minor_operations.py
"""
from hyperminor import Recorder, g3, hypergraph, are_isomorphic


def show(H):
    for e in H.edges:
        src = ",".join(sorted(e.source))
        rng = ",".join(sorted(e.range))
        print(f"    {e.id:10s} {{{src}}} -> {{{rng}}}")
    lonely = [v for v in H.vertices if not H.out_edges(v) and not H.in_edges(v)]
    if lonely:
        print("    isolated:", " ".join(lonely))


def step(rec, label, fn, *args):
    fn(*args)
    print(f"\n{label}: {rec.steps[-1].to_line()}")
    show(rec.H)


# One edge whose source and range are both {v, w}.
H = hypergraph(["v", "w"], {"e": (["v", "w"], ["v", "w"])})
print("start")
show(H)

rec = Recorder(H)
step(rec, "split the range into singleton pieces", rec.decompose_range, "e")
step(rec, "cut one piece", rec.cut_edge, "e@w")

iso = are_isomorphic(rec.H, g3())
print("\nisomorphic to g3:", iso is not None)
print("vertex map:", iso.vertex_map)

# A second host: separate the source of one edge at a shared vertex.
K = hypergraph(["a", "b", "w"], {"p": (["a", "w"], []), "q": (["b", "w"], [])})
print("\nanother start")
show(K)
rec2 = Recorder(K)
step(rec2, "give p its own copy of w", rec2.separate_source, ["p"], "w")
step(rec2, "delete b, which shrinks the source of q", rec2.delete_vertex, "b")

print("\ntrace text:")
print(rec.trace().to_text(), end="")
print("replay matches:", rec.trace().replay() == rec.H)
