"""Normalize and reduce two inputs, printing each loop step.

The first input is an ordinary directed graph. Every arc ends up cut, so the
reduced form has only empty ranges and singleton sources. The second input
has one hyperedge with a two-vertex range feeding a plain arc. It reduces to
two empty-range edges over the same two-vertex source.

    python3 demos/02_reduction.py
"""
from hyperminor import classify, from_directed_graph, hypergraph, is_reduced, reduce


def show(H, indent="    "):
    for e in H.edges:
        print(f"{indent}{e.id:8s} {{{','.join(sorted(e.source))}}} -> {{{','.join(sorted(e.range))}}}")


def walk(name, H):
    print(f"== {name}")
    show(H)
    log = []
    R, trace = reduce(H, log)
    print("  operations:")
    for op in trace.steps:
        print("    " + op.to_line())
    print("  loop steps:", ", ".join(f"{s.tag}({' '.join(s.payload)})" for s in log) or "none")
    print("  reduced:")
    show(R)
    v = classify(H)
    print(f"  reduced? {is_reduced(R)}   verdict: {v.to_dict()}\n")


walk("a directed graph with a cycle and a loop",
     from_directed_graph([("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a"), ("l", "b", "b")]))

walk("a two-vertex range feeding an arc",
     hypergraph(["a1", "a2", "b1", "b2", "c"],
                {"e": (["a1", "a2"], ["b1", "b2"]), "f": (["b1"], ["c"])}))
