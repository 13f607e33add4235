"""Classify every small hypergraph and check each verdict independently.

For each isomorphism class with at most 3 vertices and 2 edges we reduce,
classify, replay the certificate from the original input, and, where the
verdict is not NotExact, ask the bounded breadth-first search whether it can
find one of g1..g3 anyway. One certificate is written out in full at the end.

    python3 demos/03_certificates.py
"""
from collections import Counter

from hyperminor import (classify, enumerate_hypergraphs, forbidden_catalog, serialize,
                        verify_certificate)
from hyperminor.oracle import minor_search_any

verdicts = Counter()
cases = Counter()
searched = disagreements = 0
example = None
cat = forbidden_catalog()

for H in enumerate_hypergraphs(3, 2):
    v = classify(H)
    verdicts[v.kind] += 1
    cert = v.full_certificate()
    if cert is not None:
        assert verify_certificate(H, cert)
        cases[cert.case] += 1
        if example is None and len(cert.steps) >= 3:
            example = (H, cert)
    if v.kind != "NotExact":
        searched += 1
        disagreements += minor_search_any(v.reduced, cat[:3]) is not None

print("verdicts:", dict(sorted(verdicts.items())))
print("construction used:", dict(sorted(cases.items())))
print(f"searched {searched} non-NotExact classes, disagreements: {disagreements}")

H, cert = example
print("\ninput:")
print(serialize(H), end="")
print("\ncertificate:")
print(cert.to_text(), end="")
