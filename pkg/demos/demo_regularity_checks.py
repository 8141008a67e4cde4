#!/usr/bin/env python3
"""Two subset-quantifier conditions that separate structured from mixing sets.

Product-richness asks every dense subset of A to meet its own productset;
regular position asks dense subsets of a triple (A, B, C) to stay
product-compatible.  Cosets of subgroups fail both, which is exactly why
product counting needs extra hypotheses on abelian groups.
"""

from fractions import Fraction

from grplab import build_group, check_product_rich, check_regular_position, make_set

z12 = build_group("Z/12")

print("product-richness at eps = 1/2 in Z/12")
for spec in ("explicit:0,1,2,3,4,5", "subgroup:2", "explicit:1,3,5,7,9,11"):
    a = make_set(z12, spec)
    verdict = check_product_rich(a, Fraction(1, 2))
    extra = f", witness {list(verdict.witness[0])}" if verdict.witness else ""
    print(f"  A = {spec:24s} -> {verdict.status}{extra}")

print("\nregular position of (A, A, A) at eps = 1")
z4 = build_group("Z/4")
for spec in ("explicit:0,1,2,3", "explicit:0,2", "explicit:1,3"):
    a = make_set(z4, spec)
    verdict = check_regular_position(a, a, a, 1)
    print(f"  A = {spec:18s} in Z/4 -> {verdict.status}")

print(
    "\nThe odd coset {1,3} of <2> fails: products of three odd elements are"
    "\nodd, but the product of two such triples is even, so the two sides"
    "\ncan never meet.  Sampled mode finds the same witness:"
)
coset = make_set(z4, "explicit:1,3")
sampled = check_regular_position(coset, coset, coset, 1, mode="sampled", trials=50, seed=5)
print(f"  sampled verdict: {sampled.status}, witness {[list(w) for w in sampled.witness]}")
