#!/usr/bin/env python3
"""How fast do subsets grow under repeated products?

Three archetypes side by side: an interval (slow, linear growth), a random
set (explosive growth), and a subgroup (no growth at all).  Growth is
measured on the symmetrized set, so every profile starts at roughly
(2|A|+1)/|A| and is nondecreasing from there.
"""

from grplab import build_group, doubling_constant, growth_profile, make_set, tripling_constant

N = 1000
M_MAX = 8

group = build_group(f"Z/{N}")

cases = [
    ("interval of length 10", "interval:0,10"),
    ("generalized progression 2-dim", "gap:0;1,5;100,5"),
    ("random density 0.01", "random:0.01,7"),
    ("subgroup <50>", "subgroup:50"),
]

print(f"growth of symmetrized powers in Z/{N} (entries are |X^(m)| / |A|)\n")
header = "  ".join(f"m={m}" for m in range(1, M_MAX + 1))
print(f"{'set':32s} |A|  doubling  tripling  {header}")
for label, spec in cases:
    a = make_set(group, spec)
    profile = growth_profile(a, M_MAX)
    row = "  ".join(f"{float(x):5.1f}" for x in profile)
    print(
        f"{label:32s} {a.card:3d}  {float(doubling_constant(a)):8.3f}"
        f"  {float(tripling_constant(a)):8.3f}  {row}"
    )

print(
    "\nThe interval grows by a constant amount per step, the random set"
    "\nsaturates the whole group after a couple of products, and the"
    "\nsubgroup is a fixed point of the growth map."
)
