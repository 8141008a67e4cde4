#!/usr/bin/env python3
"""Counting three-term progressions (a, a+b, a+2b) inside intervals.

An interval {0..m-1} in a large Z/N has small doubling and carries many
progressions: exactly ceil(m^2/2) pairs (a, b), which is about half of the
|A|^2 trivial upper bound.  Random sets of the same size carry far fewer.
"""

from grplab import build_group, count_ap3, doubling_constant, make_set
from grplab.rng import derive

N = 10_000
group = build_group(f"Z/{N}")

print(f"progressions in Z/{N}\n")
print(f"{'set':24s} {'|A|':>5s} {'count':>7s} {'count/|A|^2':>11s} {'doubling':>9s}")
for m in (50, 100, 200):
    a = make_set(group, f"interval:0,{m}")
    rep = count_ap3(a)
    print(
        f"interval:0,{m:<12d} {a.card:5d} {rep.count:7d} {rep.ratio:11.3f}"
        f" {float(doubling_constant(a)):9.3f}"
    )

for m in (50, 100, 200):
    a = make_set(group, f"random:{m / N},{derive(99, m)}")
    rep = count_ap3(a)
    print(
        f"random,|A|~{m:<13d} {a.card:5d} {rep.count:7d} {rep.ratio:11.3f}"
        f" {float(doubling_constant(a)):9.3f}"
    )

print(
    "\nIntervals hit the ceil(m^2/2) closed form (pairs of equal-parity"
    "\nendpoints); random sets of the same size have doubling near 2|A| and"
    "\nonly the |A| degenerate progressions plus chance hits."
)
