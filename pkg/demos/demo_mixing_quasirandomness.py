#!/usr/bin/env python3
"""Quasirandomness in action: product counts mix better as PSL2(q) grows.

For random sets A, B, C of fixed density, the number of solutions to
x*y = z with (x,y,z) in A x B x C should approach |A||B||C| / |G| when the
group has no small nontrivial representations.  The table shows the
relative deviation from that target shrinking as the quasirandomness
degree of PSL2(q) rises, while an abelian group of comparable size shows
no such behaviour for structured sets.
"""

from grplab import (
    build_group,
    count_xy_eq_z,
    make_set,
    quasirandomness_degree,
)
from grplab.rng import derive

DENSITY = 0.3
SEEDS = 5
BASE_SEED = 1234


def median(xs):
    xs = sorted(xs)
    mid = len(xs) // 2
    return xs[mid] if len(xs) % 2 else (xs[mid - 1] + xs[mid]) / 2


print(f"random sets of density {DENSITY}, median over {SEEDS} seeds\n")
print(f"{'group':10s} {'order':>6s} {'qr-degree':>9s} {'median |dev|':>12s}")
for q in (5, 7, 11, 13):
    group = build_group(f"PSL2({q})")
    deviations = []
    for s in range(SEEDS):
        sets = [
            make_set(group, f"random:{DENSITY},{derive(BASE_SEED, q, s, t)}")
            for t in range(3)
        ]
        rep = count_xy_eq_z(*sets)
        target = sets[0].card * sets[1].card * sets[2].card / group.order
        deviations.append(abs(rep.count / target - 1.0))
    print(
        f"PSL2({q}):{'':3s} {group.order:6d} {quasirandomness_degree(group):9d}"
        f" {median(deviations):12.4f}"
    )

# contrast: a structured (non-random) set in an abelian group mixes badly
z = build_group("Z/1092")
a = make_set(z, "subgroup:4")  # index-4 subgroup
rep = count_xy_eq_z(a, a, a)
target = a.card**3 / z.order
print(
    f"\nZ/1092 with A = B = C = <4>: count {rep.count} vs target {target:.0f}"
    f" (deviation {abs(rep.count / target - 1):.2f})"
)
print("abelian groups admit dense sets whose product counts miss the target badly;")
print("quasirandom groups do not.")
