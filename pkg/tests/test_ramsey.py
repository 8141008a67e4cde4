from __future__ import annotations

import numpy as np
import pytest

from grplab.groups import build_group
from grplab.ramsey import (
    Coloring,
    Exhausted,
    FailureTrace,
    TupleWitness,
    cip_density_experiment,
    exhaustive_schur_minimum,
    hindman_greedy,
    increasing_products,
    monochromatic_tuple_search,
    schur_adversarial_search,
    schur_counts,
    validate_witness,
)
from grplab.rng import derive
from grplab.sets import GroupSubset

from conftest import fleet_group


def test_coloring_round_trip():
    z6 = build_group("Z/6")
    col = Coloring(z6, np.array([0, 1, 2, 0, 1, 2]), 3)
    again = Coloring.from_json(z6, col.to_json())
    assert np.array_equal(again.color_of, col.color_of) and again.k == 3


def test_random_coloring_is_seeded():
    z20 = build_group("Z/20")
    a = Coloring.random(z20, 3, 7)
    b = Coloring.random(z20, 3, 7)
    c = Coloring.random(z20, 3, 8)
    assert np.array_equal(a.color_of, b.color_of)
    assert not np.array_equal(a.color_of, c.color_of)


# --- Schur counts -----------------------------------------------------------


def test_schur_single_color(any_fleet_group):
    g = any_fleet_group
    col = Coloring(g, np.zeros(g.order, dtype=np.int64), 1)
    rep = schur_counts(col)
    assert rep.counts() == [g.order**2]
    assert rep.max_color == 0


def test_schur_z5_example():
    z5 = build_group("Z/5")
    col = Coloring(z5, np.array([0, 1, 1, 1, 1]), 2)
    rep = schur_counts(col)
    assert rep.counts() == [1, 12]
    assert rep.max_color == 1
    # the identity triple is flagged in color 0's report
    assert rep.per_color[0].degenerate_count == 1
    assert rep.per_color[1].degenerate_count == 0


def test_schur_empty_color_class():
    z4 = build_group("Z/4")
    col = Coloring(z4, np.zeros(4, dtype=np.int64), 2)
    assert schur_counts(col).counts()[1] == 0


def test_schur_counts_sum_invariant():
    g = fleet_group("perm:(1 2 3);(1 2)")
    for seed in (1, 2, 3):
        col = Coloring.random(g, 3, seed)
        rep = schur_counts(col)
        assert sum(rep.counts()) <= g.order**2
    single = schur_counts(Coloring(g, np.zeros(g.order, dtype=np.int64), 1))
    assert sum(single.counts()) == g.order**2


def test_adversarial_search_k1_is_vacuous():
    z5 = build_group("Z/5")
    res = schur_adversarial_search(z5, 1, iterations=5, restarts=2, seed=0)
    assert res.max_count == 25


def test_adversarial_search_z3_k3():
    z3 = build_group("Z/3")
    res = schur_adversarial_search(z3, 3, iterations=30, restarts=6, seed=2)
    assert res.max_count == exhaustive_schur_minimum(z3, 3) == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_adversarial_search_matches_exhaustive(n):
    g = build_group(f"Z/{n}")
    floor = exhaustive_schur_minimum(g, 2)
    res = schur_adversarial_search(g, 2, iterations=100, restarts=10, seed=5)
    assert res.max_count == floor
    assert res.max_count >= floor  # the search can never beat the true minimum


def test_adversarial_search_deterministic():
    z6 = build_group("Z/6")
    a = schur_adversarial_search(z6, 2, iterations=50, restarts=5, seed=9)
    b = schur_adversarial_search(z6, 2, iterations=50, restarts=5, seed=9)
    assert a.max_count == b.max_count
    assert np.array_equal(a.coloring.color_of, b.coloring.color_of)


# --- greedy tuple recursion --------------------------------------------------


def test_greedy_worked_example():
    z8 = build_group("Z/8")
    a = GroupSubset.from_indices(z8, [1, 2, 3])
    result = hindman_greedy(a, 2)
    assert isinstance(result, TupleWitness)
    assert result.elements == (1, 1)
    assert result.products == {(1,): 1, (2,): 1, (1, 2): 2}
    # one more step dies out: B_2 = {1} and 1+1 = 2 is no longer inside
    fail = hindman_greedy(a, 3)
    assert isinstance(fail, FailureTrace)
    assert fail.survivor_sizes == (3, 2, 1, 0)


def test_greedy_on_subgroup_always_succeeds():
    z12 = build_group("Z/12")
    h = GroupSubset.from_indices(z12, [0, 4, 8])
    for n in (1, 2, 4):
        result = hindman_greedy(h, n)
        assert isinstance(result, TupleWitness)
        assert all(h.contains(v) for v in result.products.values())


def test_greedy_identity_singleton():
    z5 = build_group("Z/5")
    result = hindman_greedy(GroupSubset.from_indices(z5, [0]), 3)
    assert isinstance(result, TupleWitness)
    assert result.elements == (0, 0, 0)


def test_increasing_products_order_matters():
    s3 = fleet_group("perm:(1 2 3);(1 2)")
    # pick two non-commuting elements
    x, y = 1, 3
    if s3.mul(x, y) == s3.mul(y, x):
        pytest.skip("chosen elements commute")
    prods = increasing_products(s3, [x, y])
    assert prods[(1, 2)] == s3.mul(x, y)
    assert prods[(1, 2)] != s3.mul(y, x)


def test_validate_witness_rejects_tampering():
    z5 = build_group("Z/5")
    a = GroupSubset.full(z5)
    w = hindman_greedy(a, 2)
    bad = TupleWitness(w.elements, None, {**w.products, (1, 2): (w.products[(1, 2)] + 1) % 5})
    assert not validate_witness(z5, bad, a)


# --- monochromatic search ----------------------------------------------------


def test_search_single_color_identity_tuple(any_fleet_group):
    g = any_fleet_group
    col = Coloring(g, np.zeros(g.order, dtype=np.int64), 1)
    w = monochromatic_tuple_search(col, 3)
    assert isinstance(w, TupleWitness)
    assert validate_witness(g, w, col.color_class(w.color))


def test_search_z5_nontrivial_witness():
    z5 = build_group("Z/5")
    col = Coloring(z5, np.array([0, 1, 1, 1, 1]), 2)
    w = monochromatic_tuple_search(col, 2, nontrivial=True)
    assert isinstance(w, TupleWitness)
    assert w.color == 1
    assert 0 not in w.products.values()


def test_search_nontrivial_exhausted_on_z2():
    z2 = build_group("Z/2")
    col = Coloring(z2, np.array([0, 1]), 2)
    result = monochromatic_tuple_search(col, 2, nontrivial=True)
    assert isinstance(result, Exhausted)
    assert not result.budget_hit  # fully explored, not a budget stop


def test_search_never_exhausted_in_trivial_mode():
    for spec in ("Z/16", "perm:(1 2 3 4);(1 2)"):
        g = build_group(spec)
        for seed in range(5):
            col = Coloring.random(g, 2, derive(31, seed))
            w = monochromatic_tuple_search(col, 3)
            assert isinstance(w, TupleWitness)
            assert validate_witness(g, w, col.color_class(w.color))


def test_greedy_success_implies_search_success():
    z9 = build_group("Z/9")
    col = Coloring.random(z9, 2, 77)
    for j in range(2):
        cls_ = col.color_class(j)
        if cls_.card == 0:
            continue
        if isinstance(hindman_greedy(cls_, 2), TupleWitness):
            w = monochromatic_tuple_search(col, 2)
            assert isinstance(w, TupleWitness)
            break


# --- density experiments -----------------------------------------------------


def test_cip_single_color_density_one():
    z4 = build_group("Z/4")
    out = cip_density_experiment(z4, 1, 2, trials=2, seed=0)
    assert out["min_max_density"] == 1.0


def _mono_density_oracle(group, coloring, n):
    # literal enumeration over all tuples and all subproducts
    best = 0.0
    for j in range(coloring.k):
        mask = coloring.color_of == j
        count = 0
        import itertools

        for tup in itertools.product(range(group.order), repeat=n):
            ok = True
            for fmask in range(1, 1 << n):
                prod = 0
                for i in range(n):
                    if (fmask >> i) & 1:
                        prod = group.mul(prod, tup[i])
                if not mask[prod]:
                    ok = False
                    break
            if ok:
                count += 1
        best = max(best, count / group.order**n)
    return best


def test_cip_exact_matches_oracle_on_z3():
    z3 = build_group("Z/3")
    out = cip_density_experiment(z3, 2, 2, trials=4, seed=6)
    for trial_idx, trial in enumerate(out["per_trial"]):
        col = Coloring.random(z3, 2, derive(6, trial_idx))
        assert trial["max_density"] == pytest.approx(_mono_density_oracle(z3, col, 2))


def test_cip_sampling_close_to_exact():
    z12 = build_group("Z/12")
    col_seed = 13
    exact = cip_density_experiment(z12, 2, 2, trials=1, seed=col_seed)
    sampled = cip_density_experiment(
        z12, 2, 2, trials=1, seed=col_seed, max_exact_iterations=10, samples=20000
    )
    for e_trial, s_trial in zip(exact["per_trial"], sampled["per_trial"]):
        for e_color, s_color in zip(e_trial["per_color"], s_trial["per_color"]):
            if not s_color["exact"] and s_color.get("stderr", 0) > 0:
                diff = abs(e_color["density"] - s_color["density"])
                assert diff <= 3 * s_color["stderr"] + 1e-9
