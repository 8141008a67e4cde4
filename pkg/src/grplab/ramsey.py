"""Colorings of a group: Schur triple counting, adversarial coloring search,
and monochromatic product-tuple search.

The tuple search is a finite adaptation of the shrinking-set recursion
B_{i+1} = B_i meet a_i^-1 B_i: while every B_i stays nonempty, the chosen
elements a_1..a_n have all of their increasing-order subproducts inside B_0.
Greedy element choice (argmax of the surviving set, ties to the least
index) makes the run deterministic; a backtracking search with prefix
pruning covers the colorings the greedy misses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .counting import CountReport, count_xy_eq_z
from .errors import BudgetExceeded, MalformedSpec
from .groups import FiniteGroup
from .rng import SplitMix64, derive
from .sets import GroupSubset

DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class Coloring:
    """Assignment of one of k colors to every element index."""

    group: FiniteGroup
    color_of: np.ndarray
    k: int

    def __post_init__(self) -> None:
        colors = np.asarray(self.color_of, dtype=np.int64)
        if colors.shape != (self.group.order,):
            raise MalformedSpec("coloring length must equal the group order")
        if self.k < 1 or (len(colors) and (colors.min() < 0 or colors.max() >= self.k)):
            raise MalformedSpec("colors must lie in 0..k-1")
        object.__setattr__(self, "color_of", colors)
        self.color_of.setflags(write=False)

    def color_class(self, j: int) -> GroupSubset:
        return GroupSubset(self.group, self.color_of == j)

    def classes(self) -> List[GroupSubset]:
        return [self.color_class(j) for j in range(self.k)]

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "colors": self.color_of.tolist()})

    @classmethod
    def from_json(cls, group: FiniteGroup, text: str) -> "Coloring":
        data = json.loads(text)
        return cls(group, np.asarray(data["colors"], dtype=np.int64), int(data["k"]))

    @classmethod
    def random(cls, group: FiniteGroup, k: int, seed: int) -> "Coloring":
        stream = SplitMix64(derive(seed, 0xC0105))
        colors = np.fromiter(
            (stream.randrange(k) for _ in range(group.order)),
            dtype=np.int64,
            count=group.order,
        )
        return cls(group, colors, k)


# ---------------------------------------------------------------------------
# Schur triples


@dataclass(frozen=True)
class SchurReport:
    per_color: Tuple[CountReport, ...]
    max_color: int

    @property
    def max_count(self) -> int:
        return self.per_color[self.max_color].count

    def counts(self) -> List[int]:
        return [r.count for r in self.per_color]

    def to_dict(self) -> dict:
        return {
            "counts": self.counts(),
            "max_color": self.max_color,
            "max_count": self.max_count,
            "per_color": [r.to_dict() for r in self.per_color],
        }


def schur_counts(coloring: Coloring, engine: str = "auto") -> SchurReport:
    """Per color j, |{(a, b) : a, b, ab all colored j}|, plus the argmax color.

    The identity triple (id, id, id) is flagged through each report's
    degenerate count; ties on the maximum go to the least color index.
    """
    reports = tuple(
        count_xy_eq_z(cls_, cls_, cls_, engine) for cls_ in coloring.classes()
    )
    best = max(range(coloring.k), key=lambda j: (reports[j].count, -j))
    return SchurReport(reports, best)


def _schur_count_of_mask(group: FiniteGroup, mask: np.ndarray) -> int:
    idx = np.nonzero(mask)[0].astype(np.int64)
    if len(idx) == 0:
        return 0
    table = group.table
    if table is not None:
        prods = table[np.ix_(idx, idx)]
    else:
        prods = group.mul_arrays(idx[:, None], idx[None, :])
    return int(mask[prods.ravel()].sum())


@dataclass(frozen=True)
class AdversarialSearchResult:
    coloring: Coloring
    max_count: int
    counts: Tuple[int, ...]
    restarts: int
    iterations_used: int

    def to_dict(self) -> dict:
        return {
            "max_count": self.max_count,
            "counts": list(self.counts),
            "restarts": self.restarts,
            "iterations_used": self.iterations_used,
            "coloring": json.loads(self.coloring.to_json()),
        }


def schur_adversarial_search(
    group: FiniteGroup, k: int, iterations: int, restarts: int, seed: int
) -> AdversarialSearchResult:
    """Hill descent minimizing the maximum per-color Schur count.

    Moves recolor one element; a move is taken when it lowers
    (max count, total count), ties broken by element index then new color.
    Restarts run from fresh seeded random colorings; the best local minimum
    over all restarts is returned.  Deterministic given the seed.
    """
    n = group.order
    best: Optional[Tuple[int, int, np.ndarray, Tuple[int, ...]]] = None
    used = 0
    for restart in range(max(1, restarts)):
        coloring = Coloring.random(group, k, derive(seed, restart))
        colors = np.array(coloring.color_of)
        counts = [
            _schur_count_of_mask(group, colors == j) for j in range(k)
        ]
        for _ in range(max(0, iterations)):
            used += 1
            move = _best_recolor_move(group, colors, counts, k)
            if move is None:
                break
            element, new_color, new_counts = move
            colors[element] = new_color
            counts = new_counts
        score = (max(counts), sum(counts))
        if best is None or score < (best[0], best[1]):
            best = (score[0], score[1], colors.copy(), tuple(counts))
    assert best is not None
    final = Coloring(group, best[2], k)
    return AdversarialSearchResult(final, best[0], best[3], max(1, restarts), used)


def _best_recolor_move(
    group: FiniteGroup, colors: np.ndarray, counts: List[int], k: int
) -> Optional[Tuple[int, int, List[int]]]:
    current = (max(counts), sum(counts))
    best_move: Optional[Tuple[Tuple[int, int], int, int, List[int]]] = None
    for element in range(group.order):
        old = int(colors[element])
        for new in range(k):
            if new == old:
                continue
            colors[element] = new
            trial = list(counts)
            trial[old] = _schur_count_of_mask(group, colors == old)
            trial[new] = _schur_count_of_mask(group, colors == new)
            colors[element] = old
            score = (max(trial), sum(trial))
            if score < current and (best_move is None or score < best_move[0]):
                best_move = (score, element, new, trial)
    if best_move is None:
        return None
    return best_move[1], best_move[2], best_move[3]


def exhaustive_schur_minimum(group: FiniteGroup, k: int) -> int:
    """Minimum over all k^n colorings of the max per-color Schur count.

    Only feasible for tiny groups; used as the oracle for the search.
    """
    n = group.order
    if k**n > 2_000_000:
        raise BudgetExceeded(f"{k}^{n} colorings exceed the exhaustive budget")
    best = None
    colors = np.zeros(n, dtype=np.int64)
    for code in range(k**n):
        c = code
        for i in range(n):
            colors[i] = c % k
            c //= k
        worst = max(_schur_count_of_mask(group, colors == j) for j in range(k))
        if best is None or worst < best:
            best = worst
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# monochromatic product tuples


@dataclass(frozen=True)
class TupleWitness:
    """A tuple whose increasing-order subproducts all lie in one set.

    ``products`` maps each nonempty index subset F (sorted tuple of 1-based
    positions) to the element a_F.
    """

    elements: Tuple[int, ...]
    color: Optional[int]
    products: Dict[Tuple[int, ...], int]

    def to_dict(self) -> dict:
        return {
            "elements": list(self.elements),
            "color": self.color,
            "products": {",".join(map(str, f)): v for f, v in self.products.items()},
        }


@dataclass(frozen=True)
class FailureTrace:
    """Trace of the shrinking sets when the greedy recursion dies out."""

    chosen: Tuple[int, ...]
    survivor_sizes: Tuple[int, ...]
    failed_at_step: int

    def to_dict(self) -> dict:
        return {
            "chosen": list(self.chosen),
            "survivor_sizes": list(self.survivor_sizes),
            "failed_at_step": self.failed_at_step,
        }


@dataclass(frozen=True)
class Exhausted:
    budget_hit: bool

    def to_dict(self) -> dict:
        return {"exhausted": True, "budget_hit": self.budget_hit}


def increasing_products(group: FiniteGroup, elements: Sequence[int]) -> Dict[Tuple[int, ...], int]:
    """All a_F for nonempty F, products taken in increasing index order."""
    n = len(elements)
    out: Dict[Tuple[int, ...], int] = {}
    for mask in range(1, 1 << n):
        f = tuple(i + 1 for i in range(n) if (mask >> i) & 1)
        prod = 0
        for i in f:
            prod = group.mul(prod, elements[i - 1])
        out[f] = prod
    return out


def validate_witness(group: FiniteGroup, witness: TupleWitness, target: GroupSubset) -> bool:
    """Recompute every subproduct independently and test membership."""
    products = increasing_products(group, witness.elements)
    if products != witness.products:
        return False
    return all(target.contains(v) for v in products.values())


def hindman_greedy(a: GroupSubset, n: int) -> Union[TupleWitness, FailureTrace]:
    """Greedy shrinking-set recursion on the set a.

    Step i picks a_i maximizing |B_i meet a^-1 B_i| over a in B_i (ties to
    the least index) and shrinks B_{i+1} = B_i meet a_i^-1 B_i; the run
    succeeds when n elements are chosen with every survivor set nonempty.
    Successful witnesses are re-validated against the raw definition.
    """
    if n < 1:
        raise MalformedSpec(f"tuple length must be >= 1, got {n}")
    group = a.group
    current = a.mask.copy()
    chosen: List[int] = []
    sizes: List[int] = [int(current.sum())]
    for step in range(n):
        members = np.nonzero(current)[0].astype(np.int64)
        if len(members) == 0:
            return FailureTrace(tuple(chosen), tuple(sizes), step)
        best_elem = -1
        best_size = -1
        best_mask: Optional[np.ndarray] = None
        for cand in members.tolist():
            translated = _left_quotient_mask(group, cand, current)
            nxt = current & translated
            size = int(nxt.sum())
            if size > best_size:
                best_elem, best_size, best_mask = cand, size, nxt
        assert best_mask is not None
        if best_size == 0:
            chosen.append(best_elem)
            sizes.append(0)
            return FailureTrace(tuple(chosen), tuple(sizes), step + 1)
        chosen.append(best_elem)
        sizes.append(best_size)
        current = best_mask
    witness = TupleWitness(tuple(chosen), None, increasing_products(group, chosen))
    if not validate_witness(group, witness, a):
        raise AssertionError("greedy witness failed re-validation")
    return witness


def _left_quotient_mask(group: FiniteGroup, x: int, mask: np.ndarray) -> np.ndarray:
    """{y : x*y in mask}."""
    table = group.table
    if table is not None:
        return mask[table[x]]
    row = group.mul_arrays(
        np.full(group.order, x, dtype=np.int64), np.arange(group.order, dtype=np.int64)
    )
    return mask[row]


def monochromatic_tuple_search(
    coloring: Coloring,
    n: int,
    budget: int = DEFAULT_NODE_BUDGET,
    nontrivial: bool = False,
) -> Union[TupleWitness, Exhausted]:
    """Find a tuple whose subproducts are monochromatic, trying colors in order.

    Per color: the greedy recursion first (skipped in nontrivial mode, where
    all a_i and all subproducts must differ from the identity), then exact
    backtracking with prefix pruning under the node budget.  The identity's
    color always admits (id,..,id), so in trivial mode the search cannot
    come back empty.
    """
    if n < 1:
        raise MalformedSpec(f"tuple length must be >= 1, got {n}")
    group = coloring.group
    identity_color = int(coloring.color_of[0])
    budget_hit = False
    for j in range(coloring.k):
        cls_ = coloring.color_class(j)
        if cls_.card == 0:
            continue
        if not nontrivial:
            result = hindman_greedy(cls_, n)
            if j == identity_color and not isinstance(result, TupleWitness):
                raise AssertionError("greedy must succeed on the identity's color class")
            if isinstance(result, TupleWitness):
                witness = TupleWitness(result.elements, j, result.products)
                if not validate_witness(group, witness, cls_):
                    raise AssertionError("witness failed re-validation")
                return witness
        found, hit = _backtrack_tuple(group, cls_, n, budget, nontrivial)
        budget_hit = budget_hit or hit
        if found is not None:
            witness = TupleWitness(found, j, increasing_products(group, found))
            if not validate_witness(group, witness, cls_):
                raise AssertionError("witness failed re-validation")
            if nontrivial and any(v == 0 for v in witness.products.values()):
                raise AssertionError("nontrivial witness contains the identity")
            return witness
    return Exhausted(budget_hit)


def _backtrack_tuple(
    group: FiniteGroup,
    target: GroupSubset,
    n: int,
    budget: int,
    nontrivial: bool,
) -> Tuple[Optional[Tuple[int, ...]], bool]:
    mask = target.mask
    candidates = target.indices.tolist()
    nodes = 0

    def extend(prefix: List[int], prods: List[int]) -> Optional[Tuple[int, ...]]:
        # prods holds a_F for all nonempty F of the prefix, any order
        nonlocal nodes
        if len(prefix) == n:
            return tuple(prefix)
        for cand in candidates:
            nodes += 1
            if nodes > budget:
                return None
            if nontrivial and cand == 0:
                continue
            new_prods = [cand] + [group.mul(p, cand) for p in prods]
            if any(not mask[v] for v in new_prods):
                continue
            if nontrivial and any(v == 0 for v in new_prods):
                continue
            result = extend(prefix + [cand], prods + new_prods)
            if result is not None:
                return result
            if nodes > budget:
                return None
        return None

    found = extend([], [])
    return found, nodes > budget


# ---------------------------------------------------------------------------
# conjectured-density experiment over random colorings


def monochromatic_tuple_density(
    coloring: Coloring,
    n: int,
    *,
    max_exact_iterations: int = 10**8,
    samples: int = 100_000,
    seed: int = 0,
) -> dict:
    """Max over colors of the density of monochromatic n-tuples.

    Exact when |G|^n fits the iteration budget, otherwise a uniform sample
    with a reported standard error.
    """
    group = coloring.group
    total = group.order**n
    exact = total <= max_exact_iterations
    best = {"color": -1, "density": -1.0}
    per_color = []
    for j in range(coloring.k):
        cls_ = coloring.color_class(j)
        if cls_.card == 0:
            entry = {"color": j, "density": 0.0, "exact": True}
            per_color.append(entry)
            continue
        if exact:
            count = _count_mono_tuples_exact(group, cls_, n)
            entry = {"color": j, "count": count, "density": count / total, "exact": True}
        else:
            hits = 0
            stream = SplitMix64(derive(seed, 0xC1B, j))
            for _ in range(samples):
                tup = [stream.randrange(group.order) for _ in range(n)]
                if _tuple_is_monochromatic(group, cls_.mask, tup):
                    hits += 1
            p = hits / samples
            se = (p * (1 - p) / samples) ** 0.5
            entry = {
                "color": j,
                "density": p,
                "stderr": se,
                "samples": samples,
                "exact": False,
            }
        per_color.append(entry)
        if entry["density"] > best["density"]:
            best = {"color": j, "density": entry["density"]}
    return {"n": n, "max_color": best["color"], "max_density": best["density"], "per_color": per_color}


def _count_mono_tuples_exact(group: FiniteGroup, cls_: GroupSubset, n: int) -> int:
    from .counting import all_nonempty_subsets, count_mixing_tuples

    if 2 <= n <= 4:
        sets = {f: cls_ for f in all_nonempty_subsets(n)}
        return count_mixing_tuples(n, sets).count
    if n == 1:
        return cls_.card
    raise BudgetExceeded(f"exact monochromatic tuple count supports n in 1..4, got {n}")


def _tuple_is_monochromatic(group: FiniteGroup, mask: np.ndarray, tup: List[int]) -> bool:
    n = len(tup)
    for fmask in range(1, 1 << n):
        prod = 0
        for i in range(n):
            if (fmask >> i) & 1:
                prod = group.mul(prod, tup[i])
        if not mask[prod]:
            return False
    return True


def cip_density_experiment(
    group: FiniteGroup,
    k: int,
    n: int,
    trials: int,
    seed: int,
    *,
    max_exact_iterations: int = 10**8,
    samples: int = 100_000,
) -> dict:
    """Observed max monochromatic n-tuple densities over seeded random colorings.

    Reports per-trial maxima and their min/median/max; makes no claim about
    any conjectured lower bound, it only measures.
    """
    if trials < 1:
        raise MalformedSpec("trials must be >= 1")
    per_trial = []
    for t in range(trials):
        coloring = Coloring.random(group, k, derive(seed, t))
        result = monochromatic_tuple_density(
            coloring, n, max_exact_iterations=max_exact_iterations, samples=samples, seed=derive(seed, t, 1)
        )
        per_trial.append(result)
    maxima = sorted(r["max_density"] for r in per_trial)
    mid = len(maxima) // 2
    median = maxima[mid] if len(maxima) % 2 else (maxima[mid - 1] + maxima[mid]) / 2
    return {
        "group": group.spec_text,
        "k": k,
        "n": n,
        "trials": trials,
        "seed": seed,
        "min_max_density": maxima[0],
        "median_max_density": median,
        "max_max_density": maxima[-1],
        "per_trial": per_trial,
    }
