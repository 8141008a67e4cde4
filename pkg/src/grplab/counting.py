"""Exact solution counting for group equations and mixing-tuple sets.

Three engines are kept deliberately separate so they can cross-check each
other: ``BruteForce`` is a plain Python loop over tuples, ``CayleyConvolution``
gathers products through the group's vectorized multiplication, and
``AbelianFFT`` convolves indicator arrays over cyclic-product groups.  All
counts are exact integers; the FFT path rounds and is accepted only when
both an a-priori error bound and the observed rounding residual stay well
below 1/2, otherwise it falls back to exact integer convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    BudgetExceeded,
    DomainMismatch,
    EngineUnsupported,
    GroupMismatch,
    PointwiseIdentityFailed,
)
from .groups import FiniteGroup, element_order
from .sets import GroupSubset, _require_same_group

ENGINE_BRUTE = "BruteForce"
ENGINE_CAYLEY = "CayleyConvolution"
ENGINE_FFT = "AbelianFFT"

_CHUNK = 1 << 20
MIXING_BUDGET = 10**9
_FFT_RESIDUAL_LIMIT = 0.25


@dataclass(frozen=True)
class CountReport:
    """Exact count of solutions plus the reference normalizer.

    ``ratio`` is count/normalizer as a float; ``degenerate_count`` follows
    each operation's convention for trivial solutions (documented on the
    operation).  ``extras`` carries operation-specific diagnostics.
    """

    equation: str
    count: int
    normalizer: Fraction
    degenerate_count: int
    engine: str
    extras: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        if self.normalizer == 0:
            return float("nan")
        return self.count / float(self.normalizer)

    def to_dict(self) -> dict:
        return {
            "equation": self.equation,
            "count": self.count,
            "degenerate": self.degenerate_count,
            "normalizer_num": self.normalizer.numerator,
            "normalizer_den": self.normalizer.denominator,
            "ratio": self.ratio,
            "engine": self.engine,
            **self.extras,
        }


# ---------------------------------------------------------------------------
# xy = z


def count_xy_eq_z(
    a: GroupSubset, b: GroupSubset, c: GroupSubset, engine: str = "auto"
) -> CountReport:
    """|{(x, y, z) in A x B x C : x*y = z}|, normalized by |A||B||C|/|G|.

    The degenerate count is 1 when the identity triple (id, id, id) solves
    the equation, else 0.
    """
    g = _require_same_group(a, b, c)
    engine = _resolve_engine(g, engine)
    if engine == ENGINE_BRUTE:
        count = _xyz_brute(g, a, b, c)
    elif engine == ENGINE_CAYLEY:
        count = _xyz_cayley(g, a, b, c)
    else:
        count = _xyz_fft(g, a, b, c)
    degenerate = int(a.contains(0) and b.contains(0) and c.contains(0))
    normalizer = Fraction(a.card * b.card * c.card, g.order)
    return CountReport("xyz", count, normalizer, degenerate, engine)


def _resolve_engine(g: FiniteGroup, engine: str) -> str:
    if engine == "auto":
        return ENGINE_FFT if g.cyclic_moduli is not None and g.order > 1024 else ENGINE_CAYLEY
    if engine in ("brute", ENGINE_BRUTE):
        return ENGINE_BRUTE
    if engine in ("cayley", ENGINE_CAYLEY):
        return ENGINE_CAYLEY
    if engine in ("fft", ENGINE_FFT):
        if g.cyclic_moduli is None:
            raise EngineUnsupported(f"AbelianFFT needs a cyclic product group, not {g.spec_text}")
        return ENGINE_FFT
    raise EngineUnsupported(f"unknown engine {engine!r}")


def _xyz_brute(g: FiniteGroup, a: GroupSubset, b: GroupSubset, c: GroupSubset) -> int:
    mul = g.mul
    cset = set(c.to_index_list())
    count = 0
    for x in a.to_index_list():
        for y in b.to_index_list():
            if mul(x, y) in cset:
                count += 1
    return count


def _xyz_cayley(g: FiniteGroup, a: GroupSubset, b: GroupSubset, c: GroupSubset) -> int:
    ai, bi = a.indices, b.indices
    if len(ai) == 0 or len(bi) == 0:
        return 0
    table = g.table
    count = 0
    rows = max(1, _CHUNK // max(1, len(bi)))
    for lo in range(0, len(ai), rows):
        chunk = ai[lo : lo + rows]
        if table is not None:
            prods = table[np.ix_(chunk, bi)]
        else:
            prods = g.mul_arrays(chunk[:, None], bi[None, :])
        count += int(c.mask[prods.ravel()].sum())
    return count


def cyclic_convolution(g: FiniteGroup, fa: np.ndarray, fb: np.ndarray) -> np.ndarray:
    """Exact integer group convolution (1_A * 1_B) over a cyclic product group.

    Fast path: multidimensional FFT, rounded, accepted only when the a-priori
    float error bound and the observed residual are both < 1/2.  Fallback:
    exact integer accumulation of rolled arrays over the smaller support.
    """
    moduli = g.cyclic_moduli
    assert moduli is not None
    shape = tuple(moduli)
    A = fa.reshape(shape).astype(np.float64)
    B = fb.reshape(shape).astype(np.float64)
    n = g.order
    max_out = float(min(fa.sum(), fb.sum()))
    # conservative a-priori bound on FFT rounding error
    bound = 1e-15 * max(1.0, max_out) * n * max(1.0, math.log2(max(2, n)))
    if bound < 0.4:
        conv = np.fft.ifftn(np.fft.fftn(A) * np.fft.fftn(B)).real
        rounded = np.rint(conv)
        residual = float(np.abs(conv - rounded).max()) if conv.size else 0.0
        if residual < _FFT_RESIDUAL_LIMIT:
            return rounded.astype(np.int64).reshape(-1)
    # exact fallback: accumulate B shifted by each member of A's support
    small, other = (fa, fb) if fa.sum() <= fb.sum() else (fb, fa)
    out = np.zeros(shape, dtype=np.int64)
    oth = other.reshape(shape).astype(np.int64)
    support = np.nonzero(small.reshape(-1))[0]
    for idx in support:
        shifts = np.unravel_index(int(idx), shape)
        out += np.roll(oth, shifts, axis=tuple(range(len(shape))))
    return out.reshape(-1)


def _xyz_fft(g: FiniteGroup, a: GroupSubset, b: GroupSubset, c: GroupSubset) -> int:
    conv = cyclic_convolution(g, a.mask.astype(np.int64), b.mask.astype(np.int64))
    return int(conv[c.indices].sum())


# ---------------------------------------------------------------------------
# three-term progressions (a, ab, ab^2)


def count_ap3(a: GroupSubset, engine: str = "auto") -> CountReport:
    """Pairs (x, y) in G^2 with x, xy, xy^2 all in A; normalizer |A|^2.

    Pairs with y = identity are the degenerate ones.
    """
    g = a.group
    if engine in ("auto", "cayley", ENGINE_CAYLEY):
        count, degenerate = _ap3_fast(g, a)
        used = ENGINE_CAYLEY
    elif engine in ("brute", ENGINE_BRUTE):
        count, degenerate = _ap3_brute(g, a)
        used = ENGINE_BRUTE
    else:
        raise EngineUnsupported(f"count_ap3 supports brute/cayley, not {engine!r}")
    return CountReport("ap3", count, Fraction(a.card * a.card), degenerate, used)


def _ap3_fast(g: FiniteGroup, a: GroupSubset) -> Tuple[int, int]:
    # reparametrize by (x, m=xy): y = x^-1 m, and x y^2 = m y
    ai = a.indices
    if len(ai) == 0:
        return 0, 0
    inv = g.inverse_table.astype(np.int64)
    count = 0
    degenerate = 0
    rows = max(1, _CHUNK // len(ai))
    for lo in range(0, len(ai), rows):
        xs = ai[lo : lo + rows]
        ys = g.mul_arrays(inv[xs][:, None], ai[None, :])
        third = g.mul_arrays(np.broadcast_to(ai[None, :], ys.shape), ys)
        hits = a.mask[third]
        count += int(hits.sum())
        degenerate += int(np.count_nonzero(hits & (ys == 0)))
    return count, degenerate


def _ap3_brute(g: FiniteGroup, a: GroupSubset) -> Tuple[int, int]:
    mul = g.mul
    mask = a.mask
    count = 0
    degenerate = 0
    for x in a.to_index_list():
        for y in range(g.order):
            m = mul(x, y)
            if mask[m] and mask[mul(m, y)]:
                count += 1
                if y == 0:
                    degenerate += 1
    return count, degenerate


# ---------------------------------------------------------------------------
# power equations x^n1 * y^n2 = z^n3


def count_power_equation(
    a: GroupSubset, n1: int, n2: int, n3: int, engine: str = "auto"
) -> CountReport:
    """Triples (x, y, z) in A^3 with x^n1 * y^n2 = z^n3; normalizer |A|^2.

    Degenerate solutions are those with x = y = z.  The report also notes
    whether A is free of nontrivial elements whose order divides one of the
    exponents (``extras["torsion_free"]``).
    """
    if min(n1, n2, n3) < 1:
        raise ValueError("exponents must be >= 1")
    g = a.group
    ai = a.indices
    torsion_free = _torsion_free(g, ai, (n1, n2, n3))
    extras = {"torsion_free": torsion_free, "exponents": [n1, n2, n3]}
    if len(ai) == 0:
        return CountReport("power", 0, Fraction(0), 0, ENGINE_CAYLEY, extras)

    p1 = g.pow_arrays(ai, n1)
    p2 = g.pow_arrays(ai, n2)
    p3 = g.pow_arrays(ai, n3)
    if engine in ("brute", ENGINE_BRUTE):
        mul = g.mul
        targets: Dict[int, int] = {}
        for v in p3.tolist():
            targets[v] = targets.get(v, 0) + 1
        count = 0
        for x in p1.tolist():
            for y in p2.tolist():
                count += targets.get(mul(x, y), 0)
        used = ENGINE_BRUTE
    elif engine in ("auto", "cayley", ENGINE_CAYLEY):
        weights = np.bincount(p3, minlength=g.order)
        count = 0
        rows = max(1, _CHUNK // len(ai))
        for lo in range(0, len(p1), rows):
            prods = g.mul_arrays(p1[lo : lo + rows][:, None], p2[None, :])
            count += int(weights[prods.ravel()].sum())
        used = ENGINE_CAYLEY
    else:
        raise EngineUnsupported(f"count_power_equation supports brute/cayley, not {engine!r}")
    diag = int(np.count_nonzero(g.mul_arrays(p1, p2) == p3))
    return CountReport("power", int(count), Fraction(a.card * a.card), diag, used, extras)


def _torsion_free(g: FiniteGroup, indices: np.ndarray, exponents: Tuple[int, ...]) -> bool:
    for i in indices.tolist():
        if i == 0:
            continue
        order = element_order(g, i)
        if any(n % order == 0 for n in exponents):
            return False
    return True


# ---------------------------------------------------------------------------
# fiber-function equations f1(a1) * f2(a2) = f3(a3)


@dataclass(frozen=True)
class FiberFunction:
    """A map from a subset A into the group with bounded fibers.

    ``mapping[t]`` is the image of the t-th element of ``domain`` in index
    order; every value may appear at most ``fiber_bound`` times.
    """

    domain: GroupSubset
    mapping: Tuple[int, ...]
    fiber_bound: int

    @classmethod
    def from_callable(cls, domain: GroupSubset, fn, fiber_bound: Optional[int] = None) -> "FiberFunction":
        values = tuple(int(fn(x)) for x in domain.to_index_list())
        return cls.from_values(domain, values, fiber_bound)

    @classmethod
    def from_values(
        cls, domain: GroupSubset, values: Sequence[int], fiber_bound: Optional[int] = None
    ) -> "FiberFunction":
        values = tuple(int(v) for v in values)
        if len(values) != domain.card:
            raise DomainMismatch("one value per domain element required")
        n = domain.group.order
        if values and (min(values) < 0 or max(values) >= n):
            raise DomainMismatch("fiber function value out of range")
        fibers: Dict[int, int] = {}
        for v in values:
            fibers[v] = fibers.get(v, 0) + 1
        actual = max(fibers.values(), default=0)
        if fiber_bound is None:
            fiber_bound = actual
        elif actual > fiber_bound:
            raise DomainMismatch(f"a fiber has size {actual} > bound {fiber_bound}")
        return cls(domain, values, fiber_bound)


def count_fiber_equation(
    f1: FiberFunction,
    f2: FiberFunction,
    f3: FiberFunction,
    *,
    min_identity_fraction: Union[Fraction, float] = 1,
) -> CountReport:
    """Triples (a1, a2, a3) in A^3 with f1(a1)*f2(a2) = f3(a3); normalizer |A|^2.

    The pointwise identity f1(a)*f2(a) = f3(a) must hold on at least
    ``min_identity_fraction`` of A; the count of elements where it holds is
    the degenerate (diagonal) count.
    """
    a = f1.domain
    if not (a == f2.domain and a == f3.domain):
        raise DomainMismatch("fiber functions must share one domain set")
    g = a.group
    if a.card == 0:
        return CountReport("fiber", 0, Fraction(0), 0, ENGINE_CAYLEY)

    v1 = np.asarray(f1.mapping, dtype=np.int64)
    v2 = np.asarray(f2.mapping, dtype=np.int64)
    v3 = np.asarray(f3.mapping, dtype=np.int64)
    diag = int(np.count_nonzero(g.mul_arrays(v1, v2) == v3))
    needed = Fraction(min_identity_fraction) * a.card
    if Fraction(diag) < needed:
        raise PointwiseIdentityFailed(
            f"identity holds on {diag}/{a.card} elements, below the required fraction"
        )

    weights = np.bincount(v3, minlength=g.order)
    count = 0
    rows = max(1, _CHUNK // len(v2))
    for lo in range(0, len(v1), rows):
        prods = g.mul_arrays(v1[lo : lo + rows][:, None], v2[None, :])
        count += int(weights[prods.ravel()].sum())
    extras = {"fiber_bounds": [f1.fiber_bound, f2.fiber_bound, f3.fiber_bound]}
    return CountReport("fiber", count, Fraction(a.card * a.card), diag, ENGINE_CAYLEY, extras)


# ---------------------------------------------------------------------------
# mixing tuples: every increasing-order subproduct lands in its target set


def subset_key(f: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted(int(i) for i in f))


def all_nonempty_subsets(n: int) -> List[Tuple[int, ...]]:
    """Nonempty subsets of {1..n} ordered by their binary encoding."""
    out = []
    for mask in range(1, 1 << n):
        out.append(tuple(i + 1 for i in range(n) if (mask >> i) & 1))
    return out


def count_mixing_tuples(
    n: int,
    sets: Mapping[Union[Tuple[int, ...], frozenset], GroupSubset],
    engine: str = "auto",
    budget: int = MIXING_BUDGET,
) -> CountReport:
    """|{(a_1..a_n) : a_F in A_F for every nonempty F}| for n in 2..4.

    a_F is the product of the a_i with i in F, taken in increasing index
    order.  Normalizer: prod_F |A_F| / |G|^(2^n - 1 - n).  The degenerate
    count is 1 when the all-identity tuple qualifies, else 0.
    """
    if not 2 <= n <= 4:
        raise BudgetExceeded(f"mixing tuples supported for n in 2..4, got {n}")
    fams = {subset_key(k): v for k, v in sets.items()}
    want = all_nonempty_subsets(n)
    missing = [f for f in want if f not in fams]
    if missing:
        raise GroupMismatch(f"missing target sets for subsets {missing}")
    g = _require_same_group(*[fams[f] for f in want])
    if g.order**n > budget:
        raise BudgetExceeded(f"|G|^{n} = {g.order ** n} exceeds budget {budget}")

    if engine in ("brute", ENGINE_BRUTE):
        count = _mixing_brute(g, n, fams)
        used = ENGINE_BRUTE
    elif engine in ("auto", "cayley", ENGINE_CAYLEY):
        count = _mixing_prefix(g, n, fams)
        used = ENGINE_CAYLEY
    else:
        raise EngineUnsupported(f"count_mixing_tuples supports brute/cayley, not {engine!r}")

    degenerate = int(all(fams[f].contains(0) for f in want))
    prod_sizes = 1
    for f in want:
        prod_sizes *= fams[f].card
    normalizer = Fraction(prod_sizes, g.order ** (2**n - 1 - n))
    extras = {"n": n}
    return CountReport(f"mixing:{n}", count, normalizer, degenerate, used, extras)


def _mixing_brute(g: FiniteGroup, n: int, fams: Dict[Tuple[int, ...], GroupSubset]) -> int:
    import itertools

    masks = {f: fams[f].mask for f in fams}
    mul = g.mul
    count = 0
    subsets = all_nonempty_subsets(n)
    for tup in itertools.product(range(g.order), repeat=n):
        ok = True
        for f in subsets:
            prod = 0
            for i in f:
                prod = mul(prod, tup[i - 1])
            if not masks[f][prod]:
                ok = False
                break
        if ok:
            count += 1
    return count


def _translated_mask(g: FiniteGroup, x: int, s: GroupSubset) -> np.ndarray:
    """{y : x*y in s} as a boolean mask."""
    table = g.table
    if table is not None:
        return s.mask[table[x]]
    return s.mask[g.mul_arrays(np.full(g.order, x, dtype=np.int64), np.arange(g.order, dtype=np.int64))]


def _mixing_prefix(g: FiniteGroup, n: int, fams: Dict[Tuple[int, ...], GroupSubset]) -> int:
    """Prefix recursion: enumerate a_1..a_{n-1} under their constraints, then
    intersect translated masks to count admissible a_n in bulk."""
    count = 0

    def last_mask(prefix: List[int], prods: Dict[Tuple[int, ...], int]) -> np.ndarray:
        mask = fams[(n,)].mask.copy()
        for f, value in prods.items():
            mask &= _translated_mask(g, value, fams[f + (n,)])
        return mask

    def recurse(prefix: List[int], prods: Dict[Tuple[int, ...], int]) -> None:
        nonlocal count
        depth = len(prefix) + 1
        if depth == n:
            count += int(last_mask(prefix, prods).sum())
            return
        for a in fams[(depth,)].indices.tolist():
            new_prods = dict(prods)
            ok = True
            for f, value in prods.items():
                if f[-1] < depth:
                    extended = f + (depth,)
                    v = g.mul(value, a)
                    if not fams[extended].mask[v]:
                        ok = False
                        break
                    new_prods[extended] = v
            if not ok:
                continue
            new_prods[(depth,)] = a
            recurse(prefix + [a], new_prods)

    recurse([], {})
    return count


# ---------------------------------------------------------------------------
# the |X x Y| = sum over x in XY^-1 of |X meet xY| identity


@dataclass(frozen=True)
class ConvolutionIdentityResult:
    lhs: int
    rhs: int
    translate_count: int

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ok": self.ok,
            "translate_count": self.translate_count,
        }


def convolution_identity_check(x: GroupSubset, y: GroupSubset) -> ConvolutionIdentityResult:
    """Verify |X||Y| = sum over t in XY^-1 of |X meet tY| exactly."""
    from .sets import inverse_set, product_set

    g = _require_same_group(x, y)
    trans = product_set(x, inverse_set(y))
    rhs = 0
    for t in trans.indices.tolist():
        rhs += int((x.mask & _translated_left_mask(g, t, y)).sum())
    return ConvolutionIdentityResult(x.card * y.card, rhs, trans.card)


def _translated_left_mask(g: FiniteGroup, t: int, s: GroupSubset) -> np.ndarray:
    """Mask of the left translate t*s."""
    out = np.zeros(g.order, dtype=bool)
    out[g.mul_arrays(np.full(s.card, t, dtype=np.int64), s.indices)] = True
    return out
