"""Bitset-backed subsets of a finite group and exact set arithmetic.

A :class:`GroupSubset` is a boolean membership mask over the element index
space plus cached cardinality; densities are exact fractions.  Product sets
are computed by unioning translated rows of the Cayley structure, chunked
so memory stays bounded on large groups.

Set spec grammar accepted by :func:`parse_set_spec`:

    interval:lo,len
    gap:base;step1,len1;step2,len2
    random:density,seed
    subgroup:g1,g2
    explicit:i1,i2,...
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np

from .errors import EmptySet, GroupMismatch, KindUnsupportedForGroup, MalformedSpec
from .groups import FiniteGroup, same_group
from .rng import SplitMix64

_PRODUCT_CHUNK = 1 << 20


class GroupSubset:
    """Immutable subset of a group's element indices."""

    __slots__ = ("group", "mask", "card", "_indices")

    def __init__(self, group: FiniteGroup, mask: np.ndarray) -> None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (group.order,):
            raise MalformedSpec(f"mask length {mask.shape} != group order {group.order}")
        self.group = group
        self.mask = mask
        self.mask.setflags(write=False)
        self.card = int(mask.sum())
        self._indices: Optional[np.ndarray] = None

    @classmethod
    def from_indices(cls, group: FiniteGroup, indices: Iterable[int]) -> "GroupSubset":
        mask = np.zeros(group.order, dtype=bool)
        idx = np.asarray(list(indices), dtype=np.int64)
        if len(idx):
            if idx.min() < 0 or idx.max() >= group.order:
                raise MalformedSpec("element index out of range")
            mask[idx] = True
        return cls(group, mask)

    @classmethod
    def full(cls, group: FiniteGroup) -> "GroupSubset":
        return cls(group, np.ones(group.order, dtype=bool))

    @classmethod
    def empty(cls, group: FiniteGroup) -> "GroupSubset":
        return cls(group, np.zeros(group.order, dtype=bool))

    @property
    def indices(self) -> np.ndarray:
        if self._indices is None:
            self._indices = np.nonzero(self.mask)[0].astype(np.int64)
        return self._indices

    @property
    def density(self) -> Fraction:
        return Fraction(self.card, self.group.order)

    def contains(self, i: int) -> bool:
        return bool(self.mask[i])

    def to_index_list(self) -> List[int]:
        return [int(i) for i in self.indices]

    def to_json(self) -> str:
        return json.dumps(self.to_index_list())

    def __len__(self) -> int:
        return self.card

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GroupSubset)
            and same_group(self.group, other.group)
            and np.array_equal(self.mask, other.mask)
        )

    def __hash__(self) -> int:
        return hash((self.group, self.mask.tobytes()))

    def __repr__(self) -> str:
        shown = self.to_index_list()
        body = str(shown) if self.card <= 12 else f"[{shown[0]}..]({self.card} elems)"
        return f"<GroupSubset {body} of {self.group.spec_text}>"


def subset_from_json(group: FiniteGroup, text: str) -> GroupSubset:
    return GroupSubset.from_indices(group, json.loads(text))


def _require_same_group(*sets: GroupSubset) -> FiniteGroup:
    g = sets[0].group
    for s in sets[1:]:
        if not same_group(g, s.group):
            raise GroupMismatch(f"sets over {g.spec_text} and {s.group.spec_text}")
    return g


# ---------------------------------------------------------------------------
# exact set arithmetic


def product_set(a: GroupSubset, b: GroupSubset) -> GroupSubset:
    """Exact productset {x*y : x in a, y in b}."""
    g = _require_same_group(a, b)
    out = np.zeros(g.order, dtype=bool)
    ai, bi = a.indices, b.indices
    if len(ai) == 0 or len(bi) == 0:
        return GroupSubset(g, out)
    if g.cyclic_moduli is not None and len(ai) * len(bi) > 64 * g.order:
        # dense sets in a large abelian group: take the support of the exact
        # integer convolution instead of enumerating all pairs
        from .counting import cyclic_convolution

        conv = cyclic_convolution(g, a.mask.astype(np.int64), b.mask.astype(np.int64))
        return GroupSubset(g, conv > 0)
    table = g.table
    rows = max(1, _PRODUCT_CHUNK // len(bi))
    for lo in range(0, len(ai), rows):
        chunk = ai[lo : lo + rows]
        if table is not None:
            prods = table[np.ix_(chunk, bi)]
        else:
            prods = g.mul_arrays(chunk[:, None], bi[None, :])
        out[prods.ravel()] = True
    return GroupSubset(g, out)


def inverse_set(a: GroupSubset) -> GroupSubset:
    out = np.zeros(a.group.order, dtype=bool)
    out[a.group.inverse_table[a.indices]] = True
    return GroupSubset(a.group, out)


def symmetrize(a: GroupSubset) -> GroupSubset:
    """a, its inverses, and the identity; size is at most 2|a|+1."""
    out = a.mask.copy()
    out[a.group.inverse_table[a.indices]] = True
    out[0] = True
    return GroupSubset(a.group, out)


def iterated_product(a: GroupSubset, m: int) -> GroupSubset:
    """m-fold productset of symmetrize(a); m=1 gives symmetrize(a) itself."""
    if m < 1:
        raise MalformedSpec(f"iteration count must be >= 1, got {m}")
    base = symmetrize(a)
    acc = base
    for _ in range(m - 1):
        acc = product_set(acc, base)
    return acc


def doubling_constant(a: GroupSubset) -> Fraction:
    """|a*a| / |a| as an exact fraction."""
    if a.card == 0:
        raise EmptySet("doubling constant of the empty set")
    return Fraction(product_set(a, a).card, a.card)


def tripling_constant(a: GroupSubset, variant: str = "aaa") -> Fraction:
    """|a*a*a|/|a| ("aaa") or |a*a^-1*a|/|a| ("aia")."""
    if a.card == 0:
        raise EmptySet("tripling constant of the empty set")
    if variant == "aaa":
        triple = product_set(product_set(a, a), a)
    elif variant == "aia":
        triple = product_set(product_set(a, inverse_set(a)), a)
    else:
        raise MalformedSpec(f"unknown tripling variant {variant!r}")
    return Fraction(triple.card, a.card)


def growth_profile(a: GroupSubset, m_max: int) -> List[Fraction]:
    """Sizes of the iterated symmetrized products, normalized by |a|."""
    if a.card == 0:
        raise EmptySet("growth profile of the empty set")
    if m_max < 1:
        raise MalformedSpec(f"m_max must be >= 1, got {m_max}")
    base = symmetrize(a)
    acc = base
    profile = [Fraction(acc.card, a.card)]
    for _ in range(m_max - 1):
        acc = product_set(acc, base)
        profile.append(Fraction(acc.card, a.card))
    return profile


def is_product_free(a: GroupSubset) -> bool:
    """True iff no x, y in a have x*y in a."""
    g = a.group
    ai = a.indices
    if len(ai) == 0:
        return True
    table = g.table
    rows = max(1, _PRODUCT_CHUNK // len(ai))
    for lo in range(0, len(ai), rows):
        chunk = ai[lo : lo + rows]
        if table is not None:
            prods = table[np.ix_(chunk, ai)]
        else:
            prods = g.mul_arrays(chunk[:, None], ai[None, :])
        if a.mask[prods.ravel()].any():
            return False
    return True


# ---------------------------------------------------------------------------
# structured set constructors


@dataclass(frozen=True)
class Interval:
    lo: int
    length: int

    def __str__(self) -> str:
        return f"interval:{self.lo},{self.length}"


@dataclass(frozen=True)
class GapSet:
    """Generalized arithmetic progression {base + sum k_i * step_i}."""

    base: int
    steps: Tuple[int, ...]
    lens: Tuple[int, ...]

    def __str__(self) -> str:
        dims = ";".join(f"{s},{l}" for s, l in zip(self.steps, self.lens))
        return f"gap:{self.base};{dims}"


@dataclass(frozen=True)
class RandomSet:
    density: float
    seed: int

    def __str__(self) -> str:
        return f"random:{self.density},{self.seed}"


@dataclass(frozen=True)
class SubgroupSet:
    generators: Tuple[int, ...]

    def __str__(self) -> str:
        return "subgroup:" + ",".join(str(g) for g in self.generators)


@dataclass(frozen=True)
class ExplicitSet:
    indices: Tuple[int, ...]

    def __str__(self) -> str:
        return "explicit:" + ",".join(str(i) for i in self.indices)


SetSpec = Union[Interval, GapSet, RandomSet, SubgroupSet, ExplicitSet]


def parse_set_spec(text: str) -> SetSpec:
    s = text.strip()
    kind, _, body = s.partition(":")
    try:
        if kind == "interval":
            lo, length = (int(x) for x in body.split(","))
            return Interval(lo, length)
        if kind == "gap":
            parts = body.split(";")
            base = int(parts[0])
            steps, lens = [], []
            for dim in parts[1:]:
                step, ln = (int(x) for x in dim.split(","))
                steps.append(step)
                lens.append(ln)
            if not steps:
                raise MalformedSpec(f"gap spec needs at least one dimension: {text!r}")
            return GapSet(base, tuple(steps), tuple(lens))
        if kind == "random":
            density, seed = body.split(",")
            return RandomSet(float(density), int(seed))
        if kind == "subgroup":
            gens = tuple(int(x) for x in body.split(",")) if body else ()
            return SubgroupSet(gens)
        if kind == "explicit":
            idx = tuple(int(x) for x in body.split(",")) if body else ()
            return ExplicitSet(idx)
    except (ValueError, MalformedSpec) as exc:
        if isinstance(exc, MalformedSpec):
            raise
        raise MalformedSpec(f"bad set spec {text!r}") from None
    raise MalformedSpec(f"unknown set kind in {text!r}")


def make_set(group: FiniteGroup, spec: Union[SetSpec, str]) -> GroupSubset:
    """Build a deterministic subset from a set spec (object or string)."""
    if isinstance(spec, str):
        spec = parse_set_spec(spec)
    n = group.order
    if isinstance(spec, Interval):
        if group.cyclic_moduli is None:
            raise KindUnsupportedForGroup("interval sets need a cyclic product group")
        if not 0 <= spec.length <= n:
            raise MalformedSpec(f"interval length {spec.length} out of range")
        idx = (spec.lo + np.arange(spec.length, dtype=np.int64)) % n
        return GroupSubset.from_indices(group, idx)
    if isinstance(spec, GapSet):
        if group.cyclic_moduli is None:
            raise KindUnsupportedForGroup("gap sets need a cyclic product group")
        if len(spec.steps) != len(spec.lens) or any(l < 1 for l in spec.lens):
            raise MalformedSpec(f"bad gap dimensions {spec}")
        cur = np.array([spec.base % n], dtype=np.int64)
        for step, ln in zip(spec.steps, spec.lens):
            powers = np.array([group.pow(step % n, k) for k in range(ln)], dtype=np.int64)
            cur = np.unique(group.mul_arrays(cur[:, None], powers[None, :]).ravel())
        return GroupSubset.from_indices(group, cur)
    if isinstance(spec, RandomSet):
        if not 0.0 <= spec.density <= 1.0:
            raise MalformedSpec(f"density {spec.density} outside [0,1]")
        stream = SplitMix64(spec.seed)
        mask = np.fromiter(
            (stream.uniform() < spec.density for _ in range(n)), dtype=bool, count=n
        )
        return GroupSubset(group, mask)
    if isinstance(spec, SubgroupSet):
        for g in spec.generators:
            if not 0 <= g < n:
                raise MalformedSpec(f"generator index {g} out of range")
        members = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in spec.generators:
                    y = group.mul(x, g)
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return GroupSubset.from_indices(group, sorted(members))
    if isinstance(spec, ExplicitSet):
        return GroupSubset.from_indices(group, spec.indices)
    raise MalformedSpec(f"unknown set spec {spec!r}")
