"""Finite groups with a dense 0..n-1 element index space.

Index 0 is always the identity.  Every group exposes scalar ``mul``/``inv``
and a vectorized ``mul_arrays`` used by the counting kernels; groups of
order <= TABLE_CAP additionally carry a full Cayley table.  Construction is
deterministic: the same specification always yields the same indexing.

Spec grammar accepted by :func:`parse_group_spec`:

    Z/n                       cyclic group of order n
    Z/a x Z/b x ...           direct product of cyclic groups
    PSL2(q)                   q a prime power
    perm:(1 2 3);(1 2)        permutation group from cycle generators
    table:PATH                CSV Cayley table, n rows of n 0-based indices
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import MalformedSpec, NotAGroup, OrderCapExceeded
from .gf import PrimePowerField, factor_prime_power
from .rng import SplitMix64, derive

TABLE_CAP = 4096
DEFAULT_ORDER_CAP = 200_000
_ASSOC_FULL_CAP = 512
_ASSOC_SAMPLE_CAP = 50_000_000


# ---------------------------------------------------------------------------
# specifications


@dataclass(frozen=True)
class Cyclic:
    n: int

    def __str__(self) -> str:
        return f"Z/{self.n}"


@dataclass(frozen=True)
class DirectProduct:
    factors: Tuple["GroupSpec", ...]

    def __str__(self) -> str:
        return " x ".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class PSL2:
    q: int

    def __str__(self) -> str:
        return f"PSL2({self.q})"


@dataclass(frozen=True)
class Permutation:
    generators: Tuple[Tuple[Tuple[int, ...], ...], ...]
    """Each generator is a tuple of cycles; cycle points are 1-based."""

    def __str__(self) -> str:
        gens = []
        for cycles in self.generators:
            gens.append("".join("(" + " ".join(str(p) for p in c) + ")" for c in cycles))
        return "perm:" + ";".join(gens)


@dataclass(frozen=True)
class TableSource:
    path: str

    def __str__(self) -> str:
        return f"table:{self.path}"


GroupSpec = Union[Cyclic, DirectProduct, PSL2, Permutation, TableSource]

_CYCLIC_RE = re.compile(r"^Z/(\d+)$")
_PSL2_RE = re.compile(r"^PSL2\((\d+)\)$")
_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_group_spec(text: str) -> GroupSpec:
    """Parse the group spec grammar; raises MalformedSpec."""
    s = text.strip()
    if not s:
        raise MalformedSpec("empty group spec")
    if s.startswith("table:"):
        path = s[len("table:"):].strip()
        if not path:
            raise MalformedSpec("table: spec needs a path")
        return TableSource(path)
    if s.startswith("perm:"):
        return _parse_perm_spec(s[len("perm:"):])
    m = _PSL2_RE.match(s)
    if m:
        return PSL2(int(m.group(1)))
    parts = [p.strip() for p in re.split(r"\s+x\s+|(?<=\d)x(?=Z)", s)]
    factors = []
    for part in parts:
        m = _CYCLIC_RE.match(part)
        if not m:
            raise MalformedSpec(f"unrecognized group spec {text!r}")
        n = int(m.group(1))
        if n < 1:
            raise MalformedSpec(f"cyclic order must be >= 1, got {n}")
        factors.append(Cyclic(n))
    if len(factors) == 1:
        return factors[0]
    return DirectProduct(tuple(factors))


def _parse_perm_spec(body: str) -> Permutation:
    gens = []
    for chunk in body.split(";"):
        chunk = chunk.strip()
        if not chunk:
            raise MalformedSpec("empty permutation generator")
        if _CYCLE_RE.sub("", chunk).strip():
            raise MalformedSpec(f"unparsed text in permutation generator {chunk!r}")
        cycles = []
        for m in _CYCLE_RE.finditer(chunk):
            pts = [p for p in re.split(r"[,\s]+", m.group(1).strip()) if p]
            try:
                cycle = tuple(int(p) for p in pts)
            except ValueError:
                raise MalformedSpec(f"bad cycle {m.group(0)!r}") from None
            if any(p < 1 for p in cycle):
                raise MalformedSpec("cycle points are 1-based positive integers")
            if len(set(cycle)) != len(cycle):
                raise MalformedSpec(f"repeated point in cycle {m.group(0)!r}")
            if cycle:
                cycles.append(cycle)
        if not cycles:
            raise MalformedSpec(f"generator {chunk!r} has no cycles")
        gens.append(tuple(cycles))
    return Permutation(tuple(gens))


# ---------------------------------------------------------------------------
# groups


class FiniteGroup:
    """Base class; concrete groups fill in mul/inv and metadata."""

    order: int
    spec_text: str
    inverse_table: np.ndarray
    is_abelian: bool
    cyclic_moduli: Optional[Tuple[int, ...]] = None

    def __init__(self, order: int, spec_text: str) -> None:
        self.order = order
        self.spec_text = spec_text
        self._table: Optional[np.ndarray] = None

    # -- scalar ops -------------------------------------------------------
    def mul(self, i: int, j: int) -> int:
        raise NotImplementedError

    def inv(self, i: int) -> int:
        return int(self.inverse_table[i])

    def pow(self, i: int, m: int) -> int:
        """i**m for m >= 0 by binary exponentiation."""
        acc = 0
        base = i
        while m:
            if m & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            m >>= 1
        return acc

    def element_label(self, i: int) -> str:
        return str(i)

    def elements(self) -> range:
        return range(self.order)

    # -- vector ops -------------------------------------------------------
    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of index arrays (numpy broadcasting rules)."""
        raise NotImplementedError

    def pow_arrays(self, idx: np.ndarray, m: int) -> np.ndarray:
        acc = np.zeros(np.broadcast(idx, idx).shape, dtype=np.int64)
        base = np.array(idx, dtype=np.int64)
        while m:
            if m & 1:
                acc = self.mul_arrays(acc, base)
            m >>= 1
            if m:
                base = self.mul_arrays(base, base)
        return acc

    @property
    def table(self) -> Optional[np.ndarray]:
        """Full Cayley table for orders <= TABLE_CAP, else None."""
        if self._table is None and self.order <= TABLE_CAP:
            n = self.order
            rows = np.arange(n, dtype=np.int64)
            self._table = np.empty((n, n), dtype=np.int32)
            chunk = max(1, (1 << 22) // n)
            for lo in range(0, n, chunk):
                hi = min(n, lo + chunk)
                self._table[lo:hi] = self.mul_arrays(rows[lo:hi, None], rows[None, :])
        return self._table

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteGroup)
            and self.order == other.order
            and self.spec_text == other.spec_text
        )

    def __hash__(self) -> int:
        return hash((self.order, self.spec_text))

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.spec_text} order={self.order}>"


def same_group(a: FiniteGroup, b: FiniteGroup) -> bool:
    return a is b or a == b


class CyclicProductGroup(FiniteGroup):
    """Z/n1 x ... x Z/nk in mixed-radix index encoding (last factor fastest)."""

    def __init__(self, moduli: Sequence[int], spec_text: Optional[str] = None) -> None:
        moduli = tuple(int(m) for m in moduli)
        if not moduli or any(m < 1 for m in moduli):
            raise MalformedSpec(f"bad cyclic moduli {moduli}")
        order = 1
        for m in moduli:
            order *= m
        text = spec_text or " x ".join(f"Z/{m}" for m in moduli)
        super().__init__(order, text)
        self.moduli = moduli
        self.cyclic_moduli = moduli
        self.is_abelian = True
        strides = []
        s = 1
        for m in reversed(moduli):
            strides.append(s)
            s *= m
        self._strides = tuple(reversed(strides))
        idx = np.arange(order, dtype=np.int64)
        self.inverse_table = self._encode([(-d) % m for d, m in zip(self._decode(idx), moduli)]).astype(np.int32)

    def _decode(self, idx: np.ndarray) -> List[np.ndarray]:
        out = []
        rest = np.asarray(idx, dtype=np.int64)
        for m, s in zip(self.moduli, self._strides):
            out.append((rest // s) % m)
        return out

    def _encode(self, digits: Sequence[np.ndarray]) -> np.ndarray:
        acc: np.ndarray = np.asarray(0, dtype=np.int64)
        for d, s in zip(digits, self._strides):
            acc = acc + np.asarray(d, dtype=np.int64) * s
        return acc

    def mul(self, i: int, j: int) -> int:
        out = 0
        for m, s in zip(self.moduli, self._strides):
            out += (((i // s) % m + (j // s) % m) % m) * s
        return out

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        da = self._decode(np.asarray(a))
        db = self._decode(np.asarray(b))
        return self._encode([(x + y) % m for x, y, m in zip(da, db, self.moduli)])

    def element_label(self, i: int) -> str:
        if len(self.moduli) == 1:
            return str(i)
        return "(" + ",".join(str(int(d)) for d in self._decode(np.asarray([i]))) + ")"


class TableGroup(FiniteGroup):
    """Group given by an explicit validated Cayley table (identity at 0)."""

    def __init__(
        self,
        table: np.ndarray,
        spec_text: str,
        labels: Optional[Sequence[str]] = None,
        cyclic_moduli: Optional[Tuple[int, ...]] = None,
    ) -> None:
        n = len(table)
        super().__init__(n, spec_text)
        self._table = np.asarray(table, dtype=np.int32)
        self._labels = list(labels) if labels is not None else None
        self.cyclic_moduli = cyclic_moduli
        inv = np.empty(n, dtype=np.int32)
        for i in range(n):
            hits = np.nonzero(self._table[i] == 0)[0]
            if len(hits) != 1:
                raise NotAGroup(f"element {i} has {len(hits)} right inverses")
            inv[i] = hits[0]
        self.inverse_table = inv
        self.is_abelian = bool(np.array_equal(self._table, self._table.T))

    def mul(self, i: int, j: int) -> int:
        return int(self._table[i, j])

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._table[np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)].astype(np.int64)

    def element_label(self, i: int) -> str:
        if self._labels is not None:
            return self._labels[i]
        return str(i)


class _KeyedGroup(FiniteGroup):
    """Group whose elements carry sortable int64 keys; index 0 = identity,
    remaining indices sorted by key.  Subclasses implement key arithmetic."""

    def _init_keys(self, keys: np.ndarray, identity_key: int) -> None:
        keys = np.asarray(keys, dtype=np.int64)
        rest = np.sort(keys[keys != identity_key])
        self.keys = np.concatenate(([identity_key], rest))
        order = np.argsort(self.keys, kind="stable")
        self._sorted_keys = self.keys[order]
        self._sorted_to_index = order.astype(np.int64)

    def _lookup(self, keys: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        if np.any(self._sorted_keys[pos] != keys):
            raise NotAGroup("product fell outside the element set")
        return self._sorted_to_index[pos]


class PSL2Group(_KeyedGroup):
    """PSL2(q): unimodular 2x2 matrices over GF(q) modulo +-identity.

    Matrices are canonicalized to the lexicographically smaller of M and -M
    on the flattened entry tuple (a, b, c, d).
    """

    def __init__(self, q: int) -> None:
        field = PrimePowerField(q)
        p = field.p
        order = q * (q * q - 1) // gcd(2, q - 1)
        super().__init__(order, f"PSL2({q})")
        self.q = q
        self.field = field
        self.is_abelian = order <= 2

        f_mul = field.mul_table
        f_neg = field.neg_table
        one = 1

        # enumerate SL2(q) by scanning (a, b, c, d) with det == 1, chunked on a
        mats = []
        bcd = np.arange(q**3, dtype=np.int64)
        b_all, c_all, d_all = (bcd // (q * q)) % q, (bcd // q) % q, bcd % q
        for a in range(q):
            det = field.add_table[f_mul[a, d_all], f_neg[f_mul[b_all, c_all]]]
            keep = det == one
            if np.any(keep):
                mats.append(
                    np.stack(
                        [np.full(int(keep.sum()), a, dtype=np.int64), b_all[keep], c_all[keep], d_all[keep]],
                        axis=1,
                    )
                )
        sl2 = np.concatenate(mats, axis=0)
        if len(sl2) != q * (q * q - 1):
            raise NotAGroup(f"SL2({q}) enumeration found {len(sl2)} matrices")

        keys = self._encode(sl2[:, 0], sl2[:, 1], sl2[:, 2], sl2[:, 3])
        if p != 2:
            neg_keys = self._encode(
                f_neg[sl2[:, 0]], f_neg[sl2[:, 1]], f_neg[sl2[:, 2]], f_neg[sl2[:, 3]]
            )
            keys = np.minimum(keys, neg_keys)
        keys = np.unique(keys)
        if len(keys) != order:
            raise NotAGroup(f"PSL2({q}) canonicalization found {len(keys)} classes")

        identity_key = int(self._encode(np.array(one), np.array(0), np.array(0), np.array(one)))
        self._init_keys(keys, identity_key)

        a, b, c, d = self._decode(self.keys)
        self._mats = (a, b, c, d)
        # inverse of unimodular [[a,b],[c,d]] is [[d,-b],[-c,a]]
        self.inverse_table = self._canonical_lookup(d, f_neg[b], f_neg[c], a).astype(np.int32)

    def _encode(self, a, b, c, d) -> np.ndarray:
        q = self.q
        return ((np.asarray(a, dtype=np.int64) * q + b) * q + c) * q + d

    def _decode(self, keys: np.ndarray):
        q = self.q
        d = keys % q
        rest = keys // q
        c = rest % q
        rest //= q
        b = rest % q
        a = rest // q
        return a, b, c, d

    def _canonical_lookup(self, a, b, c, d) -> np.ndarray:
        keys = self._encode(a, b, c, d)
        if self.field.p != 2:
            neg = self.field.neg_table
            keys = np.minimum(keys, self._encode(neg[a], neg[b], neg[c], neg[d]))
        return self._lookup(keys)

    def mul_arrays(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        x, y = np.broadcast_arrays(x, y)
        fa, fb, fc, fd = self._mats
        fm, fadd = self.field.mul_table, self.field.add_table
        a1, b1, c1, d1 = fa[x], fb[x], fc[x], fd[x]
        a2, b2, c2, d2 = fa[y], fb[y], fc[y], fd[y]
        ra = fadd[fm[a1, a2], fm[b1, c2]]
        rb = fadd[fm[a1, b2], fm[b1, d2]]
        rc = fadd[fm[c1, a2], fm[d1, c2]]
        rd = fadd[fm[c1, b2], fm[d1, d2]]
        return self._canonical_lookup(ra, rb, rc, rd)

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        return int(self.mul_arrays(np.array(i), np.array(j)))

    def element_label(self, i: int) -> str:
        a, b, c, d = (int(v[i]) for v in self._mats)
        return f"[[{a},{b}],[{c},{d}]]"


class PermutationGroup(_KeyedGroup):
    """Closure of permutation generators under composition.

    Composition convention: (f*g)(x) = f(g(x)).  Elements are found by
    breadth-first multiplication from the identity, then indexed by key.
    """

    def __init__(self, generators: Sequence[Tuple[Tuple[int, ...], ...]], spec_text: str, order_cap: int) -> None:
        if not generators:
            raise MalformedSpec("permutation group needs at least one generator")
        degree = max(max(max(c) for c in cycles) for cycles in generators)
        gen_perms = [self._perm_from_cycles(cycles, degree) for cycles in generators]

        ident = tuple(range(degree))
        seen: Dict[Tuple[int, ...], int] = {ident: 0}
        elems: List[Tuple[int, ...]] = [ident]
        frontier = [ident]
        while frontier:
            nxt = []
            for perm in frontier:
                for g in gen_perms:
                    prod = tuple(perm[g[x]] for x in range(degree))
                    if prod not in seen:
                        if len(elems) >= order_cap:
                            raise OrderCapExceeded(
                                f"permutation closure exceeded cap {order_cap}"
                            )
                        seen[prod] = len(elems)
                        elems.append(prod)
                        nxt.append(prod)
            frontier = nxt

        order = len(elems)
        super().__init__(order, spec_text)
        self.degree = degree
        if degree**degree >= 2**62:
            raise OrderCapExceeded(f"permutation degree {degree} too large to index")

        perm_array = np.array(elems, dtype=np.int64)
        keys = self._keys_of(perm_array)
        self._init_keys(keys, int(self._keys_of(np.array([ident], dtype=np.int64))[0]))
        # rebuild images in index order (identity first, then key-sorted)
        by_key = {int(k): e for k, e in zip(keys, elems)}
        self.images = np.array([by_key[int(k)] for k in self.keys], dtype=np.int64)

        inv_images = np.argsort(self.images, axis=1)
        self.inverse_table = self._lookup(self._keys_of(inv_images)).astype(np.int32)
        self.is_abelian = self._check_abelian(gen_perms)

    @staticmethod
    def _perm_from_cycles(cycles: Tuple[Tuple[int, ...], ...], degree: int) -> Tuple[int, ...]:
        images = list(range(degree))
        for cycle in cycles:
            for i, pt in enumerate(cycle):
                images[pt - 1] = cycle[(i + 1) % len(cycle)] - 1
        return tuple(images)

    def _keys_of(self, perms: np.ndarray) -> np.ndarray:
        keys = np.zeros(len(perms), dtype=np.int64)
        for col in range(self.degree):
            keys = keys * self.degree + perms[:, col]
        return keys

    @staticmethod
    def _check_abelian(gens: List[Tuple[int, ...]]) -> bool:
        for g in gens:
            for h in gens:
                if tuple(g[h[x]] for x in range(len(g))) != tuple(h[g[x]] for x in range(len(g))):
                    return False
        return True

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        flat_a, flat_b = a.ravel(), b.ravel()
        pb = self.images[flat_b]
        composed = np.take_along_axis(self.images[flat_a], pb, axis=1)
        return self._lookup(self._keys_of(composed)).reshape(a.shape)

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        pi, pj = self.images[i], self.images[j]
        prod = pi[pj]
        key = 0
        for col in range(self.degree):
            key = key * self.degree + int(prod[col])
        return int(self._lookup(np.array([key]))[0])

    def element_label(self, i: int) -> str:
        images = self.images[i]
        covered = [False] * self.degree
        cycles = []
        for start in range(self.degree):
            if covered[start] or images[start] == start:
                covered[start] = True
                continue
            cyc = [start]
            covered[start] = True
            nxt = int(images[start])
            while nxt != start:
                cyc.append(nxt)
                covered[nxt] = True
                nxt = int(images[nxt])
            cycles.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
        return "".join(cycles) if cycles else "()"


class GeneralDirectProductGroup(FiniteGroup):
    """Direct product of arbitrary component groups (mixed-radix indices)."""

    def __init__(self, components: Sequence[FiniteGroup], spec_text: str) -> None:
        order = 1
        for g in components:
            order *= g.order
        super().__init__(order, spec_text)
        self.components = list(components)
        strides = []
        s = 1
        for g in reversed(self.components):
            strides.append(s)
            s *= g.order
        self._strides = tuple(reversed(strides))
        self.is_abelian = all(g.is_abelian for g in self.components)
        moduli: List[int] = []
        for g in self.components:
            if g.cyclic_moduli is None:
                moduli = []
                break
            moduli.extend(g.cyclic_moduli)
        self.cyclic_moduli = tuple(moduli) if moduli else None

        idx = np.arange(order, dtype=np.int64)
        parts = [
            g.inverse_table[(idx // s) % g.order].astype(np.int64)
            for g, s in zip(self.components, self._strides)
        ]
        self.inverse_table = sum(p * s for p, s in zip(parts, self._strides)).astype(np.int32)

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for g, s in zip(self.components, self._strides):
            out += g.mul_arrays((a // s) % g.order, (b // s) % g.order) * s
        return out

    def mul(self, i: int, j: int) -> int:
        out = 0
        for g, s in zip(self.components, self._strides):
            out += g.mul((i // s) % g.order, (j // s) % g.order) * s
        return out

    def element_label(self, i: int) -> str:
        parts = [
            g.element_label((i // s) % g.order) for g, s in zip(self.components, self._strides)
        ]
        return "(" + ",".join(parts) + ")"


# ---------------------------------------------------------------------------
# construction and validation


def build_group(spec: Union[GroupSpec, str], *, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Construct the group described by ``spec`` (object or grammar string)."""
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    group = _build(spec, order_cap)
    _validate_identity_and_inverses(group)
    return group


def _build(spec: GroupSpec, order_cap: int) -> FiniteGroup:
    if isinstance(spec, Cyclic):
        _check_cap(spec.n, order_cap)
        return CyclicProductGroup([spec.n])
    if isinstance(spec, DirectProduct):
        if not spec.factors:
            raise MalformedSpec("direct product needs at least one factor")
        if all(isinstance(f, Cyclic) for f in spec.factors):
            moduli = [f.n for f in spec.factors]  # type: ignore[union-attr]
            order = 1
            for m in moduli:
                order *= m
            _check_cap(order, order_cap)
            return CyclicProductGroup(moduli)
        comps = [_build(f, order_cap) for f in spec.factors]
        order = 1
        for g in comps:
            order *= g.order
        _check_cap(order, order_cap)
        return GeneralDirectProductGroup(comps, str(spec))
    if isinstance(spec, PSL2):
        p, k = factor_prime_power(spec.q)  # raises NotPrimePower
        order = spec.q * (spec.q**2 - 1) // gcd(2, spec.q - 1)
        _check_cap(order, order_cap)
        return PSL2Group(spec.q)
    if isinstance(spec, Permutation):
        return PermutationGroup(spec.generators, str(spec), order_cap)
    if isinstance(spec, TableSource):
        return _build_table_group(spec.path, order_cap)
    raise MalformedSpec(f"unknown spec {spec!r}")


def _check_cap(order: int, cap: int) -> None:
    if order > cap:
        raise OrderCapExceeded(f"group order {order} exceeds cap {cap}")
    if order < 1:
        raise MalformedSpec("group order must be positive")


def _build_table_group(path: str, order_cap: int) -> FiniteGroup:
    try:
        with open(path, newline="") as fh:
            rows = [[int(x) for x in row] for row in csv.reader(fh) if row]
    except OSError as exc:
        raise MalformedSpec(f"cannot read table file {path!r}: {exc}") from None
    except ValueError as exc:
        raise MalformedSpec(f"non-integer entry in table file {path!r}: {exc}") from None
    n = len(rows)
    _check_cap(n, order_cap)
    if any(len(r) != n for r in rows):
        raise NotAGroup(f"table must be square, got {n} rows")
    table = np.array(rows, dtype=np.int64)
    if table.min() < 0 or table.max() >= n:
        raise NotAGroup("table entries out of range")

    _require_latin_square(table)
    identity = _find_identity(table)
    if identity != 0:
        # reindex so the identity sits at 0; other elements keep their order
        perm = [identity] + [i for i in range(n) if i != identity]
        pos = np.argsort(perm)
        table = pos[table[np.ix_(perm, perm)]]
    _require_associative(table)
    return TableGroup(table.astype(np.int32), f"table:{path}")


def _require_latin_square(table: np.ndarray) -> None:
    n = len(table)
    want = np.arange(n)
    if not np.array_equal(np.sort(table, axis=1), np.broadcast_to(want, table.shape)):
        raise NotAGroup("some row is not a permutation")
    if not np.array_equal(np.sort(table, axis=0), np.broadcast_to(want[:, None], table.shape)):
        raise NotAGroup("some column is not a permutation")


def _find_identity(table: np.ndarray) -> int:
    n = len(table)
    want = np.arange(n)
    for e in range(n):
        if np.array_equal(table[e], want) and np.array_equal(table[:, e], want):
            return e
    raise NotAGroup("no two-sided identity")


def _require_associative(table: np.ndarray) -> None:
    n = len(table)
    if n <= _ASSOC_FULL_CAP:
        # full check: (i*j)*k == i*(j*k) for all triples, one row at a time
        for i in range(n):
            if not np.array_equal(table[table[i]], table[i][table]):
                raise NotAGroup(f"associativity fails in row {i}")
        return
    sample = min(10 * n * n, _ASSOC_SAMPLE_CAP)
    rng = SplitMix64(derive(0xA550C, n))
    chunk = 1 << 20
    done = 0
    while done < sample:
        m = min(chunk, sample - done)
        i = np.array([rng.randrange(n) for _ in range(m)], dtype=np.int64)
        j = np.array([rng.randrange(n) for _ in range(m)], dtype=np.int64)
        k = np.array([rng.randrange(n) for _ in range(m)], dtype=np.int64)
        if not np.array_equal(table[table[i, j], k], table[i, table[j, k]]):
            raise NotAGroup("associativity fails on sampled triples")
        done += m


def _validate_identity_and_inverses(group: FiniteGroup) -> None:
    n = group.order
    idx = np.arange(n, dtype=np.int64)
    if not np.array_equal(group.mul_arrays(np.zeros(n, dtype=np.int64), idx), idx):
        raise NotAGroup("identity fails on the left")
    if not np.array_equal(group.mul_arrays(idx, np.zeros(n, dtype=np.int64)), idx):
        raise NotAGroup("identity fails on the right")
    inv = group.inverse_table.astype(np.int64)
    if np.any(group.mul_arrays(idx, inv) != 0) or np.any(group.mul_arrays(inv, idx) != 0):
        raise NotAGroup("inverse table is wrong")


def verify_group_axioms(group: FiniteGroup, *, seed: int = 0) -> None:
    """Assert Latin-square rows/columns and associativity.

    Orders <= 512 get the full triple check; larger groups get a seeded
    sample of 10*n^2 triples (capped), plus full row/column checks when a
    Cayley table exists and sampled rows otherwise.
    """
    n = group.order
    idx = np.arange(n, dtype=np.int64)
    table = group.table
    if table is not None:
        _require_latin_square(table.astype(np.int64))
    else:
        rng = SplitMix64(derive(seed, 1))
        for _ in range(min(n, 16)):
            i = rng.randrange(n)
            if len(np.unique(group.mul_arrays(np.full(n, i, dtype=np.int64), idx))) != n:
                raise NotAGroup(f"row {i} is not a permutation")
            if len(np.unique(group.mul_arrays(idx, np.full(n, i, dtype=np.int64)))) != n:
                raise NotAGroup(f"column {i} is not a permutation")

    if n <= _ASSOC_FULL_CAP:
        if table is None:
            table = group.table
        assert table is not None
        t = table.astype(np.int64)
        for i in range(n):
            if not np.array_equal(t[t[i]], t[i][t]):
                raise NotAGroup(f"associativity fails in row {i}")
    else:
        sample = min(10 * n * n, _ASSOC_SAMPLE_CAP)
        rng = SplitMix64(derive(seed, 2))
        chunk = 1 << 19
        done = 0
        while done < sample:
            m = min(chunk, sample - done)
            i = np.array([rng.randrange(n) for _ in range(m)], dtype=np.int64)
            j = np.array([rng.randrange(n) for _ in range(m)], dtype=np.int64)
            k = np.array([rng.randrange(n) for _ in range(m)], dtype=np.int64)
            lhs = group.mul_arrays(group.mul_arrays(i, j), k)
            rhs = group.mul_arrays(i, group.mul_arrays(j, k))
            if not np.array_equal(lhs, rhs):
                raise NotAGroup("associativity fails on sampled triples")
            done += m


# ---------------------------------------------------------------------------
# conjugacy and element orders


@dataclass(frozen=True)
class ConjugacyClasses:
    """Partition of the element indices into conjugacy classes.

    Class 0 is the singleton {identity}; classes are sorted by least member.
    """

    partition: Tuple[Tuple[int, ...], ...]
    class_of: np.ndarray

    @property
    def count(self) -> int:
        return len(self.partition)

    def sizes(self) -> List[int]:
        return [len(c) for c in self.partition]

    def representatives(self) -> List[int]:
        return [c[0] for c in self.partition]


def conjugacy_classes(group: FiniteGroup) -> ConjugacyClasses:
    """Exact conjugation orbits, computed by brute force over all g."""
    n = group.order
    all_g = np.arange(n, dtype=np.int64)
    inv_g = group.inverse_table.astype(np.int64)
    class_of = np.full(n, -1, dtype=np.int64)
    partition: List[Tuple[int, ...]] = []
    for x in range(n):
        if class_of[x] >= 0:
            continue
        orbit = np.unique(group.mul_arrays(group.mul_arrays(all_g, x), inv_g))
        cid = len(partition)
        class_of[orbit] = cid
        partition.append(tuple(int(v) for v in orbit))
    return ConjugacyClasses(tuple(partition), class_of)


def element_order(group: FiniteGroup, i: int) -> int:
    """Least m >= 1 with i**m equal to the identity."""
    if not 0 <= i < group.order:
        raise MalformedSpec(f"element index {i} out of range")
    m = 1
    acc = i
    while acc != 0:
        acc = group.mul(acc, i)
        m += 1
    return m
