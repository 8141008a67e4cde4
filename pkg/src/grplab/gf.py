"""Small finite fields GF(p^k) as dense lookup tables.

Field elements are indexed 0..q-1; index ``e`` encodes the polynomial
``sum_i c_i x^i`` with base-p digits ``c_i`` of ``e`` (c_0 least
significant).  For k >= 2 multiplication goes through log/antilog tables
over the lexicographically least monic irreducible modulus, so the same
field size always yields the same arithmetic.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np

from .errors import NotPrimePower


def factor_prime_power(q: int) -> Tuple[int, int]:
    """Return (p, k) with q = p**k, or raise NotPrimePower."""
    if q < 2:
        raise NotPrimePower(f"field size must be >= 2, got {q}")
    for p in range(2, q + 1):
        if p * p > q and p != q:
            break
        if q % p:
            continue
        k = 0
        m = q
        while m % p == 0:
            m //= p
            k += 1
        if m == 1:
            return p, k
        raise NotPrimePower(f"{q} is not a prime power")
    return q, 1


def _poly_trim(c: Tuple[int, ...]) -> Tuple[int, ...]:
    n = len(c)
    while n > 0 and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _poly_mul_mod(a: Tuple[int, ...], b: Tuple[int, ...], modulus: Tuple[int, ...], p: int) -> Tuple[int, ...]:
    """(a*b) mod modulus over F_p; modulus is monic of degree k."""
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1 if a and b else 0)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, k - 1, -1):
        coef = prod[d]
        if coef:
            prod[d] = 0
            for j in range(k):
                prod[d - k + j] = (prod[d - k + j] - coef * modulus[j]) % p
    return _poly_trim(tuple(prod))


def _poly_divides(d: Tuple[int, ...], f: Tuple[int, ...], p: int) -> bool:
    """Whether monic d divides f over F_p."""
    rem = list(f)
    deg_d = len(d) - 1
    while len(_poly_trim(tuple(rem))) - 1 >= deg_d:
        rem = list(_poly_trim(tuple(rem)))
        shift = len(rem) - 1 - deg_d
        coef = rem[-1]
        for j in range(len(d)):
            rem[shift + j] = (rem[shift + j] - coef * d[j]) % p
    return not any(_poly_trim(tuple(rem)))


def _int_to_poly(e: int, p: int) -> Tuple[int, ...]:
    digits = []
    while e:
        e, r = divmod(e, p)
        digits.append(r)
    return tuple(digits)


def _poly_to_int(c: Tuple[int, ...], p: int) -> int:
    v = 0
    for d in reversed(c):
        v = v * p + d
    return v


def _least_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over F_p.

    Candidates x^k + t are scanned by increasing integer encoding of the
    tail t, i.e. lexicographic on coefficients read from degree k-1 down.
    """
    for tail in range(p**k):
        f = _int_to_poly(tail, p) + (0,) * max(0, k - len(_int_to_poly(tail, p)))
        f = tuple(f[:k]) + (1,)
        irreducible = True
        for deg in range(1, k // 2 + 1):
            for dtail in range(p**deg):
                d = _int_to_poly(dtail, p)
                d = tuple(d) + (0,) * (deg - len(d)) + (1,)
                if _poly_divides(d, f, p):
                    irreducible = False
                    break
            if not irreducible:
                break
        if irreducible:
            return f
    raise NotPrimePower(f"no irreducible polynomial found for GF({p}^{k})")


class PrimePowerField:
    """Dense-table arithmetic for GF(q) with q = p**k, q small."""

    def __init__(self, q: int) -> None:
        p, k = factor_prime_power(q)
        self.q = q
        self.p = p
        self.k = k
        self.modulus: Optional[Tuple[int, ...]] = None

        idx = np.arange(q, dtype=np.int64)
        digits = []
        rest = idx.copy()
        for _ in range(k):
            digits.append(rest % p)
            rest //= p
        # componentwise addition/negation of base-p digit vectors
        add = np.zeros((q, q), dtype=np.int32)
        for i in range(k):
            add += ((digits[i][:, None] + digits[i][None, :]) % p).astype(np.int32) * p**i
        self.add_table = add
        neg = np.zeros(q, dtype=np.int32)
        for i in range(k):
            neg += ((-digits[i]) % p).astype(np.int32) * p**i
        self.neg_table = neg

        if k == 1:
            mul = (idx[:, None] * idx[None, :] % p).astype(np.int32)
        else:
            self.modulus = _least_irreducible(p, k)
            log, antilog = self._build_log_tables()
            self._log = log
            self._antilog = antilog
            mul = np.zeros((q, q), dtype=np.int32)
            nz = idx[1:]
            e = (log[nz][:, None] + log[nz][None, :]) % (q - 1)
            mul[1:, 1:] = antilog[e]
        self.mul_table = mul

        inv = np.zeros(q, dtype=np.int32)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_table = inv
        self.one = 1
        self.zero = 0

    def _build_log_tables(self) -> Tuple[np.ndarray, np.ndarray]:
        p, k, q = self.p, self.k, self.q
        assert self.modulus is not None
        for g in range(2, q):
            gp = _int_to_poly(g, p)
            acc = (1,)
            seen = 1
            while True:
                acc = _poly_mul_mod(acc, gp, self.modulus, p)
                if _poly_to_int(acc, p) == 1:
                    break
                seen += 1
            if seen == q - 1:
                antilog = np.zeros(q - 1, dtype=np.int32)
                log = np.zeros(q, dtype=np.int32)
                acc = (1,)
                for e in range(q - 1):
                    v = _poly_to_int(acc, p)
                    antilog[e] = v
                    log[v] = e
                    acc = _poly_mul_mod(acc, gp, self.modulus, p)
                return log, antilog
        raise NotPrimePower(f"no multiplicative generator found for GF({q})")

    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        return self.inv_table[a]

    def elements(self) -> List[int]:
        return list(range(self.q))
