"""Exact arithmetic in GF(p^k).

Field elements are plain ints: the element with coefficient vector
(c0, ..., c_{k-1}) over GF(p) is encoded as sum(c_i * p**i).  The
encoding is fixed so serialized fixtures are portable.  A FieldSpec is
an immutable value; arithmetic tables are cached per spec in a
module-level dict keyed by (p, k, modulus).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product


class FieldError(ValueError):
    """Bad field parameters or an illegal field operation."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# --- polynomial helpers over GF(p); coefficient lists ascending -----------


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    # m monic
    a = list(a)
    _poly_trim(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        coef = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        _poly_trim(a)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree 1..deg(m)//2."""
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            div = list(tail) + [1]
            if not _poly_mod(m, div, p):
                return False
    # degree-1 modulus is irreducible; also catch roots for odd degrees
    if deg >= 2:
        for x in range(p):
            acc = 0
            for c in reversed(m):
                acc = (acc * x + c) % p
            if acc == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) presented by a monic irreducible modulus over GF(p).

    modulus is the ascending coefficient tuple of length k+1, monic.
    """

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.k

    def elements(self) -> range:
        return range(self.order)

    # encode/decode between int encoding and coefficient vector
    def decode(self, a: int) -> list[int]:
        if not 0 <= a < self.order:
            raise FieldError(f"element {a} out of range for GF({self.order})")
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def encode(self, coeffs: list[int]) -> int:
        a = 0
        for c in reversed(coeffs):
            a = a * self.p + (c % self.p)
        return a

    # --- arithmetic -------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        ca, cb = self.decode(a), self.decode(b)
        return self.encode([(x + y) % self.p for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        return self.encode([(-c) % self.p for c in self.decode(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        table = _tables(self)[0]
        if table is not None:
            return table[a][b]
        return self._mul_slow(a, b)

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _poly_mul(self.decode(a), self.decode(b), self.p)
        red = _poly_mod(prod, list(self.modulus), self.p)
        red += [0] * (self.k - len(red))
        return self.encode(red)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("inverse of 0")
        inv_table = _tables(self)[1]
        if inv_table is not None:
            return inv_table[a]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc, base = 1, a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(d: dict) -> "FieldSpec":
        f = FieldSpec(d["p"], d["k"], tuple(d["modulus"]))
        _validate(f)
        return f


_TABLE_CACHE: dict[tuple, tuple] = {}


def _tables(F: FieldSpec):
    key = (F.p, F.k, F.modulus)
    got = _TABLE_CACHE.get(key)
    if got is None:
        if F.order <= 256:
            mul = [[F._mul_slow(a, b) for b in range(F.order)] for a in range(F.order)]
            inv = [0] * F.order
            for a in range(1, F.order):
                for b in range(1, F.order):
                    if mul[a][b] == 1:
                        inv[a] = b
                        break
            got = (mul, inv)
        else:
            got = (None, None)
        _TABLE_CACHE[key] = got
    return got


def _validate(F: FieldSpec) -> None:
    if not _is_prime(F.p):
        raise FieldError(f"{F.p} not prime")
    if F.k < 1:
        raise FieldError(f"degree {F.k} < 1")
    if len(F.modulus) != F.k + 1 or F.modulus[-1] != 1:
        raise FieldError("modulus must be monic of degree k")
    if not _is_irreducible(list(F.modulus), F.p):
        raise FieldError("modulus reducible")


def field_make(p: int, k: int) -> FieldSpec:
    """GF(p^k) with the lexicographically least monic irreducible modulus."""
    if not _is_prime(p):
        raise FieldError(f"{p} not prime")
    if k < 1:
        raise FieldError(f"degree {k} < 1")
    if k == 1:
        return FieldSpec(p, 1, (0, 1) if p == 2 else (0, 1))
    for tail in product(range(p), repeat=k):
        m = list(tail) + [1]
        if _is_irreducible(m, p):
            return FieldSpec(p, k, tuple(m))
    raise FieldError("no irreducible modulus found")  # unreachable


def subfield_member(F: FieldSpec, m: int, a: int) -> bool:
    """Frobenius fixed-point test: a lies in the order-p^m subfield."""
    if F.k % m != 0:
        raise FieldError(f"{m} does not divide extension degree {F.k}")
    return F.pow(a, F.p ** m) == a


_EMBED_CACHE: dict[tuple, int] = {}


def _generator_image(F_small: FieldSpec, F_big: FieldSpec) -> int:
    """Lexicographically least root of F_small's modulus in F_big."""
    key = (F_small.p, F_small.k, F_small.modulus, F_big.p, F_big.k, F_big.modulus)
    if key in _EMBED_CACHE:
        return _EMBED_CACHE[key]
    for r in F_big.elements():
        acc = 0
        for c in reversed(F_small.modulus):
            acc = F_big.add(F_big.mul(acc, r), c % F_big.p)
        if acc == 0:
            _EMBED_CACHE[key] = r
            return r
    raise FieldError("modulus has no root in the big field")


def subfield_embed(F_small: FieldSpec, F_big: FieldSpec, a: int) -> int:
    """Ring-homomorphic injection GF(p^m) -> GF(p^k), m | k."""
    if F_small.p != F_big.p:
        raise FieldError("different characteristics")
    if F_big.k % F_small.k != 0:
        raise FieldError("small degree does not divide big degree")
    if F_small.k == 1:
        return a % F_big.p  # prime field embeds as constants
    r = _generator_image(F_small, F_big)
    acc = 0
    for c in reversed(F_small.decode(a)):
        acc = F_big.add(F_big.mul(acc, r), c)
    return acc
