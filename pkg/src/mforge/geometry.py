"""Canonical projective and affine geometries PG(n-1, q) and AG(n-1, q).

Following the classical convention, pg(n, q) is the *rank-n* geometry:
columns are all length-n vectors over GF(q) whose first nonzero
coordinate is 1, in lexicographic order.  Labels are the digit strings
of the int-encoded coordinates, so label order equals vector order and
fixtures are byte-stable.  ag(n, q) deletes the canonical hyperplane
{first coordinate = 0}.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .field import FieldError, FieldSpec, field_make
from .matrix import Matrix
from .matroid import LinearMatroid, Matroid, is_isomorphic


class GeometryError(ValueError):
    pass


def prime_power(q: int) -> tuple[int, int]:
    """q = p^k with p prime, or raise."""
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m == 1:
                return p, k
            raise GeometryError(f"{q} is not a prime power")
    raise GeometryError(f"{q} is not a prime power")


def field_of_order(q: int) -> FieldSpec:
    p, k = prime_power(q)
    try:
        return field_make(p, k)
    except FieldError as exc:
        raise GeometryError(str(exc))


@dataclass(frozen=True)
class GeometryId:
    kind: str  # "PG" or "AG"
    rank: int
    order: int

    def __post_init__(self):
        if self.kind not in ("PG", "AG"):
            raise GeometryError(f"unknown geometry kind {self.kind!r}")
        prime_power(self.order)
        if self.rank < 1:
            raise GeometryError("rank must be >= 1")


def point_label(vec: tuple[int, ...]) -> str:
    return "".join(str(c) for c in vec)


def pg_vectors(n: int, q: int) -> list[tuple[int, ...]]:
    """Normalized representatives of the points of PG(n-1, q), lex order."""
    out = []
    for vec in product(range(q), repeat=n):
        nz = next((c for c in vec if c), None)
        if nz == 1:
            out.append(vec)
    return out


def pg_matrix(n: int, q: int, field: FieldSpec | None = None) -> Matrix:
    """Canonical rank-n representation of PG(n-1, q).

    When field is given it must be an extension of GF(q) with the same
    characteristic and q prime; entries 0/1/... are re-used verbatim
    (only valid when GF(q) is the prime field or field == GF(q)).
    """
    F = field if field is not None else field_of_order(q)
    vecs = pg_vectors(n, q)
    labels = [point_label(v) for v in vecs]
    rows = tuple(tuple(v[i] for v in vecs) for i in range(n))
    return Matrix(F, tuple(f"r{i}" for i in range(n)), tuple(labels), rows)


def pg(n: int, q: int) -> LinearMatroid:
    """The rank-n projective geometry over GF(q)."""
    if n < 1:
        raise GeometryError("rank must be >= 1")
    return LinearMatroid(pg_matrix(n, q))


def ag(n: int, q: int) -> LinearMatroid:
    """Rank-n affine geometry: PG(n-1, q) minus the first-coordinate-0 hyperplane."""
    if n < 2:
        raise GeometryError("affine geometry needs rank >= 2")
    F = field_of_order(q)
    vecs = [v for v in pg_vectors(n, q) if v[0] == 1]
    labels = [point_label(v) for v in vecs]
    rows = tuple(tuple(v[i] for v in vecs) for i in range(n))
    return LinearMatroid(Matrix(F, tuple(f"r{i}" for i in range(n)),
                                tuple(labels), rows))


def canonical(gid: GeometryId) -> LinearMatroid:
    return pg(gid.rank, gid.order) if gid.kind == "PG" else ag(gid.rank, gid.order)


def pg_size(n: int, q: int) -> int:
    return (q ** n - 1) // (q - 1)


def verify_geometry(M: Matroid, gid: GeometryId, bound: int | None = None):
    """Prefilter on counts, then certified isomorphism to the canonical instance."""
    target = canonical(gid)
    expected = pg_size(gid.rank, gid.order) if gid.kind == "PG" else gid.order ** (gid.rank - 1)
    if len(M.ground) != expected or M.rank() != gid.rank:
        return False, None
    return is_isomorphic(M, target, bound=bound)
