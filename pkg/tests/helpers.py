"""Shared fixtures: random matrices, matroids and transformations."""

import random

from mforge.field import FieldSpec, field_make
from mforge.matrix import Matrix
from mforge.matroid import LinearMatroid

GF2 = field_make(2, 1)
GF3 = field_make(3, 1)
GF4 = field_make(2, 2)
GF9 = field_make(3, 2)


def random_matrix(rng: random.Random, F: FieldSpec, nrows: int, ncols: int) -> Matrix:
    ents = tuple(tuple(rng.randrange(F.order) for _ in range(ncols))
                 for _ in range(nrows))
    return Matrix(F, tuple(f"r{i}" for i in range(nrows)),
                  tuple(f"c{j:02d}" for j in range(ncols)), ents)


def random_linear_matroid(rng: random.Random, max_elems: int = 10) -> LinearMatroid:
    F = rng.choice([GF2, GF3])
    n = rng.randint(4, max_elems)
    r = rng.randint(2, min(4, n))
    return LinearMatroid(random_matrix(rng, F, r, n))


def random_invertible(rng: random.Random, F: FieldSpec, n: int):
    from mforge.matrix import _gauss
    while True:
        T = tuple(tuple(rng.randrange(F.order) for _ in range(n)) for _ in range(n))
        if len(_gauss(F, [list(r) for r in T])) == n:
            return T
