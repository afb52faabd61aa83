"""Labelled matrices: reduction, standard form, induced representations,
projective transformations."""

import random

import pytest

from mforge.matrix import (Matrix, MatrixError, apply_projective, column_rank,
                           induce_representation, is_standard_form, rref_rank,
                           standard_form)
from mforge.matroid import LinearMatroid, oracle_equal

from helpers import GF2, GF3, GF4, random_invertible, random_matrix


def test_validation():
    with pytest.raises(MatrixError):
        Matrix(GF2, ("r0",), ("c0", "c1"), ((1,),))
    with pytest.raises(MatrixError):
        Matrix(GF2, ("r0", "r0"), ("c0",), ((1,), (0,)))


def test_rref_rank():
    A = Matrix(GF3, ("r0", "r1", "r2"), ("a", "b", "c"),
               ((1, 2, 0), (0, 1, 1), (0, 0, 0)))
    R, r = rref_rank(A)
    assert r == 2
    assert column_rank(A, ["a", "b"]) == 2
    assert column_rank(A, ["a"]) == 1


def test_standard_form_identity_block():
    rng = random.Random(7)
    A = random_matrix(rng, GF3, 3, 6)
    M = LinearMatroid(A)
    from mforge.matroid import greedy_independent
    basis = greedy_independent(M, M.ground)
    S = standard_form(A, basis)
    assert is_standard_form(S, basis)
    assert oracle_equal(LinearMatroid(S), M)


def test_standard_form_rejects_dependent_columns():
    A = Matrix(GF2, ("r0", "r1"), ("a", "b", "c"), ((1, 1, 0), (0, 0, 1)))
    with pytest.raises(MatrixError) as exc:
        standard_form(A, ["a", "b"])  # b is parallel to a
    assert "b" in str(exc.value)


def test_induce_representation():
    # standard form w.r.t. {a, b, c}; contract c, delete nothing
    A = Matrix(GF2, ("a", "b", "c"), ("a", "b", "c", "d", "e"),
               ((1, 0, 0, 1, 0), (0, 1, 0, 1, 1), (0, 0, 1, 0, 1)))
    induced = induce_representation(A, C={"c"}, D=set(), B=["a", "b"])
    assert induced.row_labels == ("a", "b")
    assert induced.col_labels == ("a", "b", "d", "e")
    M = LinearMatroid(A)
    from mforge.matroid import MinorSpec, minor
    Mc = minor(M, MinorSpec(frozenset(["c"]), frozenset()))
    got = LinearMatroid(induced)
    assert all(got.rank(S) == Mc.rank(S)
               for S in [["a"], ["d", "e"], ["a", "b", "d", "e"]])


def test_induce_requires_standard_form():
    A = Matrix(GF2, ("a", "b"), ("a", "b", "c"), ((1, 1, 0), (0, 1, 1)))
    with pytest.raises(MatrixError):
        induce_representation(A, C=set(), D={"c"}, B=["a", "b"])


def test_apply_projective_preserves_matroid():
    rng = random.Random(11)
    for _ in range(20):
        A = random_matrix(rng, GF4, 3, 6)
        T = random_invertible(rng, GF4, 3)
        scales = {c: rng.randrange(1, 4) for c in A.col_labels}
        B = apply_projective(A, row_ops=T, col_scales=scales)
        assert oracle_equal(LinearMatroid(A), LinearMatroid(B))


def test_apply_projective_rejects_singular():
    A = random_matrix(random.Random(0), GF2, 2, 3)
    with pytest.raises(MatrixError):
        apply_projective(A, row_ops=((1, 1), (1, 1)))
    with pytest.raises(MatrixError):
        apply_projective(A, col_scales={"c00": 0})


def test_json_round_trip():
    A = random_matrix(random.Random(3), GF4, 2, 4)
    assert Matrix.from_json(A.to_json()) == A
