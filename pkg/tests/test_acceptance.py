"""Acceptance suite: one test per criterion, exact tolerances.

Each test prints a single PASS line with its wall time when it
succeeds; a pytest failure line marks the criterion failed.
"""

import random
import time
from itertools import combinations, product

from mforge.connectivity import is_3connected, kappa, lambda_value, linking_set, local_conn
from mforge.construct import (charconflict_certificate, counterexample,
                              pappus_certificate, relax, verify_certificate)
from mforge.geometry import GeometryId, pg, pg_matrix, pg_size, verify_geometry
from mforge.matrix import Matrix, apply_projective
from mforge.matroid import (DualMatroid, LinearMatroid, MinorSpec,
                            UniformMatroid, dual, flats, is_isomorphic,
                            longest_line, minor, simplify_epsilon)
from mforge.subfield import (pg_subfield_verify, reverify,
                             scaled_subfield_check, scaled_subfield_exhaustive)
from mforge.witness import (extract_long_line, line_from_pg_extension,
                            proof_replay_fixture)

from helpers import (GF4, GF9, random_invertible, random_linear_matroid,
                     random_matrix)


def _report(n, t0):
    print(f"PASS criterion {n} ({time.monotonic() - t0:.1f}s)")


def bases(M):
    r = M.rank()
    return {frozenset(c) for c in combinations(M.ground, r) if M.rank(c) == r}


def test_criterion_01_counterexample_q2():
    t0 = time.monotonic()
    M, Mp, C = counterexample(3, 2)
    assert len(Mp.ground) == 12
    assert Mp.rank() == 4
    ok, _ = is_3connected(Mp)
    assert ok
    assert longest_line(Mp)[0] == 4  # hence no U_{2,5}-minor
    target = pg(3, 2)
    outside = sorted(set(Mp.ground) - C)
    assert len(outside) == 8
    for e in outside:
        Mc = minor(Mp, MinorSpec(frozenset([e]), frozenset()))
        si, _, _ = simplify_epsilon(Mc)
        iso, _ = is_isomorphic(si, target)
        assert iso
    cert = charconflict_certificate(Mp, C, 2)
    assert verify_certificate(cert, Mp)
    _report(1, t0)


def test_criterion_02_counterexample_q3():
    t0 = time.monotonic()
    M, Mp, C = counterexample(3, 3)
    assert len(Mp.ground) == 31
    assert Mp.rank() == 4
    assert longest_line(Mp)[0] == 5
    cert = pappus_certificate(Mp, C, 3)
    abc = frozenset(cert.labels[t] for t in "abc")
    assert any(cl.subset == abc and cl.rank == 3 for cl in cert.claims)
    assert verify_certificate(cert, Mp)
    _report(2, t0)


def test_criterion_03_relaxation_oracle():
    t0 = time.monotonic()
    F = pg(3, 2)
    line = flats(F, 2)[0]
    N = relax(F, line)
    assert bases(N) == bases(F) | {line}
    M, Mp, C = counterexample(3, 2)
    assert bases(Mp) == bases(M) | {C}
    _report(3, t0)


def test_criterion_04_scaled_subfield_instance_suite():
    t0 = time.monotonic()
    rng = random.Random(101)
    for count, q, F in ((100, 2, GF4), (50, 3, GF9)):
        base = pg_matrix(3, q, field=F)
        for _ in range(count):
            T = random_invertible(rng, F, 3)
            scales = {c: rng.randrange(1, F.order) for c in base.col_labels}
            A = apply_projective(base, row_ops=T, col_scales=scales)
            assert pg_subfield_verify(A, 3, q)
    _report(4, t0)


def test_criterion_05_tutte_linking():
    t0 = time.monotonic()
    rng = random.Random(103)
    for _ in range(200):
        M = random_linear_matroid(rng, max_elems=10)
        elems = list(M.ground)
        rng.shuffle(elems)
        ns, nt = rng.randint(1, 2), rng.randint(1, 2)
        S, T = elems[:ns], elems[ns:ns + nt]
        # min side, brute forced here independently of kappa()
        free = sorted(set(M.ground) - set(S) - set(T))
        mn = min(lambda_value(M, set(S) | set(sub))
                 for size in range(len(free) + 1)
                 for sub in combinations(free, size))
        # max side over all contractions
        mx = max(local_conn(minor(M, MinorSpec(frozenset(Z), frozenset())), S, T)
                 for size in range(len(free) + 1)
                 for Z in combinations(free, size))
        value = kappa(M, S, T)
        assert value == mn == mx
        Z, got = linking_set(M, S, T)
        assert got == value
        assert local_conn(M, Z, S) == 0 and local_conn(M, Z, T) == 0
    _report(5, t0)


def test_criterion_06_line_from_extension_suite():
    t0 = time.monotonic()
    rng = random.Random(107)
    from test_witness import extend_pg
    for q, F in ((2, GF4), (3, GF9)):
        for _ in range(50):
            P = extend_pg(rng, q, F)
            spec = line_from_pg_extension(P, "ext", q)
            W = minor(P, spec)
            assert W.rank() == 2
            assert longest_line(W)[0] == q * q + 1
    _report(6, t0)


def test_criterion_07_scaled_subfield_agreement():
    t0 = time.monotonic()
    # all 2x2 matrices over GF(4) and GF(9)
    for F, q in ((GF4, 2), (GF9, 3)):
        labels = (("r0", "r1"), ("c0", "c1"))
        for ents in product(range(F.order), repeat=4):
            A = Matrix(F, labels[0], labels[1],
                       (tuple(ents[:2]), tuple(ents[2:])))
            cert = scaled_subfield_check(A, q)
            assert cert.ok == scaled_subfield_exhaustive(A, q)
            assert reverify(A, cert)
    # 1000 random 3x3 over each
    rng = random.Random(109)
    for F, q in ((GF4, 2), (GF9, 3)):
        for _ in range(1000):
            A = random_matrix(rng, F, 3, 3)
            cert = scaled_subfield_check(A, q)
            assert cert.ok == scaled_subfield_exhaustive(A, q)
            assert reverify(A, cert)
    _report(7, t0)


def test_criterion_08_proof_replay():
    t0 = time.monotonic()
    Mp, x, A, emb, q = proof_replay_fixture()
    spec, trace = extract_long_line(Mp, x, None, A, emb, q)
    W = minor(Mp, spec)
    assert W.rank() == 2
    assert longest_line(W)[0] == q * q + 1
    assert len(set(trace.coloring.values())) <= q * q
    D1 = trace.bordered.submatrix(
        [r for r in trace.bordered.row_labels if r != x],
        sorted(trace.mono_set))
    ok, _ = verify_geometry(LinearMatroid(D1), GeometryId("AG", 4, q))
    assert ok
    F = A.field
    assert not any(
        all(F.mul(c, a) == b for a, b in zip(trace.alpha, trace.alpha_prime))
        for c in range(1, F.order))
    assert len(trace.bad_lines) <= 1
    _report(8, t0)


def test_criterion_09_rank_axioms_and_duality():
    t0 = time.monotonic()
    rng = random.Random(113)
    realizations = []
    for _ in range(6):
        realizations.append(random_linear_matroid(rng, max_elems=9))
    realizations.append(UniformMatroid(3, 7))
    base = random_linear_matroid(rng, max_elems=9)
    elems = list(base.ground)
    realizations.append(minor(base, MinorSpec(frozenset(elems[:2]),
                                              frozenset(elems[2:3]))))
    realizations.append(DualMatroid(pg(3, 2)))
    from mforge.construct import nonfano
    realizations.append(nonfano())
    samples = 10000
    per = samples // len(realizations) + 1
    total = 0
    for M in realizations:
        ground = list(M.ground)
        D = dual(M)
        for _ in range(per):
            total += 1
            X = frozenset(e for e in ground if rng.random() < 0.5)
            Y = frozenset(e for e in ground if rng.random() < 0.5)
            rx, ry = M.rank(X), M.rank(Y)
            assert 0 <= rx <= len(X)
            if X <= Y:
                assert rx <= ry
            assert M.rank(X | Y) + M.rank(X & Y) <= rx + ry
            e = rng.choice(ground)
            assert 0 <= M.rank(X | {e}) - rx <= 1
            assert lambda_value(M, X) == lambda_value(D, X)
    assert total >= 10000
    _report(9, t0)


def test_criterion_10_growth_table():
    t0 = time.monotonic()
    for q in (2, 3, 4):
        for k in range(1, 5):
            _, _, eps = simplify_epsilon(pg(k, q))
            assert eps == pg_size(k, q) == (q ** k - 1) // (q - 1)
    _report(10, t0)
