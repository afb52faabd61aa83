"""Relaxation, the counterexample family, and certificates."""

from itertools import combinations

import pytest

from mforge.construct import (CharConflict, ConstructError, PappusViolation,
                              certificate_from_json, charconflict_certificate,
                              counterexample, fano, nonfano,
                              pappus_certificate, relax, verify_certificate)
from mforge.geometry import pg
from mforge.matroid import flats, is_circuit, is_isomorphic, longest_line


def bases(M):
    r = M.rank()
    return {frozenset(c) for c in combinations(M.ground, r) if M.rank(c) == r}


def test_relax_fano_adds_one_basis():
    F = fano()
    line = flats(F, 2)[0]
    N = relax(F, line)
    bf, bn = bases(F), bases(N)
    assert len(bf) == 28 and len(bn) == 29
    assert bn == bf | {line}


def test_relax_rejects_non_circuit_hyperplanes():
    F = fano()
    with pytest.raises(ConstructError):
        relax(F, ["001", "010"])          # independent, not a circuit
    with pytest.raises(ConstructError):
        relax(F, ["001", "010", "100", "111"])  # spanning


def test_counterexample_q2():
    M, Mp, C = counterexample(3, 2)
    assert len(M.ground) == 12 and M.rank() == 4
    ok, _ = is_circuit(M, C)
    assert ok
    assert M.rank(C) == 3 and M.closure(C) == C
    assert Mp.rank(C) == 4  # relaxed into a basis
    assert bases(Mp) == bases(M) | {C}


def test_counterexample_q3():
    M, Mp, C = counterexample(3, 3)
    assert len(M.ground) == 31 and M.rank() == 4
    assert len(C) == 4
    assert longest_line(Mp)[0] == 5


def test_counterexample_rejects_small_index():
    with pytest.raises(ConstructError):
        counterexample(2, 2)


def test_nonfano():
    N = nonfano()
    assert len(bases(N)) == 29
    ok, _ = is_isomorphic(N, fano())
    assert not ok


def test_charconflict_certificate_q2():
    M, Mp, C = counterexample(3, 2)
    cert = charconflict_certificate(Mp, C, 2)
    assert verify_certificate(cert, Mp)
    # the unrelaxed matroid is GF(2)-representable; the same certificate
    # must not validate against it
    assert not verify_certificate(cert, M)
    back = certificate_from_json(cert.to_json())
    assert isinstance(back, CharConflict)
    assert verify_certificate(back, Mp)


def test_pappus_certificate_q3():
    M, Mp, C = counterexample(3, 3)
    cert = pappus_certificate(Mp, C, 3)
    assert verify_certificate(cert, Mp)
    assert not verify_certificate(cert, M)
    # the relaxed triple must be declared non-collinear
    abc = frozenset(cert.labels[t] for t in "abc")
    assert any(cl.subset == abc and cl.rank == 3 for cl in cert.claims)
    back = certificate_from_json(cert.to_json())
    assert isinstance(back, PappusViolation)
    assert verify_certificate(back, Mp)


def test_certificate_kind_routing():
    M, Mp, C = counterexample(3, 2)
    with pytest.raises(ConstructError):
        pappus_certificate(Mp, C, 2)
    with pytest.raises(ConstructError):
        charconflict_certificate(Mp, C, 3)


def test_tampered_certificate_rejected():
    M, Mp, C = counterexample(3, 2)
    cert = charconflict_certificate(Mp, C, 2)
    d = cert.to_json()
    keys = sorted(d["pgBijection"])
    d["pgBijection"][keys[0]], d["pgBijection"][keys[1]] = \
        d["pgBijection"][keys[1]], d["pgBijection"][keys[0]]
    assert not verify_certificate(certificate_from_json(d), Mp)


def test_tampered_pappus_claim_rejected():
    M, Mp, C = counterexample(3, 3)
    cert = pappus_certificate(Mp, C, 3)
    d = cert.to_json()
    d["claims"][0]["rank"] += 1
    assert not verify_certificate(certificate_from_json(d), Mp)


def test_certificate_alien_labels_raise():
    M, Mp, C = counterexample(3, 2)
    cert = charconflict_certificate(Mp, C, 2)
    with pytest.raises(ConstructError):
        verify_certificate(cert, pg(3, 2))
