"""Circuit-hyperplane relaxation, the counterexample family, and
machine-checkable non-representability certificates.

The family member of index n lives in the rank-(n+1) geometry
pg(n+1, q): take its canonical hyperplane H (first coordinate zero)
and the canonical (n+1)-element circuit C inside H (the n unit-pattern
points of H plus their coordinate sum), delete H - C, then relax C.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .geometry import pg, point_label
from .matroid import (Matroid, MinorSpec, RelaxedMatroid, is_circuit,
                      is_isomorphic, minor, simplify_epsilon)


class ConstructError(ValueError):
    pass


def relax(M: Matroid, C) -> RelaxedMatroid:
    """Relax the circuit-hyperplane C: bases(M') = bases(M) + {C}."""
    C = frozenset(C)
    ok, witness = is_circuit(M, C)
    if not ok:
        raise ConstructError(f"{sorted(C)} is not a circuit; witness {sorted(witness)}")
    if M.rank(C) != M.rank() - 1:
        raise ConstructError(f"{sorted(C)} has rank {M.rank(C)}, not corank 1")
    cl = M.closure(C)
    if cl != C:
        raise ConstructError(f"{sorted(C)} not a flat; closure adds {sorted(cl - C)}")
    return RelaxedMatroid(M, C)


def counterexample(n: int, q: int):
    """(M_n, M_n', C): the relaxed family member of index n over GF(q).

    M_n is pg(n+1, q) minus (canonical hyperplane H minus C), where C
    is the canonical (n+1)-circuit in H; M_n' relaxes C.
    """
    if n < 3:
        raise ConstructError("index must be >= 3")
    P = pg(n + 1, q)
    H = [e for e in P.ground if e[0] == "0"]
    # n unit-pattern points of H plus their sum
    units = []
    for i in range(1, n + 1):
        vec = [0] * (n + 1)
        vec[i] = 1
        units.append(point_label(tuple(vec)))
    s = point_label(tuple([0] + [1] * n))
    C = frozenset(units + [s])
    if not C <= set(H):
        raise ConstructError("canonical circuit escaped the hyperplane")
    Mn = minor(P, MinorSpec(frozenset(), frozenset(H) - C))
    Mnp = relax(Mn, C)
    return Mn, Mnp, C


# --- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class RankClaim:
    subset: frozenset
    rank: int

    def to_json(self):
        return {"subset": sorted(self.subset), "rank": self.rank}

    @staticmethod
    def from_json(d):
        return RankClaim(frozenset(d["subset"]), d["rank"])


@dataclass(frozen=True)
class PappusViolation:
    """Rank claims on a rank-3 minor that contradict Pappus's theorem."""

    minor_spec: MinorSpec
    labels: dict  # roles a..i -> element labels of the minor
    claims: tuple  # RankClaim tuple, all on the minor

    kind = "pappus"

    def to_json(self):
        return {
            "kind": self.kind,
            "minor": self.minor_spec.to_json(),
            "labels": dict(self.labels),
            "claims": [c.to_json() for c in self.claims],
        }


@dataclass(frozen=True)
class CharConflict:
    """Two minors forcing incompatible characteristics.

    Each witness carries the minor spec, a bijection onto the canonical
    target, and the target name ("pg(3,2)" or "nonfano"); the checker
    re-verifies the bijection rank-for-rank without any search.
    """

    pg_spec: MinorSpec
    pg_bijection: dict
    nonfano_spec: MinorSpec
    nonfano_bijection: dict

    kind = "charconflict"

    def to_json(self):
        return {
            "kind": self.kind,
            "pgMinor": self.pg_spec.to_json(),
            "pgBijection": dict(self.pg_bijection),
            "nonfanoMinor": self.nonfano_spec.to_json(),
            "nonfanoBijection": dict(self.nonfano_bijection),
        }


def certificate_from_json(d: dict):
    if d["kind"] == "pappus":
        return PappusViolation(
            MinorSpec.from_json(d["minor"]),
            dict(d["labels"]),
            tuple(RankClaim.from_json(c) for c in d["claims"]),
        )
    if d["kind"] == "charconflict":
        return CharConflict(
            MinorSpec.from_json(d["pgMinor"]), dict(d["pgBijection"]),
            MinorSpec.from_json(d["nonfanoMinor"]), dict(d["nonfanoBijection"]),
        )
    raise ConstructError(f"unknown certificate kind {d['kind']!r}")


def fano() -> Matroid:
    return pg(3, 2)


def nonfano() -> Matroid:
    """Canonical non-Fano: relax the lexicographically least line of pg(3,2)."""
    F = fano()
    from .matroid import flats
    line = flats(F, 2)[0]
    return relax(F, line)


def _simplify_spec(M: Matroid, contract) -> MinorSpec:
    """Spec whose minor is si(M / contract)."""
    Mc = minor(M, MinorSpec(frozenset(contract), frozenset()))
    si, _, _ = simplify_epsilon(Mc)
    deleted = set(Mc.ground) - set(si.ground)
    return MinorSpec(frozenset(contract), frozenset(deleted))


def pappus_certificate(Mp: Matroid, C, q: int) -> PappusViolation:
    """Search the two-triangle Pappus configuration in si(M'/X).

    X is the lexicographically least (|C|-3)-subset of C; the relaxed
    triple {a, b, c} is C - X.  Triangles {d, e, f} are scanned in
    label order; g, h, i are the forced line intersections.  Every
    claim of the emitted certificate is verified before return.
    """
    if q == 2:
        raise ConstructError("q = 2: use charconflict_certificate")
    if not isinstance(Mp, RelaxedMatroid):
        raise ConstructError("expected a relaxed matroid")
    C = frozenset(C)
    M = Mp.base
    X = sorted(C)[: len(C) - 3]
    spec = _simplify_spec(Mp, X)
    Np = minor(Mp, spec)
    N = minor(M, spec)
    _, rep, _ = simplify_epsilon(minor(Mp, MinorSpec(frozenset(X), frozenset())))
    a, b, c = sorted(rep[e] for e in sorted(C - set(X)))
    abc = {a, b, c}
    if N.rank() != 3 or Np.rank() != 3:
        raise ConstructError("minor is not rank 3")

    def line(M_, S):
        return M_.closure(S)

    rest = [e for e in N.ground if e not in abc]
    for d, e, f in combinations(rest, 3):
        if N.rank([d, e, f]) != 2:
            continue
        tri = line(N, [d, e, f])
        if abc & tri:
            continue
        g_set = line(N, [e, a]) & line(N, [f, b]) - {a, b, c, d, e, f}
        h_set = line(N, [d, a]) & line(N, [f, c]) - {a, b, c, d, e, f}
        i_set = line(N, [d, b]) & line(N, [e, c]) - {a, b, c, d, e, f}
        if len(g_set) != 1 or len(h_set) != 1 or len(i_set) != 1:
            continue
        g, h, i = min(g_set), min(h_set), min(i_set)
        if len({g, h, i}) != 3:
            continue
        if N.rank([g, h, i]) != 2:
            # Pappus guarantees collinearity in the representable N
            raise ConstructError("Pappus failed in the unrelaxed minor")
        claims = (
            RankClaim(frozenset([d, e, f]), 2),
            RankClaim(frozenset([g, h, i]), 2),
            RankClaim(frozenset([d, e, f, g, h, i]), 3),
            RankClaim(frozenset([a, e, g]), 2),
            RankClaim(frozenset([a, d, h]), 2),
            RankClaim(frozenset([b, f, g]), 2),
            RankClaim(frozenset([b, d, i]), 2),
            RankClaim(frozenset([c, e, i]), 2),
            RankClaim(frozenset([c, f, h]), 2),
            RankClaim(frozenset([a, b, c]), 3),
        )
        if not all(Np.rank(cl.subset) == cl.rank for cl in claims):
            continue
        labels = dict(zip("abcdefghi", (a, b, c, d, e, f, g, h, i)))
        return PappusViolation(spec, labels, claims)
    raise ConstructError("search exhausted: no Pappus configuration found")


def charconflict_certificate(Mp: Matroid, C, q: int) -> CharConflict:
    """q = 2: a PG(2,2)-minor plus a non-Fano minor."""
    if q != 2:
        raise ConstructError("characteristic-conflict certificate requires q = 2")
    C = frozenset(C)
    # witness 1: si(M'/e) for the least e outside C is PG(2,2)
    outside = sorted(set(Mp.ground) - C)
    pg_spec = None
    pg_bij = None
    target_pg = fano()
    for e in outside:
        spec = _simplify_spec(Mp, [e])
        ok, bij = is_isomorphic(minor(Mp, spec), target_pg)
        if ok:
            pg_spec, pg_bij = spec, bij
            break
    if pg_spec is None:
        raise ConstructError("no PG(2,2) minor found")
    # witness 2: si(M'/X), X in C with |X| = |C|-3, is non-Fano
    target_nf = nonfano()
    nf_spec = None
    nf_bij = None
    for X in combinations(sorted(C), len(C) - 3):
        spec = _simplify_spec(Mp, list(X))
        ok, bij = is_isomorphic(minor(Mp, spec), target_nf)
        if ok:
            nf_spec, nf_bij = spec, bij
            break
    if nf_spec is None:
        raise ConstructError("no non-Fano minor found")
    return CharConflict(pg_spec, pg_bij, nf_spec, nf_bij)


def _verify_bijection(Mm: Matroid, target: Matroid, bij: dict) -> bool:
    """Rank-preserving bijection check on all subsets up to the rank."""
    if set(bij) != set(Mm.ground) or set(bij.values()) != set(target.ground):
        return False
    r = target.rank()
    if Mm.rank() != r:
        return False
    for size in range(1, r + 1):
        for S in combinations(Mm.ground, size):
            if Mm.rank(S) != target.rank([bij[x] for x in S]):
                return False
    return True


def verify_certificate(cert, M: Matroid) -> bool:
    """Recompute every claim against M's oracle; no search."""
    if isinstance(cert, PappusViolation):
        labels = set(cert.minor_spec.contract) | set(cert.minor_spec.delete)
        for cl in cert.claims:
            labels |= set(cl.subset)
        if not labels <= set(M.ground):
            raise ConstructError("certificate references labels outside the matroid")
        Np = minor(M, cert.minor_spec)
        for cl in cert.claims:
            if not cl.subset <= set(Np.ground):
                return False
            if Np.rank(cl.subset) != cl.rank:
                return False
        # roles must be distinct elements of the minor
        vals = list(cert.labels.values())
        return len(set(vals)) == 9 and set(vals) <= set(Np.ground)
    if isinstance(cert, CharConflict):
        for spec, bij, target in (
            (cert.pg_spec, cert.pg_bijection, fano()),
            (cert.nonfano_spec, cert.nonfano_bijection, nonfano()),
        ):
            labels = set(spec.contract) | set(spec.delete) | set(bij)
            if not labels <= set(M.ground):
                raise ConstructError("certificate references labels outside the matroid")
            if not _verify_bijection(minor(M, spec), target, bij):
                return False
        return True
    raise ConstructError("unknown certificate type")
