"""Rank-oracle matroids: minors, duality, closure, flats, simplification,
longest-line detection and bounded isomorphism testing.

Ground-set labels are strings, totally ordered lexicographically; every
enumeration below reduces ties by that order so results are
deterministic.  Rank values are memoized per matroid instance, keyed by
subset bitmask over the (sorted) ground set.  Ground sets larger than
MAX_GROUND elements are rejected.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations

from .matrix import Matrix, _gauss

MAX_GROUND = 256


class MatroidError(ValueError):
    """Bad labels, rank-axiom violations or exceeded bounds."""


def iso_bound() -> int:
    return int(os.environ.get("MFORGE_BOUND", "64"))


@dataclass(frozen=True)
class MinorSpec:
    """Contract/delete description of a minor: M / contract \\ delete."""

    contract: frozenset
    delete: frozenset

    def __post_init__(self):
        if self.contract & self.delete:
            raise MatroidError("contract and delete overlap")

    def to_json(self) -> dict:
        return {"contract": sorted(self.contract), "delete": sorted(self.delete)}

    @staticmethod
    def from_json(d: dict) -> "MinorSpec":
        return MinorSpec(frozenset(d["contract"]), frozenset(d["delete"]))


class Matroid:
    """Base rank oracle.  Subclasses implement _rank_mask."""

    def __init__(self, ground):
        ground = tuple(sorted(ground))
        if len(set(ground)) != len(ground):
            raise MatroidError("duplicate ground-set labels")
        if len(ground) > MAX_GROUND:
            raise MatroidError(f"ground set exceeds {MAX_GROUND} elements")
        self.ground = ground
        self._index = {e: i for i, e in enumerate(ground)}
        self._bit = {e: 1 << i for i, e in enumerate(ground)}
        self.full_mask = (1 << len(ground)) - 1
        self._memo: dict[int, int] = {}

    # --- mask plumbing ------------------------------------------------

    def mask_of(self, X) -> int:
        m = 0
        for e in X:
            try:
                m |= self._bit[e]
            except KeyError:
                raise MatroidError(f"label {e!r} not in ground set")
        return m

    def set_of(self, mask: int) -> frozenset:
        return frozenset(e for e in self.ground if self._bit[e] & mask)

    # --- rank oracle ----------------------------------------------------

    def rank_mask(self, mask: int) -> int:
        r = self._memo.get(mask)
        if r is None:
            r = self._rank_mask(mask)
            self._memo[mask] = r
        return r

    def _rank_mask(self, mask: int) -> int:
        raise NotImplementedError

    def rank(self, X=None) -> int:
        if X is None:
            return self.rank_mask(self.full_mask)
        return self.rank_mask(self.mask_of(X))

    def is_independent(self, X) -> bool:
        X = frozenset(X)
        return self.rank(X) == len(X)

    def closure_mask(self, mask: int) -> int:
        r0 = self.rank_mask(mask)
        cl = mask
        for e in self.ground:
            b = self._bit[e]
            if not (mask & b) and self.rank_mask(mask | b) == r0:
                cl |= b
        return cl

    def closure(self, X) -> frozenset:
        return self.set_of(self.closure_mask(self.mask_of(X)))

    def to_json(self) -> dict:
        raise NotImplementedError


class LinearMatroid(Matroid):
    """Matroid of the columns of a matrix; rank is column-space rank."""

    def __init__(self, matrix: Matrix):
        super().__init__(matrix.col_labels)
        self.matrix = matrix
        self._cols = {e: matrix.column(e) for e in self.ground}

    def _rank_mask(self, mask: int) -> int:
        cols = [self._cols[e] for e in self.ground if self._bit[e] & mask]
        if not cols:
            return 0
        grid = [[col[i] for col in cols] for i in range(len(cols[0]))]
        return len(_gauss(self.matrix.field, grid))

    def to_json(self) -> dict:
        return {"kind": "linear", "matrix": self.matrix.to_json()}


class UniformMatroid(Matroid):
    """U_{r,n} on labels e00..e(n-1); handy for fixtures and tests."""

    def __init__(self, r: int, n: int, labels=None):
        if labels is None:
            labels = [f"e{i:02d}" for i in range(n)]
        super().__init__(labels)
        self.r = r

    def _rank_mask(self, mask: int) -> int:
        return min(bin(mask).count("1"), self.r)

    def to_json(self) -> dict:
        return {"kind": "uniform", "r": self.r, "ground": list(self.ground)}


class MinorMatroid(Matroid):
    """M / contract \\ delete with rank r(X u C) - r(C)."""

    def __init__(self, base: Matroid, spec: MinorSpec):
        bad = (spec.contract | spec.delete) - set(base.ground)
        if bad:
            raise MatroidError(f"labels outside ground set: {sorted(bad)}")
        self.base = base
        self.spec = spec
        super().__init__([e for e in base.ground if e not in spec.contract and e not in spec.delete])
        self._cmask = base.mask_of(spec.contract)
        self._crank = base.rank_mask(self._cmask)
        self._basebit = [base._bit[e] for e in self.ground]

    def _rank_mask(self, mask: int) -> int:
        bm = self._cmask
        i = 0
        while mask:
            if mask & 1:
                bm |= self._basebit[i]
            mask >>= 1
            i += 1
        return self.base.rank_mask(bm) - self._crank

    def to_json(self) -> dict:
        return {
            "kind": "minor",
            "base": self.base.to_json(),
            "contract": sorted(self.spec.contract),
            "delete": sorted(self.spec.delete),
        }


class DualMatroid(Matroid):
    """Rank r*(X) = |X| + r(E \\ X) - r(M)."""

    def __init__(self, base: Matroid):
        self.base = base
        super().__init__(base.ground)
        self._full_rank = base.rank_mask(base.full_mask)

    def _rank_mask(self, mask: int) -> int:
        comp = self.base.full_mask & ~mask
        return bin(mask).count("1") + self.base.rank_mask(comp) - self._full_rank

    def to_json(self) -> dict:
        return {"kind": "dual", "base": self.base.to_json()}


class RelaxedMatroid(Matroid):
    """Circuit-hyperplane relaxation: C becomes a basis."""

    def __init__(self, base: Matroid, relaxed):
        self.base = base
        self.relaxed = frozenset(relaxed)
        bad = self.relaxed - set(base.ground)
        if bad:
            raise MatroidError(f"labels outside ground set: {sorted(bad)}")
        super().__init__(base.ground)
        self._rmask = base.mask_of(self.relaxed)

    def _rank_mask(self, mask: int) -> int:
        r = self.base.rank_mask(mask)
        if mask == self._rmask:
            r += 1
        return r

    def to_json(self) -> dict:
        return {"kind": "relaxed", "base": self.base.to_json(), "relaxedSet": sorted(self.relaxed)}


def matroid_from_json(d: dict) -> Matroid:
    kind = d["kind"]
    if kind == "linear":
        return LinearMatroid(Matrix.from_json(d["matrix"]))
    if kind == "uniform":
        return UniformMatroid(d["r"], len(d["ground"]), d["ground"])
    if kind == "minor":
        return MinorMatroid(matroid_from_json(d["base"]),
                            MinorSpec(frozenset(d["contract"]), frozenset(d["delete"])))
    if kind == "dual":
        return DualMatroid(matroid_from_json(d["base"]))
    if kind == "relaxed":
        return RelaxedMatroid(matroid_from_json(d["base"]), frozenset(d["relaxedSet"]))
    raise MatroidError(f"unknown matroid kind {kind!r}")


# --- operations ----------------------------------------------------------


def greedy_independent(M: Matroid, X) -> list:
    """Maximal independent subset of X, greedy in label order."""
    out: list = []
    mask = 0
    r = 0
    for e in sorted(X):
        b = M._bit[e]
        if M.rank_mask(mask | b) > r:
            mask |= b
            r += 1
            out.append(e)
    return out


def normalize_spec(M: Matroid, spec: MinorSpec) -> MinorSpec:
    """Equivalent spec with contract independent and delete coindependent.

    Contract is replaced by a greedy maximal independent subset (label
    order); the leftovers move to delete.  Elements of delete are then
    promoted back to contract, greedily, while they raise the rank of
    contract u kept-ground, which restores coindependence of delete.
    """
    C1 = greedy_independent(M, spec.contract)
    keep = [e for e in M.ground if e not in spec.contract and e not in spec.delete]
    base = set(C1) | set(keep)
    r = M.rank(base)
    promoted = []
    rest = sorted((spec.contract - set(C1)) | spec.delete)
    for e in rest:
        if M.rank(base | {e}) > r:
            promoted.append(e)
            base.add(e)
            r += 1
    C = frozenset(C1) | frozenset(promoted)
    D = (spec.contract | spec.delete) - C
    return MinorSpec(C, frozenset(D))


def minor(M: Matroid, spec: MinorSpec) -> Matroid:
    if not spec.contract and not spec.delete:
        return M
    return MinorMatroid(M, spec)


def dual(M: Matroid) -> Matroid:
    if isinstance(M, DualMatroid):
        return M.base
    return DualMatroid(M)


def loops(M: Matroid) -> frozenset:
    return frozenset(e for e in M.ground if M.rank([e]) == 0)


def simplify_epsilon(M: Matroid):
    """(si(M), element -> representative map, epsilon).

    Loops are dropped; each parallel class keeps its lexicographically
    least member.  si(M) is realized as a deletion minor of M.
    """
    lp = loops(M)
    rep: dict = {}
    classes: dict = {}
    for e in M.ground:
        if e in lp:
            continue
        cl = M.closure([e]) - lp
        key = min(cl)
        classes[key] = cl
        rep[e] = key
    deleted = set(lp) | {e for e in M.ground if e not in lp and rep[e] != e}
    si = minor(M, MinorSpec(frozenset(), frozenset(deleted)))
    return si, rep, len(classes)


def flats(M: Matroid, r: int) -> list[frozenset]:
    """All rank-r flats, sorted by their sorted label tuples."""
    if not 0 <= r <= M.rank():
        raise MatroidError(f"rank {r} out of range")
    level = {M.closure_mask(0)}
    for _ in range(r):
        nxt = set()
        for fm in level:
            for e in M.ground:
                b = M._bit[e]
                if not (fm & b):
                    nxt.add(M.closure_mask(fm | b))
        level = nxt
    out = [M.set_of(fm) for fm in level]
    return sorted(out, key=lambda s: tuple(sorted(s)))


def circuits(M: Matroid, max_size: int | None = None) -> list[frozenset]:
    """Minimal dependent sets, by exhaustive enumeration (small ground sets)."""
    top = max_size if max_size is not None else len(M.ground)
    found: list[frozenset] = []
    for size in range(1, top + 1):
        for combo in combinations(M.ground, size):
            S = frozenset(combo)
            if any(c <= S for c in found):
                continue
            if M.rank(S) < size:
                found.append(S)
    return sorted(found, key=lambda s: (len(s), tuple(sorted(s))))


def is_circuit(M: Matroid, C) -> tuple[bool, frozenset | None]:
    """(True, None) when C is a circuit, else (False, witness subset)."""
    C = frozenset(C)
    if M.rank(C) != len(C) - 1:
        return False, C
    for e in sorted(C):
        sub = C - {e}
        if M.rank(sub) != len(sub):
            return False, sub
    return True, None


def longest_line(M: Matroid):
    """(k, witness MinorSpec): k = largest t with a U_{2,t}-minor.

    k is the max over corank-2 flats F of the number of rank-(r-1)
    flats containing F, i.e. the number of points of M/F.
    """
    r = M.rank()
    if r < 2:
        raise MatroidError("rank < 2: no line minors")
    best_k = -1
    best_F = None
    for F in flats(M, r - 2):
        fm = M.mask_of(F)
        seen = set()
        for e in M.ground:
            b = M._bit[e]
            if not (fm & b):
                seen.add(M.closure_mask(fm | b))
        k = len(seen)
        if k > best_k:
            best_k = k
            best_F = F
    basis = greedy_independent(M, best_F)
    spec = MinorSpec(frozenset(basis), frozenset(best_F) - frozenset(basis))
    return best_k, spec


def _count_bases(M: Matroid) -> int:
    r = M.rank()
    return sum(1 for c in combinations(M.ground, r) if M.rank(c) == r)


def _line_profile(M: Matroid):
    """Per-element multiset of sizes of rank-2 flats through it."""
    prof = {e: [] for e in M.ground}
    if M.rank() >= 2:
        for L in flats(M, 2):
            for e in L:
                prof[e].append(len(L))
    return {e: tuple(sorted(v)) for e, v in prof.items()}


def is_isomorphic(M: Matroid, N: Matroid, bound: int | None = None):
    """Exact isomorphism by pruned backtracking; (bool, bijection or None)."""
    if bound is None:
        bound = iso_bound()
    if len(M.ground) > bound or len(N.ground) > bound:
        raise MatroidError(f"isomorphism bound {bound} exceeded")
    if len(M.ground) != len(N.ground) or M.rank() != N.rank():
        return False, None
    n = len(M.ground)
    r = M.rank()
    if n <= 20:
        from math import comb
        if comb(n, r) <= 60000 and _count_bases(M) != _count_bases(N):
            return False, None
    pm = _line_profile(M)
    pn = _line_profile(N)
    if sorted(pm.values()) != sorted(pn.values()):
        return False, None

    gm = list(M.ground)
    gn = list(N.ground)
    assign: list[int] = []  # assign[i] = index into gn for gm[i]

    def consistent(depth: int) -> bool:
        # check every <= r-subset of the assigned prefix containing gm[depth]
        for size in range(1, min(r, depth + 1) + 1):
            for rest in combinations(range(depth), size - 1):
                S = [gm[t] for t in rest] + [gm[depth]]
                T = [gn[assign[t]] for t in rest] + [gn[assign[depth]]]
                if M.rank(S) != N.rank(T):
                    return False
        return True

    used = [False] * n

    def backtrack(depth: int):
        if depth == n:
            return True
        for j in range(n):
            if used[j] or pm[gm[depth]] != pn[gn[j]]:
                continue
            used[j] = True
            assign.append(j)
            if consistent(depth) and backtrack(depth + 1):
                return True
            assign.pop()
            used[j] = False
        return False

    if backtrack(0):
        return True, {gm[i]: gn[assign[i]] for i in range(n)}
    return False, None


def oracle_equal(M: Matroid, N: Matroid) -> bool:
    """Identity-bijection rank equality on all subsets (small grounds)."""
    if M.ground != N.ground:
        return False
    full = M.full_mask
    for mask in range(full + 1):
        if M.rank_mask(mask) != N.rank_mask(mask):
            return False
    return True
