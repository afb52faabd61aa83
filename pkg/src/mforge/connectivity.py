"""Connectivity: lambda, local connectivity, kappa, Tutte linking sets,
and 3-connectivity testing.

Everything is exact.  kappa and linking_set are straight brute force
over subsets, guarded by a size bound (MFORGE_BOUND, default 22 free
elements).  The 3-connectivity test avoids full subset enumeration:
any 2-separation can be pushed to one whose small side is a flat or is
contained in a rank-<=2 flat, so enumerating those candidates is
exhaustive (see is_3connected).
"""

from __future__ import annotations

import os
from itertools import combinations

from .matroid import Matroid, MatroidError, MinorSpec, flats, loops, minor


def brute_bound() -> int:
    return int(os.environ.get("MFORGE_BOUND", "22"))


def lambda_value(M: Matroid, X) -> int:
    """Connectivity function r(X) + r(E \\ X) - r(M)."""
    mask = M.mask_of(X)
    return M.rank_mask(mask) + M.rank_mask(M.full_mask & ~mask) - M.rank()


def local_conn(M: Matroid, S, T) -> int:
    """Local connectivity r(S) + r(T) - r(S u T); S, T may overlap."""
    sm, tm = M.mask_of(S), M.mask_of(T)
    return M.rank_mask(sm) + M.rank_mask(tm) - M.rank_mask(sm | tm)


def _free_elements(M: Matroid, S, T) -> list:
    S, T = frozenset(S), frozenset(T)
    if S & T:
        raise MatroidError("S and T overlap")
    return sorted(set(M.ground) - S - T)


def kappa(M: Matroid, S, T) -> int:
    """min{ lambda(A) : S subseteq A subseteq E \\ T }, brute force."""
    free = _free_elements(M, S, T)
    if len(free) > brute_bound():
        raise MatroidError(f"brute-force bound exceeded ({len(free)} free elements)")
    sm = M.mask_of(S)
    r = M.rank()
    bits = [M._bit[e] for e in free]
    best = None
    for sub in range(1 << len(bits)):
        am = sm
        s = sub
        i = 0
        while s:
            if s & 1:
                am |= bits[i]
            s >>= 1
            i += 1
        lam = M.rank_mask(am) + M.rank_mask(M.full_mask & ~am) - r
        if best is None or lam < best:
            best = lam
            if best == 0:
                break
    return best


def linking_set(M: Matroid, S, T):
    """Minimal Z attaining Tutte's linking max; returns (Z, value).

    value = kappa(S, T); Z is the first subset in (size, label) order
    with local_conn in M/Z equal to value, hence inclusion-minimal, and
    it is skew to both S and T.
    """
    free = _free_elements(M, S, T)
    if len(free) > brute_bound():
        raise MatroidError(f"brute-force bound exceeded ({len(free)} free elements)")
    value = kappa(M, S, T)
    for size in range(len(free) + 1):
        for combo in combinations(free, size):
            Z = frozenset(combo)
            Mz = minor(M, MinorSpec(Z, frozenset()))
            if local_conn(Mz, S, T) == value:
                return Z, value
    raise MatroidError("linking search exhausted: Tutte equality violated")


def _two_element_sides(M: Matroid):
    """Candidate small sides of a 2-separation: subsets of rank-<=2 flats."""
    n = len(M.ground)
    r = M.rank()
    seen = set()
    for rk in (1, 2):
        if rk > r:
            continue
        for F in flats(M, rk):
            if len(F) < 2:
                continue
            elems = sorted(F)
            for size in range(2, len(elems) + 1):
                if n - size < 2:
                    continue
                for combo in combinations(elems, size):
                    X = frozenset(combo)
                    if X not in seen:
                        seen.add(X)
                        yield X


def is_3connected(M: Matroid):
    """(bool, violating side or None).

    False when M is disconnected or has a 2-separation (both sides of
    size >= 2, lambda <= 1).  Matroids with a loop or a parallel pair
    are rejected outright, which also settles the tiny cases.  For
    simple M, every 2-separation (X, E-X) can be converted, by moving
    elements of cl(X) - X into X (never raising lambda), into one where
    either X is a flat with both sides >= 2, or E-X lies inside a
    rank-2 flat; those two candidate families are enumerated.
    """
    n = len(M.ground)
    if n > brute_bound():
        raise MatroidError(f"brute-force bound exceeded ({n} elements)")
    if n == 0:
        return True, None
    lp = loops(M)
    if lp and n >= 2:
        e = min(lp)
        other = min(x for x in M.ground if x != e)
        return False, frozenset({e, other})
    # parallel pair?
    for e in M.ground:
        cl = M.closure([e])
        if len(cl - lp) > 1:
            pair = sorted(cl - lp)[:2]
            return False, frozenset(pair)
    r = M.rank()
    # connectivity: separators of a loopless matroid are flats
    for rk in range(1, r):
        for F in flats(M, rk):
            if 1 <= len(F) <= n - 1 and lambda_value(M, F) == 0:
                return False, F
    best = None
    # 2-separations with a flat side
    for rk in range(1, r):
        for F in flats(M, rk):
            if 2 <= len(F) <= n - 2 and lambda_value(M, F) <= 1:
                cand = F
                if best is None or tuple(sorted(cand)) < tuple(sorted(best)):
                    best = cand
    # 2-separations whose small side sits inside a rank-<=2 flat
    for X in _two_element_sides(M):
        if lambda_value(M, X) <= 1:
            if best is None or tuple(sorted(X)) < tuple(sorted(best)):
                best = X
    if best is not None:
        return False, best
    return True, None


def is_3connected_brute(M: Matroid):
    """Reference implementation: full subset enumeration (tests only)."""
    n = len(M.ground)
    if n > 16:
        raise MatroidError("brute 3-connectivity limited to 16 elements")
    if n >= 2:
        lp = loops(M)
        if lp:
            e = min(lp)
            other = min(x for x in M.ground if x != e)
            return False, frozenset({e, other})
        for e in M.ground:
            cl = M.closure([e])
            if len(cl) > 1:
                return False, frozenset(sorted(cl)[:2])
    for mask in range(1, M.full_mask):
        size = bin(mask).count("1")
        lam = lambda_value(M, M.set_of(mask))
        if lam == 0 and 1 <= size <= n - 1:
            return False, M.set_of(mask)
        if lam <= 1 and 2 <= size <= n - 2:
            return False, M.set_of(mask)
    return True, None
