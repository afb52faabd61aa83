"""Scaled-subfield decisions and confinement checks.

A matrix over an extension field F of GF(q) is a scaled GF(q)-matrix
when row and column scalings by elements of F* bring every entry into
GF(q).  The decision propagates scale requirements through the
bipartite support graph: fixing one vertex per component and walking a
spanning tree makes each tree entry exactly 1; the matrix is scalable
iff every non-tree entry then lands in GF(q)*, because all remaining
scale freedom lies in GF(q)*.  A failing non-tree entry closes a cycle
whose alternating entry product is scaling-invariant and outside
GF(q), which is the emitted obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .field import subfield_member
from .geometry import GeometryId, prime_power, verify_geometry
from .matrix import Matrix, standard_form
from .matroid import LinearMatroid, MinorSpec, greedy_independent


class SubfieldError(ValueError):
    pass


@dataclass(frozen=True)
class ScalingCertificate:
    """Either scalings into GF(q), or a cycle obstruction.

    When ok: row_scales/col_scales are nonzero elements whose
    application puts every entry in GF(q).  When not ok: cycle is a
    list of (row, col) positions alternating row-steps and col-steps;
    the alternating product of their entries lies outside GF(q).
    """

    ok: bool
    q: int
    row_scales: dict = dfield(default_factory=dict)
    col_scales: dict = dfield(default_factory=dict)
    cycle: tuple = ()
    cycle_product: int | None = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "q": self.q}
        if self.ok:
            out["rowScales"] = dict(self.row_scales)
            out["colScales"] = dict(self.col_scales)
        else:
            out["cycle"] = [list(pos) for pos in self.cycle]
            out["cycleProduct"] = self.cycle_product
        return out


def _subfield_degree(A: Matrix, q: int) -> int:
    p, m = prime_power(q)
    if p != A.field.p or A.field.k % m != 0:
        raise SubfieldError(f"no subfield of order {q} in GF({A.field.order})")
    return m


def reverify(A: Matrix, cert: ScalingCertificate) -> bool:
    """Dumb re-check of a certificate against the matrix."""
    F = A.field
    m = _subfield_degree(A, cert.q)
    if cert.ok:
        for i, r in enumerate(A.row_labels):
            rs = cert.row_scales.get(r, 1)
            if rs == 0:
                return False
            for j, c in enumerate(A.col_labels):
                cs = cert.col_scales.get(c, 1)
                if cs == 0:
                    return False
                v = F.mul(rs, F.mul(A.entries[i][j], cs))
                if not subfield_member(F, m, v):
                    return False
        return True
    prod = 1
    for t, (r, c) in enumerate(cert.cycle):
        v = A.entry(r, c)
        if v == 0:
            return False
        prod = F.mul(prod, v if t % 2 == 0 else F.inv(v))
    return prod == cert.cycle_product and not subfield_member(F, m, prod)


def scaled_subfield_check(A: Matrix, q: int) -> ScalingCertificate:
    """Sound and complete decision via spanning-tree propagation."""
    F = A.field
    m = _subfield_degree(A, q)

    def in_sub(v: int) -> bool:
        return subfield_member(F, m, v)

    verts = [("r", r) for r in A.row_labels] + [("c", c) for c in A.col_labels]
    adj: dict = {v: [] for v in verts}
    for i, r in enumerate(A.row_labels):
        for j, c in enumerate(A.col_labels):
            v = A.entries[i][j]
            if v:
                adj[("r", r)].append((("c", c), (r, c)))
                adj[("c", c)].append((("r", r), (r, c)))

    scale: dict = {}
    parent: dict = {}
    for root in sorted(verts):
        if root in scale:
            continue
        scale[root] = 1
        parent[root] = None
        stack = [root]
        while stack:
            u = stack.pop()
            for w, pos in sorted(adj[u]):
                entry = A.entry(*pos)
                if w not in scale:
                    # make the scaled entry exactly 1: s_u * entry * s_w = 1
                    scale[w] = F.inv(F.mul(scale[u], entry))
                    parent[w] = (u, pos)
                    stack.append(w)
                elif parent[u] is None or parent[u][1] != pos:
                    val = F.mul(scale[u], F.mul(entry, scale[w]))
                    if not in_sub(val):
                        cycle = _tree_cycle(parent, u, w, pos)
                        prod = _alternating_product(A, cycle)
                        return ScalingCertificate(False, q, cycle=tuple(cycle),
                                                  cycle_product=prod)
    rows = {r: scale[("r", r)] for r in A.row_labels}
    cols = {c: scale[("c", c)] for c in A.col_labels}
    return ScalingCertificate(True, q, row_scales=rows, col_scales=cols)


def _tree_cycle(parent, u, w, closing_pos):
    """Positions along tree paths u->root, w->root, plus the closing edge."""
    def path(v):
        out = []
        while parent[v] is not None:
            pv, pos = parent[v]
            out.append((v, pos))
            v = pv
        return out, v

    pu, ru = path(u)
    pw, rw = path(w)
    assert ru == rw
    upos = [pos for _, pos in pu]
    wpos = [pos for _, pos in pw]
    # strip the common tail (edges shared near the root)
    while upos and wpos and upos[-1] == wpos[-1]:
        upos.pop()
        wpos.pop()
    return [closing_pos] + upos + list(reversed(wpos))


def _alternating_product(A: Matrix, cycle) -> int:
    """Product of entries with alternating +-1 exponents along the cycle.

    The cycle alternates between row and column vertices, so
    consecutive positions share a vertex; orienting exponents by
    parity makes all scale factors cancel.
    """
    F = A.field
    prod = 1
    for t, pos in enumerate(cycle):
        v = A.entry(*pos)
        prod = F.mul(prod, v if t % 2 == 0 else F.inv(v))
    return prod


def scaled_subfield_exhaustive(A: Matrix, q: int) -> bool:
    """Independent oracle: enumerate scalings over coset representatives.

    Membership in GF(q) is invariant under scaling by GF(q)*, so it is
    enough to range each scale over representatives of F*/GF(q)*, with
    one vertex pinned to 1.
    """
    F = A.field
    m = _subfield_degree(A, q)
    members = frozenset(a for a in range(F.order) if subfield_member(F, m, a))
    reps = []
    seen = set()
    for a in range(1, F.order):
        key = frozenset(F.mul(a, u) for u in range(1, F.order) if u in members)
        if key not in seen:
            seen.add(key)
            reps.append(a)

    nr, nc = A.nrows, A.ncols

    def col_feasible(rs, j):
        # column scales are independent once the row scales are fixed
        for c in reps:
            if all(F.mul(rs[i], F.mul(A.entries[i][j], c)) in members
                   for i in range(nr)):
                return True
        return False

    from itertools import product
    for rs_tail in product(reps, repeat=max(nr - 1, 0)):
        rs = (1,) + rs_tail
        if all(col_feasible(rs, j) for j in range(nc)):
            return True
    return False


def pg_subfield_verify(A: Matrix, n: int, q: int) -> bool:
    """Standard-form + scaled-subfield decision for a PG(n-1, q) representation."""
    M = LinearMatroid(A)
    ok, _ = verify_geometry(M, GeometryId("PG", n, q))
    if not ok:
        raise SubfieldError("matrix does not represent PG(n-1,q)")
    basis = greedy_independent(M, M.ground)
    std = standard_form(A, basis)
    return scaled_subfield_check(std, q).ok


def confinement_check(A: Matrix, embedding: MinorSpec, q: int) -> bool:
    """Single-instance confinement condition.

    A is a standard-form representation of M extending a representation
    of the minor N named by `embedding`; requires the induced
    representation of N to have entries in GF(q), then decides whether
    A itself is a scaled GF(q)-matrix.
    """
    F = A.field
    m = _subfield_degree(A, q)
    C = set(embedding.contract)
    D = set(embedding.delete)
    B = [r for r in A.row_labels if r not in C]
    from .matrix import induce_representation
    induced = induce_representation(A, C, D, B)
    for row in induced.entries:
        for v in row:
            if not subfield_member(F, m, v):
                raise SubfieldError("induced representation not over GF(q): "
                                    "'extends' precondition fails")
    return scaled_subfield_check(A, q).ok
