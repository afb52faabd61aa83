"""Long-line witness extraction: replay the constructive argument that
turns a non-scalable extension of a projective geometry into a verified
U_{2,q^2+1}-minor.

The pipeline runs in named stages; every stage re-verifies its defining
property before the next one starts, and failures raise PipelineError
carrying the stage tag and the partial trace.  All free choices are
resolved lexicographically by label order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from itertools import combinations, product

from .connectivity import is_3connected, kappa, linking_set, local_conn
from .field import subfield_member
from .geometry import GeometryId, canonical, pg_vectors, point_label, verify_geometry
from .matrix import Matrix, is_standard_form, standard_form
from .matroid import (LinearMatroid, Matroid, MinorSpec, flats,
                      greedy_independent, longest_line, minor, normalize_spec,
                      oracle_equal, simplify_epsilon)
from .subfield import scaled_subfield_check


class PipelineError(RuntimeError):
    """Stage-tagged failure with the partial trace attached."""

    def __init__(self, stage: str, message: str, trace=None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.trace = trace


@dataclass
class WitnessTrace:
    """Intermediate state of the witness pipeline, stage by stage."""

    x: str
    y: str | None = None
    pair: tuple | None = None          # (f, g)
    omega: int | None = None
    hyperplane: frozenset | None = None
    z: str | None = None
    cocircuit: frozenset | None = None
    coloring: dict = dfield(default_factory=dict)
    mono_set: frozenset | None = None  # Y
    beta: int | None = None
    linking: frozenset | None = None   # Z
    u: dict = dfield(default_factory=dict)
    bordered: Matrix | None = None     # D
    alpha: tuple | None = None
    alpha_prime: tuple | None = None
    bad_lines: tuple = ()
    avoiding: str | None = None        # e
    minor_spec: MinorSpec | None = None

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "pair": list(self.pair) if self.pair else None,
            "omega": self.omega,
            "hyperplane": sorted(self.hyperplane) if self.hyperplane else None,
            "z": self.z,
            "cocircuit": sorted(self.cocircuit) if self.cocircuit else None,
            "coloring": dict(self.coloring),
            "monoSet": sorted(self.mono_set) if self.mono_set else None,
            "beta": self.beta,
            "linking": sorted(self.linking) if self.linking is not None else None,
            "u": dict(self.u),
            "bordered": self.bordered.to_json() if self.bordered else None,
            "alpha": list(self.alpha) if self.alpha else None,
            "alphaPrime": list(self.alpha_prime) if self.alpha_prime else None,
            "badLines": [sorted(L) for L in self.bad_lines],
            "avoiding": self.avoiding,
            "minorSpec": self.minor_spec.to_json() if self.minor_spec else None,
        }


def _is_simple(M: Matroid) -> bool:
    return all(M.rank([e]) == 1 and len(M.closure([e])) == 1 for e in M.ground)


def line_from_pg_extension(P: Matroid, e: str, q: int) -> MinorSpec:
    """Contract e off a single-point extension of PG(2,q); the parallel
    classes of P/e form a line with at least q^2+1 points."""
    if not _is_simple(P):
        raise PipelineError("claim41", "P not simple")
    if P.rank() != 3:
        raise PipelineError("claim41", f"P has rank {P.rank()}, expected 3")
    rest = minor(P, MinorSpec(frozenset(), frozenset([e])))
    ok, _ = verify_geometry(rest, GeometryId("PG", 3, q))
    if not ok:
        raise PipelineError("claim41", "P minus e is not PG(2,q)")
    Pe = minor(P, MinorSpec(frozenset([e]), frozenset()))
    _, rep, k = simplify_epsilon(Pe)
    if k < q * q + 1:
        raise PipelineError("claim41",
                            f"only {k} parallel classes; broken precondition")
    reps = sorted({rep[t] for t in Pe.ground if t in rep})
    spec = MinorSpec(frozenset([e]), frozenset(P.ground) - {e} - set(reps))
    got, _ = longest_line(minor(P, spec))
    if got != k:
        raise PipelineError("claim41", "witness failed longest-line re-check")
    return spec


def nonsubfield_pair(A: Matrix, x: str, q: int, Mp: Matroid) -> tuple[str, str]:
    """Lexicographically least (f, g) with nonzero x-row entries whose
    ratio leaves GF(q) and with {f, g} independent in Mp/x."""
    B = [r for r in A.row_labels if r != x]
    if not is_standard_form(A, B + [x]):
        raise PipelineError("pair", "matrix not in standard form w.r.t. B u {x}")
    F = A.field
    m = _subdeg(F, q)
    for b in B:
        for c in A.col_labels:
            if c != x and not subfield_member(F, m, A.entry(b, c)):
                raise PipelineError("pair", "induced rows not over GF(q)")
    if scaled_subfield_check(A, q).ok:
        raise PipelineError("pair", "A is a scaled GF(q)-matrix: nothing to extract")
    M1 = minor(Mp, MinorSpec(frozenset([x]), frozenset()))
    xrow = {c: A.entry(x, c) for c in A.col_labels if c != x}
    cands = sorted(c for c, v in xrow.items() if v)
    for f, g in combinations(cands, 2):
        if subfield_member(F, m, F.div(xrow[g], xrow[f])):
            continue
        if M1.rank([f, g]) == 2:
            return f, g
    # diagnose which hypothesis failed
    if len(cands) == 1:
        f = cands[0]
        partners = sorted(M1.closure([f]) - {f})
        if partners:
            y0 = partners[0]
            from .connectivity import lambda_value
            lam = lambda_value(Mp, [f, x, y0])
            raise PipelineError(
                "pair",
                f"single nonzero entry {f} with parallel partner {y0}: "
                f"lambda({{f,x,y}}) = {lam}, contradicting 3-connectivity")
        raise PipelineError("pair", "single nonzero x-row entry and no pair")
    raise PipelineError("pair", "no qualifying pair: hypotheses of the pair "
                                "claim are violated")


def _subdeg(F, q: int) -> int:
    from .geometry import prime_power
    p, m = prime_power(q)
    if p != F.p or F.k % m != 0:
        raise PipelineError("pair", f"no subfield of order {q}")
    return m


# --- affine subgeometry enumeration ---------------------------------------


def _affine_flats(q: int, dim_space: int, dim_flat: int, F):
    """All dim_flat-dimensional affine flats of GF(q)^dim_space,
    as sorted tuples of coordinate vectors, in lexicographic order."""
    vectors = list(product(range(q), repeat=dim_space))

    def add(u, v):
        return tuple(F.add(a, b) for a, b in zip(u, v))

    def span(basis):
        pts = {tuple([0] * dim_space)}
        for b in basis:
            new = set()
            for c in range(1, q):
                cb = tuple(F.mul(c, t) for t in b)
                for p0 in pts:
                    new.add(add(p0, cb))
            pts |= new
        return frozenset(pts)

    def indep(vs):
        # rank over GF(q) by elimination
        grid = [list(v) for v in vs]
        from .matrix import _gauss
        return len(_gauss(F, grid)) == len(vs)

    subspaces = set()
    nonzero = [v for v in vectors if any(v)]
    for basis in combinations(nonzero, dim_flat):
        if indep(basis):
            subspaces.add(span(basis))
    if dim_flat == 0:
        subspaces = {frozenset({tuple([0] * dim_space)})}
    out = set()
    for S in subspaces:
        seen = set()
        for v in vectors:
            if v in seen:
                continue
            coset = frozenset(add(v, s) for s in S)
            seen |= coset
            out.add(tuple(sorted(coset)))
    return sorted(out)


def monochromatic_ag(G: Matroid, coloring: dict, k: int, q: int):
    """First monochromatic rank-k affine subgeometry restriction of G,
    or None.  G must be isomorphic to ag(n, q) for some n >= k."""
    n = G.rank()
    ok, bij = verify_geometry(G, GeometryId("AG", n, q))
    if not ok:
        raise PipelineError("mono", "G is not an affine geometry")
    if k > n:
        raise PipelineError("mono", f"target rank {k} exceeds rank {n}")
    F = canonical(GeometryId("AG", n, q)).matrix.field
    inv = {v: e for e, v in bij.items()}

    def coords(label: str):
        return tuple(int(ch) for ch in label[1:])

    label_of = {coords(lab): lab for lab in inv}
    for flat in _affine_flats(q, n - 1, k - 1, F):
        pts = [inv[label_of[v]] for v in flat]
        colors = {coloring[p] for p in pts}
        if len(colors) == 1:
            return frozenset(pts)
    return None


# --- the main pipeline ------------------------------------------------------


def extract_long_line(Mp: Matroid, x: str, y: str | None, A: Matrix,
                      n_embedding: MinorSpec, q: int):
    """Run the full witness pipeline; returns (MinorSpec, WitnessTrace)."""
    trace = WitnessTrace(x=x, y=y)
    F = A.field
    m = _subdeg(F, q)
    ok3, viol = is_3connected(Mp)
    if not ok3:
        raise PipelineError("pre", f"input not 3-connected: {sorted(viol)}", trace)
    N = minor(Mp, n_embedding)
    nN = N.rank()
    okN, _ = verify_geometry(N, GeometryId("PG", nN, q))
    if not okN:
        raise PipelineError("pre", "named minor is not PG(n-1,q)", trace)
    B = [r for r in A.row_labels if r != x]

    # stage 1: the non-subfield pair, scaled so the entries are 1 and omega
    f, g = nonsubfield_pair(A, x, q, Mp)
    s = F.inv(A.entry(x, f))
    xi = A.row_index(x)
    ents = [list(r) for r in A.entries]
    ents[xi] = [F.mul(s, v) for v in ents[xi]]
    jx = A.col_index(x)
    for row in ents:
        row[jx] = F.mul(row[jx], F.inv(s))
    A1 = Matrix(F, A.row_labels, A.col_labels, tuple(tuple(r) for r in ents))
    omega = A1.entry(x, g)
    trace.pair = (f, g)
    trace.omega = omega

    # stage 2: hyperplane through {f, g}, element z outside it
    M1 = minor(Mp, MinorSpec(frozenset([x]), frozenset()))
    H = None
    for Fl in flats(M1, M1.rank() - 1):
        if f in Fl and g in Fl:
            H = Fl
            break
    if H is None:
        raise PipelineError("hyperplane", "no hyperplane contains the pair", trace)
    C = frozenset(M1.ground) - H
    z = min(C)
    trace.hyperplane = H
    trace.z = z
    trace.cocircuit = C

    # stage 3: re-standardize to {z} u basis(H), keep non-x rows over GF(q)
    zbasis = greedy_independent(M1, H)
    B1 = [z] + zbasis
    RB = A1.submatrix(B, A1.col_labels)
    stdRB = standard_form(RB, B1)
    for row in stdRB.entries:
        for v in row:
            if not subfield_member(F, m, v):
                raise PipelineError("restd", "non-x rows left GF(q)", trace)
    xrow = list(A1.row(x))
    for b in B1:
        coef = xrow[A1.col_index(b)]
        if coef:
            brow = stdRB.row(b)
            xrow = [F.sub(v, F.mul(coef, w)) for v, w in zip(xrow, brow)]
    grid = [list(r) for r in stdRB.entries] + [xrow]
    zpos = stdRB.row_index(z)
    for e in A1.col_labels:
        j = A1.col_index(e)
        zv = grid[zpos][j]
        if e in C and zv == 0:
            raise PipelineError("restd", f"z-row vanishes on cocircuit element {e}", trace)
        if e not in C and e != z and e in N.ground and zv != 0:
            raise PipelineError("restd", f"z-row nonzero on hyperplane element {e}", trace)
        if zv not in (0, 1):
            sc = F.inv(zv)
            for row in grid:
                row[j] = F.mul(row[j], sc)
    Ap = Matrix(F, tuple(stdRB.row_labels) + (x,), A1.col_labels,
                tuple(tuple(r) for r in grid))

    colors = {e: Ap.entry(x, e) for e in sorted(C)}
    trace.coloring = dict(colors)

    # stage 3 shortcut: enough pairwise non-parallel columns in rows {x, z}
    distinct = sorted(set(colors.values()))
    if len(distinct) >= q * q + 1:
        reps = []
        for val in distinct[: q * q + 1]:
            reps.append(min(e for e, v in colors.items() if v == val))
        contract = frozenset(B1) - {z}
        spec = normalize_spec(Mp, MinorSpec(
            contract, frozenset(Mp.ground) - contract - set(reps)))
        got, _ = longest_line(minor(Mp, spec))
        if got < q * q + 1:
            raise PipelineError("shortcut", "line re-check failed", trace)
        trace.minor_spec = spec
        return spec, trace

    if len(distinct) > q * q:
        raise PipelineError("color", "more than q^2 colours without shortcut", trace)

    # stage 4: monochromatic affine subgeometry inside the cocircuit
    Cag = C - ({y} if y else set())
    G = minor(M1, MinorSpec(frozenset(), frozenset(M1.ground) - Cag))
    Y = monochromatic_ag(G, colors, 4, q)
    if Y is None:
        raise PipelineError("NoMonochromaticAG",
                            "bounded search found no monochromatic AG(3,q)", trace)
    beta = colors[min(Y)]
    trace.mono_set = Y
    trace.beta = beta

    # stage 5: Tutte linking between the pair and Y
    kap = kappa(M1, [f, g], Y)
    if kap < 2:
        raise PipelineError("NoLinkingValue",
                            f"kappa = {kap} < 2 contradicts 3-connectivity", trace)
    Z, val = linking_set(M1, [f, g], Y)
    if local_conn(M1, Z, [f, g]) != 0 or local_conn(M1, Z, Y) != 0:
        raise PipelineError("linking", "linking set not skew to both sides", trace)
    trace.linking = Z

    # stage 6: bordered matrix D over basis containing Z and a basis of Y
    B2: list = []
    mask = 0
    r_so_far = 0
    for pool in (sorted(Z), sorted(Y), list(M1.ground)):
        for e in pool:
            if e in B2:
                continue
            b = M1._bit[e]
            if M1.rank_mask(mask | b) > r_so_far:
                B2.append(e)
                mask |= b
                r_so_far += 1
    if not set(Z) <= set(B2):
        raise PipelineError("border", "linking set not independent", trace)
    nonx = [r for r in Ap.row_labels if r != x]
    A2rows = standard_form(Ap.submatrix(nonx, Ap.col_labels), B2)
    uvec = {e: F.mul(F.neg(beta), Ap.entry(z, e)) for e in Ap.col_labels}
    if uvec[f] != 0 or uvec[g] != 0:
        raise PipelineError("border", "u does not vanish on the pair", trace)
    ycols = sorted(Y)
    dcols = ycols + [f, g]
    # x-row after the u-translation, cleared at the basis columns so that
    # dropping the B2 - Y rows and columns is a genuine contraction
    dxfull = [F.add(Ap.entry(x, e), uvec[e]) for e in A2rows.col_labels]
    for b in B2:
        coef = dxfull[A2rows.col_index(b)]
        if coef:
            brow = A2rows.row(b)
            dxfull = [F.sub(v, F.mul(coef, w)) for v, w in zip(dxfull, brow)]
    dx = [dxfull[A2rows.col_index(e)] for e in dcols]
    if any(dx[i] for i in range(len(ycols))):
        raise PipelineError("border", "x-row of D nonzero on Y", trace)
    if dx[-2] != 1 or dx[-1] != omega:
        raise PipelineError("border", "x-row of D is not (0 .. 0, 1, omega)", trace)
    B2Y = sorted(set(B2) & Y)
    drows = [tuple(dx)] + [tuple(A2rows.entry(b, e) for e in dcols) for b in B2Y]
    D = Matrix(F, tuple([x] + B2Y), tuple(dcols), tuple(drows))
    D1 = D.submatrix(B2Y, ycols)
    alpha = tuple(D.entry(b, f) for b in B2Y)
    alpha_p = tuple(D.entry(b, g) for b in B2Y)
    for v in alpha + alpha_p + tuple(t for row in D1.entries for t in row):
        if not subfield_member(F, m, v):
            raise PipelineError("border", "D blocks not over GF(q)", trace)
    if not any(alpha) or not any(alpha_p):
        raise PipelineError("border", "alpha or alpha' zero", trace)
    if _parallel(F, alpha, alpha_p):
        raise PipelineError("border", "alpha parallel to alpha'", trace)
    okD1, _ = verify_geometry(LinearMatroid(D1), GeometryId("AG", 4, q))
    if not okD1:
        raise PipelineError("border", "D1 is not an AG(3,q) representation", trace)
    contract6 = frozenset(B2) - Y
    spec6 = MinorSpec(contract6,
                      frozenset(Mp.ground) - contract6 - Y - {f, g})
    M2pp = minor(Mp, spec6)
    if not oracle_equal(LinearMatroid(D), M2pp):
        raise PipelineError("border", "D disagrees with the contracted minor", trace)
    trace.bordered = D
    trace.alpha = alpha
    trace.alpha_prime = alpha_p
    trace.u = {e: uvec[e] for e in dcols}

    # stage 7: contract f; find e avoiding the (at most one) bad line
    M2 = minor(M2pp, MinorSpec(frozenset([f]), frozenset()))
    gcol = tuple(F.sub(a2, F.mul(omega, a1)) for a1, a2 in zip(alpha, alpha_p))
    for c in range(1, F.order):
        if all(subfield_member(F, m, F.mul(c, v)) for v in gcol):
            raise PipelineError("badline", "contracted g-column parallel to a "
                                           "GF(q) vector", trace)
    M3 = minor(M2, MinorSpec(frozenset(), frozenset([g])))
    okM3, _ = verify_geometry(M3, GeometryId("AG", 4, q))
    if not okM3:
        raise PipelineError("badline", "M''/f minus g is not AG(3,q)", trace)
    bad = [L for L in flats(M3, 2)
           if M2.rank(set(L) | {g}) == M2.rank(L)]
    if len(bad) > 1:
        raise PipelineError("badline", f"{len(bad)} bad lines, expected at most one",
                            trace)
    trace.bad_lines = tuple(bad)
    banned = set().union(*bad) if bad else set()
    e_pick = None
    for cand in M3.ground:
        if cand in banned:
            continue
        if M2.closure([cand, g]) == {cand, g}:
            e_pick = cand
            break
    if e_pick is None:
        raise PipelineError("NoAvoidingElement", "every element sits on a line "
                                                 "through g", trace)
    trace.avoiding = e_pick

    # stage 8: single-point extension of PG(2,q), then the long line
    Pfull = minor(M2pp, MinorSpec(frozenset([f, e_pick]), frozenset()))
    P, rep, _ = simplify_epsilon(Pfull)
    partners = [h for h in Pfull.ground if h != g and rep.get(h) == g]
    if rep.get(g) != g or partners:
        raise PipelineError("claim41", "g fell into a parallel pair", trace)
    spec41 = line_from_pg_extension(P, g, q)
    kept = set(P.ground) - set(spec41.contract) - set(spec41.delete)
    contract = set(contract6) | {f, e_pick, g}
    final = normalize_spec(Mp, MinorSpec(
        frozenset(contract), frozenset(Mp.ground) - contract - kept))
    got, _ = longest_line(minor(Mp, final))
    if got < q * q + 1:
        raise PipelineError("final", "longest-line re-check failed", trace)
    trace.minor_spec = final
    return final, trace


def _parallel(F, u, v) -> bool:
    for c in range(1, F.order):
        if all(F.mul(c, a) == b for a, b in zip(u, v)):
            return True
    return False


# --- shipped fixture --------------------------------------------------------


def proof_replay_fixture():
    """Deterministic rank-5 GF(4) instance for the full pipeline.

    Ground set: the 15 points of PG(3,2) plus an extra element x.  The
    non-x rows carry the canonical PG(3,2) matrix; the x-row is zero
    except at one pair (f, g) where it is (1, omega), chosen
    lexicographically least such that neither lands in the greedy basis
    used at the re-standardization stage (which keeps the cocircuit
    coloring constant).  Returns (Mp, x, A, n_embedding, q).
    """
    from .field import field_make
    F4 = field_make(2, 2)
    vecs = pg_vectors(4, 2)
    labels = [point_label(v) for v in vecs]
    unit = {lab: lab.count("1") == 1 for lab in labels}
    Bl = [lab for lab in labels if unit[lab]]
    Bl = sorted(Bl, key=lambda lab: lab.index("1"))  # row i has 1 in coord i

    def build(f: str, g: str) -> Matrix:
        cols = {}
        for lab, v in zip(labels, vecs):
            xval = 1 if lab == f else (2 if lab == g else 0)
            cols[lab] = tuple(v) + (xval,)
        cols["x"] = (0, 0, 0, 0, 1)
        order = labels + ["x"]
        rows = tuple(tuple(cols[c][i] for c in order) for i in range(5))
        return Matrix(F4, tuple(Bl + ["x"]), tuple(order), rows)

    nonunit = [lab for lab in labels if not unit[lab]]
    for f, g in combinations(nonunit, 2):
        A = build(f, g)
        Mp = LinearMatroid(A)
        M1 = minor(Mp, MinorSpec(frozenset(["x"]), frozenset()))
        H = None
        for Fl in flats(M1, 3):
            if f in Fl and g in Fl:
                H = Fl
                break
        B1 = {min(frozenset(M1.ground) - H)} | set(greedy_independent(M1, H))
        if f in B1 or g in B1:
            continue
        return Mp, "x", A, MinorSpec(frozenset(["x"]), frozenset()), 2
    raise RuntimeError("fixture search failed")
