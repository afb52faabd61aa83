"""Dense matrices over a FieldSpec with labelled rows and columns.

Entries are int-encoded field elements.  All operations are pure and
return new matrices.  Pivoting is first-nonzero by row-major scan;
arithmetic is exact so there is no stability concern.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldSpec


class MatrixError(ValueError):
    """Shape/label mismatch or an illegal transformation."""


@dataclass(frozen=True)
class Matrix:
    field: FieldSpec
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != len(self.row_labels):
            raise MatrixError("row count does not match row labels")
        for row in self.entries:
            if len(row) != len(self.col_labels):
                raise MatrixError("column count does not match col labels")
        if len(set(self.row_labels)) != len(self.row_labels):
            raise MatrixError("duplicate row labels")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise MatrixError("duplicate column labels")

    @property
    def nrows(self) -> int:
        return len(self.row_labels)

    @property
    def ncols(self) -> int:
        return len(self.col_labels)

    def col_index(self, label: str) -> int:
        try:
            return self.col_labels.index(label)
        except ValueError:
            raise MatrixError(f"no column {label!r}")

    def row_index(self, label: str) -> int:
        try:
            return self.row_labels.index(label)
        except ValueError:
            raise MatrixError(f"no row {label!r}")

    def entry(self, row: str, col: str) -> int:
        return self.entries[self.row_index(row)][self.col_index(col)]

    def column(self, label: str) -> tuple[int, ...]:
        j = self.col_index(label)
        return tuple(row[j] for row in self.entries)

    def row(self, label: str) -> tuple[int, ...]:
        return self.entries[self.row_index(label)]

    def submatrix(self, rows, cols) -> "Matrix":
        """Submatrix restricted to the given rows and columns."""
        ri = [self.row_index(r) for r in rows]
        ci = [self.col_index(c) for c in cols]
        ents = tuple(tuple(self.entries[i][j] for j in ci) for i in ri)
        return Matrix(self.field, tuple(rows), tuple(cols), ents)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "rowLabels": list(self.row_labels),
            "colLabels": list(self.col_labels),
            "rows": [list(r) for r in self.entries],
        }

    @staticmethod
    def from_json(d: dict) -> "Matrix":
        F = FieldSpec.from_json(d["field"])
        cols = tuple(d["colLabels"])
        rows = d.get("rowLabels")
        if rows is None:
            rows = [f"r{i}" for i in range(len(d["rows"]))]
        return Matrix(F, tuple(rows), cols, tuple(tuple(r) for r in d["rows"]))


def from_columns(field: FieldSpec, cols: dict[str, tuple[int, ...]],
                 col_order: list[str], row_labels: list[str] | None = None) -> Matrix:
    n = len(cols[col_order[0]])
    if row_labels is None:
        row_labels = [f"r{i}" for i in range(n)]
    ents = tuple(tuple(cols[c][i] for c in col_order) for i in range(n))
    return Matrix(field, tuple(row_labels), tuple(col_order), ents)


def _gauss(field: FieldSpec, grid: list[list[int]], pivot_cols: list[int] | None = None):
    """In-place Gauss-Jordan.  Returns list of (row, col) pivots.

    If pivot_cols is given, pivots are sought in those columns, in that
    order; otherwise columns are scanned left to right.
    """
    F = field
    nrows = len(grid)
    ncols = len(grid[0]) if grid else 0
    pivots: list[tuple[int, int]] = []
    cols = pivot_cols if pivot_cols is not None else list(range(ncols))
    prow = 0
    for c in cols:
        if prow >= nrows:
            break
        src = None
        for i in range(prow, nrows):
            if grid[i][c]:
                src = i
                break
        if src is None:
            continue
        grid[prow], grid[src] = grid[src], grid[prow]
        piv = grid[prow][c]
        if piv != 1:
            s = F.inv(piv)
            grid[prow] = [F.mul(s, v) for v in grid[prow]]
        for i in range(nrows):
            if i != prow and grid[i][c]:
                coef = grid[i][c]
                grid[i] = [F.sub(v, F.mul(coef, w)) for v, w in zip(grid[i], grid[prow])]
        pivots.append((prow, c))
        prow += 1
    return pivots


def rref_rank(A: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form and rank; row space preserved."""
    grid = [list(r) for r in A.entries]
    pivots = _gauss(A.field, grid)
    out = Matrix(A.field, A.row_labels, A.col_labels, tuple(tuple(r) for r in grid))
    return out, len(pivots)


def column_rank(A: Matrix, labels) -> int:
    """Rank of the column set given by labels."""
    idx = [A.col_index(c) for c in labels]
    grid = [[A.entries[i][j] for j in idx] for i in range(A.nrows)]
    return len(_gauss(A.field, grid))


def standard_form(A: Matrix, B) -> Matrix:
    """Row-reduce so that columns B carry an identity block.

    B must be a column basis of A.  Output rows are labelled by B in
    the column order of B; the represented matroid is unchanged.
    """
    B = list(B)
    order = [c for c in A.col_labels if c in set(B)]
    if len(order) != len(B):
        missing = sorted(set(B) - set(A.col_labels))
        raise MatrixError(f"basis labels not among columns: {missing}")
    grid = [list(r) for r in A.entries]
    pivot_cols = [A.col_index(c) for c in order]
    pivots = _gauss(A.field, grid, pivot_cols)
    if len(pivots) != len(order):
        done = {c for _, c in pivots}
        bad = [order[i] for i, c in enumerate(pivot_cols) if c not in done]
        raise MatrixError(f"B is not a basis: column {bad[0]!r} dependent on earlier basis columns")
    # rows below the pivot rows must vanish, else B does not span
    for i in range(len(order), A.nrows):
        if any(grid[i]):
            raise MatrixError("B is not a basis: rank exceeds |B|")
    ents = tuple(tuple(grid[i]) for i in range(len(order)))
    return Matrix(A.field, tuple(order), A.col_labels, ents)


def is_standard_form(A: Matrix, B) -> bool:
    """True when rows are labelled by B and columns B are the identity."""
    B = list(B)
    if set(A.row_labels) != set(B):
        return False
    for b in B:
        col = A.column(b)
        for r, v in zip(A.row_labels, col):
            if v != (1 if r == b else 0):
                return False
    return True


def induce_representation(A: Matrix, C, D, B) -> Matrix:
    """A[B, E minus (C u D)]: the induced representation of M/C\\D.

    A must be in standard form with respect to B u C; C and D disjoint
    from B and from each other.
    """
    C, D, B = set(C), set(D), list(B)
    if C & set(B) or D & (C | set(B)):
        raise MatrixError("C, D, B must be pairwise disjoint")
    if not is_standard_form(A, list(B) + sorted(C)):
        raise MatrixError("matrix not in standard form w.r.t. B u C")
    keep = [c for c in A.col_labels if c not in C and c not in D]
    return A.submatrix(B, keep)


def apply_projective(A: Matrix, row_ops: tuple[tuple[int, ...], ...] | None = None,
                     col_scales: dict[str, int] | None = None) -> Matrix:
    """Row transform (invertible, over the field) then column scaling."""
    F = A.field
    grid = [list(r) for r in A.entries]
    if row_ops is not None:
        n = A.nrows
        if len(row_ops) != n or any(len(r) != n for r in row_ops):
            raise MatrixError("row transform shape mismatch")
        check = [list(r) for r in row_ops]
        if len(_gauss(F, check)) != n:
            raise MatrixError("row transform singular")
        grid = [
            [  # T @ A
                _dot(F, row_ops[i], [grid[t][j] for t in range(n)])
                for j in range(A.ncols)
            ]
            for i in range(n)
        ]
    if col_scales:
        for lab, s in col_scales.items():
            if s == 0:
                raise MatrixError(f"zero scale for column {lab!r}")
            j = A.col_index(lab)
            for row in grid:
                row[j] = F.mul(row[j], s)
    return Matrix(F, A.row_labels, A.col_labels, tuple(tuple(r) for r in grid))


def _dot(F: FieldSpec, u, v) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc
