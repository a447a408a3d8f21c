"""Exact sparse linear algebra over the rationals.

Matrices are stored as dicts mapping (row, col) to nonzero Fractions.  Row
reduction runs a fraction-free (Bareiss-style) forward pass on integer-scaled
rows followed by rational back-substitution, so intermediate entries stay
bounded on dense-ish blocks.  Pivoting is deterministic: columns are consumed
left to right and the pivot row is the candidate with the fewest stored
nonzeros, ties broken by lowest row index.

All values are immutable after construction and every operation is a pure
function, so concurrent use on distinct inputs is safe.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional


Vec = dict  # column index -> nonzero Fraction


def _clean(vec: dict) -> Vec:
    return {j: Fraction(v) for j, v in vec.items() if v != 0}


def vec_add_scaled(target: Vec, scale: Fraction, source: Vec) -> None:
    """In-place target += scale * source, dropping zeros."""
    if scale == 0:
        return
    for j, v in source.items():
        w = target.get(j, 0) + scale * v
        if w == 0:
            target.pop(j, None)
        else:
            target[j] = w


class SparseMatrix:
    """Immutable sparse matrix of exact rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[dict] = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (data or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"index ({r},{c}) out of bounds for {rows}x{cols}")
            f = Fraction(v)
            if f != 0:
                clean[(r, c)] = f
        self.data = clean

    @classmethod
    def from_rows(cls, row_vecs: Iterable[dict], cols: int) -> "SparseMatrix":
        row_vecs = list(row_vecs)
        data = {}
        for i, row in enumerate(row_vecs):
            for j, v in row.items():
                data[(i, j)] = v
        return cls(len(row_vecs), cols, data)

    @classmethod
    def from_columns(cls, col_vecs: Iterable[dict], rows: int) -> "SparseMatrix":
        col_vecs = list(col_vecs)
        data = {}
        for j, col in enumerate(col_vecs):
            for i, v in col.items():
                data[(i, j)] = v
        return cls(rows, len(col_vecs), data)

    @classmethod
    def from_dense(cls, entries) -> "SparseMatrix":
        entries = [list(row) for row in entries]
        rows = len(entries)
        cols = len(entries[0]) if entries else 0
        data = {}
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                data[(i, j)] = v
        return cls(rows, cols, data)

    def entry(self, r: int, c: int) -> Fraction:
        return self.data.get((r, c), Fraction(0))

    def row(self, r: int) -> Vec:
        return {c: v for (i, c), v in self.data.items() if i == r}

    def row_list(self) -> list:
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.data.items():
            rows[r][c] = v
        return rows

    def column(self, c: int) -> Vec:
        return {r: v for (r, j), v in self.data.items() if j == c}

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.data.items()}
        )

    def mul_vec(self, vec: Vec) -> Vec:
        """Matrix times sparse column vector."""
        out: Vec = {}
        for (r, c), v in self.data.items():
            x = vec.get(c)
            if x:
                w = out.get(r, 0) + v * x
                if w == 0:
                    out.pop(r, None)
                else:
                    out[r] = w
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matmul")
        rows_of_other = other.row_list()
        data: dict = {}
        for (r, k), v in self.data.items():
            for c, w in rows_of_other[k].items():
                key = (r, c)
                s = data.get(key, 0) + v * w
                if s == 0:
                    data.pop(key, None)
                else:
                    data[key] = s
        return SparseMatrix(self.rows, other.cols, data)

    def scaled(self, a) -> "SparseMatrix":
        a = Fraction(a)
        return SparseMatrix(self.rows, self.cols, {k: a * v for k, v in self.data.items()})

    def add(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in add")
        data = dict(self.data)
        for k, v in other.data.items():
            s = data.get(k, 0) + v
            if s == 0:
                data.pop(k, None)
            else:
                data[k] = s
        return SparseMatrix(self.rows, self.cols, data)

    def is_zero(self) -> bool:
        return not self.data

    def nnz(self) -> int:
        return len(self.data)

    def to_dense(self) -> list:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.data.items():
            out[r][c] = v
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.data.items()))))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.data)})"


def _integerize(row: Vec) -> dict:
    """Scale a rational row to coprime integers (sign preserved)."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    ints = {j: int(v * den) for j, v in row.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, abs(v))
    if g > 1:
        ints = {j: v // g for j, v in ints.items()}
    return ints


def rref(m: SparseMatrix):
    """Reduced row echelon form.

    Returns (reduced matrix, pivot column list, rank).  The output is the
    unique RREF of the row space; pivot columns are strictly increasing.
    """
    # Fraction-free forward pass on integer-scaled rows.
    work = [_integerize(r) for r in m.row_list()]
    work = [r for r in work if r]
    order = list(range(len(work)))  # indices into work, in elimination order
    pivots = []
    piv_rows = []  # positions in `order` of pivot rows, in pivot order
    prev = 1
    next_slot = 0
    for col in range(m.cols):
        cand = None
        cand_key = None
        for slot in range(next_slot, len(order)):
            row = work[order[slot]]
            if col in row:
                key = (len(row), order[slot])
                if cand is None or key < cand_key:
                    cand, cand_key = slot, key
        if cand is None:
            continue
        order[next_slot], order[cand] = order[cand], order[next_slot]
        prow = work[order[next_slot]]
        p = prow[col]
        for slot in range(next_slot + 1, len(order)):
            row = work[order[slot]]
            f = row.pop(col, 0)
            new = {}
            for j, v in row.items():
                w = p * v - f * prow.get(j, 0)
                if w:
                    new[j] = w // prev
            for j, v in prow.items():
                if j not in row and j != col:
                    w = -f * v
                    if w:
                        new[j] = w // prev
            work[order[slot]] = new
        prev = p
        pivots.append(col)
        piv_rows.append(next_slot)
        next_slot += 1

    # Rational back-substitution to reach the reduced form.
    reduced: list = []
    for k in range(len(pivots) - 1, -1, -1):
        row = {j: Fraction(v) for j, v in work[order[piv_rows[k]]].items()}
        p = row[pivots[k]]
        row = {j: v / p for j, v in row.items()}
        for idx, later in enumerate(reduced):
            c = row.pop(pivots[len(pivots) - 1 - idx], 0)
            if c:
                vec_add_scaled(row, -c, later)
                row.pop(pivots[len(pivots) - 1 - idx], None)
        reduced.append(row)
    reduced.reverse()
    out = SparseMatrix.from_rows(reduced, m.cols)
    return out, pivots, len(pivots)


def kernel_basis(m: SparseMatrix) -> list:
    """Basis of the right null space, as sparse column vectors.

    One vector per non-pivot column; m.mul_vec(v) == {} for each.
    """
    red, pivots, rank = rref(m)
    pivot_set = set(pivots)
    rows = red.row_list()
    basis = []
    for j in range(m.cols):
        if j in pivot_set:
            continue
        vec: Vec = {j: Fraction(1)}
        for i, piv in enumerate(pivots):
            c = rows[i].get(j)
            if c:
                vec[piv] = -c
        basis.append(vec)
    return basis


def membership(v: Vec, span: SparseMatrix):
    """Express v in the column span of `span`.

    Returns a coefficient vector c (dict col index -> Fraction) with
    span @ c == v exactly, or None if v is not in the span.  Not-in-span is
    a normal outcome, not an error.
    """
    for i in v:
        if not 0 <= i < span.rows:
            raise ValueError(f"vector index {i} incompatible with {span.rows} rows")
    acc = RrefAccumulator(track=True)
    for j in range(span.cols):
        acc.insert(span.column(j), tag=j)
    residual, combo = acc.reduce_with_coeffs(dict(v))
    if residual:
        return None
    coeffs: Vec = {}
    for piv, c in combo.items():
        vec_add_scaled(coeffs, c, acc.expr[piv])
    return coeffs


class RrefAccumulator:
    """Incrementally maintained reduced row echelon basis of a row space.

    Rows are kept mutually reduced with pivot coefficient 1, keyed by pivot
    column, so the stored basis is at all times the unique RREF of the span
    of the inserted vectors.  With track=True every stored row also carries
    its expression as a combination of the inserted vectors (by tag).
    """

    def __init__(self, track: bool = False):
        self.rows: dict = {}  # pivot col -> row vec (row[pivot] == 1)
        self.track = track
        self.expr: dict = {}  # pivot col -> combination of inserted tags

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list:
        return sorted(self.rows)

    def reduce(self, vec: Vec) -> Vec:
        """Residual of vec modulo the current row space (vec not consumed)."""
        vec = dict(vec)
        rows = self.rows
        while True:
            hit = None
            for j in vec:
                if j in rows:
                    hit = j
                    break
            if hit is None:
                return vec
            c = vec.pop(hit)
            vec_add_scaled(vec, -c, rows[hit])
            vec.pop(hit, None)

    def reduce_with_coeffs(self, vec: Vec):
        """Like reduce, also returning {pivot: coefficient} used."""
        vec = dict(vec)
        combo: Vec = {}
        rows = self.rows
        while True:
            hit = None
            for j in vec:
                if j in rows:
                    hit = j
                    break
            if hit is None:
                return vec, combo
            c = vec.pop(hit)
            combo[hit] = combo.get(hit, 0) + c
            vec_add_scaled(vec, -c, rows[hit])
            vec.pop(hit, None)

    def insert(self, vec: Vec, tag=None):
        """Insert a vector; returns its pivot column or None if dependent."""
        vec = {j: Fraction(v) for j, v in vec.items() if v != 0}
        combo: Vec = {}
        rows = self.rows
        while True:
            hit = None
            for j in vec:
                if j in rows:
                    hit = j
                    break
            if hit is None:
                break
            c = vec.pop(hit)
            if self.track:
                combo[hit] = combo.get(hit, 0) + c
            vec_add_scaled(vec, -c, rows[hit])
            vec.pop(hit, None)
        if not vec:
            return None
        piv = min(vec)
        p = vec.pop(piv)
        row = {j: v / p for j, v in vec.items()}
        row[piv] = Fraction(1)
        if self.track:
            # row = (inserted vector - sum combo[t] * row_t) / p
            expr: Vec = {tag: Fraction(1)} if tag is not None else {}
            for t, c in combo.items():
                vec_add_scaled(expr, -c, self.expr[t])
            self.expr[piv] = {j: v / p for j, v in expr.items()}
        # Back-reduce existing rows against the new pivot.
        for other_piv, other in self.rows.items():
            c = other.pop(piv, 0)
            if c:
                vec_add_scaled(other, -c, row)
                other.pop(piv, None)
                if self.track:
                    vec_add_scaled(self.expr[other_piv], -c, self.expr[piv])
        self.rows[piv] = row
        return piv

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    def row_vectors(self) -> list:
        """RREF rows (pivot coefficient reinstated), in pivot order."""
        out = []
        for piv in sorted(self.rows):
            row = dict(self.rows[piv])
            row[piv] = Fraction(1)
            out.append(row)
        return out

    def to_matrix(self, cols: int) -> SparseMatrix:
        return SparseMatrix.from_rows(self.row_vectors(), cols)
