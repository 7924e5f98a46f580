"""Small exact integer linear algebra helpers.

Everything here works over Z with arbitrary-precision ints: unimodular
column reduction for solving and kernels, Bareiss determinants, and a
provenance-tracked sparse elimination used to extract standard-monomial
bases with reduction certificates.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence


class EliminationError(RuntimeError):
    """No unit pivot could be produced; the module is not visibly free."""


def integer_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in matrix]
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def _column_hnf(matrix: Sequence[Sequence[int]]):
    """Unimodular column reduction: returns (H, U) with M @ U == H, U unimodular,
    and H in column echelon form (pivot per processed row, other entries in
    the pivot row zero)."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    h = [list(map(int, row)) for row in matrix]
    u = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_op(dst: int, src: int, q: int):
        for i in range(rows):
            h[i][dst] -= q * h[i][src]
        for i in range(cols):
            u[i][dst] -= q * u[i][src]

    def col_swap(a: int, b: int):
        for i in range(rows):
            h[i][a], h[i][b] = h[i][b], h[i][a]
        for i in range(cols):
            u[i][a], u[i][b] = u[i][b], u[i][a]

    def col_negate(a: int):
        for i in range(rows):
            h[i][a] = -h[i][a]
        for i in range(cols):
            u[i][a] = -u[i][a]

    pivots: list[tuple[int, int]] = []
    c = 0
    for r in range(rows):
        if c >= cols:
            break
        live = [j for j in range(c, cols) if h[r][j] != 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda j: abs(h[r][j]))
            j0 = live[0]
            for j in live[1:]:
                q = h[r][j] // h[r][j0]
                col_op(j, j0, q)
            live = [j for j in live if h[r][j] != 0]
        j0 = live[0]
        if j0 != c:
            col_swap(j0, c)
        if h[r][c] < 0:
            col_negate(c)
        pivots.append((r, c))
        c += 1
    return h, u, pivots


def solve_integer(matrix: Sequence[Sequence[int]],
                  target: Sequence[int]) -> list[int] | None:
    """An integral solution x of M x = t, or None if none exists."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0:
        return [0] * cols
    h, u, pivots = _column_hnf(matrix)
    t = list(map(int, target))
    y = [0] * cols
    pivot_rows = {r: c for r, c in pivots}
    for r in range(rows):
        residual = t[r] - sum(h[r][c] * y[c] for c in range(cols))
        if r in pivot_rows:
            c = pivot_rows[r]
            if residual % h[r][c] != 0:
                return None
            y[c] = residual // h[r][c]
        elif residual != 0:
            return None
    return [sum(u[i][c] * y[c] for c in range(cols)) for i in range(cols)]


def integer_kernel(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """A basis of the integer kernel of M (columns -> combinations)."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0:
        return [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
    h, u, pivots = _column_hnf(matrix)
    pivot_cols = {c for _, c in pivots}
    out = []
    for c in range(cols):
        if c in pivot_cols:
            continue
        if any(h[r][c] != 0 for r in range(rows)):
            continue
        out.append([u[i][c] for i in range(cols)])
    return out


def is_surjective_over_z(matrix: Sequence[Sequence[int]]) -> bool:
    """Whether M: Z^cols -> Z^rows is onto."""
    rows = len(matrix)
    for r in range(rows):
        target = [1 if i == r else 0 for i in range(rows)]
        if solve_integer(matrix, target) is None:
            return False
    return True


class SparseRow:
    """A sparse integer row with provenance back to the generating rows."""

    __slots__ = ("cols", "prov")

    def __init__(self, cols: Mapping[Hashable, int], prov: Mapping[Hashable, int]):
        self.cols = {c: v for c, v in cols.items() if v != 0}
        self.prov = {t: v for t, v in prov.items() if v != 0}

    def axpy(self, k: int, other: "SparseRow"):
        """self -= k * other, in place."""
        if k == 0:
            return
        for c, v in other.cols.items():
            nv = self.cols.get(c, 0) - k * v
            if nv:
                self.cols[c] = nv
            else:
                self.cols.pop(c, None)
        for t, v in other.prov.items():
            nv = self.prov.get(t, 0) - k * v
            if nv:
                self.prov[t] = nv
            else:
                self.prov.pop(t, None)

    def negate(self):
        self.cols = {c: -v for c, v in self.cols.items()}
        self.prov = {t: -v for t, v in self.prov.items()}


class UnitElimination:
    """Incremental sparse Gauss elimination demanding unit pivots.

    Feed rows (each the expansion of a known relation, tagged for
    provenance); the eliminator maintains a pivot row per eliminated column.
    Afterwards ``expand`` rewrites any pivot column as an integer
    combination of the surviving (basis) columns together with the exact
    provenance certificate, i.e. which relation multiples produced it.
    """

    def __init__(self, column_order: Mapping[Hashable, int]):
        self.column_order = dict(column_order)
        self.pivots: dict[Hashable, SparseRow] = {}
        self._stuck: list[SparseRow] = []
        self._expansion_cache: dict[Hashable, tuple[dict, dict]] = {}

    def _reduce(self, row: SparseRow):
        # Repeatedly clear any entry sitting on a pivot column.
        while True:
            hit = None
            for c in row.cols:
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                return
            row.axpy(row.cols[hit], self.pivots[hit])

    def _install(self, row: SparseRow) -> bool:
        units = [c for c, v in row.cols.items() if v in (1, -1)]
        if not units:
            return False
        pivot = min(units, key=lambda c: self.column_order[c])
        if row.cols[pivot] == -1:
            row.negate()
        self.pivots[pivot] = row
        return True

    def add_rows(self, rows: Iterable[tuple[Mapping, Hashable]]):
        for cols, tag in rows:
            row = SparseRow(cols, {tag: 1})
            self._reduce(row)
            if not row.cols:
                continue
            if not self._install(row):
                self._stuck.append(row)
        # Retry stuck rows; new pivots may unblock them, and pairs of stuck
        # rows may combine to produce a unit via Euclid on a shared column.
        progress = True
        while progress and self._stuck:
            progress = False
            remaining = []
            for row in self._stuck:
                self._reduce(row)
                if not row.cols:
                    progress = True
                    continue
                if self._install(row):
                    progress = True
                else:
                    remaining.append(row)
            self._stuck = remaining
            if not progress and len(self._stuck) > 1:
                progress = self._euclid_pass()
        if self._stuck:
            raise EliminationError(
                "no unit pivot available for "
                f"{len(self._stuck)} residual rows; module not visibly free"
            )

    def _euclid_pass(self) -> bool:
        for idx in range(len(self._stuck)):
            for jdx in range(len(self._stuck)):
                if idx == jdx:
                    continue
                a, b = self._stuck[idx], self._stuck[jdx]
                shared = set(a.cols) & set(b.cols)
                for c in shared:
                    va, vb = a.cols[c], b.cols[c]
                    if vb != 0 and abs(va) >= abs(vb):
                        a.axpy(va // vb, b)
                        return True
        return False

    def basis_columns(self) -> list:
        cols = [c for c in self.column_order if c not in self.pivots]
        cols.sort(key=lambda c: self.column_order[c])
        return cols

    def expand(self, column) -> tuple[dict, dict]:
        """(basis_combination, provenance) with
        column == sum basis_combination - ... satisfying:
        column - sum(basis_combination[b] * b) == sum(provenance[t] * row_t)
        as exact integer identities."""
        if column not in self.pivots:
            return ({column: 1}, {})
        if column in self._expansion_cache:
            return self._expansion_cache[column]
        row = self.pivots[column]
        basis: dict = {}
        prov = dict(row.prov)
        for c, v in row.cols.items():
            if c == column:
                continue
            sub_basis, sub_prov = self.expand(c)
            for b, w in sub_basis.items():
                basis[b] = basis.get(b, 0) - v * w
            for t, w in sub_prov.items():
                prov[t] = prov.get(t, 0) - v * w
        basis = {b: w for b, w in basis.items() if w}
        prov = {t: w for t, w in prov.items() if w}
        self._expansion_cache[column] = (basis, prov)
        return basis, prov
