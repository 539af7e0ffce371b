"""Exact integer/rational helpers: 2-adic valuations and Smith normal form.

Python ``int`` is the arbitrary-precision integer and
:class:`fractions.Fraction` the reduced rational (positive denominator,
zero is ``0/1``).  Integer matrices are stored column-sparse in
:class:`IntMatrix` because bar-resolution boundaries are huge and sparse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class ZeroValuationError(ValueError):
    """Raised when the 2-adic valuation of zero is requested."""


def _nu2_int(n: int) -> int:
    n = abs(n)
    return (n & -n).bit_length() - 1


def nu2(x: int | Fraction) -> int:
    """2-adic valuation of a nonzero rational.

    >>> nu2(12), nu2(Fraction(-9, 8)), nu2(Fraction(211, 128))
    (2, -3, -7)
    """
    x = Fraction(x)
    if x == 0:
        raise ZeroValuationError("nu2 is undefined for 0")
    return _nu2_int(x.numerator) - _nu2_int(x.denominator)


def digit_sum_2(n: int) -> int:
    """Sum of the binary digits of ``n``."""
    if n < 0:
        raise ValueError("digit_sum_2 needs n >= 0")
    return bin(n).count("1")


def nu2_factorial(n: int) -> int:
    """Exponent of 2 in ``n!`` via Legendre: ``n - s_2(n)``."""
    if n < 0:
        raise ValueError("nu2_factorial needs n >= 0")
    return n - digit_sum_2(n)


@dataclass(frozen=True)
class IntMatrix:
    """Column-sparse integer matrix.

    ``columns[j]`` maps row index to the nonzero entry in column ``j``.
    """

    rows: int
    cols: int
    columns: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise ValueError("column count does not match cols")
        for col in self.columns:
            for i, v in col.items():
                if not 0 <= i < self.rows:
                    raise ValueError(f"row index {i} out of range")
                if v == 0:
                    raise ValueError("explicit zero stored in sparse column")

    @classmethod
    def from_dense(cls, grid: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = len(grid)
        if cols is None:
            cols = len(grid[0]) if rows else 0
        if any(len(r) != cols for r in grid):
            raise ValueError("ragged matrix")
        columns = tuple(
            {i: int(grid[i][j]) for i in range(rows) if grid[i][j]} for j in range(cols)
        )
        return cls(rows, cols, columns)

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[dict]) -> "IntMatrix":
        columns = tuple({i: v for i, v in c.items() if v} for c in columns)
        return cls(rows, len(columns), columns)

    def to_dense(self) -> list[list[int]]:
        grid = [[0] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                grid[i][j] = v
        return grid

    def transpose(self) -> "IntMatrix":
        cols: list[dict] = [{} for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                cols[i][j] = v
        return IntMatrix(self.cols, self.rows, tuple(cols))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for col in other.columns:
            acc: dict[int, int] = {}
            for k, b in col.items():
                for i, a in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            out.append({i: v for i, v in acc.items() if v})
        return IntMatrix(self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.columns)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)


@dataclass(frozen=True)
class SNFResult:
    """Elementary divisors ``d1 | d2 | ...``; zeros trail, ``len == min(rows, cols)``."""

    diagonal: tuple
    rank: int

    @property
    def torsion(self) -> tuple:
        return tuple(d for d in self.diagonal if d > 1)


def _as_matrix(m) -> IntMatrix:
    if isinstance(m, IntMatrix):
        return m
    return IntMatrix.from_dense([list(r) for r in m])


def _eliminate_units(m: IntMatrix) -> tuple[int, dict[int, dict[int, int]]]:
    """Pivot away every +-1 entry reachable by sparse elimination.

    Returns the number of unit pivots and the remaining columns (as
    ``{col: {row: value}}``).  Unit pivots do not change the non-unit
    elementary divisors.
    """
    cols: dict[int, dict[int, int]] = {j: dict(c) for j, c in enumerate(m.columns) if c}
    rows: dict[int, dict[int, int]] = {}
    for j, c in cols.items():
        for i, v in c.items():
            rows.setdefault(i, {})[j] = v

    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(cols, key=lambda j: len(cols[j])):
            col = cols.get(j)
            if not col:
                continue
            best = None
            for i, v in col.items():
                if v == 1 or v == -1:
                    if best is None or len(rows[i]) < len(rows[best]):
                        best = i
            if best is None:
                continue
            pr = rows.pop(best)
            u = pr[j]
            # clear column j using row `best`: row_k -= (a_kj * u) * row_best
            for k, a in list(col.items()):
                if k == best:
                    continue
                f = a * u
                rk = rows[k]
                for jj, b in pr.items():
                    nv = rk.get(jj, 0) - f * b
                    cjj = cols[jj]
                    if nv:
                        rk[jj] = nv
                        cjj[k] = nv
                    else:
                        rk.pop(jj, None)
                        cjj.pop(k, None)
                if not rk:
                    del rows[k]
            # drop pivot row and column
            for jj in pr:
                if jj != j:
                    cjj = cols[jj]
                    cjj.pop(best, None)
                    if not cjj:
                        del cols[jj]
            del cols[j]
            units += 1
            progress = True
    return units, cols


def _dense_snf(a: list[list[int]], track: bool = False):
    """In-place smallest-pivot Smith reduction of a dense grid.

    With ``track`` the unimodular transforms ``U`` and ``V`` with
    ``U @ A @ V == D`` are returned alongside the diagonal.
    """
    nr = len(a)
    nc = len(a[0]) if nr else 0
    U = [[int(i == j) for j in range(nr)] for i in range(nr)] if track else None
    V = [[int(i == j) for j in range(nc)] for i in range(nc)] if track else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if track:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        if track:
            for r in V:
                r[j], r[k] = r[k], r[j]

    def add_row(dst, src, f):  # row dst += f * row src
        ra, rs = a[dst], a[src]
        for j in range(nc):
            if rs[j]:
                ra[j] += f * rs[j]
        if track:
            ua, us = U[dst], U[src]
            for j in range(nr):
                ua[j] += f * us[j]

    def add_col(dst, src, f):  # col dst += f * col src
        for r in a:
            if r[src]:
                r[dst] += f * r[src]
        if track:
            for r in V:
                r[dst] += f * r[src]

    def neg_row(i):
        a[i] = [-x for x in a[i]]
        if track:
            U[i] = [-x for x in U[i]]

    diag = []
    for t in range(min(nr, nc)):
        pivot = None
        for i in range(t, nr):
            row = a[i]
            for j in range(t, nc):
                v = row[j]
                if v and (pivot is None or abs(v) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
                    if abs(v) == 1:
                        break
            if pivot and abs(a[pivot[0]][pivot[1]]) == 1:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            # smallest leftover in row/column t becomes the new pivot
            best = None
            for i in range(t + 1, nr):
                if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                    best = (abs(a[i][t]), "r", i)
            for j in range(t + 1, nc):
                if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                    best = (abs(a[t][j]), "c", j)
            if best is not None:
                done = False
                if best[1] == "r":
                    swap_rows(t, best[2])
                else:
                    swap_cols(t, best[2])
                continue
            # divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, nr):
                row = a[i]
                for j in range(t + 1, nc):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                add_row(t, bad, 1)
                done = False
            if done:
                break
        if a[t][t] < 0:
            neg_row(t)
        diag.append(a[t][t])
    if track:
        return diag, U, V
    return diag


def smith_normal_form(m, check: bool = False) -> SNFResult:
    """Elementary divisors of an integer matrix.

    ``m`` may be an :class:`IntMatrix` or a dense list of rows.  Unit
    pivots are removed by sparse elimination first; what is left goes
    through a dense smallest-pivot reduction.  With ``check=True`` (dense
    matrices up to 50x50) the whole reduction is redone with unimodular
    transforms and ``U @ m @ V`` is verified to equal the diagonal.
    """
    mat = _as_matrix(m)
    size = min(mat.rows, mat.cols)
    units, rest = _eliminate_units(mat)
    row_ids = sorted({i for c in rest.values() for i in c})
    col_ids = sorted(rest)
    rpos = {i: k for k, i in enumerate(row_ids)}
    grid = [[0] * len(col_ids) for _ in row_ids]
    for k, j in enumerate(col_ids):
        for i, v in rest[j].items():
            grid[rpos[i]][k] = v
    tail = _dense_snf(grid) if grid and col_ids else []
    nonzero = [1] * units + [d for d in tail if d]
    nonzero.sort()
    diagonal = tuple(nonzero + [0] * (size - len(nonzero)))
    result = SNFResult(diagonal, len(nonzero))
    if check:
        _verify_with_transforms(mat, result)
    return result


def smith_form_with_transforms(m):
    """Return ``(diagonal, U, V)`` with ``U @ m @ V`` diagonal; dense route only."""
    mat = _as_matrix(m)
    if mat.rows > 50 or mat.cols > 50:
        raise ValueError("transform tracking is limited to 50x50 matrices")
    grid = mat.to_dense()
    if not grid or mat.cols == 0:
        return (), [[int(i == j) for j in range(mat.rows)] for i in range(mat.rows)], \
            [[int(i == j) for j in range(mat.cols)] for i in range(mat.cols)]
    diag, U, V = _dense_snf([row[:] for row in grid], track=True)
    size = min(mat.rows, mat.cols)
    return tuple(diag + [0] * (size - len(diag))), U, V


def _verify_with_transforms(mat: IntMatrix, result: SNFResult) -> None:
    diag, U, V = smith_form_with_transforms(mat)
    Um = IntMatrix.from_dense(U, mat.rows)
    Vm = IntMatrix.from_dense(V, mat.cols)
    prod = (Um @ mat @ Vm).to_dense()
    for i, row in enumerate(prod):
        for j, v in enumerate(row):
            want = diag[i] if i == j else 0
            if v != want:
                raise AssertionError(f"U*m*V differs from diagonal at ({i}, {j})")
    if _det_abs(U) != 1 or _det_abs(V) != 1:
        raise AssertionError("transform is not unimodular")
    if tuple(diag) != result.diagonal:
        raise AssertionError(f"sparse route {result.diagonal} != dense route {diag}")


def _det_abs(grid: list[list[int]]) -> int:
    """|det| by fraction-free Bareiss elimination."""
    n = len(grid)
    if n == 0:
        return 1
    a = [row[:] for row in grid]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return abs(a[n - 1][n - 1])
