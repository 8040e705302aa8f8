"""Exact rational linear algebra on small dense matrices.

Hom spaces between Dynkin indecomposables are tiny (dimension vectors have
entries at most 6), so plain ``Fraction`` Gaussian elimination is both exact
and fast enough; rounding would change ranks and hence answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ShapeMismatch


@dataclass(frozen=True)
class Matrix:
    """Immutable ``rows x cols`` matrix; shape is kept even when empty."""

    rows: int
    cols: int
    data: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ShapeMismatch(f"data does not have shape {self.rows}x{self.cols}")

    @classmethod
    def of(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        z = Fraction(0)
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(
            tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
        ))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.data[i][j]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        return Matrix(self.rows, other.cols, tuple(
            tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
            for r in self.data
        ))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def column_block(self, start: int, stop: int) -> "Matrix":
        return Matrix(self.rows, stop - start, tuple(r[start:stop] for r in self.data))

    def to_lists(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.data]


def vstack(blocks: Sequence[Matrix], cols: int) -> Matrix:
    for b in blocks:
        if b.cols != cols:
            raise ShapeMismatch("blocks have different column counts")
    data = tuple(r for b in blocks for r in b.data)
    return Matrix(len(data), cols, data)


def rref(rows: Iterable[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a: Matrix) -> int:
    return len(rref(a.data, a.cols)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : A v = 0}`` as a list of vectors."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def left_nullspace(a: Matrix) -> Matrix:
    """Matrix whose rows form a basis of ``{c : c A = 0}``."""
    cols_as_rows = [list(c) for c in zip(*a.data)] if a.rows else []
    basis = nullspace(cols_as_rows, a.rows)
    return Matrix(len(basis), a.rows, tuple(tuple(v) for v in basis))
