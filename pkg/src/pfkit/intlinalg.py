"""Integer linear algebra: column echelon form, exact solving, kernels.

Matrices are lists of rows of Python ints.  Used by the exponent-lattice
membership oracle, so every answer is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class ColumnEchelon:
    """``M @ U == H`` with U unimodular and H in column echelon form."""

    H: tuple[tuple[int, ...], ...]
    U: tuple[tuple[int, ...], ...]
    pivots: tuple[tuple[int, int], ...]  # (row, column) per pivot column, in order

    @property
    def rank(self) -> int:
        return len(self.pivots)


def column_echelon(M: Sequence[Sequence[int]], ncols: int | None = None) -> ColumnEchelon:
    rows = len(M)
    cols = ncols if ncols is not None else (len(M[0]) if rows else 0)
    A = [list(r) for r in M]
    U = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        for r in U:
            r[j], r[k] = r[k], r[j]

    def axpy(dst, src, f):
        """column dst -= f * column src"""
        for r in A:
            r[dst] -= f * r[src]
        for r in U:
            r[dst] -= f * r[src]

    def negate(j):
        for r in A:
            r[j] = -r[j]
        for r in U:
            r[j] = -r[j]

    pivots = []
    pc = 0
    for i in range(rows):
        if pc >= cols:
            break
        while True:
            nz = [j for j in range(pc, cols) if A[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(A[i][j]))
            for j in nz:
                if j != j0:
                    axpy(j, j0, A[i][j] // A[i][j0])
            if all(A[i][j] == 0 for j in nz if j != j0):
                swap(pc, j0)
                if A[i][pc] < 0:
                    negate(pc)
                pivots.append((i, pc))
                pc += 1
                break
    return ColumnEchelon(tuple(map(tuple, A)), tuple(map(tuple, U)), tuple(pivots))


def solve(M: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> list[int] | None:
    """An integer solution x of ``M x = b``, or None."""
    ech = column_echelon(M, ncols)
    cols = len(ech.U)
    y = [0] * cols
    pivot_of_row = dict(ech.pivots)
    for i, row in enumerate(ech.H):
        residual = b[i] - sum(row[j] * y[j] for j in range(cols) if y[j])
        if i in pivot_of_row:
            k = pivot_of_row[i]
            q, r = divmod(residual, row[k])
            if r:
                return None
            y[k] = q
        elif residual:
            return None
    return [sum(ech.U[i][j] * y[j] for j in range(cols)) for i in range(cols)]


def kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """A basis of the integer kernel ``{x : M x = 0}``."""
    ech = column_echelon(M, ncols)
    cols = len(ech.U)
    return [[ech.U[i][j] for i in range(cols)] for j in range(ech.rank, cols)]
