"""Spin-1 squared components and the two-qubit 3×3 operator square.

Neither admits a value assignment fixed independently of which compatible
observables are measured alongside.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .linalg import I2, SX, SY, SZ, eig_hermitian

I4 = np.eye(4, dtype=complex)


def spin1_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sx, Sy, Sz for spin 1 (ħ = 1) in the basis |-1⟩, |0⟩, |+1⟩."""
    ms = (-1, 0, 1)
    s_plus = np.zeros((3, 3), dtype=complex)
    for col, m in enumerate(ms[:-1]):
        s_plus[col + 1, col] = math.sqrt(2 - m * (m + 1))
    s_minus = s_plus.conj().T
    sx = (s_plus + s_minus) / 2
    sy = (s_plus - s_minus) / 2j
    sz = np.diag(ms).astype(complex)
    return sx, sy, sz


def spin1_squares(tol: float = 1e-12) -> dict:
    """Squares of the spin-1 components, with their commutation and sum checks."""
    squares = [s @ s for s in spin1_matrices()]
    commutators = {
        f"{a}{b}": float(np.abs(squares[i] @ squares[j] - squares[j] @ squares[i]).max())
        for (i, a), (j, b) in itertools.combinations(enumerate("xyz"), 2)
    }
    sum_residual = float(np.abs(sum(squares) - 2 * np.eye(3)).max())
    eigenvalues = [eig_hermitian(sq)[0] for sq in squares]
    return {
        "squares": squares,
        "commutator_norms": commutators,
        "sum_residual": sum_residual,
        "eigenvalues": [ev.tolist() for ev in eigenvalues],
        "ok": max(commutators.values()) < tol
        and sum_residual < tol
        and all(np.allclose(ev, [0, 1, 1], atol=tol) for ev in eigenvalues),
    }


@dataclass(frozen=True, eq=False)
class OperatorSquare:
    grid: tuple[tuple[np.ndarray, ...], ...]
    row_signs: tuple[int, int, int]
    col_signs: tuple[int, int, int]

    def row_products(self) -> list[np.ndarray]:
        return [r[0] @ r[1] @ r[2] for r in self.grid]

    def col_products(self) -> list[np.ndarray]:
        return [self.grid[0][c] @ self.grid[1][c] @ self.grid[2][c] for c in range(3)]

    def max_commutator(self) -> float:
        """Largest ‖AB - BA‖ over pairs sharing a row or a column."""
        worst = 0.0
        lines = [list(r) for r in self.grid] + [[self.grid[r][c] for r in range(3)] for c in range(3)]
        for line in lines:
            for a, b in itertools.combinations(line, 2):
                worst = max(worst, float(np.abs(a @ b - b @ a).max()))
        return worst


def mermin_square() -> OperatorSquare:
    x1, x2 = np.kron(SX, I2), np.kron(I2, SX)
    y1, y2 = np.kron(SY, I2), np.kron(I2, SY)
    z1z2 = np.kron(SZ, SZ)
    grid = (
        (x1, x2, x1 @ x2),
        (y2, y1, y1 @ y2),
        (x1 @ y2, y1 @ x2, z1z2),
    )
    return OperatorSquare(grid, (1, 1, 1), (1, 1, -1))


def square_report(sq: OperatorSquare | None = None) -> dict:
    sq = mermin_square() if sq is None else sq
    row_res = [float(np.abs(p - s * I4).max()) for p, s in zip(sq.row_products(), sq.row_signs)]
    col_res = [float(np.abs(p - s * I4).max()) for p, s in zip(sq.col_products(), sq.col_signs)]
    square_res = max(float(np.abs(op @ op - I4).max()) for row in sq.grid for op in row)
    spectra_ok = all(
        np.allclose(eig_hermitian(op)[0], [-1, -1, 1, 1], atol=1e-12) for row in sq.grid for op in row
    )
    return {
        "row_residuals": row_res,
        "col_residuals": col_res,
        "square_residual": square_res,
        "max_commutator": sq.max_commutator(),
        "eigenvalues_pm1": spectra_ok,
    }


def coloring_search(row_signs=(1, 1, 1), col_signs=(1, 1, -1)) -> dict:
    """Exhaust all 2⁹ ±1 fillings of the 3×3 square against the product rules."""
    found = []
    examined = 0
    for values in itertools.product((1, -1), repeat=9):
        examined += 1
        g = np.array(values).reshape(3, 3)
        if tuple(g.prod(axis=1)) == tuple(row_signs) and tuple(g.prod(axis=0)) == tuple(col_signs):
            found.append(g)
    # Product of all nine entries computed by rows and by columns must agree.
    rows_total = int(np.prod(row_signs))
    cols_total = int(np.prod(col_signs))
    return {
        "assignments_examined": examined,
        "colorings_found": len(found),
        "solutions": [g.tolist() for g in found],
        "parity_by_rows": rows_total,
        "parity_by_columns": cols_total,
        "parity_contradiction": rows_total != cols_total,
    }


def wigner_category_count() -> dict:
    """Categories of pairs for two settings per side, with and without locality.

    Without locality a category fixes a joint result pair for each of the four
    setting combinations: 4⁴ possibilities. Locality forces the results to
    come from one table (A, A', B, B'), leaving (2²)² = 16; the second number
    is recounted by enumerating the joint assignments that factorise.
    """
    combos = [(0, 0), (0, 1), (1, 0), (1, 1)]  # (a or a', b or b')
    pairs = list(itertools.product((1, -1), repeat=2))
    naive = 0
    local = set()
    for joint in itertools.product(pairs, repeat=4):
        naive += 1
        a_vals: dict[int, int] = {}
        b_vals: dict[int, int] = {}
        ok = True
        for (ia, ib), (ra, rb) in zip(combos, joint):
            if a_vals.setdefault(ia, ra) != ra or b_vals.setdefault(ib, rb) != rb:
                ok = False
                break
        if ok:
            local.add((a_vals[0], a_vals[1], b_vals[0], b_vals[1]))
    return {"without_locality": naive, "with_locality": len(local), "expected": (2**2) ** 2}
