"""GF(2) linear algebra on integer bitsets.

Rows are Python ints used as bit vectors (bit i = column i). Python ints are
arbitrary precision, so a row of any width is a single object and XOR is one
operation; this is the packed-word representation used throughout the signed
engine and the duality checker.
"""

from __future__ import annotations

from typing import Iterable, List, Optional


def rank(rows: Iterable[int]) -> int:
    """Rank of the row set over GF(2)."""
    basis: List[int] = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
    return len(basis)


class Solver:
    """Incremental row-reduction oracle for repeated solves against a fixed matrix.

    Columns of the system are the input rows (we solve x^T A = v, i.e. express
    v as an XOR combination of the given rows).
    """

    def __init__(self, rows: List[int]):
        self._rows = list(rows)
        # reduced[i] = (pivot_mask, combo_mask): pivot row and which original
        # rows were combined to produce it
        self._reduced: List[tuple[int, int]] = []
        for i, row in enumerate(self._rows):
            combo = 1 << i
            for piv, cmb in self._reduced:
                if row & (piv & -piv):
                    row ^= piv
                    combo ^= cmb
            if row:
                self._reduced.append((row, combo))

    @property
    def rank(self) -> int:
        return len(self._reduced)

    def solve(self, target: int) -> Optional[int]:
        """Return a bitmask over input rows XORing to target, or None."""
        combo = 0
        for piv, cmb in self._reduced:
            if target & (piv & -piv):
                target ^= piv
                combo ^= cmb
        if target:
            return None
        return combo

    def contains(self, target: int) -> bool:
        return self.solve(target) is not None


def in_rowspan(target: int, rows: Iterable[int]) -> bool:
    """Whether target is an XOR combination of rows."""
    basis: List[int] = []
    for row in rows:
        for b in basis:
            if row & (b & -b):
                row ^= b
        if row:
            basis.append(row)
    for b in basis:
        if target & (b & -b):
            target ^= b
    return target == 0


def nullspace(rows: List[int], n_cols: int) -> List[int]:
    """Basis of {x : for every row r, parity(x & r) == 0}.

    Used to enumerate solutions of small symplectic constraint systems.
    """
    # Transpose to column echelon: work with the rows as parity constraints.
    pivots: List[tuple[int, int]] = []  # (pivot_col_bit, reduced_row)
    reduced = []
    for row in rows:
        for bit, rr in pivots:
            if row & bit:
                row ^= rr
        if row:
            low = row & -row
            pivots.append((low, row))
            reduced.append(row)
    pivot_bits = {b.bit_length() - 1 for b, _ in pivots}
    basis = []
    for col in range(n_cols):
        if col in pivot_bits:
            continue
        vec = 1 << col
        # back-substitute: set pivot coordinates to cancel constraints; later
        # pivots first, since earlier reduced rows may still contain their bits
        for bit, rr in reversed(pivots):
            if parity(rr & vec):
                vec ^= bit
        basis.append(vec)
    return basis


def solve_affine(rows: List[int], rhs: List[int], n_cols: int) -> Optional[int]:
    """One solution x of parity(x & rows[i]) == rhs[i] for all i, or None."""
    pivots: List[tuple[int, int, int]] = []  # (pivot_bit, row, rhs_bit)
    for row, b in zip(rows, rhs):
        for bit, rr, rb in pivots:
            if row & bit:
                row ^= rr
                b ^= rb
        if row:
            pivots.append((row & -row, row, b))
        elif b:
            return None
    x = 0
    # Solve triangular system from the recorded pivots (each pivot bit occurs
    # in its own row only after full reduction below).
    for bit, row, b in reversed(pivots):
        if parity(row & x) != b:
            x ^= bit
    return x


def parity(v: int) -> int:
    return v.bit_count() & 1
