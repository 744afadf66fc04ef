"""Pure stabilizer states as signed Aaronson-Gottesman tableaus.

Reference engine: exact phase tracking, destabilizer rows for O(n^2)
deterministic outcomes, arbitrary-weight Pauli measurement, entanglement
entropy via GF(2) rank. Bit vectors are Python ints (see gf2.py); this engine
is meant for correctness work at small to moderate n, the sweep workhorse is
the packed numba engine in fast_engine.py.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

import numpy as np

from . import gf2
from .pauli import PauliError, PauliString


class TableauError(RuntimeError):
    pass


class StabilizerState:
    """n-qubit pure stabilizer state with stabilizer and destabilizer rows."""

    def __init__(self, n: int, stab: List[PauliString], destab: List[PauliString]):
        self.n = n
        self._stab = stab
        self._destab = destab

    # -- constructors ----------------------------------------------------

    @staticmethod
    def product_state(n: int, sign: int) -> "StabilizerState":
        """|Z=sign>^n: stabilized by sign*Z_i, destabilized by X_i."""
        if n < 1:
            raise ValueError("need at least one qubit")
        stab = [PauliString.single(n, i, "Z", sign) for i in range(1, n + 1)]
        destab = [PauliString.single(n, i, "X") for i in range(1, n + 1)]
        return StabilizerState(n, stab, destab)

    @staticmethod
    def from_stabilizers(gens: Sequence[PauliString]) -> "StabilizerState":
        """State fixed by n independent commuting generators.

        Destabilizers are completed by solving the symplectic pairing
        constraints; used for the duality checker's cluster-type initial state.
        """
        n = gens[0].n
        if len(gens) != n:
            raise TableauError("need exactly n generators")
        for a in gens:
            if not a.is_hermitian:
                raise PauliError("generators must be Hermitian")
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                if not a.commutes(b):
                    raise TableauError("generators do not commute")
        sym_rows = [_sym_vec(g) for g in gens]
        if gf2.rank(sym_rows) != n:
            raise TableauError("generators are not independent")
        destab = []
        for i in range(n):
            # anticommute with gens[i], commute with the rest and with the
            # destabilizers found so far
            rows = [_sym_form_vec(g, n) for g in gens] + [_sym_form_vec(d, n) for d in destab]
            rhs = [1 if j == i else 0 for j in range(n)] + [0] * len(destab)
            sol = gf2.solve_affine(rows, rhs, 2 * n)
            if sol is None:
                raise TableauError("destabilizer completion failed")
            destab.append(PauliString(n, sol & ((1 << n) - 1), sol >> n, 0))
        return StabilizerState(n, list(gens), destab)

    # -- inspection ------------------------------------------------------

    @property
    def stabilizers(self) -> List[PauliString]:
        return list(self._stab)

    @property
    def destabilizers(self) -> List[PauliString]:
        return list(self._destab)

    def copy(self) -> "StabilizerState":
        return StabilizerState(self.n, list(self._stab), list(self._destab))

    def dump(self) -> str:
        """One signed Pauli per line, stabilizers then destabilizers."""
        lines = ["stab  %s" % s for s in self._stab]
        lines += ["dstab %s" % d for d in self._destab]
        return "\n".join(lines)

    def check_tableau(self) -> None:
        """Assert the full tableau contract; raises TableauError on breach."""
        n = self.n
        for i, s in enumerate(self._stab):
            if not s.is_hermitian:
                raise TableauError("stabilizer %d has imaginary phase" % i)
            for j in range(i + 1, n):
                if not s.commutes(self._stab[j]):
                    raise TableauError("stabilizers %d,%d anticommute" % (i, j))
        for i, d in enumerate(self._destab):
            for j, s in enumerate(self._stab):
                want = i == j
                if d.commutes(s) == want:
                    raise TableauError("destabilizer %d pairing broken at %d" % (i, j))
        if gf2.rank([_sym_vec(s) for s in self._stab]) != n:
            raise TableauError("stabilizer rows not independent")

    # -- dynamics --------------------------------------------------------

    def apply_clifford(self, gate, position: int) -> None:
        """Conjugate every row by a CliffordGate acting at sites position..position+m-1."""
        m = gate.m
        if position < 1 or position + m - 1 > self.n:
            raise ValueError("gate window [%d, %d] outside chain" % (position, position + m - 1))
        self._stab = [gate.conjugate_embedded(p, position) for p in self._stab]
        self._destab = [gate.conjugate_embedded(p, position) for p in self._destab]

    def measure_pauli(self, p: PauliString, rng: Optional[np.random.Generator] = None,
                      forced_outcome: Optional[int] = None) -> int:
        """Projective measurement of a Hermitian Pauli; returns the outcome +-1.

        A forced outcome replays a recorded branch and does not touch the RNG
        stream; it is rejected if the measurement turns out deterministic with
        the opposite sign.
        """
        if p.n != self.n:
            raise PauliError("operator size mismatch")
        if not p.is_hermitian:
            raise PauliError("measured operator must be Hermitian")
        anti = [i for i, s in enumerate(self._stab) if not s.commutes(p)]
        if not anti:
            outcome = self._deterministic_sign(p)
            if forced_outcome is not None and forced_outcome != outcome:
                raise TableauError("forced outcome conflicts with deterministic measurement")
            return outcome
        if forced_outcome is not None:
            outcome = forced_outcome
        else:
            if rng is None:
                raise ValueError("random-branch measurement needs an RNG")
            outcome = 1 if rng.integers(0, 2) == 1 else -1
        pivot = anti[0]
        pivot_row = self._stab[pivot]
        for i in anti[1:]:
            self._stab[i] = self._stab[i].multiply(pivot_row)
        for i, d in enumerate(self._destab):
            if i != pivot and not d.commutes(p):
                self._destab[i] = d.multiply(pivot_row)
        self._destab[pivot] = pivot_row
        self._stab[pivot] = p if outcome == 1 else p.negate()
        return outcome

    def expectation(self, p: PauliString) -> int:
        """<p> for a stabilizer state: exactly -1, 0 or +1."""
        if not p.is_hermitian:
            raise PauliError("expectation of a non-Hermitian operator")
        if any(not s.commutes(p) for s in self._stab):
            return 0
        return self._deterministic_sign(p)

    def _deterministic_sign(self, p: PauliString) -> int:
        # Product of stabilizer rows selected by the destabilizer pairing
        # equals +-p; compare phases.
        acc = PauliString.identity(self.n)
        for d, s in zip(self._destab, self._stab):
            if not d.commutes(p):
                acc = acc.multiply(s)
        if acc.x != p.x or acc.z != p.z:
            raise TableauError("operator not in the stabilizer group despite commuting")
        return 1 if acc.phase == p.phase else -1

    # -- entanglement ----------------------------------------------------

    def entanglement_entropy(self, region: Iterable[int]) -> int:
        """S_A in bits: n_A - log2|G_A|, via rank on the complement columns."""
        sites = set(region)
        if not sites:
            return 0
        if not sites <= set(range(1, self.n + 1)):
            raise ValueError("region outside [1, %d]" % self.n)
        comp_mask = 0
        for s in range(1, self.n + 1):
            if s not in sites:
                comp_mask |= 1 << (s - 1)
        rows = [(s.x & comp_mask) | ((s.z & comp_mask) << self.n) for s in self._stab]
        supported_in_a = self.n - gf2.rank(rows)
        return len(sites) - supported_in_a


def _sym_vec(p: PauliString) -> int:
    return p.x | (p.z << p.n)


def _sym_form_vec(p: PauliString, n: int) -> int:
    # Row for the symplectic inner product: pairing (x|z) against (z|x).
    return p.z | (p.x << n)
