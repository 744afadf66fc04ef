"""Packed sign-free stabilizer engine for large-N sweeps.

Wraps the numba kernels with a small object API mirroring the reference
tableau engine where the two overlap. Only magnitudes are available here:
string expectations come back as |<p>| in {0, 1} and entropies in bits.
The signed reference engine (tableau.py) is the correctness anchor; the
cross-engine agreement is enforced by tests.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from . import kernels
from .pauli import PauliError, PauliString


class FastStabilizerSim:
    """Sign-free stabilizer group of an n-qubit state, bit-packed rows."""

    def __init__(self, n: int, alpha: int, periodic: bool = False):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = n
        self.alpha = alpha
        self.periodic = periodic
        self.W = (n + 63) // 64
        self.sx = np.zeros((n, self.W), dtype=np.uint64)
        self.sz = np.zeros((n, self.W), dtype=np.uint64)
        self.elo = np.zeros(n, dtype=np.int64)
        self.ehi = np.zeros(n, dtype=np.int64)
        # |Z product state>: row i stabilized by Z_{i+1}
        for i in range(n):
            self.sz[i, i >> 6] = np.uint64(1 << (i & 63))
            self.elo[i] = i >> 6
            self.ehi[i] = i >> 6
        self._px = np.zeros(self.W, dtype=np.uint64)
        self._pz = np.zeros(self.W, dtype=np.uint64)
        self._scratch = np.zeros((n, 2 * self.W), dtype=np.uint64)

    def set_rows(self, gens: Iterable[PauliString]) -> None:
        """Replace the group with the given n independent commuting generators."""
        gens = list(gens)
        if len(gens) != self.n:
            raise ValueError("need exactly n generators")
        for i, g in enumerate(gens):
            x, z = self._pack(g)
            self.sx[i] = x
            self.sz[i] = z
            self.elo[i] = 0
            self.ehi[i] = self.W - 1
            kernels._shrink_extent(self.sx, self.sz, i, self.elo, self.ehi)

    def _pack(self, p: PauliString):
        if p.n != self.n:
            raise PauliError("operator size mismatch")
        x = np.zeros(self.W, dtype=np.uint64)
        z = np.zeros(self.W, dtype=np.uint64)
        for w in range(self.W):
            x[w] = (p.x >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
            z[w] = (p.z >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
        return x, z

    # -- dynamics --------------------------------------------------------

    def run_ops(self, kinds: np.ndarray, positions: np.ndarray,
                gate_idx: np.ndarray, pool_x: np.ndarray, pool_z: np.ndarray) -> None:
        """Execute a batch of encoded operations (see kernels.run_ops)."""
        kernels.run_ops(self.sx, self.sz, self.elo, self.ehi, self.n, self.n,
                        self.alpha, self.periodic, kinds, positions, gate_idx,
                        pool_x, pool_z, self._px, self._pz)

    def measure(self, p: PauliString) -> None:
        """Sign-free measurement of an arbitrary Pauli (support-packed)."""
        x, z = self._pack(p)
        olo, ohi = _word_range(x, z, self.W)
        kernels.measure_op(self.sx, self.sz, self.elo, self.ehi, self.n,
                           x, z, olo, ohi)

    # -- observables -----------------------------------------------------

    def string_abs(self, p: PauliString) -> int:
        """|<p>| for the current state: 1 if p commutes with every row, else 0."""
        x, z = self._pack(p)
        olo, ohi = _word_range(x, z, self.W)
        return int(kernels.commutes_with_all(self.sx, self.sz, self.elo,
                                             self.ehi, self.n, x, z, olo, ohi))

    def entanglement_entropy(self, region: Iterable[int]) -> int:
        """S_A in bits, same contract as the reference engine."""
        sites = set(region)
        if not sites:
            return 0
        comp = np.zeros(self.W, dtype=np.uint64)
        for s in range(1, self.n + 1):
            if s not in sites:
                comp[(s - 1) >> 6] |= np.uint64(1 << ((s - 1) & 63))
        rank = int(kernels.rank_masked(self.sx, self.sz, self.n, comp, self._scratch))
        return len(sites) - (self.n - rank)

    def rows(self):
        """Current generators as unsigned PauliStrings (for cross-checks)."""
        out = []
        for i in range(self.n):
            x = z = 0
            for w in range(self.W):
                x |= int(self.sx[i, w]) << (64 * w)
                z |= int(self.sz[i, w]) << (64 * w)
            out.append(PauliString(self.n, x, z, 0))
        return out


def _word_range(x: np.ndarray, z: np.ndarray, W: int):
    lo, hi = 0, W - 1
    nz = np.nonzero(x | z)[0]
    if nz.size:
        lo, hi = int(nz[0]), int(nz[-1])
    return lo, hi


def pack_gate_pool(gates) -> tuple:
    """Stack CliffordGate.unsigned_table outputs into pool arrays."""
    tabs = [g.unsigned_table() for g in gates]
    pool_x = np.stack([t[0] for t in tabs])
    pool_z = np.stack([t[1] for t in tabs])
    return pool_x, pool_z
