"""Exact dense simulation for small chains.

Serves the symmetric-Haar-gate circuits at desk scale and doubles as the
brute-force oracle for the stabilizer engine. Basis convention: site j is bit
j-1 of the amplitude index (site 1 = least significant bit), so the operator
matrix of a chain observable is kron(site_n, ..., site_1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .pauli import PauliError, PauliString

MAX_QUBITS = 22

_NORM_TOL = 1e-10
_UNITARY_TOL = 1e-10
_ZERO_BRANCH_TOL = 1e-12


class DenseError(RuntimeError):
    pass


@dataclass
class SchmidtSpectrum:
    """Squared Schmidt coefficients across a cut, descending."""

    values: np.ndarray
    cut: int

    @property
    def entropy_bits(self) -> float:
        lam = self.values[self.values > 1e-300]
        return float(-np.sum(lam * np.log2(lam)))


class DenseState:
    """Normalized complex amplitude vector for n <= 22 qubits."""

    def __init__(self, n: int, amplitudes: np.ndarray):
        self.n = n
        self.amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << n,):
            raise DenseError("amplitude vector has wrong length")

    @staticmethod
    def product_state(n: int, sign: int) -> "DenseState":
        """|0>^n for sign=+1, |1>^n for sign=-1."""
        if not 1 <= n <= MAX_QUBITS:
            raise DenseError("qubit count %d outside [1, %d]" % (n, MAX_QUBITS))
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0 if sign > 0 else (1 << n) - 1] = 1.0
        return DenseState(n, amps)

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.amplitudes.copy())

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def _check_norm(self):
        if abs(self.norm - 1.0) > _NORM_TOL:
            raise DenseError("state norm drifted to %.3e" % self.norm)

    # -- operators -------------------------------------------------------

    def apply_pauli(self, p: PauliString) -> np.ndarray:
        """Return p|psi> as an amplitude vector (bit-mask action, no matrices)."""
        if p.n != self.n:
            raise PauliError("operator size mismatch")
        idx = np.arange(1 << self.n, dtype=np.int64)
        # p|b> = i^(phase + #Y) (-1)^(b.z) |b ^ x>
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & p.z) & 1).astype(np.float64)
        coeff = 1j ** ((p.phase + (p.x & p.z).bit_count()) & 3)
        out = np.empty_like(self.amplitudes)
        out[idx ^ p.x] = coeff * signs * self.amplitudes
        return out

    def expectation(self, p: PauliString) -> float:
        """<psi|p|psi>, guaranteed real for Hermitian p."""
        if not p.is_hermitian:
            raise PauliError("expectation of a non-Hermitian operator")
        val = np.vdot(self.amplitudes, self.apply_pauli(p))
        if abs(val.imag) > 1e-10:
            raise DenseError("expectation has imaginary part %.3e" % val.imag)
        return float(val.real)

    def measure_pauli(self, p: PauliString, rng: Optional[np.random.Generator] = None,
                      forced_outcome: Optional[int] = None) -> int:
        """Born-rule projective measurement; projects and renormalizes in place."""
        p_amps = self.apply_pauli(p)
        exp = np.vdot(self.amplitudes, p_amps).real
        if forced_outcome is not None:
            outcome = forced_outcome
        else:
            if rng is None:
                raise ValueError("measurement needs an RNG (or a forced outcome)")
            prob_plus = min(max(0.5 * (1.0 + exp), 0.0), 1.0)
            outcome = 1 if rng.random() < prob_plus else -1
        projected = 0.5 * (self.amplitudes + outcome * p_amps)
        norm = np.linalg.norm(projected)
        if norm < _ZERO_BRANCH_TOL:
            raise DenseError("measured into a zero-probability branch")
        self.amplitudes = projected / norm
        return outcome

    def apply_local_unitary(self, u: np.ndarray, position: int) -> None:
        """Apply a 2^m x 2^m unitary to sites position..position+m-1."""
        dim = u.shape[0]
        m = int(np.log2(dim))
        if u.shape != (dim, dim) or (1 << m) != dim:
            raise DenseError("gate matrix must be square with power-of-two size")
        if position < 1 or position + m - 1 > self.n:
            raise DenseError("gate window outside chain")
        if np.max(np.abs(u.conj().T @ u - np.eye(dim))) > _UNITARY_TOL:
            raise DenseError("gate is not unitary")
        right = 1 << (position - 1)
        left = 1 << (self.n - position - m + 1)
        a = self.amplitudes.reshape(left, dim, right)
        # local index bits follow the chain convention: window site t is bit t
        out = np.einsum("ij,ajb->aib", u, a)
        self.amplitudes = np.ascontiguousarray(out).reshape(-1)
        self._check_norm()

    # -- entanglement ----------------------------------------------------

    def schmidt_spectrum(self, cut: int) -> SchmidtSpectrum:
        """Squared singular values across sites [1, cut] | [cut+1, n]."""
        if not 1 <= cut < self.n:
            raise DenseError("cut must satisfy 1 <= cut < n")
        mat = self.amplitudes.reshape(1 << (self.n - cut), 1 << cut)
        sv = np.linalg.svd(mat, compute_uv=False)
        lam = np.sort(sv ** 2)[::-1]
        total = lam.sum()
        if abs(total - 1.0) > 1e-9:
            raise DenseError("Schmidt weights sum to %.12f" % total)
        return SchmidtSpectrum(values=lam, cut=cut)

    def entanglement_entropy(self, cut: int) -> float:
        return self.schmidt_spectrum(cut).entropy_bits


def sample_symmetric_haar_gate(alpha: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random block unitary on alpha+1 sites commuting with the window
    symmetry restrictions {Z_1 Z_m, Z_2, ..., Z_alpha} (m = alpha+1).

    The constraints split the window space into 2^alpha two-dimensional joint
    eigensectors (middle bits and the outer-bit parity are conserved); each
    sector gets an independent Haar 2x2 block.
    """
    if alpha < 1:
        raise ValueError("alpha must be positive")
    m = alpha + 1
    dim = 1 << m
    u = np.zeros((dim, dim), dtype=np.complex128)
    for middle in range(1 << (alpha - 1)):
        for outer_parity in (0, 1):
            # basis pair: outer bits (b_1, b_m) with b_1 ^ b_m = outer_parity
            i0 = (middle << 1) | 0 | ((outer_parity ^ 0) << alpha)
            i1 = (middle << 1) | 1 | ((outer_parity ^ 1) << alpha)
            block = _haar_2x2(rng)
            u[np.ix_((i0, i1), (i0, i1))] = block
    return u


def _haar_2x2(rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    # fix the phase ambiguity of QR so the distribution is exactly Haar
    return q * (np.diag(r) / np.abs(np.diag(r)))
