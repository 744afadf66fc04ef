"""Brute-force dense-matrix helpers used as independent oracles in tests.

Everything here is built from explicit 2x2 matrices and kron, deliberately
bypassing the package's symplectic arithmetic.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

_MATS = {(0, 0): I2, (1, 0): SX, (0, 1): SZ, (1, 1): SY}


def pauli_matrix(p):
    """Dense matrix of a PauliString (site 1 = least significant bit)."""
    m = np.eye(1, dtype=complex)
    for j in range(p.n, 0, -1):
        bit = 1 << (j - 1)
        m = np.kron(m, _MATS[(1 if p.x & bit else 0, 1 if p.z & bit else 0)])
    return (1j ** p.phase) * m


def state_vector(dense_state):
    return np.asarray(dense_state.amplitudes)


def entropy_from_vector(vec, cut, n):
    """Von Neumann entropy in bits across sites [1, cut] by direct SVD."""
    mat = vec.reshape(1 << (n - cut), 1 << cut)
    sv = np.linalg.svd(mat, compute_uv=False)
    lam = sv**2
    lam = lam[lam > 1e-14]
    return float(-np.sum(lam * np.log2(lam)))
