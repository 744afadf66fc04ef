"""Clifford gates on a measurement window, given by their conjugation action.

A gate on m = alpha+1 sites is the table of images of the local generators
X_j, Z_j as signed window Paulis. Symmetry-preserving gates fix the window
restrictions of the global symmetries: {Z_1 Z_m, Z_2, ..., Z_alpha}.
Sampling is exactly uniform over that subgroup, by completing a symplectic
basis one generator at a time (every intermediate solution set is an affine
space of fixed dimension, so sequential uniform choices compose to a uniform
group element).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from . import gf2
from .pauli import PauliError, PauliString


class GateError(RuntimeError):
    pass


@dataclass(frozen=True)
class CliffordGate:
    """Conjugation table: images of X_1..X_m and Z_1..Z_m on the window."""

    m: int
    img_x: tuple  # PauliString per site, image of X_j
    img_z: tuple  # PauliString per site, image of Z_j

    @staticmethod
    def identity(m: int) -> "CliffordGate":
        return CliffordGate(
            m,
            tuple(PauliString.single(m, j, "X") for j in range(1, m + 1)),
            tuple(PauliString.single(m, j, "Z") for j in range(1, m + 1)),
        )

    def validate(self) -> None:
        """Check the image table is symplectic with Hermitian signs."""
        gens = list(self.img_x) + list(self.img_z)
        for g in gens:
            if not g.is_hermitian:
                raise GateError("gate image with imaginary phase")
        for j in range(self.m):
            for k in range(self.m):
                if self.img_x[j].commutes(self.img_z[k]) != (j != k):
                    raise GateError("X/Z image pairing broken at (%d, %d)" % (j, k))
                if not self.img_x[j].commutes(self.img_x[k]) or not self.img_z[j].commutes(self.img_z[k]):
                    if j != k:
                        raise GateError("image commutation broken at (%d, %d)" % (j, k))

    # -- conjugation -----------------------------------------------------

    def conjugate(self, p: PauliString) -> PauliString:
        """Image U p U^dag of a window-local Pauli."""
        if p.n != self.m:
            raise PauliError("window size mismatch")
        acc = PauliString.identity(self.m)
        y_count = 0
        for j in range(self.m):
            bit = 1 << j
            if p.x & bit:
                acc = acc.multiply(self.img_x[j])
            if p.z & bit:
                acc = acc.multiply(self.img_z[j])
            if p.x & bit and p.z & bit:
                y_count += 1
        return PauliString(self.m, acc.x, acc.z, acc.phase + p.phase + y_count)

    def conjugate_embedded(self, p: PauliString, position: int) -> PauliString:
        """Image of a chain Pauli for the gate placed at sites position..position+m-1."""
        lo = position - 1
        win_mask = ((1 << self.m) - 1) << lo
        local = PauliString(self.m, (p.x & win_mask) >> lo, (p.z & win_mask) >> lo, 0)
        if local.x == 0 and local.z == 0:
            return p
        img = self.conjugate(local)
        return PauliString(
            p.n,
            (p.x & ~win_mask) | (img.x << lo),
            (p.z & ~win_mask) | (img.z << lo),
            p.phase + img.phase,
        )

    def fixes(self, p: PauliString) -> bool:
        return self.conjugate(p) == p

    def compose(self, then: "CliffordGate") -> "CliffordGate":
        """Gate equal to applying self first, `then` second."""
        return CliffordGate(
            self.m,
            tuple(then.conjugate(g) for g in self.img_x),
            tuple(then.conjugate(g) for g in self.img_z),
        )

    # -- dense form ------------------------------------------------------

    def to_matrix(self) -> np.ndarray:
        """Unitary matrix (site 1 = least significant bit), global phase arbitrary.

        Column b is (prod_j imgX_j^{b_j}) |psi0> where |psi0> is the state
        stabilized by the imgZ_j; columns are orthonormal because distinct
        products differ by a Pauli anticommuting with some imgZ_j.
        """
        dim = 1 << self.m
        vec = np.zeros(dim, dtype=np.complex128)
        vec[:] = 1.0 / np.sqrt(dim)
        for g in self.img_z:
            vec = 0.5 * (vec + _apply_pauli_vec(g, vec))
        norm = np.linalg.norm(vec)
        if norm < 1e-9:
            # uniform start vector happened to be orthogonal; use a generic one
            rng = np.random.default_rng(7)
            vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            for g in self.img_z:
                vec = 0.5 * (vec + _apply_pauli_vec(g, vec))
            norm = np.linalg.norm(vec)
            if norm < 1e-9:
                raise GateError("could not build the gate's reference column")
        psi0 = vec / norm
        u = np.empty((dim, dim), dtype=np.complex128)
        for b in range(dim):
            col = psi0
            for j in range(self.m):
                if (b >> j) & 1:
                    col = _apply_pauli_vec(self.img_x[j], col)
            u[:, b] = col
        return u

    # -- packed form for the sweep kernel --------------------------------

    def unsigned_table(self) -> tuple:
        """(out_x, out_z) uint16 arrays indexed by local code x | z << m."""
        m = self.m
        size = 1 << (2 * m)
        out_x = np.zeros(size, dtype=np.uint16)
        out_z = np.zeros(size, dtype=np.uint16)
        for code in range(size):
            p = PauliString(m, code & ((1 << m) - 1), code >> m, 0)
            img = self.conjugate(p)
            out_x[code] = img.x
            out_z[code] = img.z
        return out_x, out_z


# -- symmetry handling -----------------------------------------------------


def window_symmetry_constraints(alpha: int) -> List[PauliString]:
    """Restrictions of the global symmetries to an alpha+1 window:
    {Z_1 Z_m} plus single Z on every interior site."""
    m = alpha + 1
    ops = [PauliString.from_sites(m, {1: "Z", m: "Z"})]
    for j in range(2, alpha + 1):
        ops.append(PauliString.single(m, j, "Z"))
    return ops


def is_symmetric(gate: CliffordGate, alpha: int) -> bool:
    return all(gate.fixes(c) for c in window_symmetry_constraints(alpha))


def sample_symmetric_clifford(alpha: int, rng: np.random.Generator) -> CliffordGate:
    """Uniform sample from the Cliffords fixing the window symmetry restrictions."""
    if alpha < 1:
        raise ValueError("alpha must be positive")
    m = alpha + 1
    constraints = window_symmetry_constraints(alpha)  # a_1..a_alpha, fixed pointwise

    # partners of the fixed constraints
    partners: List[PauliString] = []
    for k in range(alpha):
        want = [1 if j == k else 0 for j in range(alpha)]
        fixed = constraints + partners
        rhs = want + [0] * len(partners)
        partners.append(_sample_solution(fixed, rhs, m, rng))

    # remaining conjugate pair: images of Z_m and X_1 X_m
    for _ in range(64):
        rows = constraints + partners
        img_a = _sample_solution(rows, [0] * len(rows), m, rng)
        try:
            img_b = _sample_solution(rows + [img_a], [0] * len(rows) + [1], m, rng)
        except GateError:
            continue  # img_a not symplectically extendable; redraw
        break
    else:
        raise GateError("could not complete the symplectic pair")

    def signed(p: PauliString) -> PauliString:
        return p if rng.integers(0, 2) == 0 else p.negate()

    partners = [signed(p) for p in partners]
    img_a = signed(img_a)
    img_b = signed(img_b)

    # translate the adapted images back to the X_j / Z_j generator table
    img_x = [None] * m
    img_z = [None] * m
    img_z[0] = constraints[0].multiply(img_a)        # Z_1 = (Z_1 Z_m) * Z_m
    for j in range(2, alpha + 1):
        img_z[j - 1] = constraints[j - 1]            # interior Z fixed
    img_z[m - 1] = img_a
    for k in range(alpha):
        img_x[k] = partners[k]
    img_x[m - 1] = img_b.multiply(partners[0])       # X_m = (X_1 X_m) * X_1

    gate = CliffordGate(m, tuple(img_x), tuple(img_z))
    gate.validate()
    if not is_symmetric(gate, alpha):
        raise GateError("sampled gate broke the symmetry constraints")
    return gate


def _sample_solution(fixed: Sequence[PauliString], rhs: Sequence[int], m: int,
                     rng: np.random.Generator) -> PauliString:
    """Uniform Hermitian Pauli with prescribed commutation pattern vs `fixed`."""
    rows = [_form_vec(p, m) for p in fixed]
    x0 = gf2.solve_affine(rows, list(rhs), 2 * m)
    if x0 is None:
        raise GateError("inconsistent commutation constraints")
    for basis_vec in gf2.nullspace(rows, 2 * m):
        if rng.integers(0, 2):
            x0 ^= basis_vec
    return PauliString(m, x0 & ((1 << m) - 1), x0 >> m, 0)


def _form_vec(p: PauliString, m: int) -> int:
    # pairing row: parity(row & (x | z<<m)) = symplectic product with p
    return p.z | (p.x << m)


def _apply_pauli_vec(p: PauliString, vec: np.ndarray) -> np.ndarray:
    idx = np.arange(vec.shape[0], dtype=np.int64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & p.z) & 1).astype(np.float64)
    coeff = 1j ** ((p.phase + (p.x & p.z).bit_count()) & 3)
    out = np.empty_like(vec, dtype=np.complex128)
    out[idx ^ p.x] = coeff * signs * vec
    return out
