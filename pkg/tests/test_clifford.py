import numpy as np
import pytest

from clusterlab.clifford import (
    CliffordGate,
    GateError,
    is_symmetric,
    sample_symmetric_clifford,
    window_symmetry_constraints,
)
from clusterlab.pauli import PauliString

from oracle import pauli_matrix


def random_window_pauli(rng, m):
    return PauliString(m, int(rng.integers(0, 1 << m)), int(rng.integers(0, 1 << m)),
                       int(rng.integers(0, 2)) * 2)


class TestIdentity:
    def test_fixes_everything(self):
        rng = np.random.default_rng(0)
        g = CliffordGate.identity(3)
        g.validate()
        for _ in range(30):
            p = random_window_pauli(rng, 3)
            assert g.conjugate(p) == p

    def test_matrix_is_identity_up_to_phase(self):
        u = CliffordGate.identity(2).to_matrix()
        phase = u[0, 0]
        assert abs(abs(phase) - 1.0) < 1e-10
        assert np.allclose(u, phase * np.eye(4))


class TestValidation:
    def test_broken_pairing_rejected(self):
        g = CliffordGate(
            1,
            (PauliString.single(1, 1, "X"),),
            (PauliString.single(1, 1, "X"),),
        )
        with pytest.raises(GateError):
            g.validate()

    def test_imaginary_phase_rejected(self):
        g = CliffordGate(
            1,
            (PauliString(1, 1, 0, 1),),
            (PauliString.single(1, 1, "Z"),),
        )
        with pytest.raises(GateError):
            g.validate()


class TestConjugation:
    def test_hadamard_table(self):
        h = CliffordGate(
            1,
            (PauliString.single(1, 1, "Z"),),
            (PauliString.single(1, 1, "X"),),
        )
        h.validate()
        # H Y H = -Y
        assert h.conjugate(PauliString.single(1, 1, "Y")) == PauliString.single(1, 1, "Y", -1)

    def test_matches_matrix_conjugation(self):
        rng = np.random.default_rng(1)
        for alpha in (1, 2):
            m = alpha + 1
            for _ in range(10):
                gate = sample_symmetric_clifford(alpha, rng)
                u = gate.to_matrix()
                for _ in range(5):
                    p = random_window_pauli(rng, m)
                    img = gate.conjugate(p)
                    assert np.allclose(
                        u @ pauli_matrix(p) @ u.conj().T, pauli_matrix(img)
                    )

    def test_preserves_products(self):
        rng = np.random.default_rng(2)
        gate = sample_symmetric_clifford(2, rng)
        for _ in range(50):
            a = random_window_pauli(rng, 3)
            b = random_window_pauli(rng, 3)
            assert gate.conjugate(a.multiply(b)) == gate.conjugate(a).multiply(gate.conjugate(b))

    def test_embedded_action_leaves_outside_untouched(self):
        rng = np.random.default_rng(3)
        gate = sample_symmetric_clifford(2, rng)
        p = PauliString.parse("+Z1 X3 Z4 Y7", 8)
        img = gate.conjugate_embedded(p, 3)
        outside = ~(0b111 << 2)
        assert img.x & outside == p.x & outside
        assert img.z & outside == p.z & outside

    def test_embedded_identity_window_is_noop(self):
        rng = np.random.default_rng(4)
        gate = sample_symmetric_clifford(2, rng)
        p = PauliString.parse("+Z1 Y8", 8)
        assert gate.conjugate_embedded(p, 3) == p


class TestCompose:
    def test_against_sequential_conjugation(self):
        rng = np.random.default_rng(5)
        g1 = sample_symmetric_clifford(2, rng)
        g2 = sample_symmetric_clifford(2, rng)
        both = g1.compose(g2)
        both.validate()
        for _ in range(40):
            p = random_window_pauli(rng, 3)
            assert both.conjugate(p) == g2.conjugate(g1.conjugate(p))

    def test_matrix_product_up_to_phase(self):
        rng = np.random.default_rng(6)
        g1 = sample_symmetric_clifford(1, rng)
        g2 = sample_symmetric_clifford(1, rng)
        u = g1.compose(g2).to_matrix()
        v = g2.to_matrix() @ g1.to_matrix()
        k = int(np.argmax(np.abs(u)))
        phase = v.flat[k] / u.flat[k]
        assert abs(abs(phase) - 1.0) < 1e-9
        assert np.allclose(v, phase * u)


class TestSymmetricSampling:
    @pytest.mark.parametrize("alpha", [1, 2, 3])
    def test_samples_validate_and_fix_symmetries(self, alpha):
        rng = np.random.default_rng(7)
        for _ in range(20):
            gate = sample_symmetric_clifford(alpha, rng)
            gate.validate()
            assert is_symmetric(gate, alpha)

    def test_matrix_commutes_with_symmetries(self):
        rng = np.random.default_rng(8)
        for alpha in (1, 2):
            gate = sample_symmetric_clifford(alpha, rng)
            u = gate.to_matrix()
            for c in window_symmetry_constraints(alpha):
                cm = pauli_matrix(c)
                assert np.allclose(u @ cm, cm @ u)

    def test_draws_are_varied(self):
        rng = np.random.default_rng(9)
        seen = {sample_symmetric_clifford(1, rng) for _ in range(40)}
        assert len(seen) > 10

    def test_single_qubit_group_is_uniform(self):
        # alpha=1 fixes Z1 Z2 pointwise.  Sp(4, 2) has order 720 and acts
        # transitively on the 15 nonzero vectors, so the pointwise stabilizer
        # has 48 sign-free image tables.  A uniform sampler must hit every
        # class with equal frequency.
        rng = np.random.default_rng(10)
        counts = {}
        n_draws = 6000
        for _ in range(n_draws):
            g = sample_symmetric_clifford(1, rng)
            key = tuple((p.x, p.z) for p in g.img_x + g.img_z)
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 48
        expected = n_draws / 48
        chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
        # 47 degrees of freedom; generous ceiling to keep the test stable
        assert chi2 < 100
