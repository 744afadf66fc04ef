import numpy as np
import pytest

from clusterlab.duality import (
    G_MEAS,
    Z_MEAS,
    DualityError,
    DualLattice,
    dualize,
    run_duality_suite,
    sample_realization,
    verify_entropy_bound,
    verify_lemma,
)
from clusterlab.pauli import cluster_op, symmetry_op


class TestLattice:
    def test_size_constraints(self):
        with pytest.raises(DualityError):
            DualLattice(2, 9)  # not a multiple of alpha
        with pytest.raises(DualityError):
            DualLattice(3, 6)  # too short
        DualLattice(3, 9)

    def test_label_families(self):
        lat = DualLattice(2, 8)
        assert lat.z_labels() == lat.g_labels()  # even alpha: same lattice
        odd = DualLattice(1, 8)
        assert set(odd.z_labels()).isdisjoint(odd.g_labels())  # half-integer centers

    def test_operators_match_builders(self):
        lat = DualLattice(2, 8)
        assert lat.z_op(lat.z_labels()[2]) == __import__(
            "clusterlab.pauli", fromlist=["PauliString"]).PauliString.single(8, 3, "Z")
        # a cluster operator centered at an even coordinate is XZX at that site
        g = lat.g_op(lat.g_labels()[3])  # center = site 4
        assert g == cluster_op(2, 3, 8, boundary="periodic")

    def test_odd_alpha_dual_register_offset(self):
        lat = DualLattice(1, 8)
        # dual qubits sit at half-integer positions, so dual cluster centers
        # are the integer coords: XX centered at position 2 spans qubits 2, 3
        op = lat.g_op(4, dual=True)
        assert op.support() == {2, 3}
        with pytest.raises(DualityError):
            lat.g_op(3, dual=True)  # half-integer center is not a dual label

    def test_dual_region(self):
        even = DualLattice(2, 8)
        assert even.dual_region([2, 3, 4]) == [2, 3, 4]
        odd = DualLattice(1, 8)
        assert odd.dual_region([2, 3, 4]) == [3, 4, 5]
        assert odd.dual_region([8]) == [1]

    def test_initial_states_are_symmetric(self):
        for alpha, N in ((1, 8), (2, 8), (3, 9)):
            lat = DualLattice(alpha, N)
            for dual in (False, True):
                state = lat.initial_state(dual)
                for r in range(1, alpha + 1):
                    assert state.expectation(symmetry_op(alpha, r, N)) == 1


class TestDualize:
    def test_swaps_kind_keeps_label(self):
        real = [(Z_MEAS, 4), (G_MEAS, 7), (Z_MEAS, 2)]
        assert dualize(real, 1, 8) == [(G_MEAS, 4), (Z_MEAS, 7), (G_MEAS, 2)]

    def test_involution(self):
        lat = DualLattice(2, 8)
        real = sample_realization(lat, 30, 0.4, np.random.default_rng(0))
        assert dualize(dualize(real, 2, 8), 2, 8) == real

    def test_empty_realization(self):
        assert dualize([], 2, 8) == []

    def test_non_measurement_record_rejected(self):
        with pytest.raises(DualityError):
            dualize([("unitary", 4)], 2, 8)


class TestLemma:
    @pytest.mark.parametrize("alpha,N", [(1, 8), (2, 8), (3, 9)])
    def test_random_realizations_pass(self, alpha, N):
        lat = DualLattice(alpha, N)
        for seed in range(3):
            rng = np.random.default_rng(seed)
            real = sample_realization(lat, 60, 0.5, rng)
            report = verify_lemma(real, alpha, N, seed)
            assert report.passed, report.witness
            assert report.checks == 60 * N
            assert report.signed_matches > 0

    def test_entropy_bound(self):
        for alpha, N in ((1, 8), (2, 8)):
            lat = DualLattice(alpha, N)
            real = sample_realization(lat, 40, 0.5, np.random.default_rng(1))
            gap = verify_entropy_bound(real, alpha, N, seed=1)
            assert gap <= 2 * alpha

    def test_suite_report_shape(self):
        report = run_duality_suite(2, 8, seeds=2, steps=20, p_s=0.5)
        assert report["passed"]
        assert report["membership_checks"] == 2 * 20 * 8
        assert report["entropy_bound_max_gap"] <= report["entropy_bound_limit"]
        assert report["witness"] is None
