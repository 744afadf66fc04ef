import numpy as np
import pytest

from clusterlab.observables import (
    ObservableError,
    ObservableEstimate,
    StandardObserver,
    accumulate,
    centered_placement,
    combine_circuit_averages,
    correlator_positions,
    eval_ssb_correlator,
    eval_string_spt,
    eval_string_trivial,
    sublattice_average,
)
from clusterlab.pauli import cluster_op
from clusterlab.tableau import StabilizerState


class TestPlacement:
    # golden fixture for the frozen placement convention
    GOLDEN = {
        (1, 16): (4, 11),
        (2, 16): (2, 5),
        (2, 64): (8, 23),
        (3, 24): (2, 5),
        (3, 96): (8, 23),
        (1, 64): (16, 47),
    }

    @pytest.mark.parametrize("key,expected", sorted(GOLDEN.items()))
    def test_golden_endpoints(self, key, expected):
        alpha, N = key
        p = centered_placement(alpha, N)
        assert (p.j, p.k) == expected

    def test_span_is_about_half_the_chain(self):
        for alpha in (1, 2, 3):
            N = 16 * alpha
            p = centered_placement(alpha, N)
            span = alpha * (p.k - p.j) + 1
            assert abs(span - N / 2) <= alpha

    def test_too_small(self):
        with pytest.raises(ObservableError):
            centered_placement(2, 7)

    def test_bad_shift(self):
        with pytest.raises(ObservableError):
            centered_placement(2, 16, shift=2)

    def test_correlator_positions_golden(self):
        assert correlator_positions(1, 16) == (4, 11)
        assert correlator_positions(3, 24) == (6, 13)


class TestEvaluation:
    def _cluster_state(self, alpha, n):
        state = StabilizerState.product_state(n, -1)
        rng = np.random.default_rng(0)
        for _ in range(20 * n):
            i = int(rng.integers(1, n - alpha + 1))
            state.measure_pauli(cluster_op(alpha, i, n), rng)
        return state

    def test_strings_on_cluster_and_product_states(self):
        alpha, n = 2, 16
        cluster = self._cluster_state(alpha, n)
        product = StabilizerState.product_state(n, -1)
        p = centered_placement(alpha, n)
        assert abs(eval_string_spt(cluster, p)) == 1
        assert eval_string_trivial(cluster, p) == 0
        assert abs(eval_string_trivial(product, p)) == 1
        assert eval_string_spt(product, p) == 0

    def test_sublattice_average(self):
        alpha, n = 2, 16
        cluster = self._cluster_state(alpha, n)
        assert sublattice_average(cluster, "string_spt", alpha, n) == 1.0
        assert sublattice_average(cluster, "string_trivial", alpha, n) == 0.0
        with pytest.raises(ObservableError):
            sublattice_average(cluster, "nope", alpha, n)

    def test_ssb_correlator_on_cluster_state(self):
        alpha, n = 3, 24
        cluster = self._cluster_state(alpha, n)
        value = eval_ssb_correlator(cluster, alpha, correlator_positions(alpha, n))
        assert abs(value) == 1

    def test_standard_observer_keys(self):
        alpha, n = 3, 24

        class Probe:
            def string_value(self, op):
                return 0

            def entanglement_entropy(self, region):
                return 1.5

        obs = StandardObserver(alpha, n, with_correlator=True, entropy_stride=2)
        assert set(obs(0, Probe())) == {"S_triv", "S_spt", "C_M", "S_half"}
        assert set(obs(1, Probe())) == {"S_triv", "S_spt", "C_M"}
        with pytest.raises(ObservableError):
            StandardObserver(2, 16, with_correlator=True)


class TestAccumulation:
    def test_abs_before_averaging(self):
        est = accumulate("S_spt", [[1, -1, 1, -1]])
        assert est.mean_abs == 1.0
        assert est.n_circuits == 1
        assert est.n_time_samples == 4
        assert est.std_error == 0.0

    def test_circuit_is_the_independent_unit(self):
        est = accumulate("S_triv", [[0.2, 0.4], [0.8, 0.6]])
        # circuit means 0.3 and 0.7 -> mean 0.5, sem = std([0.3,0.7],ddof=1)/sqrt(2)
        assert est.mean_abs == pytest.approx(0.5)
        assert est.std_error == pytest.approx(np.std([0.3, 0.7], ddof=1) / np.sqrt(2))
        assert est.n_circuits == 2

    def test_bernoulli_error_bar_covers_truth(self):
        rng = np.random.default_rng(42)
        p = 0.3
        per_circuit = rng.random((200, 50)) < p
        est = accumulate("S_spt", per_circuit.astype(float))
        assert abs(est.mean_abs - p) < 3 * est.std_error + 1e-12

    def test_empty_stream(self):
        with pytest.raises(ObservableError):
            accumulate("S_spt", [])
        with pytest.raises(ObservableError):
            combine_circuit_averages("S_spt", [], 0)

    def test_combine_matches_accumulate(self):
        data = [[0.1, 0.3, 0.2], [0.5, 0.5, 0.4], [0.9, 0.7, 0.8]]
        a = accumulate("C_M", data)
        means = [np.mean(row) for row in data]
        b = combine_circuit_averages("C_M", means, 9)
        assert a.mean_abs == pytest.approx(b.mean_abs)
        assert a.std_error == pytest.approx(b.std_error)

    def test_estimate_validation(self):
        with pytest.raises(ObservableError):
            ObservableEstimate("S_spt", -0.1, 0.0, 1, 1)
        with pytest.raises(ObservableError):
            ObservableEstimate("S_spt", 0.1, -1.0, 1, 1)
