import numpy as np
import pytest

from clusterlab.circuit import (
    KIND_CLUSTER,
    KIND_UNITARY,
    KIND_Z,
    CircuitError,
    CircuitSpec,
    GatePool,
    draw_step,
    make_engine,
    run_trajectory,
    sample_operation,
    trajectory_streams,
)
from clusterlab.observables import StandardObserver
from clusterlab.pauli import cluster_op, symmetry_op


def spec(**kw):
    base = dict(alpha=2, N=16, p_s=0.3, p_t=0.7, p_u=0.0, sample_steps=10,
                master_seed=5)
    base.update(kw)
    return CircuitSpec(**base)


class TestSpecValidation:
    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(CircuitError):
            spec(p_s=0.5, p_t=0.6)

    def test_negative_probability(self):
        with pytest.raises(CircuitError):
            spec(p_s=-0.1, p_t=1.1)

    def test_chain_too_short(self):
        with pytest.raises(CircuitError):
            spec(alpha=3, N=7)

    def test_gate_family_consistency(self):
        with pytest.raises(CircuitError):
            spec(p_s=0.3, p_t=0.5, p_u=0.2)  # p_u > 0 but family 'none'
        with pytest.raises(CircuitError):
            spec(gate_family="clifford")  # p_u == 0 but family set
        spec(p_s=0.3, p_t=0.5, p_u=0.2, gate_family="clifford")

    def test_default_burn_in(self):
        assert spec().burn_in == 32
        assert spec(burn_in_steps=7).burn_in == 7

    def test_cluster_positions(self):
        assert spec().cluster_positions == 14
        assert spec(boundary="periodic").cluster_positions == 16

    def test_unknown_engine(self):
        s = spec()
        _, grng, orng = trajectory_streams(s, 0)
        with pytest.raises(CircuitError):
            make_engine("bogus", s, GatePool(s, grng), orng)


class TestSampling:
    def test_draw_step_frequencies(self):
        s = spec(p_s=0.25, p_t=0.55, p_u=0.2, gate_family="clifford", N=32)
        rng = np.random.default_rng(11)
        counts = np.zeros(3)
        trials = 400
        for _ in range(trials):
            kinds, positions, gate_idx = draw_step(s, rng)
            for k in (KIND_CLUSTER, KIND_Z, KIND_UNITARY):
                counts[k] += np.count_nonzero(kinds == k)
            span = positions[kinds != KIND_Z]
            site = positions[kinds == KIND_Z]
            assert positions.min() >= 0
            assert span.size == 0 or span.max() < s.cluster_positions
            assert site.size == 0 or site.max() < s.N
            assert gate_idx.min() >= 0 and gate_idx.max() < s.gate_pool_size
        total = trials * s.N
        for k, p in ((KIND_CLUSTER, 0.55), (KIND_Z, 0.25), (KIND_UNITARY, 0.2)):
            sigma = np.sqrt(total * p * (1 - p))
            assert abs(counts[k] - total * p) < 4 * sigma

    def test_sample_operation_ranges(self):
        s = spec(p_s=0.3, p_t=0.5, p_u=0.2, gate_family="clifford")
        rng = np.random.default_rng(0)
        seen = set()
        for _ in range(2000):
            rec = sample_operation(s, rng)
            seen.add(rec.kind)
            if rec.kind == "z_meas":
                assert 1 <= rec.position <= s.N
            else:
                assert 1 <= rec.position <= s.cluster_positions
        assert seen == {"cluster_meas", "z_meas", "unitary"}

    def test_streams_independent_of_engine_choice(self):
        """Circuit draws are identical whichever engine consumes outcomes."""
        s = spec()
        a, _, _ = trajectory_streams(s, 3)
        b, _, _ = trajectory_streams(s, 3)
        ka, pa, ga = draw_step(s, a)
        kb, pb, gb = draw_step(s, b)
        assert np.array_equal(ka, kb)
        assert np.array_equal(pa, pb)
        assert np.array_equal(ga, gb)

    def test_trajectories_distinct(self):
        s = spec()
        a, _, _ = trajectory_streams(s, 0)
        b, _, _ = trajectory_streams(s, 1)
        ka, _, _ = draw_step(s, a)
        kb, _, _ = draw_step(s, b)
        assert not np.array_equal(ka, kb)


class TestTrajectories:
    def test_all_z_kills_both_strings_then_one(self):
        """p_s = 1 projects onto the trivial product state."""
        s = spec(p_s=1.0, p_t=0.0, burn_in_steps=4, sample_steps=1)
        obs = StandardObserver(2, s.N)
        res = run_trajectory(s, 0, engine="tableau", observer=obs)
        assert res.time_averages["S_triv"] == 1.0
        assert res.time_averages["S_spt"] == 0.0

    def test_all_cluster_builds_spt_string(self):
        s = spec(p_s=0.0, p_t=1.0, burn_in_steps=30, sample_steps=1)
        obs = StandardObserver(2, s.N)
        res = run_trajectory(s, 0, engine="tableau", observer=obs)
        assert res.time_averages["S_spt"] == 1.0
        assert res.time_averages["S_triv"] == 0.0

    def test_replay_determinism(self):
        s = spec(p_s=0.3, p_t=0.5, p_u=0.2, gate_family="clifford",
                 burn_in_steps=5, sample_steps=20, master_seed=99)
        obs = StandardObserver(2, s.N, entropy_stride=2)
        first = run_trajectory(s, 4, engine="tableau", observer=obs, record_log=True)
        second = run_trajectory(s, 4, engine="tableau", observer=obs, record_log=True)
        assert first.time_averages == second.time_averages
        assert first.op_log == second.op_log

    def test_log_counts_operations(self):
        s = spec(burn_in_steps=3, sample_steps=4)
        res = run_trajectory(s, 0, engine="tableau", record_log=True)
        assert len(res.op_log) == (3 + 4) * s.N
        assert {r.kind for r in res.op_log} <= {"cluster_meas", "z_meas"}
        assert all(r.outcome in (-1, 1) for r in res.op_log)

    def test_fast_engine_refuses_log(self):
        s = spec(burn_in_steps=0, sample_steps=1)
        with pytest.raises(CircuitError):
            run_trajectory(s, 0, engine="fast", record_log=True)

    def test_symmetry_conserved_along_trajectory(self):
        s = spec(alpha=3, N=12, p_s=0.2, p_t=0.6, p_u=0.2,
                 gate_family="clifford", burn_in_steps=0, sample_steps=15)
        syms = [symmetry_op(3, r, 12) for r in range(1, 4)]

        def check(step, eng):
            for g in syms:
                assert eng.string_value(g) == 1
            return {}

        run_trajectory(s, 0, engine="tableau", observer=check)

    def test_dense_engine_matches_tableau_measurement_only(self):
        s = spec(alpha=1, N=8, p_s=0.4, p_t=0.6, burn_in_steps=0,
                 sample_steps=10, master_seed=17)
        obs = StandardObserver(1, 8)
        # outcome streams differ in branch choices, but magnitudes of the
        # stabilizer values agree in distribution; use identical streams here
        res_t = run_trajectory(s, 2, engine="tableau", observer=obs)
        res_d = run_trajectory(s, 2, engine="dense", observer=obs)
        for key in res_t.time_averages:
            assert res_t.time_averages[key] == pytest.approx(
                res_d.time_averages[key], abs=1e-9)

    def test_dense_engine_rejects_clifford(self):
        s = spec(p_s=0.3, p_t=0.5, p_u=0.2, gate_family="clifford")
        _, grng, orng = trajectory_streams(s, 0)
        with pytest.raises(CircuitError):
            make_engine("dense", s, GatePool(s, grng), orng)

    def test_periodic_cluster_wraps(self):
        s = spec(boundary="periodic", p_s=0.0, p_t=1.0, burn_in_steps=40,
                 sample_steps=1)
        _, grng, orng = trajectory_streams(s, 0)
        eng = make_engine("tableau", s, GatePool(s, grng), orng)
        crng, _, _ = trajectory_streams(s, 0)
        for _ in range(41):
            eng.execute_step(*draw_step(s, crng))
        for i in range(1, s.N + 1):
            assert abs(eng.string_value(cluster_op(2, i, s.N, "periodic"))) == 1
