from clusterlab.haar_study import multiplet_signature, quadruplet_check, run_haar_point


class TestGrouping:
    def test_exact_quadruplets_pass(self):
        assert quadruplet_check([0.2] * 4 + [0.05] * 4)

    def test_rank_four_state_passes(self):
        # a perfect cluster-like snapshot: one quadruplet plus numerical zeros
        assert quadruplet_check([0.25] * 4 + [1e-31] * 4)

    def test_pairs_fail(self):
        assert not quadruplet_check([0.2, 0.2, 0.15, 0.15, 0.1, 0.1, 0.05, 0.05])

    def test_split_beyond_tolerance_fails(self):
        group = [0.2, 0.2, 0.2, 0.2 * (1 - 1e-5)]
        assert not quadruplet_check(group + [0.05] * 4)

    def test_split_within_tolerance_passes(self):
        group = [0.2, 0.2, 0.2, 0.2 * (1 - 1e-8)]
        assert quadruplet_check(group + [0.05] * 4)

    def test_too_few_values(self):
        assert not quadruplet_check([0.5, 0.5])

    def test_signature_examples(self):
        assert multiplet_signature([0.25] * 4 + [0.0] * 4) == [4, 1, 1, 1, 1]
        assert multiplet_signature([0.2, 0.2, 0.15, 0.15, 0.1, 0.1, 0.05, 0.05]) \
            == [2, 2, 2, 2]
        assert multiplet_signature([0.3, 0.2, 0.1, 0.09, 0.08, 0.07, 0.06, 0.05]) \
            == [1] * 8


class TestStudy:
    def test_point_report_shape(self):
        doc = run_haar_point(2, 8, 0.2, 0.2, n_trajectories=2, sample_steps=2,
                             master_seed=3)
        assert doc["schmidt_snapshots"] == 4
        assert 0 <= doc["schmidt_quadruplet_pass"] <= 4
        assert sum(doc["multiplet_signatures"].values()) == 4
        assert 0.0 <= doc["S_spt"] <= 1.0
        assert 0.0 <= doc["S_triv"] <= 1.0

    def test_point_is_deterministic(self):
        a = run_haar_point(2, 8, 0.2, 0.2, 2, 2, master_seed=3)
        b = run_haar_point(2, 8, 0.2, 0.2, 2, 2, master_seed=3)
        assert a == b
        c = run_haar_point(2, 8, 0.2, 0.2, 2, 2, master_seed=4)
        assert c != a
