import numpy as np
import pytest

from stratix import (
    SyntheticCohortSpec,
    ValidationError,
    adjusted_rand_index,
    generate_synthetic,
    parse_clinical_table,
    parse_expression_matrix,
)


def small_spec(**overrides):
    base = dict(
        n_per_subgroup=5, subgroups_a=2, subgroups_b=2,
        features_a=4, features_b=3, separation=6.0,
        hazards=((1.0, 1.0), (1.0, 4.0)), censoring_rate=0.1, seed=7,
    )
    base.update(overrides)
    return SyntheticCohortSpec(**base)


class TestSpecValidation:
    def test_rejects_bad_counts(self):
        with pytest.raises(ValidationError):
            small_spec(n_per_subgroup=0)
        with pytest.raises(ValidationError):
            small_spec(subgroups_a=0)
        with pytest.raises(ValidationError):
            small_spec(features_b=0)

    def test_rejects_bad_separation(self):
        with pytest.raises(ValidationError):
            small_spec(separation=-1.0)
        with pytest.raises(ValidationError):
            small_spec(separation=float("nan"))

    def test_rejects_hazard_shape_and_sign(self):
        with pytest.raises(ValidationError, match="hazards"):
            small_spec(hazards=((1.0, 1.0),))
        with pytest.raises(ValidationError, match="hazards"):
            small_spec(hazards=((1.0,), (1.0,)))
        with pytest.raises(ValidationError, match="> 0"):
            small_spec(hazards=((1.0, 0.0), (1.0, 4.0)))

    def test_rejects_bad_censoring_rate(self):
        with pytest.raises(ValidationError):
            small_spec(censoring_rate=1.0)
        with pytest.raises(ValidationError):
            small_spec(censoring_rate=-0.1)
        small_spec(censoring_rate=0.0)  # boundary allowed


class TestGeneration:
    def test_files_parse_and_agree_on_cohort(self, tmp_path):
        cohort = generate_synthetic(small_spec(), tmp_path)
        assert set(cohort.paths) == {
            "matrix_a", "matrix_b", "clinical", "planted_labels"}
        ma = parse_expression_matrix(
            open(cohort.paths["matrix_a"], encoding="utf-8").read(), "a")
        mb = parse_expression_matrix(
            open(cohort.paths["matrix_b"], encoding="utf-8").read(), "b")
        clin = parse_clinical_table(
            open(cohort.paths["clinical"], encoding="utf-8").read())
        assert ma.sample_ids == cohort.sample_ids
        assert mb.sample_ids == cohort.sample_ids
        assert clin.sample_ids == cohort.sample_ids
        assert ma.n_features == 4
        assert mb.n_features == 3
        assert len(cohort.sample_ids) == 5 * 4  # n_per_subgroup x cells

    def test_planted_labels_enumerate_cells(self, tmp_path):
        cohort = generate_synthetic(small_spec(), tmp_path)
        pairs = list(zip(cohort.planted_a.tolist(), cohort.planted_b.tolist()))
        assert sorted(set(pairs)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert all(pairs.count(p) == 5 for p in set(pairs))
        lines = open(cohort.paths["planted_labels"],
                     encoding="utf-8").read().splitlines()
        assert lines[0] == "sample_id,subgroup_a,subgroup_b"
        assert len(lines) == 21

    def test_bit_deterministic_per_seed(self, tmp_path):
        c1 = generate_synthetic(small_spec(), tmp_path / "one")
        c2 = generate_synthetic(small_spec(), tmp_path / "two")
        for key in c1.paths:
            b1 = open(c1.paths[key], "rb").read()
            b2 = open(c2.paths[key], "rb").read()
            assert b1 == b2, key

    def test_seed_changes_output(self, tmp_path):
        c1 = generate_synthetic(small_spec(seed=7), tmp_path / "one")
        c2 = generate_synthetic(small_spec(seed=8), tmp_path / "two")
        assert (open(c1.paths["matrix_a"], "rb").read()
                != open(c2.paths["matrix_a"], "rb").read())

    def test_zero_separation_smoke(self, tmp_path):
        cohort = generate_synthetic(
            small_spec(separation=0.0, censoring_rate=0.0), tmp_path)
        clin = parse_clinical_table(
            open(cohort.paths["clinical"], encoding="utf-8").read())
        # no censoring process: every subject is an event
        assert all(r.survival_status == 1 for r in clin.records)

    def test_censoring_rate_roughly_respected(self, tmp_path):
        spec = small_spec(n_per_subgroup=250, censoring_rate=0.3, seed=11)
        cohort = generate_synthetic(spec, tmp_path)
        clin = parse_clinical_table(
            open(cohort.paths["clinical"], encoding="utf-8").read())
        frac = 1.0 - np.mean([r.survival_status for r in clin.records])
        assert abs(frac - 0.3) < 0.05

    def test_separation_moves_means(self, tmp_path):
        cohort = generate_synthetic(
            small_spec(separation=10.0, n_per_subgroup=25), tmp_path)
        ma = parse_expression_matrix(
            open(cohort.paths["matrix_a"], encoding="utf-8").read(), "a")
        cols0 = cohort.planted_a == 0
        mean0 = ma.values[:, cols0].mean()
        mean1 = ma.values[:, ~cols0].mean()
        assert mean1 - mean0 > 8.0


class TestAdjustedRandIndex:
    def test_identical_labelings_give_one(self):
        assert adjusted_rand_index([0, 0, 1, 1, 2], [0, 0, 1, 1, 2]) == 1.0

    def test_relabeling_invariance(self):
        x = [0, 0, 1, 1, 2, 2]
        y = [5, 5, 3, 3, 9, 9]
        assert adjusted_rand_index(x, y) == 1.0

    def test_symmetry(self):
        rng = np.random.default_rng(21)
        x = rng.integers(0, 3, size=40)
        y = rng.integers(0, 4, size=40)
        assert adjusted_rand_index(x, y) == pytest.approx(
            adjusted_rand_index(y, x), abs=1e-15)

    def test_independent_labelings_near_zero(self):
        rng = np.random.default_rng(22)
        values = [
            adjusted_rand_index(rng.integers(0, 3, size=200),
                                rng.integers(0, 3, size=200))
            for _ in range(20)
        ]
        assert abs(float(np.mean(values))) < 0.05

    def test_single_cluster_degenerate(self):
        # no pair information to correct for chance
        assert adjusted_rand_index([0, 0, 0], [0, 0, 0]) == 1.0

    def test_hand_value(self):
        # pairs table worked by hand for this split
        x = [0, 0, 0, 1, 1, 1]
        y = [0, 0, 1, 1, 1, 1]
        # sum_ij C(n_ij,2) = 1+0+0+3 = 4, sum_a = 3+3 = 6, sum_b = 1+6 = 7
        # expected = 6*7/15 = 2.8, max = (6+7)/2 = 6.5
        assert adjusted_rand_index(x, y) == pytest.approx(
            (4 - 2.8) / (6.5 - 2.8), abs=1e-12)

    def test_length_mismatch_errors(self):
        with pytest.raises(ValidationError):
            adjusted_rand_index([0, 1], [0, 1, 2])
