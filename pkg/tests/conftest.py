import pytest

from stratix import SyntheticCohortSpec, generate_synthetic


@pytest.fixture(scope="session")
def small_cohort(tmp_path_factory):
    """2x2 planted cohort, 8 per cell (32 samples), strong separation."""
    out = tmp_path_factory.mktemp("cohort")
    spec = SyntheticCohortSpec(
        n_per_subgroup=8, subgroups_a=2, subgroups_b=2,
        features_a=6, features_b=5, separation=6.0,
        hazards=((1.0, 1.0), (1.0, 4.0)), censoring_rate=0.1, seed=3,
    )
    return generate_synthetic(spec, out)


def config_yaml(cohort, out_dir, extra: str = "") -> str:
    return (
        "inputs:\n"
        f"  matrix_a: {cohort.paths['matrix_a']}\n"
        f"  matrix_b: {cohort.paths['matrix_b']}\n"
        f"  clinical: {cohort.paths['clinical']}\n"
        f"output_dir: {out_dir}\n"
        "cluster:\n"
        "  a: {method: kmeans, k: 2, seed: 0}\n"
        "  b: {method: kmeans, k: 2, seed: 0}\n"
        + extra
    )
