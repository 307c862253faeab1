import pytest
import yaml

from falsestructures.exceptions import ConfigValidationError
from falsestructures.models.config import ExperimentConfig
from falsestructures.models.interfaces import ExperimentKind
from falsestructures.utils.config import load_config, parse_override, read_config_file, validate


def violated(config: ExperimentConfig) -> dict[str, str]:
    return {violation.field: violation.constraint for violation in validate(config)}


@pytest.mark.unit
def test_default_config_is_valid():
    assert validate(ExperimentConfig()) == []


@pytest.mark.unit
def test_epsilon_above_bound_is_reported_on_epsilon():
    assert violated(ExperimentConfig(epsilon=0.02, delta=1e-4)) == {"epsilon": "ε < b²/(2(a−b))"}


@pytest.mark.unit
def test_delta_equal_to_epsilon():
    assert violated(ExperimentConfig(delta=0.01)) == {"delta": "0 < δ < ε"}


@pytest.mark.unit
def test_a_not_below_k():
    assert "a" in violated(ExperimentConfig(a=26))


@pytest.mark.unit
def test_every_violation_is_listed():
    found = violated(
        ExperimentConfig(
            grid_n=1,
            threshold=0.5,
            eta=0.0,
            severity_samples=10,
            exp2_batch_size=61,
            table_rows=[(0.01, 0.009)],
            exp2_seeds=[],
        )
    )
    assert {"grid_n", "threshold", "eta", "severity_samples", "exp2_batch_size", "table_rows.0", "exp2_seeds"} <= set(
        found
    )


@pytest.mark.unit
@pytest.mark.parametrize(
    ("sizes", "batches", "field"),
    [
        ([7, 5000, 5000], [7, 50, 50], "exp1_sizes"),
        ([7, 5000, 5000, 10000], [8, 50, 50, 50], "exp1_batch_sizes.0"),
        ([7, 0, 5000, 10000], [7, 50, 50, 50], "exp1_sizes.1"),
    ],
)
def test_training_set_sizes(sizes, batches, field):
    assert field in violated(ExperimentConfig(exp1_sizes=sizes, exp1_batch_sizes=batches))


@pytest.mark.unit
def test_probe_network_file_must_exist(tmp_path):
    config = ExperimentConfig(experiment=ExperimentKind.PROBE, network_file=tmp_path / "missing.fsn")
    assert "network_file" in violated(config)


@pytest.mark.unit
def test_overrides_win_over_the_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump({"exp2_epochs": 3, "exp2_seeds": [7], "grid_n": 50}))
    config = load_config(path, {"grid_n": 20})
    assert config.exp2_epochs == 3
    assert config.exp2_seeds == [7]
    assert config.grid_n == 20


@pytest.mark.unit
def test_environment_is_below_the_file(tmp_path, monkeypatch):
    monkeypatch.setenv("FALSESTRUCT_TEST_SIZE", "11")
    monkeypatch.setenv("FALSESTRUCT_SEED", "4")
    path = tmp_path / "run.yaml"
    path.write_text("seed: 9\n")
    config = load_config(path)
    assert config.test_size == 11
    assert config.seed == 9


@pytest.mark.unit
def test_schema_errors_become_violations():
    with pytest.raises(ConfigValidationError) as error:
        load_config(overrides={"grid_n": "many", "unknown_knob": 1})
    fields = {violation.field for violation in error.value.violations}
    assert {"grid_n", "unknown_knob"} <= fields


@pytest.mark.unit
def test_config_file_must_be_a_mapping(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigValidationError):
        read_config_file(path)
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert read_config_file(empty) == {}


@pytest.mark.unit
def test_overrides_keep_their_type():
    assert parse_override("[1, 2]") == [1, 2]
    assert parse_override("0.5") == 0.5
    assert parse_override("case2") == "case2"


@pytest.mark.unit
def test_seeds_follow_the_experiment():
    assert ExperimentConfig(exp1_seeds=[3]).seeds() == [3]
    assert ExperimentConfig(experiment=ExperimentKind.EXP2).seeds() == [0, 1, 2, 3, 4]
    assert ExperimentConfig(experiment=ExperimentKind.VERIFY, seed=5).seeds() == [5]
    assert "output_dir" not in ExperimentConfig().hashable()
