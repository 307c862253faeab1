"""Configuration loading and validation

Sources, highest precedence first: command line overrides, config file, FALSESTRUCT_* environment
variables, defaults.
"""

from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from falsestructures.case1.problem import Case1Problem
from falsestructures.exceptions import ConfigValidationError
from falsestructures.models.config import ExperimentConfig, Violation
from falsestructures.models.interfaces import ExperimentKind
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

PROBLEM_FIELDS = {"a < K": "a", "ε < b²/(2(a−b))": "epsilon", "0 < δ < ε": "delta"}
MIN_SEVERITY_SAMPLES = 100
TRAINING_SET_COUNT = 4
STRIPE_TRAINING_SIZE = 60


def read_config_file(path: Path) -> dict[str, Any]:
    """Flat YAML mapping of config keys"""
    with Path(path).open(encoding="utf-8") as stream:
        values = yaml.safe_load(stream)
    if values is None:
        return {}
    if not isinstance(values, dict):
        raise ConfigValidationError(
            [Violation(field="config_file", message=f"{path} is not a key: value mapping", constraint="mapping")]
        )
    return values


def parse_override(raw: str) -> Any:
    """Command line value parsed as YAML, so lists and numbers keep their type"""
    return yaml.safe_load(raw)


def load_config(path: Path | None = None, overrides: dict[str, Any] | None = None) -> ExperimentConfig:
    """Merge file and overrides over environment and defaults"""
    values = read_config_file(path) if path is not None else {}
    values.update(overrides or {})
    try:
        return ExperimentConfig(**values)
    except ValidationError as error:
        violations = [
            Violation(
                field=".".join(str(part) for part in item["loc"]) or "config",
                message=item["msg"],
                constraint=item["type"],
            )
            for item in error.errors()
        ]
        raise ConfigValidationError(violations) from error


def _problem_violations(config: ExperimentConfig) -> list[Violation]:
    found = []
    for name, value in (("a", config.a), ("K", config.K)):
        if value < 1:
            found.append(Violation(field=name, message=f"{name}={value} must be a positive integer", constraint="ℕ"))
    for name, value in (("epsilon", config.epsilon), ("delta", config.delta)):
        if value <= 0:
            found.append(Violation(field=name, message=f"{name}={value} must be positive", constraint="> 0"))
    if found:
        return found
    problem = Case1Problem.model_construct(a=config.a, K=config.K, epsilon=config.epsilon, delta=config.delta)
    return [
        Violation(field=PROBLEM_FIELDS[constraint], message=message, constraint=constraint)
        for constraint, message in problem.violations()
    ]


def _training_violations(config: ExperimentConfig) -> list[Violation]:
    found = []
    if config.exp1_epochs < 0:
        found.append(Violation(field="exp1_epochs", message="must be >= 0", constraint="epochs ≥ 0"))
    if len(config.exp1_sizes) != TRAINING_SET_COUNT or len(config.exp1_batch_sizes) != TRAINING_SET_COUNT:
        found.append(
            Violation(
                field="exp1_sizes",
                message=f"need {TRAINING_SET_COUNT} sizes and {TRAINING_SET_COUNT} batch sizes",
                constraint="four training sets",
            )
        )
    else:
        for index, (size, batch) in enumerate(zip(config.exp1_sizes, config.exp1_batch_sizes, strict=True)):
            if size < 1:
                found.append(Violation(field=f"exp1_sizes.{index}", message=f"size {size}", constraint="r ≥ 1"))
            elif not 1 <= batch <= size:
                found.append(
                    Violation(
                        field=f"exp1_batch_sizes.{index}",
                        message=f"batch {batch} for {size} samples",
                        constraint="1 ≤ batch ≤ dataset size",
                    )
                )
    if config.hidden_width is not None and config.hidden_width < 1:
        found.append(Violation(field="hidden_width", message="must be positive", constraint="width ≥ 1"))
    if config.exp2_epochs < 0:
        found.append(Violation(field="exp2_epochs", message="must be >= 0", constraint="epochs ≥ 0"))
    if not 1 <= config.exp2_batch_size <= STRIPE_TRAINING_SIZE:
        found.append(
            Violation(
                field="exp2_batch_size",
                message=f"batch {config.exp2_batch_size} for {STRIPE_TRAINING_SIZE} images",
                constraint="1 ≤ batch ≤ dataset size",
            )
        )
    if not config.exp1_seeds:
        found.append(Violation(field="exp1_seeds", message="no seed given", constraint="seeds non-empty"))
    if not config.exp2_seeds:
        found.append(Violation(field="exp2_seeds", message="no seed given", constraint="seeds non-empty"))
    if config.lr <= 0 or config.adam_epsilon <= 0:
        found.append(Violation(field="lr", message="lr and adam_epsilon must be positive", constraint="> 0"))
    for name, value in (("beta1", config.beta1), ("beta2", config.beta2)):
        if not 0 <= value < 1:
            found.append(Violation(field=name, message=f"{name}={value}", constraint="0 ≤ β < 1"))
    return found


def _stripe_violations(config: ExperimentConfig) -> list[Violation]:
    found = [
        Violation(field=f"table_rows.{index}", message=f"b={b}, c={c}", constraint="0 < b < c")
        for index, (b, c) in enumerate(config.table_rows)
        if not 0 < b < c
    ]
    if not config.table_rows:
        found.append(Violation(field="table_rows", message="no (b, c) row given", constraint="rows non-empty"))
    if config.test_size < 1:
        found.append(Violation(field="test_size", message=f"{config.test_size}", constraint="n ≥ 1"))
    if config.training_a <= 0:
        found.append(Violation(field="training_a", message=f"{config.training_a}", constraint="a > 0"))
    if config.sample_images < 0:
        found.append(Violation(field="sample_images", message=f"{config.sample_images}", constraint="k ≥ 0"))
    return found


def validate(config: ExperimentConfig) -> list[Violation]:
    """Every violated precondition of the configuration, empty when the config is usable"""
    found = _problem_violations(config)
    if config.grid_n < 2:
        found.append(Violation(field="grid_n", message=f"grid_n={config.grid_n}", constraint="grid_n ≥ 2"))
    if not 0.5 < config.threshold <= 1.0:
        found.append(Violation(field="threshold", message=f"{config.threshold}", constraint="threshold ∈ (0.5, 1]"))
    if config.eta <= 0:
        found.append(Violation(field="eta", message=f"eta={config.eta}", constraint="η > 0"))
    if config.r < 1:
        found.append(Violation(field="r", message=f"r={config.r}", constraint="r ≥ 1"))
    if config.certificate_samples < max(config.r, 1) or config.certificate_subsets < 1:
        found.append(
            Violation(
                field="certificate_samples",
                message="need at least r samples and one subset",
                constraint="samples ≥ r, subsets ≥ 1",
            )
        )
    if config.witness_budget < 1:
        found.append(Violation(field="witness_budget", message=f"{config.witness_budget}", constraint="budget ≥ 1"))
    if config.severity_samples < MIN_SEVERITY_SAMPLES:
        found.append(
            Violation(
                field="severity_samples",
                message=f"{config.severity_samples}",
                constraint=f"n ≥ {MIN_SEVERITY_SAMPLES}",
            )
        )
    if config.network_file is not None and config.experiment is ExperimentKind.PROBE:
        if not config.network_file.is_file():
            found.append(Violation(field="network_file", message=f"{config.network_file} not found", constraint="file"))
    found += _training_violations(config)
    found += _stripe_violations(config)
    for violation in found:
        logger.debug("Config violation %s", violation)
    return found
