"""Run configuration"""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel
from pydantic_settings import BaseSettings, SettingsConfigDict

from falsestructures.case1.experiment import Experiment1Settings, default_training_sets
from falsestructures.case1.problem import Case1Problem
from falsestructures.case2.experiment import Experiment2Settings
from falsestructures.models.constants import (
    ADAM_BETA1,
    ADAM_BETA2,
    ADAM_EPSILON,
    ADAM_LR,
    ATTRIBUTION_THRESHOLD,
    CASE1_A,
    CASE1_DELTA,
    CASE1_EPSILON,
    CASE1_GRID_N,
    CASE1_K,
    TABLE1_ROWS,
    TRAINING_A,
)
from falsestructures.models.interfaces import ExperimentKind
from falsestructures.nn.optimizer import AdamHyperParameters

ENV_PREFIX = "FALSESTRUCT_"


class Violation(BaseModel):
    """One violated precondition"""

    field: str
    message: str
    constraint: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message} (constraint {self.constraint})"


class ExperimentConfig(BaseSettings):
    """Every knob of a run, flat so that each field maps to one flag and one file key"""

    model_config = SettingsConfigDict(env_prefix=ENV_PREFIX, extra="forbid")

    experiment: ExperimentKind = ExperimentKind.EXP1
    output_dir: Path = Path("artifacts")
    log_level: str = "INFO"

    # interval problem
    a: int = CASE1_A
    K: int = CASE1_K
    epsilon: float = CASE1_EPSILON
    delta: float = CASE1_DELTA
    grid_n: int = CASE1_GRID_N
    threshold: float = ATTRIBUTION_THRESHOLD

    # interval training
    exp1_epochs: int = 30000
    exp1_sizes: list[int] = [7, 5000, 5000, 10000]
    exp1_batch_sizes: list[int] = [7, 50, 50, 50]
    exp1_seeds: list[int] = [0]
    fourth_lift: Literal["zero", "delta", "both"] = "zero"
    hidden_width: int | None = None
    exp1_log_every: int = 1000

    # analytic stable network
    eta: float = 1e-3
    r: int = 7
    certificate_samples: int = 100_000
    certificate_subsets: int = 100

    # stripe training
    exp2_epochs: int = 10
    exp2_batch_size: int = 60
    exp2_seeds: list[int] = [0, 1, 2, 3, 4]
    table_rows: list[tuple[float, float]] = list(TABLE1_ROWS)
    test_size: int = 1000
    test_seed: int = 0
    training_a: float = TRAINING_A
    dense_activation: bool = False
    sample_images: int = 0
    exp2_log_every: int = 1

    # stable network, verification and probes
    seed: int = 0
    case: Literal["case1", "case2"] = "case1"
    witness_budget: int = 10_000
    severity_samples: int = 10_000
    network_file: Path | None = None

    # Adam
    lr: float = ADAM_LR
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    adam_epsilon: float = ADAM_EPSILON

    def seeds(self) -> list[int]:
        """Seeds used by the selected experiment"""
        if self.experiment is ExperimentKind.EXP1:
            return list(self.exp1_seeds)
        if self.experiment is ExperimentKind.EXP2:
            return list(self.exp2_seeds)
        return [self.seed]

    def hashable(self) -> dict:
        """Dump without the fields that do not change results"""
        return self.model_dump(mode="json", exclude={"output_dir", "log_level"})

    def adam(self) -> AdamHyperParameters:
        """Adam constants"""
        return AdamHyperParameters(lr=self.lr, beta1=self.beta1, beta2=self.beta2, epsilon=self.adam_epsilon)

    def case1_problem(self) -> Case1Problem:
        """Interval problem, raises ConstructionError when invalid"""
        return Case1Problem(a=self.a, K=self.K, epsilon=self.epsilon, delta=self.delta)

    def experiment1_settings(self) -> Experiment1Settings:
        """Settings of the interval training"""
        return Experiment1Settings(
            problem=self.case1_problem(),
            training_sets=default_training_sets(
                tuple(self.exp1_sizes), tuple(self.exp1_batch_sizes), self.fourth_lift
            ),
            epochs=self.exp1_epochs,
            grid_n=self.grid_n,
            hidden_width=self.hidden_width,
            threshold=self.threshold,
            adam=self.adam(),
            log_every=self.exp1_log_every,
        )

    def experiment2_settings(self) -> Experiment2Settings:
        """Settings of the stripe training"""
        return Experiment2Settings(
            epochs=self.exp2_epochs,
            batch_size=self.exp2_batch_size,
            seeds=self.exp2_seeds,
            rows=self.table_rows,
            test_size=self.test_size,
            test_seed=self.test_seed,
            training_a=self.training_a,
            dense_activation=self.dense_activation,
            adam=self.adam(),
            log_every=self.exp2_log_every,
        )
