"""Train the stripe CNN on the 60 tilde images and sweep the accuracy table over both colour codes"""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from falsestructures.case2.cnn import build_cnn
from falsestructures.case2.generators import StripeSet, enumerate_training_set, sample_test_set
from falsestructures.case2.images import Family, pixel_sum_g_many
from falsestructures.diagnostics.oracles import NetworkClassifier
from falsestructures.diagnostics.probes import adversarial_probe
from falsestructures.models.constants import TABLE1_ROWS, TRAINING_A
from falsestructures.models.interfaces import Perturber
from falsestructures.nn.network import Network
from falsestructures.nn.optimizer import AdamHyperParameters
from falsestructures.nn.training import TrainingResult, train
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

TEST_STREAM = 1_000_003


class Experiment2Settings(BaseModel):
    """Everything run_experiment_2 needs"""

    epochs: int = Field(default=10, ge=0)
    batch_size: int = Field(default=60, ge=1)
    seeds: list[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4])
    rows: list[tuple[float, float]] = Field(default_factory=lambda: list(TABLE1_ROWS))
    test_size: int = Field(default=1000, ge=1)
    test_seed: int = 0
    training_a: float = Field(default=TRAINING_A, gt=0)
    dense_activation: bool = False
    adam: AdamHyperParameters = Field(default_factory=AdamHyperParameters)
    log_every: int = 1


@dataclass(frozen=True)
class EvaluationSets:
    """The tilde and hat test sets of one (b, c) row"""

    b: float
    c: float
    tilde: StripeSet
    hat: StripeSet

    def of(self, family: Family) -> StripeSet:
        """Test set of one colour code"""
        return self.tilde if family is Family.TILDE else self.hat


@dataclass
class SeedResult:
    """One trained network with its predictions on every test set"""

    seed: int
    training: TrainingResult
    predictions: dict[tuple[int, Family], np.ndarray]
    flip_rates: list[float]

    @property
    def network(self) -> Network:
        """The trained network"""
        return self.training.network


@dataclass
class Experiment2Report:
    """Accuracy table for every seed plus the pixel sum baseline"""

    settings: Experiment2Settings
    training_set: StripeSet
    test_sets: list[EvaluationSets]
    seeds: list[SeedResult] = field(default_factory=list)

    def accuracy(self, result: SeedResult, row: int, family: Family) -> float:
        """Fraction of test images the seed's network labels correctly"""
        return float((result.predictions[(row, family)] == self.test_sets[row].of(family).labels).mean())

    def baseline_accuracy(self, row: int, family: Family) -> float:
        """Accuracy of the pixel sum classifier"""
        test = self.test_sets[row].of(family)
        return float((pixel_sum_g_many(test.images) == test.labels).mean())

    def table_frame(self) -> pd.DataFrame:
        """Columns b, c, seed, acc_tilde, acc_hat, acc_g_tilde, acc_g_hat, flip_rate_swap (accuracies as fractions)"""
        baseline = {
            row: (self.baseline_accuracy(row, Family.TILDE), self.baseline_accuracy(row, Family.HAT))
            for row in range(len(self.test_sets))
        }
        records = [
            {
                "b": tests.b,
                "c": tests.c,
                "seed": result.seed,
                "acc_tilde": self.accuracy(result, row, Family.TILDE),
                "acc_hat": self.accuracy(result, row, Family.HAT),
                "acc_g_tilde": baseline[row][0],
                "acc_g_hat": baseline[row][1],
                "flip_rate_swap": result.flip_rates[row],
            }
            for result in self.seeds
            for row, tests in enumerate(self.test_sets)
        ]
        return pd.DataFrame(records)

    def best_seed(self) -> SeedResult:
        """Seed with the largest acc_tilde - acc_hat on the first row"""
        return max(
            self.seeds, key=lambda result: self.accuracy(result, 0, Family.TILDE) - self.accuracy(result, 0, Family.HAT)
        )

    def best_frame(self) -> pd.DataFrame:
        """table_frame restricted to the best seed"""
        table = self.table_frame()
        return table[table["seed"] == self.best_seed().seed].reset_index(drop=True)


def build_test_sets(settings: Experiment2Settings) -> list[EvaluationSets]:
    """Sample the tilde and hat sets of every row from the test stream, shared by all seeds"""
    streams = np.random.SeedSequence([settings.test_seed, TEST_STREAM]).spawn(len(settings.rows))
    test_sets = []
    for (b, c), stream in zip(settings.rows, streams, strict=True):
        rng = np.random.default_rng(stream)
        tilde = sample_test_set(Family.TILDE, b, c, settings.test_size, rng)
        hat = sample_test_set(Family.HAT, b, c, settings.test_size, rng)
        test_sets.append(EvaluationSets(b=b, c=c, tilde=tilde, hat=hat))
    return test_sets


def run_experiment_2(
    settings: Experiment2Settings,
    on_seed: Callable[[Experiment2Report, SeedResult], None] | None = None,
) -> Experiment2Report:
    """Train one CNN per seed and score it on every row's tilde and hat test sets

    Args:
        settings (Experiment2Settings): training constants, seeds and table rows
        on_seed (Callable | None): called after each seed with the report so far
    """
    training_set = enumerate_training_set(settings.training_a)
    report = Experiment2Report(settings=settings, training_set=training_set, test_sets=build_test_sets(settings))
    for row, tests in enumerate(report.test_sets):
        logger.info(
            "Pixel sum baseline at (b, c)=(%g, %g): tilde %.3f, hat %.3f",
            tests.b,
            tests.c,
            report.baseline_accuracy(row, Family.TILDE),
            report.baseline_accuracy(row, Family.HAT),
        )

    for seed in settings.seeds:
        init_stream, shuffle_stream = np.random.SeedSequence([seed]).spawn(2)
        net = build_cnn(np.random.default_rng(init_stream), settings.dense_activation)
        logger.info("Training stripe CNN, seed %d (%d parameters)", seed, net.param_count)
        training = train(
            net,
            training_set.as_dataset(),
            settings.epochs,
            settings.batch_size,
            np.random.default_rng(shuffle_stream),
            settings.adam,
            settings.log_every,
        )
        classifier = NetworkClassifier(net)
        predictions = {
            (row, family): classifier.predict_labels(tests.of(family).images)
            for row, tests in enumerate(report.test_sets)
            for family in Family
        }
        flip_rates = [
            adversarial_probe(classifier, tests.tilde, Perturber.CASE2_FAMILY_SWAP).flip_rate
            for tests in report.test_sets
        ]
        result = SeedResult(seed=seed, training=training, predictions=predictions, flip_rates=flip_rates)
        report.seeds.append(result)
        logger.info(
            "Seed %d: tilde %.3f, hat %.3f on the first row",
            seed,
            report.accuracy(result, 0, Family.TILDE),
            report.accuracy(result, 0, Family.HAT),
        )
        if on_seed is not None:
            on_seed(report, result)
    return report


def sample_images(report: Experiment2Report, k: int) -> list[tuple[str, np.ndarray]]:
    """First k images of every test set, named after the best seed's predicted label

    Names look like row0_tilde_003_pred1.pgm.
    """
    best = report.best_seed()
    dumps = []
    for row, tests in enumerate(report.test_sets):
        for family in Family:
            images = tests.of(family).images[:k]
            predicted = best.predictions[(row, family)][:k]
            dumps += [
                (f"row{row}_{family.value}_{index:03d}_pred{int(label)}.pgm", image)
                for index, (image, label) in enumerate(zip(images, predicted, strict=True))
            ]
    return dumps
