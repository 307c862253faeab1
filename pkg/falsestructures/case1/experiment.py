"""Train networks on lifted interval data and attribute the structure each one learned"""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from falsestructures.case1.generators import DiagnosticSets, Lift, PointSet, diagnostic_sets, sample_training_set
from falsestructures.case1.problem import Case1Problem
from falsestructures.diagnostics.attribution import classify_learned_structure
from falsestructures.diagnostics.oracles import NetworkClassifier, case1_false_oracle, case1_original_oracle
from falsestructures.diagnostics.probes import adversarial_probe
from falsestructures.models.constants import ATTRIBUTION_THRESHOLD, CASE1_GRID_N
from falsestructures.models.interfaces import AttributionVerdict, Perturber, ProbeResult
from falsestructures.nn.layers import Dense, ReLU
from falsestructures.nn.network import Network
from falsestructures.nn.optimizer import AdamHyperParameters
from falsestructures.nn.training import TrainingResult, train
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

FOURTH_LIFTS = ("zero", "delta", "both")


class TrainingSetSpec(BaseModel):
    """One network of the experiment and the data it is trained on"""

    name: str
    size: int = Field(ge=1)
    lift: Lift
    batch_size: int = Field(ge=1)


def default_training_sets(
    sizes: tuple[int, ...] = (7, 5000, 5000, 10000),
    batch_sizes: tuple[int, ...] = (7, 50, 50, 50),
    fourth_lift: str = "zero",
) -> list[TrainingSetSpec]:
    """Psi1 on T_delta^7, Psi2 on T_0^5000, Psi3 on T_delta^5000, Psi4 on the 10000 sample set

    fourth_lift picks the lift of Psi4; "both" trains Psi4 on T_0 and an extra Psi4_delta on T_delta.
    """
    lifts = [Lift.DELTA, Lift.ZERO, Lift.DELTA]
    specs = [
        TrainingSetSpec(name=f"Psi{index + 1}", size=size, lift=lift, batch_size=batch)
        for index, (size, lift, batch) in enumerate(zip(sizes[:3], lifts, batch_sizes[:3], strict=True))
    ]
    fourth = Lift.ZERO if fourth_lift in ("zero", "both") else Lift.DELTA
    specs.append(TrainingSetSpec(name="Psi4", size=sizes[3], lift=fourth, batch_size=batch_sizes[3]))
    if fourth_lift == "both":
        specs.append(TrainingSetSpec(name="Psi4_delta", size=sizes[3], lift=Lift.DELTA, batch_size=batch_sizes[3]))
    return specs


class Experiment1Settings(BaseModel):
    """Everything run_experiment_1 needs"""

    problem: Case1Problem = Field(default_factory=Case1Problem)
    training_sets: list[TrainingSetSpec] = Field(default_factory=default_training_sets)
    epochs: int = Field(default=30000, ge=0)
    grid_n: int = Field(default=CASE1_GRID_N, ge=2)
    hidden_width: int | None = None
    threshold: float = ATTRIBUTION_THRESHOLD
    adam: AdamHyperParameters = Field(default_factory=AdamHyperParameters)
    log_every: int = 1000

    @property
    def width(self) -> int:
        """First layer width, 4K unless overridden"""
        return self.hidden_width or 4 * self.problem.K


@dataclass
class Experiment1NetworkResult:
    """Trained network with its diagnostics"""

    spec: TrainingSetSpec
    training_set: PointSet
    training: TrainingResult
    verdict: AttributionVerdict
    predictions_c0: np.ndarray
    predictions_cdelta: np.ndarray
    probe: ProbeResult

    @property
    def network(self) -> Network:
        """The trained network"""
        return self.training.network

    def loss_frame(self) -> pd.DataFrame:
        """Per epoch mean of the batch-mean losses"""
        means = self.training.epoch_means()
        return pd.DataFrame({"epoch": np.arange(1, len(means) + 1), "mean_batch_loss": means})


@dataclass
class Experiment1Report:
    """All networks of one seed"""

    settings: Experiment1Settings
    seed: int
    sets: DiagnosticSets
    networks: list[Experiment1NetworkResult] = field(default_factory=list)

    def predictions_frame(self) -> pd.DataFrame:
        """One row per grid point and set, one prediction column per network"""
        frames = []
        for name, points in (("C0", self.sets.c0), ("Cdelta", self.sets.cdelta)):
            frame = pd.DataFrame({"set": name, "x1": points[:, 0], "x2": points[:, 1], "f_a": self.sets.labels})
            for result in self.networks:
                predictions = result.predictions_c0 if name == "C0" else result.predictions_cdelta
                frame[f"prediction_{result.spec.name}"] = predictions
            frame["in_S_eps"] = self.sets.in_stable
            frames.append(frame)
        return pd.concat(frames, ignore_index=True)

    def summary_frame(self) -> pd.DataFrame:
        """Attribution, agreement scores, flip rate and final summed loss per network"""
        rows = [
            {
                "network": result.spec.name,
                "size": result.spec.size,
                "lift": result.spec.lift.value,
                "batch_size": result.spec.batch_size,
                "seed": self.seed,
                "verdict": result.verdict.verdict.value,
                "agreement_f_C0": result.verdict.agreement_f_c0,
                "agreement_f_Cdelta": result.verdict.agreement_f_cdelta,
                "agreement_g": result.verdict.agreement_g,
                "threshold": result.verdict.threshold,
                "flip_rate_zero_x2": result.probe.flip_rate,
                "final_loss_sum": result.training.final_loss_sum,
            }
            for result in self.networks
        ]
        return pd.DataFrame(rows)


def build_interval_network(width: int, rng: np.random.Generator) -> Network:
    """Dense(2, width) -> ReLU -> Dense(width, 1) with Glorot weights"""
    return Network([Dense(2, width, rng=rng), ReLU(), Dense(width, 1, rng=rng)], (2,))


def network_streams(seed: int, index: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Independent data, init and shuffle generators of one network"""
    data, init, shuffle = np.random.SeedSequence([seed, index]).spawn(3)
    return np.random.default_rng(data), np.random.default_rng(init), np.random.default_rng(shuffle)


def run_experiment_1(
    settings: Experiment1Settings,
    seed: int,
    on_result: Callable[[Experiment1NetworkResult], None] | None = None,
) -> Experiment1Report:
    """Train one network per training set and attribute each on the stable part of C_0 and C_delta

    Args:
        settings (Experiment1Settings): problem, training sets and training constants
        seed (int): root seed, every network derives its own streams from it
        on_result (Callable | None): called after each network, before the next one trains
    """
    p = settings.problem
    sets = diagnostic_sets(p, settings.grid_n)
    f = case1_original_oracle(p)
    g = case1_false_oracle(p)
    report = Experiment1Report(settings=settings, seed=seed, sets=sets)

    for index, spec in enumerate(settings.training_sets):
        data_rng, init_rng, shuffle_rng = network_streams(seed, index)
        training_set = sample_training_set(p, spec.size, spec.lift, data_rng)
        net = build_interval_network(settings.width, init_rng)
        logger.info(
            "Training %s on %d points (lift %s, batch %d) for %d epochs",
            spec.name,
            spec.size,
            spec.lift.value,
            spec.batch_size,
            settings.epochs,
        )
        training = train(
            net,
            training_set.as_dataset(),
            settings.epochs,
            spec.batch_size,
            shuffle_rng,
            settings.adam,
            settings.log_every,
        )
        classifier = NetworkClassifier(net)
        verdict = classify_learned_structure(
            classifier, sets.c0, sets.cdelta, f, g, settings.threshold, mask=sets.in_stable
        )
        probe = adversarial_probe(classifier, sets.cdelta[sets.in_stable], Perturber.CASE1_ZERO_X2)
        result = Experiment1NetworkResult(
            spec=spec,
            training_set=training_set,
            training=training,
            verdict=verdict,
            predictions_c0=classifier.predict_labels(sets.c0),
            predictions_cdelta=classifier.predict_labels(sets.cdelta),
            probe=probe,
        )
        report.networks.append(result)
        logger.info(
            "%s learned the %s structure (agreement with g %.3f)", spec.name, verdict.verdict.value, verdict.agreement_g
        )
        if on_result is not None:
            on_result(result)
    return report
