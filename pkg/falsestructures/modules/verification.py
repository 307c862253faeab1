"""False structure verification module"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from falsestructures.case1.generators import Lift, diagnostic_sets, sample_training_set
from falsestructures.case1.problem import exact_c0_severity
from falsestructures.case2.generators import enumerate_training_set
from falsestructures.case2.images import Family
from falsestructures.diagnostics.oracles import (
    DomainSampler,
    StructureOracle,
    case1_false_oracle,
    case1_original_oracle,
    case2_false_oracle,
    case2_original_oracle,
)
from falsestructures.diagnostics.severity import estimate_severity
from falsestructures.diagnostics.verifier import VerificationOutcome, aggregate_outcomes, verify_false_structure
from falsestructures.models.config import ExperimentConfig
from falsestructures.models.interfaces import ExperimentKind, VerificationStatus
from falsestructures.modules.experiment_module import ExperimentModule
from falsestructures.reports.writers import ArtifactWriter
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class VerificationInstance:
    """Original and candidate false structure with the training points and the laws to search"""

    f: StructureOracle
    g: StructureOracle
    T: np.ndarray
    witness_sampler: DomainSampler
    severity_sampler: DomainSampler
    exact_severity: float | None = None


def grid_sampler(grid: np.ndarray) -> DomainSampler:
    """Draw rows of a fixed grid uniformly"""
    return lambda rng, n: grid[rng.integers(0, len(grid), size=n)]


def case1_instance(config: ExperimentConfig, rng: np.random.Generator) -> VerificationInstance:
    """f_a against g(x) = [x2 != 0] on a fresh T_delta^r, witnesses from the C_0 grid"""
    p = config.case1_problem()
    g = case1_false_oracle(p)
    return VerificationInstance(
        f=case1_original_oracle(p),
        g=g,
        T=sample_training_set(p, config.r, Lift.DELTA, rng).points,
        witness_sampler=grid_sampler(diagnostic_sets(p, config.grid_n).c0),
        severity_sampler=g.sample,
        exact_severity=exact_c0_severity(p),
    )


def case2_instance(config: ExperimentConfig, row: int = 0) -> VerificationInstance:
    """Orientation against pixel sum on the 60 tilde images, witnesses from the hat family of one (b, c) row"""
    b, c = config.table_rows[row]
    g = case2_false_oracle(Family.HAT, b, c)
    return VerificationInstance(
        f=case2_original_oracle(Family.TILDE, b, c),
        g=g,
        T=enumerate_training_set(config.training_a).images,
        witness_sampler=g.sample,
        severity_sampler=g.sample,
    )


class VerificationModule(ExperimentModule):
    """Decide whether the candidate structure is a false structure and measure how much it disagrees"""

    experiment: ExperimentKind = ExperimentKind.VERIFY

    def execute(self, config: ExperimentConfig, writer: ArtifactWriter) -> None:
        """Outcome with severity per instance, predicate descriptions, the overall status and the witnesses

        The interval problem has one instance; the stripe problem has one per (b, c) table row.
        """
        rows = 1 if config.case == "case1" else len(config.table_rows)
        t_stream, *streams = np.random.SeedSequence([config.seed]).spawn(1 + 2 * rows)
        if config.case == "case1":
            instances = [case1_instance(config, np.random.default_rng(t_stream))]
        else:
            instances = [case2_instance(config, row) for row in range(rows)]

        records = []
        outcomes = []
        for row, instance in enumerate(instances):
            search_stream, severity_stream = streams[2 * row : 2 * row + 2]
            outcome = verify_false_structure(
                instance.f,
                instance.g,
                instance.T,
                instance.witness_sampler,
                config.witness_budget,
                np.random.default_rng(search_stream),
            )
            severity = estimate_severity(
                instance.f,
                instance.g,
                instance.severity_sampler,
                config.severity_samples,
                np.random.default_rng(severity_stream),
            )
            outcomes.append(outcome)
            records.append(
                outcome.to_record()
                | {
                    "case": config.case,
                    "row": row,
                    "seed": config.seed,
                    "training_points": len(instance.T),
                    "severity": severity.estimate,
                    "severity_half_width": severity.half_width,
                    "severity_samples": severity.n,
                    "exact_severity": instance.exact_severity,
                }
            )
            logger.info(
                "Row %d, %s vs %s: %s, severity %.4f +- %.4f",
                row,
                outcome.g_name,
                outcome.f_name,
                outcome.status.value,
                severity.estimate,
                severity.half_width,
            )

        overall = aggregate_outcomes(outcomes)
        writer.write_csv("verify/outcome.csv", pd.DataFrame(records))
        predicates = self.describe_predicates(outcomes[0]) + f"overall: {overall.value}\n"
        writer.write_text("verify/predicates.txt", predicates)
        self.write_points(config, writer, outcomes)
        logger.info("Overall status over %d instances: %s", len(outcomes), overall.value)

    @staticmethod
    def describe_predicates(outcome: VerificationOutcome) -> str:
        """One line per label and structure"""
        lines = []
        for name, predicates in zip((outcome.f_name, outcome.g_name), outcome.predicates, strict=True):
            lines += [f"{name} label {label}: {text}" for label, text in enumerate(predicates)]
        return "\n".join(lines) + "\n"

    @staticmethod
    def write_points(config: ExperimentConfig, writer: ArtifactWriter, outcomes: list[VerificationOutcome]) -> None:
        """Coordinates for the interval problem, one PGM image per row for stripes"""
        found = [(row, outcome) for row, outcome in enumerate(outcomes) if outcome.point is not None]
        if not found:
            return
        kinds = {
            row: "witness" if outcome.status is VerificationStatus.VERIFIED else "counterexample"
            for row, outcome in found
        }
        if config.case == "case1":
            frame = pd.DataFrame(
                [
                    {
                        "row": row,
                        "kind": kinds[row],
                        "x1": outcome.point[0],
                        "x2": outcome.point[1],
                        "f_label": outcome.f_label,
                        "g_label": outcome.g_label,
                    }
                    for row, outcome in found
                ]
            )
            writer.write_csv("verify/witnesses.csv", frame)
            return
        for row, outcome in found:
            name = f"verify/row{row}_{kinds[row]}_f{outcome.f_label}_g{outcome.g_label}.pgm"
            writer.write_pgm(name, outcome.point)
