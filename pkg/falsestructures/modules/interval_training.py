"""Interval training module"""

import pandas as pd

from falsestructures.case1.experiment import Experiment1NetworkResult, run_experiment_1
from falsestructures.models.config import ExperimentConfig
from falsestructures.models.interfaces import ExperimentKind
from falsestructures.modules.experiment_module import ExperimentModule
from falsestructures.reports.writers import ArtifactWriter
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)


class IntervalTrainingModule(ExperimentModule):
    """Train the interval networks and attribute the structure each one learned"""

    experiment: ExperimentKind = ExperimentKind.EXP1

    def execute(self, config: ExperimentConfig, writer: ArtifactWriter) -> None:
        """Loss history per network, written as soon as the network is trained, then predictions and summary"""
        settings = config.experiment1_settings()
        summaries = []
        for seed in config.exp1_seeds:
            folder = f"exp1/seed_{seed}"

            def write_loss(result: Experiment1NetworkResult, folder: str = folder) -> None:
                writer.write_csv(f"{folder}/loss_{result.spec.name}.csv", result.loss_frame())

            report = run_experiment_1(settings, seed, on_result=write_loss)
            writer.write_csv(f"{folder}/predictions.csv", report.predictions_frame())
            summaries.append(report.summary_frame())
        summary = pd.concat(summaries, ignore_index=True)
        writer.write_csv("exp1/summary.csv", summary)
        for row in summary.itertuples():
            logger.info("seed %d %s: %s", row.seed, row.network, row.verdict)
