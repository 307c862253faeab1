"""Experiment module"""

from abc import abstractmethod

from falsestructures.exceptions import ParameterError
from falsestructures.models.config import ExperimentConfig
from falsestructures.models.interfaces import ExperimentKind
from falsestructures.reports.writers import ArtifactWriter
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

module_holder: dict[ExperimentKind, "ExperimentModule"] = {}


class ExperimentModule:
    """One runnable experiment"""

    experiment: ExperimentKind

    @abstractmethod
    def execute(self, config: ExperimentConfig, writer: ArtifactWriter) -> None:
        """Compute and write the artifacts of the experiment

        Args:
            config (ExperimentConfig): validated configuration
            writer (ArtifactWriter): destination of every artifact
        """

    def run(self, config: ExperimentConfig, writer: ArtifactWriter) -> None:
        """Execute with start and finish milestones"""
        logger.info("%s module Start, seeds %s, output in %s", self.experiment.value, config.seeds(), writer.output_dir)
        self.execute(config, writer)
        logger.info("%s module Finished: %d artifact(s)", self.experiment.value, len(writer.files))


def add_module(module: ExperimentModule) -> None:
    """Adds a new module in the module_holder

    Args:
        module (ExperimentModule): module to register under its experiment kind
    """
    if old_module := module_holder.get(module.experiment):
        logger.warning(
            "Set [%s] module for %s, replacing the old one [%s].",
            module.__class__.__name__,
            module.experiment,
            old_module.__class__.__name__,
        )
    module_holder[module.experiment] = module


def get_module(experiment: ExperimentKind) -> ExperimentModule:
    """Registered module of an experiment kind"""
    module = module_holder.get(experiment)
    if module is None:
        raise ParameterError(f"no module registered for experiment {experiment.value}")
    return module
