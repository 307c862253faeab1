"""Adversarial probe module"""

import pandas as pd

from falsestructures.case1.generators import diagnostic_sets
from falsestructures.case1.stable_network import build_stable_network
from falsestructures.case2.experiment import build_test_sets
from falsestructures.diagnostics.oracles import Classifier, NetworkClassifier, OracleClassifier, case2_false_oracle
from falsestructures.diagnostics.probes import CASE1_PERTURBERS, adversarial_probe
from falsestructures.exceptions import ParameterError
from falsestructures.models.config import ExperimentConfig
from falsestructures.models.constants import IMAGE_SIZE
from falsestructures.models.interfaces import ExperimentKind, Perturber
from falsestructures.modules.experiment_module import ExperimentModule
from falsestructures.nn.serialization import load_network
from falsestructures.reports.writers import ArtifactWriter
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

INPUT_SHAPES = {"case1": (2,), "case2": (1, IMAGE_SIZE, IMAGE_SIZE)}


def load_classifier(config: ExperimentConfig) -> tuple[str, Classifier | None]:
    """Network stored in network_file, None when no file is configured"""
    if config.network_file is None:
        return "", None
    net = load_network(config.network_file)
    if net.input_shape != INPUT_SHAPES[config.case]:
        raise ParameterError(
            f"{config.network_file} takes inputs of shape {net.input_shape}, {config.case} needs "
            f"{INPUT_SHAPES[config.case]}"
        )
    return config.network_file.name, NetworkClassifier(net)


class ProbingModule(ExperimentModule):
    """Flip rates of a classifier under the hand designed perturbations"""

    experiment: ExperimentKind = ExperimentKind.PROBE

    def execute(self, config: ExperimentConfig, writer: ArtifactWriter) -> None:
        """Probe the stored network, or the analytic reference of the case when none is given"""
        source, classifier = load_classifier(config)
        if config.case == "case1":
            records = self.probe_case1(config, source, classifier)
        else:
            records = self.probe_case2(config, source, classifier)
        writer.write_csv("probe/probes.csv", pd.DataFrame(records))

    @staticmethod
    def probe_case1(config: ExperimentConfig, source: str, classifier: Classifier | None) -> list[dict]:
        """Both x2 perturbers on the stable part of C_delta"""
        p = config.case1_problem()
        if classifier is None:
            source = "stable_network"
            classifier = NetworkClassifier(build_stable_network(p, config.eta, config.r))
        sets = diagnostic_sets(p, config.grid_n)
        dataset = sets.cdelta[sets.in_stable]
        records = []
        for perturber in CASE1_PERTURBERS:
            result = adversarial_probe(classifier, dataset, perturber, p.delta)
            records.append({"source": source, "set": "Cdelta"} | result.model_dump(mode="json"))
        return records

    @staticmethod
    def probe_case2(config: ExperimentConfig, source: str, classifier: Classifier | None) -> list[dict]:
        """Family swap on the tilde test set of every table row"""
        if classifier is None:
            source = "pixel_sum"
            classifier = OracleClassifier(case2_false_oracle())
        records = []
        for tests in build_test_sets(config.experiment2_settings()):
            result = adversarial_probe(classifier, tests.tilde, Perturber.CASE2_FAMILY_SWAP)
            records.append({"source": source, "b": tests.b, "c": tests.c} | result.model_dump(mode="json"))
        return records
