"""Stable network construction module"""

import numpy as np
import pandas as pd

from falsestructures.case1.generators import diagnostic_sets
from falsestructures.case1.stable_network import build_stable_network, certify_stable_network
from falsestructures.diagnostics.attribution import classify_learned_structure
from falsestructures.diagnostics.oracles import NetworkClassifier, case1_false_oracle, case1_original_oracle
from falsestructures.models.config import ExperimentConfig
from falsestructures.models.interfaces import ExperimentKind
from falsestructures.modules.experiment_module import ExperimentModule
from falsestructures.reports.writers import ArtifactWriter
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

NETWORK_FILE = "stable/network.fsn"


class StableConstructionModule(ExperimentModule):
    """Build the analytic interval network and certify it"""

    experiment: ExperimentKind = ExperimentKind.CONSTRUCT_STABLE

    def execute(self, config: ExperimentConfig, writer: ArtifactWriter) -> None:
        """Serialized network plus a one row certificate"""
        p = config.case1_problem()
        net = build_stable_network(p, config.eta, config.r)
        writer.write_network(NETWORK_FILE, net)

        rng = np.random.default_rng(np.random.SeedSequence([config.seed]))
        certificate = certify_stable_network(
            p, net, config.eta, config.r, rng, config.certificate_samples, config.certificate_subsets
        )
        sets = diagnostic_sets(p, config.grid_n)
        verdict = classify_learned_structure(
            NetworkClassifier(net),
            sets.c0,
            sets.cdelta,
            case1_original_oracle(p),
            case1_false_oracle(p),
            config.threshold,
            mask=sets.in_stable,
        )
        record = certificate.model_dump() | {
            "holds": certificate.holds,
            "seed": config.seed,
            "verdict": verdict.verdict.value,
            "grid_agreement_C0": verdict.agreement_f_c0,
            "grid_agreement_Cdelta": verdict.agreement_f_cdelta,
            "grid_points": verdict.points,
        }
        writer.write_csv("stable/certificate.csv", pd.DataFrame([record]))
        if not certificate.holds:
            logger.warning("Certificate does not hold: %s", certificate)
