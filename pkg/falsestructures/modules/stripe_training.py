"""Stripe training module"""

from falsestructures.case2.experiment import Experiment2Report, SeedResult, run_experiment_2, sample_images
from falsestructures.models.config import ExperimentConfig
from falsestructures.models.interfaces import ExperimentKind
from falsestructures.modules.experiment_module import ExperimentModule
from falsestructures.reports.writers import ArtifactWriter
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

TABLE_FILE = "exp2/table.csv"


class StripeTrainingModule(ExperimentModule):
    """Train the stripe CNN per seed and fill the accuracy table"""

    experiment: ExperimentKind = ExperimentKind.EXP2

    def execute(self, config: ExperimentConfig, writer: ArtifactWriter) -> None:
        """Table rewritten after every seed, then the best seed's rows and optional image dumps"""

        def write_table(report: Experiment2Report, _: SeedResult) -> None:
            writer.write_csv(TABLE_FILE, report.table_frame())

        report = run_experiment_2(config.experiment2_settings(), on_seed=write_table)
        writer.write_csv(TABLE_FILE, report.table_frame())
        writer.write_csv("exp2/best_seed.csv", report.best_frame())
        logger.info("Best seed %d", report.best_seed().seed)
        if config.sample_images > 0:
            for name, image in sample_images(report, config.sample_images):
                writer.write_pgm(f"exp2/images/{name}", image)
