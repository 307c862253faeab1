"""Main"""

import argparse
import sys
from pathlib import Path

import yaml

from falsestructures.exceptions import ConfigValidationError, DivergedError, FalseStructuresError
from falsestructures.models.config import ExperimentConfig
from falsestructures.models.interfaces import ExperimentKind
from falsestructures.modules.experiment_module import add_module, get_module, module_holder
from falsestructures.modules.interval_training import IntervalTrainingModule
from falsestructures.modules.probing import ProbingModule
from falsestructures.modules.stable_construction import StableConstructionModule
from falsestructures.modules.stripe_training import StripeTrainingModule
from falsestructures.modules.verification import VerificationModule
from falsestructures.reports.manifest import config_hash, write_manifest
from falsestructures.reports.writers import ArtifactWriter
from falsestructures.utils.config import load_config, parse_override, validate
from falsestructures.utils.logging import get_logger, set_log_level

logger = get_logger("application")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID_CONFIG = 2
EXIT_DIVERGED = 3

VERBS: dict[str, ExperimentKind | None] = {
    "exp1": ExperimentKind.EXP1,
    "exp2": ExperimentKind.EXP2,
    "construct-stable": ExperimentKind.CONSTRUCT_STABLE,
    "verify-false-structure": ExperimentKind.VERIFY,
    "probe": ExperimentKind.PROBE,
    "validate": None,
}
CONFIG_DUMP = "config.yaml"


def init() -> None:
    """Register every experiment module"""
    add_module(IntervalTrainingModule())
    add_module(StripeTrainingModule())
    add_module(StableConstructionModule())
    add_module(VerificationModule())
    add_module(ProbingModule())
    logger.debug("Registered modules: %s", ", ".join(kind.value for kind in module_holder))


def flag_name(field: str) -> str:
    """Command line flag of a config field"""
    return "--" + field.lower().replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    """One sub command per verb, every config field as a flag"""
    fields = argparse.ArgumentParser(add_help=False)
    fields.add_argument("--config", type=Path, default=None, help="flat YAML file of config keys")
    for name, info in ExperimentConfig.model_fields.items():
        fields.add_argument(
            flag_name(name),
            dest=name,
            type=parse_override,
            default=argparse.SUPPRESS,
            help=f"(default: {info.default})",
        )

    parser = argparse.ArgumentParser(prog="falsestructures", description="False structure experiments")
    verbs = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        verbs.add_parser(verb, parents=[fields])
    return parser


def run(config: ExperimentConfig) -> int:
    """Validate, execute the configured experiment and write the manifest, returns the exit status"""
    set_log_level(config.log_level)
    if violations := validate(config):
        for violation in violations:
            logger.error("Invalid configuration: %s", violation)
        return EXIT_INVALID_CONFIG

    writer = ArtifactWriter(config.output_dir)
    writer.write_text(CONFIG_DUMP, yaml.safe_dump(config.hashable(), sort_keys=True))
    digest = config_hash(config.hashable())
    seeds = config.seeds()
    try:
        get_module(config.experiment).run(config, writer)
    except DivergedError as error:
        logger.exception("Experiment %s diverged", config.experiment.value)
        writer.mark_incomplete(str(error))
        write_manifest(config.output_dir, writer.files, digest, config.experiment.value, seeds)
        return EXIT_DIVERGED
    except FalseStructuresError:
        logger.exception("Experiment %s failed", config.experiment.value)
        return EXIT_FAILURE
    write_manifest(config.output_dir, writer.files, digest, config.experiment.value, seeds)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Command line entry point"""
    arguments = vars(build_parser().parse_args(argv))
    verb = arguments.pop("verb")
    path = arguments.pop("config")
    if (kind := VERBS[verb]) is not None:
        arguments["experiment"] = kind
    try:
        config = load_config(path, arguments)
    except ConfigValidationError as error:
        for violation in error.violations:
            logger.error("Invalid configuration: %s", violation)
        return EXIT_INVALID_CONFIG

    if verb == "validate":
        violations = validate(config)
        for violation in violations:
            print(violation)
        if not violations:
            print("ok")
        return EXIT_INVALID_CONFIG if violations else EXIT_OK

    init()
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
