# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
import os
import sys
import argparse
import platform
from time import perf_counter
from typing import List, Optional
import numpy as np
import pandas as pd
import scipy
from src.configuration import configuration as cfg
from src.configuration.run_config import RunConfig, config_hash, dump_config, load_config
from src.control.experiment_controller import ExperimentController, ExperimentOutcome
from src.model.exceptions import ConfigurationException
from src.utility.bronze import json_utility, dictionary_utility
from src.utility.silver import file_system_utility


SUBCOMMANDS = ["simulate", "steady", "rate", "verify-kernel", "lyapunov", "flux", "doeblin", "counterexample"]
EXIT_SUCCESS = 0
EXIT_AUDIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RUN_ERROR = 3


def build_parser() -> argparse.ArgumentParser:
    """
    Function for building the command line parser.
    :return: Argument parser.
    """
    parser = argparse.ArgumentParser(prog="run_simulator.py",
                                     description="Particle simulator and audits for kinetic walls.")
    parser.add_argument("subcommand", choices=SUBCOMMANDS, help="Experiment to run.")
    parser.add_argument("--config", default=None, help="JSON run configuration. Defaults to the built-in defaults.")
    parser.add_argument("--seed", type=int, default=None, help="Master seed override (unsigned 64 bit).")
    parser.add_argument("--workers", type=int, default=None, help="Worker process count override.")
    parser.add_argument("--out", default=None, help="Output directory.")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="Dotted override with a JSON value, e.g. wall.r_perp=0.5. Repeatable.")
    return parser


def output_directory(subcommand: str, config: RunConfig, out: Optional[str] = None) -> str:
    """
    Function for resolving the output directory: flag, then config, then the output root.
    :param subcommand: Subcommand.
    :param config: Run configuration.
    :param out: Output directory flag.
    :return: Output directory.
    """
    if out:
        return out
    if config.output:
        return config.output
    return os.path.join(cfg.get_setting("KW_OUT_DIR", cfg.OUTPUT_ROOT), subcommand)


def build_manifest(subcommand: str, config: RunConfig) -> dict:
    """
    Function for building the run manifest. Holds nothing that varies between reruns of the same config.
    :param subcommand: Subcommand.
    :param config: Run configuration.
    :return: Manifest.
    """
    return {
        "subcommand": subcommand,
        "seed": config.simulation.master_seed,
        "config": dictionary_utility.without_keys(dump_config(config), [["simulation", "workers"], ["output"]]),
        "config_hash": config_hash(config),
        "versions": {"kinetic_walls": cfg.VERSION, "numpy": np.__version__, "scipy": scipy.__version__,
                     "pandas": pd.__version__, "python": platform.python_version()}
    }


def write_outcome(outcome: ExperimentOutcome, directory: str) -> None:
    """
    Function for writing an outcome's report and tables.
    :param outcome: Experiment outcome.
    :param directory: Target directory.
    """
    report = dict(outcome.report)
    report["passed"] = outcome.passed
    json_utility.save(report, os.path.join(directory, "report.json"))
    for name in sorted(outcome.tables):
        outcome.tables[name].to_csv(os.path.join(directory, f"{name}.csv"), index=False, lineterminator="\n")


def run(subcommand: str, config: RunConfig, out: str = None, workers: int = None) -> int:
    """
    Function for running a subcommand and writing its artifacts.
    :param subcommand: Subcommand.
    :param config: Run configuration.
    :param out: Output directory. Defaults to None in which case it is derived from the config.
    :param workers: Worker count override.
    :return: Exit status.
    """
    target = output_directory(subcommand, config, out)
    staging = file_system_utility.staging_path(target)
    file_system_utility.safely_remove_path(staging)
    file_system_utility.safely_create_path(staging)
    started = perf_counter()
    try:
        json_utility.save(build_manifest(subcommand, config), os.path.join(staging, "manifest.json"))
        controller = ExperimentController(config, workers=workers)
        outcome = controller.run(subcommand)
        write_outcome(outcome, staging)
        json_utility.save({"wall_clock_seconds": perf_counter() - started, "workers": controller.workers},
                          os.path.join(staging, "timing.json"))
        file_system_utility.promote_staging(staging, target)
    except Exception as error:
        cfg.LOGGER.error(f"{subcommand} failed: {error}")
        file_system_utility.safely_remove_path(staging)
        if isinstance(error, ConfigurationException):
            return EXIT_USAGE
        cfg.LOGGER.debug("Run failure", exc_info=True)
        return EXIT_RUN_ERROR
    cfg.LOGGER.info(f"Wrote {subcommand} results to {target}")
    if outcome.passed is False:
        cfg.LOGGER.warning(f"{subcommand} audit failed")
        return EXIT_AUDIT_FAILED
    return EXIT_SUCCESS


def main(argv: List[str] = None) -> int:
    """
    Main function for the command line interface.
    :param argv: Arguments. Defaults to None in which case the process arguments are used.
    :return: Exit status.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exit_:
        return EXIT_SUCCESS if exit_.code in [0, None] else EXIT_USAGE
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"simulation.master_seed={args.seed}")
    if args.workers is not None:
        overrides.append(f"simulation.workers={args.workers}")
    try:
        config = load_config(args.config, overrides)
    except ConfigurationException as error:
        cfg.LOGGER.error(str(error))
        return EXIT_USAGE
    except (OSError, ValueError) as error:
        cfg.LOGGER.error(f"Could not read configuration: {error}")
        return EXIT_USAGE
    return run(args.subcommand, config, args.out, args.workers)


if __name__ == "__main__":
    sys.exit(main())
