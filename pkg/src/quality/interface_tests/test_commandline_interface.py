# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
import os
import unittest
from src.configuration import configuration as cfg
from src.interfaces import commandline_interface
from src.utility.bronze import json_utility
from src.utility.silver.file_system_utility import safely_create_path, safely_remove_path


TESTING_PATH = os.path.join(cfg.PATHS.TEST_PATH, "commandline")
SMALL_SIMULATION = ["--set", "simulation.particles=500", "--set", "simulation.snapshots=[0.0, 0.5]",
                    "--set", "simulation.end_time=0.5", "--set", "simulation.velocity_bins=8"]


def read_bytes(path: str) -> bytes:
    """
    Function for reading a file as bytes.
    :param path: File path.
    :return: File content.
    """
    with open(path, "rb") as in_file:
        return in_file.read()


class CommandlineInterfaceTest(unittest.TestCase):
    """
    Test case class for testing the command line interface.
    """

    def test_01_verify_kernel(self) -> None:
        """
        Method for testing the kernel audit run and its artifacts.
        """
        target = os.path.join(TESTING_PATH, "kernel")
        self.assertEqual(commandline_interface.main(["verify-kernel", "--out", target]),
                         commandline_interface.EXIT_SUCCESS)
        for file_name in ["manifest.json", "report.json", "timing.json", "kernel_residuals.csv"]:
            self.assertTrue(os.path.exists(os.path.join(target, file_name)))
        manifest = json_utility.load(os.path.join(target, "manifest.json"))
        self.assertEqual(manifest["subcommand"], "verify-kernel")
        self.assertEqual(manifest["versions"]["kinetic_walls"], cfg.VERSION)
        self.assertTrue(json_utility.load(os.path.join(target, "report.json"))["passed"])
        self.assertFalse(os.path.exists(os.path.join(TESTING_PATH, ".kernel.staging")))

    def test_02_usage_errors(self) -> None:
        """
        Method for testing exit codes of usage and configuration errors.
        """
        self.assertEqual(commandline_interface.main(["integrate"]), commandline_interface.EXIT_USAGE)
        self.assertEqual(commandline_interface.main([]), commandline_interface.EXIT_USAGE)
        target = os.path.join(TESTING_PATH, "invalid")
        self.assertEqual(commandline_interface.main(["simulate", "--set", "weights.alpha=2.5", "--out", target]),
                         commandline_interface.EXIT_USAGE)
        self.assertFalse(os.path.exists(target))
        self.assertEqual(commandline_interface.main(["simulate", "--config",
                                                     os.path.join(TESTING_PATH, "missing.json")]),
                         commandline_interface.EXIT_USAGE)
        self.assertEqual(commandline_interface.main(["simulate", "--set", "wall.r_perp"]),
                         commandline_interface.EXIT_USAGE)

    def test_03_run_errors(self) -> None:
        """
        Method for testing that failing experiments leave no partial output.
        """
        target = os.path.join(TESTING_PATH, "counterexample")
        self.assertEqual(commandline_interface.main(["counterexample", "--out", target]),
                         commandline_interface.EXIT_RUN_ERROR)
        self.assertFalse(os.path.exists(target))

    def test_04_reruns_are_identical(self) -> None:
        """
        Method for testing byte identical artifacts across reruns and worker counts.
        """
        first = os.path.join(TESTING_PATH, "first")
        second = os.path.join(TESTING_PATH, "second")
        self.assertEqual(commandline_interface.main(["simulate", "--seed", "11", "--out", first] + SMALL_SIMULATION),
                         commandline_interface.EXIT_SUCCESS)
        self.assertEqual(commandline_interface.main(["simulate", "--seed", "11", "--workers", "2", "--out", second]
                                                    + SMALL_SIMULATION),
                         commandline_interface.EXIT_SUCCESS)
        artifacts = sorted(file_name for file_name in os.listdir(first) if file_name != "timing.json")
        self.assertEqual(artifacts, sorted(file_name for file_name in os.listdir(second)
                                           if file_name != "timing.json"))
        self.assertIn("snapshot_t0.5.csv", artifacts)
        for file_name in artifacts:
            self.assertEqual(read_bytes(os.path.join(first, file_name)), read_bytes(os.path.join(second, file_name)))
        self.assertEqual(json_utility.load(os.path.join(second, "timing.json"))["workers"], 2)

        self.assertEqual(commandline_interface.main(["simulate", "--seed", "12", "--out", second] + SMALL_SIMULATION),
                         commandline_interface.EXIT_SUCCESS)
        self.assertNotEqual(read_bytes(os.path.join(first, "report.json")),
                            read_bytes(os.path.join(second, "report.json")))

    @classmethod
    def setUpClass(cls):
        """
        Class method for setting up test case.
        """
        safely_create_path(TESTING_PATH)

    @classmethod
    def tearDownClass(cls):
        """
        Class method for setting tearing down test case.
        """
        safely_remove_path(TESTING_PATH)

    @classmethod
    def setup_class(cls):
        """
        Alternative class method for setting up test case.
        """
        cls.setUpClass()

    @classmethod
    def teardown_class(cls):
        """
        Alternative class for setting tearing down test case.
        """
        cls.tearDownClass()


if __name__ == '__main__':
    unittest.main()
