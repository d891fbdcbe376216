# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
import os
import re
import unittest
from src.configuration import configuration as cfg
from src.configuration.run_config import load_config, save_config, config_hash
from src.model.exceptions import ConfigurationException
from src.utility.bronze.dictionary_utility import parse_override, apply_overrides
from src.utility.silver.file_system_utility import safely_create_path, safely_remove_path


TESTING_PATH = os.path.join(cfg.PATHS.TEST_PATH, "configuration")


class ConfigurationTest(unittest.TestCase):
    """
    Test case class for testing the configuration base.
    """

    def test_01_paths(self) -> None:
        """
        Test method for testing configured paths.
        """
        for attribute in [attribute for attribute in dir(cfg.PATHS) if re.fullmatch(r"^[A-Z_]+?_PATH", attribute)]:
            path = getattr(cfg.PATHS, attribute)
            self.assertTrue(os.path.isabs(path))
            self.assertTrue(cfg.PATHS.PACKAGE_PATH in path)
        self.assertTrue(os.path.exists(cfg.PATHS.DEFAULT_CONFIG_PATH))

    def test_02_configuration(self) -> None:
        """
        Test method for testing central configuration.
        """
        for attribute in ["ENV", "LOGGER", "VERSION", "OUTPUT_ROOT", "DEFAULT_BLOCK_SIZE", "SPEED_FLOOR"]:
            self.assertTrue(hasattr(cfg, attribute))
            self.assertFalse(getattr(cfg, attribute) is None)
        self.assertEqual(cfg.get_setting("KW_SURELY_UNSET_SETTING", "fallback"), "fallback")

    def test_03_defaults_and_presets(self) -> None:
        """
        Test method for testing built-in defaults, resolved weights and the shipped presets.
        """
        config = load_config()
        self.assertEqual(config.dimension, 2)
        self.assertEqual(config.weights.c4, 0.5)
        self.assertAlmostEqual(config.weights.delta, 0.1)
        for preset in ["default", "hole", "doeblin", "maxwell"]:
            load_config(os.path.join(cfg.PATHS.CONFIG_PATH, f"{preset}.json"))

        maxwell = load_config(os.path.join(cfg.PATHS.CONFIG_PATH, "maxwell.json"))
        self.assertAlmostEqual((1.0 - maxwell.weights.c4) ** 4, 0.5, places=12)
        inferred = load_config(overrides=['wall.kind="maxwell"', "wall.beta.base=0.3"])
        self.assertAlmostEqual(inferred.wall.beta_0, 0.3)
        uniform = load_config(overrides=['wall.kind="maxwell"', 'wall.beta.kind="angular"', "wall.beta.base=0.5",
                                         "wall.beta.amplitude=0.4", "wall.beta.mode=0"])
        self.assertAlmostEqual(uniform.wall.beta_0, 0.7)

    def test_04_rejections(self) -> None:
        """
        Test method for testing that invalid runs are rejected before any simulation.
        """
        for overrides in [["weights.alpha=2.5"], ["wall.r_par=2.0"], ["wall.r_perp=0"],
                          ["collision.delta_k=0.5"], ['geometry.shape="torus"'], ["simulation.particles=0"],
                          ['collision.sigma.kind="hole"', "collision.sigma.hole_radius=1.5"],
                          ["simulation.snapshots=[2.0, 1.0]"], ["unknown.key=1"]]:
            with self.assertRaises(ConfigurationException):
                load_config(overrides=overrides)
        with self.assertRaises(ConfigurationException) as context:
            load_config(overrides=["weights.alpha=2.5", "wall.r_par=2.0"])
        self.assertEqual(len(context.exception.violations), 2)
        self.assertIn("weights.alpha", str(context.exception))
        with self.assertRaises(ConfigurationException) as context:
            load_config(overrides=["simulation.particles=0", "wall.r_par=2.0"])
        self.assertEqual(len(context.exception.violations), 2)
        self.assertTrue(context.exception.violations[0].startswith("simulation.particles"))
        self.assertIn("wall.r_par", context.exception.violations[1])
        self.assertEqual(load_config(overrides=["weights.alpha=2.5", 'geometry.shape="ball3d"']).dimension, 3)

    def test_05_round_trip(self) -> None:
        """
        Test method for testing saving, reloading and hashing.
        """
        config = load_config(overrides=["simulation.particles=500", "wall.r_perp=0.5"])
        path = os.path.join(TESTING_PATH, "config.json")
        save_config(config, path)
        reloaded = load_config(path)
        self.assertEqual(reloaded, config)
        self.assertEqual(config_hash(reloaded), config_hash(config))
        self.assertEqual(config_hash(load_config(path, ["simulation.workers=4"])), config_hash(config))
        self.assertNotEqual(config_hash(load_config(path, ["simulation.master_seed=1"])), config_hash(config))

    def test_06_overrides(self) -> None:
        """
        Test method for testing dotted override parsing.
        """
        self.assertEqual(parse_override("a.b=1.5"), (["a", "b"], 1.5))
        self.assertEqual(parse_override("a=[1, 2]"), (["a"], [1, 2]))
        self.assertEqual(parse_override("a.b=cl"), (["a", "b"], "cl"))
        with self.assertRaises(ValueError):
            parse_override("a.b")
        data = {"a": {"b": 1}}
        self.assertEqual(apply_overrides(data, ["a.c=2", "d.e=true"]), {"a": {"b": 1, "c": 2}, "d": {"e": True}})
        self.assertEqual(data, {"a": {"b": 1}})

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
