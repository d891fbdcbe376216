# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
import os
import unittest
import numpy as np
from scipy import integrate
from scipy.special import gamma
from src.configuration import configuration as cfg
from src.model.exceptions import CollisionModelException
from src.model.geometry_control.domain_geometry import build_geometry
from src.model.geometry_control.spatial_grid import build_spatial_grid
from src.model.collision_control.rate_field import build_rate_field, HoleRate
from src.model.collision_control.collision_model import build_collision_model, unit_ball_volume
from src.model.collision_control.relaxation_table import (relaxation_table_from_maxwellian, save_relaxation_table,
                                                          load_relaxation_table)
from src.utility.gold.statistics_utility import mean_and_error, within_errors
from src.utility.silver.file_system_utility import safely_create_path, safely_remove_path


SAMPLES = 100000
TESTING_PATH = os.path.join(cfg.PATHS.TEST_PATH, "collision")


class RateFieldTest(unittest.TestCase):
    """
    Test case class for testing rate fields and thinning.
    """

    def test_01_path_integrals(self) -> None:
        """
        Method for testing closed form path integrals against direct quadrature.
        """
        y = np.array([[-2.0, 0.0], [0.0, 0.0], [-2.0, 0.5]])
        v = np.array([[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]])
        t = np.array([4.0, 0.5, 4.0])
        chord = 2.0 * np.sqrt(1.0 - 0.25)
        self.assertTrue(np.allclose(self.hole.path_integral(y, v, t), [2.0, 0.0, 4.0 - chord], atol=1e-12))
        self.assertTrue(np.allclose(self.constant.path_integral(y, v, t), 2.0 * t))
        for row in range(3):
            expected, _ = integrate.quad(lambda s: float(self.smooth.sigma(y[row] + s * v[row])), 0.0, t[row],
                                         limit=200)
            self.assertAlmostEqual(float(self.smooth.path_integral(y[row:row + 1], v[row:row + 1], t[row])[0]),
                                   expected, delta=5e-3)

    def test_02_constant_rate_times(self) -> None:
        """
        Method for testing Exp(σ) collision times for a constant rate.
        """
        rng = np.random.default_rng(21)
        x = np.zeros((SAMPLES, 2))
        v = np.tile([1.0, 0.0], (SAMPLES, 1))
        times = self.constant.next_collision(x, v, np.full(SAMPLES, np.inf), rng)
        mean, error = mean_and_error(times)
        self.assertTrue(within_errors(mean, 0.5, error))

    def test_03_thinning_survival(self) -> None:
        """
        Method for testing P(no collision before t) = exp(-∫σ) for the hole and the mollified hole.
        """
        rng = np.random.default_rng(22)
        x = np.tile([-2.0, 0.0], (SAMPLES, 1))
        v = np.tile([1.0, 0.0], (SAMPLES, 1))
        horizon = np.full(SAMPLES, 4.0)
        for rate in [self.hole, self.smooth]:
            survived = ~np.isfinite(rate.next_collision(x, v, horizon, rng))
            expected = float(np.exp(-rate.path_integral(x[:1], v[:1], 4.0)[0]))
            mean, error = mean_and_error(survived.astype(float))
            self.assertTrue(within_errors(mean, expected, error))
        self.assertIsNone(self.hole.next_collision_single([0.0, 0.0], [0.1, 0.0], 5.0, rng))

    def test_04_rejections(self) -> None:
        """
        Method for testing rejected rate fields.
        """
        with self.assertRaises(CollisionModelException):
            build_rate_field("gradient")
        with self.assertRaises(CollisionModelException):
            HoleRate(1.0, [0.0, 0.0], 0.0)
        with self.assertRaises(CollisionModelException):
            build_rate_field("constant", -1.0)

    @classmethod
    def setUpClass(cls):
        """
        Class method for setting up test case.
        """
        cls.constant = build_rate_field("constant", 2.0)
        cls.hole = build_rate_field("hole", 1.0, [0.0, 0.0], 1.0)
        cls.smooth = build_rate_field("smooth", 1.0, [0.0, 0.0], 0.75, 0.25)

    @classmethod
    def tearDownClass(cls):
        """
        Class method for setting tearing down test case.
        """
        pass

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


class CollisionModelTest(unittest.TestCase):
    """
    Test case class for testing collision kernels and relaxation tables.
    """

    def test_01_unit_ball(self) -> None:
        """
        Method for testing unit ball volumes.
        """
        self.assertAlmostEqual(unit_ball_volume(2), np.pi)
        self.assertAlmostEqual(unit_ball_volume(3), 4.0 / 3.0 * np.pi)

    def test_02_moment_bound(self) -> None:
        """
        Method for testing the certified moment bound of the BGK kernel against the χ moment.
        """
        model = build_collision_model("bgk", build_rate_field("constant", 1.0), self.disk, 0.25)
        self.assertAlmostEqual(model.moment_bound, 2.0 ** 0.25 * gamma(1.25), places=7)
        self.assertAlmostEqual(model.law_normalization(), 1.0, places=8)
        with self.assertRaises(CollisionModelException):
            build_collision_model("bgk", build_rate_field("constant", 1.0), self.disk, 0.5)

    def test_03_annulus_law(self) -> None:
        """
        Method for testing the linear Boltzmann annulus law.
        """
        model = build_collision_model("linear_boltzmann", build_rate_field("constant", 1.0), self.disk, 0.25,
                                      (1.0, 2.0))
        self.assertAlmostEqual(model.law_normalization(), 1.0, places=8)
        velocities = model.gain_sample(np.zeros((SAMPLES, 2)), np.zeros((SAMPLES, 2)), np.random.default_rng(23))
        speeds = np.linalg.norm(velocities, axis=1)
        self.assertTrue(np.all((speeds >= 1.0 - 1e-12) & (speeds <= 2.0 + 1e-12)))
        mean, error = mean_and_error(speeds)
        self.assertTrue(within_errors(mean, 14.0 / 9.0, error))

    def test_04_gain_inside_hole(self) -> None:
        """
        Method for testing that collisions are refused where the rate vanishes.
        """
        disk = build_geometry("disk2d", 3.0)
        model = build_collision_model("bgk", build_rate_field("hole", 1.0, [0.0, 0.0], 1.0), disk)
        with self.assertRaises(CollisionModelException):
            model.gain_sample(np.array([[0.1, 0.0]]), np.zeros((1, 2)), np.random.default_rng(24))
        self.assertEqual(model.gain_sample(np.array([[2.0, 0.0]]), np.zeros((1, 2)),
                                           np.random.default_rng(24)).shape, (1, 2))

    def test_05_relaxation_table(self) -> None:
        """
        Method for testing relaxation table persistence and the relaxation law.
        """
        grid = build_spatial_grid(self.disk, 2, 4)
        table = relaxation_table_from_maxwellian(grid, 0.25, 6.0, 1.5)
        self.assertTrue(np.allclose(table.masses(), 1.5))
        path = os.path.join(TESTING_PATH, "table.csv")
        save_relaxation_table(table, path)
        loaded = load_relaxation_table(path, grid)
        self.assertTrue(np.allclose(loaded.values, table.values))
        self.assertTrue(np.allclose(loaded.nodes, table.nodes))
        self.assertAlmostEqual(loaded.spacing, 0.25)

        model = build_collision_model("relaxation", build_rate_field("constant", 1.0), self.disk, 0.25,
                                      table=loaded)
        self.assertAlmostEqual(model.sigma_infinity, 1.5)
        self.assertAlmostEqual(model.law_normalization(), 1.0, places=10)
        positions = self.disk.sample_uniform(SAMPLES, np.random.default_rng(25))
        velocities = model.gain_sample(positions, np.zeros_like(positions), np.random.default_rng(26))
        self.assertAlmostEqual(float(np.mean(velocities[:, 0])), 0.0, delta=0.02)
        self.assertAlmostEqual(float(np.mean(np.sum(velocities ** 2, axis=1))), 2.0, delta=0.05)
        with self.assertRaises(CollisionModelException):
            build_collision_model("relaxation", build_rate_field("constant", 1.0), self.disk)

    @classmethod
    def setUpClass(cls):
        """
        Class method for setting up test case.
        """
        cls.disk = build_geometry("disk2d", 1.0)
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
