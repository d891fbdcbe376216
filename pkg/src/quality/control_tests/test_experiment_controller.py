# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
import unittest
import numpy as np
from src.configuration.run_config import load_config
from src.control.experiment_controller import ExperimentController
from src.model.exceptions import ExperimentException
from src.model.measure_control.distances import speed_ks_distance


SMALL_RUN = ["simulation.particles=2000", "simulation.block_size=1000", "simulation.end_time=1.0",
             "simulation.snapshots=[0.0, 0.5, 1.0]", "simulation.velocity_bins=8", "simulation.v_max=4.0",
             "geometry.radial_bins=3", "geometry.angular_bins=4", "wall.r_perp=0.5", "wall.r_par=0.5",
             "experiment.steady.relax_time=2.0", "experiment.steady.average_time=1.0",
             "experiment.steady.average_snapshots=3"]


def small_controller(*overrides: str) -> ExperimentController:
    """
    Function for building a controller on a small run configuration.
    :param overrides: Additional dotted overrides.
    :return: Experiment controller.
    """
    return ExperimentController(load_config(overrides=SMALL_RUN + list(overrides)), show_progress=False)


class ExperimentControllerTest(unittest.TestCase):
    """
    Test case class for testing the experiment controller.
    """

    def test_01_simulate(self) -> None:
        """
        Method for testing snapshot export and Duhamel checks.
        """
        outcome = self.controller.run("simulate")
        self.assertEqual(sorted(outcome.tables), ["snapshot_t0", "snapshot_t0.5", "snapshot_t1"])
        for snapshot in outcome.report["snapshots"]:
            self.assertAlmostEqual(snapshot["mass"], 1.0)
            self.assertGreater(snapshot["weighted_norm"], 0.0)
        self.assertEqual(len(outcome.report["duhamel"]), 2)
        self.assertTrue(all(check["passed"] for check in outcome.report["duhamel"]))
        self.assertNotIn("workers", outcome.report["config"]["simulation"])
        self.assertIsNone(outcome.passed)

    def test_02_steady_state(self) -> None:
        """
        Method for testing the steady state estimate and its cache.
        """
        outcome = self.controller.run("steady")
        self.assertAlmostEqual(outcome.report["mass"], 1.0)
        self.assertEqual(outcome.report["replicas"], 2)
        self.assertGreater(outcome.report["h0_estimate"], 0.0)
        self.assertIn("replica_floor", outcome.report)
        self.assertIs(self.controller.steady_state(), self.controller.steady_state())

    def test_03_rate(self) -> None:
        """
        Method for testing the convergence curve bookkeeping.
        """
        outcome = self.controller.run("rate")
        curve = outcome.tables["rate_curve"]
        self.assertEqual(len(curve), len(self.controller.config.experiment.rate.times))
        self.assertTrue(np.all(curve["distance"] >= 0.0))
        self.assertEqual(set(outcome.report["fits"]), {"exponential", "polynomial"})
        self.assertIn("polynomial_product_minimum", outcome.report)

        windowed = small_controller("experiment.rate.times=[0.0, 0.5, 1.0, 1.5]",
                                    "experiment.rate.window=[1.0, 1.5]").run("rate")
        times = np.asarray(windowed.report["times"])
        product = np.asarray(windowed.report["decay"]) * (1.0 + times) ** self.controller.spec.alpha
        self.assertAlmostEqual(windowed.report["polynomial_product_minimum"], float(np.min(product[times >= 1.0])))

    def test_04_verify_kernel(self) -> None:
        """
        Method for testing the kernel normalization audit.
        """
        outcome = self.controller.run("verify-kernel")
        self.assertTrue(outcome.passed)
        self.assertEqual(outcome.report["rows"], 81)

    def test_05_flux_and_lyapunov(self) -> None:
        """
        Method for testing the flux and Lyapunov audits on short horizons.
        """
        controller = small_controller("experiment.flux.horizon=2.0", "experiment.flux.bins=4",
                                      "experiment.lyapunov.horizons=[1.0, 2.0]", "experiment.lyapunov.time_step=0.5")
        flux = controller.run("flux")
        curve = flux.tables["flux_curve"]
        self.assertEqual(len(curve), 4)
        self.assertTrue(np.all(np.diff(curve["flux"]) >= 0.0))
        self.assertIsNotNone(flux.passed)

        stationary = controller.flux_audit(controller.equilibrium_law(), count=200000)
        self.assertTrue(stationary.passed)
        self.assertFalse(stationary.report["superlinear"])
        self.assertGreater(stationary.report["slope"], 0.0)

        controller = small_controller("simulation.particles=10000", "simulation.block_size=5000",
                                      "experiment.lyapunov.horizons=[1.0, 2.0]", "experiment.lyapunov.time_step=0.5")
        lyapunov = controller.run("lyapunov")
        self.assertEqual(len(lyapunov.tables["lyapunov"]), 3 * 2)
        self.assertEqual(set(lyapunov.report["laws"]), {"equilibrium", "ball", "fast"})
        self.assertAlmostEqual(lyapunov.report["factor"], 1.0)
        self.assertTrue(lyapunov.passed)
        self.assertTrue(all(law["drift"] < 3.0 for law in lyapunov.report["laws"].values()))

    def test_06_doeblin(self) -> None:
        """
        Method for testing the Doeblin minorization estimate and the empty sublevel set.
        """
        controller = small_controller("experiment.doeblin.level=40.0", "experiment.doeblin.horizons=[1.0, 2.0]",
                                      "experiment.doeblin.starts_per_cell=500", "experiment.doeblin.max_start_cells=2",
                                      "experiment.doeblin.arrival_radial_bins=2",
                                      "experiment.doeblin.arrival_angular_bins=2",
                                      "experiment.doeblin.arrival_velocity_bins=4")
        report = controller.doeblin_probe()
        self.assertEqual(len(report.start_cells), 2)
        self.assertEqual(len(report.floors), 2)
        self.assertTrue(all(0.0 <= floor <= 1.0 for floor in report.floors))
        self.assertTrue(all(0.0 <= value <= 1.0 for value in report.coverage))
        self.assertGreater(report.level_minimum, np.e ** 2)
        self.assertGreater(max(report.floors), 0.0)
        self.assertTrue(report.observed)
        self.assertIn(report.best_horizon, [1.0, 2.0])

        with self.assertRaises(ExperimentException):
            small_controller("experiment.doeblin.level=1.0").doeblin_probe()

    def test_07_counterexample(self) -> None:
        """
        Method for testing the concentrated initial data run on the hole configuration.
        """
        with self.assertRaises(ExperimentException):
            self.controller.run("counterexample")
        controller = small_controller("geometry.radius=5.0", 'collision.sigma.kind="hole"',
                                      "collision.sigma.hole_radius=1.0", "experiment.counterexample.times=[1.0, 2.0]",
                                      "experiment.counterexample.tail_window=[1.0, 2.0]",
                                      "experiment.counterexample.monte_carlo_samples=20000",
                                      "experiment.counterexample.radial_order=8",
                                      "experiment.counterexample.angular_points=16")
        outcome = controller.run("counterexample")
        table = outcome.tables["counterexample"]
        self.assertEqual(len(table), 2)
        self.assertAlmostEqual(outcome.report["r_in"], 2.5)
        self.assertTrue(np.allclose(table["epsilon"], [0.5, 1.0 / 3.0]))
        self.assertTrue(np.all(table["step_two_bound"] <= table["lhs_quadrature"] + 1e-12))
        self.assertTrue(np.all(table["lhs_quadrature"] <= 1.0 + 1e-12))

    def test_08_equilibrium_is_stationary(self) -> None:
        """
        Method for testing that uniform × Maxwellian stays put under CL(1, 1) walls and unit BGK collisions.
        """
        controller = small_controller("wall.r_perp=1.0", "wall.r_par=1.0", "geometry.radial_bins=2",
                                      "geometry.angular_bins=4", "simulation.particles=40000",
                                      "simulation.block_size=10000")
        result = controller.ensemble(controller.equilibrium_law(), [0.0, 3.0])
        self.assertEqual(len(result.snapshots), 2)
        for snapshot in result.snapshots:
            self.assertAlmostEqual(snapshot.mass, 1.0)
            self.assertLess(speed_ks_distance(snapshot, 1.0), 0.01)
            masses = snapshot.spatial_masses()
            self.assertEqual(len(masses), 8)
            self.assertTrue(np.all(np.abs(masses - 0.125) < 0.01))

    def test_09_rate_dichotomy(self) -> None:
        """
        Method for testing that unit collisions decay exponentially while a collisionless hole decays polynomially.
        """
        uniform = small_controller('initial.velocity="ball"', "initial.velocity_radius=0.3",
                                   "geometry.radial_bins=1", "geometry.angular_bins=1",
                                   "simulation.particles=100000", "simulation.block_size=25000",
                                   "experiment.rate.times=[0.0, 0.5, 1.0, 1.5, 2.0, 2.5]",
                                   "experiment.rate.floor_factor=2.0").run("rate")
        fits = uniform.report["fits"]
        self.assertGreater(fits["exponential"]["r_squared"], fits["polynomial"]["r_squared"])
        self.assertGreater(uniform.report["r_squared_gap"], 0.0)
        self.assertGreater(fits["exponential"]["rate"], 0.0)
        self.assertTrue(uniform.passed)

        # speeds below 0.25 from a ball of radius 0.25 stay inside the hole beyond t = 5
        hole = small_controller("geometry.radius=1.5", 'collision.sigma.kind="hole"',
                                "collision.sigma.hole_radius=1.0", "initial.epsilon=0.25",
                                "geometry.radial_bins=2", "geometry.angular_bins=1", "simulation.velocity_bins=2",
                                "simulation.particles=100000", "simulation.block_size=25000",
                                "experiment.rate.times=[0.0, 6.0, 8.0, 10.0, 14.0, 18.0, 24.0]",
                                "experiment.rate.window=[6.0, 24.0]",
                                "experiment.rate.floor_factor=2.0").run("rate")
        fits = hole.report["fits"]
        self.assertGreater(fits["polynomial"]["r_squared"], fits["exponential"]["r_squared"])
        self.assertLess(hole.report["r_squared_gap"], 0.0)
        self.assertGreater(fits["polynomial"]["rate"], 1.0)
        self.assertGreater(hole.report["polynomial_product_minimum"], 0.0)

    @classmethod
    def setUpClass(cls):
        """
        Class method for setting up test case.
        """
        cls.controller = small_controller()

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


if __name__ == '__main__':
    unittest.main()
