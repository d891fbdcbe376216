# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
import unittest
import numpy as np
from scipy.special import i0e
from src.model.exceptions import WallParameterException
from src.model.geometry_control.domain_geometry import build_geometry
from src.model.wall_control.bessel import log_bessel_i0
from src.model.wall_control.boundary_field import BoundaryField
from src.model.wall_control.wall_model import (CercignaniLampisWall, MaxwellWall, build_wall, tangent_basis)
from src.model.wall_control.kernel_quadrature import (flux_integral, kernel_normalization_check, flux_cell_masses,
                                                      normalization_grid)
from src.utility.gold.statistics_utility import mean_and_error, within_errors, chi_square_pvalue


SAMPLES = 200000


class BoundaryFieldTest(unittest.TestCase):
    """
    Test case class for testing boundary fields and the Bessel helper.
    """

    def test_01_field_values(self) -> None:
        """
        Method for testing constant and angular field values and bounds.
        """
        angular = BoundaryField("angular", 1.0, 0.5, 2)
        self.assertTrue(np.allclose(angular.value(np.array([[1.0, 0.0], [0.0, 1.0]])), [1.5, 0.5]))
        self.assertAlmostEqual(angular.infimum(), 0.5)
        self.assertAlmostEqual(angular.supremum(), 1.5)
        self.assertFalse(angular.is_constant())
        self.assertTrue(BoundaryField().is_constant())

        flat = BoundaryField("angular", 1.0, -0.4, 0)
        values = flat.value(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]))
        self.assertTrue(np.allclose(values, 0.6))
        self.assertAlmostEqual(flat.infimum(), 0.6)
        self.assertAlmostEqual(flat.supremum(), 0.6)
        self.assertTrue(flat.is_constant())
        with self.assertRaises(WallParameterException):
            BoundaryField("angular", 1.0, 1.0, 1)

    def test_02_log_bessel(self) -> None:
        """
        Method for testing log I₀ on both sides of the series limit.
        """
        arguments = np.array([0.0, 0.1, 1.0, 10.0, 15.0, 16.0, 50.0, 700.0, 1e4])
        expected = np.log(i0e(arguments)) + arguments
        self.assertTrue(np.allclose(log_bessel_i0(arguments), expected, rtol=1e-12, atol=1e-12))

    @classmethod
    def setUpClass(cls):
        """
        Class method for setting up test case.
        """
        pass

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


class WallModelTest(unittest.TestCase):
    """
    Test case class for testing the wall models.
    """

    def test_01_parameter_checks(self) -> None:
        """
        Method for testing rejected wall parameters.
        """
        with self.assertRaises(WallParameterException):
            CercignaniLampisWall(self.disk, BoundaryField(), 0.5, 2.0)
        with self.assertRaises(WallParameterException):
            CercignaniLampisWall(self.disk, BoundaryField(), 0.0, 1.0)
        with self.assertRaises(WallParameterException):
            CercignaniLampisWall(self.disk, BoundaryField(base=0.0), 1.0, 1.0)
        with self.assertRaises(WallParameterException):
            MaxwellWall(self.disk, BoundaryField(), BoundaryField(base=1.2))
        with self.assertRaises(WallParameterException):
            MaxwellWall(self.disk, BoundaryField(), BoundaryField(base=0.4), beta_0=0.5)
        with self.assertRaises(WallParameterException):
            build_wall(self.disk, "specular", BoundaryField())
        self.assertEqual(build_wall(self.disk, "cl", BoundaryField(), 0.5, 0.5).kind, "cl")

    def test_02_kernel_normalization(self) -> None:
        """
        Method for testing the flux normalization of the CL kernel on a parameter grid.
        """
        rows = normalization_grid(self.disk, thetas=(0.25, 1.0), r_perps=(0.1, 1.0), r_pars=(0.2, 1.0, 1.8),
                                  speeds=(0.1, 10.0))
        self.assertEqual(len(rows), 24)
        self.assertLess(max(abs(row["residual"]) for row in rows), 1e-6)

    def test_03_maxwell_normalization(self) -> None:
        """
        Method for testing that the Maxwell law splits its mass into β diffuse and 1 - β specular.
        """
        wall = MaxwellWall(self.disk, BoundaryField(), BoundaryField(base=0.5))
        total = kernel_normalization_check(wall, self.u, self.x)
        diffuse = kernel_normalization_check(wall, self.u, self.x, diffuse_only=True)
        self.assertAlmostEqual(total.value, 1.0, places=8)
        self.assertAlmostEqual(diffuse.value, 0.5, places=8)

    def test_04_cl_normal_moment(self) -> None:
        """
        Method for testing E|v⊥|² = (1 - r⊥)|u⊥|² + 2θr⊥ by quadrature and by sampling.
        """
        wall = CercignaniLampisWall(self.disk, BoundaryField(), 0.5, 0.5)
        expected = 0.5 * 1.0 + 2.0 * 0.5
        moment = flux_integral(wall, self.u, self.x, observable=lambda v: v[:, 0] ** 2)
        self.assertAlmostEqual(moment.value, expected, places=8)

        rng = np.random.default_rng(11)
        outgoing = wall.reflect(np.tile(self.u, (SAMPLES, 1)), np.tile(self.x, (SAMPLES, 1)), rng)
        self.assertTrue(np.all(outgoing[:, 0] < 0.0))
        mean, error = mean_and_error(outgoing[:, 0] ** 2)
        self.assertTrue(within_errors(mean, expected, error))
        mean, error = mean_and_error(outgoing[:, 1])
        self.assertTrue(within_errors(mean, 0.5 * 0.5, error))

    def test_05_cl_sampler_matches_density(self) -> None:
        """
        Method for testing the CL sampler against quadrature cell masses of its density by χ².
        """
        wall = CercignaniLampisWall(self.disk, BoundaryField(), 0.3, 1.4)
        normal_edges = np.linspace(0.0, 4.0, 9)
        tangential_edges = np.linspace(-3.0, 3.5, 9)
        masses = flux_cell_masses(wall, self.u, self.x, normal_edges, tangential_edges)
        rng = np.random.default_rng(12)
        outgoing = wall.reflect(np.tile(self.u, (SAMPLES, 1)), np.tile(self.x, (SAMPLES, 1)), rng)
        tangent = tangent_basis(np.array([1.0, 0.0]))[0]
        counts, _, _ = np.histogram2d(-outgoing[:, 0], outgoing @ tangent, bins=[normal_edges, tangential_edges])
        observed = np.append(counts.ravel(), SAMPLES - counts.sum())
        probabilities = np.append(masses.ravel(), max(1.0 - masses.sum(), 0.0))
        self.assertLess(abs(float(masses.sum()) - 1.0), 0.05)
        self.assertGreater(chi_square_pvalue(observed, probabilities), 1e-3)

    def test_06_diffuse_and_maxwell_sampling(self) -> None:
        """
        Method for testing diffuse moments and the specular fraction of the Maxwell law.
        """
        rng = np.random.default_rng(13)
        hot = CercignaniLampisWall(self.disk, BoundaryField(base=2.0), 1.0, 1.0)
        diffuse = hot.diffuse_sample(np.tile(self.x, (SAMPLES, 1)), rng)
        mean, error = mean_and_error(diffuse[:, 0] ** 2)
        self.assertTrue(within_errors(mean, 4.0, error))
        mean, error = mean_and_error(diffuse[:, 1] ** 2)
        self.assertTrue(within_errors(mean, 2.0, error))

        wall = MaxwellWall(self.disk, BoundaryField(), BoundaryField(base=0.5))
        outgoing = wall.reflect(np.tile(self.u, (SAMPLES, 1)), np.tile(self.x, (SAMPLES, 1)), rng)
        specular = np.all(outgoing == np.array([-1.0, 0.5]), axis=1)
        mean, error = mean_and_error(specular.astype(float))
        self.assertTrue(within_errors(mean, 0.5, error))

    def test_07_point_values(self) -> None:
        """
        Method for testing wall Maxwellian values and the reduction of CL(1, 1) to the wall Maxwellian.
        """
        unit = CercignaniLampisWall(self.disk, BoundaryField(), 1.0, 1.0)
        hot = CercignaniLampisWall(self.disk, BoundaryField(base=2.0), 1.0, 1.0)
        rest = np.zeros(2)
        self.assertAlmostEqual(float(unit.wall_maxwellian(self.x, rest)), 1.0 / np.sqrt(2.0 * np.pi), places=10)
        self.assertAlmostEqual(float(unit.wall_maxwellian(self.x, rest)), 0.398942, places=6)
        self.assertAlmostEqual(float(hot.wall_maxwellian(self.x, rest)), 0.141047, places=6)

        outgoing = np.array([-0.5, 0.3])
        expected = float(unit.wall_maxwellian(self.x, outgoing))
        self.assertAlmostEqual(expected, np.exp(-0.17) / np.sqrt(2.0 * np.pi), places=10)
        for incoming in [np.array([0.7, 0.2]), np.array([2.0, -1.0]), np.array([0.05, 3.0])]:
            self.assertAlmostEqual(float(unit.cl_density(incoming, outgoing, self.x)), expected, places=10)

    @classmethod
    def setUpClass(cls):
        """
        Class method for setting up test case.
        """
        cls.disk = build_geometry("disk2d", 1.0)
        cls.x = np.array([1.0, 0.0])
        cls.u = np.array([1.0, 0.5])

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
