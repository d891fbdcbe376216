# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
import unittest
import numpy as np
from scipy.special import gamma
from src.model.exceptions import GeometryException
from src.model.geometry_control.domain_geometry import build_geometry, PhaseState
from src.model.geometry_control.spatial_grid import build_spatial_grid, PolarGrid, SphericalGrid, ClippedCartesianGrid


def moving_states(geometry, count: int, seed: int, minimum_speed: float = 0.1) -> tuple:
    """
    Function for sampling interior states with speeds bounded away from zero.
    :param geometry: Domain geometry.
    :param count: Number of states.
    :param seed: Seed.
    :param minimum_speed: Speed floor.
    :return: Positions and velocities.
    """
    rng = np.random.default_rng(seed)
    x = geometry.sample_uniform(count, rng)
    v = rng.standard_normal((count, geometry.dimension))
    slow = np.linalg.norm(v, axis=1) < minimum_speed
    v[slow] += minimum_speed
    return x, v


class DiskGeometryTest(unittest.TestCase):
    """
    Test case class for testing the disk and ball geometries.
    """

    def test_01_exit_times(self) -> None:
        """
        Method for testing exit times against hand computed values.
        """
        self.assertAlmostEqual(self.disk.exit_time([0.0, 0.0], [1.0, 0.0]), 1.0, places=14)
        self.assertAlmostEqual(self.disk.exit_time([0.5, 0.0], [-1.0, 0.0]), 1.5, places=14)
        self.assertAlmostEqual(self.ball.exit_time([0.0, 0.0, 0.0], [0.0, 0.0, 2.0]), 0.5, places=14)
        self.assertEqual(self.disk.exit_time([1.0, 0.0], [1.0, 0.0]), 0.0)
        self.assertTrue(np.isinf(self.disk.exit_time([0.3, 0.1], [0.0, 0.0])))

    def test_02_footpoints_and_normals(self) -> None:
        """
        Method for testing that footpoints lie on the boundary and normals have unit length.
        """
        for geometry in [self.disk, self.ball]:
            x, v = moving_states(geometry, 2000, 1)
            footpoints = geometry.footpoint(x, v)
            self.assertLess(np.max(np.abs(np.linalg.norm(footpoints, axis=1) - 1.0)), 1e-12)
            normals = geometry.outward_normal(footpoints)
            self.assertLess(np.max(np.abs(np.linalg.norm(normals, axis=1) - 1.0)), 1e-12)

    def test_03_exit_time_cocycle(self) -> None:
        """
        Method for testing τ(x + sv, v) = τ(x, v) - s along the ray.
        """
        for geometry in [self.disk, self.ball]:
            x, v = moving_states(geometry, 5000, 2)
            tau = geometry.exit_time(x, v)
            s = 0.5 * tau
            shifted = geometry.exit_time(x + s[:, None] * v, v)
            self.assertLess(np.max(np.abs(shifted - (tau - s))), 1e-10)

    def test_04_specular_involution(self) -> None:
        """
        Method for testing that the specular reflection is an involution flipping the normal component.
        """
        rng = np.random.default_rng(3)
        x = self.disk.project_to_boundary(rng.standard_normal((1000, 2)))
        v = rng.standard_normal((1000, 2))
        reflected = self.disk.specular(x, v)
        self.assertLess(np.max(np.abs(self.disk.specular(x, reflected) - v)), 1e-12)
        normals = self.disk.outward_normal(x)
        self.assertTrue(np.allclose(np.einsum("ij,ij->i", reflected, normals),
                                    -np.einsum("ij,ij->i", v, normals), atol=1e-12))
        self.assertTrue(np.allclose(np.linalg.norm(reflected, axis=1), np.linalg.norm(v, axis=1), atol=1e-12))

    def test_05_classification(self) -> None:
        """
        Method for testing the phase state classification.
        """
        self.assertEqual(self.disk.classify([0.0, 0.0], [1.0, 0.0]), "interior")
        self.assertEqual(self.disk.classify([1.0, 0.0], [1.0, 0.0]), "outgoing")
        self.assertEqual(self.disk.classify([1.0, 0.0], [-1.0, 0.0]), "incoming")
        self.assertEqual(self.disk.classify([1.0, 0.0], [0.0, 1.0]), "grazing")
        state = PhaseState(np.array([0.0, 0.0]), np.array([3.0, 4.0]))
        self.assertAlmostEqual(state.speed, 5.0)

    def test_06_normal_rejects_interior_points(self) -> None:
        """
        Method for testing that normals are only defined on the boundary.
        """
        with self.assertRaises(GeometryException):
            self.disk.outward_normal([0.2, 0.0])
        with self.assertRaises(GeometryException):
            build_geometry("torus3d")

    def test_07_volume_and_sampling(self) -> None:
        """
        Method for testing volumes, diameters and uniform sampling.
        """
        self.assertAlmostEqual(self.disk.volume(), np.pi)
        self.assertAlmostEqual(self.ball.volume(), 4.0 / 3.0 * np.pi)
        self.assertEqual(self.disk.diameter(), 2.0)
        samples = self.ball.sample_uniform(4000, np.random.default_rng(4))
        self.assertTrue(np.all(self.ball.contains(samples)))
        # radial CDF r³ on the unit ball
        self.assertAlmostEqual(float(np.mean(np.linalg.norm(samples, axis=1) < 0.5)), 0.125, delta=0.025)

    @classmethod
    def setUpClass(cls):
        """
        Class method for setting up test case.
        """
        cls.disk = build_geometry("disk2d", 1.0)
        cls.ball = build_geometry("ball3d", 1.0)

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


class ImplicitGeometryTest(unittest.TestCase):
    """
    Test case class for testing the quartic implicit geometry.
    """

    def test_01_ray_geometry(self) -> None:
        """
        Method for testing footpoints, normals and exit times of the quartic.
        """
        self.assertAlmostEqual(self.quartic.exit_time([0.0, 0.0], [1.0, 0.0]), 1.0, places=9)
        x, v = moving_states(self.quartic, 1000, 5)
        footpoints = self.quartic.footpoint(x, v)
        self.assertLess(np.max(np.abs(self.quartic.level_set.value(footpoints))), 1e-9)
        normals = self.quartic.outward_normal(footpoints)
        self.assertLess(np.max(np.abs(np.linalg.norm(normals, axis=1) - 1.0)), 1e-12)

    def test_02_exit_time_cocycle(self) -> None:
        """
        Method for testing the cocycle property on the implicit shape.
        """
        x, v = moving_states(self.quartic, 1000, 6)
        tau = self.quartic.exit_time(x, v)
        s = 0.5 * tau
        shifted = self.quartic.exit_time(x + s[:, None] * v, v)
        self.assertLess(np.max(np.abs(shifted - (tau - s))), 1e-9)

    def test_03_measures(self) -> None:
        """
        Method for testing area, diameter and inner distance of x⁴ + y⁴ < 1.
        """
        self.assertAlmostEqual(self.quartic.volume(), 4.0 * gamma(1.25) ** 2 / gamma(1.5), places=8)
        self.assertAlmostEqual(self.quartic.diameter(), 2.0 * 0.5 ** -0.25, places=6)
        self.assertAlmostEqual(self.quartic.distance_to_origin_boundary(), 1.0, places=8)
        samples = self.quartic.sample_uniform(500, np.random.default_rng(7))
        self.assertTrue(np.all(self.quartic.contains(samples)))

    def test_04_projection(self) -> None:
        """
        Method for testing the boundary projection of nearby points.
        """
        rng = np.random.default_rng(8)
        x, v = moving_states(self.quartic, 200, 9)
        nearby = self.quartic.footpoint(x, v) + 1e-7 * rng.standard_normal((200, 2))
        projected = self.quartic.project_to_boundary(nearby)
        self.assertLess(np.max(np.abs(self.quartic.level_set.value(projected))), 1e-10)

    @classmethod
    def setUpClass(cls):
        """
        Class method for setting up test case.
        """
        cls.quartic = build_geometry("implicit2d", 1.0, "superellipse", 4.0)

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


class SpatialGridTest(unittest.TestCase):
    """
    Test case class for testing the spatial grids.
    """

    def test_01_grid_selection(self) -> None:
        """
        Method for testing the grid chosen for each shape.
        """
        self.assertIsInstance(build_spatial_grid(build_geometry("disk2d"), 4, 6), PolarGrid)
        self.assertIsInstance(build_spatial_grid(build_geometry("ball3d"), 3, 8), SphericalGrid)
        self.assertIsInstance(build_spatial_grid(build_geometry("implicit2d"), 6), ClippedCartesianGrid)

    def test_02_volumes_and_centers(self) -> None:
        """
        Method for testing that cell volumes add up and every center lies in its own cell.
        """
        for geometry, grid in self.grids:
            self.assertAlmostEqual(float(grid.volumes.sum()), geometry.volume(), delta=0.02 * geometry.volume())
            self.assertTrue(np.array_equal(grid.locate(grid.centers), np.arange(grid.cell_count)))

    def test_03_cell_sampling(self) -> None:
        """
        Method for testing uniform sampling inside one cell.
        """
        rng = np.random.default_rng(10)
        for geometry, grid in self.grids:
            cell = grid.cell_count // 2
            samples = grid.sample_cell(cell, 300, rng, geometry)
            self.assertEqual(samples.shape, (300, geometry.dimension))
            self.assertTrue(np.all(grid.locate(samples) == cell))
            self.assertTrue(np.all(geometry.contains(samples)))

    def test_04_equality(self) -> None:
        """
        Method for testing descriptor based equality.
        """
        disk = build_geometry("disk2d")
        self.assertEqual(build_spatial_grid(disk, 4, 6), build_spatial_grid(disk, 4, 6))
        self.assertNotEqual(build_spatial_grid(disk, 4, 6), build_spatial_grid(disk, 4, 8))

    @classmethod
    def setUpClass(cls):
        """
        Class method for setting up test case.
        """
        cls.grids = []
        for shape in ["disk2d", "ball3d", "implicit2d"]:
            geometry = build_geometry(shape)
            cls.grids.append((geometry, build_spatial_grid(geometry, 4, 6)))

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
