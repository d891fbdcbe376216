# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from typing import Any, Optional, Tuple
import numpy as np
from src.model.exceptions import ExperimentException
from src.model.geometry_control.domain_geometry import DomainGeometry
from src.model.geometry_control.spatial_grid import SpatialGrid
from src.model.collision_control.collision_model import unit_ball_volume, uniform_directions


SPATIAL_KINDS = ["uniform", "ball", "cell"]
VELOCITY_KINDS = ["maxwellian", "ball", "sphere", "point", "box"]


def sample_ball(count: int, dimension: int, center: np.ndarray, radius: float,
                rng: np.random.Generator) -> np.ndarray:
    """
    Function for sampling uniformly in a ball.
    :param count: Number of samples.
    :param dimension: Dimension.
    :param center: Ball center.
    :param radius: Ball radius.
    :param rng: Random generator.
    :return: Samples of shape (count, dimension).
    """
    radii = radius * rng.random(count) ** (1.0 / dimension)
    return center + uniform_directions(count, dimension, rng) * radii[:, None]


class InitialLaw(object):
    """
    Product initial law f₀(x, v) = spatial(x)·velocity(v) with unit mass.
    """

    def __init__(self, geometry: DomainGeometry, spatial: str = "uniform", velocity: str = "maxwellian",
                 spatial_center: Any = None, spatial_radius: float = 1.0, velocity_center: Any = None,
                 velocity_radius: float = 1.0, theta: float = 1.0, grid: SpatialGrid = None,
                 cell: Optional[int] = None) -> None:
        """
        Initiation method.
        :param geometry: Domain geometry.
        :param spatial: Spatial factor, one of "uniform" (on Ω), "ball" (uniform on a ball inside Ω) and "cell"
            (uniform on a spatial grid cell).
        :param velocity: Velocity factor, one of "maxwellian" (centered, temperature θ), "ball" (uniform on a
            ball), "sphere" (uniform direction at fixed speed), "point" (point mass) and "box" (uniform on a
            cube with half width velocity_radius).
        :param spatial_center: Center of the spatial ball. Defaults to the origin.
        :param spatial_radius: Radius of the spatial ball.
        :param velocity_center: Center of the velocity factor. Defaults to the origin.
        :param velocity_radius: Radius, speed or half width of the velocity factor.
        :param theta: Maxwellian temperature.
        :param grid: Spatial grid for the cell factor.
        :param cell: Cell index for the cell factor.
        """
        if spatial not in SPATIAL_KINDS or velocity not in VELOCITY_KINDS:
            raise ExperimentException("initial_law", f"unknown initial law {spatial} x {velocity}")
        self.geometry = geometry
        self.dimension = geometry.dimension
        self.spatial = spatial
        self.velocity = velocity
        self.spatial_center = np.zeros(self.dimension) if spatial_center is None else np.asarray(spatial_center,
                                                                                              dtype=float)
        self.spatial_radius = float(spatial_radius)
        self.velocity_center = np.zeros(self.dimension) if velocity_center is None else np.asarray(
            velocity_center, dtype=float)
        self.velocity_radius = float(velocity_radius)
        self.theta = float(theta)
        self.grid = grid
        self.cell = cell
        if spatial == "cell" and (grid is None or cell is None):
            raise ExperimentException("initial_law", "cell factor needs a grid and a cell index")

    def describe(self) -> dict:
        return {"spatial": self.spatial, "velocity": self.velocity,
                "spatial_center": self.spatial_center.tolist(), "spatial_radius": self.spatial_radius,
                "velocity_center": self.velocity_center.tolist(), "velocity_radius": self.velocity_radius,
                "theta": self.theta, "cell": self.cell}

    """
    Sampling
    """

    def sample_positions(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if self.spatial == "uniform":
            return self.geometry.sample_uniform(count, rng)
        elif self.spatial == "cell":
            return self.grid.sample_cell(self.cell, count, rng, self.geometry)
        positions = np.empty((0, self.dimension))
        while positions.shape[0] < count:
            proposals = sample_ball(count, self.dimension, self.spatial_center, self.spatial_radius, rng)
            positions = np.vstack([positions, proposals[self.geometry.contains(proposals)]])
        return positions[:count]

    def sample_velocities(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if self.velocity == "maxwellian":
            return np.sqrt(self.theta) * rng.standard_normal((count, self.dimension))
        elif self.velocity == "ball":
            return sample_ball(count, self.dimension, self.velocity_center, self.velocity_radius, rng)
        elif self.velocity == "sphere":
            return self.velocity_center + self.velocity_radius * uniform_directions(count, self.dimension, rng)
        elif self.velocity == "box":
            return self.velocity_center + rng.uniform(-self.velocity_radius, self.velocity_radius,
                                                      size=(count, self.dimension))
        return np.tile(self.velocity_center, (count, 1))

    def sample(self, count: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """
        Method for sampling phase states.
        :param count: Number of states.
        :param rng: Random generator.
        :return: Positions and velocities of shape (count, d).
        """
        return self.sample_positions(count, rng), self.sample_velocities(count, rng)

    """
    Density
    """

    def spatial_density(self, x: np.ndarray) -> np.ndarray:
        inside = self.geometry.contains(x)
        if self.spatial == "uniform":
            return np.where(inside, 1.0 / self.geometry.volume(), 0.0)
        elif self.spatial == "cell":
            return np.where(inside & (self.grid.locate(x) == self.cell), 1.0 / self.grid.volumes[self.cell], 0.0)
        offset = x - self.spatial_center
        in_ball = np.einsum("ij,ij->i", offset, offset) < self.spatial_radius ** 2
        return np.where(inside & in_ball,
                        1.0 / (self.spatial_radius ** self.dimension * unit_ball_volume(self.dimension)), 0.0)

    def velocity_density(self, v: np.ndarray) -> np.ndarray:
        if self.velocity == "maxwellian":
            return (np.exp(-np.einsum("ij,ij->i", v, v) / (2.0 * self.theta))
                    / (2.0 * np.pi * self.theta) ** (self.dimension / 2.0))
        offset = v - self.velocity_center
        if self.velocity == "ball":
            in_ball = np.einsum("ij,ij->i", offset, offset) < self.velocity_radius ** 2
            return np.where(in_ball, 1.0 / (self.velocity_radius ** self.dimension * unit_ball_volume(self.dimension)),
                            0.0)
        elif self.velocity == "box":
            in_box = np.all(np.abs(offset) < self.velocity_radius, axis=1)
            return np.where(in_box, 1.0 / (2.0 * self.velocity_radius) ** self.dimension, 0.0)
        raise ExperimentException("initial_law", f"velocity factor {self.velocity} has no density")

    def density(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """
        Method for evaluating f₀(x, v).
        :param x: Positions of shape (n, d).
        :param v: Velocities of shape (n, d).
        :return: Density values of shape (n,).
        """
        x = np.atleast_2d(np.asarray(x, dtype=float))
        v = np.atleast_2d(np.asarray(v, dtype=float))
        return self.spatial_density(x) * self.velocity_density(v)


def epsilon_law(geometry: DomainGeometry, epsilon: float) -> InitialLaw:
    """
    Function for the concentrated law f_ε = 1_{εB}(x)·1_{εB}(v)/(ε^{2d}|B|²).
    :param geometry: Domain geometry, containing εB.
    :param epsilon: Concentration ε.
    :return: Initial law.
    """
    if not 0.0 < epsilon < geometry.distance_to_origin_boundary():
        raise ExperimentException("initial_law", "εB must lie inside the domain")
    return InitialLaw(geometry, spatial="ball", velocity="ball", spatial_radius=epsilon, velocity_radius=epsilon)
