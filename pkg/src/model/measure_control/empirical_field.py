# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass, replace
from typing import Optional, Tuple
import numpy as np
import pandas as pd
from src.model.exceptions import GridMismatchException
from src.model.geometry_control.spatial_grid import SpatialGrid
from src.model.measure_control.velocity_grid import VelocityGrid


@dataclass
class EmpiricalField(object):
    """
    Phase space histogram standing in for f(t, ·, ·).
    Cell masses are counts divided by the population, the number of particles the deposits were drawn from.
    Killed or absorbed particles reduce the mass, time averaging adds the populations of all averaged snapshots.
    """
    spatial: SpatialGrid
    velocity: VelocityGrid
    counts: np.ndarray
    population: float
    positions: Optional[np.ndarray] = None
    velocities: Optional[np.ndarray] = None

    @classmethod
    def empty(cls, spatial: SpatialGrid, velocity: VelocityGrid, keep_deposits: bool = True) -> "EmpiricalField":
        """
        Class method for creating an empty field.
        :param spatial: Spatial grid.
        :param velocity: Velocity grid.
        :param keep_deposits: Flag, declaring whether exact deposits are kept.
        :return: Empty field.
        """
        return cls(spatial, velocity, np.zeros((spatial.cell_count, velocity.cell_count + 1)), 0.0,
                   np.empty((0, spatial.dimension)) if keep_deposits else None,
                   np.empty((0, spatial.dimension)) if keep_deposits else None)

    @classmethod
    def from_samples(cls, spatial: SpatialGrid, velocity: VelocityGrid, x: np.ndarray, v: np.ndarray,
                     population: float = None, keep_deposits: bool = True) -> "EmpiricalField":
        """
        Class method for depositing particles with unit weight.
        :param spatial: Spatial grid.
        :param velocity: Velocity grid.
        :param x: Positions of shape (n, d).
        :param v: Velocities of shape (n, d).
        :param population: Population behind the deposits. Defaults to the number of deposits.
        :param keep_deposits: Flag, declaring whether exact deposits are kept for weighted norms.
        :return: Field.
        """
        x = np.asarray(x, dtype=float).reshape(-1, spatial.dimension)
        v = np.asarray(v, dtype=float).reshape(-1, spatial.dimension)
        counts = np.zeros((spatial.cell_count, velocity.cell_count + 1))
        if x.shape[0]:
            np.add.at(counts, (spatial.locate(x), velocity.locate(v)), 1.0)
        return cls(spatial, velocity, counts, float(x.shape[0] if population is None else population),
                   x.copy() if keep_deposits else None, v.copy() if keep_deposits else None)

    """
    Queries
    """

    @property
    def deposit_count(self) -> float:
        return float(self.counts.sum())

    @property
    def mass(self) -> float:
        """
        Total mass ⟨f⟩ of the field.
        :return: Mass.
        """
        return self.deposit_count / self.population if self.population > 0 else 0.0

    @property
    def overflow_mass(self) -> float:
        """
        Mass outside the velocity truncation box.
        :return: Overflow mass.
        """
        return float(self.counts[:, -1].sum() / self.population) if self.population > 0 else 0.0

    def has_deposits(self) -> bool:
        return self.positions is not None

    def cell_masses(self) -> np.ndarray:
        """
        Method for retrieving cell masses, overflow column included.
        :return: Masses of shape (spatial cells, velocity cells + 1).
        """
        return self.counts / self.population if self.population > 0 else np.zeros_like(self.counts)

    def spatial_masses(self) -> np.ndarray:
        return self.cell_masses().sum(axis=1)

    def densities(self) -> np.ndarray:
        """
        Method for retrieving histogram densities on the regular cells.
        :return: Densities of shape (spatial cells, velocity cells).
        """
        return self.cell_masses()[:, :-1] / (self.spatial.volumes[:, None] * self.velocity.cell_volume)

    def cell_of(self, x: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Method for locating phase states on the field's grid.
        :param x: Positions of shape (n, d).
        :param v: Velocities of shape (n, d).
        :return: Spatial and velocity cell indices.
        """
        return self.spatial.locate(x), self.velocity.locate(v)

    """
    Combination
    """

    def check_grid(self, other: "EmpiricalField") -> None:
        """
        Method for rejecting fields on different grids.
        :param other: Other field.
        """
        if self.spatial != other.spatial or self.velocity != other.velocity:
            raise GridMismatchException((self.spatial.describe(), self.velocity.describe()),
                                        (other.spatial.describe(), other.velocity.describe()))

    def merge(self, other: "EmpiricalField") -> "EmpiricalField":
        """
        Method for merging fields by addition of counts, populations and deposits.
        :param other: Other field.
        :return: Merged field.
        """
        self.check_grid(other)
        keep = self.has_deposits() and other.has_deposits()
        return replace(self, counts=self.counts + other.counts, population=self.population + other.population,
                       positions=np.vstack([self.positions, other.positions]) if keep else None,
                       velocities=np.vstack([self.velocities, other.velocities]) if keep else None)

    def assert_nonnegative(self) -> None:
        """
        Method for asserting the positivity of all tallies.
        """
        if np.any(self.counts < 0.0) or not np.all(np.isfinite(self.counts)):
            raise ValueError("empirical field holds negative or non finite counts")

    """
    Export
    """

    def to_frame(self) -> pd.DataFrame:
        """
        Method for exporting the occupied cells as a table.
        :return: Data frame with cell ids, cell centers, counts and masses. Overflow cells carry empty
            velocity centers.
        """
        spatial_cells, velocity_cells = np.nonzero(self.counts)
        frame = pd.DataFrame({
            "cell": spatial_cells * (self.velocity.cell_count + 1) + velocity_cells,
            "spatial_cell": spatial_cells,
            "velocity_cell": velocity_cells
        })
        regular = velocity_cells < self.velocity.cell_count
        for axis in range(self.spatial.dimension):
            frame[f"x_{axis + 1}"] = self.spatial.centers[spatial_cells, axis]
        for axis in range(self.spatial.dimension):
            centers = np.full(spatial_cells.size, np.nan)
            centers[regular] = self.velocity.centers[velocity_cells[regular], axis]
            frame[f"v_{axis + 1}"] = centers
        frame["count"] = self.counts[spatial_cells, velocity_cells]
        frame["mass"] = frame["count"] / self.population
        return frame
