# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass
import numpy as np
import pandas as pd
from src.model.exceptions import CollisionModelException
from src.model.geometry_control.spatial_grid import SpatialGrid


@dataclass
class RelaxationTable(object):
    """
    Tabulated target density f_{A,∞}(x, ·) on a Cartesian velocity lattice, one row per spatial cell.
    """
    grid: SpatialGrid
    nodes: np.ndarray
    values: np.ndarray
    spacing: float

    def __post_init__(self) -> None:
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.cell_count, self.nodes.shape[0]):
            raise CollisionModelException("relaxation", "table shape does not match grid and velocity lattice")
        if np.any(self.values < 0.0) or not np.all(np.isfinite(self.values)):
            raise CollisionModelException("relaxation", "tabulated values must be finite and nonnegative")
        if not self.spacing > 0.0:
            raise CollisionModelException("relaxation", "velocity lattice spacing must be positive")

    @property
    def cell_volume(self) -> float:
        """
        Velocity cell volume h^d.
        :return: Volume.
        """
        return self.spacing ** self.nodes.shape[1]

    def masses(self) -> np.ndarray:
        """
        Method for computing the per-cell masses ∫ f_{A,∞}(x, v') dv', the normalizers σ(x).
        :return: Masses of shape (cells,).
        """
        return self.values.sum(axis=1) * self.cell_volume


def relaxation_table_from_maxwellian(grid: SpatialGrid, spacing: float = 0.25, v_max: float = 6.0,
                                     sigma: float = 1.0) -> RelaxationTable:
    """
    Function for tabulating σ·M₁ in every cell, renormalized so that every cell carries mass σ.
    :param grid: Spatial grid.
    :param spacing: Velocity lattice spacing.
    :param v_max: Lattice half width.
    :param sigma: Target per-cell mass.
    :return: Relaxation table.
    """
    axis = np.arange(-v_max + 0.5 * spacing, v_max, spacing)
    nodes = np.stack(np.meshgrid(*([axis] * grid.dimension), indexing="ij"), axis=-1).reshape(-1, grid.dimension)
    density = np.exp(-0.5 * np.einsum("ij,ij->i", nodes, nodes)) / (2.0 * np.pi) ** (grid.dimension / 2.0)
    density *= sigma / (density.sum() * spacing ** grid.dimension)
    return RelaxationTable(grid, nodes, np.tile(density, (grid.cell_count, 1)), spacing)


def save_relaxation_table(table: RelaxationTable, path: str) -> None:
    """
    Function for saving a relaxation table as CSV (cell, v_1 .. v_d, value).
    :param table: Relaxation table.
    :param path: Target path.
    """
    dimension = table.nodes.shape[1]
    cells = np.repeat(np.arange(table.grid.cell_count), table.nodes.shape[0])
    frame = pd.DataFrame({"cell": cells})
    for axis in range(dimension):
        frame[f"v_{axis + 1}"] = np.tile(table.nodes[:, axis], table.grid.cell_count)
    frame["value"] = table.values.ravel()
    frame.to_csv(path, index=False, lineterminator="\n")


def load_relaxation_table(path: str, grid: SpatialGrid) -> RelaxationTable:
    """
    Function for loading a relaxation table CSV.
    Every cell must list the same regular velocity lattice.
    :param path: Table path.
    :param grid: Spatial grid the cell indices refer to.
    :return: Relaxation table.
    """
    frame = pd.read_csv(path)
    velocity_columns = [f"v_{axis + 1}" for axis in range(grid.dimension)]
    missing = [column for column in ["cell", "value"] + velocity_columns if column not in frame.columns]
    if missing:
        raise CollisionModelException("relaxation", f"table misses columns {missing}")
    frame = frame.sort_values(["cell"] + velocity_columns, kind="mergesort")
    cells = frame["cell"].to_numpy()
    if set(np.unique(cells).tolist()) != set(range(grid.cell_count)):
        raise CollisionModelException("relaxation", "table must cover every spatial cell")
    first = frame[frame["cell"] == cells[0]]
    nodes = first[velocity_columns].to_numpy(dtype=float)
    values = frame["value"].to_numpy(dtype=float).reshape(grid.cell_count, -1)
    if values.shape[1] != nodes.shape[0]:
        raise CollisionModelException("relaxation", "cells list different velocity lattices")
    axis_values = np.unique(nodes[:, 0])
    spacing = float(np.min(np.diff(axis_values))) if axis_values.size > 1 else 1.0
    return RelaxationTable(grid, nodes, values, spacing)
