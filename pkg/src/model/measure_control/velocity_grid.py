# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from typing import Any
import numpy as np
from src.configuration import configuration as cfg


class VelocityGrid(object):
    """
    Cartesian velocity cells on [-V_max, V_max]^d with one overflow cell for everything outside.
    """

    def __init__(self, dimension: int, bins: int, v_max: float = cfg.DEFAULT_V_MAX) -> None:
        """
        Initiation method.
        :param dimension: Dimension.
        :param bins: Bins per axis.
        :param v_max: Half width of the truncation box.
        """
        self.dimension = int(dimension)
        self.bins = int(bins)
        self.v_max = float(v_max)
        self.width = 2.0 * self.v_max / self.bins
        self.edges = np.linspace(-self.v_max, self.v_max, self.bins + 1)
        axis = 0.5 * (self.edges[:-1] + self.edges[1:])
        self.centers = np.stack(np.meshgrid(*([axis] * self.dimension), indexing="ij"),
                                axis=-1).reshape(-1, self.dimension)

    @property
    def cell_count(self) -> int:
        """
        Number of regular cells, the overflow cell excluded.
        :return: Cell count.
        """
        return self.bins ** self.dimension

    @property
    def overflow_index(self) -> int:
        return self.cell_count

    @property
    def cell_volume(self) -> float:
        return self.width ** self.dimension

    def locate(self, v: np.ndarray) -> np.ndarray:
        """
        Method for locating velocities.
        :param v: Velocities of shape (n, d).
        :return: Cell indices of shape (n,), the overflow index for velocities outside the box.
        """
        coordinates = np.floor((v + self.v_max) / self.width).astype(np.int64)
        outside = np.any((coordinates < 0) | (coordinates >= self.bins), axis=1)
        coordinates = np.clip(coordinates, 0, self.bins - 1)
        indices = np.ravel_multi_index(tuple(coordinates.T), (self.bins,) * self.dimension)
        return np.where(outside, self.overflow_index, indices)

    def describe(self) -> tuple:
        return ("cartesian", self.dimension, self.bins, self.v_max)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, VelocityGrid) and self.describe() == other.describe()

    def __hash__(self) -> int:
        return hash(self.describe())
