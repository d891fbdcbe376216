# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from abc import ABC, abstractmethod
from typing import Any
import numpy as np
from src.model.exceptions import GeometryException
from src.model.geometry_control.domain_geometry import DomainGeometry, SphereGeometry


class SpatialGrid(ABC):
    """
    Partition of the domain into cells with positive volume.
    """

    def __init__(self, dimension: int) -> None:
        """
        Initiation method.
        :param dimension: Spatial dimension.
        """
        self.dimension = dimension
        self.volumes = np.empty(0)
        self.centers = np.empty((0, dimension))

    @property
    def cell_count(self) -> int:
        """
        Number of cells.
        :return: Cell count.
        """
        return int(self.volumes.size)

    @abstractmethod
    def locate(self, x: np.ndarray) -> np.ndarray:
        """
        Method for locating the cells of positions.
        :param x: Positions of shape (n, d).
        :return: Cell indices of shape (n,).
        """
        pass

    @abstractmethod
    def describe(self) -> tuple:
        """
        Method for describing the grid for equality checks.
        :return: Hashable descriptor.
        """
        pass

    def sample_cell(self, cell: int, count: int, rng: np.random.Generator, geometry: DomainGeometry) -> np.ndarray:
        """
        Method for sampling positions uniformly inside a cell by rejection from the bounding box of the domain.
        :param cell: Cell index.
        :param count: Number of positions.
        :param rng: Random generator.
        :param geometry: Domain geometry.
        :return: Positions of shape (count, d).
        """
        samples = np.empty((0, self.dimension))
        batch = max(64, 4 * count)
        while samples.shape[0] < count:
            proposals = self._propose(cell, batch, rng, geometry)
            keep = (self.locate(proposals) == cell) & geometry.contains(proposals)
            samples = np.vstack([samples, proposals[keep]])
        return samples[:count]

    def _propose(self, cell: int, count: int, rng: np.random.Generator, geometry: DomainGeometry) -> np.ndarray:
        """
        Internal method for proposing positions for cell sampling.
        :param cell: Cell index.
        :param count: Number of proposals.
        :param rng: Random generator.
        :param geometry: Domain geometry.
        :return: Proposed positions.
        """
        bound = geometry.bounding_radius()
        return rng.uniform(-bound, bound, size=(count, self.dimension))

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, SpatialGrid) and self.describe() == other.describe()

    def __hash__(self) -> int:
        return hash(self.describe())


class PolarGrid(SpatialGrid):
    """
    Equal-area rings times equal sectors on a centered disk.
    """

    def __init__(self, radius: float, radial_bins: int, angular_bins: int) -> None:
        """
        Initiation method.
        :param radius: Disk radius.
        :param radial_bins: Number of rings.
        :param angular_bins: Number of sectors.
        """
        super().__init__(2)
        self.radius = float(radius)
        self.radial_bins = int(radial_bins)
        self.angular_bins = int(angular_bins)
        count = self.radial_bins * self.angular_bins
        self.volumes = np.full(count, np.pi * self.radius ** 2 / count)
        rings, sectors = np.divmod(np.arange(count), self.angular_bins)
        middle_radius = self.radius * np.sqrt((rings + 0.5) / self.radial_bins)
        middle_angle = (sectors + 0.5) * 2.0 * np.pi / self.angular_bins
        self.centers = middle_radius[:, None] * np.stack([np.cos(middle_angle), np.sin(middle_angle)], axis=1)

    def locate(self, x: np.ndarray) -> np.ndarray:
        squared = np.einsum("ij,ij->i", x, x) / self.radius ** 2
        rings = np.clip(np.floor(squared * self.radial_bins).astype(np.int64), 0, self.radial_bins - 1)
        angles = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2.0 * np.pi)
        sectors = np.clip(np.floor(angles / (2.0 * np.pi) * self.angular_bins).astype(np.int64),
                          0, self.angular_bins - 1)
        return rings * self.angular_bins + sectors

    def describe(self) -> tuple:
        return ("polar", self.radius, self.radial_bins, self.angular_bins)

    def _propose(self, cell: int, count: int, rng: np.random.Generator, geometry: DomainGeometry) -> np.ndarray:
        ring, sector = divmod(cell, self.angular_bins)
        squared = (ring + rng.random(count)) / self.radial_bins
        angles = (sector + rng.random(count)) * 2.0 * np.pi / self.angular_bins
        radii = self.radius * np.sqrt(squared)
        return radii[:, None] * np.stack([np.cos(angles), np.sin(angles)], axis=1) * (1.0 - 1e-12)


class SphericalGrid(SpatialGrid):
    """
    Equal-volume shells times equal cos-polar bins times equal azimuth bins on a centered ball.
    """

    def __init__(self, radius: float, shell_bins: int, polar_bins: int, azimuth_bins: int) -> None:
        """
        Initiation method.
        :param radius: Ball radius.
        :param shell_bins: Number of shells.
        :param polar_bins: Number of bins in the cosine of the polar angle.
        :param azimuth_bins: Number of azimuth bins.
        """
        super().__init__(3)
        self.radius = float(radius)
        self.shell_bins = int(shell_bins)
        self.polar_bins = int(polar_bins)
        self.azimuth_bins = int(azimuth_bins)
        count = self.shell_bins * self.polar_bins * self.azimuth_bins
        self.volumes = np.full(count, 4.0 / 3.0 * np.pi * self.radius ** 3 / count)
        shells, rest = np.divmod(np.arange(count), self.polar_bins * self.azimuth_bins)
        polar, azimuth = np.divmod(rest, self.azimuth_bins)
        middle_radius = self.radius * ((shells + 0.5) / self.shell_bins) ** (1.0 / 3.0)
        cosine = -1.0 + 2.0 * (polar + 0.5) / self.polar_bins
        sine = np.sqrt(1.0 - cosine ** 2)
        angle = (azimuth + 0.5) * 2.0 * np.pi / self.azimuth_bins
        self.centers = middle_radius[:, None] * np.stack([sine * np.cos(angle), sine * np.sin(angle), cosine], axis=1)

    def locate(self, x: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(x, axis=1)
        shells = np.clip(np.floor((norms / self.radius) ** 3 * self.shell_bins).astype(np.int64),
                         0, self.shell_bins - 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            cosine = np.where(norms > 0.0, x[:, 2] / np.where(norms > 0.0, norms, 1.0), 1.0)
        polar = np.clip(np.floor((cosine + 1.0) / 2.0 * self.polar_bins).astype(np.int64), 0, self.polar_bins - 1)
        angles = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2.0 * np.pi)
        azimuth = np.clip(np.floor(angles / (2.0 * np.pi) * self.azimuth_bins).astype(np.int64),
                          0, self.azimuth_bins - 1)
        return (shells * self.polar_bins + polar) * self.azimuth_bins + azimuth

    def describe(self) -> tuple:
        return ("spherical", self.radius, self.shell_bins, self.polar_bins, self.azimuth_bins)


class ClippedCartesianGrid(SpatialGrid):
    """
    Cartesian cells on the bounding box, clipped to the domain.
    Volumes are estimated on a sub-sampling lattice, cells without interior lattice points are dropped.
    """

    def __init__(self, geometry: DomainGeometry, bins: int, subsamples: int = 24) -> None:
        """
        Initiation method.
        :param geometry: Domain geometry.
        :param bins: Number of cells per axis.
        :param subsamples: Lattice points per cell and axis used for volume estimation.
        """
        super().__init__(geometry.dimension)
        self.geometry_descriptor = tuple(sorted(geometry.describe().items()))
        self.bound = geometry.bounding_radius()
        self.bins = int(bins)
        self.subsamples = int(subsamples)
        width = 2.0 * self.bound / self.bins
        offsets = (np.arange(self.subsamples) + 0.5) / self.subsamples * width
        axes = [offsets] * self.dimension
        lattice = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dimension)

        full_count = self.bins ** self.dimension
        full_volumes = np.zeros(full_count)
        full_centers = np.zeros((full_count, self.dimension))
        for index in range(full_count):
            corner = -self.bound + width * np.array(np.unravel_index(index, (self.bins,) * self.dimension))
            points = corner + lattice
            inside = geometry.contains(points)
            if np.any(inside):
                full_volumes[index] = width ** self.dimension * np.mean(inside)
                full_centers[index] = np.mean(points[inside], axis=0)
        active = np.flatnonzero(full_volumes > 0.0)
        if active.size == 0:
            raise GeometryException(geometry.shape, None, "clipped grid has no active cells")
        self._mapping = np.full(full_count, -1, dtype=np.int64)
        self._mapping[active] = np.arange(active.size)
        inactive = np.flatnonzero(full_volumes == 0.0)
        if inactive.size:
            raw_centers = -self.bound + width * (np.stack(np.unravel_index(inactive, (self.bins,) * self.dimension),
                                                          axis=1) + 0.5)
            nearest = np.argmin(np.linalg.norm(raw_centers[:, None, :] - full_centers[active][None, :, :], axis=2),
                                axis=1)
            self._mapping[inactive] = nearest
        self.volumes = full_volumes[active]
        self.centers = full_centers[active]

    def locate(self, x: np.ndarray) -> np.ndarray:
        width = 2.0 * self.bound / self.bins
        coordinates = np.clip(np.floor((x + self.bound) / width).astype(np.int64), 0, self.bins - 1)
        full = np.ravel_multi_index(tuple(coordinates.T), (self.bins,) * self.dimension)
        return self._mapping[full]

    def describe(self) -> tuple:
        return ("clipped", self.geometry_descriptor, self.bins, self.subsamples)


def build_spatial_grid(geometry: DomainGeometry, radial_bins: int = 8, angular_bins: int = 8,
                       polar_bins: int = None) -> SpatialGrid:
    """
    Function for building the default spatial grid of a geometry.
    :param geometry: Domain geometry.
    :param radial_bins: Rings (disk), shells (ball) or Cartesian bins per axis (implicit shape).
    :param angular_bins: Sectors (disk) or azimuth bins (ball).
    :param polar_bins: Cos-polar bins for the ball. Defaults to half of the azimuth bins.
    :return: Spatial grid.
    """
    if isinstance(geometry, SphereGeometry) and geometry.dimension == 2:
        return PolarGrid(geometry.radius, radial_bins, angular_bins)
    elif isinstance(geometry, SphereGeometry):
        return SphericalGrid(geometry.radius, radial_bins,
                             max(1, angular_bins // 2) if polar_bins is None else polar_bins, angular_bins)
    return ClippedCartesianGrid(geometry, radial_bins)
