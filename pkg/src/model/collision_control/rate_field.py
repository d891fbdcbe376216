# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from abc import ABC, abstractmethod
from typing import Any, Optional, Tuple, Union
import numpy as np
from src.model.exceptions import CollisionModelException
from src.model.geometry_control.domain_geometry import as_batch, unbatch
from src.model.geometry_control.spatial_grid import SpatialGrid
from src.utility.silver.quadrature_utility import gauss_legendre_rule


class RateField(ABC):
    """
    Collision rate field σ(x) with bound σ_∞.
    """
    kind: str = "abstract"

    def __init__(self, sigma_infinity: float) -> None:
        """
        Initiation method.
        :param sigma_infinity: Rate bound σ_∞.
        """
        if not sigma_infinity >= 0.0:
            raise CollisionModelException(self.kind, "rate bound must be nonnegative")
        self.sigma_infinity = float(sigma_infinity)

    @abstractmethod
    def _sigma(self, x: np.ndarray) -> np.ndarray:
        """
        Internal method for evaluating the rate on a batch.
        :param x: Positions of shape (n, d).
        :return: Rates of shape (n,).
        """
        pass

    @abstractmethod
    def describe(self) -> dict:
        """
        Method for describing the field.
        :return: Field descriptor.
        """
        pass

    def sigma(self, x: Any) -> Union[np.ndarray, float]:
        """
        Method for evaluating σ(x).
        :param x: Position or batch of positions.
        :return: Rate(s) in [0, σ_∞].
        """
        batch, single = as_batch(x)
        return unbatch(self._sigma(batch), single)

    def infimum(self) -> float:
        """
        Method for retrieving the lower rate bound σ₀ (zero unless the field is constant).
        :return: Lower bound.
        """
        return 0.0

    def path_integral(self, y: np.ndarray, v: np.ndarray, t: Any) -> np.ndarray:
        """
        Method for computing ∫₀^t σ(y + s v) ds, by 64 point Gauss-Legendre quadrature unless overridden.
        :param y: Start positions of shape (n, d).
        :param v: Velocities of shape (n, d).
        :param t: Flight durations, scalar or shape (n,).
        :return: Path integrals of shape (n,).
        """
        y = np.atleast_2d(np.asarray(y, dtype=float))
        v = np.atleast_2d(np.asarray(v, dtype=float))
        durations = np.broadcast_to(np.asarray(t, dtype=float), (y.shape[0],))
        nodes, weights = gauss_legendre_rule(64)
        times = 0.5 * durations[:, None] * (nodes[None, :] + 1.0)
        points = y[:, None, :] + times[:, :, None] * v[:, None, :]
        values = self._sigma(points.reshape(-1, y.shape[1])).reshape(times.shape)
        return 0.5 * durations * (values @ weights)

    def next_collision(self, x: np.ndarray, v: np.ndarray, horizon: np.ndarray,
                       rng: np.random.Generator) -> np.ndarray:
        """
        Method for sampling collision times along straight rays by thinning.
        Proposals are Exp(σ_∞) increments, accepted with probability σ(x + t v)/σ_∞.
        :param x: Positions of shape (n, d).
        :param v: Velocities of shape (n, d).
        :param horizon: Flight horizons of shape (n,), at most the exit times.
        :param rng: Random generator.
        :return: Accepted collision times of shape (n,), infinite where no collision happens before the horizon.
        """
        count = x.shape[0]
        result = np.full(count, np.inf)
        if self.sigma_infinity == 0.0 or count == 0:
            return result
        elapsed = np.zeros(count)
        pending = np.arange(count)
        while pending.size:
            elapsed[pending] += rng.exponential(1.0 / self.sigma_infinity, size=pending.size)
            pending = pending[elapsed[pending] < horizon[pending]]
            if pending.size == 0:
                break
            positions = x[pending] + elapsed[pending, None] * v[pending]
            accepted = rng.random(pending.size) * self.sigma_infinity < self._sigma(positions)
            result[pending[accepted]] = elapsed[pending[accepted]]
            pending = pending[~accepted]
        return result

    def next_collision_single(self, x: Any, v: Any, horizon: float,
                              rng: np.random.Generator) -> Optional[Tuple[float, np.ndarray]]:
        """
        Method for sampling a single collision event.
        :param x: Position.
        :param v: Velocity.
        :param horizon: Flight horizon.
        :param rng: Random generator.
        :return: Event time and event position, or None if no collision happens before the horizon.
        """
        x = np.asarray(x, dtype=float)[None, :]
        v = np.asarray(v, dtype=float)[None, :]
        time = float(self.next_collision(x, v, np.array([horizon]), rng)[0])
        if not np.isfinite(time):
            return None
        return time, (x + time * v)[0]


class ConstantRate(RateField):
    """
    Constant rate σ ≡ σ₀.
    """
    kind = "constant"

    def __init__(self, value: float) -> None:
        super().__init__(value)

    def _sigma(self, x: np.ndarray) -> np.ndarray:
        return np.full(x.shape[0], self.sigma_infinity)

    def infimum(self) -> float:
        return self.sigma_infinity

    def path_integral(self, y: np.ndarray, v: np.ndarray, t: Any) -> np.ndarray:
        y = np.atleast_2d(np.asarray(y, dtype=float))
        return self.sigma_infinity * np.broadcast_to(np.asarray(t, dtype=float), (y.shape[0],)).copy()

    def describe(self) -> dict:
        return {"kind": self.kind, "value": self.sigma_infinity}


class HoleRate(RateField):
    """
    Rate σ_∞ outside a ball, zero inside (a transparent hole).
    """
    kind = "hole"

    def __init__(self, sigma_infinity: float, center: Any, radius: float) -> None:
        """
        Initiation method.
        :param sigma_infinity: Rate outside the hole.
        :param center: Hole center.
        :param radius: Hole radius.
        """
        super().__init__(sigma_infinity)
        if not radius > 0.0:
            raise CollisionModelException(self.kind, "hole radius must be positive")
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)

    def _sigma(self, x: np.ndarray) -> np.ndarray:
        offset = x - self.center
        return np.where(np.einsum("ij,ij->i", offset, offset) >= self.radius ** 2, self.sigma_infinity, 0.0)

    def time_inside_hole(self, y: np.ndarray, v: np.ndarray, t: Any) -> np.ndarray:
        """
        Method for computing the time the segment y + s v, s ∈ [0, t], spends inside the hole.
        :param y: Start positions of shape (n, d).
        :param v: Velocities of shape (n, d).
        :param t: Durations, scalar or shape (n,).
        :return: Chord durations of shape (n,).
        """
        y = np.atleast_2d(np.asarray(y, dtype=float))
        v = np.atleast_2d(np.asarray(v, dtype=float))
        durations = np.broadcast_to(np.asarray(t, dtype=float), (y.shape[0],))
        offset = y - self.center
        a = np.einsum("ij,ij->i", v, v)
        b = 2.0 * np.einsum("ij,ij->i", offset, v)
        c = np.einsum("ij,ij->i", offset, offset) - self.radius ** 2
        discriminant = b * b - 4.0 * a * c
        root = np.sqrt(np.maximum(discriminant, 0.0))
        safe_a = np.where(a > 0.0, a, 1.0)
        entry = (-b - root) / (2.0 * safe_a)
        leave = (-b + root) / (2.0 * safe_a)
        overlap = np.clip(np.minimum(leave, durations) - np.maximum(entry, 0.0), 0.0, None)
        overlap = np.where(discriminant > 0.0, overlap, 0.0)
        return np.where(a > 0.0, overlap, np.where(c < 0.0, durations, 0.0))

    def path_integral(self, y: np.ndarray, v: np.ndarray, t: Any) -> np.ndarray:
        y = np.atleast_2d(np.asarray(y, dtype=float))
        durations = np.broadcast_to(np.asarray(t, dtype=float), (y.shape[0],))
        return self.sigma_infinity * (durations - self.time_inside_hole(y, v, durations))

    def describe(self) -> dict:
        return {"kind": self.kind, "value": self.sigma_infinity, "hole_center": self.center.tolist(),
                "hole_radius": self.radius}


def smooth_step(s: np.ndarray) -> np.ndarray:
    """
    Function for the C^∞ transition from 0 (s <= 0) to 1 (s >= 1).
    :param s: Arguments.
    :return: Transition values.
    """
    s = np.clip(s, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        rising = np.where(s > 0.0, np.exp(-1.0 / np.where(s > 0.0, s, 1.0)), 0.0)
        falling = np.where(s < 1.0, np.exp(-1.0 / np.where(s < 1.0, 1.0 - s, 1.0)), 0.0)
    return rising / (rising + falling)


class SmoothHoleRate(HoleRate):
    """
    Mollified hole: zero inside B(center, radius), σ_∞ outside B(center, radius + width), smooth in between.
    """
    kind = "smooth"

    def __init__(self, sigma_infinity: float, center: Any, radius: float, width: float) -> None:
        super().__init__(sigma_infinity, center, radius)
        if not width > 0.0:
            raise CollisionModelException(self.kind, "mollification width must be positive")
        self.width = float(width)

    def _sigma(self, x: np.ndarray) -> np.ndarray:
        distance = np.linalg.norm(x - self.center, axis=1)
        return self.sigma_infinity * smooth_step((distance - self.radius) / self.width)

    def path_integral(self, y: np.ndarray, v: np.ndarray, t: Any) -> np.ndarray:
        return RateField.path_integral(self, y, v, t)

    def describe(self) -> dict:
        description = super().describe()
        description["width"] = self.width
        return description


class TabulatedRate(RateField):
    """
    Piecewise constant rate on the cells of a spatial grid, used by the relaxation preset.
    """
    kind = "tabulated"

    def __init__(self, grid: SpatialGrid, values: np.ndarray) -> None:
        """
        Initiation method.
        :param grid: Spatial grid.
        :param values: Rate per cell.
        """
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.cell_count,) or np.any(values < 0.0):
            raise CollisionModelException(self.kind, "tabulated rates must be nonnegative, one per cell")
        super().__init__(float(np.max(values)))
        self.grid = grid
        self.values = values

    def _sigma(self, x: np.ndarray) -> np.ndarray:
        return self.values[self.grid.locate(x)]

    def infimum(self) -> float:
        return float(np.min(self.values))

    def describe(self) -> dict:
        return {"kind": self.kind, "grid": list(self.grid.describe()), "values": self.values.tolist()}


def build_rate_field(kind: str, value: float = 1.0, hole_center: Any = None, hole_radius: float = 1.0,
                     width: float = 0.25, dimension: int = 2) -> RateField:
    """
    Function for building a rate field from config keys.
    :param kind: Field kind, one of "constant", "hole", "smooth".
    :param value: σ₀ for constant fields, σ_∞ otherwise.
    :param hole_center: Hole center. Defaults to the origin.
    :param hole_radius: Hole radius.
    :param width: Mollification width of the smooth field.
    :param dimension: Spatial dimension.
    :return: Rate field.
    """
    center = np.zeros(dimension) if hole_center is None else np.asarray(hole_center, dtype=float)
    if kind == "constant":
        return ConstantRate(value)
    elif kind == "hole":
        return HoleRate(value, center, hole_radius)
    elif kind == "smooth":
        return SmoothHoleRate(value, center, hole_radius, width)
    raise CollisionModelException(kind, "unknown rate field kind")
