# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Tuple, Union
import numpy as np
from scipy import integrate, optimize
from scipy.spatial.distance import pdist, squareform
from src.model.exceptions import GeometryException
from src.model.geometry_control.level_sets import SuperellipseLevelSet, get_level_set


BOUNDARY_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class PhaseState(object):
    """
    Position-velocity pair of a single particle.
    """
    x: np.ndarray
    v: np.ndarray

    @property
    def speed(self) -> float:
        """
        Speed of the particle.
        :return: Euclidean norm of the velocity.
        """
        return float(np.linalg.norm(self.v))


def as_batch(values: Any) -> Tuple[np.ndarray, bool]:
    """
    Function for turning a single vector or a batch of vectors into a batch.
    :param values: Vector of shape (d,) or batch of shape (n, d).
    :return: Batch of shape (n, d) and flag, declaring whether a single vector was given.
    """
    array = np.asarray(values, dtype=float)
    if array.ndim == 1:
        return array[None, :], True
    return array, False


def unbatch(values: np.ndarray, single: bool) -> Union[np.ndarray, float]:
    """
    Function for reverting as_batch on results.
    :param values: Batched results.
    :param single: Flag, declaring whether a single input was given.
    :return: Single result or batch.
    """
    if single:
        return float(values[0]) if values.ndim == 1 else values[0]
    return values


def sphere_exit_time(x: np.ndarray, v: np.ndarray, radius: float) -> np.ndarray:
    """
    Function for computing the forward exit time from a centered ball.
    Uses the cancellation free root of |x + tv|² = radius².
    Points slightly outside are treated as boundary points.
    :param x: Positions of shape (n, d).
    :param v: Velocities of shape (n, d).
    :param radius: Ball radius.
    :return: Exit times of shape (n,), infinite for zero velocities.
    """
    a = np.einsum("ij,ij->i", v, v)
    b = 2.0 * np.einsum("ij,ij->i", x, v)
    c = np.minimum(np.einsum("ij,ij->i", x, x) - radius * radius, 0.0)
    root = np.sqrt(np.maximum(b * b - 4.0 * a * c, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        denominator = b + root
        forward = np.where(denominator > 0.0, -2.0 * c / np.where(denominator > 0.0, denominator, 1.0), 0.0)
        backward = (root - b) / (2.0 * np.where(a > 0.0, a, 1.0))
        times = np.where(b >= 0.0, forward, backward)
    times = np.where(a > 0.0, np.maximum(times, 0.0), np.inf)
    return times


class DomainGeometry(ABC):
    """
    Abstract bounded domain with exact ray geometry.
    """
    shape: str = "abstract"

    def __init__(self, dimension: int) -> None:
        """
        Initiation method.
        :param dimension: Spatial dimension, 2 or 3.
        """
        if dimension not in [2, 3]:
            raise GeometryException(self.shape, dimension, "only dimensions 2 and 3 are supported")
        self.dimension = dimension
        self._diameter = None

    """
    Shape specific methods
    """

    @abstractmethod
    def _contains(self, x: np.ndarray) -> np.ndarray:
        """
        Internal method for checking membership in the open domain.
        :param x: Positions of shape (n, d).
        :return: Boolean mask.
        """
        pass

    @abstractmethod
    def _exit_time(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """
        Internal method for computing forward exit times.
        :param x: Positions of shape (n, d).
        :param v: Velocities of shape (n, d).
        :return: Exit times, infinite for zero velocities.
        """
        pass

    @abstractmethod
    def _normal(self, x: np.ndarray) -> np.ndarray:
        """
        Internal method for computing unit outward normals without proximity check.
        :param x: Positions of shape (n, d).
        :return: Unit normals of shape (n, d).
        """
        pass

    @abstractmethod
    def boundary_distance(self, x: Any) -> Union[np.ndarray, float]:
        """
        Method for computing the signed distance to the boundary, positive inside.
        First order estimate for implicit shapes.
        :param x: Position or batch of positions.
        :return: Signed distance.
        """
        pass

    @abstractmethod
    def project_to_boundary(self, x: Any) -> np.ndarray:
        """
        Method for projecting positions onto the boundary.
        :param x: Position or batch of positions close to the boundary.
        :return: Projected positions.
        """
        pass

    @abstractmethod
    def volume(self) -> float:
        """
        Method for computing the Lebesgue measure of the domain.
        :return: Domain volume.
        """
        pass

    @abstractmethod
    def sample_uniform(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """
        Method for sampling positions uniformly in the domain.
        :param count: Number of positions.
        :param rng: Random generator.
        :return: Positions of shape (count, d).
        """
        pass

    @abstractmethod
    def distance_to_origin_boundary(self) -> float:
        """
        Method for computing the distance between origin and boundary.
        :return: Distance d(∂Ω, 0).
        """
        pass

    @abstractmethod
    def bounding_radius(self) -> float:
        """
        Method for retrieving a radius of a centered ball containing the closure of the domain.
        :return: Bounding radius.
        """
        pass

    @abstractmethod
    def describe(self) -> dict:
        """
        Method for describing the geometry.
        :return: Geometry descriptor.
        """
        pass

    @abstractmethod
    def _compute_diameter(self) -> float:
        """
        Internal method for computing the diameter.
        :return: Diameter.
        """
        pass

    """
    Shared ray geometry
    """

    def contains(self, x: Any) -> Union[np.ndarray, bool]:
        """
        Method for checking membership in the open domain.
        :param x: Position or batch of positions.
        :return: True for positions strictly inside.
        """
        batch, single = as_batch(x)
        inside = self._contains(batch)
        return bool(inside[0]) if single else inside

    def outward_normal(self, x: Any, check: bool = True) -> np.ndarray:
        """
        Method for computing the unit outward normal.
        :param x: Boundary position or batch of boundary positions.
        :param check: Flag, declaring whether to reject positions farther than 1e-9 from the boundary.
        :return: Unit outward normal(s).
        """
        batch, single = as_batch(x)
        if check:
            distance = np.abs(np.atleast_1d(self.boundary_distance(batch)))
            if np.any(distance > BOUNDARY_TOLERANCE * max(1.0, self.bounding_radius())):
                offending = batch[np.argmax(distance)]
                raise GeometryException(self.shape, offending.tolist(), "position is not on the boundary")
        return unbatch(self._normal(batch), single)

    def exit_time(self, x: Any, v: Any) -> Union[np.ndarray, float]:
        """
        Method for computing the forward exit time τ(x, v) = inf{t > 0: x + tv ∈ ∂Ω}.
        Zero on outgoing and grazing boundary states, infinite for v = 0.
        :param x: Position or batch of positions in the closure of the domain.
        :param v: Velocity or batch of velocities.
        :return: Exit time(s).
        """
        x_batch, x_single = as_batch(x)
        v_batch, v_single = as_batch(v)
        single = x_single and v_single
        x_batch, v_batch = np.broadcast_arrays(x_batch, v_batch)
        return unbatch(self._exit_time(x_batch, v_batch), single)

    def footpoint(self, x: Any, v: Any) -> np.ndarray:
        """
        Method for computing the footpoint q(x, v) = x + τ(x, v) v.
        :param x: Position or batch of positions.
        :param v: Velocity or batch of velocities.
        :return: Boundary position(s).
        """
        x_batch, x_single = as_batch(x)
        v_batch, v_single = as_batch(v)
        single = x_single and v_single
        x_batch, v_batch = np.broadcast_arrays(x_batch, v_batch)
        times = self._exit_time(x_batch, v_batch)
        if np.any(~np.isfinite(times)):
            raise GeometryException(self.shape, None, "footpoint undefined for zero velocity")
        return unbatch(x_batch + times[:, None] * v_batch, single)

    def specular(self, x: Any, v: Any) -> np.ndarray:
        """
        Method for computing the specular reflection η_x(v) = v - 2 (v·n_x) n_x.
        :param x: Boundary position or batch of boundary positions.
        :param v: Velocity or batch of velocities.
        :return: Reflected velocity (velocities).
        """
        x_batch, x_single = as_batch(x)
        v_batch, v_single = as_batch(v)
        single = x_single and v_single
        x_batch, v_batch = np.broadcast_arrays(x_batch, v_batch)
        normal = self._normal(x_batch)
        normal_component = np.einsum("ij,ij->i", v_batch, normal)
        return unbatch(v_batch - 2.0 * normal_component[:, None] * normal, single)

    def diameter(self) -> float:
        """
        Method for retrieving the diameter sup |x - y| over the closure.
        :return: Diameter d(Ω).
        """
        if self._diameter is None:
            self._diameter = float(self._compute_diameter())
        return self._diameter

    def classify(self, x: Any, v: Any, tolerance: float = BOUNDARY_TOLERANCE) -> str:
        """
        Method for classifying a phase state into interior, outgoing, incoming or grazing.
        :param x: Position.
        :param v: Velocity.
        :param tolerance: Boundary proximity and grazing tolerance.
        :return: One of "interior", "outgoing", "incoming", "grazing".
        """
        if float(self.boundary_distance(np.asarray(x, dtype=float))) > tolerance:
            return "interior"
        normal_speed = float(np.dot(self.outward_normal(x, check=False), np.asarray(v, dtype=float)))
        if normal_speed > tolerance:
            return "outgoing"
        elif normal_speed < -tolerance:
            return "incoming"
        return "grazing"

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, DomainGeometry) and self.describe() == other.describe()

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.describe().items())))


class SphereGeometry(DomainGeometry):
    """
    Centered disk (d = 2) or ball (d = 3).
    """

    def __init__(self, radius: float, dimension: int) -> None:
        """
        Initiation method.
        :param radius: Radius.
        :param dimension: Spatial dimension.
        """
        self.shape = "disk2d" if dimension == 2 else "ball3d"
        super().__init__(dimension)
        if not radius > 0.0:
            raise GeometryException(self.shape, radius, "radius must be positive")
        self.radius = float(radius)

    def _contains(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("ij,ij->i", x, x) < self.radius * self.radius

    def _exit_time(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        return sphere_exit_time(x, v, self.radius)

    def _normal(self, x: np.ndarray) -> np.ndarray:
        return x / np.linalg.norm(x, axis=1)[:, None]

    def boundary_distance(self, x: Any) -> Union[np.ndarray, float]:
        batch, single = as_batch(x)
        return unbatch(self.radius - np.linalg.norm(batch, axis=1), single)

    def project_to_boundary(self, x: Any) -> np.ndarray:
        batch, single = as_batch(x)
        return unbatch(self.radius * batch / np.linalg.norm(batch, axis=1)[:, None], single)

    def volume(self) -> float:
        if self.dimension == 2:
            return float(np.pi * self.radius ** 2)
        return float(4.0 / 3.0 * np.pi * self.radius ** 3)

    def sample_uniform(self, count: int, rng: np.random.Generator) -> np.ndarray:
        directions = rng.standard_normal((count, self.dimension))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        radii = self.radius * rng.random(count) ** (1.0 / self.dimension)
        return directions * radii[:, None]

    def distance_to_origin_boundary(self) -> float:
        return self.radius

    def bounding_radius(self) -> float:
        return self.radius

    def describe(self) -> dict:
        return {"shape": self.shape, "radius": self.radius}

    def _compute_diameter(self) -> float:
        return 2.0 * self.radius


class ImplicitGeometry(DomainGeometry):
    """
    Planar star-shaped convex domain {φ < 0} given by a level set preset.
    Exit times come from a coarse scan inside sphere bounds, safeguarded bisection and two Newton steps.
    """
    shape = "implicit2d"

    def __init__(self, level_set: SuperellipseLevelSet, scan_points: int = 16, bisection_steps: int = 64) -> None:
        """
        Initiation method.
        :param level_set: Level set instance with value, gradient and radial boundary methods.
        :param scan_points: Number of scan points for bracketing the first crossing.
        :param bisection_steps: Number of bisection steps.
        """
        super().__init__(2)
        self.level_set = level_set
        self.scan_points = scan_points
        self.bisection_steps = bisection_steps
        angles = np.linspace(0.0, 2.0 * np.pi, 8192, endpoint=False)
        radial = self.level_set.radial_boundary(angles)
        self._outer_radius = float(np.max(radial)) * (1.0 + 1e-6)
        self._inner_radius = float(np.min(radial)) * (1.0 - 1e-6)

    def _contains(self, x: np.ndarray) -> np.ndarray:
        return self.level_set.value(x) < 0.0

    def _exit_time(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        count = x.shape[0]
        times = np.zeros(count)
        moving = np.einsum("ij,ij->i", v, v) > 0.0
        times[~moving] = np.inf

        values = self.level_set.value(x)
        slopes = np.einsum("ij,ij->i", self.level_set.gradient(x), v)
        gradient_norm = np.linalg.norm(self.level_set.gradient(x), axis=1)
        on_boundary = np.abs(values) <= BOUNDARY_TOLERANCE * np.maximum(gradient_norm, 1.0)
        leaving = on_boundary & (slopes >= 0.0)
        active = np.flatnonzero(moving & ~leaving)
        if active.size == 0:
            return times

        xa, va = x[active], v[active]
        upper = sphere_exit_time(xa, va, self._outer_radius)
        inside_inner = np.einsum("ij,ij->i", xa, xa) < self._inner_radius ** 2
        lower = np.where(inside_inner, sphere_exit_time(xa, va, self._inner_radius), 0.0)

        # first sign change of φ along the ray on a coarse scan
        low = lower.copy()
        high = upper.copy()
        found = np.zeros(active.size, dtype=bool)
        previous = lower.copy()
        for step in range(1, self.scan_points + 1):
            current = lower + (upper - lower) * step / self.scan_points
            crossing = ~found & (self.level_set.value(xa + current[:, None] * va) >= 0.0)
            low[crossing] = previous[crossing]
            high[crossing] = current[crossing]
            found |= crossing
            previous = current
        for _ in range(self.bisection_steps):
            middle = 0.5 * (low + high)
            outside = self.level_set.value(xa + middle[:, None] * va) >= 0.0
            high = np.where(outside, middle, high)
            low = np.where(outside, low, middle)
        estimate = 0.5 * (low + high)
        for _ in range(2):
            point = xa + estimate[:, None] * va
            derivative = np.einsum("ij,ij->i", self.level_set.gradient(point), va)
            with np.errstate(divide="ignore", invalid="ignore"):
                candidate = estimate - self.level_set.value(point) / derivative
            accepted = np.isfinite(candidate) & (candidate >= low) & (candidate <= high)
            estimate = np.where(accepted, candidate, estimate)
        times[active] = np.maximum(estimate, 0.0)
        return times

    def _normal(self, x: np.ndarray) -> np.ndarray:
        gradient = self.level_set.gradient(x)
        return gradient / np.linalg.norm(gradient, axis=1)[:, None]

    def boundary_distance(self, x: Any) -> Union[np.ndarray, float]:
        batch, single = as_batch(x)
        gradient_norm = np.linalg.norm(self.level_set.gradient(batch), axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            distance = np.where(gradient_norm > 0.0, -self.level_set.value(batch) / gradient_norm,
                                self.distance_to_origin_boundary())
        return unbatch(distance, single)

    def project_to_boundary(self, x: Any) -> np.ndarray:
        batch, single = as_batch(x)
        projected = batch.copy()
        for _ in range(2):
            gradient = self.level_set.gradient(projected)
            projected = projected - (self.level_set.value(projected) /
                                     np.einsum("ij,ij->i", gradient, gradient))[:, None] * gradient
        return unbatch(projected, single)

    def volume(self) -> float:
        area, _ = integrate.quad(lambda angle: 0.5 * float(self.level_set.radial_boundary(angle)) ** 2,
                                 0.0, 2.0 * np.pi, limit=200, epsabs=1e-13, epsrel=1e-12)
        return float(area)

    def sample_uniform(self, count: int, rng: np.random.Generator) -> np.ndarray:
        samples = np.empty((0, 2))
        while samples.shape[0] < count:
            proposals = rng.uniform(-self._outer_radius, self._outer_radius, size=(2 * count, 2))
            samples = np.vstack([samples, proposals[self._contains(proposals)]])
        return samples[:count]

    def distance_to_origin_boundary(self) -> float:
        result = optimize.minimize_scalar(lambda angle: float(self.level_set.radial_boundary(angle)),
                                          bounds=(0.0, 2.0 * np.pi), method="bounded",
                                          options={"xatol": 1e-12})
        angles = np.linspace(0.0, 2.0 * np.pi, 8192, endpoint=False)
        return float(min(result.fun, np.min(self.level_set.radial_boundary(angles))))

    def bounding_radius(self) -> float:
        return self._outer_radius

    def describe(self) -> dict:
        return {"shape": self.shape, "level_set": type(self.level_set).__name__,
                "exponent": self.level_set.exponent, "radius": self.level_set.radius}

    def _boundary_point(self, angle: float) -> np.ndarray:
        radius = float(self.level_set.radial_boundary(angle))
        return radius * np.array([np.cos(angle), np.sin(angle)])

    def _compute_diameter(self) -> float:
        angles = np.linspace(0.0, 2.0 * np.pi, 2048, endpoint=False)
        points = self.level_set.radial_boundary(angles)[:, None] * np.stack([np.cos(angles), np.sin(angles)], axis=1)
        distances = squareform(pdist(points))
        first, second = np.unravel_index(np.argmax(distances), distances.shape)
        refined = optimize.minimize(
            lambda pair: -float(np.linalg.norm(self._boundary_point(pair[0]) - self._boundary_point(pair[1]))),
            x0=np.array([angles[first], angles[second]]), method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14})
        return max(float(distances[first, second]), float(-refined.fun))


def build_geometry(shape: str, radius: float = 1.0, level_set: str = "superellipse", exponent: float = 4.0) -> DomainGeometry:
    """
    Function for building a geometry from config keys.
    :param shape: Shape descriptor, one of "disk2d", "ball3d", "implicit2d".
    :param radius: Radius (scaling radius for implicit shapes).
    :param level_set: Level set preset for implicit shapes.
    :param exponent: Level set exponent for implicit shapes.
    :return: Geometry instance.
    """
    if shape == "disk2d":
        return SphereGeometry(radius, 2)
    elif shape == "ball3d":
        return SphereGeometry(radius, 3)
    elif shape == "implicit2d":
        return ImplicitGeometry(get_level_set(level_set, exponent, radius))
    raise GeometryException(shape, None, "unknown shape")
