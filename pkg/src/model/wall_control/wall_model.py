# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from abc import ABC, abstractmethod
from dataclasses import asdict
from typing import Any, Optional, Tuple
import numpy as np
from src.model.exceptions import WallParameterException
from src.model.geometry_control.domain_geometry import DomainGeometry, as_batch, unbatch
from src.model.wall_control.bessel import log_bessel_i0
from src.model.wall_control.boundary_field import BoundaryField


def split_velocity(v: np.ndarray, normal: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Function for splitting velocities into normal component and tangential part.
    :param v: Velocities of shape (n, d).
    :param normal: Unit normals of shape (n, d).
    :return: Normal components of shape (n,) and tangential parts of shape (n, d).
    """
    normal_component = np.einsum("ij,ij->i", v, normal)
    return normal_component, v - normal_component[:, None] * normal


def tangential_gaussian(normal: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Function for drawing standard Gaussian vectors in the tangent planes.
    :param normal: Unit normals of shape (n, d).
    :param rng: Random generator.
    :return: Tangential standard Gaussian vectors of shape (n, d).
    """
    draws = rng.standard_normal(normal.shape)
    return draws - np.einsum("ij,ij->i", draws, normal)[:, None] * normal


class WallModel(ABC):
    """
    Reflection law at the boundary with position dependent wall temperature.
    """
    kind: str = "abstract"
    absorbing: bool = False

    def __init__(self, geometry: DomainGeometry, temperature: BoundaryField) -> None:
        """
        Initiation method.
        :param geometry: Domain geometry.
        :param temperature: Wall temperature field θ.
        """
        if not temperature.infimum() > 0.0:
            raise WallParameterException("theta", temperature.infimum(), "wall temperature must be positive")
        self.geometry = geometry
        self.temperature = temperature

    @abstractmethod
    def reflect(self, u: np.ndarray, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """
        Method for drawing reflected velocities.
        :param u: Incoming velocities of shape (n, d), u·n_x > 0.
        :param x: Boundary positions of shape (n, d).
        :param rng: Random generator owned by the calling worker.
        :return: Outgoing velocities of shape (n, d).
        """
        pass

    @abstractmethod
    def flux_frame(self, u: np.ndarray, x: np.ndarray) -> dict:
        """
        Method for describing the continuous part of the reflection law for quadrature.
        :param u: Incoming velocity of shape (d,).
        :param x: Boundary position of shape (d,).
        :return: Dictionary with "density" (callable on outgoing velocity batches), "normal_center",
            "normal_width", "tangential_center" (in the normal frame), "tangential_width",
            "atom_weight" and "atom" (discrete branch, may be None).
        """
        pass

    def describe(self) -> dict:
        """
        Method for describing the wall model.
        :return: Wall descriptor.
        """
        return {"kind": self.kind, "theta": asdict(self.temperature)}

    """
    Shared wall Maxwellian methods
    """

    def wall_maxwellian(self, x: Any, v: Any) -> np.ndarray:
        """
        Method for evaluating M(x, v) = e^{-|v|²/(2θ(x))} / (θ(x) (2πθ(x))^{(d-1)/2}).
        :param x: Boundary position(s).
        :param v: Velocity (velocities).
        :return: Density value(s).
        """
        x_batch, x_single = as_batch(x)
        v_batch, v_single = as_batch(v)
        x_batch, v_batch = np.broadcast_arrays(x_batch, v_batch)
        single = x_single and v_single
        theta = self.temperature.value(x_batch)
        dimension = v_batch.shape[1]
        value = np.exp(-np.einsum("ij,ij->i", v_batch, v_batch) / (2.0 * theta)) / (
            theta * (2.0 * np.pi * theta) ** ((dimension - 1) / 2.0))
        return unbatch(value, single)

    def diffuse_sample(self, x: Any, rng: np.random.Generator) -> np.ndarray:
        """
        Method for drawing from the flux-weighted wall Maxwellian.
        Normal speed √(2θE) with E ~ Exp(1), tangential part N(0, θ) in the tangent plane.
        :param x: Boundary position(s).
        :param rng: Random generator.
        :return: Outgoing velocity (velocities).
        """
        x_batch, single = as_batch(x)
        normal = self.geometry.outward_normal(x_batch, check=False)
        theta = self.temperature.value(x_batch)
        speed = np.sqrt(2.0 * theta * rng.exponential(1.0, size=x_batch.shape[0]))
        tangential = np.sqrt(theta)[:, None] * tangential_gaussian(normal, rng)
        return unbatch(-speed[:, None] * normal + tangential, single)

    def _maxwellian_frame(self, x: np.ndarray, weight: float = 1.0) -> dict:
        """
        Internal method for the quadrature frame of the (scaled) wall Maxwellian.
        :param x: Boundary position.
        :param weight: Scaling of the density.
        :return: Frame dictionary.
        """
        theta = float(self.temperature.value(x[None, :])[0])
        return {
            "density": lambda v: weight * self.wall_maxwellian(np.broadcast_to(x, v.shape), v),
            "normal_center": 0.0,
            "normal_width": np.sqrt(theta),
            "tangential_center": np.zeros(x.size - 1),
            "tangential_width": np.sqrt(theta),
            "atom_weight": 0.0,
            "atom": None
        }


class CercignaniLampisWall(WallModel):
    """
    Cercignani-Lampis reflection with normal accommodation r⊥ ∈ (0, 1] and tangential accommodation r∥ ∈ (0, 2).
    """
    kind = "cl"

    def __init__(self, geometry: DomainGeometry, temperature: BoundaryField, r_perp: float, r_par: float) -> None:
        """
        Initiation method.
        :param geometry: Domain geometry.
        :param temperature: Wall temperature field θ.
        :param r_perp: Normal accommodation coefficient.
        :param r_par: Tangential accommodation coefficient.
        """
        super().__init__(geometry, temperature)
        if not 0.0 < r_perp <= 1.0:
            raise WallParameterException("r_perp", r_perp, "normal accommodation must lie in (0, 1]")
        if not 0.0 < r_par < 2.0:
            raise WallParameterException("r_par", r_par, "tangential accommodation must lie in (0, 2)")
        self.r_perp = float(r_perp)
        self.r_par = float(r_par)

    def describe(self) -> dict:
        description = super().describe()
        description.update({"r_perp": self.r_perp, "r_par": self.r_par})
        return description

    def cl_density(self, u: Any, v: Any, x: Any) -> np.ndarray:
        """
        Method for evaluating the kernel R(u → v; x), computed in log space.
        States outside Σ₊ × Σ₋ evaluate to zero.
        :param u: Incoming velocity (velocities) in Σ₊.
        :param v: Outgoing velocity (velocities) in Σ₋.
        :param x: Boundary position(s).
        :return: Kernel value(s).
        """
        u_batch, u_single = as_batch(u)
        v_batch, v_single = as_batch(v)
        x_batch, x_single = as_batch(x)
        single = u_single and v_single and x_single
        u_batch, v_batch, x_batch = np.broadcast_arrays(u_batch, v_batch, x_batch)
        dimension = v_batch.shape[1]
        normal = self.geometry.outward_normal(x_batch, check=False)
        theta = self.temperature.value(x_batch)
        u_normal, u_tangential = split_velocity(u_batch, normal)
        v_normal, v_tangential = split_velocity(v_batch, normal)

        normal_variance = theta * self.r_perp
        tangential_variance = theta * self.r_par * (2.0 - self.r_par)
        drift = v_tangential - (1.0 - self.r_par) * u_tangential
        bessel_argument = np.sqrt(1.0 - self.r_perp) * np.abs(u_normal * v_normal) / normal_variance
        log_value = (-np.log(normal_variance)
                     - 0.5 * (dimension - 1) * np.log(2.0 * np.pi * tangential_variance)
                     - v_normal ** 2 / (2.0 * normal_variance)
                     - (1.0 - self.r_perp) * u_normal ** 2 / (2.0 * normal_variance)
                     + log_bessel_i0(bessel_argument)
                     - np.einsum("ij,ij->i", drift, drift) / (2.0 * tangential_variance))
        admissible = (u_normal > 0.0) & (v_normal < 0.0)
        return unbatch(np.where(admissible, np.exp(log_value), 0.0), single)

    def cl_sample(self, u: Any, x: Any, rng: np.random.Generator) -> np.ndarray:
        """
        Method for drawing outgoing velocities.
        Normal speed is Rice distributed as √(Y₁² + Y₂²) with Y₁ ~ N(√(1-r⊥)|u⊥|, θr⊥), Y₂ ~ N(0, θr⊥),
        the tangential part is N((1-r∥)u∥, θr∥(2-r∥)) in the tangent plane.
        :param u: Incoming velocity (velocities), u·n_x > 0.
        :param x: Boundary position(s).
        :param rng: Random generator.
        :return: Outgoing velocity (velocities) with v·n_x < 0.
        """
        u_batch, u_single = as_batch(u)
        x_batch, x_single = as_batch(x)
        single = u_single and x_single
        u_batch, x_batch = np.broadcast_arrays(u_batch, x_batch)
        count = u_batch.shape[0]
        normal = self.geometry.outward_normal(x_batch, check=False)
        theta = self.temperature.value(x_batch)
        u_normal, u_tangential = split_velocity(u_batch, normal)

        normal_width = np.sqrt(theta * self.r_perp)
        first = rng.normal(np.sqrt(1.0 - self.r_perp) * np.abs(u_normal), normal_width, size=count)
        second = rng.normal(0.0, normal_width, size=count)
        speed = np.hypot(first, second)
        tangential_width = np.sqrt(theta * self.r_par * (2.0 - self.r_par))
        tangential = (1.0 - self.r_par) * u_tangential + tangential_width[:, None] * tangential_gaussian(normal, rng)
        return unbatch(-speed[:, None] * normal + tangential, single)

    def reflect(self, u: np.ndarray, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return self.cl_sample(u, x, rng)

    def flux_frame(self, u: np.ndarray, x: np.ndarray) -> dict:
        normal = self.geometry.outward_normal(x, check=False)
        theta = float(self.temperature.value(x[None, :])[0])
        basis = tangent_basis(normal)
        u_normal = float(np.dot(u, normal))
        return {
            "density": lambda v: self.cl_density(np.broadcast_to(u, v.shape), v, np.broadcast_to(x, v.shape)),
            "normal_center": np.sqrt(1.0 - self.r_perp) * abs(u_normal),
            "normal_width": np.sqrt(theta * self.r_perp),
            "tangential_center": (1.0 - self.r_par) * basis @ u,
            "tangential_width": np.sqrt(theta * self.r_par * (2.0 - self.r_par)),
            "atom_weight": 0.0,
            "atom": None
        }


class MaxwellWall(WallModel):
    """
    Maxwell reflection: diffuse with probability β(x), specular otherwise.
    The specular branch is a discrete mixture component, never a density.
    """
    kind = "maxwell"

    def __init__(self, geometry: DomainGeometry, temperature: BoundaryField, beta: BoundaryField,
                 beta_0: Optional[float] = None, allow_degenerate: bool = False) -> None:
        """
        Initiation method.
        :param geometry: Domain geometry.
        :param temperature: Wall temperature field θ.
        :param beta: Accommodation field β.
        :param beta_0: Lower bound β₀ of β. Defaults to the infimum of β.
        :param allow_degenerate: Flag for test stubs with β below any positive bound (e.g. purely specular walls).
        """
        super().__init__(geometry, temperature)
        self.beta = beta
        self.beta_0 = beta.infimum() if beta_0 is None else float(beta_0)
        if beta.supremum() > 1.0:
            raise WallParameterException("beta", beta.supremum(), "accommodation must not exceed 1")
        if not allow_degenerate:
            if not 0.0 < self.beta_0 <= 1.0:
                raise WallParameterException("beta_0", self.beta_0, "lower accommodation bound must lie in (0, 1]")
            if beta.infimum() < self.beta_0 - 1e-15:
                raise WallParameterException("beta", beta.infimum(), "accommodation falls below beta_0")
        elif beta.infimum() < 0.0:
            raise WallParameterException("beta", beta.infimum(), "accommodation must be nonnegative")

    def describe(self) -> dict:
        description = super().describe()
        description.update({"beta": asdict(self.beta), "beta_0": self.beta_0})
        return description

    def maxwell_sample(self, u: Any, x: Any, rng: np.random.Generator) -> np.ndarray:
        """
        Method for drawing outgoing velocities from the Maxwell mixture.
        :param u: Incoming velocity (velocities).
        :param x: Boundary position(s).
        :param rng: Random generator.
        :return: Outgoing velocity (velocities).
        """
        u_batch, u_single = as_batch(u)
        x_batch, x_single = as_batch(x)
        single = u_single and x_single
        u_batch, x_batch = np.broadcast_arrays(u_batch, x_batch)
        diffuse = rng.random(u_batch.shape[0]) < self.beta.value(x_batch)
        outgoing = self.geometry.specular(x_batch, u_batch)
        if np.any(diffuse):
            outgoing[diffuse] = self.diffuse_sample(x_batch[diffuse], rng)
        return unbatch(outgoing, single)

    def reflect(self, u: np.ndarray, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return self.maxwell_sample(u, x, rng)

    def flux_frame(self, u: np.ndarray, x: np.ndarray) -> dict:
        beta = float(self.beta.value(x[None, :])[0])
        frame = self._maxwellian_frame(x, beta)
        frame["atom_weight"] = 1.0 - beta
        frame["atom"] = self.geometry.specular(x, u)
        return frame


class BounceBackWall(WallModel):
    """
    Bounce-back test stub, v = -u.
    """
    kind = "bounce_back"

    def reflect(self, u: np.ndarray, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return -np.asarray(u, dtype=float)

    def flux_frame(self, u: np.ndarray, x: np.ndarray) -> dict:
        frame = self._maxwellian_frame(x, 0.0)
        frame["atom_weight"] = 1.0
        frame["atom"] = -np.asarray(u, dtype=float)
        return frame


class AbsorbingWall(WallModel):
    """
    Absorbing boundary, particles reaching the wall leave the system.
    """
    kind = "absorbing"
    absorbing = True

    def __init__(self, geometry: DomainGeometry) -> None:
        """
        Initiation method.
        :param geometry: Domain geometry.
        """
        super().__init__(geometry, BoundaryField())

    def reflect(self, u: np.ndarray, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return np.asarray(u, dtype=float)

    def flux_frame(self, u: np.ndarray, x: np.ndarray) -> dict:
        return self._maxwellian_frame(x, 0.0)


def tangent_basis(normal: np.ndarray) -> np.ndarray:
    """
    Function for building an orthonormal basis of the tangent plane.
    :param normal: Unit normal of shape (d,).
    :return: Basis of shape (d-1, d).
    """
    if normal.size == 2:
        return np.array([[-normal[1], normal[0]]])
    helper = np.eye(3)[int(np.argmin(np.abs(normal)))]
    first = helper - np.dot(helper, normal) * normal
    first /= np.linalg.norm(first)
    second = np.cross(normal, first)
    return np.stack([first, second])


def build_wall(geometry: DomainGeometry, kind: str, temperature: BoundaryField, r_perp: float = 1.0,
               r_par: float = 1.0, beta: BoundaryField = None, beta_0: Optional[float] = None) -> WallModel:
    """
    Function for building a wall model from config values.
    :param geometry: Domain geometry.
    :param kind: Wall kind, "cl" or "maxwell".
    :param temperature: Wall temperature field.
    :param r_perp: Normal accommodation (CL).
    :param r_par: Tangential accommodation (CL).
    :param beta: Accommodation field (Maxwell).
    :param beta_0: Lower accommodation bound (Maxwell).
    :return: Wall model.
    """
    if kind == "cl":
        return CercignaniLampisWall(geometry, temperature, r_perp, r_par)
    elif kind == "maxwell":
        return MaxwellWall(geometry, temperature, BoundaryField() if beta is None else beta, beta_0)
    raise WallParameterException("kind", kind, "unknown wall kind")
