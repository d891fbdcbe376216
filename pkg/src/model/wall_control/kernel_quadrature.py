# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from itertools import product
from typing import Callable, List, Optional
import numpy as np
from src.configuration import configuration as cfg
from src.model.geometry_control.domain_geometry import DomainGeometry
from src.model.wall_control.boundary_field import BoundaryField
from src.model.wall_control.wall_model import CercignaniLampisWall, WallModel, tangent_basis
from src.utility.silver.quadrature_utility import QuadratureResult, cell_gauss_legendre, composite_gauss_legendre


TRUNCATION_WIDTHS = 12.0


def _continuous_flux_integral(wall: WallModel, frame: dict, x: np.ndarray, observable: Optional[Callable],
                              panels: int, order: int, widths: float) -> float:
    """
    Internal function for the product quadrature of the continuous part on a fixed rule.
    :param wall: Wall model.
    :param frame: Flux frame of the wall model.
    :param x: Boundary position.
    :param observable: Optional observable g(v) on velocity batches.
    :param panels: Panels per axis.
    :param order: Gauss-Legendre order per panel.
    :param widths: Truncation in units of the thermal widths.
    :return: Integral value.
    """
    normal = wall.geometry.outward_normal(x, check=False)
    basis = tangent_basis(normal)
    normal_lower = max(0.0, frame["normal_center"] - widths * frame["normal_width"])
    normal_upper = frame["normal_center"] + widths * frame["normal_width"]
    speeds, speed_weights = composite_gauss_legendre(normal_lower, normal_upper, panels, order)
    tangential_axes = []
    for center in np.atleast_1d(frame["tangential_center"]):
        tangential_axes.append(composite_gauss_legendre(center - widths * frame["tangential_width"],
                                                        center + widths * frame["tangential_width"],
                                                        panels, order))
    if len(tangential_axes) == 1:
        coordinates = tangential_axes[0][0][:, None]
        weights = tangential_axes[0][1]
    else:
        first, second = tangential_axes
        coordinates = np.stack(np.meshgrid(first[0], second[0], indexing="ij"), axis=-1).reshape(-1, 2)
        weights = np.outer(first[1], second[1]).ravel()
    tangential = coordinates @ basis

    total = 0.0
    for speed, speed_weight in zip(speeds, speed_weights):
        velocities = -speed * normal[None, :] + tangential
        values = frame["density"](velocities) * speed
        if observable is not None:
            values = values * observable(velocities)
        total += speed_weight * float(np.dot(weights, values))
    return total


def flux_integral(wall: WallModel, u: np.ndarray, x: np.ndarray, observable: Optional[Callable] = None,
                  widths: float = TRUNCATION_WIDTHS, tolerance: float = 1e-11, order: int = 16,
                  start_panels: int = 2, max_panels: int = 32, diffuse_only: bool = False) -> QuadratureResult:
    """
    Function for integrating ∫ g(v) R(u → v; x) |v·n_x| dv over the outgoing half space.
    Normal speed times tangential product quadrature, truncated at the given number of thermal widths around
    the kernel's center, panels doubled until the value is stable.
    :param wall: Wall model.
    :param u: Incoming velocity.
    :param x: Boundary position.
    :param observable: Optional observable g on velocity batches. Defaults to g ≡ 1.
    :param widths: Truncation in thermal widths.
    :param tolerance: Relative stability tolerance between refinements.
    :param order: Gauss-Legendre order per panel.
    :param start_panels: Initial panels per axis.
    :param max_panels: Maximum panels per axis.
    :param diffuse_only: Flag, declaring whether to skip discrete (specular) branches.
    :return: Quadrature result.
    """
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    frame = wall.flux_frame(u, x)
    panels = start_panels
    previous = _continuous_flux_integral(wall, frame, x, observable, panels, order, widths)
    error = np.inf
    while panels < max_panels:
        panels *= 2
        current = _continuous_flux_integral(wall, frame, x, observable, panels, order, widths)
        error = abs(current - previous)
        previous = current
        if error <= tolerance * max(1.0, abs(current)):
            break
    cfg.LOGGER.debug(f"Flux quadrature converged with {panels} panels, error estimate {error:.3e}")
    value = previous
    if not diffuse_only and frame["atom"] is not None and frame["atom_weight"] > 0.0:
        atom_value = 1.0 if observable is None else float(np.atleast_1d(observable(frame["atom"][None, :]))[0])
        value += frame["atom_weight"] * atom_value
    return QuadratureResult(value=float(value), error=float(error), panels=panels)


def kernel_normalization_check(wall: WallModel, u: np.ndarray, x: np.ndarray, diffuse_only: bool = False,
                               widths: float = TRUNCATION_WIDTHS) -> QuadratureResult:
    """
    Function for computing the flux normalization ∫ R(u → v; x) |v·n_x| dv, to be compared against 1.
    :param wall: Wall model.
    :param u: Incoming velocity in Σ₊.
    :param x: Boundary position.
    :param diffuse_only: Flag, declaring whether to report the continuous part only (β(x) for Maxwell walls).
    :param widths: Truncation in thermal widths.
    :return: Quadrature result.
    """
    return flux_integral(wall, u, x, diffuse_only=diffuse_only, widths=widths)


def flux_cell_masses(wall: WallModel, u: np.ndarray, x: np.ndarray, normal_edges: np.ndarray,
                     tangential_edges: np.ndarray, order: int = 8) -> np.ndarray:
    """
    Function for computing flux law masses on a normal speed × tangential component grid (d = 2).
    :param wall: Wall model.
    :param u: Incoming velocity.
    :param x: Boundary position.
    :param normal_edges: Edges of the normal speed bins.
    :param tangential_edges: Edges of the tangential component bins.
    :param order: Gauss-Legendre order per cell and axis.
    :return: Cell masses of shape (len(normal_edges) - 1, len(tangential_edges) - 1).
    """
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    frame = wall.flux_frame(u, x)
    normal = wall.geometry.outward_normal(x, check=False)
    basis = tangent_basis(normal)
    speeds, speed_weights = cell_gauss_legendre(normal_edges, order)
    tangents, tangent_weights = cell_gauss_legendre(tangential_edges, order)
    flat_speeds = speeds.ravel()
    flat_tangents = tangents.ravel()
    velocities = (-flat_speeds[:, None, None] * normal[None, None, :]
                  + flat_tangents[None, :, None] * basis[0][None, None, :]).reshape(-1, 2)
    values = (frame["density"](velocities).reshape(flat_speeds.size, flat_tangents.size)
              * flat_speeds[:, None])
    values = values.reshape(speeds.shape[0], order, tangents.shape[0], order)
    return np.einsum("iajb,ia,jb->ij", values, speed_weights, tangent_weights)


def normalization_grid(geometry: DomainGeometry, thetas: List[float] = (0.25, 1.0, 4.0),
                       r_perps: List[float] = (0.1, 0.5, 1.0), r_pars: List[float] = (0.2, 1.0, 1.8),
                       speeds: List[float] = (0.1, 1.0, 10.0), incidence: float = np.pi / 4.0) -> List[dict]:
    """
    Function for computing normalization residuals of the CL kernel over a parameter grid.
    :param geometry: Domain geometry.
    :param thetas: Wall temperatures.
    :param r_perps: Normal accommodation coefficients.
    :param r_pars: Tangential accommodation coefficients.
    :param speeds: Incoming speeds.
    :param incidence: Angle between incoming velocity and outward normal.
    :return: Rows with parameters, integral, residual and error estimate.
    """
    direction = np.zeros(geometry.dimension)
    direction[0] = 1.0
    x = geometry.footpoint(np.zeros(geometry.dimension), direction)
    normal = geometry.outward_normal(x)
    tangent = tangent_basis(normal)[0]
    rows = []
    for theta, r_perp, r_par, speed in product(thetas, r_perps, r_pars, speeds):
        wall = CercignaniLampisWall(geometry, BoundaryField("constant", theta), r_perp, r_par)
        u = speed * (np.cos(incidence) * normal + np.sin(incidence) * tangent)
        result = kernel_normalization_check(wall, u, x)
        rows.append({"theta": theta, "r_perp": r_perp, "r_par": r_par, "speed": speed,
                     "integral": result.value, "residual": result.value - 1.0, "error_estimate": result.error})
    return rows
