# -*- coding: utf-8 -*-
"""
****************************************************
*                     Utility                      *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple
import numpy as np


@lru_cache(maxsize=32)
def gauss_legendre_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Function for retrieving Gauss-Legendre nodes and weights on [-1, 1].
    :param order: Number of nodes.
    :return: Nodes and weights.
    """
    return np.polynomial.legendre.leggauss(order)


def composite_gauss_legendre(lower: float, upper: float, panels: int, order: int = 16) -> Tuple[np.ndarray, np.ndarray]:
    """
    Function for building a composite Gauss-Legendre rule on [lower, upper].
    :param lower: Lower bound.
    :param upper: Upper bound.
    :param panels: Number of equal panels.
    :param order: Nodes per panel.
    :return: Nodes and weights, each of shape (panels * order,).
    """
    nodes, weights = gauss_legendre_rule(order)
    edges = np.linspace(lower, upper, panels + 1)
    half_widths = 0.5 * np.diff(edges)
    middles = 0.5 * (edges[:-1] + edges[1:])
    all_nodes = (middles[:, None] + half_widths[:, None] * nodes[None, :]).ravel()
    all_weights = (half_widths[:, None] * weights[None, :]).ravel()
    return all_nodes, all_weights


def cell_gauss_legendre(edges: np.ndarray, order: int = 8) -> Tuple[np.ndarray, np.ndarray]:
    """
    Function for building per-cell Gauss-Legendre rules on consecutive intervals.
    :param edges: Interval edges of shape (m + 1,).
    :param order: Nodes per cell.
    :return: Nodes and weights of shape (m, order).
    """
    nodes, weights = gauss_legendre_rule(order)
    edges = np.asarray(edges, dtype=float)
    half_widths = 0.5 * np.diff(edges)
    middles = 0.5 * (edges[:-1] + edges[1:])
    return middles[:, None] + half_widths[:, None] * nodes[None, :], half_widths[:, None] * weights[None, :]


def trapezoid_periodic(count: int, period: float = 2.0 * np.pi) -> Tuple[np.ndarray, np.ndarray]:
    """
    Function for building the periodic trapezoid rule, spectrally accurate for smooth periodic integrands.
    :param count: Number of nodes.
    :param period: Period length.
    :return: Nodes and weights.
    """
    nodes = np.arange(count) * period / count
    return nodes, np.full(count, period / count)


@dataclass
class QuadratureResult(object):
    """
    Quadrature value with error estimate.
    """
    value: float
    error: float
    panels: int


def ball_quadrature(dimension: int, radius: float, radial_order: int = 16,
                    angular_points: int = 32) -> Tuple[np.ndarray, np.ndarray]:
    """
    Function for building a tensor rule on the centered ball B(0, radius).
    Gauss-Legendre in the radius, periodic trapezoid in the azimuth and Gauss-Legendre in the cosine of the
    polar angle for d = 3.
    :param dimension: Dimension, 2 or 3.
    :param radius: Ball radius.
    :param radial_order: Radial nodes.
    :param angular_points: Azimuth nodes (half of it as polar nodes for d = 3).
    :return: Nodes of shape (m, d) and weights of shape (m,) summing to the ball volume.
    """
    radii, radial_weights = composite_gauss_legendre(0.0, radius, 1, radial_order)
    radial_weights = radial_weights * radii ** (dimension - 1)
    azimuths, azimuth_weights = trapezoid_periodic(angular_points)
    if dimension == 2:
        directions = np.stack([np.cos(azimuths), np.sin(azimuths)], axis=1)
        direction_weights = azimuth_weights
    else:
        cosines, cosine_weights = gauss_legendre_rule(max(2, angular_points // 2))
        sines = np.sqrt(1.0 - cosines ** 2)
        directions = np.stack([
            np.outer(sines, np.cos(azimuths)).ravel(),
            np.outer(sines, np.sin(azimuths)).ravel(),
            np.repeat(cosines, azimuths.size)
        ], axis=1)
        direction_weights = np.outer(cosine_weights, azimuth_weights).ravel()
    nodes = (radii[:, None, None] * directions[None, :, :]).reshape(-1, dimension)
    weights = np.outer(radial_weights, direction_weights).ravel()
    return nodes, weights
