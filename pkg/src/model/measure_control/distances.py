# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass
import numpy as np
from src.model.geometry_control.domain_geometry import DomainGeometry
from src.model.measure_control.empirical_field import EmpiricalField
from src.model.measure_control.weights import WeightSpec, weight_m_alpha
from src.utility.gold.statistics_utility import binomial_l1_floor, ks_distance, maxwellian_speed_cdf


@dataclass
class DistanceEstimate(object):
    """
    Distance between empirical fields with its statistical floor.
    """
    value: float
    floor: float

    def above_floor(self, factor: float = 1.0) -> bool:
        return self.value > factor * self.floor


def l1_distance(a: EmpiricalField, b: EmpiricalField) -> DistanceEstimate:
    """
    Function for the binned L¹ distance Σ |a_mass - b_mass| over all cells, overflow cells included.
    :param a: First field.
    :param b: Second field.
    :return: Distance and binomial floor.
    """
    a.check_grid(b)
    value = float(np.sum(np.abs(a.cell_masses() - b.cell_masses())))
    floor = binomial_l1_floor(a.counts, b.counts, max(a.population, 1.0), max(b.population, 1.0))
    return DistanceEstimate(value, floor)


def cell_mean_weights(field: EmpiricalField, geometry: DomainGeometry, spec: WeightSpec) -> np.ndarray:
    """
    Function for the mean of m_α per occupied cell, taken over the field's deposits.
    Unoccupied cells get the weight at their center, overflow cells without deposits get zero.
    :param field: Field with deposits.
    :param geometry: Domain geometry.
    :param spec: Weight parameters.
    :return: Cell weights of shape (spatial cells, velocity cells + 1).
    """
    shape = field.counts.shape
    weights = np.zeros(shape)
    centers = weight_m_alpha(geometry, np.repeat(field.spatial.centers, field.velocity.cell_count, axis=0),
                             np.tile(field.velocity.centers, (field.spatial.cell_count, 1)), spec)
    weights[:, :-1] = np.nan_to_num(np.atleast_1d(centers).reshape(shape[0], shape[1] - 1), posinf=0.0)
    if field.has_deposits() and field.positions.shape[0]:
        values = np.atleast_1d(weight_m_alpha(geometry, field.positions, field.velocities, spec))
        values = np.where(np.isfinite(values), values, 0.0)
        spatial_index, velocity_index = field.cell_of(field.positions, field.velocities)
        flat = spatial_index * shape[1] + velocity_index
        sums = np.bincount(flat, weights=values, minlength=shape[0] * shape[1]).reshape(shape)
        numbers = np.bincount(flat, minlength=shape[0] * shape[1]).reshape(shape)
        weights = np.where(numbers > 0, sums / np.maximum(numbers, 1), weights)
    return weights


def weighted_distance(a: EmpiricalField, b: EmpiricalField, geometry: DomainGeometry,
                      spec: WeightSpec) -> float:
    """
    Function for the binned weighted distance Σ |a_mass - b_mass|·m̄_α, with m̄_α the cell mean weight over the
    deposits of both fields.
    :param a: First field.
    :param b: Second field.
    :param geometry: Domain geometry.
    :param spec: Weight parameters.
    :return: Weighted distance.
    """
    a.check_grid(b)
    weights = cell_mean_weights(a.merge(b), geometry, spec)
    return float(np.sum(np.abs(a.cell_masses() - b.cell_masses()) * weights))


def speed_ks_distance(field: EmpiricalField, theta: float = 1.0) -> float:
    """
    Function for the Kolmogorov distance between the deposit speeds and the Maxwellian speed law.
    :param field: Field with deposits.
    :param theta: Maxwellian temperature.
    :return: Kolmogorov distance.
    """
    speeds = np.linalg.norm(field.velocities, axis=1)
    return ks_distance(speeds, maxwellian_speed_cdf(field.spatial.dimension, theta))
