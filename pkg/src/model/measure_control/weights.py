# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass
from typing import Any, Union
import numpy as np
from src.configuration import configuration as cfg
from src.model.exceptions import ConfigurationException
from src.model.geometry_control.domain_geometry import DomainGeometry, as_batch, unbatch
from src.model.measure_control.empirical_field import EmpiricalField


E_SQUARED = float(np.e ** 2)


@dataclass(frozen=True)
class WeightSpec(object):
    """
    Parameters of the Lyapunov weight m_α.
    """
    alpha: float
    delta: float
    c4: float
    diameter: float

    def __post_init__(self) -> None:
        violations = []
        if self.alpha < 0.0:
            violations.append("alpha must be nonnegative")
        if not self.delta > 0.0:
            violations.append("delta must be positive")
        if not 0.0 < self.c4 < 1.0:
            violations.append("c4 must lie in (0, 1)")
        if not self.diameter > 0.0:
            violations.append("diameter must be positive")
        if violations:
            raise ConfigurationException(violations)

    def with_alpha(self, alpha: float) -> "WeightSpec":
        return WeightSpec(alpha, self.delta, self.c4, self.diameter)


def c4_from_beta_0(beta_0: float) -> float:
    """
    Function for solving (1 - c₄)⁴ = 1 - β₀, with c₄ = 1/2 for β₀ = 1.
    :param beta_0: Lower accommodation bound.
    :return: c₄.
    """
    if beta_0 >= 1.0:
        return 0.5
    return float(1.0 - (1.0 - beta_0) ** 0.25)


def resolve_c4(wall_kind: str, beta_0: float = 1.0) -> float:
    """
    Function for resolving the default c₄ of a wall model.
    :param wall_kind: "cl" or "maxwell".
    :param beta_0: Lower accommodation bound of Maxwell walls.
    :return: c₄.
    """
    return c4_from_beta_0(beta_0) if wall_kind == "maxwell" else 0.5


def default_delta(delta_k: float, dimension: int) -> float:
    """
    Function for the default weight exponent δ < δ_k/d.
    :param delta_k: Collision moment exponent.
    :param dimension: Dimension.
    :return: δ.
    """
    return 0.1 if 0.1 < delta_k / dimension else 0.8 * delta_k / dimension


def weight_base(geometry: DomainGeometry, x: Any, v: Any, spec: WeightSpec) -> Union[np.ndarray, float]:
    """
    Function for the base e² + d(Ω)/(|v|c₄) - τ(x, -v) + |v|^{2δ} of m_α.
    Velocities below the speed floor map to +inf.
    :param geometry: Domain geometry.
    :param x: Position(s).
    :param v: Velocity (velocities).
    :param spec: Weight parameters.
    :return: Base value(s).
    """
    x_batch, x_single = as_batch(x)
    v_batch, v_single = as_batch(v)
    x_batch, v_batch = np.broadcast_arrays(x_batch, v_batch)
    speed = np.linalg.norm(v_batch, axis=1)
    slow = speed < cfg.SPEED_FLOOR
    safe_speed = np.where(slow, 1.0, speed)
    backward = np.where(slow, 0.0, geometry.exit_time(x_batch, np.where(slow[:, None], 1.0, -v_batch)))
    base = E_SQUARED + spec.diameter / (safe_speed * spec.c4) - backward + safe_speed ** (2.0 * spec.delta)
    return unbatch(np.where(slow, np.inf, base), x_single and v_single)


def weight_m_alpha(geometry: DomainGeometry, x: Any, v: Any, spec: WeightSpec) -> Union[np.ndarray, float]:
    """
    Function for the Lyapunov weight m_α(x, v).
    :param geometry: Domain geometry.
    :param x: Position(s).
    :param v: Velocity (velocities).
    :param spec: Weight parameters.
    :return: Weight value(s), +inf below the speed floor.
    """
    base = weight_base(geometry, x, v, spec)
    return base ** spec.alpha


def bracket_weight(geometry: DomainGeometry, x: Any, v: Any, spec: WeightSpec) -> Union[np.ndarray, float]:
    """
    Function for ⟨x, v⟩ = 1 + τ(x, v) + |v|^{2δ}.
    :param geometry: Domain geometry.
    :param x: Position(s).
    :param v: Velocity (velocities).
    :param spec: Weight parameters.
    :return: Bracket value(s).
    """
    x_batch, x_single = as_batch(x)
    v_batch, v_single = as_batch(v)
    x_batch, v_batch = np.broadcast_arrays(x_batch, v_batch)
    speed = np.linalg.norm(v_batch, axis=1)
    value = 1.0 + geometry.exit_time(x_batch, v_batch) + speed ** (2.0 * spec.delta)
    return unbatch(value, x_single and v_single)


def slow_deposits(field: EmpiricalField) -> int:
    """
    Function for counting deposits below the speed floor, the dedicated tally of infinite weights.
    :param field: Field with deposits.
    :return: Number of slow deposits.
    """
    return int(np.sum(np.linalg.norm(field.velocities, axis=1) < cfg.SPEED_FLOOR)) if field.has_deposits() else 0


def weighted_norm(field: EmpiricalField, geometry: DomainGeometry, spec: WeightSpec) -> float:
    """
    Function for the Monte Carlo estimate of ∥f∥_{m_α}, the sum of m_α over exact deposits divided by the population.
    Fields without kept deposits fall back to cell centers; overflow cells then cannot be weighted and are skipped.
    :param field: Field.
    :param geometry: Domain geometry.
    :param spec: Weight parameters.
    :return: Weighted norm.
    """
    if field.population <= 0:
        return 0.0
    if spec.alpha == 0.0:
        return field.mass
    if field.has_deposits():
        if field.velocities.shape[0] == 0:
            return 0.0
        weights = np.atleast_1d(weight_m_alpha(geometry, field.positions, field.velocities, spec))
        finite = np.isfinite(weights)
        if not np.all(finite):
            cfg.LOGGER.warning(f"{int(np.sum(~finite))} deposits below the speed floor excluded from weighted norm")
        return float(np.sum(weights[finite]) / field.population)
    cfg.LOGGER.warning("Field holds no exact deposits, weighting cell centers")
    spatial_index, velocity_index = np.nonzero(field.counts[:, :-1])
    weights = np.atleast_1d(weight_m_alpha(geometry, field.spatial.centers[spatial_index],
                                           field.velocity.centers[velocity_index], spec))
    masses = field.counts[spatial_index, velocity_index] / field.population
    finite = np.isfinite(weights)
    return float(np.sum(weights[finite] * masses[finite]))


def mu_norm(field: EmpiricalField, geometry: DomainGeometry, spec: WeightSpec, mu: float) -> float:
    """
    Function for the combined norm ∥f∥_{L¹} + µ∥f∥_{m_α}.
    :param field: Field.
    :param geometry: Domain geometry.
    :param spec: Weight parameters.
    :param mu: Combination factor µ.
    :return: Combined norm.
    """
    return field.mass + mu * weighted_norm(field, geometry, spec)
