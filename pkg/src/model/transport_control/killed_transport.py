# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from typing import Any, Callable, Tuple
import numpy as np
from src.configuration import configuration as cfg
from src.model.exceptions import ExperimentException
from src.model.geometry_control.domain_geometry import DomainGeometry
from src.model.collision_control.rate_field import RateField
from src.model.collision_control.collision_model import unit_ball_volume
from src.model.transport_control.initial_law import InitialLaw, sample_ball
from src.utility.silver.quadrature_utility import QuadratureResult, ball_quadrature
from src.utility.gold.statistics_utility import mean_and_error


def killed_transport_exact(law: InitialLaw, geometry: DomainGeometry, rate: RateField, t: float, x: Any,
                           v: Any) -> np.ndarray:
    """
    Function for the characteristic solution of the killed problem with absorbing walls
    Φ(t, x, v) = 1{τ(x, -v) ≥ t}·exp(-∫₀^t σ(x - (t - s)v) ds)·f(x - tv, v).
    :param law: Initial law with a density.
    :param geometry: Domain geometry.
    :param rate: Rate field.
    :param t: Time.
    :param x: Position(s) of shape (n, d) or (d,).
    :param v: Velocity (velocities) of shape (n, d) or (d,).
    :return: Density values of shape (n,).
    """
    x, v = np.broadcast_arrays(np.atleast_2d(np.asarray(x, dtype=float)), np.atleast_2d(np.asarray(v, dtype=float)))
    inside = np.atleast_1d(geometry.contains(x))
    values = np.zeros(x.shape[0])
    if not np.any(inside):
        return values
    x_in, v_in = x[inside], v[inside]
    origins = x_in - t * v_in
    backward = np.atleast_1d(geometry.exit_time(x_in, -v_in))
    survived = backward >= t
    values[inside] = np.where(
        survived,
        np.exp(-np.atleast_1d(rate.path_integral(origins, v_in, t))) * law.density(origins, v_in),
        0.0
    )
    return values


def _paired_sum(position_nodes: np.ndarray, position_weights: np.ndarray, velocity_nodes: np.ndarray,
                velocity_weights: np.ndarray, integrand: Callable, chunk: int = 64) -> float:
    """
    Internal function for summing an integrand over the tensor product of two node sets, chunked over positions.
    :param integrand: Callable of (positions (n, d), velocities (n, d)) returning values of shape (n,).
    :return: Weighted sum.
    """
    total = 0.0
    for start in range(0, position_nodes.shape[0], chunk):
        positions = position_nodes[start:start + chunk]
        weights = position_weights[start:start + chunk]
        y = np.repeat(positions, velocity_nodes.shape[0], axis=0)
        w = np.tile(velocity_nodes, (positions.shape[0], 1))
        values = integrand(y, w).reshape(positions.shape[0], velocity_nodes.shape[0])
        total += float(weights @ values @ velocity_weights)
    return total


def _refined(evaluate: Callable[[int, int], float], radial_order: int, angular_points: int) -> QuadratureResult:
    """
    Internal function for evaluating a rule and estimating its error against the rule of half the order.
    """
    value = evaluate(radial_order, angular_points)
    coarse = evaluate(max(radial_order // 2, 2), max(angular_points // 2, 4))
    cfg.LOGGER.debug(f"Ball quadrature {value:.10g} against coarse {coarse:.10g}")
    return QuadratureResult(value=value, error=abs(value - coarse), panels=radial_order)


def _check_ball_law(law: InitialLaw) -> None:
    if law.spatial != "ball" or law.velocity != "ball":
        raise ExperimentException("killed_transport", "quadrature needs a ball x ball initial law")


def survival_mass_quadrature(law: InitialLaw, geometry: DomainGeometry, rate: RateField, t: float,
                             radial_order: int = 16, angular_points: int = 32) -> QuadratureResult:
    """
    Function for the surviving mass ∫Φ(t, x, v) dx dv of the killed problem.
    After the substitution y = x - tv the integral runs over the initial support:
    ∫∫ f(y, v)·1{τ(y, v) ≥ t}·exp(-∫₀^t σ(y + sv) ds) dy dv.
    :param law: Ball x ball initial law, e.g. the concentrated law f_ε.
    :param geometry: Domain geometry.
    :param rate: Rate field.
    :param t: Time.
    :param radial_order: Radial Gauss-Legendre order.
    :param angular_points: Azimuth nodes.
    :return: Quadrature value with error estimate from halving the order.
    """
    _check_ball_law(law)
    dimension = geometry.dimension

    def integrand(y: np.ndarray, w: np.ndarray) -> np.ndarray:
        exits = np.atleast_1d(geometry.exit_time(y, w))
        return np.where(exits >= t, np.exp(-np.atleast_1d(rate.path_integral(y, w, t))) * law.density(y, w), 0.0)

    def evaluate(order: int, points: int) -> float:
        position_nodes, position_weights = ball_quadrature(dimension, law.spatial_radius, order, points)
        velocity_nodes, velocity_weights = ball_quadrature(dimension, law.velocity_radius, order, points)
        return _paired_sum(position_nodes + law.spatial_center, position_weights,
                           velocity_nodes + law.velocity_center, velocity_weights, integrand)

    return _refined(evaluate, radial_order, angular_points)


def _lower_bound_integrand(rate: RateField, t: float, correction: float) -> Callable:
    def integrand(y: np.ndarray, w: np.ndarray) -> np.ndarray:
        return np.maximum(np.exp(-np.atleast_1d(rate.path_integral(y, w, t))) - correction, 0.0)
    return integrand


def concentration_correction(epsilon: float, h0: float, dimension: int) -> float:
    """
    Function for the correction ε^{2d}|B|²H₀ of the concentrated law against the steady state bound H₀.
    """
    return epsilon ** (2 * dimension) * unit_ball_volume(dimension) ** 2 * h0


def lower_bound_quadrature(epsilon: float, geometry: DomainGeometry, rate: RateField, t: float, h0: float,
                           r_in: float, radial_order: int = 16, angular_points: int = 32) -> QuadratureResult:
    """
    Function for the mass of the positive part of S_t f_ε - f_∞ seen through the killed problem inside
    B(0, R_in): E[1{t|V| ≤ R_in - ε}·(exp(-∫₀^t σ(Y + sV) ds) - ε^{2d}|B|²H₀)⁺] over Y, V uniform on εB.
    :param epsilon: Concentration ε < R_in.
    :param geometry: Domain geometry.
    :param rate: Rate field.
    :param t: Time t > 0.
    :param h0: Steady state density bound H₀.
    :param r_in: Inner radius R_in = d(∂Ω, 0)/2.
    :param radial_order: Radial Gauss-Legendre order.
    :param angular_points: Azimuth nodes.
    :return: Quadrature value with error estimate.
    """
    if not 0.0 < epsilon < r_in:
        raise ExperimentException("counterexample", "ε must lie in (0, R_in)")
    dimension = geometry.dimension
    speed_limit = min(epsilon, (r_in - epsilon) / t) if t > 0 else epsilon
    volume = unit_ball_volume(dimension) * epsilon ** dimension
    integrand = _lower_bound_integrand(rate, t, concentration_correction(epsilon, h0, dimension))

    def evaluate(order: int, points: int) -> float:
        position_nodes, position_weights = ball_quadrature(dimension, epsilon, order, points)
        velocity_nodes, velocity_weights = ball_quadrature(dimension, speed_limit, order, points)
        return _paired_sum(position_nodes, position_weights, velocity_nodes, velocity_weights,
                           integrand) / volume ** 2

    return _refined(evaluate, radial_order, angular_points)


def lower_bound_monte_carlo(epsilon: float, geometry: DomainGeometry, rate: RateField, t: float, h0: float,
                            r_in: float, count: int, rng: np.random.Generator) -> Tuple[float, float]:
    """
    Function for the sampling estimate of the quantity computed by lower_bound_quadrature.
    :param count: Sample count.
    :param rng: Random generator.
    :return: Mean and standard error.
    """
    dimension = geometry.dimension
    origin = np.zeros(dimension)
    integrand = _lower_bound_integrand(rate, t, concentration_correction(epsilon, h0, dimension))
    values = np.empty(count)
    for start in range(0, count, cfg.DEFAULT_BLOCK_SIZE * 16):
        length = min(cfg.DEFAULT_BLOCK_SIZE * 16, count - start)
        y = sample_ball(length, dimension, origin, epsilon, rng)
        w = sample_ball(length, dimension, origin, epsilon, rng)
        admitted = t * np.linalg.norm(w, axis=1) <= r_in - epsilon
        values[start:start + length] = np.where(admitted, integrand(y, w), 0.0)
    return mean_and_error(values)


def step_two_lower_bound(epsilon: float, t: float, sigma_infinity: float, h0: float, r_in: float,
                         dimension: int) -> float:
    """
    Function for the explicit bound [exp(-σ_∞(t - 1/ε + 1)⁺) - ε^{2d}|B|²H₀]⁺·min(1, (R_in - ε)/(εt))^d.
    """
    survival = np.exp(-sigma_infinity * max(t - 1.0 / epsilon + 1.0, 0.0))
    speed_fraction = min(1.0, (r_in - epsilon) / (epsilon * t)) if t > 0 else 1.0
    return float(max(survival - concentration_correction(epsilon, h0, dimension), 0.0)
                 * speed_fraction ** dimension)
