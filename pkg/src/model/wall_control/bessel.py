# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from typing import Any, Tuple
import numpy as np


SERIES_LIMIT = 15.0
SERIES_TERMS = 80
ASYMPTOTIC_TERMS = 40


def _log_series(y: np.ndarray) -> np.ndarray:
    """
    Power series Σ (y²/4)^k / (k!)² in log form.
    :param y: Arguments with |y| <= SERIES_LIMIT.
    :return: log I₀(y).
    """
    quarter_square = 0.25 * y * y
    term = np.ones_like(y)
    total = np.ones_like(y)
    for k in range(1, SERIES_TERMS + 1):
        term = term * quarter_square / (k * k)
        total = total + term
    return np.log(total)


def _log_asymptotic(y: np.ndarray) -> np.ndarray:
    """
    Exponentially scaled asymptotic expansion, summed up to its smallest term.
    :param y: Arguments with |y| > SERIES_LIMIT.
    :return: log I₀(y).
    """
    term = np.ones_like(y)
    total = np.ones_like(y)
    decreasing = np.ones_like(y, dtype=bool)
    for k in range(1, ASYMPTOTIC_TERMS + 1):
        following = term * (2.0 * k - 1.0) ** 2 / (8.0 * k * y)
        decreasing &= following < term
        total = np.where(decreasing, total + following, total)
        term = np.where(decreasing, following, term)
    return y - 0.5 * np.log(2.0 * np.pi * y) + np.log(total)


def log_bessel_i0(y: Any) -> np.ndarray:
    """
    Function for evaluating log I₀(y), I₀ being even in y.
    :param y: Argument(s).
    :return: log I₀ of the argument(s).
    """
    magnitude = np.abs(np.asarray(y, dtype=float))
    flat = np.atleast_1d(magnitude)
    result = np.empty_like(flat)
    small = flat <= SERIES_LIMIT
    result[small] = _log_series(flat[small])
    result[~small] = _log_asymptotic(flat[~small])
    return result.reshape(magnitude.shape)


def bessel_i0(y: Any) -> Tuple[np.ndarray, np.ndarray]:
    """
    Function for evaluating I₀(y) = (1/π) ∫₀^π exp(y cos φ) dφ.
    The value overflows to infinity for large arguments, the logarithm does not.
    :param y: Argument(s).
    :return: Tuple of value(s) and log value(s).
    """
    log_value = log_bessel_i0(y)
    with np.errstate(over="ignore"):
        value = np.exp(log_value)
    return value, log_value
