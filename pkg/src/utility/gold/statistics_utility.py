# -*- coding: utf-8 -*-
"""
****************************************************
*                     Utility                      *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from typing import Callable, Tuple
import numpy as np
from scipy import stats


def mean_and_error(samples: np.ndarray) -> Tuple[float, float]:
    """
    Function for computing the sample mean and its standard error.
    :param samples: Samples.
    :return: Mean and standard error.
    """
    samples = np.asarray(samples, dtype=float)
    return float(np.mean(samples)), float(np.std(samples, ddof=1) / np.sqrt(samples.size))


def within_errors(estimate: float, target: float, error: float, sigmas: float = 4.0) -> bool:
    """
    Function for checking whether an estimate lies within a number of standard errors of a target.
    :param estimate: Estimate.
    :param target: Target value.
    :param error: Standard error of the estimate.
    :param sigmas: Number of standard errors.
    :return: True, if the estimate is compatible with the target.
    """
    return abs(estimate - target) <= sigmas * error


def maxwellian_speed_cdf(dimension: int, theta: float = 1.0) -> Callable:
    """
    Function for retrieving the speed distribution function of a centered Maxwellian with temperature θ.
    :param dimension: Dimension.
    :param theta: Temperature.
    :return: Distribution function.
    """
    return stats.chi(dimension, scale=np.sqrt(theta)).cdf


def ks_distance(samples: np.ndarray, cdf: Callable) -> float:
    """
    Function for computing the Kolmogorov distance between samples and a distribution function.
    :param samples: Samples.
    :param cdf: Distribution function.
    :return: Kolmogorov distance.
    """
    return float(stats.kstest(np.asarray(samples, dtype=float), cdf).statistic)


def merge_sparse_cells(expected: np.ndarray, observed: np.ndarray,
                       minimum: float = 5.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Function for pooling cells with small expected counts into one cell.
    :param expected: Expected counts.
    :param observed: Observed counts.
    :param minimum: Minimum expected count per kept cell.
    :return: Pooled expected and observed counts.
    """
    expected = np.ravel(expected)
    observed = np.ravel(observed)
    dense = expected >= minimum
    pooled_expected = np.append(expected[dense], expected[~dense].sum())
    pooled_observed = np.append(observed[dense], observed[~dense].sum())
    if pooled_expected[-1] <= 0.0:
        pooled_expected, pooled_observed = pooled_expected[:-1], pooled_observed[:-1]
    return pooled_expected, pooled_observed


def chi_square_pvalue(observed: np.ndarray, probabilities: np.ndarray) -> float:
    """
    Function for the χ² goodness of fit p-value of histogram counts against cell probabilities.
    Probabilities are renormalized to the observed total.
    :param observed: Observed counts.
    :param probabilities: Cell probabilities.
    :return: p-value.
    """
    observed = np.ravel(observed).astype(float)
    probabilities = np.ravel(probabilities).astype(float)
    expected = probabilities / probabilities.sum() * observed.sum()
    expected, observed = merge_sparse_cells(expected, observed)
    return float(stats.chisquare(observed, expected * observed.sum() / expected.sum()).pvalue)


def two_sample_chi_square_pvalue(first: np.ndarray, second: np.ndarray) -> float:
    """
    Function for the χ² homogeneity p-value of two histograms on the same cells.
    Cells empty in both histograms are dropped.
    :param first: First histogram counts.
    :param second: Second histogram counts.
    :return: p-value.
    """
    table = np.stack([np.ravel(first), np.ravel(second)]).astype(float)
    table = table[:, table.sum(axis=0) > 0.0]
    return float(stats.chi2_contingency(table, correction=False)[1])


def binomial_l1_floor(first: np.ndarray, second: np.ndarray, first_population: float,
                      second_population: float) -> float:
    """
    Function for the expected L¹ distance between two histogram estimates of the same law.
    Uses the pooled cell probabilities and the normal approximation E|Z| = √(2/π)·sd.
    :param first: First histogram counts.
    :param second: Second histogram counts.
    :param first_population: Sample size behind the first histogram.
    :param second_population: Sample size behind the second histogram.
    :return: Statistical floor.
    """
    pooled = (np.ravel(first) + np.ravel(second)) / (first_population + second_population)
    variance = pooled * np.clip(1.0 - pooled, 0.0, None) * (1.0 / first_population + 1.0 / second_population)
    return float(np.sqrt(2.0 / np.pi) * np.sum(np.sqrt(variance)))
