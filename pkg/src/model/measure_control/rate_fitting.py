# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass, asdict
from typing import List, Optional, Tuple
import numpy as np
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score
from src.model.exceptions import RateFitException


FIT_MODES = ["exponential", "polynomial"]
MINIMUM_POINTS = 4


@dataclass
class RateFit(object):
    """
    Least squares decay fit.
    Exponential mode: d(t) = amplitude·e^{-rate·t}. Polynomial mode: d(t) = amplitude·(1 + t)^{-rate}.
    """
    mode: str
    amplitude: float
    rate: float
    r_squared: float
    points: int
    residual: float

    def predict(self, times: np.ndarray) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        if self.mode == "exponential":
            return self.amplitude * np.exp(-self.rate * times)
        return self.amplitude * (1.0 + times) ** (-self.rate)

    def to_dict(self) -> dict:
        return asdict(self)


def usable_points(times: np.ndarray, distances: np.ndarray, window: Optional[Tuple[float, float]] = None,
                  floors: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Function for masking the points entering a fit.
    :param times: Times.
    :param distances: Distances.
    :param window: Optional closed time window.
    :param floors: Optional statistical floors, points at or below them are excluded.
    :return: Boolean mask.
    """
    mask = np.isfinite(distances) & (distances > 0.0)
    if window is not None:
        mask &= (times >= window[0]) & (times <= window[1])
    if floors is not None:
        mask &= distances > np.asarray(floors, dtype=float)
    return mask


def fit_rate(times: List[float], distances: List[float], mode: str = "exponential",
             window: Optional[Tuple[float, float]] = None, floors: Optional[List[float]] = None) -> RateFit:
    """
    Function for extracting a decay rate by least squares on log distance against t or log(1 + t).
    :param times: Snapshot times.
    :param distances: Distances to the steady state.
    :param mode: "exponential" or "polynomial".
    :param window: Optional tail window.
    :param floors: Optional statistical floors.
    :return: Fit.
    """
    if mode not in FIT_MODES:
        raise RateFitException(mode, 0, f"unknown fit mode, choose from {FIT_MODES}")
    times = np.asarray(times, dtype=float)
    distances = np.asarray(distances, dtype=float)
    mask = usable_points(times, distances, window, floors)
    if int(mask.sum()) < MINIMUM_POINTS:
        raise RateFitException(mode, int(mask.sum()))
    features = (times[mask] if mode == "exponential" else np.log1p(times[mask]))[:, None]
    targets = np.log(distances[mask])
    model = LinearRegression().fit(features, targets)
    predictions = model.predict(features)
    return RateFit(mode=mode, amplitude=float(np.exp(model.intercept_)), rate=float(-model.coef_[0]),
                   r_squared=float(r2_score(targets, predictions)), points=int(mask.sum()),
                   residual=float(np.sqrt(np.mean((targets - predictions) ** 2))))
