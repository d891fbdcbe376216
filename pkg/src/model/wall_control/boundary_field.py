# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass
from typing import Tuple
import numpy as np
from src.model.exceptions import WallParameterException


@dataclass(frozen=True)
class BoundaryField(object):
    """
    Continuous scalar field on the boundary, used for the wall temperature θ and the Maxwell accommodation β.
    Variants: constant (base) and angular (base·(1 + amplitude·cos(mode·φ)), φ azimuth of the boundary point).
    """
    kind: str = "constant"
    base: float = 1.0
    amplitude: float = 0.0
    mode: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ["constant", "angular"]:
            raise WallParameterException("kind", self.kind, "unknown boundary field kind")
        if self.kind == "angular" and not abs(self.amplitude) < 1.0:
            raise WallParameterException("amplitude", self.amplitude, "angular amplitude must lie in (-1, 1)")

    def value(self, x: np.ndarray) -> np.ndarray:
        """
        Method for evaluating the field.
        :param x: Boundary positions of shape (n, d).
        :return: Field values of shape (n,).
        """
        x = np.atleast_2d(x)
        if self.kind == "constant":
            return np.full(x.shape[0], self.base)
        azimuth = np.arctan2(x[:, 1], x[:, 0])
        return self.base * (1.0 + self.amplitude * np.cos(self.mode * azimuth))

    def extremes(self) -> Tuple[float, float]:
        """
        Method for retrieving the infimum and supremum over the boundary.
        :return: Infimum and supremum.
        """
        if self.kind == "constant":
            return self.base, self.base
        if self.mode == 0:
            # cos(0) = 1 everywhere
            value = self.base * (1.0 + self.amplitude)
            return value, value
        low, high = self.base * (1.0 - abs(self.amplitude)), self.base * (1.0 + abs(self.amplitude))
        return min(low, high), max(low, high)

    def infimum(self) -> float:
        return self.extremes()[0]

    def supremum(self) -> float:
        return self.extremes()[1]

    def is_constant(self) -> bool:
        """
        Method for checking whether the field is spatially constant.
        :return: True, if field is constant, else False.
        """
        return self.kind == "constant" or self.amplitude == 0.0 or self.mode == 0
