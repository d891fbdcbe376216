# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass
import numpy as np


@dataclass(frozen=True)
class SuperellipseLevelSet(object):
    """
    Level set |x/R|^p + |y/R|^p - 1 of a planar superellipse.
    The unit preset with p = 4 is the quartic x⁴ + y⁴ = 1.
    Module level dataclass so that geometries stay picklable for worker processes.
    """
    exponent: float = 4.0
    radius: float = 1.0

    def value(self, x: np.ndarray) -> np.ndarray:
        """
        Method for evaluating the level set function.
        :param x: Positions of shape (n, 2).
        :return: Level set values of shape (n,).
        """
        scaled = np.abs(x) / self.radius
        return np.sum(scaled ** self.exponent, axis=-1) - 1.0

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """
        Method for evaluating the level set gradient.
        :param x: Positions of shape (n, 2).
        :return: Gradients of shape (n, 2).
        """
        scaled = np.abs(x) / self.radius
        return self.exponent / self.radius * np.sign(x) * scaled ** (self.exponent - 1.0)

    def radial_boundary(self, angle: np.ndarray) -> np.ndarray:
        """
        Method for computing the boundary radius along a ray from the origin.
        :param angle: Polar angles.
        :return: Distances from the origin to the boundary.
        """
        cos_part = np.abs(np.cos(angle)) ** self.exponent
        sin_part = np.abs(np.sin(angle)) ** self.exponent
        return self.radius * (cos_part + sin_part) ** (-1.0 / self.exponent)


LEVEL_SET_PRESETS = {
    "superellipse": SuperellipseLevelSet
}


def get_level_set(preset: str, exponent: float = 4.0, radius: float = 1.0) -> SuperellipseLevelSet:
    """
    Function for instantiating a level set preset.
    :param preset: Preset name.
    :param exponent: Superellipse exponent.
    :param radius: Scaling radius.
    :return: Level set instance.
    """
    return LEVEL_SET_PRESETS[preset](exponent=float(exponent), radius=float(radius))
