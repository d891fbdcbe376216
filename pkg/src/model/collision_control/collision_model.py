# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from abc import ABC, abstractmethod
from typing import Any, Optional, Tuple
import numpy as np
from scipy import integrate, stats
from scipy.special import gammaln
from src.configuration import configuration as cfg
from src.model.exceptions import CollisionModelException
from src.model.geometry_control.domain_geometry import DomainGeometry, as_batch, unbatch
from src.model.collision_control.rate_field import RateField, TabulatedRate
from src.model.collision_control.relaxation_table import RelaxationTable


def unit_ball_volume(dimension: int) -> float:
    """
    Function for computing the volume |B| of the unit ball.
    :param dimension: Dimension.
    :return: Volume.
    """
    return float(np.exp(0.5 * dimension * np.log(np.pi) - gammaln(0.5 * dimension + 1.0)))


def uniform_directions(count: int, dimension: int, rng: np.random.Generator) -> np.ndarray:
    """
    Function for drawing uniformly distributed unit vectors.
    :param count: Number of vectors.
    :param dimension: Dimension.
    :param rng: Random generator.
    :return: Unit vectors of shape (count, dimension).
    """
    draws = rng.standard_normal((count, dimension))
    return draws / np.linalg.norm(draws, axis=1)[:, None]


class PostCollisionLaw(ABC):
    """
    Normalized post-collision velocity law k(x, v, ·)/σ(x), independent of the pre-collision velocity.
    """
    kind: str = "abstract"

    def __init__(self, dimension: int) -> None:
        self.dimension = dimension

    @abstractmethod
    def sample(self, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """
        Method for drawing post-collision velocities.
        :param x: Collision positions of shape (n, d).
        :param rng: Random generator.
        :return: Velocities of shape (n, d).
        """
        pass

    @abstractmethod
    def moment(self, power: float) -> float:
        """
        Method for computing sup over space of ∫ law(v') |v'|^power dv' by quadrature.
        :param power: Moment power.
        :return: Moment.
        """
        pass

    @abstractmethod
    def normalization(self) -> float:
        """
        Method for computing ∫ law(v') dv' by quadrature.
        :return: Total mass of the law.
        """
        pass

    @abstractmethod
    def density_supremum(self) -> float:
        """
        Method for computing the supremum of the law density.
        :return: Supremum.
        """
        pass

    def describe(self) -> dict:
        return {"kind": self.kind}


class MaxwellianLaw(PostCollisionLaw):
    """
    BGK law, the unit Maxwellian M₁.
    """
    kind = "bgk"

    def sample(self, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal((x.shape[0], self.dimension))

    def _radial(self, power: float) -> float:
        distribution = stats.chi(self.dimension)
        value, _ = integrate.quad(lambda r: r ** power * distribution.pdf(r), 0.0, np.inf, limit=200)
        return value

    def moment(self, power: float) -> float:
        return self._radial(power)

    def normalization(self) -> float:
        return self._radial(0.0)

    def density_supremum(self) -> float:
        return (2.0 * np.pi) ** (-self.dimension / 2.0)


class AnnulusLaw(PostCollisionLaw):
    """
    Linear Boltzmann preset, uniform law on the annulus a <= |v'| <= b.
    """
    kind = "linear_boltzmann"

    def __init__(self, dimension: int, inner: float, outer: float) -> None:
        super().__init__(dimension)
        if not 0.0 <= inner < outer:
            raise CollisionModelException(self.kind, "annulus needs 0 <= a < b")
        self.inner = float(inner)
        self.outer = float(outer)

    def sample(self, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        count = x.shape[0]
        directions = uniform_directions(count, self.dimension, rng)
        inner_power = self.inner ** self.dimension
        radii = (inner_power + rng.random(count) * (self.outer ** self.dimension - inner_power)) ** (1.0 / self.dimension)
        return directions * radii[:, None]

    def _radial_density(self, r: float) -> float:
        return self.dimension * r ** (self.dimension - 1) / (self.outer ** self.dimension - self.inner ** self.dimension)

    def moment(self, power: float) -> float:
        value, _ = integrate.quad(lambda r: r ** power * self._radial_density(r), self.inner, self.outer)
        return value

    def normalization(self) -> float:
        return self.moment(0.0)

    def density_supremum(self) -> float:
        return 1.0 / (unit_ball_volume(self.dimension) * (self.outer ** self.dimension - self.inner ** self.dimension))

    def describe(self) -> dict:
        return {"kind": self.kind, "a": self.inner, "b": self.outer}


class RelaxationLaw(PostCollisionLaw):
    """
    Relaxation preset: categorical draw over the tabulated per-cell velocity lattice with uniform jitter.
    """
    kind = "relaxation"

    def __init__(self, table: RelaxationTable) -> None:
        super().__init__(table.nodes.shape[1])
        self.table = table
        masses = table.masses()
        with np.errstate(divide="ignore", invalid="ignore"):
            probabilities = np.where(masses[:, None] > 0.0, table.values * table.cell_volume / masses[:, None], 0.0)
        self._cumulative = np.cumsum(probabilities, axis=1)

    def sample(self, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        count = x.shape[0]
        cells = self.table.grid.locate(x)
        uniforms = rng.random(count)
        jitter = rng.uniform(-0.5, 0.5, size=(count, self.dimension)) * self.table.spacing
        result = np.empty((count, self.dimension))
        for cell in np.unique(cells):
            members = np.flatnonzero(cells == cell)
            cumulative = self._cumulative[cell]
            indices = np.searchsorted(cumulative, uniforms[members] * cumulative[-1], side="right")
            indices = np.minimum(indices, cumulative.size - 1)
            result[members] = self.table.nodes[indices]
        return result + jitter

    def _cell_moments(self, power: float) -> np.ndarray:
        masses = self.table.masses()
        weights = np.linalg.norm(self.table.nodes, axis=1) ** power
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(masses > 0.0, (self.table.values @ weights) * self.table.cell_volume / masses, 0.0)

    def moment(self, power: float) -> float:
        return float(np.max(self._cell_moments(power)))

    def normalization(self) -> float:
        masses = self.table.masses()
        return float(np.min(self._cell_moments(0.0)[masses > 0.0])) if np.any(masses > 0.0) else 1.0

    def density_supremum(self) -> float:
        masses = self.table.masses()
        with np.errstate(divide="ignore", invalid="ignore"):
            return float(np.max(np.where(masses[:, None] > 0.0, self.table.values / masses[:, None], 0.0)))

    def describe(self) -> dict:
        return {"kind": self.kind, "cells": self.table.grid.cell_count, "nodes": int(self.table.nodes.shape[0]),
                "spacing": self.table.spacing}


class CollisionModel(object):
    """
    Collision kernel k(x, v, v') = σ(x)·law(v') with certified moment bound.
    """

    def __init__(self, rate: RateField, law: PostCollisionLaw, geometry: DomainGeometry, delta_k: float = 0.25,
                 killing: bool = False, spatial_samples: int = 4096) -> None:
        """
        Initiation method.
        :param rate: Rate field σ.
        :param law: Post-collision law.
        :param geometry: Domain geometry, used for the spatial sample of the moment bound.
        :param delta_k: Moment exponent δ_k ∈ (0, 1/2).
        :param killing: Flag, declaring whether collisions remove particles instead of resampling velocities.
        :param spatial_samples: Size of the spatial sample for the moment bound.
        """
        if not 0.0 < delta_k < 0.5:
            raise CollisionModelException(law.kind, "delta_k must lie in (0, 1/2)")
        self._logger = cfg.LOGGER
        self.rate = rate
        self.law = law
        self.geometry = geometry
        self.delta_k = float(delta_k)
        self.killing = killing
        sample = geometry.sample_uniform(spatial_samples, np.random.default_rng(0))
        self._sigma_supremum = float(np.max(rate.sigma(sample))) if spatial_samples else rate.sigma_infinity
        if self._sigma_supremum > rate.sigma_infinity * (1.0 + 1e-12):
            raise CollisionModelException(law.kind, "rate field exceeds its bound")
        # recorded only, nothing downstream consumes it
        self.k_infinity = rate.sigma_infinity * law.density_supremum()
        self.moment_bound = self.moment_bound_check()

    @property
    def sigma_infinity(self) -> float:
        return self.rate.sigma_infinity

    def sigma(self, x: Any) -> Any:
        """
        Method for evaluating the rate σ(x).
        :param x: Position or batch of positions.
        :return: Rate(s).
        """
        return self.rate.sigma(x)

    def moment_bound_check(self) -> float:
        """
        Method for certifying M_{δ_k} = sup_x ∫ k(x, v, v') |v'|^{2δ_k} dv'.
        :return: Certified bound.
        """
        if self.rate.sigma_infinity == 0.0:
            return 0.0
        moment = self.law.moment(2.0 * self.delta_k)
        if not np.isfinite(moment):
            raise CollisionModelException(self.law.kind, "post-collision law has a divergent moment tail")
        if isinstance(self.law, RelaxationLaw):
            masses = self.law.table.masses()
            bound = float(np.max(masses * self.law._cell_moments(2.0 * self.delta_k)))
        else:
            bound = self._sigma_supremum * moment
        self._logger.debug(f"Certified moment bound {bound:.6g} for {self.law.kind}")
        return bound

    def law_normalization(self) -> float:
        """
        Method for computing ∫ law(v') dv', equal to one for mass neutral collisions.
        :return: Law mass.
        """
        return self.law.normalization()

    def next_collision(self, x: np.ndarray, v: np.ndarray, horizon: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """
        Method for sampling collision times by thinning, see RateField.next_collision.
        """
        return self.rate.next_collision(x, v, horizon, rng)

    def next_collision_single(self, x: Any, v: Any, horizon: float,
                              rng: np.random.Generator) -> Optional[Tuple[float, np.ndarray]]:
        return self.rate.next_collision_single(x, v, horizon, rng)

    def gain_sample(self, x: Any, v: Any, rng: np.random.Generator) -> np.ndarray:
        """
        Method for drawing post-collision velocities from k(x, v, ·)/σ(x).
        :param x: Collision position(s).
        :param v: Pre-collision velocity (velocities), unused by the presets.
        :param rng: Random generator.
        :return: Post-collision velocity (velocities).
        """
        batch, single = as_batch(x)
        if np.any(self.rate.sigma(batch) <= 0.0):
            raise CollisionModelException(self.law.kind, "collision requested where the rate vanishes")
        return unbatch(self.law.sample(batch, rng), single)

    def describe(self) -> dict:
        return {"rate": self.rate.describe(), "law": self.law.describe(), "delta_k": self.delta_k,
                "moment_bound": self.moment_bound, "k_infinity": self.k_infinity, "killing": self.killing}


def build_collision_model(kind: str, rate: RateField, geometry: DomainGeometry, delta_k: float = 0.25,
                          annulus: Tuple[float, float] = (1.0, 2.0),
                          table: RelaxationTable = None, killing: bool = False) -> CollisionModel:
    """
    Function for building a collision model preset.
    :param kind: Preset, one of "bgk", "linear_boltzmann", "relaxation".
    :param rate: Rate field (ignored by the relaxation preset, whose rate is the table mass).
    :param geometry: Domain geometry.
    :param delta_k: Moment exponent.
    :param annulus: Inner and outer annulus radii for the linear Boltzmann preset.
    :param table: Relaxation table for the relaxation preset.
    :param killing: Killing flag.
    :return: Collision model.
    """
    if kind == "bgk":
        return CollisionModel(rate, MaxwellianLaw(geometry.dimension), geometry, delta_k, killing)
    elif kind == "linear_boltzmann":
        return CollisionModel(rate, AnnulusLaw(geometry.dimension, *annulus), geometry, delta_k, killing)
    elif kind == "relaxation":
        if table is None:
            raise CollisionModelException(kind, "relaxation preset needs a table")
        return CollisionModel(TabulatedRate(table.grid, table.masses()), RelaxationLaw(table), geometry,
                              delta_k, killing)
    raise CollisionModelException(kind, "unknown collision preset")
