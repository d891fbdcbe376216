# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass, field, asdict
from typing import List
import numpy as np
from src.configuration import configuration as cfg
from src.model.exceptions import ExperimentException
from src.model.geometry_control.domain_geometry import DomainGeometry
from src.model.measure_control.empirical_field import EmpiricalField


@dataclass
class DuhamelReport(object):
    """
    Cellwise comparison of a snapshot with the free transport of an earlier snapshot.
    """
    lag: float
    damping: float
    cells_checked: int
    violations: List[int] = field(default_factory=list)
    worst_deficit: float = 0.0
    transported_mass: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        data = asdict(self)
        data["passed"] = self.passed
        return data


def transport_deposits(field_: EmpiricalField, lag: float, geometry: DomainGeometry) -> EmpiricalField:
    """
    Function for moving the deposits of a field along straight lines for a time lag.
    Deposits leaving the domain within the lag are dropped.
    :param field_: Field with deposits.
    :param lag: Time lag s ≥ 0.
    :param geometry: Domain geometry.
    :return: Transported field with the population of the input.
    """
    if not field_.has_deposits():
        raise ExperimentException("duhamel_check", "the earlier snapshot keeps no deposits")
    positions, velocities = field_.positions, field_.velocities
    if positions.shape[0]:
        staying = np.atleast_1d(geometry.exit_time(positions, velocities)) >= lag
        positions = positions[staying] + lag * velocities[staying]
        velocities = velocities[staying]
    return EmpiricalField.from_samples(field_.spatial, field_.velocity, positions, velocities,
                                       population=field_.population, keep_deposits=False)


def duhamel_lower_bound_check(later: EmpiricalField, earlier: EmpiricalField, lag: float,
                              geometry: DomainGeometry, sigma_infinity: float,
                              margin_sigmas: float = 4.0) -> DuhamelReport:
    """
    Function for checking S_t f ≥ exp(-σ_∞ s)·(free transport over s of S_{t-s} f restricted to rays staying in Ω)
    on every cell of the histogram grid, up to a binomial error margin.
    :param later: Snapshot at t.
    :param earlier: Snapshot at t - s, with deposits.
    :param lag: Time lag s.
    :param geometry: Domain geometry.
    :param sigma_infinity: Rate bound σ_∞.
    :param margin_sigmas: Margin in standard errors.
    :return: Report listing violating cells (flattened cell ids, overflow column included).
    """
    if lag < 0.0:
        raise ExperimentException("duhamel_check", "the lag must be nonnegative")
    later.check_grid(earlier)
    damping = float(np.exp(-sigma_infinity * lag))
    transported = transport_deposits(earlier, lag, geometry)
    later_masses = later.cell_masses().ravel()
    transported_masses = transported.cell_masses().ravel()
    bound = damping * transported_masses
    margin = margin_sigmas * np.sqrt(later_masses / max(later.population, 1.0)
                                     + damping ** 2 * transported_masses / max(earlier.population, 1.0))
    deficit = bound - margin - later_masses
    checked = (later_masses > 0.0) | (transported_masses > 0.0)
    violations = np.flatnonzero(checked & (deficit > 0.0))
    if violations.size:
        cfg.LOGGER.warning(f"Duhamel lower bound violated in {violations.size} cells at lag {lag}")
    return DuhamelReport(lag=float(lag), damping=damping, cells_checked=int(checked.sum()),
                         violations=[int(cell) for cell in violations],
                         worst_deficit=float(np.max(deficit[checked])) if np.any(checked) else 0.0,
                         transported_mass=float(transported_masses.sum()))
