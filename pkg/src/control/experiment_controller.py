# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Tuple
import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score
from src.configuration import configuration as cfg
from src.configuration.run_config import RunConfig, dump_config
from src.utility.bronze import dictionary_utility
from src.model.exceptions import ExperimentException, RateFitException
from src.model.geometry_control.domain_geometry import DomainGeometry, build_geometry
from src.model.geometry_control.spatial_grid import SpatialGrid, build_spatial_grid
from src.model.wall_control.boundary_field import BoundaryField
from src.model.wall_control.wall_model import WallModel, build_wall
from src.model.wall_control.kernel_quadrature import normalization_grid
from src.model.collision_control.rate_field import build_rate_field
from src.model.collision_control.collision_model import CollisionModel, build_collision_model
from src.model.collision_control.relaxation_table import load_relaxation_table, relaxation_table_from_maxwellian
from src.model.measure_control.empirical_field import EmpiricalField
from src.model.measure_control.velocity_grid import VelocityGrid
from src.model.measure_control.weights import WeightSpec, weight_m_alpha, weighted_norm
from src.model.measure_control.distances import l1_distance, weighted_distance, speed_ks_distance
from src.model.measure_control.rate_fitting import RateFit, fit_rate
from src.model.transport_control.initial_law import InitialLaw, epsilon_law
from src.model.transport_control.particle_engine import EngineSettings
from src.model.transport_control.ensemble_pool import EnsembleResult, EnsembleSetup, simulate_ensemble
from src.model.transport_control.duhamel_check import duhamel_lower_bound_check
from src.model.transport_control.killed_transport import (lower_bound_monte_carlo, lower_bound_quadrature,
                                                          step_two_lower_bound)
from src.utility.silver.random_utility import block_generator
from src.utility.gold.statistics_utility import mean_and_error


@dataclass
class ExperimentOutcome(object):
    """
    Result of an experiment: JSON report, CSV tables and the audit verdict (None if nothing is audited).
    """
    name: str
    report: dict
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    passed: Optional[bool] = None


@dataclass
class SteadyState(object):
    field: EmpiricalField
    report: dict


@dataclass
class RateReport(object):
    """
    Distance curve to the steady state with fits.
    """
    times: List[float]
    distances: List[float]
    floors: List[float]
    initial_weighted_distance: float
    fits: Dict[str, Any]
    r_squared_gap: Optional[float]
    config: dict

    @property
    def decay(self) -> np.ndarray:
        """
        Empirical uniform decay proxy E(t), distances over the initial weighted distance.
        """
        return np.asarray(self.distances) / max(self.initial_weighted_distance, np.finfo(float).tiny)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["decay"] = self.decay.tolist()
        return data

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.times, "distance": self.distances, "floor": self.floors,
                             "decay": self.decay})


@dataclass
class DoeblinReport(object):
    """
    Empirical minorization over the sublevel set D_Λ.
    """
    level: float
    level_minimum: float
    horizons: List[float]
    start_cells: List[List[int]]
    floors: List[float]
    pointwise_floors: List[float]
    coverage: List[float]
    best_horizon: Optional[float]
    best_floor: float
    cell_minima: Dict[str, List[float]] = field(default_factory=dict)

    @property
    def observed(self) -> bool:
        return self.best_floor > 0.0

    def to_dict(self) -> dict:
        data = asdict(self)
        data["observed"] = self.observed
        data.pop("cell_minima")
        return data


def _slope(x: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    """
    Internal function for an ordinary least squares line.
    :return: Slope, intercept and R².
    """
    model = LinearRegression().fit(np.asarray(x, dtype=float)[:, None], np.asarray(y, dtype=float))
    predictions = model.predict(np.asarray(x, dtype=float)[:, None])
    return float(model.coef_[0]), float(model.intercept_), float(r2_score(y, predictions)) if len(y) > 1 else 1.0


class ExperimentController(object):
    """
    Controller class for assembling the model from a run configuration and running experiments.
    """

    def __init__(self, config: RunConfig, workers: int = None, show_progress: bool = None) -> None:
        """
        Initiation method.
        :param config: Validated run configuration.
        :param workers: Worker count override.
            Defaults to None in which case the configured worker count is used.
        :param show_progress: Progress bar flag.
        """
        self._logger = cfg.LOGGER
        self.config = config
        self.workers = config.simulation.workers if workers is None else int(workers)
        self.show_progress = show_progress
        self.seed = int(config.simulation.master_seed)

        geometry_config = config.geometry
        self.geometry: DomainGeometry = build_geometry(geometry_config.shape, geometry_config.radius,
                                                       geometry_config.level_set, geometry_config.exponent)
        self.dimension = self.geometry.dimension
        self.spatial: SpatialGrid = build_spatial_grid(self.geometry, geometry_config.radial_bins,
                                                       geometry_config.angular_bins, geometry_config.polar_bins)
        self.velocity = VelocityGrid(self.dimension, config.simulation.velocity_bins, config.simulation.v_max)
        self.wall: WallModel = build_wall(self.geometry, config.wall.kind,
                                          BoundaryField(**config.wall.temperature.dict()),
                                          config.wall.r_perp, config.wall.r_par,
                                          BoundaryField(**config.wall.beta.dict()), config.wall.beta_0)
        sigma = config.collision.sigma
        self.rate_field = build_rate_field(sigma.kind, sigma.value, sigma.hole_center, sigma.hole_radius, sigma.width,
                                           self.dimension)
        table = None
        if config.collision.kind == "relaxation":
            table = (load_relaxation_table(config.collision.table_path, self.spatial)
                     if config.collision.table_path else
                     relaxation_table_from_maxwellian(self.spatial, config.collision.table_spacing,
                                                      config.simulation.v_max, sigma.value))
        self.collision: CollisionModel = build_collision_model(
            config.collision.kind, self.rate_field, self.geometry, config.collision.delta_k,
            (config.collision.annulus.inner, config.collision.annulus.outer), table)
        self.spec = WeightSpec(config.weights.alpha, config.weights.delta, config.weights.c4,
                               self.geometry.diameter())
        self.initial_law = self.build_initial_law()
        self._steady: Optional[SteadyState] = None
        self._logger.info(f"Assembled {self.geometry.shape} with {self.wall.kind} walls and "
                          f"{self.collision.law.kind} collisions")

    """
    Assembly
    """

    def build_initial_law(self) -> InitialLaw:
        """
        Method for building the configured initial law.
        :return: Initial law.
        """
        initial = self.config.initial
        if initial.epsilon is not None:
            return epsilon_law(self.geometry, initial.epsilon)
        return InitialLaw(self.geometry, initial.spatial, initial.velocity, initial.spatial_center,
                          initial.spatial_radius, initial.velocity_center, initial.velocity_radius,
                          initial.theta, self.spatial, initial.cell)

    def equilibrium_law(self) -> InitialLaw:
        return InitialLaw(self.geometry, "uniform", "maxwellian", theta=self.config.wall.temperature.base)

    def weight_spec(self, alpha: float) -> WeightSpec:
        return self.spec.with_alpha(alpha)

    def ensemble(self, law: InitialLaw, snapshots: List[float], count: int = None, stream: str = "transport",
                 key: Tuple[int, ...] = (), end_time: float = None, tally_edges: List[float] = None,
                 speed_cap: float = None, keep_deposits: bool = None, spatial: SpatialGrid = None,
                 velocity: VelocityGrid = None, collision: CollisionModel = None, wall: WallModel = None,
                 log_segments: bool = None) -> EnsembleResult:
        """
        Method for running an ensemble under the configured model.
        :param law: Initial law.
        :param snapshots: Snapshot times.
        :param count: Particle count. Defaults to the configured count.
        :param stream: Random stream name.
        :param key: Additional stream key.
        :param end_time: End time. Defaults to the last snapshot.
        :param tally_edges: Boundary tally bin edges.
        :param speed_cap: Boundary tally speed cap.
        :param keep_deposits: Deposit flag. Defaults to the configured flag.
        :param spatial: Spatial grid override.
        :param velocity: Velocity grid override.
        :param collision: Collision model override.
        :param wall: Wall model override.
        :param log_segments: Free flight logging flag. Defaults to the configured flag.
        :return: Ensemble result.
        """
        simulation = self.config.simulation
        settings = EngineSettings(
            snapshot_times=list(snapshots),
            end_time=end_time,
            tally_edges=tally_edges,
            speed_cap=speed_cap,
            log_segments=simulation.log_segments if log_segments is None else log_segments,
            keep_deposits=simulation.keep_deposits if keep_deposits is None else keep_deposits
        )
        setup = EnsembleSetup(self.geometry, self.wall if wall is None else wall,
                              self.collision if collision is None else collision, law, settings,
                              self.spatial if spatial is None else spatial,
                              self.velocity if velocity is None else velocity,
                              self.seed, stream, tuple(key))
        return simulate_ensemble(simulation.particles if count is None else int(count), setup, self.workers,
                                 simulation.block_size, self.show_progress)

    def norm_with_error(self, field_: EmpiricalField, spec: WeightSpec) -> Tuple[float, float]:
        """
        Method for the weighted norm and its standard error.
        :param field_: Field with deposits.
        :param spec: Weight parameters.
        :return: Norm and standard error.
        """
        if not field_.has_deposits() or field_.velocities.shape[0] == 0:
            return weighted_norm(field_, self.geometry, spec), float("nan")
        values = np.atleast_1d(weight_m_alpha(self.geometry, field_.positions, field_.velocities, spec))
        values = values[np.isfinite(values)]
        fraction = values.size / field_.population
        mean, error = mean_and_error(values)
        return float(mean * fraction), float(error * fraction)

    """
    Experiments
    """

    def simulate(self) -> ExperimentOutcome:
        """
        Method for running the configured ensemble and exporting its snapshots.
        :return: Outcome with one table per snapshot.
        """
        simulation = self.config.simulation
        result = self.ensemble(self.initial_law, simulation.snapshots, end_time=simulation.end_time)
        tables, snapshots = {}, []
        for time, snapshot in zip(result.times, result.snapshots):
            tables[f"snapshot_t{time:g}"] = snapshot.to_frame()
            snapshots.append({"t": time, "mass": snapshot.mass, "overflow_mass": snapshot.overflow_mass,
                              "weighted_norm": weighted_norm(snapshot, self.geometry, self.spec)
                              if snapshot.has_deposits() else None})
        duhamel = []
        if simulation.keep_deposits:
            for (earlier_time, earlier), (later_time, later) in zip(
                    zip(result.times[:-1], result.snapshots[:-1]), zip(result.times[1:], result.snapshots[1:])):
                duhamel.append(duhamel_lower_bound_check(later, earlier, later_time - earlier_time, self.geometry,
                                                         self.collision.sigma_infinity).to_dict())
        report = {"particles": result.count, "blocks": result.blocks, "events": result.events,
                  "snapshots": snapshots, "duhamel": duhamel}
        return ExperimentOutcome("simulate", report, tables)

    def steady_state(self) -> SteadyState:
        """
        Method for estimating f_∞ by time averaging independent replicas after relaxation.
        :return: Steady state with report.
        """
        if self._steady is not None:
            return self._steady
        steady = self.config.experiment.steady
        times = np.linspace(steady.relax_time, steady.relax_time + steady.average_time,
                            max(steady.average_snapshots, 1)).tolist()
        law = self.equilibrium_law()
        replicas = []
        for replica in range(max(steady.replicas, 1)):
            result = self.ensemble(law, times, stream="replica", key=(replica,))
            averaged = result.snapshots[0]
            for snapshot in result.snapshots[1:]:
                averaged = averaged.merge(snapshot)
            replicas.append(averaged)
        merged = replicas[0]
        for replica in replicas[1:]:
            merged = merged.merge(replica)

        report = {"times": times, "replicas": len(replicas), "mass": merged.mass,
                  "overflow_mass": merged.overflow_mass, "collision": self.collision.describe()}
        if len(replicas) > 1:
            agreement = l1_distance(replicas[0], replicas[1])
            report.update({"replica_distance": agreement.value, "replica_floor": agreement.floor,
                           "replicas_agree": agreement.value <= 2.0 * agreement.floor,
                           "converged": agreement.value <= 4.0 * agreement.floor})
            if not report["converged"]:
                self._logger.warning("Steady state replicas disagree beyond four statistical floors")
        volume_fractions = self.spatial.volumes / self.spatial.volumes.sum()
        deviation = merged.spatial_masses() / (merged.mass * volume_fractions) - 1.0
        report["spatial_uniformity_deviation"] = float(np.max(np.abs(deviation)))
        if merged.has_deposits():
            report["speed_ks"] = speed_ks_distance(merged, self.config.wall.temperature.base)
            norm, error = self.norm_with_error(merged, self.spec)
            report.update({"weighted_norm": norm, "weighted_norm_error": error})
        densities = merged.densities()
        peak = np.unravel_index(int(np.argmax(densities)), densities.shape)
        report.update({"h0_estimate": float(densities[peak]),
                       "h0_error": float(np.sqrt(merged.counts[peak]) / merged.population
                                         / (self.spatial.volumes[peak[0]] * self.velocity.cell_volume)),
                       # histogram maximum overestimates the supremum
                       "h0_bias": "upward"})
        self._steady = SteadyState(merged, report)
        return self._steady

    def steady(self) -> ExperimentOutcome:
        state = self.steady_state()
        tables = {"steady_state": state.field.to_frame()}
        return ExperimentOutcome("steady", state.report, tables, state.report.get("converged"))

    def convergence_curve(self, law: InitialLaw = None) -> RateReport:
        """
        Method for the distance curve t ↦ ∥S_t f - f_∞∥ with exponential and polynomial fits.
        :param law: Initial law. Defaults to the configured law.
        :return: Rate report.
        """
        rate = self.config.experiment.rate
        steady = self.steady_state().field
        result = self.ensemble(self.initial_law if law is None else law, rate.times, stream="transport")
        estimates = [l1_distance(snapshot, steady) for snapshot in result.snapshots]
        distances = [estimate.value for estimate in estimates]
        floors = [estimate.floor for estimate in estimates]
        initial = weighted_distance(result.snapshots[0], steady, self.geometry, self.spec)
        window = tuple(rate.window) if rate.window else None
        fits = {}
        for mode in rate.modes:
            try:
                fits[mode] = fit_rate(result.times, distances, mode, window,
                                      [rate.floor_factor * floor for floor in floors]).to_dict()
            except RateFitException as error:
                self._logger.warning(f"Rate fit failed: {error}")
                fits[mode] = {"error": str(error)}
        gap = None
        if all("r_squared" in fits.get(mode, {}) for mode in ["exponential", "polynomial"]):
            gap = fits["exponential"]["r_squared"] - fits["polynomial"]["r_squared"]
        return RateReport(list(result.times), distances, floors, initial, fits, gap,
                          self.initial_law.describe() if law is None else law.describe())

    def rate(self) -> ExperimentOutcome:
        """
        Method for the rate experiment with the lower bound diagnostics.
        :return: Outcome.
        """
        report = self.convergence_curve()
        data = report.to_dict()
        times = np.asarray(report.times)
        decay = report.decay
        usable = decay > 0.0
        if int(usable.sum()) >= 2:
            trend = np.log(decay[usable]) + self.collision.sigma_infinity * (1.0 + self.spec.alpha) * times[usable]
            data["exponential_lower_trend_slope"] = _slope(times[usable], trend)[0]
        product = decay * (1.0 + times) ** self.spec.alpha
        window = self.config.experiment.rate.window
        tail = (times >= window[0]) & (times <= window[1]) if window else times > 0.0
        data["polynomial_product_minimum"] = float(np.min(product[tail])) if np.any(tail) else float(np.min(product))
        passed = None
        if "exponential" in report.fits and "rate" in report.fits["exponential"]:
            passed = report.fits["exponential"]["rate"] > 0.0
        return ExperimentOutcome("rate", data, {"rate_curve": report.to_frame()}, passed)

    def lyapunov_law(self, name: str) -> InitialLaw:
        """
        Method for the initial laws of the Lyapunov audit.
        :param name: "equilibrium", "ball" or "fast".
        :return: Initial law.
        """
        lyapunov = self.config.experiment.lyapunov
        if name == "equilibrium":
            return self.equilibrium_law()
        elif name == "ball":
            return InitialLaw(self.geometry, "ball", "ball",
                              spatial_radius=0.5 * self.geometry.distance_to_origin_boundary(), velocity_radius=1.0)
        return InitialLaw(self.geometry, "uniform", "sphere", velocity_radius=lyapunov.fast_speed)

    def lyapunov_audit(self) -> ExperimentOutcome:
        """
        Method for auditing ∥S_T f∥_{m_α} + c∫₀^T ∥S_s f∥_{m'} ds ≤ ∥f∥_{m_α} + K(1+T)∥f∥_{L¹}, with
        c = σ₀ and m' = m_α (exponential form) or c = α and m' = m_{α-1} (subgeometric form).
        :return: Outcome with implied constants per law and horizon.
        """
        lyapunov = self.config.experiment.lyapunov
        spec = self.weight_spec(lyapunov.alpha)
        integrand_spec = spec if lyapunov.form == "exponential" else self.weight_spec(lyapunov.alpha - 1.0)
        factor = self.rate_field.infimum() if lyapunov.form == "exponential" else lyapunov.alpha
        horizons = sorted(lyapunov.horizons)
        grid = np.union1d(np.arange(0.0, horizons[-1] + 0.5 * lyapunov.time_step, lyapunov.time_step),
                          [0.0] + horizons)
        rows, laws, passed = [], {}, True
        for index, name in enumerate(lyapunov.initial_laws):
            result = self.ensemble(self.lyapunov_law(name), grid.tolist(), stream="transport", key=(index,),
                                   keep_deposits=True)
            norms = np.array([weighted_norm(snapshot, self.geometry, spec) for snapshot in result.snapshots])
            integrands = np.array([weighted_norm(snapshot, self.geometry, integrand_spec)
                                   for snapshot in result.snapshots])
            mass = result.snapshots[0].mass
            ratios = []
            for horizon in horizons:
                upto = grid <= horizon + 1e-12
                integral = float(np.trapz(integrands[upto], grid[upto]))
                lhs = float(norms[upto][-1] + factor * integral)
                ratio = (lhs - norms[0]) / ((1.0 + horizon) * mass)
                ratios.append(ratio)
                rows.append({"law": name, "T": horizon, "norm": float(norms[upto][-1]), "integral": integral,
                             "lhs": lhs, "initial_norm": float(norms[0]), "ratio": ratio})
            positive = np.array([ratio for ratio in ratios if ratio > 0.0])
            drift = float(positive.max() / positive.min()) if positive.size > 1 else 1.0
            bounded = drift < 3.0
            passed &= bounded
            laws[name] = {"ratios": ratios, "drift": drift, "bounded": bounded}
        report = {"alpha": lyapunov.alpha, "form": lyapunov.form, "factor": factor, "horizons": horizons,
                  "laws": laws}
        return ExperimentOutcome("lyapunov", report, {"lyapunov": pd.DataFrame(rows)}, passed)

    def flux_audit(self, law: InitialLaw = None, count: int = None) -> ExperimentOutcome:
        """
        Method for auditing the accumulated boundary flux against an affine majorant.
        :param law: Initial law. Defaults to the cold start law if configured, else the configured law.
        :param count: Particle count.
        :return: Outcome.
        """
        flux = self.config.experiment.flux
        if law is None:
            law = (InitialLaw(self.geometry, "uniform", "sphere", velocity_radius=flux.cold_speed)
                   if flux.cold_speed else self.initial_law)
        edges = np.linspace(0.0, flux.horizon, flux.bins + 1)
        result = self.ensemble(law, [0.0, flux.horizon], count=count, stream="transport", tally_edges=edges.tolist(),
                               speed_cap=flux.speed_cap, keep_deposits=False)
        capped = flux.speed_cap is not None and self.wall.kind == "cl"
        accumulated = result.tally.cumulative_flux(capped=capped)
        times = edges[1:]
        slope, intercept, r_squared = _slope(times, accumulated)
        model = LinearRegression().fit(np.stack([times, times ** 2], axis=1), accumulated)
        curvature = float(model.coef_[1])
        superlinear = curvature > 0.0 and curvature * times[-1] ** 2 >= 0.05 * accumulated[-1]
        report = {"horizon": flux.horizon, "speed_cap": flux.speed_cap, "capped": capped, "slope": slope,
                  "intercept": intercept, "r_squared": r_squared, "curvature": curvature,
                  "superlinear": bool(superlinear), "crossings": float(result.tally.crossings.sum()),
                  "population": result.tally.population}
        table = pd.DataFrame({"t": times, "flux": result.tally.cumulative_flux(),
                              "capped_flux": result.tally.cumulative_flux(capped=True)})
        return ExperimentOutcome("flux", report, {"flux_curve": table}, not superlinear)

    def doeblin_probe(self) -> DoeblinReport:
        """
        Method for probing S_T f₀ ≥ ν from start cells in D_Λ = {m₁ ≤ Λ}.
        The floor at T is the overlap mass Σ_cells min over starts of the arrival cell masses.
        :return: Doeblin report.
        """
        doeblin = self.config.experiment.doeblin
        arrival_spatial = build_spatial_grid(self.geometry, doeblin.arrival_radial_bins, doeblin.arrival_angular_bins)
        arrival_velocity = VelocityGrid(self.dimension, doeblin.arrival_velocity_bins, doeblin.arrival_v_max)
        spatial_index = np.repeat(np.arange(arrival_spatial.cell_count), arrival_velocity.cell_count)
        velocity_index = np.tile(np.arange(arrival_velocity.cell_count), arrival_spatial.cell_count)
        weights = np.atleast_1d(weight_m_alpha(self.geometry, arrival_spatial.centers[spatial_index],
                                               arrival_velocity.centers[velocity_index], self.weight_spec(1.0)))
        level_minimum = float(np.min(weights))
        inside = np.flatnonzero(weights <= doeblin.level)
        if inside.size == 0:
            raise ExperimentException("doeblin", f"D_Λ is empty on the grid, Λ must be at least {level_minimum:.4g}")
        inside = inside[np.argsort(weights[inside], kind="stable")]
        chosen = inside[np.unique(np.linspace(0, inside.size - 1, min(doeblin.max_start_cells, inside.size))
                                  .round().astype(int))]
        horizons = sorted(doeblin.horizons)
        masses = []
        starts = []
        for position, cell in enumerate(chosen):
            start_spatial, start_velocity = int(spatial_index[cell]), int(velocity_index[cell])
            starts.append([start_spatial, start_velocity])
            law = InitialLaw(self.geometry, "cell", "box", velocity_center=arrival_velocity.centers[start_velocity],
                             velocity_radius=0.5 * arrival_velocity.width, grid=arrival_spatial, cell=start_spatial)
            result = self.ensemble(law, horizons, count=doeblin.starts_per_cell, stream="probe", key=(position,),
                                   keep_deposits=False, spatial=arrival_spatial, velocity=arrival_velocity)
            masses.append(np.stack([snapshot.cell_masses()[:, :-1] for snapshot in result.snapshots]))
        masses = np.stack(masses)
        minima = masses.min(axis=0)
        floors = minima.reshape(len(horizons), -1).sum(axis=1)
        densities = minima / (arrival_spatial.volumes[None, :, None] * arrival_velocity.cell_volume)
        pointwise = densities.reshape(len(horizons), -1).min(axis=1)
        coverage = (masses.sum(axis=3) > 0.0).mean(axis=2).min(axis=0)
        best = int(np.argmax(floors))
        report = DoeblinReport(level=doeblin.level, level_minimum=level_minimum, horizons=horizons, start_cells=starts,
                               floors=floors.tolist(), pointwise_floors=pointwise.tolist(),
                               coverage=coverage.tolist(), best_horizon=horizons[best] if floors[best] > 0 else None,
                               best_floor=float(floors[best]),
                               cell_minima={f"{horizon:g}": minima[index].sum(axis=1).tolist()
                                            for index, horizon in enumerate(horizons)})
        if not report.observed:
            self._logger.warning("Doeblin floor not observed at this resolution")
        return report

    def doeblin(self) -> ExperimentOutcome:
        report = self.doeblin_probe()
        table = pd.DataFrame({"T": report.horizons, "floor": report.floors, "pointwise_floor": report.pointwise_floors,
                              "coverage": report.coverage})
        return ExperimentOutcome("doeblin", report.to_dict(), {"doeblin_floors": table}, report.observed)

    def counterexample_run(self) -> ExperimentOutcome:
        """
        Method for the concentrated initial data check of the hole configuration: quadrature and sampling of the
        killed lower bound, the explicit bound, simulated E(t) and the implied constants with ε = 1/(t + 1).
        :return: Outcome.
        """
        counter = self.config.experiment.counterexample
        sigma = self.config.collision.sigma
        if sigma.kind != "hole":
            raise ExperimentException("counterexample", "needs the hole rate field")
        r_in = 0.5 * self.geometry.distance_to_origin_boundary()
        hole_extent = sigma.hole_radius + (np.linalg.norm(sigma.hole_center) if sigma.hole_center else 0.0)
        if not r_in > max(1.0, hole_extent):
            raise ExperimentException("counterexample", f"R_in = {r_in:.4g} leaves no room for the hole")
        steady = self.steady_state()
        h0 = counter.h0 if counter.h0 is not None else steady.report["h0_estimate"]
        spec = self.weight_spec(counter.alpha)
        rows = []
        for index, t in enumerate(counter.times):
            epsilon = 1.0 / (t + 1.0)
            quadrature = lower_bound_quadrature(epsilon, self.geometry, self.rate_field, t, h0, r_in,
                                                counter.radial_order, counter.angular_points)
            mc_mean, mc_error = lower_bound_monte_carlo(epsilon, self.geometry, self.rate_field, t, h0, r_in,
                                                        counter.monte_carlo_samples,
                                                        block_generator(self.seed, "quadrature", index))
            bound = step_two_lower_bound(epsilon, t, self.rate_field.sigma_infinity, h0, r_in, self.dimension)
            result = self.ensemble(epsilon_law(self.geometry, epsilon), [0.0, t], stream="transport", key=(index,),
                                   keep_deposits=True)
            distance = l1_distance(result.snapshots[-1], steady.field)
            denominator = weighted_distance(result.snapshots[0], steady.field, self.geometry, spec)
            decay = distance.value / denominator if denominator > 0 else float("nan")
            implied = quadrature.value / (decay * epsilon ** (-counter.alpha)) if decay > 0 else float("inf")
            rows.append({"t": t, "epsilon": epsilon, "lhs_quadrature": quadrature.value,
                         "lhs_quadrature_error": quadrature.error, "lhs_monte_carlo": mc_mean,
                         "lhs_monte_carlo_error": mc_error, "step_two_bound": bound, "distance": distance.value,
                         "floor": distance.floor, "weighted_initial_distance": denominator, "decay": decay,
                         "implied_constant": implied,
                         "tail_product": decay * (1.0 + t) ** counter.alpha,
                         "tail_floor": distance.floor / denominator * (1.0 + t) ** counter.alpha
                         if denominator > 0 else float("nan")})
        table = pd.DataFrame(rows)
        agreement = bool(np.all(np.abs(table["lhs_quadrature"] - table["lhs_monte_carlo"])
                                <= 4.0 * table["lhs_monte_carlo_error"] + table["lhs_quadrature_error"]))
        tail = table[(table["t"] >= counter.tail_window[0]) & (table["t"] <= counter.tail_window[1])]
        tail_minimum = float(tail["tail_product"].min()) if len(tail) else float("nan")
        tail_floor = float(tail["tail_floor"].max()) if len(tail) else float("nan")
        tail_fit = None
        if len(tail) >= 4:
            try:
                tail_fit = fit_rate(tail["t"].tolist(), tail["decay"].tolist(), "polynomial").to_dict()
            except RateFitException as error:
                tail_fit = {"error": str(error)}
        constants = table["implied_constant"][np.isfinite(table["implied_constant"])]
        report = {"r_in": r_in, "h0": h0, "h0_estimated": counter.h0 is None, "alpha": counter.alpha,
                  "quadrature_matches_sampling": agreement, "tail_product_minimum": tail_minimum,
                  "tail_floor": tail_floor, "tail_above_floor": bool(tail_minimum > 5.0 * tail_floor),
                  "implied_constant_max": float(constants.max()) if len(constants) else None,
                  "tail_fit": tail_fit}
        passed = agreement and bool(tail_minimum > 0.0)
        return ExperimentOutcome("counterexample", report, {"counterexample": table}, passed)

    def verify_kernel(self) -> ExperimentOutcome:
        """
        Method for the normalization residual grid of the CL kernel.
        :return: Outcome, passed if every residual stays below 1e-6.
        """
        table = pd.DataFrame(normalization_grid(self.geometry))
        worst = float(table["residual"].abs().max())
        return ExperimentOutcome("verify-kernel", {"worst_residual": worst, "rows": len(table)},
                                 {"kernel_residuals": table}, worst < 1e-6)

    def run(self, experiment: str) -> ExperimentOutcome:
        """
        Method for dispatching an experiment by subcommand name.
        :param experiment: Subcommand name.
        :return: Outcome.
        """
        dispatch = {
            "simulate": self.simulate,
            "steady": self.steady,
            "rate": self.rate,
            "verify-kernel": self.verify_kernel,
            "lyapunov": self.lyapunov_audit,
            "flux": self.flux_audit,
            "doeblin": self.doeblin,
            "counterexample": self.counterexample_run
        }
        if experiment not in dispatch:
            raise ExperimentException(experiment, "unknown experiment")
        self._logger.info(f"Running {experiment}")
        outcome = dispatch[experiment]()
        outcome.report["config"] = dictionary_utility.without_keys(dump_config(self.config),
                                                                  [["simulation", "workers"], ["output"]])
        return outcome
