# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
import copy
from typing import List, Optional
import numpy as np
from pydantic import BaseModel, Extra, ValidationError, validator
from src.model.exceptions import ConfigurationException
from src.model.geometry_control.domain_geometry import build_geometry
from src.model.measure_control.weights import c4_from_beta_0, default_delta, resolve_c4
from src.utility.bronze import json_utility, dictionary_utility, hashing_utility


SHAPE_DIMENSIONS = {"disk2d": 2, "implicit2d": 2, "ball3d": 3}
WALL_KINDS = ["cl", "maxwell"]
SIGMA_KINDS = ["constant", "hole", "smooth"]
COLLISION_KINDS = ["bgk", "linear_boltzmann", "relaxation"]
SPATIAL_LAWS = ["uniform", "ball", "cell"]
VELOCITY_LAWS = ["maxwellian", "ball", "sphere", "point", "box"]
LYAPUNOV_LAWS = ["equilibrium", "ball", "fast"]
FIT_MODES = ["exponential", "polynomial"]


def _one_of(options: List[str]):
    def check(cls, value: str) -> str:
        if value not in options:
            raise ValueError(f"must be one of {options}")
        return value
    return check


class ConfigModel(BaseModel):
    """
    Base of all configuration blocks.
    """
    class Config:
        extra = Extra.forbid
        validate_assignment = True


class GeometryConfig(ConfigModel):
    shape: str = "disk2d"
    radius: float = 1.0
    level_set: str = "superellipse"
    exponent: float = 4.0
    radial_bins: int = 8
    angular_bins: int = 8
    polar_bins: Optional[int] = None

    _shape = validator("shape", allow_reuse=True)(_one_of(list(SHAPE_DIMENSIONS)))

    @validator("radius", "exponent")
    def positive(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("must be positive")
        return value

    @validator("radial_bins", "angular_bins")
    def at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @property
    def dimension(self) -> int:
        return SHAPE_DIMENSIONS[self.shape]


class FieldConfig(ConfigModel):
    """
    Boundary field θ or β: constant base or base·(1 + amplitude·cos(mode·φ)).
    """
    kind: str = "constant"
    base: float = 1.0
    amplitude: float = 0.0
    mode: int = 1

    _kind = validator("kind", allow_reuse=True)(_one_of(["constant", "angular"]))

    @property
    def infimum(self) -> float:
        if self.kind == "angular" and self.mode == 0:
            return self.base * (1.0 + self.amplitude)
        return self.base * (1.0 - abs(self.amplitude)) if self.kind == "angular" else self.base

    @property
    def supremum(self) -> float:
        if self.kind == "angular" and self.mode == 0:
            return self.base * (1.0 + self.amplitude)
        return self.base * (1.0 + abs(self.amplitude)) if self.kind == "angular" else self.base


class WallConfig(ConfigModel):
    kind: str = "cl"
    temperature: FieldConfig = FieldConfig()
    r_perp: float = 1.0
    r_par: float = 1.0
    beta: FieldConfig = FieldConfig()
    beta_0: Optional[float] = None

    _kind = validator("kind", allow_reuse=True)(_one_of(WALL_KINDS))


class SigmaConfig(ConfigModel):
    kind: str = "constant"
    value: float = 1.0
    hole_center: Optional[List[float]] = None
    hole_radius: float = 1.0
    width: float = 0.25

    _kind = validator("kind", allow_reuse=True)(_one_of(SIGMA_KINDS))

    @validator("value")
    def nonnegative(cls, value: float) -> float:
        if value < 0.0:
            raise ValueError("rates must be nonnegative")
        return value


class AnnulusConfig(ConfigModel):
    inner: float = 1.0
    outer: float = 2.0


class CollisionConfig(ConfigModel):
    kind: str = "bgk"
    sigma: SigmaConfig = SigmaConfig()
    delta_k: float = 0.25
    annulus: AnnulusConfig = AnnulusConfig()
    table_path: Optional[str] = None
    table_spacing: float = 0.25

    _kind = validator("kind", allow_reuse=True)(_one_of(COLLISION_KINDS))


class WeightsConfig(ConfigModel):
    alpha: float = 1.0
    delta: Optional[float] = None
    c4: Optional[float] = None


class InitialLawConfig(ConfigModel):
    spatial: str = "uniform"
    velocity: str = "maxwellian"
    spatial_center: Optional[List[float]] = None
    spatial_radius: float = 1.0
    velocity_center: Optional[List[float]] = None
    velocity_radius: float = 1.0
    theta: float = 1.0
    epsilon: Optional[float] = None
    cell: Optional[int] = None

    _spatial = validator("spatial", allow_reuse=True)(_one_of(SPATIAL_LAWS))
    _velocity = validator("velocity", allow_reuse=True)(_one_of(VELOCITY_LAWS))


class SimulationConfig(ConfigModel):
    particles: int = 20000
    end_time: float = 10.0
    snapshots: List[float] = [0.0, 1.0, 2.0, 5.0, 10.0]
    master_seed: int = 20231017
    workers: int = 1
    block_size: int = 4096
    velocity_bins: int = 12
    v_max: float = 6.0
    keep_deposits: bool = True
    log_segments: bool = False

    @validator("particles", "workers", "block_size", "velocity_bins")
    def at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @validator("master_seed")
    def unsigned(cls, value: int) -> int:
        if not 0 <= value < 2 ** 64:
            raise ValueError("must be an unsigned 64 bit integer")
        return value


class SteadyConfig(ConfigModel):
    relax_time: float = 20.0
    average_time: float = 10.0
    average_snapshots: int = 11
    replicas: int = 2


class RateConfig(ConfigModel):
    times: List[float] = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0]
    modes: List[str] = FIT_MODES
    window: Optional[List[float]] = None
    floor_factor: float = 1.0

    @validator("modes", each_item=True)
    def known_mode(cls, value: str) -> str:
        return _one_of(FIT_MODES)(cls, value)


class LyapunovConfig(ConfigModel):
    alpha: float = 1.5
    horizons: List[float] = [2.0, 5.0, 10.0, 20.0]
    initial_laws: List[str] = LYAPUNOV_LAWS
    fast_speed: float = 5.0
    form: str = "exponential"
    time_step: float = 0.5

    _form = validator("form", allow_reuse=True)(_one_of(["exponential", "subgeometric"]))

    @validator("initial_laws", each_item=True)
    def known_law(cls, value: str) -> str:
        return _one_of(LYAPUNOV_LAWS)(cls, value)


class FluxConfig(ConfigModel):
    horizon: float = 10.0
    bins: int = 20
    speed_cap: Optional[float] = None
    cold_speed: Optional[float] = None


class DoeblinConfig(ConfigModel):
    level: float = 15.0
    horizons: List[float] = [5.0, 10.0, 20.0]
    starts_per_cell: int = 10000
    max_start_cells: int = 8
    arrival_radial_bins: int = 8
    arrival_angular_bins: int = 8
    arrival_velocity_bins: int = 8
    arrival_v_max: float = 4.0


class CounterexampleConfig(ConfigModel):
    alpha: float = 1.0
    times: List[float] = [1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 40.0]
    tail_window: List[float] = [10.0, 40.0]
    h0: Optional[float] = None
    monte_carlo_samples: int = 100000
    radial_order: int = 16
    angular_points: int = 32


class ExperimentConfig(ConfigModel):
    steady: SteadyConfig = SteadyConfig()
    rate: RateConfig = RateConfig()
    lyapunov: LyapunovConfig = LyapunovConfig()
    flux: FluxConfig = FluxConfig()
    doeblin: DoeblinConfig = DoeblinConfig()
    counterexample: CounterexampleConfig = CounterexampleConfig()


class RunConfig(ConfigModel):
    """
    Root run configuration.
    """
    geometry: GeometryConfig = GeometryConfig()
    wall: WallConfig = WallConfig()
    collision: CollisionConfig = CollisionConfig()
    weights: WeightsConfig = WeightsConfig()
    initial: InitialLawConfig = InitialLawConfig()
    simulation: SimulationConfig = SimulationConfig()
    experiment: ExperimentConfig = ExperimentConfig()
    output: Optional[str] = None

    @property
    def dimension(self) -> int:
        return self.geometry.dimension


"""
Cross-field constraints
"""


def _hole_inside(config: RunConfig) -> Optional[str]:
    sigma = config.collision.sigma
    if sigma.kind == "constant":
        return None
    dimension = config.dimension
    center = np.zeros(dimension) if sigma.hole_center is None else np.asarray(sigma.hole_center, dtype=float)
    if center.size != dimension:
        return f"collision.sigma.hole_center: needs {dimension} coordinates"
    if config.geometry.shape == "implicit2d":
        room = build_geometry(config.geometry.shape, config.geometry.radius, config.geometry.level_set,
                              config.geometry.exponent).distance_to_origin_boundary()
    else:
        room = config.geometry.radius
    if not np.linalg.norm(center) + sigma.hole_radius < room:
        return "collision.sigma: the hole ball must lie inside the domain (degenerate rate field)"
    return None


def check_constraints(config: RunConfig) -> List[str]:
    """
    Function for collecting all cross-field violations, each naming the hypothesis it derives from.
    :param config: Field-validated configuration.
    :return: Violations.
    """
    violations = []
    dimension = config.dimension
    wall = config.wall
    if wall.temperature.infimum <= 0.0 or (wall.temperature.kind == "angular" and abs(wall.temperature.amplitude) >= 1.0):
        violations.append("wall.temperature: θ must be positive and continuous on the boundary (wall temperature)")
    if wall.kind == "cl":
        if not 0.0 < wall.r_perp <= 1.0:
            violations.append(f"wall.r_perp={wall.r_perp}: r⊥ ∈ (0,1] (accommodation hypothesis)")
        if not 0.0 < wall.r_par < 2.0:
            violations.append(f"wall.r_par={wall.r_par}: r∥ ∈ (0,2) (accommodation hypothesis)")
    else:
        beta_0 = wall.beta.infimum if wall.beta_0 is None else wall.beta_0
        if wall.beta.supremum > 1.0:
            violations.append("wall.beta: β ≤ 1 (Maxwell accommodation)")
        if not 0.0 < beta_0 <= 1.0:
            violations.append(f"wall.beta_0={beta_0}: β₀ ∈ (0,1] (Maxwell accommodation)")
        elif wall.beta.infimum < beta_0 - 1e-15:
            violations.append(f"wall.beta_0={beta_0}: β ≥ β₀ on the boundary (Maxwell accommodation)")

    collision = config.collision
    if not 0.0 < collision.delta_k < 0.5:
        violations.append(f"collision.delta_k={collision.delta_k}: δ_k ∈ (0,1/2) (moment bound hypothesis)")
    if collision.kind == "linear_boltzmann" and not 0.0 <= collision.annulus.inner < collision.annulus.outer:
        violations.append("collision.annulus: 0 ≤ inner < outer (post-collision law)")
    hole = _hole_inside(config)
    if hole:
        violations.append(hole)

    weights = config.weights
    if not 0.0 < weights.alpha < dimension:
        violations.append(f"weights.alpha={weights.alpha}: α ∈ (0,d) with d={dimension} (weight hypothesis)")
    if weights.delta is not None and not 0.0 < weights.delta < collision.delta_k / dimension:
        violations.append(f"weights.delta={weights.delta}: δ ∈ (0,δ_k/d) (weight hypothesis)")
    if weights.c4 is not None:
        if not 0.0 < weights.c4 < 1.0:
            violations.append(f"weights.c4={weights.c4}: c₄ ∈ (0,1) (weight hypothesis)")
        elif wall.kind == "maxwell":
            beta_0 = wall.beta.infimum if wall.beta_0 is None else wall.beta_0
            if 0.0 < beta_0 < 1.0 and abs(weights.c4 - c4_from_beta_0(beta_0)) > 1e-12:
                violations.append(f"weights.c4={weights.c4}: (1-c₄)⁴ = 1-β₀ in Maxwell mode (weight hypothesis)")

    simulation = config.simulation
    snapshots = simulation.snapshots
    if list(snapshots) != sorted(snapshots):
        violations.append("simulation.snapshots: snapshot times must be sorted")
    if snapshots and (snapshots[0] < 0.0 or snapshots[-1] > simulation.end_time):
        violations.append("simulation.snapshots: snapshot times must lie in [0, end_time]")
    if config.experiment.counterexample.alpha >= dimension or config.experiment.counterexample.alpha <= 0.0:
        violations.append("experiment.counterexample.alpha: α ∈ (0,d) (weight hypothesis)")
    if not 1.0 < config.experiment.lyapunov.alpha < dimension:
        violations.append("experiment.lyapunov.alpha: α ∈ (1,d) (Lyapunov hypothesis)")
    return violations


def _without_invalid(data: dict, locations: List[tuple]) -> dict:
    """
    Internal function for dropping the entries behind field errors, so that their defaults apply.
    :param data: Raw document.
    :param locations: Error locations.
    :return: Pruned copy.
    """
    pruned = copy.deepcopy(data)
    for location in locations:
        node = pruned
        for depth, key in enumerate(location):
            if not isinstance(node, dict) or key not in node:
                break
            if depth == len(location) - 1 or not isinstance(node[key], dict):
                del node[key]
                break
            node = node[key]
    return pruned


def resolve(config: RunConfig) -> RunConfig:
    """
    Function for filling in derived defaults: β₀ from inf β, c₄ from β₀ or 1/2 and δ from δ_k.
    :param config: Valid configuration.
    :return: Resolved copy.
    """
    resolved = config.copy(deep=True)
    if resolved.wall.kind == "maxwell" and resolved.wall.beta_0 is None:
        resolved.wall.beta_0 = resolved.wall.beta.infimum
    if resolved.weights.c4 is None:
        resolved.weights.c4 = resolve_c4(resolved.wall.kind, resolved.wall.beta_0 or 1.0)
    if resolved.weights.delta is None:
        resolved.weights.delta = default_delta(resolved.collision.delta_k, resolved.dimension)
    return resolved


def parse_config(data: dict, source: str = None) -> RunConfig:
    """
    Function for validating a raw configuration document.
    :param data: Raw document.
    :param source: Source for error messages.
    :return: Validated and resolved configuration.
    """
    field_violations = []
    try:
        config = RunConfig.parse_obj(data)
    except ValidationError as error:
        field_violations = [f"{'.'.join(str(part) for part in entry['loc'])}: {entry['msg']}"
                            for entry in error.errors()]
        try:
            config = RunConfig.parse_obj(_without_invalid(data, [entry["loc"] for entry in error.errors()]))
        except ValidationError:
            raise ConfigurationException(field_violations, source)
    violations = field_violations + check_constraints(config)
    if violations:
        raise ConfigurationException(violations, source)
    return resolve(config)


def load_config(path: str = None, overrides: List[str] = None) -> RunConfig:
    """
    Function for loading a run configuration.
    :param path: JSON document path. Defaults to None in which case the built-in defaults are used.
    :param overrides: Dotted overrides "key.path=json_value".
    :return: Validated and resolved configuration.
    """
    data = {} if path is None else json_utility.load(path)
    if overrides:
        try:
            data = dictionary_utility.apply_overrides(data, overrides)
        except ValueError as error:
            raise ConfigurationException([str(error)], path)
    return parse_config(data, path)


def dump_config(config: RunConfig) -> dict:
    return config.dict()


def save_config(config: RunConfig, path: str) -> None:
    json_utility.save(dump_config(config), path)


def config_hash(config: RunConfig) -> str:
    """
    Function for hashing a configuration without scheduling and output settings.
    :param config: Configuration.
    :return: SHA256 hex digest.
    """
    return hashing_utility.hash_data_with_sha256(
        dictionary_utility.without_keys(dump_config(config), [["simulation", "workers"], ["output"]]))
