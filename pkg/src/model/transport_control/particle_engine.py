# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple
import numpy as np
from src.configuration import configuration as cfg
from src.model.geometry_control.domain_geometry import DomainGeometry, PhaseState
from src.model.wall_control.wall_model import WallModel
from src.model.collision_control.collision_model import CollisionModel


EVENT_KEYS = ["collisions", "boundary_hits", "grazing", "killed", "absorbed"]


@dataclass
class ParticleBatch(object):
    """
    Vectorized particle states with per-particle clocks and event counters.
    """
    x: np.ndarray
    v: np.ndarray
    time: np.ndarray
    alive: np.ndarray
    collisions: np.ndarray
    boundary_hits: np.ndarray

    @classmethod
    def create(cls, x: np.ndarray, v: np.ndarray, start: float = 0.0) -> "ParticleBatch":
        """
        Class method for creating a batch of live particles.
        :param x: Positions of shape (n, d).
        :param v: Velocities of shape (n, d).
        :param start: Common start time.
        :return: Particle batch.
        """
        count = x.shape[0]
        return cls(np.array(x, dtype=float), np.array(v, dtype=float), np.full(count, float(start)),
                   np.ones(count, dtype=bool), np.zeros(count, dtype=np.int64), np.zeros(count, dtype=np.int64))

    @property
    def size(self) -> int:
        return int(self.x.shape[0])


@dataclass
class BoundaryTally(object):
    """
    Boundary crossings per time bin.
    Each crossing contributes one unit of the flux measure |v·n_x| γ₊f dt dζ dv.
    Crossings with incoming speed at most the cap are tallied separately.
    """
    edges: np.ndarray
    speed_cap: Optional[float] = None
    crossings: np.ndarray = None
    capped: np.ndarray = None
    population: float = 0.0

    def __post_init__(self) -> None:
        self.edges = np.asarray(self.edges, dtype=float)
        if self.crossings is None:
            self.crossings = np.zeros(self.edges.size - 1)
        if self.capped is None:
            self.capped = np.zeros(self.edges.size - 1)

    def record(self, times: np.ndarray, speeds: np.ndarray) -> None:
        """
        Method for recording crossings.
        :param times: Crossing times.
        :param speeds: Incoming speeds.
        """
        bins = np.searchsorted(self.edges, times, side="right") - 1
        valid = (bins >= 0) & (bins < self.crossings.size)
        np.add.at(self.crossings, bins[valid], 1.0)
        if self.speed_cap is not None:
            slow = valid & (speeds <= self.speed_cap)
            np.add.at(self.capped, bins[slow], 1.0)

    def merge(self, other: "BoundaryTally") -> "BoundaryTally":
        return BoundaryTally(self.edges, self.speed_cap, self.crossings + other.crossings,
                             self.capped + other.capped, self.population + other.population)

    def cumulative_flux(self, capped: bool = False) -> np.ndarray:
        """
        Method for the accumulated flux per unit mass at the right bin edges.
        :param capped: Flag, declaring whether to restrict to speeds below the cap.
        :return: Accumulated flux of shape (bins,).
        """
        counts = self.capped if capped else self.crossings
        return np.cumsum(counts) / max(self.population, 1.0)


@dataclass
class EngineSettings(object):
    """
    Event loop settings.
    """
    snapshot_times: List[float]
    end_time: float = None
    tally_edges: Optional[List[float]] = None
    speed_cap: Optional[float] = None
    log_segments: bool = False
    keep_deposits: bool = True
    grazing_tolerance: float = cfg.GRAZING_TOLERANCE
    max_events: int = 10 ** 7

    def __post_init__(self) -> None:
        self.snapshot_times = [float(time) for time in self.snapshot_times]
        if self.end_time is None:
            self.end_time = max(self.snapshot_times) if self.snapshot_times else 0.0


@dataclass
class SegmentLog(object):
    """
    Logged free flights (start position, velocity, duration).
    """
    starts: List[np.ndarray] = field(default_factory=list)
    velocities: List[np.ndarray] = field(default_factory=list)
    durations: List[np.ndarray] = field(default_factory=list)

    def append(self, starts: np.ndarray, velocities: np.ndarray, durations: np.ndarray) -> None:
        self.starts.append(starts.copy())
        self.velocities.append(velocities.copy())
        self.durations.append(durations.copy())

    def stack(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Method for stacking all logged flights.
        :return: Start positions, velocities and durations.
        """
        if not self.starts:
            return np.empty((0, 0)), np.empty((0, 0)), np.empty(0)
        return np.vstack(self.starts), np.vstack(self.velocities), np.concatenate(self.durations)


class ParticleEngine(object):
    """
    Event driven engine: free flight until the earliest of boundary hit, accepted collision and target time.
    """

    def __init__(self, geometry: DomainGeometry, wall: WallModel, collision: CollisionModel,
                 settings: EngineSettings) -> None:
        """
        Initiation method.
        :param geometry: Domain geometry.
        :param wall: Wall model.
        :param collision: Collision model.
        :param settings: Engine settings.
        """
        self._logger = cfg.LOGGER
        self.geometry = geometry
        self.wall = wall
        self.collision = collision
        self.settings = settings
        self.events = {key: 0 for key in EVENT_KEYS}

    def advance(self, batch: ParticleBatch, until: float, rng: np.random.Generator,
                tally: Optional[BoundaryTally] = None, segments: Optional[SegmentLog] = None) -> ParticleBatch:
        """
        Method for advancing all live particles of a batch to a target time.
        :param batch: Particle batch, modified in place.
        :param until: Target time.
        :param rng: Random generator.
        :param tally: Optional boundary tally.
        :param segments: Optional free flight log.
        :return: Particle batch.
        """
        iterations = 0
        active = np.flatnonzero(batch.alive & (batch.time < until))
        while active.size:
            iterations += 1
            if iterations > self.settings.max_events:
                self._logger.warning(f"Event limit reached with {active.size} particles still in flight")
                break
            x = batch.x[active]
            v = batch.v[active]
            exit_times = np.atleast_1d(self.geometry.exit_time(x, v))
            remaining = until - batch.time[active]
            horizon = np.minimum(exit_times, remaining)
            collision_times = self.collision.next_collision(x, v, horizon, rng)

            collide = collision_times < horizon
            hit = ~collide & (exit_times <= remaining)
            durations = np.where(collide, collision_times, horizon)
            if segments is not None:
                moving = durations > 0.0
                segments.append(x[moving], v[moving], durations[moving])
            batch.x[active] = x + durations[:, None] * v
            batch.time[active] = np.where(collide | hit, batch.time[active] + durations, until)

            if np.any(collide):
                self._collide(batch, active[collide], rng)
            if np.any(hit):
                self._hit(batch, active[hit], rng, tally)
            active = active[batch.alive[active] & (batch.time[active] < until)]
        return batch

    def _collide(self, batch: ParticleBatch, indices: np.ndarray, rng: np.random.Generator) -> None:
        """
        Internal method for applying collisions.
        :param batch: Particle batch.
        :param indices: Colliding particles.
        :param rng: Random generator.
        """
        batch.collisions[indices] += 1
        self.events["collisions"] += int(indices.size)
        if self.collision.killing:
            batch.alive[indices] = False
            self.events["killed"] += int(indices.size)
        else:
            batch.v[indices] = self.collision.gain_sample(batch.x[indices], batch.v[indices], rng)

    def _hit(self, batch: ParticleBatch, indices: np.ndarray, rng: np.random.Generator,
             tally: Optional[BoundaryTally]) -> None:
        """
        Internal method for applying boundary events.
        Positions are re-projected onto the boundary, grazing particles get a fresh diffuse wall sample.
        :param batch: Particle batch.
        :param indices: Particles at the boundary.
        :param rng: Random generator.
        :param tally: Optional boundary tally.
        """
        batch.boundary_hits[indices] += 1
        self.events["boundary_hits"] += int(indices.size)
        positions = np.atleast_2d(self.geometry.project_to_boundary(batch.x[indices]))
        batch.x[indices] = positions
        incoming = batch.v[indices]
        speeds = np.linalg.norm(incoming, axis=1)
        if tally is not None:
            tally.record(batch.time[indices], speeds)
        if self.wall.absorbing:
            batch.alive[indices] = False
            self.events["absorbed"] += int(indices.size)
            return
        normals = np.atleast_2d(self.geometry.outward_normal(positions, check=False))
        grazing = np.abs(np.einsum("ij,ij->i", incoming, normals)) < self.settings.grazing_tolerance * speeds
        outgoing = np.empty_like(incoming)
        regular = ~grazing
        if np.any(regular):
            outgoing[regular] = self.wall.reflect(incoming[regular], positions[regular], rng)
        if np.any(grazing):
            self.events["grazing"] += int(grazing.sum())
            self._logger.debug(f"Re-emitting {int(grazing.sum())} grazing particles diffusely")
            outgoing[grazing] = self.wall.diffuse_sample(positions[grazing], rng)
        batch.v[indices] = outgoing


def advance_particle(engine: ParticleEngine, state: PhaseState, until: float,
                     rng: np.random.Generator) -> Tuple[PhaseState, dict]:
    """
    Function for advancing a single particle from time zero.
    :param engine: Particle engine.
    :param state: Start state.
    :param until: Target time.
    :param rng: Random generator.
    :return: End state and event counts (collisions, boundary hits, alive flag).
    """
    batch = ParticleBatch.create(np.asarray(state.x, dtype=float)[None, :], np.asarray(state.v, dtype=float)[None, :])
    engine.advance(batch, until, rng)
    return PhaseState(batch.x[0].copy(), batch.v[0].copy()), {"collisions": int(batch.collisions[0]),
                                                              "boundary_hits": int(batch.boundary_hits[0]),
                                                              "alive": bool(batch.alive[0])}
