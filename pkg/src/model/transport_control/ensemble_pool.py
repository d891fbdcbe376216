# -*- coding: utf-8 -*-
"""
****************************************************
*              Kinetic Wall Simulator              *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, List, Optional, Tuple
import numpy as np
from tqdm import tqdm
from src.configuration import configuration as cfg
from src.model.exceptions import ExperimentException
from src.model.geometry_control.domain_geometry import DomainGeometry
from src.model.geometry_control.spatial_grid import SpatialGrid
from src.model.wall_control.wall_model import WallModel
from src.model.collision_control.collision_model import CollisionModel
from src.model.measure_control.empirical_field import EmpiricalField
from src.model.measure_control.velocity_grid import VelocityGrid
from src.model.transport_control.initial_law import InitialLaw
from src.model.transport_control.particle_engine import (EVENT_KEYS, BoundaryTally, EngineSettings, ParticleBatch,
                                                         ParticleEngine, SegmentLog)
from src.utility.silver.random_utility import block_generator, split_blocks


@dataclass
class EnsembleSetup(object):
    """
    Everything a worker needs to simulate a particle block. Must stay picklable.
    """
    geometry: DomainGeometry
    wall: WallModel
    collision: CollisionModel
    initial_law: InitialLaw
    settings: EngineSettings
    spatial: SpatialGrid
    velocity: VelocityGrid
    master_seed: int
    stream: str = "transport"
    key: Tuple[int, ...] = ()


@dataclass
class BlockTask(object):
    index: int
    start: int
    length: int
    setup: EnsembleSetup


@dataclass
class BlockResult(object):
    """
    Per block output: one field per snapshot time, boundary tally, event counts and logged flights.
    """
    index: int
    length: int
    snapshots: List[EmpiricalField]
    tally: Optional[BoundaryTally]
    events: Dict[str, int]
    segments: Optional[SegmentLog] = None


@dataclass
class EnsembleResult(object):
    """
    Merged ensemble output.
    """
    count: int
    times: List[float]
    snapshots: List[EmpiricalField]
    tally: Optional[BoundaryTally]
    events: Dict[str, int]
    segments: Optional[SegmentLog] = None
    blocks: int = 0
    survivors: List[float] = field(default_factory=list)

    def snapshot_at(self, time: float) -> EmpiricalField:
        """
        Method for retrieving the snapshot at a given time.
        :param time: Snapshot time.
        :return: Field.
        """
        return self.snapshots[self.times.index(float(time))]


def run_block(task: BlockTask) -> BlockResult:
    """
    Function for simulating one particle block.
    Initial states and transport randomness come from separate Philox streams keyed by the block index.
    :param task: Block task.
    :return: Block result.
    """
    setup = task.setup
    settings = setup.settings
    initial_rng = block_generator(setup.master_seed, "initial", task.index, *setup.key)
    transport_rng = block_generator(setup.master_seed, setup.stream, task.index, *setup.key)
    x, v = setup.initial_law.sample(task.length, initial_rng)
    batch = ParticleBatch.create(x, v)
    engine = ParticleEngine(setup.geometry, setup.wall, setup.collision, settings)
    tally = None
    if settings.tally_edges is not None:
        tally = BoundaryTally(np.asarray(settings.tally_edges, dtype=float), settings.speed_cap,
                              population=float(task.length))
    segments = SegmentLog() if settings.log_segments else None

    snapshots = []
    for time in sorted(settings.snapshot_times):
        engine.advance(batch, time, transport_rng, tally, segments)
        snapshots.append(EmpiricalField.from_samples(setup.spatial, setup.velocity, batch.x[batch.alive],
                                                     batch.v[batch.alive], population=float(task.length),
                                                     keep_deposits=settings.keep_deposits))
    if settings.end_time > (max(settings.snapshot_times) if settings.snapshot_times else 0.0):
        engine.advance(batch, settings.end_time, transport_rng, tally, segments)
    return BlockResult(task.index, task.length, snapshots, tally, dict(engine.events), segments)


class EnsemblePool(ABC):
    """
    Class for running particle blocks. Results are always returned in block order.
    """

    def __init__(self, workers: int = 1, show_progress: bool = None) -> None:
        """
        Initiation method.
        :param workers: Number of worker processes.
        :param show_progress: Flag, declaring whether to show a progress bar.
            Defaults to None in which case the configured default is used.
        """
        self._logger = cfg.LOGGER
        self.workers = max(int(workers), 1)
        self.show_progress = cfg.SHOW_PROGRESS if show_progress is None else show_progress

    def _progress(self, iterable, total: int) -> tqdm:
        return tqdm(iterable, total=total, desc="Simulating particle blocks", ncols=80,
                    disable=not self.show_progress)

    @abstractmethod
    def map_blocks(self, tasks: List[BlockTask]) -> List[BlockResult]:
        """
        Method for running blocks.
        :param tasks: Block tasks.
        :return: Block results in task order.
        """
        pass


class SerialEnsemblePool(EnsemblePool):
    """
    Class for running blocks in the calling process.
    """

    def map_blocks(self, tasks: List[BlockTask]) -> List[BlockResult]:
        """
        Method for running blocks.
        :param tasks: Block tasks.
        :return: Block results in task order.
        """
        return [run_block(task) for task in self._progress(tasks, len(tasks))]


class MultiprocessingEnsemblePool(EnsemblePool):
    """
    Class for running blocks in separate processes.
    """

    def map_blocks(self, tasks: List[BlockTask]) -> List[BlockResult]:
        """
        Method for running blocks.
        :param tasks: Block tasks.
        :return: Block results in task order.
        """
        with Pool(processes=self.workers) as pool:
            results = list(self._progress(pool.imap(run_block, tasks, chunksize=1), len(tasks)))
        return results


def get_pool(workers: int = 1, show_progress: bool = None) -> EnsemblePool:
    """
    Function for choosing a pool for a worker count.
    :param workers: Worker count.
    :param show_progress: Progress bar flag.
    :return: Ensemble pool.
    """
    if workers > 1:
        return MultiprocessingEnsemblePool(workers, show_progress)
    return SerialEnsemblePool(1, show_progress)


def merge_results(count: int, times: List[float], results: List[BlockResult]) -> EnsembleResult:
    """
    Function for merging block results in block order.
    :param count: Particle count.
    :param times: Snapshot times.
    :param results: Block results.
    :return: Ensemble result.
    """
    results = sorted(results, key=lambda result: result.index)
    snapshots = list(results[0].snapshots)
    tally = results[0].tally
    events = {key: 0 for key in EVENT_KEYS}
    segments = SegmentLog() if results[0].segments is not None else None
    for position, result in enumerate(results):
        if position:
            snapshots = [merged.merge(snapshot) for merged, snapshot in zip(snapshots, result.snapshots)]
            if tally is not None:
                tally = tally.merge(result.tally)
        for key, value in result.events.items():
            events[key] += value
        if segments is not None:
            segments.starts.extend(result.segments.starts)
            segments.velocities.extend(result.segments.velocities)
            segments.durations.extend(result.segments.durations)
    return EnsembleResult(count, times, snapshots, tally, events, segments, len(results),
                          [snapshot.deposit_count for snapshot in snapshots])


def simulate_ensemble(count: int, setup: EnsembleSetup, workers: int = 1, block_size: int = None,
                      show_progress: bool = None) -> EnsembleResult:
    """
    Function for simulating an ensemble and depositing it at every snapshot time.
    Results do not depend on the worker count.
    :param count: Particle count N ≥ 1.
    :param setup: Ensemble setup.
    :param workers: Worker count.
    :param block_size: Particles per block.
        Defaults to None in which case the configured default is used.
    :param show_progress: Progress bar flag.
    :return: Ensemble result.
    """
    if count < 1:
        raise ExperimentException("simulate", "the ensemble needs at least one particle")
    block_size = cfg.DEFAULT_BLOCK_SIZE if block_size is None else int(block_size)
    times = sorted(setup.settings.snapshot_times)
    tasks = [BlockTask(index, start, length, setup)
             for index, (start, length) in enumerate(split_blocks(count, block_size))]
    logger = cfg.LOGGER
    logger.info(f"Simulating {count} particles in {len(tasks)} blocks on {max(workers, 1)} worker(s)")
    result = merge_results(count, times, get_pool(workers, show_progress).map_blocks(tasks))

    conserving = not (setup.collision.killing or setup.wall.absorbing)
    for time, snapshot in zip(times, result.snapshots):
        snapshot.assert_nonnegative()
        if conserving and snapshot.deposit_count != count:
            raise ExperimentException("simulate", f"mass lost at t={time}: {snapshot.deposit_count} of {count}")
    logger.info(f"Ensemble finished with events {result.events}")
    return result
