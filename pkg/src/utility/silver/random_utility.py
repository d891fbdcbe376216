# -*- coding: utf-8 -*-
"""
****************************************************
*                     Utility                      *
*            (c) 2023 Alexander Hering             *
****************************************************
"""
from typing import List, Tuple
import numpy as np


"""
Stream identifiers
"""
STREAMS = {
    "initial": 0,
    "transport": 1,
    "replica": 2,
    "quadrature": 3,
    "probe": 4
}


def block_generator(master_seed: int, stream: str, block_index: int, *extra: int) -> np.random.Generator:
    """
    Function for deriving the counter-based generator of a particle block.
    The key (master seed, stream, block index, extra) fully determines the stream, independent of scheduling.
    :param master_seed: Master seed.
    :param stream: Stream name, see STREAMS.
    :param block_index: Index of the particle block.
    :param extra: Additional key components, e.g. the replica or start cell.
    :return: Philox based generator.
    """
    sequence = np.random.SeedSequence(entropy=int(master_seed),
                                      spawn_key=(STREAMS[stream], int(block_index)) + tuple(int(e) for e in extra))
    return np.random.Generator(np.random.Philox(sequence))


def split_blocks(count: int, block_size: int) -> List[Tuple[int, int]]:
    """
    Function for splitting a particle count into fixed-size blocks.
    :param count: Particle count.
    :param block_size: Block size.
    :return: List of (first particle index, block length).
    """
    return [(start, min(block_size, count - start)) for start in range(0, count, block_size)]
