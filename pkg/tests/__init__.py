import os

import numpy as np

from flocksway.model import FlockState
from flocksway.placement import BoundingBox, flocking_graph, random_chain_placement
from flocksway.topology import NeighborGraph

SLOW_TESTS = bool(os.environ.get("FLOCKSWAY_SLOW_TESTS"))


def make_state(positions, headings, k=None, velocity=0.0, step=0):
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    headings = np.asarray(headings, dtype=float)
    return FlockState(
        step=step,
        positions=positions,
        headings=headings,
        velocities=np.full(len(headings), float(velocity)),
        k=len(headings) if k is None else k,
        eta=0,
    )


def path_graph(order):
    return NeighborGraph.from_edges(
        order, [(i, i + 1) for i in range(order - 1)], symmetric=True
    )


def complete_graph(order):
    return NeighborGraph.from_edges(
        order,
        [(i, j) for i in range(order) for j in range(i + 1, order)],
        symmetric=True,
    )


def random_flock_graph(rng, order, R=10.0):
    """the neighbors graph of a random chain flock, connected by construction"""
    box = BoundingBox(0.0, 300.0, 0.0, 300.0)
    return flocking_graph(random_chain_placement(order, R, box, rng), R)


def corpus_size(full, quick):
    """``full`` repetitions when the slow suite is enabled, ``quick`` otherwise"""
    return full if SLOW_TESTS else quick
