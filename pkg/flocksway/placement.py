"""initial positions of flocking and influencing agents"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional

import blinker
import numpy as np

from .error import InvalidArgumentError, PlacementError
from .geometry import Disc, disc_intersection_points, distance, sample_on_chord
from .model import InfluencerPlacement, Placement, Role, SimConfig
from .topology import NeighborGraph, connected_components

logger = logging.getLogger(__name__)

# sent with the number of pairs examined by one intersection-points placement
on_pair_scan = blinker.signal("pair-scan")

# keeps random-chain samples strictly inside the closed disc
CHAIN_SHRINK = 1 - 1e-12


@dataclass(frozen=True)
class BoundingBox:
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise InvalidArgumentError("bounding box corners are swapped")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def inflate(self, margin: float) -> "BoundingBox":
        return BoundingBox(
            self.x_min - margin,
            self.x_max + margin,
            self.y_min - margin,
            self.y_max + margin,
        )

    def contains(self, point) -> bool:
        x, y = point
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        xs = rng.uniform(self.x_min, self.x_max, size=count)
        ys = rng.uniform(self.y_min, self.y_max, size=count)
        return np.column_stack([xs, ys]).reshape(count, 2)


@dataclass(frozen=True)
class AreaBoxes:
    area_flock: BoundingBox
    area_flock_plus: BoundingBox


def grid_side(k: int) -> int:
    return math.isqrt(k - 1) + 1


def grid_placement(k: int, R: float, origin=(0.0, 0.0)) -> np.ndarray:
    """row-major fill of the smallest ℓ×ℓ grid holding k agents, spaced R - 1"""
    if k < 1:
        raise InvalidArgumentError("at least one flocking agent is required")
    if not R > 1:
        raise InvalidArgumentError("grid spacing R - 1 must be positive, R=%g" % R)
    side = grid_side(k)
    spacing = R - 1
    rows, columns = np.divmod(np.arange(k), side)
    return np.column_stack(
        [origin[0] + columns * spacing, origin[1] + rows * spacing]
    ).astype(float)


def random_chain_placement(
    k: int, R: float, start_box: BoundingBox, rng: np.random.Generator
) -> np.ndarray:
    """first agent uniform in the box, each later one uniform around its predecessor"""
    if k < 1:
        raise InvalidArgumentError("at least one flocking agent is required")
    positions = np.empty((k, 2))
    positions[0] = start_box.sample(1, rng)[0]
    for index in range(1, k):
        radius = R * math.sqrt(rng.uniform()) * CHAIN_SHRINK
        angle = rng.uniform(0.0, 2 * math.pi)
        positions[index] = positions[index - 1] + radius * np.array(
            [math.cos(angle), math.sin(angle)]
        )
    return positions


def bounding_boxes(positions, R: float) -> AreaBoxes:
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    if not len(positions):
        raise InvalidArgumentError("no positions to bound")
    (x_min, y_min), (x_max, y_max) = positions.min(axis=0), positions.max(axis=0)
    area = BoundingBox(float(x_min), float(x_max), float(y_min), float(y_max))
    return AreaBoxes(area_flock=area, area_flock_plus=area.inflate(R))


def drop_influencers(m: int, box: BoundingBox, rng: np.random.Generator) -> np.ndarray:
    if m < 0:
        raise InvalidArgumentError("influencer count must not be negative")
    return box.sample(m, rng)


def intersection_points_placement(
    flock_positions, R: float, rng: np.random.Generator
) -> np.ndarray:
    """a point inside the visibility discs of a random pair of nearby agents

    Pairs are scanned in a random order and the first one at most 2R apart is
    used, so every qualifying pair is equally likely. The point is drawn
    uniformly along the chord between the two disc intersection points.
    """
    positions = np.asarray(flock_positions, dtype=float).reshape(-1, 2)
    if not len(positions):
        raise InvalidArgumentError("cannot place an influencer next to no agent")
    if len(positions) == 1:
        on_pair_scan.send(None, count=0)
        return positions[0].copy()

    pairs = list(itertools.combinations(range(len(positions)), 2))
    scanned = 0
    for index in rng.permutation(len(pairs)):
        scanned += 1
        u, v = pairs[index]
        p_u, p_v = tuple(positions[u]), tuple(positions[v])
        gap = distance(p_u, p_v)
        if gap > 2 * R:
            continue
        on_pair_scan.send(None, count=scanned)
        if gap == 0:
            return positions[u].copy()
        locus = disc_intersection_points(Disc(p_u, R), Disc(p_v, R))
        logger.debug("placing next to agents %d and %d after %d pairs", u, v, scanned)
        return np.array(sample_on_chord(locus, rng.uniform()))

    on_pair_scan.send(None, count=scanned)
    raise PlacementError(
        "no two of the %d agents are within 2R = %g" % (len(positions), 2 * R)
    )


def domain_box(config: SimConfig) -> BoundingBox:
    return BoundingBox(0.0, config.domain_width, 0.0, config.domain_height)


def place_flock(config: SimConfig, rng: np.random.Generator) -> np.ndarray:
    if config.placement is Placement.GRID:
        extent = (grid_side(config.k) - 1) * (config.R - 1)
        origin = (
            (config.domain_width - extent) / 2,
            (config.domain_height - extent) / 2,
        )
        return grid_placement(config.k, config.R, origin)
    return random_chain_placement(config.k, config.R, domain_box(config), rng)


def flocking_graph(flocking: np.ndarray, R: float) -> NeighborGraph:
    offsets = flocking[:, None, :] - flocking[None, :, :]
    mask = np.einsum("ijk,ijk->ij", offsets, offsets) <= R * R
    np.fill_diagonal(mask, False)
    return NeighborGraph(mask, (Role.FLOCKING,) * len(flocking))


def place_influencers(
    config: SimConfig,
    flocking: np.ndarray,
    rng: np.random.Generator,
    strategy: Optional[InfluencerPlacement] = None,
) -> np.ndarray:
    """positions of the m influencing agents for the configured strategy

    Intersection-points placement serves the flock's components round robin:
    influencer j goes to component j mod η.
    """
    strategy = config.influencer_placement if strategy is None else strategy
    if config.m == 0:
        return np.empty((0, 2))
    boxes = bounding_boxes(flocking, config.R)
    if strategy is InfluencerPlacement.DROP_RANDOM_AREA:
        return drop_influencers(config.m, boxes.area_flock, rng)
    if strategy is InfluencerPlacement.DROP_RANDOM_AREA_PLUS:
        return drop_influencers(config.m, boxes.area_flock_plus, rng)

    components = connected_components(flocking_graph(flocking, config.R))
    if config.m < len(components):
        logger.warning(
            "%d influencing agents for %d flock components, some stay uninfluenced",
            config.m,
            len(components),
        )
    placed = [
        intersection_points_placement(
            flocking[list(components[j % len(components)])], config.R, rng
        )
        for j in range(config.m)
    ]
    return np.array(placed).reshape(config.m, 2)
