"""agent and configuration records, angle conventions and the flock state

Headings are radians in [0, 2π). Positions use screen coordinates: the y
axis points down, which is why the position update subtracts v·sin θ.
Flocking agents occupy indices 0..k-1, influencing agents k..n-1.
"""

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .error import ConfigError, InvalidArgumentError
from .validation import (
    ValidationError,
    is_finite,
    is_gt,
    is_gte,
    is_int,
    is_unit_interval,
    validate_value,
)

TWO_PI = 2 * math.pi

Point = Tuple[float, float]


class Role(enum.Enum):
    FLOCKING = "Flocking"
    INFLUENCING = "Influencing"


class UpdateRule(enum.Enum):
    PERRON_DT = "PerronDT"
    CALC_DIFF_DT = "CalcDiffDT"
    SIMPLIFIED_DT = "SimplifiedDT"
    LINEAR_CT = "LinearCT"
    ZERO_ONE_CT = "ZeroOneCT"

    @property
    def is_continuous(self) -> bool:
        return self in (UpdateRule.LINEAR_CT, UpdateRule.ZERO_ONE_CT)


class Placement(enum.Enum):
    GRID = "Grid"
    RANDOM_CHAIN = "RandomChain"


class InfluencerPlacement(enum.Enum):
    DROP_RANDOM_AREA = "DropRandomArea"
    DROP_RANDOM_AREA_PLUS = "DropRandomAreaPlus"
    INTERSECTION_POINTS = "IntersectionPoints"


class Topology(enum.Enum):
    FIXED = "Fixed"
    SWITCHING = "Switching"


def wrap_angle(x: float) -> float:
    """map any finite angle onto [0, 2π)"""
    try:
        validate_value(is_finite, x)
    except ValidationError as exc:
        raise InvalidArgumentError("cannot wrap angle: %s" % exc) from exc
    result = math.fmod(x, TWO_PI)
    if result < 0:
        result += TWO_PI
    # tiny negative inputs round up to exactly 2π
    return 0.0 if result >= TWO_PI else result


def wrap_angles(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise InvalidArgumentError("cannot wrap non-finite angles")
    result = np.mod(values, TWO_PI)
    result[result >= TWO_PI] = 0.0
    return result


def angular_distance(a: float, b: float) -> float:
    """distance between two angles on the circle, within [0, π]"""
    for value in (a, b):
        try:
            validate_value(is_finite, value)
        except ValidationError as exc:
            raise InvalidArgumentError("invalid angle: %s" % exc) from exc
    difference = math.fmod(abs(a - b), TWO_PI)
    return min(difference, TWO_PI - difference)


def angular_distances(values, reference: float) -> np.ndarray:
    difference = np.mod(np.abs(np.asarray(values, dtype=float) - reference), TWO_PI)
    return np.minimum(difference, TWO_PI - difference)


@dataclass(frozen=True)
class AgentState:
    id: int
    position: Point
    heading: float
    velocity: float
    role: Role


def _check(key, value, *validators):
    for validator in validators:
        try:
            validate_value(validator, value)
        except ValidationError as exc:
            raise ConfigError(
                "invalid value for {}: {}".format(key, exc), data={"key": key}
            ) from exc


@dataclass(frozen=True)
class SimConfig:
    """all parameters of one simulated execution

    Three tolerances usually written as epsilon are kept apart
    here: ``epsilon`` is the Perron step size, ``z_epsilon`` the slack of the
    convergence horizon bound and ``lost_tolerance`` the lost-agent radius.
    """

    k: int = 10
    m: int = 1
    R: float = 10.0
    velocity: float = 0.2
    domain_width: float = 300.0
    domain_height: float = 300.0
    epsilon: float = 0.1
    ct_step: float = 0.01
    dwell_tau: float = 1.0
    desired_orientation: float = math.pi
    convergence_tol: float = 0.01
    convergence_fraction: float = 1.0
    lost_tolerance: float = 0.01
    lost_T: int = 200
    lost_T_flock: int = 2800
    z_epsilon: float = 0.0
    update_rule: UpdateRule = UpdateRule.CALC_DIFF_DT
    placement: Placement = Placement.GRID
    influencer_placement: InfluencerPlacement = InfluencerPlacement.INTERSECTION_POINTS
    topology: Topology = Topology.SWITCHING
    max_steps: int = 100_000
    stop_on_lossy: bool = True
    seed: int = 0

    def __post_init__(self):
        _check("k", self.k, is_int, is_gte(1))
        _check("m", self.m, is_int, is_gte(0))
        _check("R", self.R, is_finite, is_gt(0))
        _check("velocity", self.velocity, is_finite, is_gte(0))
        _check("domain_width", self.domain_width, is_finite, is_gt(0))
        _check("domain_height", self.domain_height, is_finite, is_gt(0))
        _check("epsilon", self.epsilon, is_finite, is_gt(0))
        _check("ct_step", self.ct_step, is_finite, is_gt(0))
        _check("dwell_tau", self.dwell_tau, is_finite, is_gte(0))
        _check("desired_orientation", self.desired_orientation, is_finite)
        _check("convergence_tol", self.convergence_tol, is_finite, is_gte(0))
        _check("convergence_fraction", self.convergence_fraction, is_unit_interval)
        _check("lost_tolerance", self.lost_tolerance, is_finite, is_gte(0))
        _check("lost_T", self.lost_T, is_int, is_gte(0))
        _check("lost_T_flock", self.lost_T_flock, is_int, is_gte(0))
        _check("z_epsilon", self.z_epsilon, is_finite, is_gte(0))
        _check("max_steps", self.max_steps, is_int, is_gte(0))
        _check("seed", self.seed, is_int)
        if self.convergence_fraction == 0:
            raise ConfigError("invalid value for convergence_fraction: must be > 0")

    @property
    def n(self) -> int:
        return self.k + self.m

    @property
    def alpha(self) -> float:
        return wrap_angle(self.desired_orientation)

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class FlockState:
    """the global state at one time index

    Array fields are owned by the state and must not be mutated; every
    operation returns a new state.
    """

    step: int
    positions: np.ndarray
    headings: np.ndarray
    velocities: np.ndarray
    k: int
    eta: int

    @property
    def n(self) -> int:
        return len(self.headings)

    @property
    def m(self) -> int:
        return self.n - self.k

    @property
    def flocking_headings(self) -> np.ndarray:
        return self.headings[: self.k]

    def role_of(self, index: int) -> Role:
        return Role.FLOCKING if index < self.k else Role.INFLUENCING

    @property
    def roles(self) -> Tuple[Role, ...]:
        return tuple(self.role_of(index) for index in range(self.n))

    @property
    def agents(self) -> Tuple[AgentState, ...]:
        return tuple(
            AgentState(
                id=index,
                position=tuple(float(value) for value in self.positions[index]),
                heading=float(self.headings[index]),
                velocity=float(self.velocities[index]),
                role=self.role_of(index),
            )
            for index in range(self.n)
        )

    def advance(self, headings: np.ndarray, positions: np.ndarray) -> "FlockState":
        return dataclasses.replace(
            self, step=self.step + 1, headings=headings, positions=positions
        )


def make_rng(seed: int) -> np.random.Generator:
    """the random stream of one replica

    A PCG64 generator seeded through ``SeedSequence(seed)``; independent
    sub-streams come from ``rng.spawn``/``SeedSequence.spawn``.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def init_state(
    config: SimConfig, rng: Optional[np.random.Generator] = None
) -> FlockState:
    """place the flock and the influencing agents and draw initial headings

    Random draws happen in a fixed order: flocking positions, influencing
    positions, flocking headings.
    """
    from . import placement
    from .topology import Scope, build_neighbor_graph, connected_components

    rng = make_rng(config.seed) if rng is None else rng
    flocking = placement.place_flock(config, rng)
    influencing = placement.place_influencers(config, flocking, rng)
    positions = np.vstack([flocking, influencing.reshape(-1, 2)])
    headings = np.concatenate(
        [rng.uniform(0.0, TWO_PI, size=config.k), np.full(config.m, config.alpha)]
    )
    state = FlockState(
        step=0,
        positions=positions,
        headings=wrap_angles(headings),
        velocities=np.full(config.n, float(config.velocity)),
        k=config.k,
        eta=0,
    )
    graph = build_neighbor_graph(state, Scope.FLOCKING_ONLY, config.R)
    return dataclasses.replace(state, eta=len(connected_components(graph)))
