"""heading update rules, kinematics and the influencing-agent behaviour

Every step has two phases: all new headings are computed from the old
state, then positions are advanced with the new headings. Influencing
agents run the rule like everyone else and have their heading overwritten
with the desired orientation afterwards, which keeps all matrices square
over the n agents of the influencing neighbors graph.
"""

import dataclasses
import enum
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, TextIO

import numpy as np
from scipy.linalg import expm

from .error import InfeasibleInfluence, InvalidArgumentError, StepSizeTooLarge
from .matrices import laplacian, normalized_perron, perron, zero_one_laplacian
from .model import TWO_PI, FlockState, UpdateRule, wrap_angle, wrap_angles
from .topology import NeighborGraph, Scope, build_neighbor_graph
from .validation import ValidationError, is_angle, validate_value

logger = logging.getLogger(__name__)

# a dwell time this close to a multiple of h counts as one
DWELL_TOLERANCE = 1e-9


class CtVariant(enum.Enum):
    LINEAR = "Linear"
    ZERO_ONE = "ZeroOne"

    @classmethod
    def for_rule(cls, rule: UpdateRule) -> "CtVariant":
        if rule is UpdateRule.LINEAR_CT:
            return cls.LINEAR
        if rule is UpdateRule.ZERO_ONE_CT:
            return cls.ZERO_ONE
        raise InvalidArgumentError("%s is not a continuous-time rule" % rule.value)


@dataclass(frozen=True, eq=False)
class StepOutcome:
    new_headings: np.ndarray
    new_positions: np.ndarray
    rule_used: UpdateRule
    substeps: int = 1

    def apply(self, state: FlockState) -> FlockState:
        return state.advance(self.new_headings, self.new_positions)


def calc_diff(a: float, b: float) -> float:
    """a - b folded into [-π, π]"""
    for value in (a, b):
        try:
            validate_value(is_angle, value)
        except ValidationError as exc:
            raise InvalidArgumentError("calc_diff: %s" % exc) from exc
    difference = a - b
    if difference < -math.pi:
        return TWO_PI + difference
    if difference > math.pi:
        return difference - TWO_PI
    return difference


def calc_diff_array(a, b) -> np.ndarray:
    """elementwise, broadcasting ``calc_diff`` for headings already in [0, 2π)"""
    difference = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    difference = np.where(difference < -math.pi, difference + TWO_PI, difference)
    return np.where(difference > math.pi, difference - TWO_PI, difference)


def face_desired(agent, alpha: float) -> float:
    """the heading an influencing agent adopts, whatever its neighbors do"""
    return wrap_angle(alpha)


def update_positions(
    state: FlockState, headings: Optional[np.ndarray] = None, duration: float = 1.0
) -> np.ndarray:
    """move every agent ``duration`` time units along its heading (y axis down)"""
    headings = state.headings if headings is None else np.asarray(headings)
    travelled = state.velocities * duration
    positions = state.positions.copy()
    positions[:, 0] += travelled * np.cos(headings)
    positions[:, 1] -= travelled * np.sin(headings)
    return positions


def _check_graph(state: FlockState, g: NeighborGraph) -> None:
    if g.vertex_count != state.n:
        raise InvalidArgumentError(
            "graph covers %d agents, the flock has %d" % (g.vertex_count, state.n)
        )


def _pin_influencers(
    state: FlockState, headings: np.ndarray, alpha: Optional[float]
) -> np.ndarray:
    headings = np.array(headings, dtype=float)
    if state.m:
        if alpha is None:
            # influencers never leave their heading
            headings[state.k :] = state.headings[state.k :]
        else:
            headings[state.k :] = face_desired(None, alpha)
    return headings


def _outcome(
    state: FlockState, headings: np.ndarray, rule: UpdateRule, alpha: Optional[float]
) -> StepOutcome:
    headings = _pin_influencers(state, wrap_angles(headings), alpha)
    return StepOutcome(
        new_headings=headings,
        new_positions=update_positions(state, headings),
        rule_used=rule,
    )


def dt_step_perron(
    state: FlockState, g: NeighborGraph, epsilon: float, alpha: Optional[float] = None
) -> StepOutcome:
    _check_graph(state, g)
    headings = perron(g, epsilon) @ state.headings
    return _outcome(state, headings, UpdateRule.PERRON_DT, alpha)


def dt_step_calcdiff(
    state: FlockState, g: NeighborGraph, alpha: Optional[float] = None
) -> StepOutcome:
    """θ_i += (1/n_i) Σ_j calcDiff(θ_j, θ_i) over the self-inclusive neighborhood"""
    _check_graph(state, g)
    theta = state.headings
    # differences[i, j] = calcDiff(θ_j, θ_i)
    differences = calc_diff_array(theta[None, :], theta[:, None])
    pull = np.where(g.mask, differences, 0.0).sum(axis=1) / (1.0 + g.out_degrees)
    return _outcome(state, theta + pull, UpdateRule.CALC_DIFF_DT, alpha)


def dt_step_normalized(
    state: FlockState, g: NeighborGraph, alpha: Optional[float] = None
) -> StepOutcome:
    _check_graph(state, g)
    headings = normalized_perron(g) @ state.headings
    return _outcome(state, headings, UpdateRule.SIMPLIFIED_DT, alpha)


def dt_step(
    state: FlockState,
    g: NeighborGraph,
    rule: UpdateRule,
    epsilon: float,
    alpha: Optional[float] = None,
) -> StepOutcome:
    if rule is UpdateRule.PERRON_DT:
        return dt_step_perron(state, g, epsilon, alpha)
    if rule is UpdateRule.CALC_DIFF_DT:
        return dt_step_calcdiff(state, g, alpha)
    if rule is UpdateRule.SIMPLIFIED_DT:
        return dt_step_normalized(state, g, alpha)
    raise InvalidArgumentError("%s is not a discrete-time rule" % rule.value)


def _system_matrix(g: NeighborGraph, variant: CtVariant) -> np.ndarray:
    """the matrix M of dθ/dt = -Mθ"""
    if variant is CtVariant.LINEAR:
        return laplacian(g)
    return zero_one_laplacian(g)


def ct_derivative(
    state: FlockState, g: NeighborGraph, variant: CtVariant = CtVariant.LINEAR
) -> np.ndarray:
    _check_graph(state, g)
    return -_system_matrix(g, variant) @ state.headings


def check_ct_step(g: NeighborGraph, h: float) -> None:
    if not h > 0:
        raise InvalidArgumentError("integration step must be positive, got %r" % h)
    bound = 1 / (g.max_degree + 1)
    if h > bound:
        raise StepSizeTooLarge(
            "integration step %g exceeds 1/(Δ+1) = %g" % (h, bound),
            data={"h": h, "max_degree": g.max_degree},
        )


def transition_matrix(
    g: NeighborGraph, rule: UpdateRule, epsilon: float, h: float
) -> np.ndarray:
    """the matrix one step of ``rule`` multiplies the headings with

    CT rules give the Euler substep I - hM. CalcDiffDT is linear only while
    no heading difference wraps, where it equals the normalized Perron step.
    """
    if rule is UpdateRule.PERRON_DT:
        return perron(g, epsilon)
    if rule in (UpdateRule.CALC_DIFF_DT, UpdateRule.SIMPLIFIED_DT):
        return normalized_perron(g)
    check_ct_step(g, h)
    return np.eye(g.vertex_count) - h * _system_matrix(g, CtVariant.for_rule(rule))


def substeps_per_dwell(dwell_tau: float, h: float) -> int:
    if dwell_tau < 0:
        raise InvalidArgumentError("dwell time must not be negative")
    if dwell_tau == 0:
        return 0
    ratio = dwell_tau / h
    count = round(ratio)
    if count < 1 or abs(ratio - count) > DWELL_TOLERANCE * max(1.0, ratio):
        raise InvalidArgumentError(
            "dwell time %g is not a multiple of the integration step %g"
            % (dwell_tau, h)
        )
    return count


class CtIntegrator:
    """explicit Euler integration of a piecewise-constant CT heading system

    The neighbors graph is rebuilt from the current positions at every dwell
    boundary and held constant in between. A zero dwell time, or a graph
    passed in up front, freezes the topology for the whole integration.
    """

    def __init__(
        self,
        R: float,
        h: float,
        dwell_tau: float,
        variant: CtVariant = CtVariant.LINEAR,
        alpha: Optional[float] = None,
        graph: Optional[NeighborGraph] = None,
    ):
        self.R = R
        self.h = h
        self.variant = variant
        self.alpha = alpha
        self.dwell_substeps = substeps_per_dwell(dwell_tau, h)
        self.fixed = graph is not None or self.dwell_substeps == 0
        self.elapsed = 0
        self.rebuilds = 0
        self._graph = graph
        self._transition: Optional[np.ndarray] = None
        if graph is not None:
            self._install(graph)

    @property
    def graph(self) -> Optional[NeighborGraph]:
        return self._graph

    def _install(self, g: NeighborGraph) -> None:
        check_ct_step(g, self.h)
        self._graph = g
        self._transition = np.eye(g.vertex_count) - self.h * _system_matrix(
            g, self.variant
        )
        self.rebuilds += 1

    def _refresh(self, state: FlockState) -> None:
        due = self._graph is None or (
            not self.fixed and self.elapsed % self.dwell_substeps == 0
        )
        if due:
            self._install(build_neighbor_graph(state, Scope.ALL, self.R))
            logger.debug("CT topology rebuilt after %d substeps", self.elapsed)

    def substep(self, state: FlockState) -> FlockState:
        self._refresh(state)
        headings = self._transition @ state.headings
        headings = _pin_influencers(state, headings, self.alpha)
        positions = update_positions(state, headings, duration=self.h)
        self.elapsed += 1
        return dataclasses.replace(state, headings=headings, positions=positions)

    def advance(self, state: FlockState, duration: float = 1.0) -> StepOutcome:
        """integrate over ``duration`` time units, returned as one step"""
        count = max(1, round(duration / self.h))
        current = state
        for _ in range(count):
            current = self.substep(current)
        return StepOutcome(
            new_headings=wrap_angles(current.headings),
            new_positions=current.positions,
            rule_used=(
                UpdateRule.LINEAR_CT
                if self.variant is CtVariant.LINEAR
                else UpdateRule.ZERO_ONE_CT
            ),
            substeps=count,
        )


def ct_integrate(
    state: FlockState,
    horizon: float,
    dwell_tau: float,
    h: float,
    R: float,
    variant: CtVariant = CtVariant.LINEAR,
    alpha: Optional[float] = None,
    graph: Optional[NeighborGraph] = None,
) -> List[FlockState]:
    """the state after every Euler substep over [0, horizon], initial state first

    ``step`` of the returned states counts substeps.
    """
    integrator = CtIntegrator(R, h, dwell_tau, variant, alpha, graph)
    trajectory = [state]
    current = state
    for _ in range(round(horizon / h)):
        current = integrator.substep(current)
        current = dataclasses.replace(current, step=current.step + 1)
        trajectory.append(current)
    return trajectory


def ct_exact_solution(
    theta: Sequence[float],
    graphs: Sequence[NeighborGraph],
    dwell_tau: float,
    variant: CtVariant = CtVariant.LINEAR,
) -> List[np.ndarray]:
    """headings at each dwell boundary: θ(t_{i+1}) = exp(-M_i τ) θ(t_i)"""
    current = np.asarray(theta, dtype=float)
    boundaries = [current]
    for g in graphs:
        current = expm(-dwell_tau * _system_matrix(g, variant)) @ current
        boundaries.append(current)
    return boundaries


def convergence_horizon_Z(component_size: int, m_c: int, eps: float) -> int:
    """steps within which a component of |C| agents with m_c influencers aligns"""
    if component_size < 1 or m_c < 0:
        raise InvalidArgumentError("component size must be positive, m_c nonnegative")
    if eps < 0:
        raise InvalidArgumentError("eps must not be negative")
    denominator = m_c * math.pi / (component_size + m_c) - eps
    if denominator <= 0:
        raise InfeasibleInfluence(
            "%d influencing agents cannot steer %d flocking agents with eps=%g"
            % (m_c, component_size, eps),
            data={"component_size": component_size, "m_c": m_c, "eps": eps},
        )
    return 1 + math.ceil((math.pi / 2) / denominator - 1e-9)


TRACE_COLUMNS = ("step", "id", "role", "x", "y", "theta")


def write_trace(state: FlockState, stream: TextIO, header: bool = False) -> None:
    """one CSV line per agent"""
    if header:
        stream.write(",".join(TRACE_COLUMNS) + "\n")
    for agent in state.agents:
        stream.write(
            "{},{},{},{:.6g},{:.6g},{:.6g}\n".format(
                state.step,
                agent.id,
                agent.role.value,
                agent.position[0],
                agent.position[1],
                agent.heading,
            )
        )
