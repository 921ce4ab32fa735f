"""single runs, replica sweeps and their CSV tables"""

import csv
import dataclasses
import enum
import logging
from dataclasses import dataclass, field
from statistics import mean
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import blinker
import numpy as np
from joblib import Parallel, delayed

from .detection import RunClass, RunRecord, RunTracker, is_converged
from .dynamics import CtIntegrator, CtVariant, dt_step, write_trace
from .error import (
    FlockswayError,
    InvalidArgumentError,
    OutputError,
    SimulationError,
    StepSizeTooLarge,
)
from .model import (
    FlockState,
    InfluencerPlacement,
    Placement,
    SimConfig,
    Topology,
    init_state,
    make_rng,
)
from .spectral import SpectralReport, rates
from .topology import NeighborGraph, Scope, build_neighbor_graph

logger = logging.getLogger(__name__)

on_step = blinker.signal("step")
on_run_finished = blinker.signal("run-finished")
on_replica_finished = blinker.signal("replica-finished")

DESK_REPLICAS = 20
FULL_REPLICAS = 100
PROFILES = {"desk": DESK_REPLICAS, "full": FULL_REPLICAS}


@dataclass(frozen=True)
class RunResult:
    record: RunRecord
    metrics: Tuple[SpectralReport, ...] = ()
    final_state: Optional[FlockState] = None


def check_finite(state: FlockState) -> FlockState:
    if not (np.isfinite(state.headings).all() and np.isfinite(state.positions).all()):
        raise SimulationError("agent state diverged at step %d" % state.step)
    return state


class _Run:
    """the mutable bookkeeping of one simulated execution"""

    def __init__(self, config: SimConfig, cadence: int):
        self.config = config
        self.cadence = cadence
        self.tracker = RunTracker.for_config(config)
        self.metrics: List[SpectralReport] = []
        self.fixed_graph: Optional[NeighborGraph] = None
        self.integrator: Optional[CtIntegrator] = None
        self.late_convergence: Optional[int] = None

    def graph(self, state: FlockState) -> NeighborGraph:
        if self.fixed_graph is not None:
            return self.fixed_graph
        return build_neighbor_graph(state, Scope.ALL, self.config.R)

    def start(self, state: FlockState) -> None:
        config = self.config
        if config.topology is Topology.FIXED:
            self.fixed_graph = build_neighbor_graph(state, Scope.ALL, config.R)
        if config.update_rule.is_continuous:
            self.integrator = CtIntegrator(
                R=config.R,
                h=config.ct_step,
                dwell_tau=config.dwell_tau,
                variant=CtVariant.for_rule(config.update_rule),
                alpha=config.alpha,
                graph=self.fixed_graph,
            )

    def sample(self, state: FlockState) -> None:
        if not self.cadence or state.step % self.cadence:
            return
        try:
            report = rates(
                self.graph(state),
                self.config.epsilon,
                theta=state.headings,
                step=state.step,
            )
        except StepSizeTooLarge as exc:
            logger.debug("no spectral sample at step %d: %s", state.step, exc)
            return
        self.metrics.append(report)

    def done(self, state: FlockState) -> bool:
        classification = self.tracker.observe(state.flocking_headings)
        if classification is None:
            return False
        if classification is RunClass.LOSSY and not self.config.stop_on_lossy:
            if is_converged(
                state.flocking_headings,
                self.config.alpha,
                self.config.convergence_tol,
                self.config.convergence_fraction,
            ):
                self.late_convergence = state.step
                return True
            return False
        return True

    def advance(self, state: FlockState) -> FlockState:
        if self.integrator is not None:
            return check_finite(self.integrator.advance(state, 1.0).apply(state))
        outcome = dt_step(
            state,
            self.graph(state),
            self.config.update_rule,
            self.config.epsilon,
            self.config.alpha,
        )
        return check_finite(outcome.apply(state))

    def record(self, state: Optional[FlockState], error: Optional[str]) -> RunRecord:
        record = self.tracker.record(error)
        if state is not None:
            record = dataclasses.replace(record, steps=state.step)
        if self.late_convergence is not None:
            record = dataclasses.replace(
                record, converged=True, convergence_step=self.late_convergence
            )
        return record


def run_single(
    config: SimConfig, cadence: int = 0, trace: Optional[TextIO] = None
) -> RunResult:
    """simulate until convergence, a lossy verdict or ``max_steps``

    Every ``cadence`` steps (never when zero) a SpectralReport of the
    influencing neighbors graph is recorded. Errors raised by the simulation
    end the run and are reported in the record.
    """
    run = _Run(config, cadence)
    state: Optional[FlockState] = None
    error = None
    try:
        state = init_state(config, make_rng(config.seed))
        run.start(state)
        while True:
            if trace is not None:
                write_trace(state, trace, header=state.step == 0)
            run.sample(state)
            if on_step.receivers:
                on_step.send(state)
            if run.done(state) or state.step >= config.max_steps:
                break
            state = run.advance(state)
    except FlockswayError as exc:
        error = "{}: {}".format(exc.code, exc.message)
        logger.warning("run with seed %d aborted: %s", config.seed, error)

    record = run.record(state, error)
    logger.info(
        "seed %d: %s after %d steps, %d lost",
        config.seed,
        record.classification.value,
        record.steps,
        record.lost_count,
    )
    on_run_finished.send(config, record=record)
    return RunResult(record=record, metrics=tuple(run.metrics), final_state=state)


class SweepVariable(enum.Enum):
    FLOCK_COUNT = "FlockCount"
    INFLUENCER_COUNT = "InfluencerCount"

    @property
    def key(self) -> str:
        return "k" if self is SweepVariable.FLOCK_COUNT else "m"


@dataclass(frozen=True)
class SweepSpec:
    variable: SweepVariable
    values: Tuple[int, ...]
    replicas: int = DESK_REPLICAS
    base: SimConfig = field(default_factory=SimConfig)

    def __post_init__(self):
        if not self.values:
            raise InvalidArgumentError("a sweep needs at least one value")
        if self.replicas < 1:
            raise InvalidArgumentError("a sweep needs at least one replica")
        object.__setattr__(self, "values", tuple(self.values))

    def config_for(self, value: int, replica: int) -> SimConfig:
        return self.base.replace(
            **{self.variable.key: value, "seed": self.base.seed + replica}
        )


@dataclass(frozen=True)
class SweepRow:
    """the replicas of one sweep value

    Step and lost statistics only cover the decided runs. They are None when
    every replica was truncated or aborted.
    """

    variable: str
    value: int
    replicas: int
    mean_steps: Optional[float]
    min_steps: Optional[int]
    max_steps: Optional[int]
    mean_lost: Optional[float]
    lossy_count: int
    totally_lossy_count: int
    truncated_count: int
    aborted_count: int


SWEEP_COLUMNS = tuple(column.name for column in dataclasses.fields(SweepRow))


def _replica(config: SimConfig) -> RunRecord:
    return run_single(config).record


def aggregate(
    variable: SweepVariable, value: int, records: Sequence[RunRecord]
) -> SweepRow:
    decided = [record for record in records if record.classification.is_decided]
    steps = [record.steps for record in decided]
    classes = [record.classification for record in records]
    return SweepRow(
        variable=variable.value,
        value=value,
        replicas=len(records),
        mean_steps=float(mean(steps)) if steps else None,
        min_steps=min(steps, default=None),
        max_steps=max(steps, default=None),
        mean_lost=float(mean(r.lost_count for r in decided)) if decided else None,
        lossy_count=classes.count(RunClass.LOSSY),
        totally_lossy_count=classes.count(RunClass.TOTALLY_LOSSY),
        truncated_count=classes.count(RunClass.TRUNCATED),
        aborted_count=classes.count(RunClass.ABORTED),
    )


def run_sweep(spec: SweepSpec, workers: int = 1) -> List[SweepRow]:
    """one aggregated row per sweep value, replica r seeded with seed + r

    Records are reduced in (value, replica) order, so the table does not
    depend on the number of workers.
    """
    tasks = [
        (value, replica, spec.config_for(value, replica))
        for value in spec.values
        for replica in range(spec.replicas)
    ]
    logger.info(
        "sweeping %s over %s with %d replicas on %d workers",
        spec.variable.value,
        list(spec.values),
        spec.replicas,
        workers,
    )
    records = Parallel(n_jobs=workers)(
        delayed(_replica)(config) for _, _, config in tasks
    )
    by_value: Dict[int, List[RunRecord]] = {value: [] for value in spec.values}
    for (value, replica, _), record in zip(tasks, records):
        by_value[value].append(record)
        on_replica_finished.send(spec, value=value, replica=replica, record=record)
    return [aggregate(spec.variable, value, by_value[value]) for value in spec.values]


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def write_sweep_csv(table: Sequence[SweepRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in table:
        writer.writerow(_format_cell(getattr(row, column)) for column in SWEEP_COLUMNS)


def emit_csv(table: Sequence[SweepRow], path: str) -> None:
    try:
        with open(path, "w", newline="") as stream:
            write_sweep_csv(table, stream)
    except OSError as exc:
        raise OutputError(
            "cannot write {}: {}".format(path, exc.strerror or exc),
            data={"path": path},
        ) from exc


def _optional(convert: Callable) -> Callable:
    return lambda text: convert(text) if text else None


_ROW_TYPES: Dict[str, Callable] = {
    "variable": str,
    "value": int,
    "replicas": int,
    "mean_steps": _optional(float),
    "min_steps": _optional(int),
    "max_steps": _optional(int),
    "mean_lost": _optional(float),
    "lossy_count": int,
    "totally_lossy_count": int,
    "truncated_count": int,
    "aborted_count": int,
}


def read_sweep_csv(stream: TextIO) -> List[SweepRow]:
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != SWEEP_COLUMNS:
        raise InvalidArgumentError("not a sweep table: %s" % reader.fieldnames)
    return [
        SweepRow(**{key: _ROW_TYPES[key](text) for key, text in row.items()})
        for row in reader
    ]


def load_sweep_csv(path: str) -> List[SweepRow]:
    with open(path, newline="") as stream:
        return read_sweep_csv(stream)


def _preset(
    variable: SweepVariable,
    values: Sequence[int],
    topology: Topology,
    **base_changes,
):
    def build(replicas: int, base: SimConfig, placement: Placement) -> SweepSpec:
        if placement is Placement.RANDOM_CHAIN:
            influencers = InfluencerPlacement.INTERSECTION_POINTS
        elif variable is SweepVariable.FLOCK_COUNT:
            # a single influencer is dropped into the tight box
            influencers = InfluencerPlacement.DROP_RANDOM_AREA
        else:
            influencers = InfluencerPlacement.DROP_RANDOM_AREA_PLUS
        return SweepSpec(
            variable=variable,
            values=tuple(values),
            replicas=replicas,
            base=base.replace(
                topology=topology,
                placement=placement,
                influencer_placement=influencers,
                **base_changes,
            ),
        )

    return build


SWEEP_PRESETS = {
    "fixed-flock": _preset(
        SweepVariable.FLOCK_COUNT, range(10, 51, 10), Topology.FIXED, m=1
    ),
    "fixed-influencers": _preset(
        SweepVariable.INFLUENCER_COUNT, range(10, 91, 10), Topology.FIXED, k=100
    ),
    "switching-flock": _preset(
        SweepVariable.FLOCK_COUNT, range(10, 51, 10), Topology.SWITCHING, m=1
    ),
    "switching-influencers": _preset(
        SweepVariable.INFLUENCER_COUNT, range(10, 91, 10), Topology.SWITCHING, k=50
    ),
}


def preset_spec(
    name: str,
    profile: str = "desk",
    base: Optional[SimConfig] = None,
    placement: Placement = Placement.GRID,
    replicas: Optional[int] = None,
) -> SweepSpec:
    try:
        build = SWEEP_PRESETS[name]
    except KeyError:
        raise InvalidArgumentError(
            "unknown preset %r, choose from %s" % (name, ", ".join(SWEEP_PRESETS))
        ) from None
    if replicas is None:
        try:
            replicas = PROFILES[profile]
        except KeyError:
            raise InvalidArgumentError("unknown profile %r" % profile) from None
    return build(replicas, base or SimConfig(), placement)
