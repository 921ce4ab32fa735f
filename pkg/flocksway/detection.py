"""convergence and lost-agent classification of a run

A run ends at the first of three events: the flock converges to α, a proper
subset of the flock has stayed within the lost tolerance of α for more than
``lost_T`` steps while the others did not (lossy), or no flocking agent came
within the tolerance during the first ``lost_T_flock`` steps (totally lossy).
Agents only get lost on a switching topology; on a fixed graph the last two
events are never decided.

Runs that end without any of these events are either aborted by an error or
truncated at the step limit.
"""

import enum
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Optional, TextIO

import numpy as np

from .error import InvalidArgumentError
from .model import SimConfig, Topology, angular_distances


class RunClass(enum.Enum):
    CLEAN = "Clean"
    LOSSY = "Lossy"
    TOTALLY_LOSSY = "TotallyLossy"
    TRUNCATED = "Truncated"
    ABORTED = "Aborted"

    @property
    def is_decided(self) -> bool:
        return self not in (RunClass.TRUNCATED, RunClass.ABORTED)


@dataclass(frozen=True)
class RunRecord:
    converged: bool
    convergence_step: Optional[int]
    lost_ids: FrozenSet[int]
    classification: RunClass
    t_star: Optional[int] = None
    steps: int = 0
    error: Optional[str] = None

    CSV_COLUMNS = (
        "converged",
        "convergence_step",
        "classification",
        "t_star",
        "lost_count",
        "lost_ids",
        "steps",
        "error",
    )

    @property
    def lost_count(self) -> int:
        return len(self.lost_ids)

    def as_row(self) -> tuple:
        return (
            str(self.converged).lower(),
            "" if self.convergence_step is None else self.convergence_step,
            self.classification.value,
            "" if self.t_star is None else self.t_star,
            self.lost_count,
            " ".join(map(str, sorted(self.lost_ids))),
            self.steps,
            self.error or "",
        )


def write_record_csv(record: RunRecord, stream: TextIO, header: bool = True) -> None:
    if header:
        stream.write(",".join(RunRecord.CSV_COLUMNS) + "\n")
    stream.write(",".join(map(str, record.as_row())) + "\n")


def within_tolerance(headings, alpha: float, tolerance: float) -> np.ndarray:
    return angular_distances(headings, alpha) <= tolerance


def is_converged(headings, alpha: float, tol: float, fraction: float = 1.0) -> bool:
    """whether at least ``fraction`` of the flocking agents face α within tol"""
    aligned = within_tolerance(headings, alpha, tol)
    if fraction >= 1.0:
        return bool(aligned.all())
    return bool(aligned.sum() >= fraction * len(aligned))


class RunTracker:
    """online classification, fed with the flocking headings of each step"""

    def __init__(
        self,
        k: int,
        alpha: float,
        convergence_tol: float = 0.01,
        convergence_fraction: float = 1.0,
        lost_tolerance: float = 0.01,
        lost_T: int = 200,
        lost_T_flock: int = 2800,
        track_lost: bool = True,
    ):
        self.k = k
        self.alpha = alpha
        self.convergence_tol = convergence_tol
        self.convergence_fraction = convergence_fraction
        self.lost_tolerance = lost_tolerance
        self.lost_T = lost_T
        self.lost_T_flock = lost_T_flock
        self.track_lost = track_lost

        self.step = -1
        self.classification: Optional[RunClass] = None
        self.convergence_step: Optional[int] = None
        self.t_star: Optional[int] = None
        self.lost_ids: FrozenSet[int] = frozenset()
        self._window_start: Optional[int] = None
        self._window_members: FrozenSet[int] = frozenset()
        self._anyone_aligned = False

    @classmethod
    def for_config(
        cls, config: SimConfig, alpha: Optional[float] = None
    ) -> "RunTracker":
        return cls(
            k=config.k,
            alpha=config.alpha if alpha is None else alpha,
            convergence_tol=config.convergence_tol,
            convergence_fraction=config.convergence_fraction,
            lost_tolerance=config.lost_tolerance,
            lost_T=config.lost_T,
            lost_T_flock=config.lost_T_flock,
            track_lost=config.topology is Topology.SWITCHING,
        )

    @property
    def finished(self) -> bool:
        return self.classification is not None

    def _open_window(self, members: FrozenSet[int]) -> None:
        if 0 < len(members) < self.k:
            self._window_start, self._window_members = self.step, members
        else:
            self._window_start, self._window_members = None, frozenset()

    def observe(self, headings) -> Optional[RunClass]:
        """account for one more step; the classification once the run is decided"""
        if self.finished:
            return self.classification
        headings = np.asarray(headings, dtype=float)[: self.k]
        self.step += 1

        if is_converged(
            headings, self.alpha, self.convergence_tol, self.convergence_fraction
        ):
            self.convergence_step = self.step
            self.classification = RunClass.CLEAN
            return self.classification
        if not self.track_lost:
            return None

        aligned = within_tolerance(headings, self.alpha, self.lost_tolerance)
        members = frozenset(np.flatnonzero(aligned).tolist())
        self._anyone_aligned |= bool(members)

        # membership may grow but never shrink inside a window; when it
        # shrinks, no window starting between the old start and now can
        # survive this step, so the earliest candidate starts here
        holds = members >= self._window_members and len(members) < self.k
        if self._window_start is None or not holds:
            self._open_window(members)

        if (
            self._window_start is not None
            and self.step - self._window_start >= self.lost_T
        ):
            self.t_star = self._window_start
            self.lost_ids = frozenset(range(self.k)) - self._window_members
            self.classification = RunClass.LOSSY
        elif not self._anyone_aligned and self.step >= self.lost_T_flock:
            self.lost_ids = frozenset(range(self.k))
            self.classification = RunClass.TOTALLY_LOSSY
        return self.classification

    def record(self, error: Optional[str] = None) -> RunRecord:
        if error is not None:
            classification = RunClass.ABORTED
        else:
            classification = self.classification or RunClass.TRUNCATED
        return RunRecord(
            converged=self.convergence_step is not None,
            convergence_step=self.convergence_step,
            lost_ids=self.lost_ids,
            classification=classification,
            t_star=self.t_star,
            steps=max(self.step, 0),
            error=error,
        )


def _flocking_headings(entry, k: int) -> np.ndarray:
    headings = getattr(entry, "flocking_headings", None)
    if headings is None:
        headings = np.asarray(entry, dtype=float)[:k]
    return headings


def classify_run(trajectory: Iterable, alpha: float, config: SimConfig) -> RunRecord:
    """replay a trajectory of states (or heading vectors) through a RunTracker

    Steps after the deciding one are ignored. A trajectory that ends before
    any decision is reported as truncated.
    """
    tracker = RunTracker.for_config(config, alpha)
    for entry in trajectory:
        if tracker.observe(_flocking_headings(entry, config.k)) is not None:
            break
    if tracker.step < 0:
        raise InvalidArgumentError("cannot classify an empty trajectory")
    return tracker.record()
