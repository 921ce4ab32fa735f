"""eigenvalues, convergence rates and disagreement dynamics"""

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .error import HypothesisNotMet, InvalidArgumentError
from .matrices import (
    STOCHASTIC_TOLERANCE,
    check_step_size,
    laplacian,
    perron,
    self_inclusive_sizes,
    symmetric_part,
)
from .topology import NeighborGraph, induced_subgraph, is_strongly_connected

SYMMETRY_TOLERANCE = 1e-10
JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100
# above this order eig_symmetric defers to LAPACK unless told otherwise
JACOBI_MAX_ORDER = 64
# enumerating every graph on s vertices is only feasible for tiny s
ENUMERATION_MAX_ORDER = 5


def _jacobi_eigenvalues(A: np.ndarray) -> np.ndarray:
    A = np.array(A, dtype=float)
    n = len(A)
    scale = max(1.0, float(np.abs(A).max())) if n else 1.0
    for _ in range(JACOBI_MAX_SWEEPS):
        off_diagonal = math.sqrt(float((A**2).sum() - (A.diagonal() ** 2).sum()))
        if off_diagonal <= JACOBI_TOLERANCE * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                column_p, column_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * column_p - s * column_q
                A[:, q] = s * column_p + c * column_q
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
    return np.sort(A.diagonal())


def eig_symmetric(M, method: str = "auto") -> List[float]:
    """full ascending spectrum of a real symmetric matrix

    ``method`` is ``jacobi`` (cyclic Jacobi rotations), ``lapack``
    (``numpy.linalg.eigvalsh``) or ``auto``, which picks Jacobi for small
    orders.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgumentError("eigenvalues need a square matrix")
    if not np.allclose(M, M.T, rtol=0, atol=SYMMETRY_TOLERANCE):
        raise InvalidArgumentError("matrix is not symmetric")
    if method == "auto":
        method = "jacobi" if len(M) <= JACOBI_MAX_ORDER else "lapack"
    if method == "jacobi":
        values = _jacobi_eigenvalues(M)
    elif method == "lapack":
        values = np.linalg.eigvalsh(symmetric_part(M))
    else:
        raise InvalidArgumentError("unknown eigen-solver %r" % method)
    return sorted(float(value) for value in values)


def lambda2(g: NeighborGraph) -> float:
    """algebraic connectivity of the symmetrized Laplacian (0 below two vertices)"""
    if g.vertex_count < 2:
        return 0.0
    return eig_symmetric(symmetric_part(laplacian(g)))[1]


@dataclass(frozen=True)
class SpectralReport:
    lambda2: float
    mu2: float
    dt_rate: float
    ct_rate: float
    eigenvalues: Tuple[float, ...]
    epsilon: float
    step: int = 0
    delta_norm: Optional[float] = None

    CSV_COLUMNS = ("step", "lambda2", "mu2", "dt_rate", "ct_rate", "delta_norm")

    def as_row(self) -> Tuple:
        return (
            self.step,
            self.lambda2,
            self.mu2,
            self.dt_rate,
            self.ct_rate,
            self.delta_norm,
        )


def _rates_from_spectrum(
    eigenvalues: Sequence[float], epsilon: float
) -> Tuple[float, float, float, float]:
    second = eigenvalues[1] if len(eigenvalues) > 1 else 0.0
    # the spectrum of a connected graph is clamped at zero against rounding
    second = max(second, 0.0)
    # largest modulus of I - εL off the consensus direction; |1 - ελₙ|
    # takes over once ε(λ₂ + λₙ) > 2
    mu2 = max(abs(1.0 - epsilon * second), abs(1.0 - epsilon * eigenvalues[-1]))
    dt_rate = math.log(mu2) if mu2 > 0 else -math.inf
    return second, mu2, dt_rate, -second if second else 0.0


def rates(
    g: NeighborGraph,
    epsilon: float,
    theta: Optional[Sequence[float]] = None,
    step: Optional[int] = None,
) -> SpectralReport:
    """λ₂, the Perron contraction factor μ₂ and the DT/CT rates of one snapshot

    μ₂ = max(|1 - ελ₂|, |1 - ελₙ|) is 1 - ελ₂ for small steps and bounds
    ‖δ(t+1)‖ / ‖δ(t)‖ for every admissible ε < 1/Δ.
    """
    check_step_size(g, epsilon)
    eigenvalues = eig_symmetric(symmetric_part(laplacian(g)))
    second, mu2, dt_rate, ct_rate = _rates_from_spectrum(eigenvalues, epsilon)
    delta_norm = None
    if theta is not None:
        delta_norm = float(np.linalg.norm(disagreement(theta, g).delta))
    return SpectralReport(
        lambda2=second,
        mu2=mu2,
        dt_rate=dt_rate,
        ct_rate=ct_rate,
        eigenvalues=tuple(eigenvalues),
        epsilon=epsilon,
        step=g.timestamp if step is None else step,
        delta_norm=delta_norm,
    )


def write_reports_csv(reports: Sequence[SpectralReport], stream: TextIO) -> None:
    stream.write(",".join(SpectralReport.CSV_COLUMNS) + "\n")
    for report in reports:
        stream.write(
            ",".join("" if v is None else format(v, ".6g") for v in report.as_row())
            + "\n"
        )


@dataclass(frozen=True)
class DisagreementState:
    delta: np.ndarray
    avg1: float
    avg2: float

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.delta))


def disagreement(theta: Sequence[float], g: NeighborGraph) -> DisagreementState:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (g.vertex_count,):
        raise InvalidArgumentError(
            "expected %d headings, got %d" % (g.vertex_count, theta.size)
        )
    avg1 = float(theta.mean())
    weights = self_inclusive_sizes(g)
    avg2 = float(weights @ theta / weights.sum())
    return DisagreementState(delta=theta - avg1, avg1=avg1, avg2=avg2)


def contraction_check(
    g: NeighborGraph, epsilon: float, theta: Sequence[float]
) -> float:
    """‖δ(t+1)‖ / ‖δ(t)‖ for one Perron step, 0 at consensus"""
    before = disagreement(theta, g).norm
    if before == 0:
        return 0.0
    after = disagreement(perron(g, epsilon) @ np.asarray(theta, dtype=float), g).norm
    return after / before


@dataclass(frozen=True)
class LyapunovValues:
    V: float
    Phi: float


def lyapunov_values(delta: Sequence[float]) -> LyapunovValues:
    delta = np.asarray(delta, dtype=float)
    phi = float(delta @ delta)
    return LyapunovValues(V=phi / 2, Phi=phi)


@dataclass(frozen=True)
class SwitchingRates:
    lambda2_doublestar: float
    # None when the component is too large to enumerate
    lambda2_star_restricted: Optional[float]


def _connected_graphs(order: int):
    pairs = list(itertools.combinations(range(order), 2))
    for selection in itertools.product((False, True), repeat=len(pairs)):
        edges = [pair for pair, chosen in zip(pairs, selection) if chosen]
        g = NeighborGraph.from_edges(order, edges, symmetric=True)
        if is_strongly_connected(g):
            yield g


def min_lambda2_over_family(order: int) -> float:
    """smallest λ₂ over all connected graphs on ``order`` vertices"""
    if order > ENUMERATION_MAX_ORDER:
        raise InvalidArgumentError(
            "enumeration is capped at %d vertices" % ENUMERATION_MAX_ORDER
        )
    return min(lambda2(g) for g in _connected_graphs(order))


def switching_rates(
    trajectory: Sequence[NeighborGraph], component: Sequence[int]
) -> SwitchingRates:
    if not trajectory:
        raise InvalidArgumentError("the trajectory holds no snapshots")
    values = []
    for index, g in enumerate(trajectory):
        sub = induced_subgraph(g, component)
        if not is_strongly_connected(sub):
            raise HypothesisNotMet(
                "component is not strongly connected at step %d" % index, step=index
            )
        values.append(lambda2(sub))
    size = len(component)
    restricted = (
        min_lambda2_over_family(size) if 2 <= size <= ENUMERATION_MAX_ORDER else None
    )
    return SwitchingRates(
        lambda2_doublestar=min(values), lambda2_star_restricted=restricted
    )


def group_decision_weights(g: NeighborGraph) -> List[float]:
    sizes = self_inclusive_sizes(g)
    return (sizes / sizes.sum()).tolist()


@dataclass(frozen=True)
class WolfowitzProduct:
    product: np.ndarray
    row_spread: float
    spreads: Tuple[float, ...]


def row_spread(M: np.ndarray) -> float:
    """largest within-column range; zero iff all rows are equal"""
    M = np.asarray(M, dtype=float)
    return float((M.max(axis=0) - M.min(axis=0)).max())


def wolfowitz_product(matrices: Sequence[np.ndarray]) -> WolfowitzProduct:
    if not matrices:
        raise InvalidArgumentError("the product needs at least one matrix")
    product = None
    spreads = []
    for M in matrices:
        M = np.asarray(M, dtype=float)
        if (M < 0).any() or not np.allclose(
            M.sum(axis=1), 1.0, rtol=0, atol=STOCHASTIC_TOLERANCE
        ):
            raise InvalidArgumentError("only row-stochastic matrices can be chained")
        product = M if product is None else M @ product
        spreads.append(row_spread(product))
    return WolfowitzProduct(
        product=product, row_spread=spreads[-1], spreads=tuple(spreads)
    )
