"""dense matrices of a neighbor graph and structural predicates

Neighborhoods N_i include the agent itself, so the weights of the averaging
rules use n_i = 1 + deg(i) while the adjacency diagonal stays zero.
"""

from dataclasses import dataclass
from typing import List, Optional, TextIO, Tuple

import numpy as np

from .error import InvalidArgumentError, StepSizeTooLarge
from .topology import NeighborGraph, is_strongly_connected

STOCHASTIC_TOLERANCE = 1e-12

SquareMatrix = np.ndarray


def adjacency(g: NeighborGraph) -> SquareMatrix:
    return g.mask.astype(float)


def degree(g: NeighborGraph) -> SquareMatrix:
    return np.diag(g.out_degrees.astype(float))


def laplacian(g: NeighborGraph) -> SquareMatrix:
    return degree(g) - adjacency(g)


def check_step_size(g: NeighborGraph, epsilon: float) -> None:
    if not epsilon > 0:
        raise InvalidArgumentError("step size must be positive, got %r" % epsilon)
    max_degree = g.max_degree
    if max_degree and not epsilon < 1 / max_degree:
        raise StepSizeTooLarge(
            "step size %g must be below 1/Δ = 1/%d" % (epsilon, max_degree),
            data={"epsilon": epsilon, "max_degree": max_degree},
        )


def perron(g: NeighborGraph, epsilon: float) -> SquareMatrix:
    check_step_size(g, epsilon)
    return np.eye(g.vertex_count) - epsilon * laplacian(g)


def self_inclusive_sizes(g: NeighborGraph) -> np.ndarray:
    return 1.0 + g.out_degrees


def normalized_perron(g: NeighborGraph) -> SquareMatrix:
    """(I + D)^-1 (I + A)"""
    return (np.eye(g.vertex_count) + adjacency(g)) / self_inclusive_sizes(g)[:, None]


def normalized_laplacian(g: NeighborGraph) -> SquareMatrix:
    return np.eye(g.vertex_count) - normalized_perron(g)


def zero_one_laplacian(g: NeighborGraph) -> SquareMatrix:
    """the negated system matrix of the 0-1 weighted CT rule

    With self-inclusive neighborhoods this is (I + D)^-1 L, which coincides
    with ``normalized_laplacian``.
    """
    return laplacian(g) / self_inclusive_sizes(g)[:, None]


def symmetric_part(M: SquareMatrix) -> SquareMatrix:
    M = np.asarray(M, dtype=float)
    return (M + M.T) / 2


@dataclass(frozen=True)
class MatrixProperties:
    row_stochastic: bool
    column_stochastic: bool
    doubly_stochastic: bool
    # None when the matrix has negative entries
    irreducible: Optional[bool]
    primitive: Optional[bool]


def support_graph(M: SquareMatrix) -> NeighborGraph:
    mask = np.asarray(M) != 0
    np.fill_diagonal(mask, False)
    return NeighborGraph.from_edges(len(mask), zip(*np.nonzero(mask)))


def _boolean_power(pattern: np.ndarray, exponent: int) -> np.ndarray:
    result = np.eye(len(pattern), dtype=np.int64)
    base = pattern.astype(np.int64)
    while exponent:
        if exponent & 1:
            result = np.minimum(result @ base, 1)
        base = np.minimum(base @ base, 1)
        exponent >>= 1
    return result


def is_primitive(M: SquareMatrix) -> bool:
    """Wielandt: a nonnegative M is primitive iff M^(n²-2n+2) is positive"""
    n = len(M)
    if n == 0:
        return False
    return bool(_boolean_power(np.asarray(M) > 0, n * n - 2 * n + 2).all())


def matrix_properties(M: SquareMatrix) -> MatrixProperties:
    M = np.asarray(M, dtype=float)
    ones = np.ones(len(M))
    row = bool(np.allclose(M @ ones, ones, rtol=0, atol=STOCHASTIC_TOLERANCE))
    column = bool(np.allclose(ones @ M, ones, rtol=0, atol=STOCHASTIC_TOLERANCE))
    nonnegative = bool((M >= 0).all())
    if nonnegative:
        irreducible: Optional[bool] = is_strongly_connected(support_graph(M))
        primitive: Optional[bool] = is_primitive(M)
    else:
        irreducible = primitive = None
    return MatrixProperties(
        row_stochastic=row and nonnegative,
        column_stochastic=column and nonnegative,
        doubly_stochastic=row and column and nonnegative,
        irreducible=irreducible,
        primitive=primitive,
    )


def gershgorin_discs(M: SquareMatrix) -> List[Tuple[float, float]]:
    """(center, radius) of each row's Gershgorin disc"""
    M = np.asarray(M, dtype=float)
    radii = np.abs(M).sum(axis=1) - np.abs(M.diagonal())
    return list(zip(M.diagonal().tolist(), radii.tolist()))


def gershgorin_bound(M: SquareMatrix) -> float:
    """largest eigenvalue modulus admitted by the Gershgorin discs"""
    return max((abs(c) + r for c, r in gershgorin_discs(M)), default=0.0)


def spectral_radius_estimate(M: SquareMatrix, power: int = 64) -> float:
    """Gelfand estimate ||M^p||_inf^(1/p), an upper bound of the spectral radius

    ``power`` is rounded up to a power of two and reached by squaring; the
    infinity norm keeps the estimate at one for stochastic matrices.
    """
    M = np.asarray(M, dtype=float)
    result, exponent = M, 1
    while exponent < power:
        result = result @ result
        exponent *= 2
        scale = np.abs(result).sum(axis=1).max()
        if scale == 0:
            return 0.0
    return float(np.abs(result).sum(axis=1).max() ** (1 / exponent))


def dump_matrix(M: SquareMatrix, stream: TextIO) -> None:
    """the order, then one space separated line per row"""
    M = np.asarray(M, dtype=float)
    stream.write("%d\n" % len(M))
    for row in M:
        stream.write(" ".join(repr(float(value)) for value in row) + "\n")


def load_matrix(stream: TextIO) -> SquareMatrix:
    order = int(stream.readline())
    rows = [stream.readline().split() for _ in range(order)]
    return np.array(rows, dtype=float).reshape(order, order)
