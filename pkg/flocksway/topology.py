"""neighbor digraphs over the flock and their connectivity predicates

Graphs are immutable values built from positions; the switching signal is
implicit, a new graph is simply built whenever positions are re-read.
"""

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .error import InvalidArgumentError
from .model import FlockState, Role

Edge = Tuple[int, int]


class Scope(enum.Enum):
    FLOCKING_ONLY = "FlockingOnly"
    ALL = "All"


@dataclass(frozen=True, eq=False)
class NeighborGraph:
    """a simple digraph; ``mask[i, j]`` is true iff (i, j) is an edge

    ``vertex_ids`` maps local vertex indices back to agent ids, which only
    differ from ``range(vertex_count)`` for induced subgraphs.
    """

    mask: np.ndarray
    vertex_roles: Tuple[Role, ...]
    timestamp: int = 0
    vertex_ids: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
            raise InvalidArgumentError("adjacency mask must be square")
        if mask.diagonal().any():
            raise InvalidArgumentError("neighbor graphs have no self-loops")
        if len(self.vertex_roles) != mask.shape[0]:
            raise InvalidArgumentError("one role per vertex is required")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)
        if not self.vertex_ids:
            object.__setattr__(self, "vertex_ids", tuple(range(mask.shape[0])))

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[Edge],
        roles: Optional[Sequence[Role]] = None,
        timestamp: int = 0,
        symmetric: bool = False,
    ) -> "NeighborGraph":
        mask = np.zeros((vertex_count, vertex_count), dtype=bool)
        for i, j in edges:
            if i == j:
                raise InvalidArgumentError("self-loop on vertex %d" % i)
            mask[i, j] = True
            if symmetric:
                mask[j, i] = True
        roles = tuple(roles) if roles is not None else (Role.FLOCKING,) * vertex_count
        return cls(mask, roles, timestamp)

    @property
    def vertex_count(self) -> int:
        return self.mask.shape[0]

    @cached_property
    def edges(self) -> FrozenSet[Edge]:
        return frozenset(zip(*(axis.tolist() for axis in np.nonzero(self.mask))))

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return self.mask.sum(axis=1)

    @cached_property
    def in_degrees(self) -> np.ndarray:
        return self.mask.sum(axis=0)

    @property
    def max_degree(self) -> int:
        return int(self.out_degrees.max()) if self.vertex_count else 0

    def neighbors(self, vertex: int) -> List[int]:
        return np.flatnonzero(self.mask[vertex]).tolist()

    def counts(self, vertex: int) -> Tuple[int, int]:
        """(k_i, m_i): flocking and influencing neighbors of a vertex, self excluded"""
        roles = [self.vertex_roles[j] for j in self.neighbors(vertex)]
        return roles.count(Role.FLOCKING), roles.count(Role.INFLUENCING)


def build_neighbor_graph(state: FlockState, scope: Scope, R: float) -> NeighborGraph:
    """agents within the closed disc of radius R see each other"""
    count = state.k if scope is Scope.FLOCKING_ONLY else state.n
    positions = state.positions[:count]
    offsets = positions[:, None, :] - positions[None, :, :]
    squared = np.einsum("ijk,ijk->ij", offsets, offsets)
    mask = squared <= R * R
    np.fill_diagonal(mask, False)
    return NeighborGraph(mask, state.roles[:count], state.step)


class UnionFind:
    """disjoint sets with path compression and union by size"""

    def __init__(self, size: int):
        self.parents = list(range(size))
        self.sizes = [1] * size

    def find(self, element: int) -> int:
        root = element
        while root != self.parents[root]:
            root = self.parents[root]
        while element != root:
            self.parents[element], element = root, self.parents[element]
        return root

    def union(self, a: int, b: int) -> None:
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return
        if self.sizes[root_a] < self.sizes[root_b]:
            root_a, root_b = root_b, root_a
        self.parents[root_b] = root_a
        self.sizes[root_a] += self.sizes[root_b]


def connected_components(g: NeighborGraph) -> List[Tuple[int, ...]]:
    """weak components, each sorted, ordered by their smallest member"""
    sets = UnionFind(g.vertex_count)
    for i, j in zip(*np.nonzero(g.mask)):
        sets.union(int(i), int(j))
    blocks = {}
    for vertex in range(g.vertex_count):
        blocks.setdefault(sets.find(vertex), []).append(vertex)
    return sorted((tuple(block) for block in blocks.values()), key=lambda b: b[0])


def _reachable(mask: np.ndarray, source: int) -> np.ndarray:
    seen = np.zeros(mask.shape[0], dtype=bool)
    seen[source] = True
    frontier = [source]
    while frontier:
        vertex = frontier.pop()
        fresh = mask[vertex] & ~seen
        seen |= fresh
        frontier.extend(np.flatnonzero(fresh).tolist())
    return seen


def is_strongly_connected(g: NeighborGraph) -> bool:
    if g.vertex_count <= 1:
        return True
    return bool(_reachable(g.mask, 0).all() and _reachable(g.mask.T, 0).all())


def is_balanced(g: NeighborGraph) -> bool:
    return bool(np.array_equal(g.in_degrees, g.out_degrees))


def is_symmetric(g: NeighborGraph) -> bool:
    return bool(np.array_equal(g.mask, g.mask.T))


def induced_subgraph(g: NeighborGraph, vertices: Sequence[int]) -> NeighborGraph:
    vertices = list(vertices)
    if len(set(vertices)) != len(vertices):
        raise InvalidArgumentError("induced subgraph vertices must be distinct")
    index = np.array(vertices, dtype=int)
    return NeighborGraph(
        g.mask[np.ix_(index, index)],
        tuple(g.vertex_roles[v] for v in vertices),
        g.timestamp,
        tuple(g.vertex_ids[v] for v in vertices),
    )


def union_graphs(gs: Sequence[NeighborGraph]) -> NeighborGraph:
    gs = list(gs)
    if not gs:
        raise InvalidArgumentError("cannot unite an empty collection of graphs")
    first = gs[0]
    mask = np.zeros_like(first.mask)
    for g in gs:
        if g.vertex_ids != first.vertex_ids:
            raise InvalidArgumentError("graphs must share the same vertex set")
        mask |= g.mask
    return NeighborGraph(
        mask, first.vertex_roles, max(g.timestamp for g in gs), first.vertex_ids
    )


def is_jointly_connected(gs: Sequence[NeighborGraph]) -> bool:
    return len(connected_components(union_graphs(gs))) == 1


def linked_together(
    snapshots: Sequence[NeighborGraph], component: Sequence[int]
) -> bool:
    """whether the component stays jointly connected over the snapshot interval"""
    if not snapshots:
        raise InvalidArgumentError("the time interval holds no snapshots")
    return is_jointly_connected([induced_subgraph(g, component) for g in snapshots])


def dump_edge_list(g: NeighborGraph, stream: TextIO) -> None:
    """one "i j" line per edge, sorted"""
    for i, j in sorted(g.edges):
        stream.write("{} {}\n".format(g.vertex_ids[i], g.vertex_ids[j]))
