"""Geometric primitives: point clouds, neighbor rankings, graphs, connectivity."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class PointCloud:
    """Node positions in the unit square; node ``i`` sits at ``points[i]``."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) == 0:
            raise ValueError(f"expected a non-empty (n, 2) array, got shape {pts.shape}")
        if np.any(pts < 0.0) or np.any(pts > 1.0):
            raise ValueError("coordinates must lie in [0, 1]")
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return self.n


def sample_uniform_points(n: int, seed: int | np.random.Generator) -> PointCloud:
    """Draw ``n`` i.i.d. uniform points on ``[0, 1]^2``.

    ``seed`` is either an integer (fed to a Philox generator) or a ready
    ``numpy.random.Generator``. Exact duplicate points are redrawn.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(np.random.Philox(seed))
    pts = rng.random((n, 2))
    while True:
        _, first = np.unique(pts, axis=0, return_index=True)
        if len(first) == n:
            break
        dup = np.setdiff1d(np.arange(n), first)
        pts[dup] = rng.random((len(dup), 2))
    return PointCloud(pts)


@dataclass(frozen=True, eq=False)
class NeighborRanking:
    """Every node's other nodes sorted by distance, nearest first.

    ``order[u]`` lists the n-1 other nodes of ``u``; ``dist[u]`` holds the
    matching distances. Ties are broken by ascending node id.
    """

    order: np.ndarray
    dist: np.ndarray

    @property
    def n(self) -> int:
        return len(self.order)

    def ranked(self, u: int) -> list[int]:
        return self.order[u].tolist()

    @cached_property
    def ranks(self) -> np.ndarray:
        """``ranks[u, v]`` is the 1-based position of ``v`` in ``u``'s list (0 on the diagonal)."""
        n = self.n
        r = np.zeros((n, n), dtype=np.int64)
        if n > 1:
            r[np.arange(n)[:, None], self.order] = np.arange(1, n)[None, :]
        return _frozen(r)

    def rank(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("a node has no rank in its own list")
        return int(self.ranks[u, v])


def pairwise_rankings(cloud: PointCloud) -> NeighborRanking:
    """Brute-force O(n^2 log n) neighbor ranking under Euclidean distance."""
    pts = cloud.points
    n = cloud.n
    # squared distances keep the comparison exact enough to preserve hand-made ties
    sq = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1)
    np.fill_diagonal(sq, -1.0)
    # stable sort keeps ascending node id among equal distances; column 0 is self
    order = np.argsort(sq, axis=1, kind="stable")[:, 1:]
    dist = np.sqrt(np.take_along_axis(sq, order, axis=1))
    return NeighborRanking(_frozen(order.reshape(n, n - 1)), _frozen(dist.reshape(n, n - 1)))


@dataclass(frozen=True, eq=False)
class UndirectedGraph:
    """Simple undirected graph on nodes ``0..n-1``.

    ``edges`` is stored canonically as an ``(m, 2)`` int array with
    ``u < v`` per row, rows unique and sorted.
    """

    n: int
    edges: np.ndarray = field(default_factory=lambda: np.empty((0, 2), dtype=np.int64))

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops are not allowed")
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        e = np.unique(np.sort(e, axis=1), axis=0) if len(e) else e
        object.__setattr__(self, "edges", _frozen(e))

    @classmethod
    def from_pairs(cls, n: int, pairs) -> UndirectedGraph:
        return cls(n, np.array(list(pairs), dtype=np.int64).reshape(-1, 2))

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> UndirectedGraph:
        adj = np.asarray(adj, dtype=bool)
        u, v = np.nonzero(np.triu(adj | adj.T, k=1))
        return cls(len(adj), np.column_stack([u, v]))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(map(tuple, self.edges.tolist()))

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def __eq__(self, other):
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __repr__(self):
        return f"UndirectedGraph(n={self.n}, num_edges={self.num_edges})"


class DisjointSet:
    """Union-find over ``0..n-1`` with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True


def _union_all(g: UndirectedGraph) -> DisjointSet:
    ds = DisjointSet(g.n)
    for u, v in g.edges.tolist():
        ds.union(u, v)
    return ds


def is_connected(g: UndirectedGraph) -> bool:
    """True iff ``g`` has exactly one connected component."""
    if g.num_edges < g.n - 1:
        return False
    return _union_all(g).count == 1


def connected_components(g: UndirectedGraph) -> list[int]:
    """Component label per node; each label is the smallest node id in its component."""
    ds = _union_all(g)
    smallest: dict[int, int] = {}
    labels = []
    for u in range(g.n):
        root = ds.find(u)
        labels.append(smallest.setdefault(root, u))
    return labels


@dataclass(frozen=True)
class DegreeStats:
    mean: float
    min: int
    max: int
    histogram: dict[int, float]


def degree_stats(g: UndirectedGraph) -> DegreeStats:
    deg = g.degrees()
    values, counts = np.unique(deg, return_counts=True)
    hist = {int(d): c / g.n for d, c in zip(values.tolist(), counts.tolist())}
    return DegreeStats(
        mean=2 * g.num_edges / g.n,
        min=int(deg.min()),
        max=int(deg.max()),
        histogram=hist,
    )
