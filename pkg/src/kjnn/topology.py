"""Topology builders: symmetric k-NN, symmetric (k,j)-NN, RGG and the (k,j)-NN-RGG composite.

Two readings of the (k,j) removal step are provided:

``"per-node"`` (default)
    Every node drops its own j-1 shortest links and keeps the links to its
    neighbors at ranks j..k. An edge survives if either endpoint keeps it.
    This is the reading that reproduces the published average degrees.

``"mutual"``
    Start from the symmetric k-NN graph and delete ``{u, v}`` only when both
    endpoints have each other among their j-1 nearest.

Both agree on every small hand-checked fixture; they differ when ``v`` is
among ``u``'s j-1 nearest while ``u`` is not in ``v``'s k-list at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import NeighborRanking, PointCloud, UndirectedGraph

REMOVAL_RULES = ("per-node", "mutual")


@dataclass(frozen=True)
class TopologyParams:
    k: int
    j: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 1 <= self.j < self.k:
            raise ValueError(f"need 1 <= j < k, got k={self.k}, j={self.j}")


@dataclass(frozen=True)
class RadiusParams:
    n: int
    k: int
    sigma: float
    xi: float
    r_n: float


def _directed(n: int, rows: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Flatten per-node target lists into parallel (source, target) arrays."""
    lengths = [len(r) for r in rows]
    src = np.repeat(np.arange(n), lengths)
    dst = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    return src, dst.astype(np.int64)


def _assemble(n, cand, marks, removal) -> UndirectedGraph:
    """Symmetrize per-node candidate links, applying the removal rule to ``marks``.

    ``cand`` and ``marks`` are (source, target) arrays; ``marks`` must be a
    subset of ``cand`` for each source node.
    """
    cu, cv = cand
    mu, mv = marks
    cand_key = cu * n + cv
    mark_key = mu * n + mv
    if removal == "per-node":
        keep = ~np.isin(cand_key, mark_key)
        return UndirectedGraph(n, np.column_stack([cu[keep], cv[keep]]))
    if removal == "mutual":
        lo, hi = np.minimum(cu, cv), np.maximum(cu, cv)
        # a marked pair is mutual iff its reverse is also marked
        mutual = mark_key[np.isin(mv * n + mu, mark_key)]
        mutual = np.minimum(mutual // n, mutual % n) * n + np.maximum(mutual // n, mutual % n)
        keep = ~np.isin(lo * n + hi, mutual)
        return UndirectedGraph(n, np.column_stack([lo[keep], hi[keep]]))
    raise ValueError(f"unknown removal rule {removal!r}; expected one of {REMOVAL_RULES}")


def build_symmetric_knn(ranking: NeighborRanking, k: int) -> UndirectedGraph:
    """Edge ``{u, v}`` iff either node lists the other among its k nearest."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = ranking.n
    kk = min(k, n - 1)
    src = np.repeat(np.arange(n), kk)
    return UndirectedGraph(n, np.column_stack([src, ranking.order[:, :kk].ravel()]))


def build_symmetric_kj(
    ranking: NeighborRanking, params: TopologyParams, removal: str = "per-node"
) -> UndirectedGraph:
    """Symmetric k-NN graph with each node's j-1 shortest links removed."""
    n = ranking.n
    k, j = params.k, params.j
    order = ranking.order
    cand = _directed(n, list(order[:, :k]))
    marks = _directed(n, list(order[:, : j - 1]))
    return _assemble(n, cand, marks, removal)


def build_rgg(cloud: PointCloud, r: float) -> UndirectedGraph:
    """Random geometric graph: edge iff Euclidean distance <= r."""
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    pts = cloud.points
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))
    u, v = np.nonzero(np.triu(d <= r, k=1))
    return UndirectedGraph(cloud.n, np.column_stack([u, v]))


def build_composite(
    cloud: PointCloud,
    ranking: NeighborRanking,
    params: TopologyParams,
    r: float,
    removal: str = "per-node",
) -> UndirectedGraph:
    """(k,j)-NN-RGG: sparse nodes link to every disk neighbor, dense nodes follow (k,j).

    A node is sparse when fewer than k other nodes lie within distance ``r``.
    All resulting links have length <= r.
    """
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    if cloud.n != ranking.n:
        raise ValueError("cloud and ranking disagree on node count")
    n = ranking.n
    k, j = params.k, params.j
    kk = min(k, n - 1)
    order, dist = ranking.order, ranking.dist
    within = (dist[:, :kk] <= r).sum(axis=1)
    dense = within >= k

    cand_rows, mark_rows = [], []
    for u in range(n):
        if dense[u]:
            cand_rows.append(order[u, :k])
            mark_rows.append(order[u, : j - 1])
        else:
            # fewer than k disk neighbors, so they are exactly a prefix of the ranking
            cand_rows.append(order[u, : within[u]])
            mark_rows.append(order[u, :0])
    return _assemble(n, _directed(n, cand_rows), _directed(n, mark_rows), removal)


def _log_factorial(k: int) -> float:
    if k <= 20:
        return math.log(math.factorial(k))
    return math.lgamma(k + 1)


def radius_xi(k: int, sigma: float) -> float:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k == 1:
        inner = math.sqrt(math.exp(-sigma) + math.pi / 4) - math.sqrt(math.pi) / 2
        return -2.0 * math.log(inner)
    log_ratio = 0.5 * math.log(math.pi) - (k - 1) * math.log(2.0) - _log_factorial(k)
    return 2.0 * log_ratio + 2.0 * sigma


def critical_radius(n: int, k: int, sigma: float) -> RadiusParams:
    """Constrained transmission radius for ``n`` nodes (natural logarithms).

    r_n = sqrt((ln n + (2k - 1) ln ln n + xi) / (pi n))
    """
    if n < 3:
        raise ValueError(f"n must be >= 3 so that ln ln n > 0, got {n}")
    xi = radius_xi(k, sigma)
    radicand = (math.log(n) + (2 * k - 1) * math.log(math.log(n)) + xi) / (math.pi * n)
    if radicand <= 0:
        raise ValueError(f"radius formula undefined for n={n}, k={k}, sigma={sigma}: radicand {radicand:.6g} <= 0")
    return RadiusParams(n=n, k=k, sigma=sigma, xi=xi, r_n=math.sqrt(radicand))
