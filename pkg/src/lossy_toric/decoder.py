"""Minimum-weight matching decoder on the restored lattice."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numba as nb
import numpy as np

from .blossom import WEIGHT_SCALE, min_weight_perfect_matching_quantised, quantise
from .lattice import TorusSize, lattice_arrays
from .loss_structure import RestoredLattice


@nb.njit(cache=True)
def _dijkstra_many(sources, qweight, plaquette_edges, plaquette_neighbours):
    """Shortest paths from ``sources[s]`` to every later source.

    Integer edge weights keep equal-length comparisons exact; negative
    weights mark edges that may not be traversed. Among
    equal-distance predecessors seen before a node is settled, the one with
    the smaller dense edge index wins. Returns the k x k distance matrix and
    the k x n predecessor-edge table (-1 where unexplored).
    """
    k = sources.shape[0]
    n = plaquette_edges.shape[0]
    pos = np.full(n, -1, dtype=np.int64)
    for s in range(k):
        pos[sources[s]] = s
    dist = np.zeros((k, k), dtype=np.int64)
    pred = np.full((k, n), -1, dtype=np.int64)
    best = np.empty(n, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    big = np.int64(2 ** 62)
    for s in range(k - 1):
        best[:] = big
        done[:] = False
        src = sources[s]
        best[src] = 0
        heap = [(np.int64(0), src)]
        remaining = k - 1 - s
        while len(heap) > 0 and remaining > 0:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            t = pos[u]
            if t > s:
                dist[s, t] = d
                dist[t, s] = d
                remaining -= 1
            for j in range(4):
                e = plaquette_edges[u, j]
                v = plaquette_neighbours[u, j]
                if done[v] or qweight[e] < 0:
                    continue
                nd = d + qweight[e]
                if nd < best[v] or (nd == best[v] and e < pred[s, v]):
                    if nd < best[v]:
                        heapq.heappush(heap, (nd, v))
                    best[v] = nd
                    pred[s, v] = e
    return dist, pred


@nb.njit(cache=True)
def _walk_back(pred_row, edge_plaquettes, src, dst, out):
    """XOR the recorded path dst -> src into ``out``."""
    node = dst
    while node != src:
        e = pred_row[node]
        out[e] ^= True
        a = edge_plaquettes[e, 0]
        node = edge_plaquettes[e, 1] if a == node else a


@dataclass(frozen=True)
class DefectGraph:
    """Complete graph on defects with shortest-path distances.

    ``qdist`` holds distances in units of ``1 / WEIGHT_SCALE`` and is what
    the matcher consumes; ``dist`` is the same in weight units.
    """

    L: int
    nodes: np.ndarray
    qdist: np.ndarray
    pred: np.ndarray

    @property
    def dist(self) -> np.ndarray:
        return self.qdist / WEIGHT_SCALE

    def path(self, i: int, j: int) -> np.ndarray:
        """Dense edge indices of the recorded shortest path between nodes i and j."""
        arr = lattice_arrays(self.L)
        out = np.zeros(2 * self.L ** 2, dtype=np.bool_)
        a, b = min(i, j), max(i, j)
        _walk_back(self.pred[a], arr.edge_plaquettes, self.nodes[a], self.nodes[b], out)
        return np.flatnonzero(out)


def defect_distances(defects, restored: RestoredLattice, size: TorusSize | None = None) -> DefectGraph:
    arr = lattice_arrays(restored.L)
    nodes = np.asarray(defects, dtype=np.int64)
    assert nodes.size % 2 == 0, "odd number of defects"
    assert np.unique(nodes).size == nodes.size, "defects must be distinct"
    qw = quantise(restored.weight)
    if restored.internal is not None:
        qw[restored.internal] = -1
    dist, pred = _dijkstra_many(nodes, qw, arr.plaquette_edges, arr.plaquette_neighbours)
    return DefectGraph(restored.L, nodes, dist, pred)


def min_weight_matching(graph: DefectGraph) -> list[tuple[int, int]]:
    """Minimum total-distance perfect pairing of ``graph.nodes`` (by position)."""
    return min_weight_perfect_matching_quantised(graph.qdist)


@dataclass(frozen=True)
class CorrectionChain:
    edges: np.ndarray  # bool mask over dense edges
    total_weight: float


def correction_chain(matching: list[tuple[int, int]], graph: DefectGraph) -> CorrectionChain:
    arr = lattice_arrays(graph.L)
    out = np.zeros(2 * graph.L ** 2, dtype=np.bool_)
    total = 0
    for i, j in matching:
        a, b = min(i, j), max(i, j)
        _walk_back(graph.pred[a], arr.edge_plaquettes, graph.nodes[a], graph.nodes[b], out)
        total += int(graph.qdist[a, b])
    return CorrectionChain(out, total / WEIGHT_SCALE)


def decode(defects, restored: RestoredLattice) -> CorrectionChain:
    graph = defect_distances(defects, restored)
    return correction_chain(min_weight_matching(graph), graph)
