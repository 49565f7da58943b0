"""Trial success: closing E + E' inside superplaquettes and reading its winding."""

from __future__ import annotations

import enum
from typing import NamedTuple

import numba as nb
import numpy as np

from .lattice import TorusSize, boundary, lattice_arrays
from .loss_structure import SuperplaquettePartition, loss_recoverable
from .noise import ErrorSample


class HomologyClass(NamedTuple):
    wind_x: int
    wind_y: int

    @property
    def trivial(self) -> bool:
        return self.wind_x == 0 and self.wind_y == 0


class Outcome(enum.Enum):
    SUCCESS = "success"
    LOGICAL_FAILURE = "logical_failure"
    LOSS_FAILURE = "loss_failure"


#: spanning-tree strategies for :func:`close_chain`
CLOSURE_STRATEGIES = ("bfs", "dfs")


@nb.njit(cache=True)
def _close_inside_regions(label, lost, odd, plaquette_edges, plaquette_neighbours, depth_first):
    # Spanning tree of each region over its lost edges; a tree edge joins
    # the closure iff the subtree below it holds an odd number of odd plaquettes.
    n = label.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    parent_edge = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    par = odd.copy()
    add = np.zeros(2 * n, dtype=np.bool_)
    buf = np.empty(n, dtype=np.int64)
    for root in range(n):
        if seen[root] or label[root] != root:
            continue
        # frontier is a queue (bfs) or a stack (dfs) held in ``buf``
        head = 0
        tail = 1
        buf[0] = root
        seen[root] = True
        m = 0
        while tail > head:
            if depth_first:
                tail -= 1
                u = buf[tail]
            else:
                u = buf[head]
                head += 1
            order[m] = u
            m += 1
            for j in range(4):
                k = 3 - j if depth_first else j
                v = plaquette_neighbours[u, k]
                if seen[v] or not lost[plaquette_edges[u, k]]:
                    continue
                seen[v] = True
                parent[v] = u
                parent_edge[v] = plaquette_edges[u, k]
                buf[tail] = v
                tail += 1
        for i in range(m - 1, 0, -1):
            u = order[i]
            if par[u]:
                add[parent_edge[u]] = True
                par[u] = False
                par[parent[u]] = not par[parent[u]]
        if par[root]:
            return add, False
    return add, True


def close_chain(chain: np.ndarray, partition: SuperplaquettePartition,
                size: TorusSize | None = None, strategy: str = "bfs") -> np.ndarray:
    """Extend ``chain`` by lost edges until its fine boundary vanishes.

    Lost qubits carry no logical information, so routing the closure
    through them leaves the physical error untouched. Region-internal
    surviving edges are never added.

    Raises ``ValueError`` if some region carries an odd number of boundary
    plaquettes, i.e. the chain is not closed at the superplaquette level.
    """
    if strategy not in CLOSURE_STRATEGIES:
        raise ValueError(f"unknown closure strategy {strategy!r}")
    arr = lattice_arrays(partition.L)
    chain = np.asarray(chain, dtype=bool)
    odd = boundary(chain, partition.L)
    if not odd.any():
        return chain.copy()
    add, ok = _close_inside_regions(partition.label, partition.lost, odd, arr.plaquette_edges,
                                    arr.plaquette_neighbours, strategy == "dfs")
    if not ok:
        raise ValueError("chain has a nonzero boundary at the superplaquette level")
    return chain ^ add


def winding(closed: np.ndarray, size: TorusSize | int) -> HomologyClass:
    """Crossing parities with the test lines at x = 0 and y = 0."""
    L = size.L if isinstance(size, TorusSize) else int(size)
    arr = lattice_arrays(L)
    closed = np.asarray(closed, dtype=bool)
    return HomologyClass(int(closed[arr.cut_x].sum() & 1), int(closed[arr.cut_y].sum() & 1))


def trial_outcome(sample: ErrorSample, partition: SuperplaquettePartition,
                  correction: np.ndarray, size: TorusSize | None = None) -> Outcome:
    if not loss_recoverable(partition):
        return Outcome.LOSS_FAILURE
    cycle = close_chain(sample.flipped ^ np.asarray(correction, dtype=bool), partition)
    if winding(cycle, partition.L).trivial:
        return Outcome.SUCCESS
    return Outcome.LOGICAL_FAILURE
