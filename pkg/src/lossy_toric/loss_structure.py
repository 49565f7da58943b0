"""Superplaquettes, the degraded superedge graph and the restored lattice.

Plaquettes joined by a lost edge are merged into one superplaquette
(union-find). Every merge records the displacement between the two
plaquette centres in the universal cover, so a merge that closes a cycle
exposes its winding number around the torus directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from .lattice import TorusSize, lattice_arrays


@nb.njit(cache=True)
def _find(parent, off, a):
    # Returns the root of ``a`` and compresses the path; ``off`` holds the
    # displacement of each node relative to its parent.
    root = a
    ox = 0
    oy = 0
    while parent[root] != root:
        ox += off[root, 0]
        oy += off[root, 1]
        root = parent[root]
    node = a
    while parent[node] != root:
        nxt = parent[node]
        nx = ox - off[node, 0]
        ny = oy - off[node, 1]
        off[node, 0] = ox
        off[node, 1] = oy
        parent[node] = root
        ox = nx
        oy = ny
        node = nxt
    return root


@nb.njit(cache=True)
def _partition_kernel(L, lost, edge_plaquettes, edge_step):
    n = L * L
    parent = np.arange(n)
    off = np.zeros((n, 2), dtype=np.int64)
    rank = np.zeros(n, dtype=np.int64)
    wrap = np.zeros((n, 2), dtype=np.bool_)
    for e in range(lost.shape[0]):
        if not lost[e]:
            continue
        a = edge_plaquettes[e, 0]
        b = edge_plaquettes[e, 1]
        ra = _find(parent, off, a)
        rb = _find(parent, off, b)
        # roots carry zero offset, so this is pos(rb) - pos(ra) when b sits at a + step
        dx = off[a, 0] + edge_step[e, 0] - off[b, 0]
        dy = off[a, 1] + edge_step[e, 1] - off[b, 1]
        if ra == rb:
            # closed cycle: nonzero d is a multiple of L
            if (dx // L) % 2 != 0:
                wrap[ra, 0] = True
            if (dy // L) % 2 != 0:
                wrap[ra, 1] = True
            continue
        if rank[ra] < rank[rb]:
            parent[ra] = rb
            off[ra, 0] = -dx
            off[ra, 1] = -dy
            wrap[rb, 0] |= wrap[ra, 0]
            wrap[rb, 1] |= wrap[ra, 1]
        else:
            parent[rb] = ra
            off[rb, 0] = dx
            off[rb, 1] = dy
            wrap[ra, 0] |= wrap[rb, 0]
            wrap[ra, 1] |= wrap[rb, 1]
            if rank[ra] == rank[rb]:
                rank[ra] += 1
    # canonical labels: smallest plaquette index of each region
    label = np.empty(n, dtype=np.int64)
    rep = np.full(n, -1, dtype=np.int64)
    wrap_out = np.zeros((n, 2), dtype=np.bool_)
    for p in range(n):
        r = _find(parent, off, p)
        if rep[r] < 0:
            rep[r] = p
            wrap_out[p, 0] = wrap[r, 0]
            wrap_out[p, 1] = wrap[r, 1]
        label[p] = rep[r]
    return label, wrap_out


@dataclass(frozen=True)
class SuperplaquettePartition:
    """Region labels of every fine plaquette.

    ``label[p]`` is the smallest plaquette index in p's superplaquette (its
    representative); ``wraps[r]`` flags odd winding in (x, y) for a
    representative ``r`` and is all-False for non-representatives.
    ``lost`` is the loss mask the partition was built from.
    """

    L: int
    label: np.ndarray
    wraps: np.ndarray
    lost: np.ndarray = None
    _regions: dict = field(default=None, repr=False, compare=False)

    @property
    def representatives(self) -> np.ndarray:
        return np.flatnonzero(self.label == np.arange(self.label.size))

    @property
    def regions(self) -> dict[int, np.ndarray]:
        if self._regions is None:
            order = np.argsort(self.label, kind="stable")
            reps, starts = np.unique(self.label[order], return_index=True)
            groups = np.split(order, starts[1:])
            object.__setattr__(self, "_regions", dict(zip(reps.tolist(), groups)))
        return self._regions

    def region_wraps(self, rep: int) -> tuple[bool, bool]:
        return bool(self.wraps[rep, 0]), bool(self.wraps[rep, 1])


def build_partition(lost: np.ndarray, size: TorusSize) -> SuperplaquettePartition:
    arr = lattice_arrays(size.L)
    lost = np.ascontiguousarray(lost, dtype=np.bool_)
    label, wraps = _partition_kernel(size.L, lost, arr.edge_plaquettes, arr.edge_step)
    lost = lost.copy()
    lost.flags.writeable = False
    return SuperplaquettePartition(size.L, label, wraps, lost)


def loss_recoverable(partition: SuperplaquettePartition) -> bool:
    """True iff no superplaquette winds around the torus."""
    return not bool(partition.wraps.any())


def parity_probability(n_shared, p_com):
    """Probability of an odd number of flips among ``n_shared`` qubits."""
    return (1.0 - (1.0 - 2.0 * np.asarray(p_com, dtype=float)) ** n_shared) / 2.0


def edge_weight(p_edge: float) -> float:
    """Matching weight J with exp(2J) = 1/p - 1."""
    if not 0.0 < p_edge <= 0.5:
        raise ValueError(f"edge probability must lie in (0, 0.5], got {p_edge}")
    return 0.5 * math.log(1.0 / p_edge - 1.0)


@dataclass(frozen=True)
class Superedge:
    endpoints: tuple[int, int]
    n_shared: int
    member_edges: tuple[int, ...]
    probability: float
    weight: float


def _cross_edges(partition: SuperplaquettePartition, lost: np.ndarray):
    """Surviving edges joining two different regions, keyed by region pair."""
    arr = lattice_arrays(partition.L)
    ends = partition.label[arr.edge_plaquettes]
    lo = ends.min(axis=1)
    hi = ends.max(axis=1)
    cross = np.flatnonzero(~np.asarray(lost, dtype=bool) & (lo != hi))
    keys = lo[cross] * (partition.L ** 2) + hi[cross]
    uniq, inv, counts = np.unique(keys, return_inverse=True, return_counts=True)
    return cross, uniq, inv, counts


def build_degraded_graph(partition: SuperplaquettePartition, lost: np.ndarray,
                         p_com: float, size: TorusSize) -> list[Superedge]:
    """One superedge per pair of regions sharing at least one surviving edge.

    Surviving edges with both sides in the same region are not part of the
    graph: flipping them never changes a measurable syndrome.
    """
    cross, uniq, inv, counts = _cross_edges(partition, lost)
    n_p = size.n_plaquettes
    members = [[] for _ in range(uniq.size)]
    for e, k in zip(cross.tolist(), inv.tolist()):
        members[k].append(e)
    out = []
    for k, key in enumerate(uniq.tolist()):
        n = int(counts[k])
        p = float(parity_probability(n, p_com))
        out.append(Superedge((key // n_p, key % n_p), n, tuple(members[k]), p,
                             edge_weight(p) if p > 0 else math.inf))
    return out


@dataclass(frozen=True)
class RestoredLattice:
    """Per-fine-edge weights; zero for lost and region-internal edges.

    ``internal`` marks surviving edges with both sides in one region. They
    weigh zero like lost edges but path searches skip them: a flip there is
    invisible to every stabiliser, so a correction has no business applying
    one, and lost edges already connect each region at zero cost.
    """

    L: int
    weight: np.ndarray
    internal: np.ndarray = None


def build_restored_lattice(partition: SuperplaquettePartition, superedges: list[Superedge],
                           size: TorusSize) -> RestoredLattice:
    w = np.zeros(size.n_edges)
    for se in superedges:
        if not math.isfinite(se.weight):
            raise ValueError("superedge with zero error probability; p_com must be > 0")
        w[list(se.member_edges)] = se.weight
    return RestoredLattice(size.L, w, _internal(partition))


def restored_lattice(partition: SuperplaquettePartition, lost: np.ndarray,
                     p_com: float) -> RestoredLattice:
    """Vectorised equivalent of ``build_restored_lattice(build_degraded_graph(...))``."""
    if not 0.0 < p_com < 0.5:
        raise ValueError(f"decoding weights need 0 < p_com < 0.5, got {p_com}")
    cross, _, inv, counts = _cross_edges(partition, lost)
    p = parity_probability(counts, p_com)
    j = 0.5 * np.log(1.0 / p - 1.0)
    w = np.zeros(2 * partition.L ** 2)
    w[cross] = j[inv]
    return RestoredLattice(partition.L, w, _internal(partition))


def _internal(partition: SuperplaquettePartition) -> np.ndarray:
    ends = partition.label[lattice_arrays(partition.L).edge_plaquettes]
    return (ends[:, 0] == ends[:, 1]) & ~partition.lost
