"""Geometry of the periodic L x L square lattice carrying the toric code.

Conventions (inherited by every other module):

* Plaquette ``(x, y)`` is the face with lower-left corner at vertex ``(x, y)``.
* Horizontal edge ``(x, y)`` runs from vertex ``(x, y)`` to ``(x+1, y)`` and
  separates plaquettes ``(x, y)`` and ``(x, y-1)``.
* Vertical edge ``(x, y)`` runs from vertex ``(x, y)`` to ``(x, y+1)`` and
  separates plaquettes ``(x, y)`` and ``(x-1, y)``.
* Star ``(x, y)`` is the set of four edges meeting at vertex ``(x, y)``.

All coordinates are reduced mod L. Dense indices are
``orientation * L**2 + y * L + x`` for edges and ``y * L + x`` for
plaquettes and stars.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from typing import NamedTuple

import numpy as np


class Orientation(enum.IntEnum):
    HORIZONTAL = 0
    VERTICAL = 1


class TorusSize(NamedTuple):
    L: int

    @classmethod
    def of(cls, L: int) -> "TorusSize":
        if int(L) != L or L < 2:
            raise ValueError(f"lattice size must be an integer >= 2, got {L!r}")
        return cls(int(L))

    @property
    def n_edges(self) -> int:
        return 2 * self.L * self.L

    @property
    def n_plaquettes(self) -> int:
        return self.L * self.L


class EdgeId(NamedTuple):
    x: int
    y: int
    orientation: Orientation


class PlaquetteId(NamedTuple):
    x: int
    y: int


class StarId(NamedTuple):
    x: int
    y: int


def _size(size: TorusSize | int) -> TorusSize:
    return size if isinstance(size, TorusSize) else TorusSize.of(size)


def edge_index(e: EdgeId, size: TorusSize | int) -> int:
    L = _size(size).L
    return int(e.orientation) * L * L + (e.y % L) * L + (e.x % L)


def edge_from_index(i: int, size: TorusSize | int) -> EdgeId:
    L = _size(size).L
    o, rem = divmod(int(i), L * L)
    y, x = divmod(rem, L)
    return EdgeId(x, y, Orientation(o))


def plaquette_index(p: PlaquetteId, size: TorusSize | int) -> int:
    L = _size(size).L
    return (p.y % L) * L + (p.x % L)


def plaquette_from_index(i: int, size: TorusSize | int) -> PlaquetteId:
    L = _size(size).L
    y, x = divmod(int(i), L)
    return PlaquetteId(x, y)


def edges_of_plaquette(p: PlaquetteId, size: TorusSize | int) -> list[EdgeId]:
    """Bottom, top, left and right edges of face ``p``."""
    L = _size(size).L
    x, y = p.x % L, p.y % L
    return [
        EdgeId(x, y, Orientation.HORIZONTAL),
        EdgeId(x, (y + 1) % L, Orientation.HORIZONTAL),
        EdgeId(x, y, Orientation.VERTICAL),
        EdgeId((x + 1) % L, y, Orientation.VERTICAL),
    ]


def plaquettes_of_edge(e: EdgeId, size: TorusSize | int) -> tuple[PlaquetteId, PlaquetteId]:
    """The two faces bordered by ``e``; the first one has the same coordinates."""
    L = _size(size).L
    x, y = e.x % L, e.y % L
    if e.orientation == Orientation.HORIZONTAL:
        return PlaquetteId(x, y), PlaquetteId(x, (y - 1) % L)
    return PlaquetteId(x, y), PlaquetteId((x - 1) % L, y)


def edges_of_star(s: StarId, size: TorusSize | int) -> list[EdgeId]:
    L = _size(size).L
    x, y = s.x % L, s.y % L
    return [
        EdgeId(x, y, Orientation.HORIZONTAL),
        EdgeId((x - 1) % L, y, Orientation.HORIZONTAL),
        EdgeId(x, y, Orientation.VERTICAL),
        EdgeId(x, (y - 1) % L, Orientation.VERTICAL),
    ]


class LatticeArrays(NamedTuple):
    """Array-backed adjacency for inner loops.

    edge_plaquettes[e] = (p0, p1) as in :func:`plaquettes_of_edge`;
    edge_step[e] = displacement (dx, dy) from p0 to p1 in the universal cover;
    plaquette_edges[p] = dense edges of :func:`edges_of_plaquette`;
    plaquette_neighbours[p, k] = plaquette across plaquette_edges[p, k].
    """

    L: int
    edge_plaquettes: np.ndarray
    edge_step: np.ndarray
    plaquette_edges: np.ndarray
    plaquette_neighbours: np.ndarray
    cut_x: np.ndarray
    cut_y: np.ndarray


@lru_cache(maxsize=64)
def lattice_arrays(L: int) -> LatticeArrays:
    size = TorusSize.of(L)
    n_e, n_p = size.n_edges, size.n_plaquettes
    edge_plaquettes = np.empty((n_e, 2), dtype=np.int64)
    edge_step = np.empty((n_e, 2), dtype=np.int64)
    for i in range(n_e):
        e = edge_from_index(i, size)
        a, b = plaquettes_of_edge(e, size)
        edge_plaquettes[i] = plaquette_index(a, size), plaquette_index(b, size)
        edge_step[i] = (0, -1) if e.orientation == Orientation.HORIZONTAL else (-1, 0)
    plaquette_edges = np.empty((n_p, 4), dtype=np.int64)
    plaquette_neighbours = np.empty((n_p, 4), dtype=np.int64)
    for j in range(n_p):
        for k, e in enumerate(edges_of_plaquette(plaquette_from_index(j, size), size)):
            ei = edge_index(e, size)
            plaquette_edges[j, k] = ei
            p0, p1 = edge_plaquettes[ei]
            plaquette_neighbours[j, k] = p1 if p0 == j else p0
    # Logical test lines: vertical edges in column 0 and horizontal edges in row 0.
    cut_x = np.array([edge_index(EdgeId(0, y, Orientation.VERTICAL), size) for y in range(L)])
    cut_y = np.array([edge_index(EdgeId(x, 0, Orientation.HORIZONTAL), size) for x in range(L)])
    for arr in (edge_plaquettes, edge_step, plaquette_edges, plaquette_neighbours, cut_x, cut_y):
        arr.setflags(write=False)
    return LatticeArrays(L, edge_plaquettes, edge_step, plaquette_edges,
                         plaquette_neighbours, cut_x, cut_y)


def column_cut(x: int, size: TorusSize | int) -> np.ndarray:
    """Dense indices of the vertical edges in column ``x`` (a test line winding in y)."""
    L = _size(size).L
    return np.array([edge_index(EdgeId(x, y, Orientation.VERTICAL), L) for y in range(L)])


def row_cut(y: int, size: TorusSize | int) -> np.ndarray:
    L = _size(size).L
    return np.array([edge_index(EdgeId(x, y, Orientation.HORIZONTAL), L) for x in range(L)])


def boundary(edges: np.ndarray, size: TorusSize | int) -> np.ndarray:
    """Fine plaquette parities (bool array of length L**2) of an edge mask."""
    arr = lattice_arrays(_size(size).L)
    ends = arr.edge_plaquettes[np.asarray(edges, dtype=bool)]
    return (np.bincount(ends.ravel(), minlength=arr.L * arr.L) & 1).astype(bool)
