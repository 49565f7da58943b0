import itertools
from collections import Counter

import numpy as np
import pytest

from lossy_toric.lattice import (EdgeId, Orientation, PlaquetteId, StarId, TorusSize, boundary,
                                 edge_from_index, edge_index, edges_of_plaquette, edges_of_star,
                                 lattice_arrays, plaquettes_of_edge)


def all_edges(L):
    return [edge_from_index(i, L) for i in range(2 * L * L)]


def all_plaquettes(L):
    return [PlaquetteId(x, y) for y in range(L) for x in range(L)]


def test_size_validation():
    with pytest.raises(ValueError):
        TorusSize.of(1)
    assert TorusSize.of(4).n_edges == 32


def test_edges_of_plaquette_distinct_and_adjacent():
    es = edges_of_plaquette(PlaquetteId(0, 0), 4)
    assert len(set(es)) == 4
    for e in es:
        assert PlaquetteId(0, 0) in plaquettes_of_edge(e, 4)


@pytest.mark.parametrize("L", [2, 3, 4])
def test_every_edge_in_two_plaquettes(L):
    counts = Counter(e for p in all_plaquettes(L) for e in edges_of_plaquette(p, L))
    assert len(counts) == 2 * L * L
    assert set(counts.values()) == {2}


def test_product_of_all_plaquettes_is_identity():
    arr = lattice_arrays(5)
    par = np.zeros(2 * 25, dtype=int)
    for row in arr.plaquette_edges:
        par[row] ^= 1
    assert not par.any()


def test_plaquettes_of_edge_examples():
    a, b = plaquettes_of_edge(EdgeId(1, 1, Orientation.HORIZONTAL), 4)
    assert a.x == b.x and (a.y - b.y) % 4 == 1
    a, b = plaquettes_of_edge(EdgeId(0, 0, Orientation.VERTICAL), 2)
    assert a != b


def test_round_trip_adjacency_L3():
    L = 3
    for e in all_edges(L):
        for p in all_plaquettes(L):
            assert (e in edges_of_plaquette(p, L)) == (p in plaquettes_of_edge(e, L))


def test_edges_of_star():
    assert len(set(edges_of_star(StarId(0, 0), 4))) == 4
    L = 3
    counts = Counter(e for y in range(L) for x in range(L) for e in edges_of_star(StarId(x, y), L))
    assert set(counts.values()) == {2} and len(counts) == 2 * L * L


def test_star_plaquette_overlap_even_L4():
    L = 4
    for p in all_plaquettes(L):
        pe = set(edges_of_plaquette(p, L))
        for x, y in itertools.product(range(L), repeat=2):
            assert len(pe & set(edges_of_star(StarId(x, y), L))) in (0, 2)


@pytest.mark.parametrize("shift", [(1, 0), (0, 1)])
def test_translation_preserves_adjacency(shift):
    L = 4
    for p in all_plaquettes(L):
        q = PlaquetteId((p.x + shift[0]) % L, (p.y + shift[1]) % L)
        moved = {EdgeId((e.x + shift[0]) % L, (e.y + shift[1]) % L, e.orientation)
                 for e in edges_of_plaquette(p, L)}
        assert moved == set(edges_of_plaquette(q, L))


def test_dense_index_round_trip():
    L = 5
    for i in range(2 * L * L):
        assert edge_index(edge_from_index(i, L), L) == i
    assert edge_index(EdgeId(2, 3, Orientation.VERTICAL), L) == L * L + 3 * L + 2


def test_array_tables_match_functions():
    L = 4
    arr = lattice_arrays(L)
    for i, e in enumerate(all_edges(L)):
        a, b = plaquettes_of_edge(e, L)
        assert tuple(arr.edge_plaquettes[i]) == (a.y * L + a.x, b.y * L + b.x)


def test_boundary_of_single_edge():
    m = np.zeros(2 * 16, dtype=bool)
    m[edge_index(EdgeId(1, 2, Orientation.HORIZONTAL), 4)] = True
    assert set(np.flatnonzero(boundary(m, 4))) == {2 * 4 + 1, 1 * 4 + 1}
