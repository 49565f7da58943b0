import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lossy_toric.lattice import EdgeId, Orientation, TorusSize, edge_index
from lossy_toric.loss_structure import (build_degraded_graph, build_partition, build_restored_lattice,
                                        edge_weight, loss_recoverable, parity_probability,
                                        restored_lattice)
from oracles import components_bfs, fig2_config, odd_parity_brute, region_windings_cover


def lost_mask(draw_bits, L):
    return np.array(draw_bits, dtype=bool)[: 2 * L * L]


masks = st.integers(2, 7).flatmap(
    lambda L: st.tuples(st.just(L), st.lists(st.booleans(), min_size=2 * L * L, max_size=2 * L * L)))


def test_no_loss_gives_singletons():
    part = build_partition(np.zeros(2 * 25, bool), TorusSize.of(5))
    assert np.array_equal(part.label, np.arange(25))
    assert loss_recoverable(part)


def test_fig2_superplaquettes():
    c = fig2_config()
    L = c["L"]
    part = build_partition(c["lost"], TorusSize.of(L))
    assert part.label[c["A"]] == part.label[c["B"]] == c["AB"]
    assert part.label[c["C"]] == part.label[c["D"]] == c["CD"]
    assert len(part.regions) == L * L - 2
    graph = build_degraded_graph(part, c["lost"], 0.1, TorusSize.of(L))
    se = [s for s in graph if set(s.endpoints) == {c["AB"], c["CD"]}]
    assert len(se) == 1
    assert se[0].n_shared == 2 and set(se[0].member_edges) == set(c["shared"])
    # p_l for two shared qubits: p(1-p) + (1-p)p
    assert math.isclose(se[0].probability, 2 * 0.1 * 0.9, rel_tol=1e-12)
    w = restored_lattice(part, c["lost"], 0.1).weight
    assert w[c["q3"]] == 0 and w[c["q_cd"]] == 0
    assert w[c["shared"][0]] == w[c["shared"][1]] == pytest.approx(edge_weight(0.18))


def test_internal_surviving_edges_weigh_zero():
    L = 4
    lost = np.zeros(2 * L * L, bool)
    # ring of three lost edges around a corner leaves the fourth internal
    H, V = Orientation.HORIZONTAL, Orientation.VERTICAL
    # plaquettes (0,0),(1,0),(1,1),(0,1): joined by V(1,0), H(1,1), V(1,1); H(0,1) survives inside
    for e in (EdgeId(1, 0, V), EdgeId(1, 1, H), EdgeId(1, 1, V)):
        lost[edge_index(e, L)] = True
    part = build_partition(lost, TorusSize.of(L))
    inner = edge_index(EdgeId(0, 1, H), L)
    assert len(part.regions[0]) == 4
    assert restored_lattice(part, lost, 0.1).weight[inner] == 0
    assert all(inner not in s.member_edges for s in build_degraded_graph(part, lost, 0.1, TorusSize.of(L)))


def test_full_row_of_vertical_losses_wraps():
    L = 5
    lost = np.zeros(2 * L * L, bool)
    for x in range(L):
        lost[edge_index(EdgeId(x, 2, Orientation.VERTICAL), L)] = True
    part = build_partition(lost, TorusSize.of(L))
    assert part.region_wraps(part.label[2 * L]) == (True, False)
    assert not loss_recoverable(part)


def test_two_edge_loop_on_smallest_torus_winds():
    # on L=2 two parallel edges already close a cycle around the torus
    L = 2
    lost = np.zeros(8, bool)
    lost[edge_index(EdgeId(0, 0, Orientation.HORIZONTAL), L)] = True
    lost[edge_index(EdgeId(0, 1, Orientation.HORIZONTAL), L)] = True
    part = build_partition(lost, TorusSize.of(L))
    assert part.region_wraps(0) == (False, True)


@settings(max_examples=300, deadline=None)
@given(masks)
def test_partition_matches_bfs_and_cover_oracle(case):
    L, bits = case
    lost = lost_mask(bits, L)
    part = build_partition(lost, TorusSize.of(L))
    assert np.array_equal(part.label, components_bfs(lost, L))
    oracle = region_windings_cover(lost, L)
    for rep in part.representatives:
        assert part.region_wraps(int(rep)) == oracle[int(rep)]


@settings(max_examples=200, deadline=None)
@given(masks)
def test_regions_partition_all_plaquettes(case):
    L, bits = case
    part = build_partition(lost_mask(bits, L), TorusSize.of(L))
    members = np.sort(np.concatenate(list(part.regions.values())))
    assert np.array_equal(members, np.arange(L * L))


@pytest.mark.parametrize("p", [0.01, 0.1, 0.3, 0.49])
def test_parity_probability_small_cases(p):
    assert parity_probability(1, p) == pytest.approx(p, abs=1e-15)
    assert parity_probability(2, p) == pytest.approx(2 * p * (1 - p), abs=1e-15)
    assert parity_probability(0, p) == 0


def test_parity_probability_limits():
    assert parity_probability(7, 0.5) == pytest.approx(0.5)
    ns = np.arange(1, 40)
    vals = parity_probability(ns, 0.1)
    assert np.all(np.diff(vals) > 0) and vals[-1] < 0.5


@pytest.mark.parametrize("n", [1, 3, 9, 30])
def test_parity_probability_vs_brute(n):
    for p in np.linspace(0.01, 0.49, 13):
        assert abs(parity_probability(n, p) - odd_parity_brute(n, p)) < 1e-12


def test_edge_weight_values():
    assert edge_weight(0.5) == 0
    assert math.exp(2 * edge_weight(0.1)) == pytest.approx(9.0)
    with pytest.raises(ValueError):
        edge_weight(0.0)
    with pytest.raises(ValueError):
        edge_weight(0.6)


def test_restored_needs_positive_pcom():
    part = build_partition(np.zeros(8, bool), TorusSize.of(2))
    with pytest.raises(ValueError):
        restored_lattice(part, np.zeros(8, bool), 0.0)
    graph = build_degraded_graph(part, np.zeros(8, bool), 0.0, TorusSize.of(2))
    with pytest.raises(ValueError):
        build_restored_lattice(part, graph, TorusSize.of(2))


def test_no_loss_restored_is_uniform():
    L = 6
    part = build_partition(np.zeros(2 * L * L, bool), TorusSize.of(L))
    w = restored_lattice(part, np.zeros(2 * L * L, bool), 0.1).weight
    assert np.allclose(w, edge_weight(0.1))


@pytest.mark.parametrize("seed", range(20))
def test_vectorised_restored_matches_graph_route(seed):
    rng = np.random.default_rng(seed)
    L = int(rng.integers(3, 9))
    lost = rng.random(2 * L * L) < rng.uniform(0, 0.5)
    size = TorusSize.of(L)
    part = build_partition(lost, size)
    a = restored_lattice(part, lost, 0.07).weight
    b = build_restored_lattice(part, build_degraded_graph(part, lost, 0.07, size), size).weight
    assert np.allclose(a, b, rtol=0, atol=1e-14)


def test_row_of_horizontal_losses_only_pairs_plaquettes():
    # horizontal edges separate vertically stacked plaquettes: a row of them
    # merges L vertical pairs and winds nowhere
    L = 4
    lost = np.zeros(2 * L * L, bool)
    for x in range(L):
        lost[edge_index(EdgeId(x, 1, Orientation.HORIZONTAL), L)] = True
    part = build_partition(lost, TorusSize.of(L))
    assert sorted(len(m) for m in part.regions.values()) == [1] * (L * L - 2 * L) + [2] * L
    assert loss_recoverable(part)


def test_winding_row_not_recoverable_by_primal_search():
    from oracles import surviving_homology_rank
    L = 4
    lost = np.zeros(2 * L * L, bool)
    for x in range(L):
        lost[edge_index(EdgeId(x, 1, Orientation.VERTICAL), L)] = True
    assert not loss_recoverable(build_partition(lost, TorusSize.of(L)))
    assert surviving_homology_rank(lost, L) == 1


def test_no_loss_superedges_are_single_qubits():
    L = 5
    lost = np.zeros(2 * L * L, bool)
    graph = build_degraded_graph(build_partition(lost, TorusSize.of(L)), lost, 0.07, TorusSize.of(L))
    assert len(graph) == 2 * L * L
    assert all(se.n_shared == 1 and se.probability == pytest.approx(0.07) for se in graph)


@pytest.mark.parametrize("seed", range(10))
def test_edge_conservation_count(seed):
    rng = np.random.default_rng(seed)
    L = 8
    lost = rng.random(2 * L * L) < 0.35
    part = build_partition(lost, TorusSize.of(L))
    graph = build_degraded_graph(part, lost, 0.1, TorusSize.of(L))
    rl = restored_lattice(part, lost, 0.1)
    shared = sum(se.n_shared for se in graph)
    assert shared + int(rl.internal.sum()) + int(lost.sum()) == 2 * L * L


def test_edge_weight_monotone():
    assert edge_weight(0.05) > edge_weight(0.1) > edge_weight(0.3)
    assert parity_probability(3, 0.0) == 0
