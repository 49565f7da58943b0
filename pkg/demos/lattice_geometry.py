"""
Toric lattice geometry
======================

Qubits sit on the 2L^2 edges of an L x L torus. Each edge touches two
plaquettes and two stars, and every plaquette and star has four edges.
"""

import numpy as np

from lossy_toric import (EdgeId, Orientation, PlaquetteId, StarId, edge_index, edges_of_plaquette,
                         edges_of_star, plaquettes_of_edge)
from lossy_toric.lattice import lattice_arrays

L = 4

# a horizontal edge separates the plaquette with its coordinates from the one below
e = EdgeId(1, 0, Orientation.HORIZONTAL)
print("edge", e, "-> plaquettes", plaquettes_of_edge(e, L))

# plaquette (0, 0): bottom, top, left, right
print("plaquette (0,0) edges:", edges_of_plaquette(PlaquetteId(0, 0), L))
print("star (0,0) edges:     ", edges_of_star(StarId(0, 0), L))

# dense indices: orientation * L^2 + y * L + x
print("dense index of V(2,3):", edge_index(EdgeId(2, 3, Orientation.VERTICAL), L))

# the vectorised tables used by the numerical kernels
arr = lattice_arrays(L)
print("edge -> plaquette table shape:", arr.edge_plaquettes.shape)

# product of all plaquettes is the identity: every edge is covered twice
counts = np.bincount(arr.plaquette_edges.ravel(), minlength=2 * L * L)
print("every edge in exactly two plaquettes:", bool(np.all(counts == 2)))

# 2L^2 qubits, 2(L^2 - 1) independent stabilisers, 2 logical qubits
print("qubits:", 2 * L * L, " independent stabilisers:", 2 * (L * L - 1))
