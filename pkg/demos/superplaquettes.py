"""
Superplaquettes from lost qubits
================================

Losing a qubit merges the two plaquettes it separated into a
superplaquette whose product avoids the lost qubit. Here two lost qubits
build two superplaquettes that share a pair of surviving qubits, so the
degraded lattice joins them by a single superedge.
"""

import numpy as np

from lossy_toric import (EdgeId, Orientation, TorusSize, build_degraded_graph, build_partition,
                         edge_index, loss_recoverable, restored_lattice)

L = 6
size = TorusSize.of(L)
V = Orientation.VERTICAL

lost = np.zeros(size.n_edges, dtype=bool)
lost[edge_index(EdgeId(2, 2, V), L)] = True   # merges plaquettes (1,2) and (2,2)
lost[edge_index(EdgeId(2, 1, V), L)] = True   # merges plaquettes (1,1) and (2,1)

part = build_partition(lost, size)
big = {rep: members.tolist() for rep, members in part.regions.items() if len(members) > 1}
print("merged regions (representative: members):", big)
print("loss recoverable:", loss_recoverable(part))

p_com = 0.1
for se in build_degraded_graph(part, lost, p_com, size):
    if se.n_shared > 1:
        print(f"superedge {se.endpoints}: {se.n_shared} shared qubits, "
              f"p_l = {se.probability:.4f}, J = {se.weight:.4f}")

# the restored lattice re-expands superedges onto the fine edges
w = restored_lattice(part, lost, p_com).weight
print("weights on the lost edges:", w[lost])
print("distinct weights:", np.unique(np.round(w, 6)))

# a full row of vertical losses winds around the torus: unrecoverable
row = np.zeros(size.n_edges, dtype=bool)
row[[edge_index(EdgeId(x, 3, V), L) for x in range(L)]] = True
wrapped = build_partition(row, size)
print("row of losses recoverable:", loss_recoverable(wrapped),
      "wrap flags:", wrapped.region_wraps(int(wrapped.label[3 * L])))
