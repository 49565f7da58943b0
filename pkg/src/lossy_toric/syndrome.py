"""Superplaquette syndromes of an error chain."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import TorusSize, lattice_arrays
from .loss_structure import SuperplaquettePartition


@dataclass(frozen=True)
class Syndrome:
    defects: np.ndarray  # sorted region representatives with eigenvalue -1

    def __len__(self):
        return int(self.defects.size)


def region_parity(edges: np.ndarray, partition: SuperplaquettePartition) -> np.ndarray:
    """Parity per fine plaquette folded onto region representatives.

    Entries for non-representatives are zero.
    """
    arr = lattice_arrays(partition.L)
    ends = partition.label[arr.edge_plaquettes[np.asarray(edges, dtype=bool)]]
    # region-internal edges toggle the same region twice and drop out
    return np.bincount(ends.ravel(), minlength=partition.label.size) & 1


def compute_syndrome(flipped: np.ndarray, partition: SuperplaquettePartition,
                     size: TorusSize | None = None) -> Syndrome:
    return Syndrome(np.flatnonzero(region_parity(flipped, partition)))
