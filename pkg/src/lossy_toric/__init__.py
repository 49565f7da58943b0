"""Loss-tolerant decoding of the toric code under qubit loss and bit-flip noise."""

__version__ = "0.1.0"

from .lattice import (EdgeId, Orientation, PlaquetteId, StarId, TorusSize, edge_index,
                      edges_of_plaquette, edges_of_star, plaquettes_of_edge)
from .noise import ErrorSample, NoiseParams, TrialSeed, sample_errors
from .loss_structure import (RestoredLattice, Superedge, SuperplaquettePartition,
                             build_degraded_graph, build_partition, build_restored_lattice,
                             edge_weight, loss_recoverable, parity_probability, restored_lattice)
from .syndrome import Syndrome, compute_syndrome
from .decoder import (CorrectionChain, DefectGraph, correction_chain, decode, defect_distances,
                      min_weight_matching)
from .homology import HomologyClass, Outcome, close_chain, trial_outcome, winding
from .experiment import GridPoint, GridResult, run_grid, run_percolation, run_trial
from .scaling_fit import BoundaryCurve, ScalingFit, fit_boundary, fit_scaling
