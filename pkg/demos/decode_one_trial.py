"""
Decoding a single trial
=======================

Sample loss and bit-flips, measure superplaquette syndromes, match
defects on the restored lattice and check the homology of E + E'.
"""

import numpy as np

from lossy_toric import (NoiseParams, TorusSize, TrialSeed, build_partition, close_chain,
                         compute_syndrome, decode, loss_recoverable, restored_lattice, sample_errors,
                         trial_outcome, winding)

size = TorusSize.of(12)
params = NoiseParams(p_loss=0.2, p_com=0.06)
sample = sample_errors(params, size, TrialSeed(master_seed=7, trial_index=0))
print("lost:", int(sample.lost.sum()), " flipped:", int(sample.flipped.sum()))

part = build_partition(sample.lost, size)
print("regions:", len(part.regions), " recoverable:", loss_recoverable(part))

syndrome = compute_syndrome(sample.flipped, part)
print("defects (region representatives):", syndrome.defects.tolist())

restored = restored_lattice(part, sample.lost, params.p_com)
chain = decode(syndrome.defects, restored)
print("correction size:", int(chain.edges.sum()), " matching weight:", round(chain.total_weight, 4))

# E + E' has no syndrome left; closing it through lost edges gives a cycle
residual = sample.flipped ^ chain.edges
print("residual defects:", len(compute_syndrome(residual, part)))
print("winding of closed residual:", winding(close_chain(residual, part), size))
print("outcome:", trial_outcome(sample, part, chain.edges).value)
