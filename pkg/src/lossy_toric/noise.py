"""I.i.d. loss and bit-flip sampling with per-trial counter-based seeding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import TorusSize

#: Recorded in output metadata so samples can be regenerated bit-for-bit.
GENERATOR_NAME = f"numpy-{np.__version__}/SeedSequence+Philox4x64"


@dataclass(frozen=True)
class NoiseParams:
    p_loss: float
    p_com: float

    def __post_init__(self):
        if not 0.0 <= self.p_loss <= 1.0:
            raise ValueError(f"p_loss must lie in [0, 1], got {self.p_loss}")
        if not 0.0 <= self.p_com < 0.5:
            raise ValueError(f"p_com must lie in [0, 0.5), got {self.p_com}")


@dataclass(frozen=True)
class TrialSeed:
    master_seed: int
    trial_index: int

    def generator(self) -> np.random.Generator:
        # SeedSequence hashes the pair, so neighbouring trial indices give
        # unrelated Philox keys; no state is shared between trials.
        ss = np.random.SeedSequence([self.master_seed & (2**64 - 1), self.trial_index])
        return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class ErrorSample:
    """Boolean masks over dense edge indices."""

    lost: np.ndarray
    flipped: np.ndarray

    def __post_init__(self):
        if np.any(self.lost & self.flipped):
            raise ValueError("flipped edges must be disjoint from lost edges")


def sample_errors(params: NoiseParams, size: TorusSize, seed: TrialSeed) -> ErrorSample:
    """Lose each edge with probability p_loss, then flip each survivor with p_com.

    Two uniforms are drawn per edge in dense-index order: column 0 decides
    loss, column 1 decides the flip.
    """
    u = seed.generator().random((size.n_edges, 2))
    lost = u[:, 0] < params.p_loss
    flipped = ~lost & (u[:, 1] < params.p_com)
    return ErrorSample(lost, flipped)
