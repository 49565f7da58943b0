"""Monte Carlo estimation of failure rates over a (p_loss, p_com, L) grid."""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .decoder import decode
from .homology import Outcome, trial_outcome
from .lattice import TorusSize
from .loss_structure import build_partition, loss_recoverable, restored_lattice
from .noise import NoiseParams, TrialSeed, sample_errors
from .syndrome import compute_syndrome

#: lowest-precedence override for the default worker count
WORKERS_ENV = "LOSSY_TORIC_WORKERS"

_CHUNK = 250


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class GridPoint:
    p_loss: float
    p_com: float
    L: int
    trials: int

    def __post_init__(self):
        NoiseParams(self.p_loss, self.p_com)
        TorusSize.of(self.L)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")

    def seed_key(self, master_seed: int) -> int:
        """Per-point seed: master_seed XOR a stable hash of the point."""
        # float()/int() so numpy scalars hash like the equal Python values
        text = f"{float(self.p_loss)!r},{float(self.p_com)!r},{int(self.L)}"
        h = hashlib.blake2b(text.encode(), digest_size=8)
        return (master_seed ^ int.from_bytes(h.digest(), "little")) & (2 ** 64 - 1)


@dataclass(frozen=True)
class GridResult:
    point: GridPoint
    n_logical_fail: int
    n_loss_fail: int
    n_success: int
    master_seed: int

    @property
    def trials(self) -> int:
        return self.point.trials

    @property
    def p_loss(self) -> float:
        return self.point.p_loss

    @property
    def p_com(self) -> float:
        return self.point.p_com

    @property
    def L(self) -> int:
        return self.point.L

    @property
    def p_fail(self) -> float:
        return (self.n_logical_fail + self.n_loss_fail) / self.trials

    @property
    def stderr(self) -> float:
        p = self.p_fail
        return math.sqrt(p * (1.0 - p) / self.trials)

    @property
    def p_fail_logical_only(self) -> float:
        """Failure rate among trials whose losses did not percolate."""
        kept = self.trials - self.n_loss_fail
        return self.n_logical_fail / kept if kept else float("nan")

    def wilson_interval(self, z: float = 1.96) -> tuple[float, float]:
        n = self.trials
        p = self.p_fail
        denom = 1.0 + z * z / n
        centre = (p + z * z / (2 * n)) / denom
        half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
        return max(0.0, centre - half), min(1.0, centre + half)


def run_trial(params: NoiseParams, size: TorusSize, seed: TrialSeed) -> Outcome:
    sample = sample_errors(params, size, seed)
    partition = build_partition(sample.lost, size)
    if not loss_recoverable(partition):
        return Outcome.LOSS_FAILURE
    syndrome = compute_syndrome(sample.flipped, partition)
    if len(syndrome) == 0:
        correction = np.zeros_like(sample.flipped)
    else:
        restored = restored_lattice(partition, sample.lost, params.p_com)
        correction = decode(syndrome.defects, restored).edges
    return trial_outcome(sample, partition, correction)


def _run_chunk(point: GridPoint, key: int, start: int, stop: int) -> tuple[int, int, int]:
    params = NoiseParams(point.p_loss, point.p_com)
    size = TorusSize.of(point.L)
    counts = {o: 0 for o in Outcome}
    for t in range(start, stop):
        counts[run_trial(params, size, TrialSeed(key, t))] += 1
    return counts[Outcome.LOGICAL_FAILURE], counts[Outcome.LOSS_FAILURE], counts[Outcome.SUCCESS]


def _chunks(point: GridPoint, master_seed: int):
    key = point.seed_key(master_seed)
    return [(point, key, s, min(s + _CHUNK, point.trials)) for s in range(0, point.trials, _CHUNK)]


def run_grid(points: list[GridPoint], master_seed: int, worker_count: int | None = None,
             progress=None) -> list[GridResult]:
    """Run every grid point; results are independent of ``worker_count``.

    ``progress``, if given, is called with each finished GridResult.
    """
    workers = default_workers() if worker_count is None else max(1, int(worker_count))
    jobs = [(i, c) for i, p in enumerate(points) for c in _chunks(p, master_seed)]
    totals = [[0, 0, 0] for _ in points]
    if workers == 1:
        outputs = (_run_chunk(*c) for _, c in jobs)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        outputs = pool.map(_run_chunk, *zip(*(c for _, c in jobs)))
    results: list[GridResult] = []
    remaining = [len(_chunks(p, master_seed)) for p in points]
    try:
        for (i, _), counts in zip(jobs, outputs):
            for k in range(3):
                totals[i][k] += counts[k]
            remaining[i] -= 1
            if remaining[i] == 0 and progress is not None:
                progress(GridResult(points[i], *totals[i], master_seed))
    finally:
        if pool is not None:
            pool.shutdown()
    for i, p in enumerate(points):
        results.append(GridResult(p, *totals[i], master_seed))
    return results


def percolation_trial(p_loss: float, size: TorusSize, seed: TrialSeed) -> bool:
    sample = sample_errors(NoiseParams(p_loss, 0.0), size, seed)
    return loss_recoverable(build_partition(sample.lost, size))


@dataclass(frozen=True)
class PercolationResult:
    p_loss: float
    L: int
    trials: int
    n_recoverable: int
    master_seed: int

    @property
    def recovery_fraction(self) -> float:
        return self.n_recoverable / self.trials

    @property
    def stderr(self) -> float:
        p = self.recovery_fraction
        return math.sqrt(p * (1 - p) / self.trials)


def _percolation_chunk(point: GridPoint, key: int, start: int, stop: int) -> int:
    size = TorusSize.of(point.L)
    return sum(percolation_trial(point.p_loss, size, TrialSeed(key, t)) for t in range(start, stop))


def run_percolation(p_losses, sizes, trials: int, master_seed: int,
                    worker_count: int | None = None) -> list[PercolationResult]:
    """Fraction of pure-loss samples with no winding superplaquette."""
    points = [GridPoint(p, 0.0, L, trials) for L in sizes for p in p_losses]
    workers = default_workers() if worker_count is None else max(1, int(worker_count))
    jobs = [(i, c) for i, p in enumerate(points) for c in _chunks(p, master_seed)]
    if workers == 1:
        outputs = [_percolation_chunk(*c) for _, c in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_percolation_chunk, *zip(*(c for _, c in jobs))))
    totals = [0] * len(points)
    for (i, _), n in zip(jobs, outputs):
        totals[i] += n
    return [PercolationResult(p.p_loss, p.L, p.trials, totals[i], master_seed)
            for i, p in enumerate(points)]
