"""Command-line interface: ``lossy-toric {sample,sweep,fit,percolation}``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal
contract violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .decoder import decode
from .experiment import GridPoint, default_workers, run_grid, run_percolation
from .homology import trial_outcome
from .lattice import TorusSize, edge_from_index, plaquette_from_index
from .loss_structure import build_partition, loss_recoverable, restored_lattice
from .noise import GENERATOR_NAME, NoiseParams, TrialSeed, sample_errors
from .scaling_fit import InsufficientDataError, fit_boundary, fit_scaling
from .syndrome import compute_syndrome

SWEEP_COLUMNS = ["p_loss", "p_com", "L", "trials", "n_logical_fail", "n_loss_fail",
                 "p_fail", "stderr", "master_seed"]
PERCOLATION_COLUMNS = ["p_loss", "L", "trials", "n_recoverable", "recovery_fraction",
                       "stderr", "master_seed"]

EXIT_CONFIG, EXIT_DATA, EXIT_INTERNAL = 2, 3, 4


class ConfigError(Exception):
    pass


class DataError(Exception):
    pass


def fmt(x) -> str:
    """Shortest round-tripping positional decimal."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return np.format_float_positional(float(x), trim="0")


def parse_values(text: str, flag: str) -> list[float]:
    """``a,b,c`` or an inclusive range ``start:stop:step``."""
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if step <= 0:
                raise ValueError
            n = int(round((stop - start) / step))
            return [round(start + i * step, 10) for i in range(n + 1)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"{flag}: cannot parse {text!r}") from None


def _probabilities(values, flag, upper=1.0, inclusive=True):
    for v in values:
        if not (0.0 <= v <= upper if inclusive else 0.0 <= v < upper):
            bound = "]" if inclusive else ")"
            raise ConfigError(f"{flag}: {v} outside [0, {upper}{bound}")
    return values


def _sizes(values, flag="--sizes"):
    out = []
    for v in values:
        if v != int(v) or v < 2:
            raise ConfigError(f"{flag}: lattice size must be an integer >= 2, got {v}")
        out.append(int(v))
    return out


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(64)
        print(f"seed: {args.seed}", file=sys.stderr)
    if not 0 <= args.seed < 2 ** 64:
        raise ConfigError("--seed: must be a 64-bit unsigned integer")
    return args.seed


def _workers(args) -> int:
    w = default_workers() if args.workers is None else args.workers
    if w < 1:
        raise ConfigError("--workers: must be >= 1")
    return w


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    try:
        return open(path, "w", newline=""), True
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror}") from None


def _write_meta(path, payload):
    if path in (None, "-"):
        return
    meta = {"generator": GENERATOR_NAME, "version": __version__, **payload}
    try:
        Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}.meta.json: {exc.strerror}") from None


# -- sample -----------------------------------------------------------------

def sample_dump(L: int, p_loss: float, p_com: float, seed: int, trial: int = 0) -> str:
    """One trial rendered as sectioned CSV (``# section: name`` headers)."""
    size = TorusSize.of(L)
    params = NoiseParams(p_loss, p_com)
    sample = sample_errors(params, size, TrialSeed(seed, trial))
    partition = build_partition(sample.lost, size)
    syndrome = compute_syndrome(sample.flipped, partition)
    if len(syndrome) and loss_recoverable(partition):
        restored = restored_lattice(partition, sample.lost, p_com)
        chain = decode(syndrome.defects, restored)
        correction, weights = chain.edges, restored.weight
    else:
        correction = np.zeros_like(sample.flipped)
        weights = (restored_lattice(partition, sample.lost, p_com).weight
                   if p_com > 0 else np.full(size.n_edges, np.nan))
    outcome = trial_outcome(sample, partition, correction)

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")

    def section(name, header, rows):
        buf.write(f"# section: {name}\n")
        w.writerow(header)
        w.writerows(rows)

    def edges(mask):
        return [(e.x, e.y, e.orientation.name.lower())
                for e in (edge_from_index(i, size) for i in np.flatnonzero(mask))]

    section("metadata", ["key", "value"], [
        ("L", L), ("p_loss", fmt(p_loss)), ("p_com", fmt(p_com)), ("seed", seed),
        ("trial", trial), ("generator", GENERATOR_NAME)])
    section("lost", ["x", "y", "orientation"], edges(sample.lost))
    section("flipped", ["x", "y", "orientation"], edges(sample.flipped))
    section("regions", ["x", "y", "region"],
            [(*plaquette_from_index(p, size), int(partition.label[p])) for p in range(size.n_plaquettes)])
    section("weights", ["x", "y", "orientation", "weight"],
            [(*row, fmt(wt)) for row, wt in zip(edges(np.ones(size.n_edges, bool)), weights)])
    section("defects", ["x", "y"], [tuple(plaquette_from_index(d, size)) for d in syndrome.defects])
    section("correction", ["x", "y", "orientation"], edges(correction))
    section("outcome", ["outcome"], [(outcome.value,)])
    return buf.getvalue()


def cmd_sample(args) -> int:
    _sizes([args.size], "--size")
    _probabilities([args.ploss], "--ploss")
    _probabilities([args.pcom], "--pcom", 0.5, inclusive=False)
    seed = _seed(args)
    text = sample_dump(args.size, args.ploss, args.pcom, seed, args.trial)
    out, close = _open_out(args.output)
    out.write(text)
    if close:
        out.close()
    return 0


# -- sweep ------------------------------------------------------------------

def sweep_rows(results, accounting="combined"):
    for r in results:
        if accounting == "combined":
            p, n = r.p_fail, r.trials
        else:
            n = r.trials - r.n_loss_fail
            p = r.n_logical_fail / n if n else 0.0
        se = float(np.sqrt(p * (1 - p) / n)) if n else 0.0
        yield [fmt(r.p_loss), fmt(r.p_com), r.L, r.trials, r.n_logical_fail, r.n_loss_fail,
               fmt(p), fmt(se), r.master_seed]


def _write_table(columns, rows, fh, fmt_="csv"):
    if fmt_ == "json":
        # same cells as the CSV, re-parsed so numbers stay numbers
        records = [dict(zip(columns, (json.loads(str(c)) for c in row))) for row in rows]
        fh.write(json.dumps(records, indent=2) + "\n")
        return
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)


def write_sweep_csv(results, fh, accounting="combined", fmt_="csv"):
    _write_table(SWEEP_COLUMNS, sweep_rows(results, accounting), fh, fmt_)


def cmd_sweep(args) -> int:
    sizes = _sizes(parse_values(args.sizes, "--sizes"))
    p_loss = _probabilities(parse_values(args.ploss, "--ploss"), "--ploss")
    p_com = _probabilities(parse_values(args.pcom, "--pcom"), "--pcom", 0.5, inclusive=False)
    if args.trials < 1:
        raise ConfigError("--trials: must be >= 1")
    seed, workers = _seed(args), _workers(args)
    points = [GridPoint(pl, pc, L, args.trials) for pl in p_loss for L in sizes for pc in p_com]
    results = run_grid(points, seed, workers)
    out, close = _open_out(args.output)
    write_sweep_csv(results, out, args.accounting, args.format)
    if close:
        out.close()
    _write_meta(args.output, {"command": "sweep", "master_seed": seed, "accounting": args.accounting,
                              "sizes": sizes, "p_loss": p_loss, "p_com": p_com, "trials": args.trials})
    return 0


# -- fit --------------------------------------------------------------------

@dataclass(frozen=True)
class ResultRow:
    p_loss: float
    p_com: float
    L: int
    trials: int
    n_logical_fail: int
    n_loss_fail: int
    p_fail: float
    stderr: float
    master_seed: int


def read_sweep_csv(fh) -> list[ResultRow]:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("line 1: empty results file") from None
    if header != SWEEP_COLUMNS:
        raise DataError(f"line 1: expected header {','.join(SWEEP_COLUMNS)}")
    rows = []
    types = (float, float, int, int, int, int, float, float, int)
    for lineno, rec in enumerate(reader, start=2):
        if len(rec) != len(SWEEP_COLUMNS):
            raise DataError(f"line {lineno}: expected {len(SWEEP_COLUMNS)} fields, got {len(rec)}")
        try:
            rows.append(ResultRow(*(t(v) for t, v in zip(types, rec))))
        except ValueError:
            raise DataError(f"line {lineno}: malformed value") from None
    return rows


def fit_report(rows, window=0.15) -> dict:
    groups: dict[float, list] = {}
    for r in rows:
        groups.setdefault(r.p_loss, []).append(r)
    fits = []
    for p_loss in sorted(groups):
        try:
            fits.append(fit_scaling(groups[p_loss], window=window))
        except InsufficientDataError as exc:
            raise DataError(f"p_loss={fmt(p_loss)}: {exc}") from None
    report = {"fits": [f.as_dict() for f in fits]}
    try:
        curve = fit_boundary(fits)
        report["boundary"] = list(curve.coefficients)
        report["intercept"] = curve.intercept
    except InsufficientDataError:
        report["boundary"] = None
        report["intercept"] = None
    return report


def cmd_fit(args) -> int:
    if args.window is not None and args.window <= 0:
        raise ConfigError("--window: must be positive")
    try:
        with open(args.input, newline="") as fh:
            rows = read_sweep_csv(fh)
    except OSError as exc:
        raise DataError(f"cannot read {args.input}: {exc.strerror}") from None
    report = fit_report(rows, args.window)
    out, close = _open_out(args.output)
    out.write(json.dumps(report, indent=2) + "\n")
    if close:
        out.close()
    return 0


# -- percolation ------------------------------------------------------------

def write_percolation_csv(results, fh, fmt_="csv"):
    rows = [[fmt(r.p_loss), r.L, r.trials, r.n_recoverable, fmt(r.recovery_fraction),
             fmt(r.stderr), r.master_seed] for r in results]
    _write_table(PERCOLATION_COLUMNS, rows, fh, fmt_)


def cmd_percolation(args) -> int:
    sizes = _sizes(parse_values(args.sizes, "--sizes"))
    p_loss = _probabilities(parse_values(args.ploss, "--ploss"), "--ploss")
    if args.trials < 1:
        raise ConfigError("--trials: must be >= 1")
    seed, workers = _seed(args), _workers(args)
    results = run_percolation(p_loss, sizes, args.trials, seed, workers)
    out, close = _open_out(args.output)
    write_percolation_csv(results, out, args.format)
    if close:
        out.close()
    _write_meta(args.output, {"command": "percolation", "master_seed": seed, "sizes": sizes,
                              "p_loss": p_loss, "trials": args.trials})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lossy-toric", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, grid=True):
        p.add_argument("--seed", type=int, default=None, help="master seed (default: drawn and printed)")
        p.add_argument("--output", "-o", default=None, help="output path (default: stdout)")
        if grid:
            p.add_argument("--trials", type=int, default=2000)
            p.add_argument("--format", choices=["csv", "json"], default="csv")
            p.add_argument("--workers", type=int, default=None,
                           help="worker processes (default: $LOSSY_TORIC_WORKERS or CPU count)")

    p = sub.add_parser("sample", help="dump one trial as sectioned CSV")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--ploss", type=float, required=True)
    p.add_argument("--pcom", type=float, required=True)
    p.add_argument("--trial", type=int, default=0)
    common(p, grid=False)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("sweep", help="Monte Carlo failure rates over a grid")
    p.add_argument("--sizes", default="8,12,16")
    p.add_argument("--ploss", default="0")
    p.add_argument("--pcom", default="0.08:0.13:0.005")
    p.add_argument("--accounting", choices=["combined", "logical-only"], default="combined")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="scaling fits and boundary from a sweep CSV")
    p.add_argument("input")
    p.add_argument("--window", type=float, default=0.15)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("percolation", help="pure-loss recovery fractions")
    p.add_argument("--sizes", default="8,16,32")
    p.add_argument("--ploss", default="0.4:0.6:0.02")
    common(p)
    p.set_defaults(func=cmd_percolation)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (AssertionError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
