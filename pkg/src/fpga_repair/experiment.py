"""Seeded Monte-Carlo check of the traversal-direction criterion.

Each trial injects random faults into a tile matrix, covers it both by rows
and by columns, and records whether the criterion picked a direction that
needs no more spare tiles than the other one.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import random
import tempfile
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .model import FaultMatrix, inject_faults
from .tiles import BandAxis, Strategy, choose_strategy, solve_tiles

CSV_COLUMNS = ["trial", "p", "q", "n", "k", "seed", "q_r", "q_c", "n_rows", "n_cols", "chosen", "positive"]


@dataclass(frozen=True)
class ExperimentConfig:
    trials: int = 200
    p_range: tuple[int, int] = (3, 7)
    q_range: tuple[int, int] = (3, 7)
    n_range: tuple[int, int] = (2, 5)
    k_min: int = 3
    master_seed: int = 0

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        for name in ("p_range", "q_range", "n_range"):
            lo, hi = getattr(self, name)
            if lo < 1 or lo > hi:
                raise ValueError(f"{name} must be a non-empty range of positive integers, got {lo}:{hi}")
        if self.k_min < 0:
            raise ValueError("k_min must be non-negative")

    def k_max(self, p: int, q: int, n: int) -> int:
        return n * p * q


@dataclass(frozen=True)
class TrialRecord:
    p: int
    q: int
    n: int
    k: int
    seed: int
    q_r: Fraction
    q_c: Fraction
    n_rows: int
    n_cols: int
    chosen: Strategy

    @property
    def positive(self) -> bool:
        mine, other = (self.n_rows, self.n_cols) if self.chosen is BandAxis.ROWS else (self.n_cols, self.n_rows)
        return mine <= other


@dataclass
class BatchSummary:
    trials_run: int
    positive_rate: Optional[float]
    breakdown: dict[str, dict[int, dict[str, float]]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "trials_run": self.trials_run,
            "positive_rate": self.positive_rate,
            "breakdown": {
                param: {str(v): stats for v, stats in sorted(table.items())}
                for param, table in self.breakdown.items()
            },
        }


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit per-trial seed, independent of trial order."""
    digest = hashlib.blake2b(f"{master_seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def run_trial(p: int, q: int, n: int, k: int, seed: int) -> TrialRecord:
    """One trial on a p x q tile matrix of n x n blocks holding k faults."""
    if min(p, q, n) < 1:
        raise ValueError(f"p, q, n must be positive, got {p}, {q}, {n}")
    if not 0 <= k <= n * n * p * q:
        raise ValueError(f"k={k} outside 0..{n * n * p * q}")
    return record_trial(inject_faults(n * p, n * q, k, seed), n, seed)


def record_trial(m: FaultMatrix, n: int, seed: int = 0) -> TrialRecord:
    """Cover a given block matrix both ways and score the criterion's pick."""
    result = solve_tiles(m, n, BandAxis.ROWS)
    return TrialRecord(
        p=m.rows // n,
        q=m.cols // n,
        n=n,
        k=m.fault_count,
        seed=seed,
        q_r=result.q_r,
        q_c=result.q_c,
        n_rows=result.spares_used,
        n_cols=result.spares_other_strategy,
        chosen=choose_strategy(result.q_r, result.q_c),
    )


def sample_params(cfg: ExperimentConfig, seed: int) -> tuple[int, int, int, int]:
    rng = random.Random(f"params:{seed}")
    p = rng.randint(*cfg.p_range)
    q = rng.randint(*cfg.q_range)
    n = rng.randint(*cfg.n_range)
    k_hi = min(cfg.k_max(p, q, n), n * n * p * q)
    k = rng.randint(min(cfg.k_min, k_hi), k_hi)
    return p, q, n, k


def summarize(records: Sequence[TrialRecord]) -> BatchSummary:
    if not records:
        return BatchSummary(0, None, {})
    positives = sum(r.positive for r in records)
    breakdown: dict[str, dict[int, dict[str, float]]] = {}
    for param in ("p", "q", "n"):
        groups: dict[int, list[bool]] = defaultdict(list)
        for r in records:
            groups[getattr(r, param)].append(r.positive)
        breakdown[param] = {
            v: {"trials": len(g), "positive": sum(g), "positive_rate": round(sum(g) / len(g), 6)}
            for v, g in sorted(groups.items())
        }
    return BatchSummary(len(records), round(positives / len(records), 6), breakdown)


def run_batch(cfg: ExperimentConfig) -> tuple[BatchSummary, list[TrialRecord]]:
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.master_seed, t)
        records.append(run_trial(*sample_params(cfg, seed), seed))
    return summarize(records), records


def fixed_dimension_study(
    master_seed: int,
    trials: int = 10,
    p: int = 5,
    q: int = 4,
    n: int = 3,
    k_min: int = 3,
) -> tuple[BatchSummary, list[TrialRecord]]:
    """Trials on one fixed tile-matrix shape (default 5 tiles tall, 4 wide, 3x3 blocks)."""
    cfg = ExperimentConfig(trials, (p, p), (q, q), (n, n), k_min, master_seed)
    return run_batch(cfg)


def records_to_csv(records: Sequence[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for t, r in enumerate(records):
        writer.writerow([
            t, r.p, r.q, r.n, r.k, r.seed,
            f"{float(r.q_r):.6f}", f"{float(r.q_c):.6f}",
            r.n_rows, r.n_cols, r.chosen.value, str(r.positive).lower(),
        ])
    return buf.getvalue()


def atomic_write(path: Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def export_report(
    records: Sequence[TrialRecord],
    summary: BatchSummary,
    prefix: str | os.PathLike,
) -> tuple[Path, Path]:
    """Write ``<prefix>.csv`` (one row per trial) and ``<prefix>.json`` (summary)."""
    prefix = Path(prefix)
    csv_path = prefix.with_name(prefix.name + ".csv")
    json_path = prefix.with_name(prefix.name + ".json")
    csv_text = records_to_csv(records)
    json_text = json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n"
    atomic_write(csv_path, csv_text)
    atomic_write(json_path, json_text)
    return csv_path, json_path
