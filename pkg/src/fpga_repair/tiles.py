"""Greedy coverage of faulty blocks by n x n spare tiles.

The block matrix is OR-folded into row bands (every n block rows become one)
or column bands (every n block columns become one). A structurization
criterion on each folding picks the traversal direction, and a left-to-right
scan of every band drops a tile at each uncovered fault.

Bands are stored band-major for both axes: ``cells[b][k]`` is position ``k``
along band ``b``. For column bands that is the transpose of the usual
p x (q/n) layout; ``CompressedMatrix.as_matrix`` undoes it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import CapacityError
from .model import FaultMatrix

BAND_ORACLE_CAP = 24


class BandAxis(enum.Enum):
    ROWS = "rows"
    COLS = "cols"


Strategy = BandAxis


@dataclass(frozen=True)
class CompressedMatrix:
    axis: BandAxis
    n: int
    cells: tuple[tuple[bool, ...], ...]

    @property
    def bands(self) -> int:
        return len(self.cells)

    @property
    def span(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    def as_matrix(self) -> list[list[int]]:
        """The folded matrix in source orientation (M_r is bands x q, M_c is p x bands)."""
        grid = [[int(c) for c in band] for band in self.cells]
        if self.axis is BandAxis.COLS:
            grid = [list(r) for r in zip(*grid)]
        return grid

    @classmethod
    def from_matrix(cls, axis: BandAxis, n: int, grid: Sequence[Sequence[int]]) -> "CompressedMatrix":
        """Inverse of ``as_matrix``; handy for feeding printed folded matrices in directly."""
        if axis is BandAxis.COLS:
            grid = list(zip(*grid))
        return cls(axis, n, tuple(tuple(bool(v) for v in band) for band in grid))


@dataclass(frozen=True)
class BandStats:
    ones: int
    low: Optional[int]
    high: Optional[int]

    @property
    def interval(self) -> int:
        return 0 if self.ones == 0 else self.high - self.low + 1

    @property
    def contribution(self) -> Fraction:
        return Fraction(0) if self.ones == 0 else Fraction(self.ones, self.interval)


@dataclass(frozen=True)
class TilePlacement:
    axis: BandAxis
    band: int
    start: int

    def blocks(self, n: int) -> set[tuple[int, int]]:
        """Block coordinates (1-based) under this tile."""
        across = range((self.band - 1) * n + 1, self.band * n + 1)
        along = range(self.start, self.start + n)
        if self.axis is BandAxis.ROWS:
            return {(i, j) for i in across for j in along}
        return {(i, j) for i in along for j in across}


@dataclass
class TileRepairResult:
    strategy: Strategy
    n: int
    q_r: Fraction
    q_c: Fraction
    placements: list[TilePlacement]
    spares_other_strategy: int
    fault_total: int
    criterion_choice: Strategy = field(default=None)

    @property
    def spares_used(self) -> int:
        return len(self.placements)

    @property
    def quality(self) -> Optional[Fraction]:
        return coverage_quality(self.fault_total, self.spares_used)

    def spares_for(self, strategy: Strategy) -> int:
        return self.spares_used if strategy is self.strategy else self.spares_other_strategy

    def covered_blocks(self, rows: int, cols: int) -> set[tuple[int, int]]:
        blocks: set[tuple[int, int]] = set()
        for pl in self.placements:
            blocks |= pl.blocks(self.n)
        return {(i, j) for i, j in blocks if i <= rows and j <= cols}

    def to_dict(self) -> dict:
        quality = self.quality
        return {
            "strategy": self.strategy.value,
            "q_r": round(float(self.q_r), 6),
            "q_c": round(float(self.q_c), 6),
            "spares_used": self.spares_used,
            "spares_other_strategy": self.spares_other_strategy,
            "quality": None if quality is None else round(float(quality), 6),
            "placements": [
                {"axis": pl.axis.value, "band": pl.band, "start": pl.start} for pl in self.placements
            ],
            "fault_total": self.fault_total,
        }


def compress(m: FaultMatrix, n: int, axis: BandAxis) -> CompressedMatrix:
    """OR-fold every ``n`` block rows (``ROWS``) or columns (``COLS``) into one."""
    if n < 1:
        raise ValueError(f"tile side must be >= 1, got {n}")
    if axis is BandAxis.ROWS:
        if m.rows % n:
            raise ValueError(f"rows: {m.rows} block rows not divisible by tile side {n}")
        src = m.cells
    else:
        if m.cols % n:
            raise ValueError(f"cols: {m.cols} block columns not divisible by tile side {n}")
        src = tuple(zip(*m.cells))
    bands = tuple(
        tuple(any(line) for line in zip(*src[b * n:(b + 1) * n]))
        for b in range(len(src) // n)
    )
    return CompressedMatrix(axis, n, bands)


def band_stats(band: Sequence[bool]) -> BandStats:
    hits = [k for k, v in enumerate(band, start=1) if v]
    if not hits:
        return BandStats(0, None, None)
    return BandStats(len(hits), hits[0], hits[-1])


def structurization(c: CompressedMatrix) -> tuple[Fraction, list[BandStats]]:
    """Sum over bands of faulty positions divided by their spread interval."""
    stats = [band_stats(band) for band in c.cells]
    return sum((s.contribution for s in stats), Fraction(0)), stats


def choose_strategy(q_r: Fraction, q_c: Fraction) -> Strategy:
    # ties go to columns
    return BandAxis.ROWS if q_r < q_c else BandAxis.COLS


def greedy_band(band: Sequence[bool], n: int) -> list[int]:
    """1-based start offsets of the tiles placed on one band.

    A window that would run past the band end is pulled back to end on it.
    """
    span = len(band)
    starts = []
    j = 0
    while j < span:
        if band[j]:
            starts.append(max(1, min(j + 1, span - n + 1)))
            j += n
        else:
            j += 1
    return starts


def greedy_cover(c: CompressedMatrix) -> tuple[list[TilePlacement], int]:
    placements = [
        TilePlacement(c.axis, b, start)
        for b, band in enumerate(c.cells, start=1)
        for start in greedy_band(band, c.n)
    ]
    return placements, len(placements)


def coverage_quality(fault_total: int, spares: int) -> Optional[Fraction]:
    """Faulty blocks repaired per spare tile; ``None`` when nothing needed repair."""
    if spares == 0:
        if fault_total == 0:
            return None
        raise RuntimeError(f"{fault_total} faults reported with no spare tiles")
    if spares < 0:
        raise ValueError("spare count must be non-negative")
    return Fraction(fault_total, spares)


def solve_tiles(m: FaultMatrix, n: int, strategy: Optional[Strategy] = None) -> TileRepairResult:
    """Fold both ways, score both, and cover along the chosen direction.

    ``strategy`` forces a direction; by default the criterion decides. The
    other direction's tile count is always computed for comparison.
    """
    folded = {axis: compress(m, n, axis) for axis in BandAxis}
    q_r, _ = structurization(folded[BandAxis.ROWS])
    q_c, _ = structurization(folded[BandAxis.COLS])
    picked = choose_strategy(q_r, q_c)
    used = strategy or picked
    other = BandAxis.COLS if used is BandAxis.ROWS else BandAxis.ROWS
    placements, _ = greedy_cover(folded[used])
    _, other_count = greedy_cover(folded[other])
    return TileRepairResult(
        strategy=used,
        n=n,
        q_r=q_r,
        q_c=q_c,
        placements=placements,
        spares_other_strategy=other_count,
        fault_total=m.fault_count,
        criterion_choice=picked,
    )


def brute_force_band_cover(band: Sequence[bool], n: int, cap: int = BAND_ORACLE_CAP) -> int:
    """Fewest length-``n`` windows covering every true position, by exhaustive branching.

    The leftmost uncovered fault must lie in some window; every window that
    contains it (and fits the band) is tried.
    """
    span = len(band)
    if span > cap:
        raise CapacityError(f"band span {span} exceeds oracle cap of {cap}")
    if n < 1:
        raise ValueError("window length must be >= 1")
    faults = frozenset(k for k, v in enumerate(band) if v)
    width = min(n, span)
    best = len(faults)

    def search(remaining: frozenset[int], used: int) -> None:
        nonlocal best
        if used >= best:
            return
        if not remaining:
            best = used
            return
        first = min(remaining)
        for start in range(max(0, first - width + 1), min(first, span - width) + 1):
            window = set(range(start, start + width))
            search(remaining - window, used + 1)

    search(faults, 0)
    return best
