"""Fault-marked logic block matrices: data model, file formats, injection, rendering.

Coordinates are 1-based everywhere they leave this module (files, reports,
``FaultCoord``). The grid itself is stored as a tuple of row tuples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

if TYPE_CHECKING:
    from .exact import RepairPlan
    from .tiles import TileRepairResult


class ParseError(ValueError):
    """Raised when a matrix or fault-list file is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class FaultCoord:
    row: int
    col: int

    def __str__(self) -> str:
        return f"F({self.row},{self.col})"


@dataclass(frozen=True)
class TileConfig:
    n: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"tile side must be >= 1, got {self.n}")


@dataclass(frozen=True)
class SpareBudget:
    """Spare rows/columns available for readdressing.

    Explicit ids, when given, name the physical spare lines; otherwise the
    solver numbers spares just past the functional grid.
    """

    spare_cols: int = 0
    spare_rows: int = 0
    spare_col_ids: Optional[tuple[int, ...]] = None
    spare_row_ids: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.spare_cols < 0 or self.spare_rows < 0:
            raise ValueError("spare counts must be non-negative")
        for ids, count, name in (
            (self.spare_col_ids, self.spare_cols, "column"),
            (self.spare_row_ids, self.spare_rows, "row"),
        ):
            if ids is None:
                continue
            if len(ids) != count:
                raise ValueError(f"{len(ids)} spare {name} ids given for {count} spare {name}s")
            if len(set(ids)) != len(ids):
                raise ValueError(f"duplicate spare {name} ids")

    def validate_against(self, rows: int, cols: int) -> None:
        """Check that explicit spare ids lie outside the functional ``rows`` x ``cols`` region."""
        if self.spare_col_ids and any(1 <= c <= cols for c in self.spare_col_ids):
            raise ValueError(f"spare column ids overlap functional columns 1..{cols}")
        if self.spare_row_ids and any(1 <= r <= rows for r in self.spare_row_ids):
            raise ValueError(f"spare row ids overlap functional rows 1..{rows}")
        for ids in (self.spare_col_ids, self.spare_row_ids):
            if ids and min(ids) < 1:
                raise ValueError("spare ids are 1-based")


@dataclass(frozen=True)
class FaultMatrix:
    rows: int
    cols: int
    cells: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"matrix dimensions must be positive, got {self.rows}x{self.cols}")
        if len(self.cells) != self.rows or any(len(r) != self.cols for r in self.cells):
            raise ValueError("cells do not match declared dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | bool]]) -> "FaultMatrix":
        cells = tuple(tuple(bool(v) for v in r) for r in rows)
        return cls(len(cells), len(cells[0]) if cells else 0, cells)

    @classmethod
    def empty(cls, rows: int, cols: int) -> "FaultMatrix":
        return cls(rows, cols, tuple((False,) * cols for _ in range(rows)))

    @classmethod
    def from_coords(cls, rows: int, cols: int, coords: Iterable[FaultCoord]) -> "FaultMatrix":
        grid = [[False] * cols for _ in range(rows)]
        for c in coords:
            if not (1 <= c.row <= rows and 1 <= c.col <= cols):
                raise ValueError(f"{c} outside {rows}x{cols} matrix")
            grid[c.row - 1][c.col - 1] = True
        return cls(rows, cols, tuple(tuple(r) for r in grid))

    def __getitem__(self, rc: tuple[int, int]) -> bool:
        """1-based access: ``m[i, j]``."""
        i, j = rc
        return self.cells[i - 1][j - 1]

    @property
    def fault_count(self) -> int:
        return sum(sum(r) for r in self.cells)

    def padded(self, n: int) -> "FaultMatrix":
        """Zero-pad bottom/right so both dimensions are multiples of ``n``."""
        rows = -(-self.rows // n) * n
        cols = -(-self.cols // n) * n
        grid = [list(r) + [False] * (cols - self.cols) for r in self.cells]
        grid += [[False] * cols for _ in range(rows - self.rows)]
        return FaultMatrix(rows, cols, tuple(tuple(r) for r in grid))


def fault_coords(m: FaultMatrix) -> list[FaultCoord]:
    """All faulty cells, row-major ascending."""
    return [
        FaultCoord(i, j)
        for i, row in enumerate(m.cells, start=1)
        for j, cell in enumerate(row, start=1)
        if cell
    ]


def _parse_header(line: str) -> tuple[int, int, int]:
    parts = line.split()
    if len(parts) != 3:
        raise ParseError("header must be 'p q n'", 1)
    try:
        p, q, n = (int(x) for x in parts)
    except ValueError:
        raise ParseError(f"non-integer header {line!r}", 1) from None
    if p < 1 or q < 1 or n < 1:
        raise ParseError("header values must be positive", 1)
    return p, q, n


def parse_grid(text: str) -> tuple[FaultMatrix, TileConfig]:
    """Parse the ``p q n`` header + 0/1 grid format."""
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    p, q, n = _parse_header(lines[0])
    body = lines[1:]
    if len(body) != p:
        raise ParseError(f"expected {p} grid rows, found {len(body)}", len(lines))
    rows = []
    for lineno, ln in enumerate(body, start=2):
        if len(ln) != q:
            raise ParseError(f"ragged row: expected {q} characters, found {len(ln)}", lineno)
        bad = set(ln) - {"0", "1"}
        if bad:
            raise ParseError(f"invalid characters {''.join(sorted(bad))!r}", lineno)
        rows.append(tuple(ch == "1" for ch in ln))
    return FaultMatrix(p, q, tuple(rows)), TileConfig(n)


def parse_faultlist(text: str) -> tuple[FaultMatrix, TileConfig]:
    """Parse the ``p q n`` header + one ``i j`` pair per line format."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("empty input", 1)
    p, q, n = _parse_header(lines[0])
    coords = []
    for lineno, ln in enumerate(lines[1:], start=2):
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError("expected 'i j'", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer coordinate {ln.strip()!r}", lineno) from None
        if not (1 <= i <= p and 1 <= j <= q):
            raise ParseError(f"coordinate ({i},{j}) outside {p}x{q}", lineno)
        coords.append(FaultCoord(i, j))
    return FaultMatrix.from_coords(p, q, coords), TileConfig(n)


def parse_fault_matrix(text: str, fmt: str = "grid") -> FaultMatrix:
    if fmt == "grid":
        return parse_grid(text)[0]
    if fmt == "faultlist":
        return parse_faultlist(text)[0]
    raise ValueError(f"unknown format {fmt!r}")


def serialize_grid(m: FaultMatrix, t: TileConfig = TileConfig()) -> str:
    lines = [f"{m.rows} {m.cols} {t.n}"]
    lines += ["".join("1" if c else "0" for c in row) for row in m.cells]
    return "\n".join(lines) + "\n"


def serialize_faultlist(m: FaultMatrix, t: TileConfig = TileConfig()) -> str:
    lines = [f"{m.rows} {m.cols} {t.n}"]
    lines += [f"{c.row} {c.col}" for c in fault_coords(m)]
    return "\n".join(lines) + "\n"


def inject_faults(p: int, q: int, k: int, seed: int) -> FaultMatrix:
    """Mark exactly ``k`` distinct cells faulty, sampled without replacement."""
    if p < 1 or q < 1:
        raise ValueError(f"matrix dimensions must be positive, got {p}x{q}")
    if not 0 <= k <= p * q:
        raise ValueError(f"cannot place {k} faults in a {p}x{q} matrix")
    rng = random.Random(seed)
    picked = rng.sample(range(p * q), k)
    grid = [[False] * q for _ in range(p)]
    for idx in picked:
        grid[idx // q][idx % q] = True
    return FaultMatrix(p, q, tuple(tuple(r) for r in grid))


def render_ascii(
    m: FaultMatrix,
    t: TileConfig = TileConfig(),
    overlay: "Optional[RepairPlan | TileRepairResult]" = None,
) -> str:
    """Draw the matrix as text.

    Faulty blocks are ``X``, healthy ones ``.``. With an overlay (a line
    plan or a tile result), healthy blocks it repairs become ``o`` and
    repaired faults ``#``. Tile boundaries are drawn every ``t.n`` blocks
    when ``t.n > 1``.
    """
    covered = overlay.covered_blocks(m.rows, m.cols) if overlay is not None else set()

    n = t.n
    out = []
    for i, row in enumerate(m.cells, start=1):
        chars = []
        for j, cell in enumerate(row, start=1):
            if n > 1 and j > 1 and (j - 1) % n == 0:
                chars.append("|")
            if (i, j) in covered:
                chars.append("#" if cell else "o")
            else:
                chars.append("X" if cell else ".")
        if n > 1 and i > 1 and (i - 1) % n == 0:
            out.append("".join("+" if ch == "|" else "-" for ch in chars))
        out.append("".join(chars))
    return "\n".join(out) + "\n"
