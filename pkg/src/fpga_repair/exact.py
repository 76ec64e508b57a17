"""Exact minimum spare row/column repair.

Each fault at (i, j) can be repaired by replacing column j or row i, so the
set of faults becomes a CNF of two-literal clauses over line variables.
Multiplying it out (with absorption) gives every irredundant cover as a DNF
term; the shortest terms that fit the spare budget are the repair plans.

Terms are ints used as bit vectors over ``CoverageTable.lines``: bit ``k``
set means line ``lines[k]`` is replaced.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .model import FaultCoord, SpareBudget

DEFAULT_CLAUSE_CAP = 24
ORACLE_LINE_CAP = 20
COMPLEXITY_LIMIT = 2**63 - 1


class CapacityError(RuntimeError):
    """Instance is too large for an exhaustive method."""


class Axis(enum.Enum):
    COLUMN = "C"
    ROW = "R"


@dataclass(frozen=True)
class LineId:
    axis: Axis
    index: int

    def sort_key(self) -> tuple[int, int]:
        # columns before rows, matching the C*R variable numbering
        return (0 if self.axis is Axis.COLUMN else 1, self.index)

    def __lt__(self, other: "LineId") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{self.axis.value}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "LineId":
        return cls(Axis(text[0].upper()), int(text[1:]))


def col(j: int) -> LineId:
    return LineId(Axis.COLUMN, j)


def row(i: int) -> LineId:
    return LineId(Axis.ROW, i)


@dataclass(frozen=True)
class Clause:
    column: LineId
    row: LineId

    def __post_init__(self):
        if self.column.axis is not Axis.COLUMN or self.row.axis is not Axis.ROW:
            raise ValueError("a clause needs one column literal and one row literal")

    @property
    def literals(self) -> tuple[LineId, LineId]:
        return (self.column, self.row)

    def __str__(self) -> str:
        return f"({self.column} v {self.row})"


@dataclass(frozen=True)
class CoverageTable:
    faults: tuple[FaultCoord, ...]
    lines: tuple[LineId, ...]
    incidence: tuple[tuple[bool, ...], ...]  # lines x faults

    def index(self, line: LineId) -> int:
        return self.lines.index(line)

    def term(self, lines: Iterable[LineId]) -> int:
        mask = 0
        for ln in lines:
            mask |= 1 << self.index(ln)
        return mask

    def decode(self, term: int) -> list[LineId]:
        return [ln for k, ln in enumerate(self.lines) if term >> k & 1]

    def variable_name(self, line: LineId) -> str:
        return f"X{self.index(line) + 1}"


def build_coverage_table(faults: Sequence[FaultCoord]) -> CoverageTable:
    if not faults:
        raise ValueError("coverage table needs at least one fault")
    if len(set(faults)) != len(faults):
        raise ValueError("duplicate fault coordinates")
    cols = sorted({f.col for f in faults})
    rows = sorted({f.row for f in faults})
    lines = tuple([col(j) for j in cols] + [row(i) for i in rows])
    incidence = tuple(
        tuple(
            (ln.axis is Axis.COLUMN and ln.index == f.col) or (ln.axis is Axis.ROW and ln.index == f.row)
            for f in faults
        )
        for ln in lines
    )
    return CoverageTable(tuple(faults), lines, incidence)


def synthesize_cnf(table: CoverageTable) -> list[Clause]:
    cnf = []
    for k, f in enumerate(table.faults):
        hits = [ln for ln, inc in zip(table.lines, table.incidence) if inc[k]]
        if len(hits) != 2:
            raise ValueError(f"fault {f} is covered by {len(hits)} lines, expected 2")
        c, r = sorted(hits)
        cnf.append(Clause(c, r))
    return cnf


def _absorb(terms: Iterable[int]) -> list[int]:
    """Drop duplicates and every term that is a superset of another."""
    kept: list[int] = []
    for t in sorted(set(terms), key=int.bit_count):
        if not any(k & t == k for k in kept):
            kept.append(t)
    return kept


def term_key(term: int) -> tuple[int, tuple[int, ...]]:
    """Canonical order: size, then ascending literal positions."""
    return (term.bit_count(), tuple(k for k in range(term.bit_length()) if term >> k & 1))


def expand_to_dnf(
    cnf: Sequence[Clause],
    table: Optional[CoverageTable] = None,
    cap: int = DEFAULT_CLAUSE_CAP,
) -> list[int]:
    """Multiply out a two-literal CNF into an absorption-closed DNF.

    Absorption runs after every clause so the intermediate term list stays
    small. ``table`` fixes the bit positions; it is derived from the clauses
    when omitted.
    """
    if len(cnf) > cap:
        raise CapacityError(
            f"{len(cnf)} clauses exceeds the exact solver cap of {cap}; "
            "use the tile-cover heuristic for large fault sets"
        )
    if table is None:
        table = build_coverage_table([FaultCoord(c.row.index, c.column.index) for c in cnf])
    pos = {ln: k for k, ln in enumerate(table.lines)}

    terms = [0]
    for clause in cnf:
        a = 1 << pos[clause.column]
        b = 1 << pos[clause.row]
        product = []
        for t in terms:
            if t & (a | b):
                product.append(t)
            else:
                product.append(t | a)
                product.append(t | b)
        terms = _absorb(product)
    return sorted(terms, key=term_key)


def minimal_covers(dnf: Sequence[int]) -> list[int]:
    if not dnf:
        raise ValueError("empty DNF has no covers")
    size = min(t.bit_count() for t in dnf)
    return sorted({t for t in dnf if t.bit_count() == size}, key=term_key)


def satisfies(term: int, cnf: Sequence[Clause], table: CoverageTable) -> bool:
    lines = set(table.decode(term))
    return all(c.column in lines or c.row in lines for c in cnf)


def estimate_complexity(m: int, lines: Optional[int] = None) -> int:
    """Operation-count estimate for the exact method.

    ``2**m + lines * 2**m`` for ``m`` faults and ``lines`` candidate lines.
    Without ``lines`` the worst case of ``2*m`` uncorrelated lines is used,
    which reduces to ``2**m * (2m + 1)``. Results past ``COMPLEXITY_LIMIT``
    saturate to it.
    """
    if m < 0:
        raise ValueError("fault count must be non-negative")
    if lines is None:
        lines = 2 * m
    if lines < 0:
        raise ValueError("line count must be non-negative")
    if m >= 63:
        return COMPLEXITY_LIMIT
    return min((1 << m) * (1 + lines), COMPLEXITY_LIMIT)


@dataclass(frozen=True)
class Readdress:
    source: LineId
    target: LineId


@dataclass
class RepairPlan:
    table: Optional[CoverageTable]
    cnf: list[Clause]
    chosen: int
    all_minimum: list[int]
    readdress: list[Readdress]
    cost_estimate: int
    feasible: bool
    global_minimum: list[int] = field(default_factory=list)

    def lines(self, term: Optional[int] = None) -> list[LineId]:
        if self.table is None:
            return []
        return self.table.decode(self.chosen if term is None else term)

    def covered_blocks(self, rows: int, cols: int) -> set[tuple[int, int]]:
        if not self.feasible:
            return set()
        blocks = set()
        for ln in self.lines():
            if ln.axis is Axis.COLUMN:
                blocks.update((i, ln.index) for i in range(1, rows + 1))
            else:
                blocks.update((ln.index, j) for j in range(1, cols + 1))
        return blocks

    def to_dict(self) -> dict:
        names = lambda t: [str(ln) for ln in self.lines(t)]  # noqa: E731
        return {
            "faults": [[f.row, f.col] for f in (self.table.faults if self.table else ())],
            "lines": [str(ln) for ln in (self.table.lines if self.table else ())],
            "cnf": [[str(c.column), str(c.row)] for c in self.cnf],
            "minimum_covers": [names(t) for t in self.all_minimum],
            "chosen": names(self.chosen),
            "readdress": [
                {"from": r.source.index, "to": r.target.index, "axis": r.source.axis.name.lower()}
                for r in self.readdress
            ],
            "feasible": self.feasible,
            "cost_estimate": self.cost_estimate,
        }


def _axis_counts(term: int, table: CoverageTable) -> tuple[int, int]:
    ncols = sum(1 for ln in table.decode(term) if ln.axis is Axis.COLUMN)
    return ncols, term.bit_count() - ncols


def select_repair_plan(
    faults: Sequence[FaultCoord],
    budget: SpareBudget,
    shape: Optional[tuple[int, int]] = None,
    cap: int = DEFAULT_CLAUSE_CAP,
) -> RepairPlan:
    """Find a minimum spare assignment within ``budget`` and its readdress map.

    ``shape`` is the functional grid (rows, cols); default spare ids start just
    past it. Without ``shape`` the largest fault coordinates stand in.
    Among equal-size feasible covers the one with fewer rows wins, then the
    lexicographically first.
    """
    if shape is None:
        shape = (max((f.row for f in faults), default=0), max((f.col for f in faults), default=0))
    nrows, ncols = shape
    budget.validate_against(nrows, ncols)

    if not faults:
        return RepairPlan(None, [], 0, [0], [], estimate_complexity(0, 0), True, [0])

    table = build_coverage_table(faults)
    cnf = synthesize_cnf(table)
    dnf = expand_to_dnf(cnf, table, cap=cap)
    cost = estimate_complexity(len(faults), len(table.lines))
    global_min = minimal_covers(dnf)

    def fits(term: int) -> bool:
        ncol, nrow = _axis_counts(term, table)
        return ncol <= budget.spare_cols and nrow <= budget.spare_rows

    feasible = [t for t in dnf if fits(t)]
    if not feasible:
        return RepairPlan(table, cnf, global_min[0], [], [], cost, False, global_min)

    best = minimal_covers(feasible)
    chosen = min(best, key=lambda t: (_axis_counts(t, table)[1], term_key(t)))

    col_ids = budget.spare_col_ids or tuple(range(ncols + 1, ncols + 1 + budget.spare_cols))
    row_ids = budget.spare_row_ids or tuple(range(nrows + 1, nrows + 1 + budget.spare_rows))
    picked = table.decode(chosen)
    readdress = [
        Readdress(src, col(dst))
        for src, dst in zip([ln for ln in picked if ln.axis is Axis.COLUMN], sorted(col_ids))
    ] + [
        Readdress(src, row(dst))
        for src, dst in zip([ln for ln in picked if ln.axis is Axis.ROW], sorted(row_ids))
    ]
    return RepairPlan(table, cnf, chosen, best, readdress, cost, True, global_min)


@dataclass(frozen=True)
class OracleCover:
    lines: frozenset[LineId]
    matching_size: int

    @property
    def size(self) -> int:
        return len(self.lines)


def _max_bipartite_matching(edges: Iterable[tuple[int, int]]) -> int:
    adj: dict[int, list[int]] = {}
    for r, c in edges:
        adj.setdefault(r, []).append(c)
    match_of_col: dict[int, int] = {}

    def augment(r: int, seen: set[int]) -> bool:
        for c in adj[r]:
            if c in seen:
                continue
            seen.add(c)
            if c not in match_of_col or augment(match_of_col[c], seen):
                match_of_col[c] = r
                return True
        return False

    return sum(augment(r, set()) for r in adj)


def brute_force_min_cover(faults: Sequence[FaultCoord], cap: int = ORACLE_LINE_CAP) -> OracleCover:
    """Smallest line set hitting every fault, by enumerating subsets by size.

    Also reports the maximum matching between fault rows and fault columns;
    by Konig's theorem the two sizes agree.
    """
    faults = list(dict.fromkeys(faults))
    candidates = sorted({col(f.col) for f in faults} | {row(f.row) for f in faults})
    if len(candidates) > cap:
        raise CapacityError(f"{len(candidates)} candidate lines exceeds oracle cap of {cap}")
    matching = _max_bipartite_matching((f.row, f.col) for f in faults)
    if not faults:
        return OracleCover(frozenset(), matching)

    full = (1 << len(faults)) - 1
    hit = []
    for ln in candidates:
        mask = 0
        for k, f in enumerate(faults):
            if (ln.axis is Axis.COLUMN and f.col == ln.index) or (ln.axis is Axis.ROW and f.row == ln.index):
                mask |= 1 << k
        hit.append(mask)

    for size in range(1, len(candidates) + 1):
        for combo in itertools.combinations(range(len(candidates)), size):
            acc = 0
            for k in combo:
                acc |= hit[k]
            if acc == full:
                return OracleCover(frozenset(candidates[k] for k in combo), matching)
    raise AssertionError("the full candidate set always covers")  # pragma: no cover
