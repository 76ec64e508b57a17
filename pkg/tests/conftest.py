from pathlib import Path

import pytest

from fpga_repair.model import FaultCoord, FaultMatrix, parse_grid
from fpga_repair.tiles import BandAxis, CompressedMatrix

DATA = Path(__file__).parent / "data"

# Example 2.2: ten faults on a 10x10 functional grid, spares at 11..15 / 11..12
EX22_FAULTS = [
    FaultCoord(*rc)
    for rc in [(2, 2), (2, 5), (2, 8), (4, 3), (5, 5), (5, 8), (7, 2), (8, 5), (9, 3), (9, 7)]
]

SIX_BY_SIX = [
    [0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 1],
    [0, 1, 1, 0, 1, 0],
    [1, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 0],
    [0, 1, 0, 1, 0, 1],
]
SIX_BY_SIX_ROWS = [[0, 1, 1, 0, 1, 1], [1, 1, 0, 1, 1, 1]]
SIX_BY_SIX_COLS = [[0, 1], [0, 1], [1, 1], [1, 1], [0, 1], [1, 1]]

FIG2_ROWS = [
    [int(c) for c in line]
    for line in [
        "010110010010101",
        "001010010011010",
        "011110101001010",
        "001000100101110",
        "010101010101010",
    ]
]
FIG2_COLS = [
    [int(c) for c in line]
    for line in "00100 11011 01100 10001 01110 00010 10101 01010 11101 00000 10111 00011 11000 01110 00001".split()
]


@pytest.fixture
def ex22_faults():
    return list(EX22_FAULTS)


@pytest.fixture
def fig2_rows():
    return CompressedMatrix.from_matrix(BandAxis.ROWS, 3, FIG2_ROWS)


@pytest.fixture
def fig2_cols():
    return CompressedMatrix.from_matrix(BandAxis.COLS, 3, FIG2_COLS)


@pytest.fixture
def fig2_matrix() -> FaultMatrix:
    """Block layout rebuilt so that both foldings match the printed ones (36 faults)."""
    m, _ = parse_grid((DATA / "fig2.grid").read_text())
    return m


@pytest.fixture
def six_by_six() -> FaultMatrix:
    return FaultMatrix.from_rows(SIX_BY_SIX)


ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(label)`` inside the test, outcome filled in on teardown."""
    entry = {}

    def record(label: str) -> None:
        entry["label"] = label

    yield record
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    detail = ""
    if rep is not None and not passed and hasattr(rep.longrepr, "reprcrash"):
        detail = rep.longrepr.reprcrash.message
    ACCEPTANCE_RESULTS.append((entry.get("label", request.node.name), passed, detail))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE_RESULTS:
        line = f"{'PASS' if passed else 'FAIL'}  {label}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
