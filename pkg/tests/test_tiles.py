import itertools
import random
from fractions import Fraction

import pytest

from fpga_repair.exact import CapacityError
from fpga_repair.model import FaultCoord, FaultMatrix, fault_coords, inject_faults
from fpga_repair.tiles import (
    BandAxis,
    CompressedMatrix,
    band_stats,
    brute_force_band_cover,
    choose_strategy,
    compress,
    coverage_quality,
    greedy_band,
    greedy_cover,
    solve_tiles,
    structurization,
)

from conftest import FIG2_COLS, FIG2_ROWS, SIX_BY_SIX_COLS, SIX_BY_SIX_ROWS


def bits(s):
    return [c == "1" for c in s]


def test_compress_six_by_six(six_by_six):
    assert compress(six_by_six, 3, BandAxis.ROWS).as_matrix() == SIX_BY_SIX_ROWS
    assert compress(six_by_six, 3, BandAxis.COLS).as_matrix() == SIX_BY_SIX_COLS


def test_compress_zero():
    c = compress(FaultMatrix.empty(6, 9), 3, BandAxis.ROWS)
    assert (c.bands, c.span) == (2, 9)
    assert not any(any(b) for b in c.cells)


def test_compress_rejects_non_divisible():
    m = FaultMatrix.empty(7, 6)
    with pytest.raises(ValueError, match="rows"):
        compress(m, 3, BandAxis.ROWS)
    compress(m, 3, BandAxis.COLS)
    with pytest.raises(ValueError, match="cols"):
        compress(FaultMatrix.empty(6, 7), 3, BandAxis.COLS)


def test_compress_or_soundness_random():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(1, 4)
        p, q = n * rng.randint(1, 4), n * rng.randint(1, 4)
        m = inject_faults(p, q, rng.randint(0, p * q), rng.getrandbits(32))
        r = compress(m, n, BandAxis.ROWS)
        for b in range(p // n):
            for j in range(q):
                assert r.cells[b][j] == any(m.cells[b * n + d][j] for d in range(n))
        c = compress(m, n, BandAxis.COLS)
        for b in range(q // n):
            for i in range(p):
                assert c.cells[b][i] == any(m.cells[i][b * n + d] for d in range(n))


def test_reconstructed_fig2_matches_printed_foldings(fig2_matrix):
    assert compress(fig2_matrix, 3, BandAxis.ROWS).as_matrix() == FIG2_ROWS
    assert compress(fig2_matrix, 3, BandAxis.COLS).as_matrix() == FIG2_COLS
    assert fig2_matrix.fault_count == 36


def test_structurization_fig2(fig2_rows, fig2_cols):
    q_r, stats = structurization(fig2_rows)
    assert q_r == Fraction(7, 14) + Fraction(6, 12) + Fraction(8, 13) + Fraction(6, 12) + Fraction(7, 13)
    assert [(s.ones, s.interval) for s in stats] == [(7, 14), (6, 12), (8, 13), (6, 12), (7, 13)]
    assert float(q_r) == pytest.approx(2.64, abs=0.02)
    q_c, stats = structurization(fig2_cols)
    assert q_c == Fraction(6, 12) + Fraction(7, 13) + Fraction(7, 14) + Fraction(7, 13) + Fraction(7, 14)
    assert float(q_c) == pytest.approx(2.58, abs=0.01)


def test_structurization_single_cell():
    c = CompressedMatrix.from_matrix(BandAxis.ROWS, 2, [[0, 0, 0], [0, 1, 0]])
    assert structurization(c)[0] == 1


def test_band_stats_empty_contributes_zero():
    s = band_stats(bits("0000"))
    assert s.ones == 0 and s.contribution == 0


@pytest.mark.parametrize(
    "q_r, q_c, expected",
    [
        (Fraction(69, 26), Fraction(67, 26), BandAxis.COLS),
        (Fraction(1), Fraction(2), BandAxis.ROWS),
        (Fraction(3, 2), Fraction(3, 2), BandAxis.COLS),
    ],
)
def test_choose_strategy(q_r, q_c, expected):
    assert choose_strategy(q_r, q_c) is expected


def test_greedy_fig2(fig2_rows, fig2_cols):
    placements, total = greedy_cover(fig2_rows)
    assert total == 21
    assert [len(greedy_band(b, 3)) for b in fig2_rows.cells] == [5, 4, 4, 4, 4]
    placements, total = greedy_cover(fig2_cols)
    assert total == 20
    assert [len(greedy_band(b, 3)) for b in fig2_cols.cells] == [3, 4, 4, 5, 4]


def test_greedy_simple_band():
    assert greedy_band(bits("111"), 3) == [1]
    assert greedy_band(bits("000"), 3) == []


def test_greedy_clamps_at_band_end():
    # band 1 of the printed row folding: last tile triggered at 15 is pulled back to 13
    starts = greedy_band(bits("010110010010101"), 3)
    assert starts == [2, 5, 8, 11, 13]
    assert all(start + 2 <= 15 for start in starts)


def test_greedy_covers_every_fault():
    rng = random.Random(13)
    for _ in range(50):
        n = rng.randint(1, 4)
        p, q = n * rng.randint(1, 5), n * rng.randint(1, 5)
        m = inject_faults(p, q, rng.randint(0, p * q // 2), rng.getrandbits(32))
        for axis in BandAxis:
            c = compress(m, n, axis)
            placements, _ = greedy_cover(c)
            covered = set().union(*(pl.blocks(n) for pl in placements)) if placements else set()
            assert all((f.row, f.col) in covered for f in fault_coords(m))
            assert all(1 <= i <= p and 1 <= j <= q for i, j in covered)


def test_coverage_quality():
    assert coverage_quality(36, 20) == Fraction(9, 5)
    assert float(coverage_quality(36, 21)) == pytest.approx(1.71, abs=0.005)
    assert coverage_quality(0, 0) is None
    with pytest.raises(RuntimeError):
        coverage_quality(3, 0)


def test_solve_tiles_fig2(fig2_matrix):
    r = solve_tiles(fig2_matrix, 3)
    assert r.strategy is BandAxis.COLS
    assert r.spares_used == 20 and r.spares_other_strategy == 21
    assert r.quality == Fraction(36, 20)
    assert r.criterion_choice is choose_strategy(r.q_r, r.q_c)


def test_solve_tiles_forced(fig2_matrix):
    r = solve_tiles(fig2_matrix, 3, BandAxis.ROWS)
    assert r.strategy is BandAxis.ROWS and r.spares_used == 21
    assert r.criterion_choice is BandAxis.COLS


def test_solve_tiles_empty_and_single():
    r = solve_tiles(FaultMatrix.empty(6, 6), 3)
    assert r.spares_used == 0 and r.placements == [] and r.quality is None
    m = FaultMatrix.from_coords(6, 6, [FaultCoord(5, 2)])
    r = solve_tiles(m, 3)
    assert r.spares_used == 1 and r.spares_other_strategy == 1


def test_solve_tiles_json_fields(fig2_matrix):
    d = solve_tiles(fig2_matrix, 3).to_dict()
    assert set(d) == {
        "strategy", "q_r", "q_c", "spares_used", "spares_other_strategy", "quality", "placements", "fault_total"
    }
    assert d["strategy"] == "cols" and d["quality"] == 1.8


def windows_by_enumeration(band, n):
    """Smallest set of in-band windows covering the band, scanning all window subsets."""
    span = len(band)
    starts = range(max(1, span - n + 1))
    need = {k for k, v in enumerate(band) if v}
    for size in range(len(starts) + 1):
        for combo in itertools.combinations(starts, size):
            if need <= {k for s in combo for k in range(s, s + n)}:
                return size


def test_brute_band_examples(fig2_rows):
    assert brute_force_band_cover(bits("010010000000000"), 3) == 2
    assert brute_force_band_cover(bits("0" * 10), 3) == 0
    assert brute_force_band_cover(fig2_rows.cells[0], 3) == 5


def test_brute_band_agrees_with_subset_enumeration():
    rng = random.Random(17)
    for _ in range(150):
        span = rng.randint(1, 12)
        n = rng.randint(1, span)
        band = [rng.random() < 0.35 for _ in range(span)]
        assert brute_force_band_cover(band, n) == windows_by_enumeration(band, n)


def test_brute_band_cap():
    with pytest.raises(CapacityError):
        brute_force_band_cover([True] * 25, 3)
