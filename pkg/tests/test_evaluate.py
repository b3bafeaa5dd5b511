from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from peanokit.errors import ResourceCapError
from peanokit.evaluate import (
    ScanOrder,
    _convex_hull,
    _diameter_sq,
    _hull_diameter_sq,
    blob_metrics,
    evaluate,
    evaluate_exact,
    scan_order,
)
from peanokit.geometry import Point


def test_exact_endpoints(hilbert):
    assert evaluate_exact(hilbert, Fraction(0)) == Point.of(0, 0)
    assert evaluate_exact(hilbert, Fraction(1)) == Point.of(1, 0)


def test_exact_fraction_boundary(hilbert):
    assert evaluate_exact(hilbert, Fraction(1, 4)) == Point.of(0, Fraction(1, 2))
    assert evaluate_exact(hilbert, Fraction(1, 2)) == Point.of(Fraction(1, 2), Fraction(1, 2))


def test_exact_corner_moment_round_trip(hilbert):
    assert evaluate_exact(hilbert, Fraction(1, 3)) == Point.of(0, 1)
    assert evaluate_exact(hilbert, Fraction(2, 3)) == Point.of(1, 1)


def test_enclosure_entry(hilbert, diag9):
    for curve in (hilbert, diag9):
        enc = evaluate(curve, Fraction(0), 3)
        assert enc.contains(evaluate_exact(curve, Fraction(0)))
        assert enc.cell == (0, 0)


def test_enclosure_boundary_tie_break(hilbert):
    # t = 1/2 sits between fractions 1 and 2; the earlier one wins
    enc = evaluate(hilbert, Fraction(1, 2), 1)
    assert enc.cell == (0, 1)


def test_enclosure_deep_corner(hilbert):
    enc = evaluate(hilbert, Fraction(1, 3), 8)
    assert enc.side == Fraction(1, 256)
    assert enc.contains(Point.of(0, 1))
    assert enc.cell == (0, 255)


@settings(max_examples=80, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=3000), st.integers(0, 6))
def test_enclosure_contains_exact_hilbert(t, depth):
    from conftest import spec
    from peanokit.curve import FractalCurve

    curve = FractalCurve(
        2, [spec(0, 0, "md"), spec(0, 1, "e"), spec(1, 1, "e"), spec(1, 0, "ma")]
    )
    p = evaluate_exact(curve, t)
    assert evaluate(curve, t, depth).contains(p)


def test_enclosure_contains_exact_all(regression_curves):
    times = [Fraction(i, 17) for i in range(18)] + [Fraction(5, 9), Fraction(13, 27)]
    for curve in regression_curves.values():
        for t in times:
            p = evaluate_exact(curve, t)
            for depth in (1, 2, 4):
                assert evaluate(curve, t, depth).contains(p)


def test_time_bounds_checked(hilbert):
    with pytest.raises(ValueError):
        evaluate_exact(hilbert, Fraction(3, 2))
    with pytest.raises(ValueError):
        evaluate(hilbert, Fraction(-1, 2), 2)


def test_scan_depth_zero_and_one(hilbert):
    assert scan_order(hilbert, 0).cells == ((0, 0),)
    assert scan_order(hilbert, 1).cells == ((0, 0), (0, 1), (1, 1), (1, 0))


def test_scan_depth_two_prefix(hilbert):
    cells = scan_order(hilbert, 2).cells
    assert cells[:5] == ((0, 0), (1, 0), (1, 1), (0, 1), (0, 2))
    assert len(set(cells)) == 16


@pytest.mark.parametrize("depth", [1, 2, 3, 4, 5])
def test_scan_bijection_and_adjacency(hilbert, depth):
    order = scan_order(hilbert, depth)
    w = order.width
    assert len(order.cells) == w * w
    assert len(set(order.cells)) == w * w
    for (ax, ay), (bx, by) in zip(order.cells, order.cells[1:]):
        # all Hilbert junctions are side contacts, so scan steps are too
        assert abs(ax - bx) + abs(ay - by) == 1


def test_scan_adjacency_with_vertex_junctions(diag9):
    order = scan_order(diag9, 2)
    assert len(set(order.cells)) == 81
    for (ax, ay), (bx, by) in zip(order.cells, order.cells[1:]):
        assert max(abs(ax - bx), abs(ay - by)) == 1  # closed squares intersect


def test_scan_matches_enclosures(hilbert):
    # cell visited m-th at depth n encloses f at the period midpoint
    order = scan_order(hilbert, 3)
    g = hilbert.genus
    for m in (0, 5, 17, 63):
        t = Fraction(2 * m + 1, 2 * g**3)
        assert evaluate(hilbert, t, 3).cell == order.cells[m]


def test_scan_cap():
    from conftest import spec
    from peanokit.curve import FractalCurve

    curve = FractalCurve(
        2, [spec(0, 0, "md"), spec(0, 1, "e"), spec(1, 1, "e"), spec(1, 0, "ma")]
    )
    with pytest.raises(ResourceCapError):
        scan_order(curve, 3, max_cells=63)


def test_blob_single_pixel(hilbert):
    order = scan_order(hilbert, 2)
    blob = blob_metrics(order, 3, 3)
    assert (blob.area, blob.diameter_sq, blob.elongation) == (1, 0, Fraction(0))


def test_blob_two_adjacent(hilbert):
    order = scan_order(hilbert, 1)
    blob = blob_metrics(order, 0, 1)
    assert (blob.area, blob.diameter_sq, blob.elongation) == (2, 1, Fraction(1, 2))


def test_blob_row_major_full_row():
    cells = tuple((c, r) for r in range(8) for c in range(8))
    order = ScanOrder(8, 1, cells)
    blob = blob_metrics(order, 0, 7)
    assert (blob.area, blob.diameter_sq, blob.elongation) == (8, 49, Fraction(49, 8))


def test_blob_bounds_checked(hilbert):
    order = scan_order(hilbert, 1)
    with pytest.raises(ValueError):
        blob_metrics(order, 2, 1)
    with pytest.raises(ValueError):
        blob_metrics(order, 0, 4)


def test_locality_hilbert_vs_row_major(hilbert):
    # windows one row long: row-major blobs stretch across the grid while
    # Hilbert blobs stay near-round; checked exhaustively at depth 5
    depth = 5
    w = 2**depth
    hil = scan_order(hilbert, depth)
    row = ScanOrder(w, 1, tuple((c, r) for r in range(w) for c in range(w)))

    def max_elongation(order):
        best = Fraction(0)
        for start in range(0, w * w - w + 1, 7):  # stride keeps runtime sane
            blob = blob_metrics(order, start, start + w - 1)
            best = max(best, blob.elongation)
        return best

    row_worst = max_elongation(row)
    hil_worst = max_elongation(hil)
    assert row_worst >= Fraction((w - 1) ** 2, w)
    assert hil_worst <= 8
    assert hil_worst * 4 < row_worst


@given(
    st.lists(
        st.tuples(st.integers(0, 60), st.integers(0, 60)),
        min_size=1,
        max_size=120,
    )
)
def test_hull_diameter_matches_exhaustive(points):
    exhaustive = 0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            dx = points[i][0] - points[j][0]
            dy = points[i][1] - points[j][1]
            exhaustive = max(exhaustive, dx * dx + dy * dy)
    hull = _convex_hull(sorted(set(points)))
    assert _hull_diameter_sq(hull) == exhaustive


def test_large_blob_uses_hull_path(hilbert):
    order = scan_order(hilbert, 4)
    full = blob_metrics(order, 0, 255)
    assert full.diameter_sq == _diameter_sq(order.cells)
    assert full.diameter_sq == 2 * 15 * 15
