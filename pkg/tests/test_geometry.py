from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from peanokit.geometry import (
    ISOMETRIES,
    VERTICES,
    Point,
    SquareIsometry,
    apply_isometry,
    apply_to_cell,
    apply_to_vertex,
    compose,
    inverse,
    isometry_from_code,
    squared_distance,
)


def test_apply_examples():
    assert apply_isometry(SquareIsometry.E, Point.of(Fraction(1, 3), Fraction(1, 4))) == Point.of(
        Fraction(1, 3), Fraction(1, 4)
    )
    assert apply_isometry(SquareIsometry.R1, Point.of(1, 0)) == Point.of(1, 1)
    assert apply_isometry(SquareIsometry.MD, Point.of(1, 0)) == Point.of(0, 1)


def test_compose_examples():
    assert compose(SquareIsometry.E, SquareIsometry.R1) is SquareIsometry.R1
    assert compose(SquareIsometry.R1, SquareIsometry.R3) is SquareIsometry.E
    # derived pointwise: mx(my(v)) on all four vertices matches r2
    for vx, vy in VERTICES:
        via_pair = apply_to_vertex(SquareIsometry.MX, *apply_to_vertex(SquareIsometry.MY, vx, vy))
        assert via_pair == apply_to_vertex(SquareIsometry.R2, vx, vy)
    assert compose(SquareIsometry.MX, SquareIsometry.MY) is SquareIsometry.R2


def test_compose_matches_pointwise_everywhere():
    probe = [Point.of(Fraction(1, 3), Fraction(1, 7)), Point.of(0, 1), Point.of(1, 1)]
    for a in ISOMETRIES:
        for b in ISOMETRIES:
            c = compose(a, b)
            for p in probe:
                assert apply_isometry(c, p) == apply_isometry(a, apply_isometry(b, p))


def test_group_laws():
    e = SquareIsometry.E
    for a in ISOMETRIES:
        assert compose(e, a) is a
        assert compose(a, e) is a
        assert compose(a, inverse(a)) is e
        assert compose(inverse(a), a) is e
    for a in ISOMETRIES:
        for b in ISOMETRIES:
            for c in ISOMETRIES:
                assert compose(compose(a, b), c) is compose(a, compose(b, c))


def test_action_faithful():
    perms = {
        iso: tuple(apply_to_vertex(iso, vx, vy) for vx, vy in VERTICES)
        for iso in ISOMETRIES
    }
    assert len(set(perms.values())) == 8


def test_each_isometry_maps_square_onto_itself():
    for iso in ISOMETRIES:
        images = {apply_to_vertex(iso, vx, vy) for vx, vy in VERTICES}
        assert images == set(VERTICES)
        # interior point stays interior
        p = apply_isometry(iso, Point.of(Fraction(1, 3), Fraction(2, 7)))
        assert 0 < p.x < 1 and 0 < p.y < 1


def test_cell_action_matches_point_action():
    k = 3
    for iso in ISOMETRIES:
        for col in range(k):
            for row in range(k):
                u, v = apply_to_cell(iso, col, row, k)
                center = Point.of(Fraction(2 * col + 1, 2 * k), Fraction(2 * row + 1, 2 * k))
                image = apply_isometry(iso, center)
                assert image == Point.of(Fraction(2 * u + 1, 2 * k), Fraction(2 * v + 1, 2 * k))


def test_squared_distance_examples():
    assert squared_distance(Point.of(0, 0), Point.of(0, 0)) == 0
    assert squared_distance(Point.of(0, 0), Point.of(1, 1)) == 2
    assert squared_distance(Point.of(0, 0), Point.of(Fraction(1, 2), 1)) == Fraction(5, 4)


rationals = st.fractions(min_value=-2, max_value=2, max_denominator=64)


@given(ax=rationals, ay=rationals, bx=rationals, by=rationals)
def test_squared_distance_symmetric_and_definite(ax, ay, bx, by):
    p, q = Point.of(ax, ay), Point.of(bx, by)
    d = squared_distance(p, q)
    assert d == squared_distance(q, p)
    assert d >= 0
    assert (d == 0) == (p == q)


def test_isometry_codes_round_trip():
    for iso in ISOMETRIES:
        assert isometry_from_code(iso.code) is iso
    with pytest.raises(ValueError, match="valid codes"):
        isometry_from_code("rx")
