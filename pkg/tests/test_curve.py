from fractions import Fraction

import pytest

from peanokit.curve import (
    AccelerationClass,
    AffineMap,
    Cell,
    CurveClass,
    FractalCurve,
    FractionSpec,
    Shape,
    acceleration_class,
    classify,
    corner_moments,
    displacement,
    entry_exit,
    fraction_frame,
    fraction_shape,
    frame_for_path,
    internal_corner_moments,
    is_turn,
    validate,
)
from peanokit.errors import InvalidCurveError
from peanokit.evaluate import evaluate_exact
from peanokit.geometry import ISOMETRIES, Point, isometry_from_code

from conftest import spec


def test_structural_checks():
    with pytest.raises(ValueError, match="base divisor"):
        FractalCurve(1, [])
    with pytest.raises(ValueError, match="expected 4 fractions"):
        FractalCurve(2, [spec(0, 0, "e")])
    with pytest.raises(ValueError, match="outside"):
        FractalCurve(2, [spec(0, 0, "e"), spec(0, 2, "e"), spec(1, 1, "e"), spec(1, 0, "e")])


def test_validate_hilbert(hilbert):
    report = validate(hilbert)
    assert report.ok
    assert report.issues == ()
    assert report.junction_contacts == ("side", "side", "side")


def test_validate_duplicate_cell(hilbert):
    bad = FractalCurve(
        2, [spec(0, 0, "md"), spec(0, 0, "e"), spec(1, 1, "e"), spec(1, 0, "ma")]
    )
    report = validate(bad)
    assert not report.ok
    assert any("cells not a partition" in issue for issue in report.issues)


def test_validate_broken_isometry():
    bad = FractalCurve(
        2, [spec(0, 0, "md"), spec(0, 1, "r2"), spec(1, 1, "e"), spec(1, 0, "ma")]
    )
    report = validate(bad)
    assert any("continuity failure at junction 0-1" in issue or
               "continuity failure at junction 1-2" in issue for issue in report.issues)


def test_entry_exit_hilbert(hilbert):
    entry, exit_ = entry_exit(hilbert)
    assert entry == Point.of(0, 0)
    assert exit_ == Point.of(1, 0)


def test_entry_exit_forward_identity_start():
    # any curve starting forward with iso e at cell (0,0) enters at the origin
    curve = FractalCurve(
        2, [spec(0, 0, "e"), spec(1, 0, "mx"), spec(1, 1, "ma"), spec(0, 1, "r2")]
    )
    assert entry_exit(curve)[0] == Point.of(0, 0)


def test_entry_exit_diagonal(diag9):
    entry, exit_ = entry_exit(diag9)
    assert entry == Point.of(0, 0)
    assert exit_ == Point.of(1, 1)


def test_entry_exit_are_fixed_points(hilbert, diag9, genus9_minimal):
    # entry/exit satisfy the self-similarity identities they were solved from
    for curve in (hilbert, diag9, genus9_minimal):
        entry, exit_ = entry_exit(curve)
        assert evaluate_exact(curve, Fraction(0)) == entry
        assert evaluate_exact(curve, Fraction(1)) == exit_


def test_classify(hilbert, diag9):
    assert classify(hilbert) is CurveClass.ONE_SIDED
    assert classify(diag9) is CurveClass.DIAGONAL
    left_side = FractalCurve(
        2, [spec(0, 1, "r2"), spec(1, 1, "mx"), spec(1, 0, "e"), spec(0, 0, "r3", True)]
    )
    report = validate(left_side)
    if report.ok:
        entry, exit_ = entry_exit(left_side)
        if entry.x == exit_.x:
            assert classify(left_side) is CurveClass.ONE_SIDED


def test_classify_rejects_broken_ends():
    # entry and exit both solve to the same vertex
    coincident = FractalCurve(
        2, [spec(0, 0, "e"), spec(0, 1, "e"), spec(1, 1, "e"), spec(0, 0, "e")]
    )
    with pytest.raises(InvalidCurveError):
        classify(coincident)
    # reversed first fraction drags the entry to a mid-side point
    midpoint = FractalCurve(
        2, [spec(0, 0, "e", True), spec(0, 1, "e"), spec(1, 1, "e"), spec(1, 0, "e")]
    )
    with pytest.raises(InvalidCurveError):
        classify(midpoint)


def test_fraction_frame_examples(hilbert):
    ident, rev = fraction_frame(hilbert, ())
    assert not rev
    assert ident == AffineMap.identity()

    first, rev = fraction_frame(hilbert, (0,))
    assert not rev
    # md then scale into cell (0,0): p -> (y/2, x/2)
    assert first.apply(Point.of(1, 0)) == Point.of(0, Fraction(1, 2))

    composed, rev = fraction_frame(hilbert, (0, 3))
    assert not rev
    # hand-computed: md at (0,0) after ma at (1,0) is p -> ((1-x)/4, (2-y)/4)
    expected = AffineMap(
        Fraction(-1, 4), Fraction(0), Fraction(0), Fraction(-1, 4),
        Fraction(1, 4), Fraction(1, 2),
    )
    assert composed == expected


def test_frame_image_is_fraction_square(hilbert, diag9):
    for curve in (hilbert, diag9):
        g = curve.genus
        for path in [(0,), (g - 1,), (1, 2), (0, g - 1, 3)]:
            frame = frame_for_path(curve, path)
            m, rev = fraction_frame(curve, path)
            side = Fraction(1, curve.k**frame.depth)
            corners = [m.apply(Point.of(x, y)) for x in (0, 1) for y in (0, 1)]
            xs = sorted(p.x for p in corners)
            ys = sorted(p.y for p in corners)
            assert xs[0] == frame.x * side and xs[-1] == (frame.x + 1) * side
            assert ys[0] == frame.y * side and ys[-1] == (frame.y + 1) * side


def test_corner_moments_hilbert(hilbert):
    moments = corner_moments(hilbert)
    assert [(m.vertex, m.time) for m in moments] == [
        ((0, 0), Fraction(0)),
        ((0, 1), Fraction(1, 3)),
        ((1, 1), Fraction(2, 3)),
        ((1, 0), Fraction(1)),
    ]


def test_corner_moments_round_trip(regression_curves):
    for curve in regression_curves.values():
        moments = corner_moments(curve)
        times = [m.time for m in moments]
        assert times[0] == 0 and times[-1] == 1
        assert all(a < b for a, b in zip(times, times[1:]))
        for m in moments:
            p = evaluate_exact(curve, m.time)
            assert (p.x, p.y) == (Fraction(m.vertex[0]), Fraction(m.vertex[1]))


def test_internal_corner_moments(hilbert):
    assert internal_corner_moments(hilbert, ()) == (Fraction(1, 3), Fraction(2, 3))
    lo, hi = internal_corner_moments(hilbert, (0,))
    assert Fraction(0) < lo < hi < Fraction(1, 4)
    assert (lo, hi) == (Fraction(1, 12), Fraction(1, 6))


def test_internal_corner_moments_reversal(regression_curves):
    # reversing the whole curve mirrors every fraction's internal moments
    for curve in regression_curves.values():
        g = curve.genus
        rev = curve.reverse()
        for i in range(g):
            a, b = internal_corner_moments(curve, (i,))
            ra, rb = internal_corner_moments(rev, (g - 1 - i,))
            assert (ra, rb) == (1 - b, 1 - a)


def test_fraction_shape(hilbert, diag9):
    assert fraction_shape(hilbert, ()) is Shape.N  # entry (0,0), first vertex (0,1)
    shapes = {fraction_shape(diag9, (i,)) for i in range(9)}
    assert shapes <= {Shape.Z, Shape.N}
    z_curve = hilbert.conjugate(isometry_from_code("md"))
    assert fraction_shape(z_curve, ()) is Shape.Z


def test_acceleration_class(hilbert, genus9_minimal):
    assert acceleration_class(hilbert, ()) is AccelerationClass.NEUTRAL
    assert acceleration_class(hilbert, (0,)) is AccelerationClass.NEUTRAL
    q, nums, _ = genus9_minimal.corner_time_table
    front, back = nums[1], q - nums[2]
    expected = (
        AccelerationClass.ACCELERATING if front > back
        else AccelerationClass.DECELERATING if front < back
        else AccelerationClass.NEUTRAL
    )
    assert acceleration_class(genus9_minimal, ()) is expected


def test_displacement_and_turns(hilbert, diag9):
    assert displacement(hilbert, ()) == (Fraction(1), Fraction(0))
    assert displacement(diag9, ()) == (Fraction(1), Fraction(1))
    assert displacement(hilbert, (0,)) == (Fraction(0), Fraction(1, 2))
    assert [is_turn(hilbert, i) for i in range(3)] == [True, False, True]
    with pytest.raises(ValueError):
        is_turn(hilbert, 3)


def test_reverse_is_valid_and_mirrors_moments(regression_curves):
    for curve in regression_curves.values():
        rev = curve.reverse()
        assert validate(rev).ok
        orig = corner_moments(curve)
        mirrored = corner_moments(rev)
        assert [m.vertex for m in mirrored] == [m.vertex for m in reversed(orig)]
        assert [m.time for m in mirrored] == [1 - m.time for m in reversed(orig)]
        assert rev.reverse() == curve


def test_conjugates_are_valid(hilbert, diag9):
    for curve in (hilbert, diag9):
        for iso in ISOMETRIES:
            assert validate(curve.conjugate(iso)).ok


def test_canonical_key_consistency(hilbert, diag9, genus9_minimal):
    for curve in (hilbert, diag9, genus9_minimal):
        assert curve.canonical_key == curve.canonical_form().serial_key()
        for other in curve.symmetry_orbit():
            assert other.canonical_key == curve.canonical_key


def test_serialization_round_trip(regression_curves):
    for curve in regression_curves.values():
        assert FractalCurve.from_dict(curve.to_dict()) == curve


def test_from_dict_errors():
    with pytest.raises(ValueError, match="missing field 'k'"):
        FractalCurve.from_dict({"fractions": []})
    with pytest.raises(ValueError, match="fractions\\[0\\]"):
        FractalCurve.from_dict({"k": 2, "fractions": [{"cell": [0, 0]}]})
    with pytest.raises(ValueError, match="valid codes"):
        FractalCurve.from_dict(
            {"k": 2, "fractions": [{"cell": [0, 0], "iso": "zz"}] * 4}
        )
