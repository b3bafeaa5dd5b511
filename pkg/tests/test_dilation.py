from fractions import Fraction

import pytest

from peanokit.dilation import (
    SearchNode,
    _canonical_junction,
    dilation,
    dilation_via_junctions,
    dilation_with_shared_incumbent,
    junction_classes,
    junction_ratio,
    node_upper_bound,
)
from peanokit.errors import InvalidCurveError
from peanokit.evaluate import evaluate_exact
from peanokit.geometry import ISOMETRIES, squared_distance
from peanokit.oracle import brute_force_lower_bound

TOL = Fraction(1, 1000)


def test_hilbert_dilation_brackets_six(hilbert):
    est = dilation(hilbert, TOL)
    assert est.lower <= 6 <= est.upper
    assert est.width <= TOL
    assert not est.capped


def test_witness_achieves_lower(regression_curves):
    for curve in regression_curves.values():
        est = dilation(curve, Fraction(1, 100))
        t, u = est.witness
        assert t < u
        ratio = squared_distance(
            evaluate_exact(curve, t), evaluate_exact(curve, u)
        ) / (u - t)
        assert ratio == est.lower


def test_all_valid_curves_at_least_five(regression_curves):
    for curve in regression_curves.values():
        est = dilation(curve, TOL)
        assert est.lower >= 5 - TOL
        assert est.lower >= Fraction(7, 2) - TOL


def test_minimal_genus9_brackets_17_3(genus9_minimal):
    est = dilation(genus9_minimal, TOL)
    assert est.contains(Fraction(17, 3))
    assert est.width <= TOL


def test_junction_classes_hilbert(hilbert):
    classes = junction_classes(hilbert)
    assert len(classes) == 4  # regression constant
    # every first-order junction's class is in the set
    firsts = [key for key in _first_order_keys(hilbert)]
    class_keys = {c.key for c in classes}
    assert set(firsts) <= class_keys
    assert sum(c.multiplicity for c in classes) == hilbert.genus - 1
    assert all(c.placement == "side" for c in classes)


def _first_order_keys(curve):
    from peanokit.curve import ROOT_FRAME, frame_child

    for i in range(curve.genus - 1):
        fa = frame_child(curve, ROOT_FRAME, i)
        fb = frame_child(curve, ROOT_FRAME, i + 1)
        yield _canonical_junction(fa.iso, fa.rev, fb.iso, fb.rev, fb.x - fa.x, fb.y - fa.y)


def test_junction_class_has_vertex_placement(diag9):
    classes = junction_classes(diag9)
    assert any(c.placement == "vertex" for c in classes)


def test_canonical_junction_idempotent(hilbert, diag9):
    for curve in (hilbert, diag9):
        for c in junction_classes(curve):
            key = _canonical_junction(c.iso_a, c.rev_a, c.iso_b, c.rev_b, *c.offset)
            assert key == c.key


def test_junction_ratio_worst_class_matches_global(hilbert):
    est = dilation(hilbert, TOL)
    ratios = [junction_ratio(hilbert, c, TOL) for c in junction_classes(hilbert)]
    best = max(r.lower for r in ratios)
    assert abs(best - est.lower) <= 2 * TOL


def test_via_junctions_agreement(regression_curves):
    for name, curve in regression_curves.items():
        direct = dilation(curve, TOL)
        via = dilation_via_junctions(curve, TOL)
        assert abs(direct.lower - via.lower) <= 2 * TOL, name
        assert abs(direct.upper - via.upper) <= 2 * TOL, name


def test_vertex_junction_curve_at_least_five(diag9):
    est = dilation_via_junctions(diag9, TOL)
    assert est.lower >= 5


def test_node_upper_bound_examples(hilbert):
    assert node_upper_bound(hilbert, SearchNode((), ())) is None
    assert node_upper_bound(hilbert, SearchNode((0,), (0,))) is None
    assert node_upper_bound(hilbert, SearchNode((0,), (1,))) is None  # touching
    assert node_upper_bound(hilbert, SearchNode((0,), (2,))) == 8
    # order of the paths must not matter
    assert node_upper_bound(hilbert, SearchNode((2,), (0,))) == 8


def test_node_upper_bound_sound(hilbert):
    # every sampled pair inside a node stays below the node bound
    bound = node_upper_bound(hilbert, SearchNode((0,), (3,)))
    g = hilbert.genus
    times_a = [Fraction(i, 4 * g) for i in range(0, g + 1)]
    times_b = [Fraction(3, 4) + Fraction(i, 4 * g) for i in range(0, g + 1)]
    for t in times_a:
        for u in times_b:
            if t == u:
                continue
            ratio = squared_distance(
                evaluate_exact(hilbert, t), evaluate_exact(hilbert, u)
            ) / abs(u - t)
            assert ratio <= bound


def test_scale_invariance(hilbert):
    values = set()
    for variant in hilbert.symmetry_orbit():
        est = dilation(variant, Fraction(1, 50))
        values.add((est.lower, est.upper))
    assert len(values) == 1


def test_jobs_do_not_change_output(diag9):
    a = dilation(diag9, TOL, jobs=1)
    b = dilation(diag9, TOL, jobs=4)
    assert (a.lower, a.upper, a.witness, a.nodes) == (b.lower, b.upper, b.witness, b.nodes)
    va = dilation_via_junctions(diag9, Fraction(1, 100), jobs=1)
    vb = dilation_via_junctions(diag9, Fraction(1, 100), jobs=4)
    assert (va.lower, va.upper, va.witness) == (vb.lower, vb.upper, vb.witness)


def test_oracle_never_exceeds_upper(regression_curves):
    for curve in regression_curves.values():
        est = dilation(curve, TOL)
        max_depth = 4 if curve.k == 2 else 3
        for depth in range(max_depth + 1):
            lower = brute_force_lower_bound(curve, depth).lower_bound
            assert lower <= est.upper + TOL


def test_shared_incumbent_variant_agrees(regression_curves):
    for curve in regression_curves.values():
        a = dilation(curve, TOL)
        b = dilation_with_shared_incumbent(curve, TOL)
        assert a.lower == b.lower
        assert abs(a.upper - b.upper) <= TOL
        assert not b.capped


def test_early_stop_is_sound(genus9_minimal):
    est = dilation_with_shared_incumbent(
        genus9_minimal, TOL, stop_if_lower_above=Fraction(5)
    )
    assert est.capped and est.cap_reason == "lower-above-threshold"
    assert est.lower > 5
    assert est.upper >= Fraction(17, 3)  # still a sound global bound


def test_max_nodes_cap(hilbert):
    est = dilation(hilbert, Fraction(1, 10**9), max_nodes=5)
    assert est.capped and "max-nodes" in est.cap_reason
    assert est.lower <= 6 <= est.upper


def test_rejects_invalid_curve():
    from conftest import spec
    from peanokit.curve import FractalCurve

    bad = FractalCurve(
        2, [spec(0, 0, "md"), spec(0, 0, "e"), spec(1, 1, "e"), spec(1, 0, "ma")]
    )
    with pytest.raises(InvalidCurveError):
        dilation(bad, TOL)


def test_tolerance_validated(hilbert):
    with pytest.raises(ValueError):
        dilation(hilbert, Fraction(0))
    with pytest.raises(ValueError):
        junction_ratio(hilbert, junction_classes(hilbert)[0], Fraction(-1))
