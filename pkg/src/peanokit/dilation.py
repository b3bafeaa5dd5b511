"""Certified bounds on the maximum square-to-linear ratio.

Two independent computation paths:

* ``dilation`` runs best-first branch-and-bound over pairs of fraction
  time-periods.  Pairs inside a single fraction reduce to the whole curve
  by self-similarity, and pairs straddling adjacent periods reduce to
  finitely many junction classes, so the search decomposes into one
  subproblem per junction class plus one over non-adjacent first-order
  pairs.  Every subproblem has strictly positive time gaps, hence finite
  bounds and guaranteed convergence.

* ``dilation_via_junctions`` maximizes the threshold-restricted junction
  ratio over the junction classes (with the whole domain participating as
  the order-zero junction), which must agree with ``dilation`` within
  twice the tolerance.

All bounds are exact rationals.  Node bounds exploit that at depth n the
spatial unit is k**-n while the time unit is g**-n = (k**-n)**2, so a
node's bound is a ratio of small integers regardless of depth.

Lower bounds come from sampling vertex-passage moments of the refined
periods; that placement is a heuristic for fast convergence only, and
soundness never depends on it.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curve import (
    FractalCurve,
    Frame,
    ROOT_FRAME,
    frame_child,
    frame_corner_samples,
    frame_for_path,
    path_time_index,
    validate,
)
from .errors import InvalidCurveError
from .geometry import ISOMETRIES, SquareIsometry, apply_to_vector, compose, inverse

DEFAULT_MAX_NODES = 2_000_000

_ISO_INDEX = {iso: i for i, iso in enumerate(ISOMETRIES)}


@dataclass(frozen=True)
class DilationEstimate:
    """Certified two-sided estimate: lower <= max ratio <= upper.

    ``lower`` is achieved exactly by the witness pair; ``upper`` comes from
    the exhausted bound queue.  ``capped`` marks an early stop (resource
    cap or pruning), in which case only soundness, not width, is promised.
    """

    lower: Fraction
    upper: Fraction
    witness: tuple[Fraction, Fraction]
    nodes: int = 0
    capped: bool = False
    cap_reason: str | None = None

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class SearchNode:
    """A pair of fraction periods addressed by time digits."""

    path_a: tuple[int, ...]
    path_b: tuple[int, ...]
    upper_bound: Fraction | None = None


@dataclass(frozen=True)
class JunctionClass:
    """Canonical form of a pair of adjacent same-order fractions.

    The canonical tuple minimizes over the eight plane conjugations and
    time reversal; ``multiplicity`` counts the first-order junctions that
    land in the class (0 for classes that only arise deeper down).
    """

    iso_a: SquareIsometry
    rev_a: bool
    iso_b: SquareIsometry
    rev_b: bool
    offset: tuple[int, int]
    multiplicity: int = field(compare=False, default=0)
    representative: tuple = field(compare=False, default=(), repr=False)

    @property
    def key(self) -> tuple:
        return (
            _ISO_INDEX[self.iso_a],
            self.rev_a,
            _ISO_INDEX[self.iso_b],
            self.rev_b,
            self.offset,
        )

    @property
    def placement(self) -> str:
        dx, dy = self.offset
        return "side" if abs(dx) + abs(dy) == 1 else "vertex"

    @property
    def iso_rel(self) -> SquareIsometry:
        return compose(inverse(self.iso_a), self.iso_b)


# ---------------------------------------------------------------------------
# junction classes


def _canonical_junction(iso_a, rev_a, iso_b, rev_b, dx, dy) -> tuple:
    best = None
    for eta in ISOMETRIES:
        ca = _ISO_INDEX[compose(eta, iso_a)]
        cb = _ISO_INDEX[compose(eta, iso_b)]
        rdx, rdy = apply_to_vector(eta, dx, dy)
        forward = (ca, rev_a, cb, rev_b, (rdx, rdy))
        backward = (cb, not rev_b, ca, not rev_a, (-rdx, -rdy))
        if best is None or forward < best:
            best = forward
        if backward < best:
            best = backward
    return best


def _instance_key(inst) -> tuple:
    _, _, fa, fb = inst
    return _canonical_junction(fa.iso, fa.rev, fb.iso, fb.rev, fb.x - fa.x, fb.y - fa.y)


def _boundary_sub_junction(curve: FractalCurve, inst):
    """Last time-child of the left period with first time-child of the right."""
    depth, m1, fa, fb = inst
    g = curve.genus
    return (
        depth + 1,
        m1 * g + g - 1,
        frame_child(curve, fa, g - 1),
        frame_child(curve, fb, 0),
    )


def _junction_closure(curve: FractalCurve):
    """All junction classes, keyed canonically, with concrete representatives.

    Seeded by the g-1 first-order junctions; each class's boundary
    sub-junction is added until nothing new appears.  Termination is
    guaranteed by the finite key space.
    """
    reps: dict[tuple, tuple] = {}
    mult: dict[tuple, int] = {}
    order: list[tuple] = []
    for i in range(curve.genus - 1):
        inst = (
            1,
            i,
            frame_child(curve, ROOT_FRAME, i),
            frame_child(curve, ROOT_FRAME, i + 1),
        )
        key = _instance_key(inst)
        mult[key] = mult.get(key, 0) + 1
        if key not in reps:
            reps[key] = inst
            order.append(key)
    qi = 0
    while qi < len(order):
        key = order[qi]
        qi += 1
        child = _boundary_sub_junction(curve, reps[key])
        ckey = _instance_key(child)
        if ckey not in reps:
            reps[ckey] = child
            mult.setdefault(ckey, 0)
            order.append(ckey)
        if len(order) > 4096:
            raise RuntimeError("junction closure failed to terminate")
    return reps, mult


def junction_classes(curve: FractalCurve) -> tuple[JunctionClass, ...]:
    """The finite set of junction classes of a valid curve."""
    _require_valid(curve)
    reps, mult = _junction_closure(curve)
    out = []
    for key in sorted(reps):
        ia, ra, ib, rb, off = key
        out.append(
            JunctionClass(
                ISOMETRIES[ia],
                ra,
                ISOMETRIES[ib],
                rb,
                off,
                multiplicity=mult[key],
                representative=reps[key],
            )
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# branch-and-bound engine


class _Best:
    """Running maximum of exactly evaluated pair ratios, with witness.

    Ties resolve to the lexicographically smallest (t, u) pair, so the
    result never depends on evaluation order.
    """

    __slots__ = ("num", "den", "t", "u")

    def __init__(self, num=0, den=1, t=Fraction(0), u=Fraction(1)):
        self.num = num
        self.den = den
        self.t = t
        self.u = u

    def offer(self, num: int, den: int, t: Fraction, u: Fraction) -> None:
        c = num * self.den - self.num * den
        if c > 0 or (c == 0 and (t, u) < (self.t, self.u)):
            self.num = num
            self.den = den
            self.t = t
            self.u = u

    def state(self) -> tuple:
        return (self.num, self.den, self.t, self.u)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)


@dataclass
class _TaskResult:
    best_state: tuple
    upper: Fraction
    nodes: int
    capped: bool
    cap_reason: str | None


def _run_bnb(
    curve: FractalCurve,
    roots: Sequence[tuple[int, int, Frame, int, Frame]],
    tol: Fraction,
    best: _Best,
    *,
    theta: Fraction | None = None,
    max_nodes: int = DEFAULT_MAX_NODES,
    stop_below: Fraction | None = None,
    stop_if_lower_above: Fraction | None = None,
) -> _TaskResult:
    """Best-first refinement of interval-pair nodes.

    ``roots`` are (depth, m1, frame1, m2, frame2) with m1 <= m2 in g**-depth
    time units.  With ``theta`` set (a fraction of total time), only pairs
    separated by at least ``theta`` count, node denominators are clamped to
    it, and same-interval nodes are admitted.  Without it, gaps are
    strictly positive by construction and bounds are plain integer ratios.
    """
    g = curve.genus
    q, _, _ = curve.corner_time_table
    heap: list = []
    resolved_ub = Fraction(0)
    nodes = 0

    def theta_units(depth: int):
        if theta is None:
            return None
        tu = theta * g**depth
        return int(tu) if tu.denominator == 1 else tu

    def consider(depth, m1, f1, m2, f2, sa, sb):
        nonlocal resolved_ub
        qgn = q * g**depth
        tu = theta_units(depth)
        if m1 == m2:
            if tu is None:
                raise RuntimeError("same-interval node in a threshold-free task")
            if tu > 1:
                return  # interval shorter than the separation threshold
            _sample_pairs(best, qgn, q, sa, sa, tu * q, same=True)
            bound = Fraction(2, 1) / tu
        else:
            if tu is not None and (m2 + 1 - m1) < tu:
                return  # even the extreme pair is below the threshold
            _sample_pairs(best, qgn, q, sa, sb, tu * q if tu is not None else 0, same=False)
            gap = m2 - m1 - 1
            dxm = abs(f2.x - f1.x) + 1
            dym = abs(f2.y - f1.y) + 1
            maxd2 = dxm * dxm + dym * dym
            if tu is not None:
                den = gap if gap > tu else tu
                bound = Fraction(maxd2, 1) / den
            else:
                if gap <= 0:
                    raise RuntimeError("touching node in a threshold-free task")
                bound = Fraction(maxd2, gap)
        limit = best.value + tol
        if stop_below is not None and limit < stop_below:
            limit = stop_below
        if bound <= limit:
            if bound > resolved_ub:
                resolved_ub = bound
            return
        heapq.heappush(heap, (-bound, depth, m1, m2, f1, f2))

    for ri, (depth, m1, f1, m2, f2) in enumerate(roots):
        if (
            stop_if_lower_above is not None
            and ri % 16 == 0
            and best.value > stop_if_lower_above
        ):
            ub = _roots_bound(curve, roots, theta)
            return _TaskResult(
                best.state(), max(best.value, ub), nodes, True, "lower-above-threshold"
            )
        sa = frame_corner_samples(curve, f1, m1)
        sb = sa if m1 == m2 else frame_corner_samples(curve, f2, m2)
        consider(depth, m1, f1, m2, f2, sa, sb)

    def finish(top_bound: Fraction, capped: bool, reason: str | None) -> _TaskResult:
        upper = max(best.value, resolved_ub, top_bound)
        return _TaskResult(best.state(), upper, nodes, capped, reason)

    while heap:
        neg, depth, m1, m2, f1, f2 = heapq.heappop(heap)
        bound = -neg
        if bound <= best.value + tol:
            return finish(bound, False, None)
        if stop_below is not None and bound <= stop_below:
            return finish(bound, False, None)
        if stop_if_lower_above is not None and best.value > stop_if_lower_above:
            return finish(bound, True, "lower-above-threshold")
        if nodes >= max_nodes:
            return finish(bound, True, "max-nodes")
        nodes += 1
        base1 = m1 * g
        base2 = m2 * g
        lefts = [frame_child(curve, f1, d) for d in range(g)]
        lsamp = [frame_corner_samples(curve, lefts[d], base1 + d) for d in range(g)]
        if m1 == m2:
            rights, rsamp = lefts, lsamp
            for da in range(g):
                for db in range(da, g):
                    consider(
                        depth + 1, base1 + da, lefts[da], base2 + db, rights[db],
                        lsamp[da], rsamp[db],
                    )
        else:
            rights = [frame_child(curve, f2, d) for d in range(g)]
            rsamp = [frame_corner_samples(curve, rights[d], base2 + d) for d in range(g)]
            for da in range(g):
                for db in range(g):
                    consider(
                        depth + 1, base1 + da, lefts[da], base2 + db, rights[db],
                        lsamp[da], rsamp[db],
                    )

    return finish(Fraction(0), False, None)


def _roots_bound(curve: FractalCurve, roots, theta: Fraction | None) -> Fraction:
    """Max node bound over ``roots`` without sampling: a sound upper bound
    for every pair the roots cover."""
    g = curve.genus
    ub = Fraction(0)
    for depth, m1, f1, m2, f2 in roots:
        if m1 == m2:
            maxd2 = 2
            gap = 0
        else:
            dxm = abs(f2.x - f1.x) + 1
            dym = abs(f2.y - f1.y) + 1
            maxd2 = dxm * dxm + dym * dym
            gap = m2 - m1 - 1
        if theta is not None:
            tu = theta * g**depth
            if m1 == m2 and tu > 1:
                continue
            den = gap if gap > tu else tu
            bound = Fraction(maxd2, 1) / den
        else:
            if gap <= 0:
                continue  # covered by its own junction-class subproblem
            bound = Fraction(maxd2, gap)
        if bound > ub:
            ub = bound
    return ub


def _sample_pairs(best: _Best, qgn: int, q: int, sa, sb, min_dt, same: bool):
    """Offer corner-moment pair ratios to ``best``; all integer arithmetic
    until an improvement materializes."""
    for i, (ta, xa, ya) in enumerate(sa):
        items = sb[i + 1 :] if same else sb
        for tb, xb, yb in items:
            dt = tb - ta
            if dt <= 0 or dt < min_dt:
                continue
            dx = xb - xa
            dy = yb - ya
            num = (dx * dx + dy * dy) * q
            if num * best.den >= best.num * dt:
                best.offer(num, dt, Fraction(ta, qgn), Fraction(tb, qgn))


# ---------------------------------------------------------------------------
# task assembly


def _require_valid(curve: FractalCurve) -> None:
    report = validate(curve)
    if not report.ok:
        raise InvalidCurveError("; ".join(report.issues))


def _global_seed(curve: FractalCurve) -> _Best:
    """Deterministic starting lower bound from order-0 and order-1 moments."""
    best = _Best()
    q, _, _ = curve.corner_time_table
    g = curve.genus
    root = frame_corner_samples(curve, ROOT_FRAME, 0)
    _sample_pairs(best, q, q, root, root, 0, same=True)
    frames = [frame_child(curve, ROOT_FRAME, i) for i in range(g)]
    samples = [frame_corner_samples(curve, frames[i], i) for i in range(g)]
    for i in range(g):
        for j in range(i + 1, g):
            _sample_pairs(best, q * g, q, samples[i], samples[j], 0, same=False)
    return best


def _nonadjacent_roots(curve: FractalCurve):
    g = curve.genus
    frames = [frame_child(curve, ROOT_FRAME, i) for i in range(g)]
    return [(1, i, frames[i], j, frames[j]) for i in range(g) for j in range(i + 2, g)]


def _junction_roots(curve: FractalCurve, inst):
    """Cross children of a junction, minus the boundary-touching pair
    (that pair is a junction class of its own and has its own task)."""
    depth, m1, fa, fb = inst
    g = curve.genus
    lefts = [frame_child(curve, fa, d) for d in range(g)]
    rights = [frame_child(curve, fb, d) for d in range(g)]
    roots = []
    for da in range(g):
        for db in range(g):
            if da == g - 1 and db == 0:
                continue
            roots.append(
                (depth + 1, m1 * g + da, lefts[da], (m1 + 1) * g + db, rights[db])
            )
    return roots


def _run_task(curve, task, closure, tol, seed_state, max_nodes, stop_below, stop_if_lower_above):
    best = _Best(*seed_state)
    if task[0] == "nonadj":
        roots = _nonadjacent_roots(curve)
    else:
        roots = _junction_roots(curve, closure[task[1]])
    return _run_bnb(
        curve,
        roots,
        tol,
        best,
        max_nodes=max_nodes,
        stop_below=stop_below,
        stop_if_lower_above=stop_if_lower_above,
    )


def _merge_results(results) -> _TaskResult:
    results = list(results)
    merged = _Best()
    for r in results:
        merged.offer(r.best_state[0], r.best_state[1], r.best_state[2], r.best_state[3])
    upper = max(r.upper for r in results)
    capped = any(r.capped for r in results)
    reasons = sorted({r.cap_reason for r in results if r.cap_reason})
    return _TaskResult(
        merged.state(),
        max(upper, merged.value),
        sum(r.nodes for r in results),
        capped,
        "; ".join(reasons) if reasons else None,
    )


def _finalize(result: _TaskResult) -> DilationEstimate:
    num, den, t, u = result.best_state
    return DilationEstimate(
        Fraction(num, den),
        result.upper,
        (t, u),
        nodes=result.nodes,
        capped=result.capped,
        cap_reason=result.cap_reason,
    )


def _map_tasks(fn, payloads, jobs):
    if jobs > 1 and len(payloads) > 1:
        import multiprocessing as mp

        try:
            ctx = mp.get_context("fork")
        except ValueError:  # pragma: no cover - non-POSIX fallback
            ctx = None
        if ctx is not None:
            with ctx.Pool(min(jobs, len(payloads))) as pool:
                return pool.starmap(fn, payloads)
    return [fn(*p) for p in payloads]


def dilation(
    curve: FractalCurve,
    tol: Fraction,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    jobs: int = 1,
    stop_if_lower_above: Fraction | None = None,
    assume_valid: bool = False,
) -> DilationEstimate:
    """Certified estimate of the maximum square-to-linear ratio.

    The result is independent of ``jobs``: subproblems share nothing but
    the precomputed seed bound, and the merge is a deterministic maximum.
    With ``stop_if_lower_above`` the search may return early (flagged
    ``capped``) once the lower bound clears the threshold; the bounds stay
    sound but the width promise is waived.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if not assume_valid:
        _require_valid(curve)
    closure, _ = _junction_closure(curve)
    seed = _global_seed(curve)
    tasks = [("nonadj",)] + [("jclass", key) for key in sorted(closure)]
    payloads = [
        (curve, task, closure, tol, seed.state(), max_nodes, seed.value, stop_if_lower_above)
        for task in tasks
    ]
    results = _map_tasks(_run_task, payloads, jobs)
    return _finalize(_merge_results(results))


def _cheap_global_upper(curve: FractalCurve, closure) -> Fraction:
    """Sound but loose upper bound from root bounds alone.

    Every pair of distinct moments reduces by self-similarity either to a
    non-adjacent first-order pair or to a pair inside some junction class,
    so the max over those root bounds dominates the true ratio.
    """
    ub = _roots_bound(curve, _nonadjacent_roots(curve), None)
    for inst in closure.values():
        b = _roots_bound(curve, _junction_roots(curve, inst), None)
        if b > ub:
            ub = b
    return ub


def dilation_with_shared_incumbent(
    curve: FractalCurve,
    tol: Fraction,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    stop_if_lower_above: Fraction | None = None,
    assume_valid: bool = False,
) -> DilationEstimate:
    """Sequential dilation sharing one incumbent across subproblems.

    Functionally equivalent to :func:`dilation` (both certified, same
    witness rules) but tuned for screening many curves: the shared lower
    bound lets an early-stop threshold fire as soon as any subproblem
    samples past it, and remaining subproblems are then bounded wholesale
    by their root bounds instead of being refined.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if not assume_valid:
        _require_valid(curve)
    closure, _ = _junction_closure(curve)
    best = _global_seed(curve)
    if stop_if_lower_above is not None and best.value > stop_if_lower_above:
        ub = max(_cheap_global_upper(curve, closure), best.value)
        return DilationEstimate(
            best.value, ub, (best.t, best.u), 0, True, "lower-above-threshold"
        )
    tasks = [("nonadj",)] + [("jclass", key) for key in sorted(closure)]
    uppers: list[Fraction] = []
    nodes = 0
    for i, task in enumerate(tasks):
        if task[0] == "nonadj":
            roots = _nonadjacent_roots(curve)
        else:
            roots = _junction_roots(curve, closure[task[1]])
        res = _run_bnb(
            curve,
            roots,
            tol,
            best,
            max_nodes=max(0, max_nodes - nodes),
            stop_if_lower_above=stop_if_lower_above,
        )
        nodes += res.nodes
        uppers.append(res.upper)
        if res.capped:
            ub = max(_cheap_global_upper(curve, closure), best.value, *uppers)
            return DilationEstimate(
                best.value, ub, (best.t, best.u), nodes, True, res.cap_reason
            )
    upper = max(best.value, *uppers)
    return DilationEstimate(best.value, upper, (best.t, best.u), nodes, False, None)


def junction_ratio(
    curve: FractalCurve,
    jclass: JunctionClass,
    tol: Fraction,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> DilationEstimate:
    """Threshold-restricted ratio of one junction class.

    Pairs (x, y) range over the junction's two periods subject to
    |x - y| >= (domain length) / (2 * genus); that threshold equals one
    period of the next order down, so every pair of distinct moments of
    the curve participates in some junction's restricted ratio.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    _require_valid(curve)
    inst = jclass.representative
    if not inst:
        closure, _ = _junction_closure(curve)
        if jclass.key not in closure:
            raise ValueError("junction class does not belong to this curve")
        inst = closure[jclass.key]
    depth, m1, fa, fb = inst
    g = curve.genus
    theta = Fraction(1, g ** (depth + 1))
    intervals = [(m1 * g + d, frame_child(curve, fa, d)) for d in range(g)]
    intervals += [((m1 + 1) * g + d, frame_child(curve, fb, d)) for d in range(g)]
    roots = []
    for idx, (m, f) in enumerate(intervals):
        roots.append((depth + 1, m, f, m, f))  # same-interval: extreme pair only
        for mb, fbb in intervals[idx + 1 :]:
            roots.append((depth + 1, m, f, mb, fbb))
    result = _run_bnb(curve, roots, tol, _Best(), theta=theta, max_nodes=max_nodes)
    return _finalize(result)


def _top_level_restricted(curve: FractalCurve, tol: Fraction, max_nodes: int) -> DilationEstimate:
    """Whole-domain ratio restricted to |x - y| >= 1/(2g): the order-zero
    junction, covering pairs of periods that are never adjacent."""
    g = curve.genus
    theta = Fraction(1, 2 * g)
    frames1 = [frame_child(curve, ROOT_FRAME, i) for i in range(g)]
    intervals = []
    for i, f in enumerate(frames1):
        for d in range(g):
            intervals.append((i * g + d, frame_child(curve, f, d)))
    # depth-2 periods are shorter than the threshold for every genus >= 4,
    # so same-interval pairs never qualify and cross pairs cover the rest.
    roots = []
    for idx, (m, f) in enumerate(intervals):
        for mb, fb in intervals[idx + 1 :]:
            roots.append((2, m, f, mb, fb))
    result = _run_bnb(curve, roots, tol, _Best(), theta=theta, max_nodes=max_nodes)
    return _finalize(result)


def _via_junctions_task(curve, task, tol, max_nodes):
    if task[0] == "top":
        return _top_level_restricted(curve, tol, max_nodes)
    return junction_ratio(curve, task[1], tol, max_nodes=max_nodes)


def dilation_via_junctions(
    curve: FractalCurve,
    tol: Fraction,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    jobs: int = 1,
) -> DilationEstimate:
    """Maximum of the junction ratios; agrees with ``dilation`` within 2*tol."""
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    _require_valid(curve)
    classes = junction_classes(curve)
    tasks = [("top",)] + [("jr", c) for c in classes]
    payloads = [(curve, task, tol, max_nodes) for task in tasks]
    estimates = _map_tasks(_via_junctions_task, payloads, jobs)
    lower = max(e.lower for e in estimates)
    witness = min(e.witness for e in estimates if e.lower == lower)
    upper = max(max(e.upper for e in estimates), lower)
    reasons = sorted({e.cap_reason for e in estimates if e.cap_reason})
    return DilationEstimate(
        lower,
        upper,
        witness,
        nodes=sum(e.nodes for e in estimates),
        capped=any(e.capped for e in estimates),
        cap_reason="; ".join(reasons) if reasons else None,
    )


def node_upper_bound(curve: FractalCurve, node: SearchNode) -> Fraction | None:
    """Sound bound for all pairs (t in period(path_a), t' in period(path_b)).

    Returns None when the periods touch or overlap, which forces
    subdivision.
    """
    fa = frame_for_path(curve, node.path_a)
    fb = frame_for_path(curve, node.path_b)
    ma, na = path_time_index(curve, node.path_a)
    mb, nb = path_time_index(curve, node.path_b)
    g = curve.genus
    lo_a, hi_a = Fraction(ma, g**na), Fraction(ma + 1, g**na)
    lo_b, hi_b = Fraction(mb, g**nb), Fraction(mb + 1, g**nb)
    if (lo_b, hi_b) < (lo_a, hi_a):
        lo_a, hi_a, fa, na, lo_b, hi_b, fb, nb = lo_b, hi_b, fb, nb, lo_a, hi_a, fa, na
    gap = lo_b - hi_a
    if gap <= 0:
        return None
    ka, kb = curve.k**na, curve.k**nb
    dx = max(
        Fraction(fb.x + 1, kb) - Fraction(fa.x, ka),
        Fraction(fa.x + 1, ka) - Fraction(fb.x, kb),
    )
    dy = max(
        Fraction(fb.y + 1, kb) - Fraction(fa.y, ka),
        Fraction(fa.y + 1, ka) - Fraction(fb.y, kb),
    )
    return (dx * dx + dy * dy) / gap
