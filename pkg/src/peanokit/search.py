"""Exhaustive enumeration of regular fractal Peano curves and ratio search.

Enumeration backtracks over cell sequences with the entry/exit vertices
postulated up front: once those are fixed, every fraction's entry and exit
point is determined by its (cell, isometry, orientation) choice, so
continuity propagates as a simple chain constraint and dead branches die
fast.  The necessary-condition predicates certify ratio >= 5 for a curve
the moment any of them fails, mirroring how turns, shapes and acceleration
interact on curves with ratio below five.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .curve import (
    AccelerationClass,
    Cell,
    CurveClass,
    FractalCurve,
    FractionSpec,
    Frame,
    ROOT_FRAME,
    Shape,
    classify,
    frame_child,
    frame_displacement,
)
from .dilation import (
    DEFAULT_MAX_NODES,
    DilationEstimate,
    dilation_with_shared_incumbent,
)
from .geometry import ISOMETRIES, SquareIsometry, apply_to_vector, apply_to_vertex
from .oracle import brute_force_lower_bound

_VERTICES = ((0, 0), (1, 0), (0, 1), (1, 1))

#: isometries mapping vertex a to vertex b, in index order
_ISOS_V2V: dict[tuple[tuple[int, int], tuple[int, int]], tuple[SquareIsometry, ...]] = {}
for _a in _VERTICES:
    for _iso in ISOMETRIES:
        _b = apply_to_vertex(_iso, *_a)
        _ISOS_V2V.setdefault((_a, _b), tuple())
        _ISOS_V2V[(_a, _b)] = _ISOS_V2V[(_a, _b)] + (_iso,)

LEMMA_IDS = ("L9", "L10", "L11", "L12", "L13", "L14", "L15", "L16", "L17", "L19", "L20", "L21")


@dataclass(frozen=True)
class EnumerationSpec:
    """What to enumerate: base divisor plus structural switches."""

    k: int
    require_side_adjacency: bool = False
    dedup_by_symmetry: bool = True
    filters: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("base divisor must be >= 2")
        unknown = set(self.filters) - set(LEMMA_IDS)
        if unknown:
            raise ValueError(f"unknown lemma filters: {sorted(unknown)}")


@dataclass(frozen=True)
class LemmaVerdict:
    lemma: str
    holds: bool
    applicable: bool
    evidence: str | None = None


@dataclass(frozen=True)
class LemmaReport:
    """Per-lemma verdicts; any violation certifies ratio >= 5."""

    verdicts: tuple[LemmaVerdict, ...]

    def __getitem__(self, lemma: str) -> LemmaVerdict:
        for v in self.verdicts:
            if v.lemma == lemma:
                return v
        raise KeyError(lemma)

    @property
    def violated(self) -> tuple[str, ...]:
        return tuple(v.lemma for v in self.verdicts if not v.holds)

    @property
    def certifies_ratio_at_least_five(self) -> bool:
        return bool(self.violated)


# ---------------------------------------------------------------------------
# enumeration


def _ordered_end_pairs(dedup: bool):
    if dedup:
        # one representative per symmetry orbit of ordered (entry, exit)
        return (((0, 0), (1, 0)), ((0, 0), (1, 1)))
    pairs = []
    for e in _VERTICES:
        for x in _VERTICES:
            if e != x:
                pairs.append((e, x))
    return tuple(pairs)


def enumerate_curves(spec: EnumerationSpec) -> Iterator[FractalCurve]:
    """All valid curves with the given base divisor, each exactly once
    (once per symmetry class when deduplication is on)."""
    seen: set[tuple] = set()
    for entry, exit_ in _ordered_end_pairs(spec.dedup_by_symmetry):
        for curve in _enumerate_for_ends(spec.k, entry, exit_, spec.require_side_adjacency):
            if spec.dedup_by_symmetry:
                key = curve.canonical_key
                if key in seen:
                    continue
                seen.add(key)
            if spec.filters:
                report = five_necessary_conditions(curve)
                if any(not report[lid].holds for lid in spec.filters):
                    continue
            yield curve


def _enumerate_for_ends(
    k: int, entry: tuple[int, int], exit_: tuple[int, int], side_adj: bool
) -> Iterator[FractalCurve]:
    g = k * k
    x_cell = ((k - 1) * exit_[0], (k - 1) * exit_[1])
    end_point = (k * exit_[0], k * exit_[1])
    adjacency = _cell_adjacency(k, side_adj)

    specs: list[FractionSpec] = []

    def unused_connected(used_mask: int) -> bool:
        free = [c for c in range(g) if not used_mask >> c & 1]
        if not free:
            return True
        stack = [free[0]]
        seen_mask = 1 << free[0]
        count = 1
        while stack:
            c = stack.pop()
            for d in adjacency[c]:
                if not used_mask >> d & 1 and not seen_mask >> d & 1:
                    seen_mask |= 1 << d
                    count += 1
                    stack.append(d)
        return count == len(free)

    def step(pos: int, point: tuple[int, int], used_mask: int, prev: tuple[int, int] | None):
        a, b = point
        for col in (a - 1, a):
            if not 0 <= col < k:
                continue
            for row in (b - 1, b):
                if not 0 <= row < k:
                    continue
                cid = row * k + col
                if used_mask >> cid & 1:
                    continue
                cell = (col, row)
                if cell == x_cell and pos != g - 1:
                    continue
                if side_adj and prev is not None and abs(col - prev[0]) + abs(row - prev[1]) != 1:
                    continue
                v = (a - col, b - row)
                mask = used_mask | 1 << cid
                if pos < g - 1 and not unused_connected(mask):
                    continue
                for rev, src, dst in ((False, entry, exit_), (True, exit_, entry)):
                    for iso in _ISOS_V2V.get((src, v), ()):
                        w = apply_to_vertex(iso, *dst)
                        nxt = (col + w[0], row + w[1])
                        if pos == g - 1 and nxt != end_point:
                            continue
                        specs.append(FractionSpec(Cell(col, row), iso, rev))
                        if pos == g - 1:
                            yield FractalCurve(k, list(specs))
                        else:
                            yield from step(pos + 1, nxt, mask, cell)
                        specs.pop()

    yield from step(0, (k * entry[0], k * entry[1]), 0, None)


def _cell_adjacency(k: int, side_only: bool) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(k * k)]
    for row in range(k):
        for col in range(k):
            c = row * k + col
            for dc in (-1, 0, 1):
                for dr in (-1, 0, 1):
                    if dc == dr == 0:
                        continue
                    if side_only and abs(dc) + abs(dr) != 1:
                        continue
                    nc, nr = col + dc, row + dr
                    if 0 <= nc < k and 0 <= nr < k:
                        adj[c].append(nr * k + nc)
    return adj


# ---------------------------------------------------------------------------
# necessary-condition predicates


def _frame_shape(curve: FractalCurve, frame: Frame) -> Shape | None:
    _, _, verts = curve.corner_time_table
    if frame.rev:
        d = (verts[2][0] - verts[3][0], verts[2][1] - verts[3][1])
    else:
        d = (verts[1][0] - verts[0][0], verts[1][1] - verts[0][1])
    dx, dy = apply_to_vector(frame.iso, *d)
    if dy == 0 and dx != 0:
        return Shape.Z
    if dx == 0 and dy != 0:
        return Shape.N
    return None


def _frame_accel(curve: FractalCurve, frame: Frame) -> AccelerationClass:
    sign = curve.base_acceleration_sign
    if frame.rev:
        sign = -sign
    if sign > 0:
        return AccelerationClass.ACCELERATING
    if sign < 0:
        return AccelerationClass.DECELERATING
    return AccelerationClass.NEUTRAL


@dataclass(frozen=True)
class _FractionData:
    cell: tuple[int, int]
    disp: tuple[int, int]
    accel: AccelerationClass
    shape: Shape | None


def _order_data(curve: FractalCurve, depth: int) -> list[_FractionData]:
    """Combinatorial data of all order-``depth`` fractions in time order."""
    frames = [ROOT_FRAME]
    for _ in range(depth):
        frames = [frame_child(curve, f, d) for f in frames for d in range(curve.genus)]
    return [
        _FractionData(
            (f.x, f.y),
            frame_displacement(curve, f),
            _frame_accel(curve, f),
            _frame_shape(curve, f),
        )
        for f in frames
    ]


def _turn_kind(d1: tuple[int, int], d2: tuple[int, int]) -> str | None:
    """None = straight, "back" = opposite displacement, "side" otherwise."""
    if d1 == d2:
        return None
    if d1[0] == -d2[0] and d1[1] == -d2[1]:
        return "back"
    return "side"


_ACC = AccelerationClass.ACCELERATING
_DEC = AccelerationClass.DECELERATING


def five_necessary_conditions(curve: FractalCurve) -> LemmaReport:
    """Evaluate the structural conditions every curve with ratio below five
    must satisfy; any failed verdict certifies ratio >= 5.

    Conditions quantified over fractions are checked at orders one and two.
    """
    kind = classify(curve)
    one_sided = kind is CurveClass.ONE_SIDED
    diagonal = kind is CurveClass.DIAGONAL
    data = {1: _order_data(curve, 1), 2: _order_data(curve, 2)}
    q, nums, verts = curve.corner_time_table
    verdicts: list[LemmaVerdict] = []

    def add(lemma, applicable, holds, evidence=None):
        verdicts.append(
            LemmaVerdict(lemma, bool(holds) or not applicable, applicable, evidence)
        )

    # L9: 2nd vertex beside the entry, 3rd beside the exit.
    bad9 = []
    for a, b, label in ((verts[0], verts[1], "first-second"), (verts[2], verts[3], "third-fourth")):
        if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
            bad9.append(f"{label} visited vertices {a} and {b} are opposite")
    add("L9", True, not bad9, "; ".join(bad9) or None)

    # L10: consecutive same-order fraction images share a side.
    bad10 = None
    for depth in (1, 2):
        seq = data[depth]
        for i in range(len(seq) - 1):
            dc = abs(seq[i].cell[0] - seq[i + 1].cell[0])
            dr = abs(seq[i].cell[1] - seq[i + 1].cell[1])
            if dc + dr != 1:
                bad10 = f"order-{depth} junction {i}-{i + 1}: cells {seq[i].cell} and {seq[i + 1].cell} share only a vertex"
                break
        if bad10:
            break
    add("L10", True, bad10 is None, bad10)

    # L11: at a turn, first fraction decelerating, second accelerating.
    bad11 = None
    if one_sided:
        for depth in (1, 2):
            seq = data[depth]
            for i in range(len(seq) - 1):
                if _turn_kind(seq[i].disp, seq[i + 1].disp) is None:
                    continue
                if seq[i].accel is not _DEC or seq[i + 1].accel is not _ACC:
                    bad11 = (
                        f"order-{depth} turn {i}-{i + 1}: classes"
                        f" ({seq[i].accel.value}, {seq[i + 1].accel.value})"
                    )
                    break
            if bad11:
                break
    add("L11", one_sided, bad11 is None, bad11)

    # L12: no two consecutive turns.
    bad12 = None
    if one_sided:
        for depth in (1, 2):
            seq = data[depth]
            for i in range(len(seq) - 2):
                if (
                    _turn_kind(seq[i].disp, seq[i + 1].disp)
                    and _turn_kind(seq[i + 1].disp, seq[i + 2].disp)
                ):
                    bad12 = f"order-{depth} fractions {i}..{i + 2}: consecutive turns"
                    break
            if bad12:
                break
    add("L12", one_sided, bad12 is None, bad12)

    # L13: before a side turn, the preceding fraction also decelerates.
    bad13 = None
    if one_sided:
        for depth in (1, 2):
            seq = data[depth]
            for i in range(1, len(seq) - 1):
                if _turn_kind(seq[i].disp, seq[i + 1].disp) == "side":
                    if seq[i - 1].accel is not _DEC:
                        bad13 = (
                            f"order-{depth} side turn {i}-{i + 1}: fraction {i - 1}"
                            f" is {seq[i - 1].accel.value}"
                        )
                        break
            if bad13:
                break
    add("L13", one_sided, bad13 is None, bad13)

    # L14: neighboring corner-moment gaps strictly inside (1/5, 3/5).
    bad14 = []
    lo, hi = Fraction(1, 5), Fraction(3, 5)
    for i in range(3):
        gap = Fraction(nums[i + 1] - nums[i], q)
        if not lo < gap < hi:
            bad14.append(f"gap {i}: {gap}")
    add("L14", True, not bad14, "; ".join(bad14) or None)

    # L15: no side turn after three equal displacements.
    bad15 = None
    if one_sided:
        for depth in (1, 2):
            seq = data[depth]
            for i in range(len(seq) - 3):
                if (
                    seq[i].disp == seq[i + 1].disp == seq[i + 2].disp
                    and _turn_kind(seq[i + 2].disp, seq[i + 3].disp) == "side"
                ):
                    bad15 = f"order-{depth} fractions {i}..{i + 3}: side turn after a straight run of 3"
                    break
            if bad15:
                break
    add("L15", one_sided, bad15 is None, bad15)

    # L16: no back turn after four equal displacements led by an accelerating fraction.
    bad16 = None
    if one_sided:
        for depth in (1, 2):
            seq = data[depth]
            for i in range(len(seq) - 4):
                if (
                    seq[i].disp == seq[i + 1].disp == seq[i + 2].disp == seq[i + 3].disp
                    and _turn_kind(seq[i + 3].disp, seq[i + 4].disp) == "back"
                    and seq[i].accel is _ACC
                ):
                    bad16 = f"order-{depth} fractions {i}..{i + 4}: back turn after accelerating run of 4"
                    break
            if bad16:
                break
    add("L16", one_sided, bad16 is None, bad16)

    # L17: first three and last three fractions on the boundary.
    bad17 = []
    if diagonal:
        seq = data[1]
        k = curve.k
        for i in (0, 1, 2, len(seq) - 3, len(seq) - 2, len(seq) - 1):
            col, row = seq[i].cell
            if 0 < col < k - 1 and 0 < row < k - 1:
                bad17.append(f"fraction {i} at interior cell {seq[i].cell}")
    add("L17", diagonal, not bad17, "; ".join(bad17) or None)

    # L19: entry and exit segments each strictly under 2/5 of the period.
    bad19 = []
    if diagonal:
        front = Fraction(nums[1], q)
        back = Fraction(q - nums[2], q)
        if front >= Fraction(2, 5):
            bad19.append(f"time to first internal vertex is {front}")
        if back >= Fraction(2, 5):
            bad19.append(f"time from second internal vertex to end is {back}")
    add("L19", diagonal, not bad19, "; ".join(bad19) or None)

    # L20: shapes/acceleration of fractions 0 and 2 versus the entry direction.
    bad20 = None
    applicable20 = False
    if diagonal:
        seq = data[1]
        step = (
            seq[1].cell[0] - seq[0].cell[0],
            seq[1].cell[1] - seq[0].cell[1],
        )
        if step[0] == 0 or step[1] == 0:  # axis-aligned entry direction
            applicable20 = True
            straight = Shape.Z if step[0] != 0 else Shape.N
            # with vertical entry the plain statement wants Z-Z; a horizontal
            # entry is its quarter-turn conjugate, which swaps Z and N
            want = Shape.N if straight is Shape.Z else Shape.Z
            s0, s2 = seq[0].shape, seq[2].shape
            ok = (s0 is want and s2 is want) or (
                seq[0].accel is _DEC and seq[2].accel is _ACC and s0 is not s2 and s0 is not None and s2 is not None
            )
            if not ok:
                bad20 = (
                    f"fractions 0 and 2: shapes ({_shape_name(s0)}, {_shape_name(s2)}),"
                    f" classes ({seq[0].accel.value}, {seq[2].accel.value})"
                )
    add("L20", applicable20, bad20 is None, bad20)

    # L21: after four fractions stacked in one direction, the fourth fraction
    # must be shaped along the run and accelerating.
    bad21 = None
    if diagonal:
        for depth in (1, 2):
            seq = data[depth]
            for i in range(len(seq) - 3):
                steps = [
                    (
                        seq[j + 1].cell[0] - seq[j].cell[0],
                        seq[j + 1].cell[1] - seq[j].cell[1],
                    )
                    for j in range(i, i + 3)
                ]
                if steps[0] != steps[1] or steps[1] != steps[2]:
                    continue
                if steps[0] == (0, 1) or steps[0] == (0, -1):
                    want = Shape.Z
                elif steps[0] == (1, 0) or steps[0] == (-1, 0):
                    want = Shape.N
                else:
                    continue
                last = seq[i + 3]
                if last.shape is not want or last.accel is not _ACC:
                    bad21 = (
                        f"order-{depth} run {i}..{i + 3}: fourth fraction is"
                        f" {_shape_name(last.shape)} and {last.accel.value}"
                    )
                    break
            if bad21:
                break
    add("L21", diagonal, bad21 is None, bad21)

    return LemmaReport(tuple(verdicts))


def _shape_name(s: Shape | None) -> str:
    return s.value if s is not None else "none"


# ---------------------------------------------------------------------------
# minimum-dilation search


@dataclass(frozen=True)
class SearchStatistics:
    enumerated: int
    pruned_by_lower_bound: int
    pruned_by_certificate: int
    early_stopped: int
    fully_evaluated: int
    certified_over_five: int
    min_lower: Fraction
    truncated: bool = False


@dataclass(frozen=True)
class CurveRecord:
    curve: FractalCurve
    quick_lower: Fraction
    floor: Fraction
    report: LemmaReport | None
    estimate: DilationEstimate | None
    disposition: str  # "evaluated" | "pruned-quick" | "pruned-certificate" | "early-stopped"


@dataclass(frozen=True)
class MinDilationResult:
    curve: FractalCurve
    estimate: DilationEstimate
    statistics: SearchStatistics
    records: tuple[CurveRecord, ...] = field(repr=False, default=())


def _screen_curve(curve, threshold, tol, max_nodes, with_report) -> CurveRecord:
    """Decide one curve against a frozen incumbent upper bound.

    Two sampled lower bounds of increasing depth, then the certificate,
    then a full (early-stoppable) branch-and-bound run.  Pruning uses the
    strict comparison floor > threshold, so ties always reach full
    evaluation and the minimum is never lost.
    """
    quick = brute_force_lower_bound(curve, 1).lower_bound
    floor = quick
    report = None
    if threshold is not None and floor > threshold:
        if with_report:
            report = five_necessary_conditions(curve)
        return CurveRecord(curve, quick, floor, report, None, "pruned-quick")
    stage2 = brute_force_lower_bound(curve, 2).lower_bound
    floor = max(floor, stage2)
    if threshold is not None and floor > threshold:
        if with_report:
            report = five_necessary_conditions(curve)
        return CurveRecord(curve, quick, floor, report, None, "pruned-quick")
    report = five_necessary_conditions(curve)
    if report.certifies_ratio_at_least_five and floor < 5:
        floor = Fraction(5)
        if threshold is not None and floor > threshold:
            return CurveRecord(curve, quick, floor, report, None, "pruned-certificate")
    est = dilation_with_shared_incumbent(
        curve, tol, max_nodes=max_nodes,
        stop_if_lower_above=threshold, assume_valid=True,
    )
    floor = max(floor, est.lower)
    if est.capped and est.cap_reason == "lower-above-threshold":
        return CurveRecord(curve, quick, floor, report, est, "early-stopped")
    return CurveRecord(curve, quick, floor, report, est, "evaluated")


def find_min_dilation(
    spec: EnumerationSpec,
    tol: Fraction,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    jobs: int = 1,
    prune: bool = True,
    warm_start: FractalCurve | None = None,
    max_curves: int | None = None,
    batch_size: int = 2048,
    collect_records: bool = False,
    with_reports: bool = False,
    progress=None,
) -> MinDilationResult:
    """Minimum dilation upper bound over all enumerated curves.

    Streams the enumeration in fixed-size batches; each batch is screened
    against the incumbent upper bound frozen at the batch start, so the
    outcome (winner, bounds, statistics) is deterministic and independent
    of ``jobs``.  ``warm_start`` seeds the incumbent value from a known
    curve without making it eligible to win.  ``max_curves`` truncates the
    stream for partial runs and is reported in the statistics.
    """
    tol = Fraction(tol)
    stream = enumerate_curves(spec)
    incumbent_est: DilationEstimate | None = None
    incumbent_curve: FractalCurve | None = None
    if warm_start is not None:
        if warm_start.k != spec.k:
            raise ValueError("warm start curve must have the same base divisor")
        incumbent_est = dilation_with_shared_incumbent(warm_start, tol, max_nodes=max_nodes)

    pruned = pruned_cert = early = evaluated = certified = 0
    min_lower: Fraction | None = None
    records: list[CurveRecord] = []
    seen = 0
    truncated = False

    def absorb(rec: CurveRecord):
        nonlocal pruned, pruned_cert, early, evaluated, certified, min_lower
        nonlocal incumbent_est, incumbent_curve
        if rec.disposition == "pruned-quick":
            pruned += 1
        elif rec.disposition == "pruned-certificate":
            pruned_cert += 1
        elif rec.disposition == "early-stopped":
            early += 1
        else:
            evaluated += 1
            est = rec.estimate
            assert est is not None
            better = incumbent_est is None or est.upper < incumbent_est.upper
            tie_unclaimed = (
                incumbent_curve is None
                and incumbent_est is not None
                and est.upper <= incumbent_est.upper
            )
            if better or tie_unclaimed:
                incumbent_est, incumbent_curve = est, rec.curve
        if rec.report is not None and rec.report.certifies_ratio_at_least_five:
            certified += 1
        min_lower = rec.floor if min_lower is None else min(min_lower, rec.floor)
        if collect_records:
            records.append(rec)

    while True:
        batch: list[FractalCurve] = []
        for curve in stream:
            batch.append(curve)
            seen += 1
            if max_curves is not None and seen >= max_curves:
                truncated = True
                break
            if len(batch) >= batch_size:
                break
        if not batch:
            break

        if incumbent_est is None:
            # bootstrap: fully evaluate the most promising curve of the
            # first batch so later screening has a tight incumbent; the
            # depth-2 sample is a much better predictor than depth 1
            quicks = [brute_force_lower_bound(c, 2).lower_bound for c in batch]
            bi = min(range(len(batch)), key=lambda i: (quicks[i], batch[i].canonical_key))
            boot = dilation_with_shared_incumbent(
                batch[bi], tol, max_nodes=max_nodes, assume_valid=True
            )
            rep = five_necessary_conditions(batch[bi])
            absorb(CurveRecord(batch[bi], quicks[bi], boot.lower, rep, boot, "evaluated"))
            batch = [c for i, c in enumerate(batch) if i != bi]
            if not batch:
                continue

        threshold = incumbent_est.upper if prune else None
        payloads = [(c, threshold, tol, max_nodes, with_reports) for c in batch]
        if jobs > 1 and len(batch) > 64:
            import multiprocessing as mp

            ctx = mp.get_context("fork")
            with ctx.Pool(jobs) as pool:
                recs = pool.starmap(_screen_curve, payloads, chunksize=64)
        else:
            recs = [_screen_curve(*p) for p in payloads]
        for rec in recs:
            absorb(rec)
        if progress is not None:
            progress(
                {
                    "enumerated": seen,
                    "pruned": pruned + pruned_cert,
                    "early_stopped": early,
                    "evaluated": evaluated,
                    "incumbent_upper": incumbent_est.upper,
                }
            )
        if truncated:
            break

    if incumbent_est is None or incumbent_curve is None:
        raise ValueError(f"no valid curves with k={spec.k}")
    stats = SearchStatistics(
        enumerated=seen,
        pruned_by_lower_bound=pruned,
        pruned_by_certificate=pruned_cert,
        early_stopped=early,
        fully_evaluated=evaluated,
        certified_over_five=certified,
        min_lower=min_lower if min_lower is not None else incumbent_est.lower,
        truncated=truncated,
    )
    return MinDilationResult(incumbent_curve, incumbent_est, stats, tuple(records))
