"""Fractal Peano curve model: construction, validation and combinatorics.

A curve of genus g = k*k is described by a base divisor k and an ordered
list of g fraction specs.  Fraction i occupies the time period
[i/g, (i+1)/g], its image is one cell of the k-by-k grid, and on its period
the curve is the whole curve shrunk into that cell by a similarity: apply
the fraction's square isometry, translate to the cell, scale by 1/k, and
optionally run time backwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import InvalidCurveError, InvariantViolationError
from .geometry import (
    ISOMETRIES,
    Point,
    SquareIsometry,
    apply_isometry,
    apply_to_cell,
    apply_to_vector,
    apply_to_vertex,
    compose,
    inverse,
    isometry_from_code,
)


class Cell(NamedTuple):
    """Grid cell (col, row), both in [0, k)."""

    col: int
    row: int


class FractionSpec(NamedTuple):
    """One maximal fraction: target cell, isometry, time orientation."""

    cell: Cell
    iso: SquareIsometry
    rev: bool = False


class CurveClass(Enum):
    DIAGONAL = "diagonal"
    ONE_SIDED = "one-sided"


class Shape(Enum):
    """First internal displacement horizontal (Z) or vertical (N)."""

    Z = "Z"
    N = "N"


class AccelerationClass(Enum):
    ACCELERATING = "accelerating"
    DECELERATING = "decelerating"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class CornerMoment:
    """The unique time at which the curve passes a unit-square vertex."""

    vertex: tuple[int, int]
    time: Fraction


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of semantic validation; empty ``issues`` means valid."""

    issues: tuple[str, ...]
    junction_contacts: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.issues


@dataclass(frozen=True)
class AffineMap:
    """Exact affine map of the plane: p -> M p + t."""

    xx: Fraction
    xy: Fraction
    yx: Fraction
    yy: Fraction
    tx: Fraction
    ty: Fraction

    def apply(self, p: Point) -> Point:
        return Point(
            self.xx * p.x + self.xy * p.y + self.tx,
            self.yx * p.x + self.yy * p.y + self.ty,
        )

    def __call__(self, p: Point) -> Point:
        return self.apply(p)

    @staticmethod
    def identity() -> "AffineMap":
        one = Fraction(1)
        zero = Fraction(0)
        return AffineMap(one, zero, zero, one, zero, zero)


class Frame(NamedTuple):
    """Similarity onto a depth-n cell, in integer grid units.

    Maps the unit square onto the square
    [x, x+1]/k^depth x [y, y+1]/k^depth with linear part ``iso``; ``rev``
    is the accumulated time-orientation parity.
    """

    depth: int
    x: int
    y: int
    iso: SquareIsometry
    rev: bool


ROOT_FRAME = Frame(0, 0, 0, SquareIsometry.E, False)


class FractalCurve:
    """Immutable description of a regular fractal Peano curve candidate.

    The constructor enforces only structural well-formedness (k >= 2,
    exactly k*k fractions, cells in range); semantic validity is checked
    separately by :func:`validate`.
    """

    __slots__ = ("k", "fractions", "__dict__")

    def __init__(self, k: int, fractions: Iterable[FractionSpec]):
        fractions = tuple(
            FractionSpec(Cell(*f.cell), f.iso, bool(f.rev)) for f in fractions
        )
        if k < 2:
            raise ValueError(f"base divisor must be >= 2, got {k}")
        if len(fractions) != k * k:
            raise ValueError(
                f"expected {k * k} fractions for base divisor {k}, got {len(fractions)}"
            )
        for i, spec in enumerate(fractions):
            if not (0 <= spec.cell.col < k and 0 <= spec.cell.row < k):
                raise ValueError(f"fraction {i}: cell {tuple(spec.cell)} outside [0,{k})^2")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "fractions", fractions)

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("FractalCurve is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, FractalCurve)
            and self.k == other.k
            and self.fractions == other.fractions
        )

    def __hash__(self):
        return hash((self.k, self.fractions))

    def __repr__(self):
        return f"FractalCurve(k={self.k}, fractions={list(self.fractions)!r})"

    def __reduce__(self):
        # drop caches; workers recompute them
        return (FractalCurve, (self.k, self.fractions))

    @property
    def genus(self) -> int:
        return self.k * self.k

    @cached_property
    def cell_index(self) -> dict[Cell, int]:
        """Map cell -> fraction index.  Duplicate cells keep the first hit."""
        out: dict[Cell, int] = {}
        for i, spec in enumerate(self.fractions):
            out.setdefault(spec.cell, i)
        return out

    @cached_property
    def cells_are_partition(self) -> bool:
        return len({spec.cell for spec in self.fractions}) == self.genus

    # -- entry/exit ------------------------------------------------------

    @cached_property
    def entry_exit(self) -> tuple[Point, Point]:
        """Global entry f(0) and exit f(1), by exact fixed-point solve.

        Each of f(0), f(1) satisfies an affine contraction identity through
        the first/last fraction, so the pair is the unique solution of a
        small linear system.
        """
        first = self.fractions[0]
        last = self.fractions[-1]
        a0 = _spec_affine(first, self.k)
        a1 = _spec_affine(last, self.k)
        if not first.rev and not last.rev:
            return (_fixed_point(a0), _fixed_point(a1))
        if not first.rev and last.rev:
            entry = _fixed_point(a0)
            return (entry, a1.apply(entry))
        if first.rev and not last.rev:
            exit_ = _fixed_point(a1)
            return (a0.apply(exit_), exit_)
        entry = _fixed_point(_compose_affine(a0, a1))
        return (entry, a1.apply(entry))

    @cached_property
    def _entry_exit_vertices(self) -> tuple[tuple[int, int], tuple[int, int]]:
        entry, exit_ = self.entry_exit
        ev = _as_vertex(entry)
        xv = _as_vertex(exit_)
        if ev is None or xv is None or ev == xv:
            raise InvalidCurveError(
                f"entry {tuple(entry)} and exit {tuple(exit_)} must be distinct vertices"
            )
        return ev, xv

    # -- corner moments --------------------------------------------------

    @cached_property
    def corner_moments(self) -> tuple[CornerMoment, ...]:
        """The four vertex passage moments, in increasing time order."""
        moments = sorted(
            (CornerMoment(v, _vertex_time(self, v)) for v in _UNIT_VERTICES),
            key=lambda m: m.time,
        )
        times = [m.time for m in moments]
        if times[0] != 0 or times[-1] != 1 or any(
            times[i] >= times[i + 1] for i in range(3)
        ):
            raise InvariantViolationError(
                f"corner moments are not a strict chain from 0 to 1: {times}"
            )
        ev, xv = self._entry_exit_vertices
        if moments[0].vertex != ev or moments[-1].vertex != xv:
            raise InvariantViolationError("corner moments disagree with entry/exit")
        return tuple(moments)

    @cached_property
    def corner_time_table(self) -> tuple[int, tuple[int, int, int, int], tuple[tuple[int, int], ...]]:
        """(q, time numerators over q, vertices in traversal order).

        Shared integer form of :attr:`corner_moments` used by the samplers:
        the four passage times are nums[i]/q with nums[0] = 0, nums[3] = q.
        """
        moments = self.corner_moments
        q = 1
        for m in moments:
            q = q * m.time.denominator // _gcd(q, m.time.denominator)
        nums = tuple(int(m.time * q) for m in moments)
        verts = tuple(m.vertex for m in moments)
        return q, nums, verts  # type: ignore[return-value]

    @cached_property
    def base_displacement(self) -> tuple[int, int]:
        """Exit minus entry, in vertex units (components in {-1,0,1})."""
        ev, xv = self._entry_exit_vertices
        return (xv[0] - ev[0], xv[1] - ev[1])

    @cached_property
    def base_acceleration_sign(self) -> int:
        """sign(front gap - back gap) for the whole curve; see acceleration_class."""
        q, nums, _ = self.corner_time_table
        front = nums[1]
        back = q - nums[2]
        return (front > back) - (front < back)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "fractions": [
                {"cell": [f.cell.col, f.cell.row], "iso": f.iso.code, "rev": f.rev}
                for f in self.fractions
            ],
        }

    @staticmethod
    def from_dict(data: dict) -> "FractalCurve":
        if not isinstance(data, dict):
            raise ValueError("curve document must be a JSON object")
        if "k" not in data:
            raise ValueError("curve document: missing field 'k'")
        if "fractions" not in data:
            raise ValueError("curve document: missing field 'fractions'")
        k = data["k"]
        if not isinstance(k, int):
            raise ValueError(f"curve document: field 'k' must be an integer, got {k!r}")
        raw = data["fractions"]
        if not isinstance(raw, list):
            raise ValueError("curve document: field 'fractions' must be a list")
        fractions = []
        for i, item in enumerate(raw):
            if not isinstance(item, dict):
                raise ValueError(f"fractions[{i}]: must be an object")
            try:
                col, row = item["cell"]
                iso = isometry_from_code(item["iso"])
                rev = bool(item.get("rev", False))
            except KeyError as exc:
                raise ValueError(f"fractions[{i}]: missing field {exc}") from None
            except (TypeError, ValueError) as exc:
                raise ValueError(f"fractions[{i}]: {exc}") from None
            if not isinstance(col, int) or not isinstance(row, int):
                raise ValueError(f"fractions[{i}]: cell entries must be integers")
            fractions.append(FractionSpec(Cell(col, row), iso, rev))
        return FractalCurve(k, fractions)

    # -- symmetry --------------------------------------------------------

    def conjugate(self, iso: SquareIsometry) -> "FractalCurve":
        """The curve transformed by ``iso`` acting on the plane."""
        inv = inverse(iso)
        return FractalCurve(
            self.k,
            [
                FractionSpec(
                    Cell(*apply_to_cell(iso, f.cell.col, f.cell.row, self.k)),
                    compose(compose(iso, f.iso), inv),
                    f.rev,
                )
                for f in self.fractions
            ],
        )

    def reverse(self) -> "FractalCurve":
        """The curve run backwards in time.

        Fraction order reverses while every orientation flag stays put: the
        flag relates a fraction to the whole curve, and reversing both the
        whole and the traversal of the piece cancels out.
        """
        return FractalCurve(
            self.k,
            [FractionSpec(f.cell, f.iso, f.rev) for f in reversed(self.fractions)],
        )

    def serial_key(self) -> tuple:
        return (self.k, tuple((f.cell.col, f.cell.row, f.iso.index, f.rev) for f in self.fractions))

    @cached_property
    def canonical_key(self) -> tuple:
        """Minimum serialization over the 8 conjugations x time reversal.

        Computed on tuples directly; equals
        ``self.canonical_form().serial_key()``.
        """
        k = self.k
        raw = [(f.cell.col, f.cell.row, f.iso.index, f.rev) for f in self.fractions]
        best = None
        for ei in range(8):
            eta = ISOMETRIES[ei]
            conj_row = _CONJ_TABLE[ei]
            conj = tuple(
                (*apply_to_cell(eta, c, r, k), conj_row[ii], rv)
                for (c, r, ii, rv) in raw
            )
            if best is None or conj < best:
                best = conj
            rev_conj = conj[::-1]
            if rev_conj < best:
                best = rev_conj
        return (k, best)

    def symmetry_orbit(self) -> list["FractalCurve"]:
        """All 16 transform results (with repeats when symmetric)."""
        out = []
        for iso in ISOMETRIES:
            conj = self.conjugate(iso)
            out.append(conj)
            out.append(conj.reverse())
        return out

    def canonical_form(self) -> "FractalCurve":
        return min(self.symmetry_orbit(), key=FractalCurve.serial_key)


_UNIT_VERTICES = ((0, 0), (1, 0), (0, 1), (1, 1))

#: conjugation table: _CONJ_TABLE[eta][iso] = index of etao iso o eta^-1
_CONJ_TABLE = tuple(
    tuple(
        compose(compose(eta, iso), inverse(eta)).index for iso in ISOMETRIES
    )
    for eta in ISOMETRIES
)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _spec_affine(spec: FractionSpec, k: int) -> AffineMap:
    """The contraction carrying the unit square onto ``spec``'s cell."""
    return _frame_to_affine_parts(1, spec.cell.col, spec.cell.row, spec.iso, k)


def _frame_to_affine_parts(depth: int, x: int, y: int, iso: SquareIsometry, k: int) -> AffineMap:
    scale = Fraction(1, k**depth)
    swap, negx, negy = _iso_flags(iso)
    # linear part of the isometry followed by translation into the cell
    if swap:
        xx, xy = Fraction(0), Fraction(1)
        yx, yy = Fraction(1), Fraction(0)
    else:
        xx, xy = Fraction(1), Fraction(0)
        yx, yy = Fraction(0), Fraction(1)
    ox = oy = Fraction(0)
    if negx:
        xx, xy, ox = -xx, -xy, Fraction(1)
    if negy:
        yx, yy, oy = -yx, -yy, Fraction(1)
    return AffineMap(
        xx * scale,
        xy * scale,
        yx * scale,
        yy * scale,
        (x + ox) * scale,
        (y + oy) * scale,
    )


def _iso_flags(iso: SquareIsometry) -> tuple[bool, bool, bool]:
    from .geometry import _FLAGS  # single source of truth for the action

    return _FLAGS[iso]


def _compose_affine(a: AffineMap, b: AffineMap) -> AffineMap:
    """a after b."""
    return AffineMap(
        a.xx * b.xx + a.xy * b.yx,
        a.xx * b.xy + a.xy * b.yy,
        a.yx * b.xx + a.yy * b.yx,
        a.yx * b.xy + a.yy * b.yy,
        a.xx * b.tx + a.xy * b.ty + a.tx,
        a.yx * b.tx + a.yy * b.ty + a.ty,
    )


def _fixed_point(m: AffineMap) -> Point:
    """Unique fixed point of an affine contraction, by Cramer's rule."""
    # (I - L) p = t
    a = 1 - m.xx
    b = -m.xy
    c = -m.yx
    d = 1 - m.yy
    det = a * d - b * c
    if det == 0:
        raise InvariantViolationError("affine map is not a contraction")
    return Point((m.tx * d - b * m.ty) / det, (a * m.ty - m.tx * c) / det)


def _as_vertex(p: Point) -> tuple[int, int] | None:
    if p.x in (0, 1) and p.y in (0, 1):
        return (int(p.x), int(p.y))
    return None


def _vertex_time(curve: FractalCurve, v: tuple[int, int]) -> Fraction:
    """Time of the (unique) passage through unit-square vertex ``v``.

    Descends through corner cells: ``v`` is a corner of exactly one cell,
    pulling it back through that fraction's similarity gives another
    vertex, and the (vertex -> vertex) map cycles within at most four
    states, so the base-g digit stream is eventually periodic and the time
    comes out of an exact geometric-series solve.
    """
    if not curve.cells_are_partition:
        raise InvalidCurveError("corner moments need the cells to be a partition")
    k, g = curve.k, curve.genus
    steps: list[tuple[int, bool]] = []
    seen: dict[tuple[int, int], int] = {}
    cur = v
    while cur not in seen:
        seen[cur] = len(steps)
        cell = Cell((k - 1) * cur[0], (k - 1) * cur[1])
        i = curve.cell_index[cell]
        spec = curve.fractions[i]
        steps.append((i, spec.rev))
        cur = apply_to_vertex(inverse(spec.iso), *cur)
    start = seen[cur]
    # Solve t = alpha + beta * t over the cycle, |beta| = g^-(cycle length).
    alpha, beta = Fraction(0), Fraction(1)
    for i, rev in steps[start:]:
        if rev:
            alpha, beta = alpha + beta * Fraction(i + 1, g), -beta / g
        else:
            alpha, beta = alpha + beta * Fraction(i, g), beta / g
    t = alpha / (1 - beta)
    for i, rev in reversed(steps[:start]):
        t = Fraction(i + 1 - t, g) if rev else Fraction(i + t, g)
    return t


# ---------------------------------------------------------------------------
# frames


def frame_child(curve: FractalCurve, frame: Frame, time_digit: int) -> Frame:
    """Refine ``frame`` by one base-g time digit (0 = earliest child)."""
    g = curve.genus
    j = time_digit if not frame.rev else g - 1 - time_digit
    spec = curve.fractions[j]
    u, v = apply_to_cell(frame.iso, spec.cell.col, spec.cell.row, curve.k)
    return Frame(
        frame.depth + 1,
        frame.x * curve.k + u,
        frame.y * curve.k + v,
        compose(frame.iso, spec.iso),
        frame.rev ^ spec.rev,
    )


def frame_struct_child(curve: FractalCurve, frame: Frame, j: int) -> Frame:
    """Refine ``frame`` by structural child ``j`` (curve's own order)."""
    spec = curve.fractions[j]
    u, v = apply_to_cell(frame.iso, spec.cell.col, spec.cell.row, curve.k)
    return Frame(
        frame.depth + 1,
        frame.x * curve.k + u,
        frame.y * curve.k + v,
        compose(frame.iso, spec.iso),
        frame.rev ^ spec.rev,
    )


def frame_for_path(curve: FractalCurve, path: Iterable[int]) -> Frame:
    frame = ROOT_FRAME
    for d in path:
        if not 0 <= d < curve.genus:
            raise ValueError(f"path digit {d} out of range [0, {curve.genus})")
        frame = frame_child(curve, frame, d)
    return frame


def frame_to_affine(curve: FractalCurve, frame: Frame) -> AffineMap:
    return _frame_to_affine_parts(frame.depth, frame.x, frame.y, frame.iso, curve.k)


def path_time_index(curve: FractalCurve, path: Iterable[int]) -> tuple[int, int]:
    """(m, n): the path's period is [m/g^n, (m+1)/g^n]."""
    m = 0
    n = 0
    for d in path:
        m = m * curve.genus + d
        n += 1
    return m, n


def frame_corner_times(curve: FractalCurve, frame: Frame, m: int) -> list[Fraction]:
    """Global times of the four vertex passages of the addressed fraction."""
    q, nums, _ = curve.corner_time_table
    gn = curve.genus**frame.depth
    if frame.rev:
        local = (0, q - nums[2], q - nums[1], q)
    else:
        local = nums
    return [Fraction(m * q + p, q * gn) for p in local]


def frame_corner_samples(curve: FractalCurve, frame: Frame, m: int) -> list[tuple[int, int, int]]:
    """Vertex passages of the framed fraction in integer units.

    Returns four (t, x, y) triples in time order with t over q * g**depth
    and x, y over k**depth, where q is the shared corner-time denominator.
    """
    q, nums, verts = curve.corner_time_table
    if frame.rev:
        local = (0, q - nums[2], q - nums[1], q)
        order = tuple(reversed(verts))
    else:
        local = nums
        order = verts
    base = m * q
    out = []
    for p, v in zip(local, order):
        dx, dy = apply_to_vertex(frame.iso, *v)
        out.append((base + p, frame.x + dx, frame.y + dy))
    return out


def frame_corner_points(curve: FractalCurve, frame: Frame) -> list[Point]:
    """Exact positions matching :func:`frame_corner_times`, in time order."""
    _, _, verts = curve.corner_time_table
    order = tuple(reversed(verts)) if frame.rev else verts
    kn = curve.k**frame.depth
    out = []
    for v in order:
        dx, dy = apply_to_vertex(frame.iso, *v)
        out.append(Point(Fraction(frame.x + dx, kn), Fraction(frame.y + dy, kn)))
    return out


# ---------------------------------------------------------------------------
# public operations


def validate(curve: FractalCurve) -> ValidationReport:
    """Check the regular-Peano-curve invariants, reporting every failure.

    Junction contacts record, for each pair of consecutive cells, whether
    the cells share a side or only a vertex; vertex contact is legal as
    long as the curve is continuous there.
    """
    issues: list[str] = []
    cells = [spec.cell for spec in curve.fractions]
    if len(set(cells)) != curve.genus:
        dupes = sorted({tuple(c) for c in cells if cells.count(c) > 1})
        issues.append(f"cells not a partition: duplicated {dupes}")

    entry, exit_ = curve.entry_exit
    ev, xv = _as_vertex(entry), _as_vertex(exit_)
    if ev is None or xv is None:
        issues.append(
            f"entry/exit not vertices of the unit square: entry={_fmt_point(entry)}"
            f" exit={_fmt_point(exit_)}"
        )
    elif ev == xv:
        issues.append(f"entry and exit coincide at vertex {ev}")

    contacts: list[str] = []
    for i in range(curve.genus - 1):
        a, b = curve.fractions[i], curve.fractions[i + 1]
        dc = abs(a.cell.col - b.cell.col)
        dr = abs(a.cell.row - b.cell.row)
        if dc <= 1 and dr <= 1 and dc + dr > 0:
            contacts.append("side" if dc + dr == 1 else "vertex")
        else:
            contacts.append("none")
        exit_i = _fraction_exit(curve, a)
        entry_next = _fraction_entry(curve, b)
        if exit_i != entry_next:
            issues.append(
                f"continuity failure at junction {i}-{i + 1}:"
                f" exit {_fmt_point(exit_i)} != entry {_fmt_point(entry_next)}"
            )
    return ValidationReport(tuple(issues), tuple(contacts))


def _fraction_entry(curve: FractalCurve, spec: FractionSpec) -> Point:
    entry, exit_ = curve.entry_exit
    src = exit_ if spec.rev else entry
    return _spec_affine(spec, curve.k).apply(src)


def _fraction_exit(curve: FractalCurve, spec: FractionSpec) -> Point:
    entry, exit_ = curve.entry_exit
    src = entry if spec.rev else exit_
    return _spec_affine(spec, curve.k).apply(src)


def _fmt_point(p: Point) -> str:
    return f"({p.x}, {p.y})"


def entry_exit(curve: FractalCurve) -> tuple[Point, Point]:
    return curve.entry_exit


def classify(curve: FractalCurve) -> CurveClass:
    """Diagonal (opposite entry/exit vertices) or one-sided (shared side)."""
    ev, xv = curve._entry_exit_vertices
    dist = abs(ev[0] - xv[0]) + abs(ev[1] - xv[1])
    return CurveClass.DIAGONAL if dist == 2 else CurveClass.ONE_SIDED


def fraction_frame(curve: FractalCurve, path: Iterable[int]) -> tuple[AffineMap, bool]:
    """Similarity onto the order-n fraction addressed by time digits ``path``.

    Returns the affine map (scale k^-n) and the net time orientation; the
    fraction's period is [m/g^n, (m+1)/g^n] with m the base-g value of the
    digits.
    """
    path = tuple(path)
    frame = frame_for_path(curve, path)
    return frame_to_affine(curve, frame), frame.rev


def corner_moments(curve: FractalCurve) -> tuple[CornerMoment, ...]:
    return curve.corner_moments


def internal_corner_moments(curve: FractalCurve, path: Iterable[int]) -> tuple[Fraction, Fraction]:
    """Global times of the two internal vertex passages of a fraction."""
    path = tuple(path)
    frame = frame_for_path(curve, path)
    m, _ = path_time_index(curve, path)
    times = frame_corner_times(curve, frame, m)
    return times[1], times[2]


def fraction_shape(curve: FractalCurve, path: Iterable[int]) -> Shape:
    """Z when the entry-to-first-internal-vertex displacement is horizontal,
    N when vertical."""
    frame = frame_for_path(curve, tuple(path))
    _, _, verts = curve.corner_time_table
    if frame.rev:
        a, b = verts[3], verts[2]
    else:
        a, b = verts[0], verts[1]
    dx, dy = apply_to_vector(frame.iso, b[0] - a[0], b[1] - a[1])
    if dy == 0 and dx != 0:
        return Shape.Z
    if dx == 0 and dy != 0:
        return Shape.N
    raise InvariantViolationError(
        f"first internal displacement ({dx}, {dy}) is not axis-aligned"
    )


def acceleration_class(curve: FractalCurve, path: Iterable[int]) -> AccelerationClass:
    """Compare time from start to first internal vertex against time from
    second internal vertex to end (exact)."""
    frame = frame_for_path(curve, tuple(path))
    sign = curve.base_acceleration_sign
    if frame.rev:
        sign = -sign
    if sign > 0:
        return AccelerationClass.ACCELERATING
    if sign < 0:
        return AccelerationClass.DECELERATING
    return AccelerationClass.NEUTRAL


def displacement(curve: FractalCurve, path: Iterable[int]) -> tuple[Fraction, Fraction]:
    """Exit point minus entry point of the addressed fraction."""
    frame = frame_for_path(curve, tuple(path))
    dx, dy = frame_displacement(curve, frame)
    scale = Fraction(1, curve.k**frame.depth)
    return (dx * scale, dy * scale)


def frame_displacement(curve: FractalCurve, frame: Frame) -> tuple[int, int]:
    """Integer displacement (in k^-depth units) of a framed fraction."""
    bx, by = curve.base_displacement
    dx, dy = apply_to_vector(frame.iso, bx, by)
    if frame.rev:
        dx, dy = -dx, -dy
    return dx, dy


def is_turn(curve: FractalCurve, i: int) -> bool:
    """True when fractions i and i+1 have different displacements."""
    if not 0 <= i < curve.genus - 1:
        raise ValueError(f"junction index {i} out of range [0, {curve.genus - 1})")
    a = frame_displacement(curve, frame_for_path(curve, (i,)))
    b = frame_displacement(curve, frame_for_path(curve, (i + 1,)))
    return a != b


def curve_isometries() -> tuple[SquareIsometry, ...]:
    return ISOMETRIES
