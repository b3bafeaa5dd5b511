"""Curve evaluation, digital scan orders, and noise-blob metrics.

Exact evaluation works by base-g digit extraction with orientation
tracking: the local time state is a rational whose denominator never
grows, so the digit stream is eventually periodic and the limit point
drops out of a 2x2 linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .curve import (
    FractalCurve,
    Frame,
    ROOT_FRAME,
    frame_struct_child,
    frame_to_affine,
    _fixed_point,
)
from .errors import ResourceCapError
from .geometry import Point

#: Default cap on g**depth cells materialized by scan_order / enclosures.
DEFAULT_MAX_CELLS = 1 << 20

#: Pixel-pair scans switch to convex-hull rotating calipers above this size.
EXHAUSTIVE_PAIR_CAP = 4096


@dataclass(frozen=True)
class PointEnclosure:
    """A depth-n grid square certified to contain f(t)."""

    depth: int
    k: int
    cell: tuple[int, int]

    @property
    def side(self) -> Fraction:
        return Fraction(1, self.k**self.depth)

    @property
    def low(self) -> Point:
        s = self.side
        return Point(self.cell[0] * s, self.cell[1] * s)

    @property
    def high(self) -> Point:
        s = self.side
        return Point((self.cell[0] + 1) * s, (self.cell[1] + 1) * s)

    def contains(self, p: Point) -> bool:
        lo, hi = self.low, self.high
        return lo.x <= p.x <= hi.x and lo.y <= p.y <= hi.y


@dataclass(frozen=True)
class ScanOrder:
    """Traversal order of the k^n by k^n grid induced by a curve."""

    k: int
    depth: int
    cells: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return self.k**self.depth

    def __post_init__(self):
        if len(self.cells) != self.width * self.width:
            raise ValueError("scan order must cover the full grid")


@dataclass(frozen=True)
class BlobMetrics:
    area: int
    diameter_sq: int

    @property
    def elongation(self) -> Fraction:
        return Fraction(self.diameter_sq, self.area)


def _digit_step(curve: FractalCurve, s: Fraction) -> tuple[int, Fraction]:
    """One digit of the local-time recursion, with the boundary tie-break
    picking the earlier period."""
    g = curve.genus
    u = s * g
    if u.denominator == 1 and u >= 1:
        i, raw = int(u) - 1, Fraction(1)
    else:
        i = int(u)
        raw = u - i
    spec = curve.fractions[i]
    return i, (1 - raw if spec.rev else raw)


def evaluate(curve: FractalCurve, t: Fraction, depth: int) -> PointEnclosure:
    """The depth-n grid square containing f(t)."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"time {t} outside [0, 1]")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if curve.genus**depth > DEFAULT_MAX_CELLS:
        raise ResourceCapError(f"g**depth exceeds cell cap {DEFAULT_MAX_CELLS}")
    frame = ROOT_FRAME
    s = t
    for _ in range(depth):
        i, s = _digit_step(curve, s)
        frame = frame_struct_child(curve, frame, i)
    return PointEnclosure(depth, curve.k, (frame.x, frame.y))


def evaluate_exact(curve: FractalCurve, t: Fraction, max_steps: int = 100_000) -> Point:
    """Exact f(t) for rational t.

    The local-time state has a denominator dividing t's, so it revisits a
    value within finitely many steps; the tail is then the fixed point of
    the affine contraction composed over the cycle.
    """
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"time {t} outside [0, 1]")
    seen: dict[Fraction, int] = {}
    steps: list[int] = []
    s = t
    while s not in seen:
        if len(steps) > max_steps:
            raise ResourceCapError(f"digit recursion exceeded {max_steps} steps")
        seen[s] = len(steps)
        i, s = _digit_step(curve, s)
        steps.append(i)
    start = seen[s]
    prefix = ROOT_FRAME
    for i in steps[:start]:
        prefix = frame_struct_child(curve, prefix, i)
    cycle = ROOT_FRAME
    for i in steps[start:]:
        cycle = frame_struct_child(curve, cycle, i)
    p = _fixed_point(frame_to_affine(curve, cycle))
    return frame_to_affine(curve, prefix).apply(p)


def scan_order(curve: FractalCurve, depth: int, max_cells: int = DEFAULT_MAX_CELLS) -> ScanOrder:
    """Cells of the depth-n fractions in time order."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    total = curve.genus**depth
    if total > max_cells:
        raise ResourceCapError(f"scan of {total} cells exceeds cap {max_cells}")
    g = curve.genus
    frames: list[Frame] = [ROOT_FRAME]
    for _ in range(depth):
        nxt: list[Frame] = []
        for f in frames:
            if f.rev:
                for d in range(g - 1, -1, -1):
                    nxt.append(frame_struct_child(curve, f, d))
            else:
                for d in range(g):
                    nxt.append(frame_struct_child(curve, f, d))
        frames = nxt
    return ScanOrder(curve.k, depth, tuple((f.x, f.y) for f in frames))


def blob_metrics(order: ScanOrder, start: int, end: int) -> BlobMetrics:
    """Area, squared diameter and elongation of one scan interval.

    Pixels are the cell centers in integer pixel units; the diameter is the
    max pairwise Euclidean distance, exact by pair scan for small blobs and
    by convex-hull rotating calipers for large ones.
    """
    n = len(order.cells)
    if not 0 <= start <= end < n:
        raise ValueError(f"interval [{start}, {end}] outside [0, {n})")
    pixels = order.cells[start : end + 1]
    return BlobMetrics(len(pixels), _diameter_sq(pixels))


def _diameter_sq(pixels: Sequence[tuple[int, int]]) -> int:
    if len(pixels) <= EXHAUSTIVE_PAIR_CAP:
        best = 0
        for i in range(len(pixels)):
            xi, yi = pixels[i]
            for j in range(i + 1, len(pixels)):
                dx = xi - pixels[j][0]
                dy = yi - pixels[j][1]
                d = dx * dx + dy * dy
                if d > best:
                    best = d
        return best
    hull = _convex_hull(sorted(set(pixels)))
    return _hull_diameter_sq(hull)


def _convex_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Monotone-chain hull of pre-sorted distinct points, CCW."""
    if len(points) <= 2:
        return points

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[int, int]] = []
    for p in points:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[int, int]] = []
    for p in reversed(points):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _hull_diameter_sq(hull: list[tuple[int, int]]) -> int:
    n = len(hull)
    if n == 1:
        return 0
    if n == 2:
        dx = hull[0][0] - hull[1][0]
        dy = hull[0][1] - hull[1][1]
        return dx * dx + dy * dy

    def dist2(a, b):
        return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2

    def area2(o, a, b):
        return abs(
            (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        )

    best = 0
    j = 1
    for i in range(n):
        ni = (i + 1) % n
        while area2(hull[i], hull[ni], hull[(j + 1) % n]) > area2(
            hull[i], hull[ni], hull[j]
        ):
            j = (j + 1) % n
        best = max(best, dist2(hull[i], hull[j]), dist2(hull[ni], hull[j]))
    return best
