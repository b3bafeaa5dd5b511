"""Exact rational plane geometry and the symmetry group of the unit square.

Everything here is exact: coordinates are `fractions.Fraction`, isometries
are table-driven, and no floating point appears anywhere.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import NamedTuple

# Times, coordinates and ratios are plain stdlib fractions: always in lowest
# terms, positive denominator, exact arithmetic.
Rational = Fraction


class Point(NamedTuple):
    """A point of the plane with exact rational coordinates."""

    x: Fraction
    y: Fraction

    @staticmethod
    def of(x, y) -> "Point":
        return Point(Fraction(x), Fraction(y))

    def __sub__(self, other: "Point") -> tuple[Fraction, Fraction]:
        return (self.x - other.x, self.y - other.y)


#: The four vertices of the unit square, indexed 0..3.
VERTICES: tuple[tuple[int, int], ...] = ((0, 0), (1, 0), (0, 1), (1, 1))
VERTEX_INDEX = {v: i for i, v in enumerate(VERTICES)}


class SquareIsometry(Enum):
    """One of the eight isometries mapping the unit square onto itself.

    Codes: identity ``e``; counterclockwise rotations ``r1``/``r2``/``r3``
    by 90/180/270 degrees about (1/2, 1/2); reflections ``mx`` (across the
    horizontal line y = 1/2), ``my`` (across the vertical line x = 1/2),
    ``md`` (across the main diagonal y = x) and ``ma`` (across the
    anti-diagonal y = 1 - x).
    """

    E = "e"
    R1 = "r1"
    R2 = "r2"
    R3 = "r3"
    MX = "mx"
    MY = "my"
    MD = "md"
    MA = "ma"

    def __repr__(self) -> str:  # pragma: no cover - debugging nicety
        return f"SquareIsometry.{self.name}"

    @property
    def code(self) -> str:
        return self.value

    @property
    def index(self) -> int:
        return _INDEX[self]

    @property
    def is_rotation(self) -> bool:
        return not _FLAGS[self][0] ^ _FLAGS[self][1] ^ _FLAGS[self][2]


# Each isometry factors as: optionally swap coordinates, then optionally
# replace x by 1-x and y by 1-y.  (swap, negx, negy) determine it uniquely.
_FLAGS: dict[SquareIsometry, tuple[bool, bool, bool]] = {
    SquareIsometry.E: (False, False, False),
    SquareIsometry.R1: (True, True, False),
    SquareIsometry.R2: (False, True, True),
    SquareIsometry.R3: (True, False, True),
    SquareIsometry.MX: (False, False, True),
    SquareIsometry.MY: (False, True, False),
    SquareIsometry.MD: (True, False, False),
    SquareIsometry.MA: (True, True, True),
}

ISOMETRIES: tuple[SquareIsometry, ...] = (
    SquareIsometry.E,
    SquareIsometry.R1,
    SquareIsometry.R2,
    SquareIsometry.R3,
    SquareIsometry.MX,
    SquareIsometry.MY,
    SquareIsometry.MD,
    SquareIsometry.MA,
)

_INDEX = {iso: i for i, iso in enumerate(ISOMETRIES)}
_BY_CODE = {iso.value: iso for iso in ISOMETRIES}


def isometry_from_code(code: str) -> SquareIsometry:
    """Look up an isometry by its serialized code, e.g. ``"md"``."""
    try:
        return _BY_CODE[code]
    except KeyError:
        valid = ", ".join(sorted(_BY_CODE))
        raise ValueError(f"unknown isometry code {code!r}; valid codes: {valid}") from None


def apply_isometry(iso: SquareIsometry, p: Point) -> Point:
    """Image of ``p`` under the unit-square isometry ``iso``."""
    swap, negx, negy = _FLAGS[iso]
    u, v = (p.y, p.x) if swap else (p.x, p.y)
    if negx:
        u = 1 - u
    if negy:
        v = 1 - v
    return Point(u, v)


def apply_to_vertex(iso: SquareIsometry, vx: int, vy: int) -> tuple[int, int]:
    """Fast integer path of :func:`apply_isometry` for 0/1 vertices."""
    swap, negx, negy = _FLAGS[iso]
    u, v = (vy, vx) if swap else (vx, vy)
    if negx:
        u = 1 - u
    if negy:
        v = 1 - v
    return (u, v)


def apply_to_cell(iso: SquareIsometry, col: int, row: int, k: int) -> tuple[int, int]:
    """Image of cell ``(col, row)`` of the k-by-k grid under ``iso``."""
    swap, negx, negy = _FLAGS[iso]
    u, v = (row, col) if swap else (col, row)
    if negx:
        u = k - 1 - u
    if negy:
        v = k - 1 - v
    return (u, v)


def apply_to_vector(iso: SquareIsometry, dx, dy):
    """Action of the linear part of ``iso`` on a displacement vector."""
    swap, negx, negy = _FLAGS[iso]
    u, v = (dy, dx) if swap else (dx, dy)
    if negx:
        u = -u
    if negy:
        v = -v
    return (u, v)


def _build_tables():
    perms = {}
    for iso in ISOMETRIES:
        perms[iso] = tuple(apply_to_vertex(iso, vx, vy) for vx, vy in VERTICES)
    by_perm = {perm: iso for iso, perm in perms.items()}
    compose = {}
    for a in ISOMETRIES:
        for b in ISOMETRIES:
            perm = tuple(apply_to_vertex(a, *v) for v in perms[b])
            compose[(a, b)] = by_perm[perm]
    identity_perm = perms[SquareIsometry.E]
    inverse = {}
    for a in ISOMETRIES:
        for b in ISOMETRIES:
            if compose[(a, b)] is SquareIsometry.E:
                inverse[a] = b
                break
    return compose, inverse


_COMPOSE, _INVERSE = _build_tables()


def compose(a: SquareIsometry, b: SquareIsometry) -> SquareIsometry:
    """The isometry acting as ``a`` after ``b`` (apply ``b`` first)."""
    return _COMPOSE[(a, b)]


def inverse(a: SquareIsometry) -> SquareIsometry:
    return _INVERSE[a]


def squared_distance(p: Point, q: Point) -> Fraction:
    """Exact squared Euclidean distance between two points."""
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy
