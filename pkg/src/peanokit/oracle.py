"""Independent brute-force lower bound for the square-to-linear ratio.

Samples the structured points where extremes of self-similar curves live
(vertex passage moments of every fraction up to a depth; period endpoints
are the first and last of these) and maximizes the exact ratio over all
pairs.  This path shares no bounding logic with the branch-and-bound
module, so the two can cross-check each other.

For large sample sets a float64 prescreen narrows the field before exact
rational confirmation.  All quantities fed to the prescreen are integers
below 2**53, so each float ratio is off by at most a few ulp; the margin
used to collect candidates is wider by nine orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curve import (
    FractalCurve,
    Frame,
    ROOT_FRAME,
    frame_corner_samples,
    frame_struct_child,
)
from .errors import ResourceCapError

DEFAULT_MAX_POINTS = 20_000
_EXACT_ONLY_BELOW = 64
_ONESHOT_LIMIT = 1500
_PRESCREEN_MARGIN = 1e-6
_FLOAT_SAFE_LIMIT = 1 << 52


@dataclass(frozen=True)
class OracleResult:
    depth: int
    lower_bound: Fraction
    witness: tuple[Fraction, Fraction]


def sample_times(curve: FractalCurve, depth: int) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Deduplicated (time, x, y) samples: all vertex passage moments of
    every fraction of order <= depth, with exact positions."""
    (q, gn, kn), pts = _integer_samples(curve, depth)
    samples: dict[Fraction, tuple[Fraction, Fraction]] = {}
    for tn, x, y in pts:
        t = Fraction(tn, q * gn)
        samples.setdefault(t, (Fraction(x, kn), Fraction(y, kn)))
    return [(t, p[0], p[1]) for t, p in sorted(samples.items())]


def _integer_samples(curve: FractalCurve, depth: int):
    """All samples in integer units: times over q*g**depth, coords over
    k**depth."""
    q, _, _ = curve.corner_time_table
    g = curve.genus
    gn = g**depth
    kn = curve.k**depth
    pts: list[tuple[int, int, int]] = []
    frames: list[tuple[Frame, int]] = [(ROOT_FRAME, 0)]
    for level in range(depth + 1):
        scale_t = g ** (depth - level)
        scale_x = curve.k ** (depth - level)
        for frame, m in frames:
            for t, x, y in frame_corner_samples(curve, frame, m):
                pts.append((t * scale_t, x * scale_x, y * scale_x))
        if level < depth:
            nxt = []
            for frame, m in frames:
                for d in range(g):
                    j = d if not frame.rev else g - 1 - d
                    nxt.append((frame_struct_child(curve, frame, j), m * g + d))
            frames = nxt
    return (q, gn, kn), pts


def brute_force_lower_bound(
    curve: FractalCurve,
    depth: int,
    max_points: int = DEFAULT_MAX_POINTS,
) -> OracleResult:
    """Exact max ratio over all sample pairs at the given depth.

    Monotone nondecreasing in depth (deeper sample sets are supersets).
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    (q, gn, kn), raw = _integer_samples(curve, depth)
    dedup: dict[int, tuple[int, int]] = {}
    for tn, x, y in raw:
        dedup.setdefault(tn, (x, y))
    if len(dedup) > max_points:
        raise ResourceCapError(
            f"oracle sample of {len(dedup)} points exceeds cap {max_points}"
        )
    times = sorted(dedup)
    xs = [dedup[t][0] for t in times]
    ys = [dedup[t][1] for t in times]
    denom = q * gn

    if len(times) < _EXACT_ONLY_BELOW or max(2 * kn * kn * q, denom) > _FLOAT_SAFE_LIMIT:
        best_n, best_d, wi, wj = _exact_scan(times, xs, ys, q)
    else:
        best_n, best_d, wi, wj = _prescreened_scan(times, xs, ys, q)
    lower = Fraction(best_n, best_d)
    witness = (Fraction(times[wi], denom), Fraction(times[wj], denom))
    return OracleResult(depth, lower, witness)


def _exact_scan(times, xs, ys, q):
    best_n, best_d = 0, 1
    wi = wj = 0
    n = len(times)
    for i in range(n):
        ti, xi, yi = times[i], xs[i], ys[i]
        for j in range(i + 1, n):
            dx = xi - xs[j]
            dy = yi - ys[j]
            num = (dx * dx + dy * dy) * q
            den = times[j] - ti
            if num * best_d > best_n * den:
                best_n, best_d, wi, wj = num, den, i, j
    return best_n, best_d, wi, wj


def _prescreened_scan(times, xs, ys, q):
    import numpy as np

    t_arr = np.asarray(times, dtype=np.int64)
    x_arr = np.asarray(xs, dtype=np.int64)
    y_arr = np.asarray(ys, dtype=np.int64)
    n = len(times)
    if n <= _ONESHOT_LIMIT:
        dx = x_arr[:, None] - x_arr[None, :]
        dy = y_arr[:, None] - y_arr[None, :]
        num = (dx * dx + dy * dy) * q
        den = t_arr[None, :] - t_arr[:, None]
        ratio = np.zeros(num.shape, dtype=np.float64)
        valid = den > 0
        ratio[valid] = num[valid] / den[valid]
        best_f = float(ratio.max())
        cutoff = best_f * (1.0 - _PRESCREEN_MARGIN)
        best_n, best_d = 0, 1
        wi = wj = 0
        for i, j in sorted(map(tuple, np.argwhere(ratio >= cutoff))):
            pn = int(num[i, j])
            pd = int(den[i, j])
            if pn * best_d > best_n * pd:
                best_n, best_d, wi, wj = pn, pd, int(i), int(j)
        return best_n, best_d, wi, wj
    best_f = 0.0
    for i in range(n - 1):
        dx = x_arr[i + 1 :] - x_arr[i]
        dy = y_arr[i + 1 :] - y_arr[i]
        num = (dx * dx + dy * dy) * q
        den = t_arr[i + 1 :] - t_arr[i]
        m = float(np.max(num / den))
        if m > best_f:
            best_f = m
    cutoff = best_f * (1.0 - _PRESCREEN_MARGIN)
    best_n, best_d = 0, 1
    wi = wj = 0
    for i in range(n - 1):
        dx = x_arr[i + 1 :] - x_arr[i]
        dy = y_arr[i + 1 :] - y_arr[i]
        num = (dx * dx + dy * dy) * q
        den = t_arr[i + 1 :] - t_arr[i]
        idx = np.nonzero(num / den >= cutoff)[0]
        for off in idx:
            j = i + 1 + int(off)
            pn = int(num[off])
            pd = int(den[off])
            if pn * best_d > best_n * pd:
                best_n, best_d, wi, wj = pn, pd, i, j
    return best_n, best_d, wi, wj
