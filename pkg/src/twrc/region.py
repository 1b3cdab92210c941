"""Rate-region geometry: ray sweeps, convex-hull closure, and region comparisons.

A region is swept by evaluating a per-ray function on a grid of ray angles
measured from the Rb axis (theta = atan2(Ra, Rb)), closing the result into
the convex hull with the origin, and comparing regions by radial support
values along shared rays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import ChannelGains, ValidationError

_EPS = 1e-12


class SweepError(RuntimeError):
    """A per-ray evaluator failed during a sweep."""


class GainsMismatchError(ValueError):
    """Two regions over different channel gains were compared."""


@dataclass(frozen=True)
class Region:
    """A swept region boundary plus its convex closure.

    ``points`` are the per-ray boundary points in order of strictly
    increasing ray angle ``thetas_deg`` (0 = Rb axis, 90 = Ra axis);
    ``hull`` is the closed region's vertex loop in counter-clockwise order,
    always containing the origin.
    """

    points: tuple
    thetas_deg: tuple[float, ...]
    label: str
    gains: ChannelGains
    grid: int
    hull: tuple[tuple[float, float], ...]


def ray_grid(theta_points: int) -> list[tuple[float, float]]:
    """The sweep grid as (theta_deg, k) pairs, including both axis endpoints.

    ``theta_points`` interior angles span [0.5, 89.5] degrees uniformly;
    k = tan(theta), with the endpoints handled as k = 0 and k = inf.
    """
    if theta_points < 3:
        raise ValidationError(f"theta_points must be >= 3, got {theta_points}")
    lo, hi = 0.5, 89.5
    step = (hi - lo) / (theta_points - 1)
    rays = [(0.0, 0.0)]
    for i in range(theta_points):
        theta = lo + i * step
        if abs(theta - 45.0) < 1e-9:
            rays.append((45.0, 1.0))  # keep the symmetric ray exact
        else:
            rays.append((theta, math.tan(math.radians(theta))))
    rays.append((90.0, math.inf))
    return rays


def sweep_region(evaluator: Callable[[float], object], gains: ChannelGains,
                 theta_points: int = 181, label: str = "") -> Region:
    """Sweep a per-ray evaluator over the grid and close the region.

    ``evaluator(k)`` must return an object with ``ra`` and ``rb`` attributes
    (boundary point on the ray Ra = k*Rb; ``k = math.inf`` asks for the Ra
    axis).  Evaluator failures abort the sweep with the failing angle.
    """
    points = []
    thetas = []
    for theta, k in ray_grid(theta_points):
        try:
            p = evaluator(k)
        except Exception as exc:
            raise SweepError(f"evaluator failed at theta = {theta} deg (k = {k})") from exc
        points.append(p)
        thetas.append(theta)
    hull = convex_hull([(0.0, 0.0)] + [(p.ra, p.rb) for p in points])
    return Region(tuple(points), tuple(thetas), label, gains, theta_points, tuple(hull))


def convex_hull(points: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Convex hull (monotone chain), counter-clockwise, no collinear vertices."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= _EPS:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= _EPS:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def support_along_ray(hull: Sequence[tuple[float, float]], theta_deg: float) -> float:
    """Radial extent of a convex region (containing the origin) along a ray.

    The ray leaves the origin at ``theta_deg`` from the Rb axis; returns the
    distance to the boundary (0 for an empty/degenerate region off the ray).
    """
    t = math.radians(theta_deg)
    d = (math.sin(t), math.cos(t))
    best = 0.0
    n = len(hull)
    for idx in range(n):
        px, py = hull[idx]
        # vertex exactly on the ray (also covers degenerate segment hulls)
        proj = px * d[0] + py * d[1]
        off = px * d[1] - py * d[0]
        if proj > 0.0 and abs(off) <= 1e-9 * max(1.0, proj):
            best = max(best, math.hypot(px, py))
        if n < 2:
            continue
        qx, qy = hull[(idx + 1) % n]
        ex, ey = qx - px, qy - py
        denom = d[0] * ey - d[1] * ex
        if abs(denom) < _EPS:
            continue
        s = (px * ey - py * ex) / denom      # ray parameter at the crossing
        u = (px * d[1] - py * d[0]) / denom  # position along the edge
        if s > 0.0 and -1e-9 <= u <= 1.0 + 1e-9:
            best = max(best, s)
    return best


def symmetric_rate(region: Region) -> float:
    """The rate R of the boundary point with Ra = Rb = R.

    Exact when the symmetric ray is on the sweep grid; otherwise linear
    interpolation between the two bracketing swept points.
    """
    pts = region.points
    if not pts:
        return 0.0
    prev = None
    for p in pts:
        if abs(p.ra - p.rb) <= 1e-12 * max(1.0, p.ra, p.rb):
            if p.ra > 0.0 or p.rb > 0.0:
                return float(p.rb)
            prev = p
            continue
        if p.ra > p.rb:
            if prev is None:
                return 0.0
            d1 = prev.rb - prev.ra
            d2 = p.rb - p.ra
            if d1 == d2:
                return float(prev.rb)
            t = d1 / (d1 - d2)
            return float(prev.ra + t * (p.ra - prev.ra))
        prev = p
    return 0.0


def contains(outer_r: Region, inner_r: Region, tol: float) -> bool:
    """True iff every swept point of ``inner_r`` is inside ``outer_r``'s hull,
    measured radially along the point's own ray."""
    _check_same_gains(outer_r, inner_r)
    for p in inner_r.points:
        radius = math.hypot(p.ra, p.rb)
        if radius <= tol:
            continue
        theta = math.degrees(math.atan2(p.ra, p.rb))
        slack = tol + 1e-12 * max(1.0, radius)  # floating cushion keeps tol=0 reflexive
        if radius > support_along_ray(outer_r.hull, theta) + slack:
            return False
    return True


def max_radial_gap(a: Region, b: Region) -> tuple[float, float]:
    """Largest support difference of ``a`` minus ``b`` over the shared ray grid.

    Returns (gap, theta_deg_at_max); the gap is negative wherever ``b``
    extends beyond ``a`` everywhere on the grid.
    """
    _check_same_gains(a, b)
    common = sorted(set(a.thetas_deg) & set(b.thetas_deg))
    if not common:
        raise GainsMismatchError("regions share no sweep angles")
    best_gap = -math.inf
    best_theta = common[0]
    for theta in common:
        gap = support_along_ray(a.hull, theta) - support_along_ray(b.hull, theta)
        if gap > best_gap:
            best_gap, best_theta = gap, theta
    return (best_gap, best_theta)


def hausdorff_distance(a: Region, b: Region) -> float:
    """Hausdorff distance between the two closed (convex) regions."""
    _check_same_gains(a, b)
    d_ab = max(_point_to_hull_distance(v, b.hull) for v in a.hull)
    d_ba = max(_point_to_hull_distance(v, a.hull) for v in b.hull)
    return max(d_ab, d_ba)


def _point_to_hull_distance(p: tuple[float, float], hull) -> float:
    if not hull:
        return math.hypot(*p)
    if len(hull) == 1:
        return math.hypot(p[0] - hull[0][0], p[1] - hull[0][1])
    inside = True
    dist = math.inf
    n = len(hull)
    for idx in range(n):
        a = hull[idx]
        b = hull[(idx + 1) % n]
        if n == 2 and idx == 1:
            break
        crossv = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        if crossv < -_EPS:
            inside = False
        dist = min(dist, _point_to_segment(p, a, b))
    return 0.0 if inside and n > 2 else dist


def _point_to_segment(p, a, b) -> float:
    ax, ay = a
    ex, ey = b[0] - ax, b[1] - ay
    L2 = ex * ex + ey * ey
    if L2 <= _EPS:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * ex + (p[1] - ay) * ey) / L2
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - (ax + t * ex), p[1] - (ay + t * ey))


def _check_same_gains(a: Region, b: Region) -> None:
    if a.gains.as_tuple() != b.gains.as_tuple():
        raise GainsMismatchError(
            f"regions computed for different gains: {a.gains.as_tuple()} "
            f"vs {b.gains.as_tuple()}"
        )
