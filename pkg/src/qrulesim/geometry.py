"""Events, light cones, Lorentz boosts, and the non-penetration frontier.

Everything lives in 1+1 Minkowski space with c = 1, so every backward
light cone is a "tent" t = t_v - |x - x_v| whose surface has slope
exactly +1 or -1.  The Frontier is the pointwise maximum (upper
envelope) of the realized reduction cones; a later reduction is clipped
against it and may never dip below it.

All types are immutable values; every operation returns new objects.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ON_CONE_TOL = 1e-9
_SLOPE_TOL = 1e-12


class GeometryError(ValueError):
    """Base class for geometric failures."""


class NoIntersection(GeometryError):
    """A worldline does not cross the cone surface within its lifetime."""


class InvalidVelocity(GeometryError):
    """A boost or worldline velocity with magnitude >= 1."""


class CausalViolation(GeometryError):
    """A reduction vertex strictly below the established frontier."""


@dataclass(frozen=True)
class Event:
    """A point (x, t) in 1+1 Minkowski space, c = 1."""

    x: float
    t: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.t)):
            raise ValueError(f"event coordinates must be finite, got ({self.x}, {self.t})")

    def interval_to(self, other: Event) -> float:
        """Signed squared interval dt^2 - dx^2 (positive = timelike)."""
        return (other.t - self.t) ** 2 - (other.x - self.x) ** 2

    def relation_to(self, other: Event) -> str:
        """Causal classification: 'timelike', 'lightlike' or 'spacelike'."""
        s2 = self.interval_to(other)
        if s2 > 0.0:
            return "timelike"
        if s2 < 0.0:
            return "spacelike"
        return "lightlike"


@dataclass(frozen=True)
class Worldline:
    """A constant-velocity ray starting at ``origin``; |v| < 1 strictly.

    The line exists for origin.t <= t <= end_t (end_t = None means
    unbounded).  Straight single-segment lines only.
    """

    origin: Event
    velocity: float
    end_t: float | None = None

    def __post_init__(self) -> None:
        if not abs(self.velocity) < 1.0:
            raise InvalidVelocity(f"worldline velocity |v| must be < 1, got {self.velocity}")
        if self.end_t is not None and self.end_t < self.origin.t:
            raise ValueError("worldline end time precedes its origin")

    def position(self, t: float) -> float:
        """x-coordinate at time t (t need not lie within the lifetime)."""
        return self.origin.x + self.velocity * (t - self.origin.t)

    def covers(self, t: float) -> bool:
        if t < self.origin.t:
            return False
        return self.end_t is None or t <= self.end_t

    def event_at(self, t: float) -> Event:
        return Event(self.position(t), t)

    def terminated(self, end_t: float) -> Worldline:
        return Worldline(self.origin, self.velocity, end_t)


@dataclass(frozen=True)
class BackwardCone:
    """The backward light cone of a vertex: { (x, t) : t = t_v - |x - x_v| }."""

    vertex: Event

    def surface_time(self, x: float) -> float:
        return cone_time(self.vertex, x)


def cone_time(vertex: Event, x: float) -> float:
    """Time of the backward-cone surface of ``vertex`` above position x."""
    return vertex.t - abs(x - vertex.x)


def on_cone(vertex: Event, e: Event, tol: float = ON_CONE_TOL) -> bool:
    """True iff ``e`` lies on the backward-cone surface of ``vertex``."""
    return abs(e.t - cone_time(vertex, e.x)) <= tol


def boost(e: Event, v: float) -> Event:
    """Standard Lorentz boost: x' = g(x - vt), t' = g(t - vx), g = (1-v^2)^-1/2."""
    if not abs(v) < 1.0:
        raise InvalidVelocity(f"boost velocity |v| must be < 1, got {v}")
    g = 1.0 / math.sqrt(1.0 - v * v)
    return Event(g * (e.x - v * e.t), g * (e.t - v * e.x))


def boost_velocity(u: float, v: float) -> float:
    """Velocity of a u-moving line as seen from the v-boosted frame."""
    return (u - v) / (1.0 - u * v)


def cone_intersect_worldline(vertex: Event, w: Worldline) -> Event:
    """The unique event where ``w`` crosses the backward cone of ``vertex``.

    Because |v| < 1 the worldline's full extension crosses the tent
    surface exactly once; raises NoIntersection when that crossing falls
    outside the worldline's lifetime.
    """
    x0, t0, v = w.origin.x, w.origin.t, w.velocity
    # Right flank (x >= x_v): t = t_v - (x(t) - x_v); left flank mirrored.
    t_right = (vertex.t - x0 + v * t0 + vertex.x) / (1.0 + v)
    t_left = (vertex.t + x0 - v * t0 - vertex.x) / (1.0 - v)
    t_cross = None
    if w.position(t_right) >= vertex.x:
        t_cross = t_right
    if t_cross is None and w.position(t_left) <= vertex.x:
        t_cross = t_left
    if t_cross is None:
        # Both flanks claim the other side: the line passes through the
        # vertex up to rounding; the two roots coincide there.
        t_cross = 0.5 * (t_right + t_left)
    if not w.covers(t_cross):
        raise NoIntersection(
            f"cone of ({vertex.x}, {vertex.t}) crosses the worldline at t = {t_cross}, "
            f"outside its lifetime"
        )
    return Event(w.position(t_cross), t_cross)


@dataclass(frozen=True)
class ClippedCone:
    """The part of a freshly inserted cone lying strictly above the old frontier.

    ``left``/``right`` are the meeting points with the old frontier;
    None means the cone stays above it all the way to infinity on that
    side.  A degenerate clip (vertex exactly on the old frontier) has
    left == right == the vertex point.
    """

    vertex: Event
    left: tuple[float, float] | None
    right: tuple[float, float] | None

    @property
    def degenerate(self) -> bool:
        p = (self.vertex.x, self.vertex.t)
        return self.left == p and self.right == p

    @property
    def points(self) -> tuple[tuple[float, float], ...]:
        """Finite breakpoints of the clipped polyline, sorted by x."""
        if self.degenerate:
            return ((self.vertex.x, self.vertex.t),)
        pts: list[tuple[float, float]] = []
        if self.left is not None:
            pts.append(self.left)
        pts.append((self.vertex.x, self.vertex.t))
        if self.right is not None:
            pts.append(self.right)
        return tuple(pts)

    def x_span(self) -> tuple[float, float]:
        """Clip interval; infinite on open sides."""
        lo = self.left[0] if self.left is not None else -math.inf
        hi = self.right[0] if self.right is not None else math.inf
        return lo, hi

    def surface_time(self, x: float) -> float:
        return cone_time(self.vertex, x)


def _surviving(points: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    """Vertices whose cone is not covered by another vertex's cone.

    Left-to-right sweep with a stack of surviving peaks.  A peak is
    covered when it lies on or below another tent's flank; ties at
    floating-point resolution are broken deterministically (the sweep
    is a function of the sorted point set, so the envelope is
    independent of insertion order).  The valley between consecutive
    survivors is required to fall strictly between them in x, which
    guards against sub-ulp margins producing non-monotone breakpoints.
    """
    dedup: dict[float, float] = {}
    for x, t in points:
        prev = dedup.get(x)
        if prev is None or t > prev:
            dedup[x] = t
    stack: list[tuple[float, float]] = []
    for x, t in sorted(dedup.items()):
        covered = False
        while stack:
            xs, ts = stack[-1]
            if t + x <= ts + xs:  # new peak on/below the top's right flank
                covered = True
                break
            if ts - xs <= t - x:  # top peak on/below the new left flank
                stack.pop()
                continue
            xv = 0.5 * (ts + xs - t + x)
            if xv <= xs:
                stack.pop()
                continue
            if xv >= x:
                covered = True
                break
            break
        if not covered:
            stack.append((x, t))
    return stack


def _envelope_breakpoints(
    survivors: Sequence[tuple[float, float]],
) -> tuple[tuple[float, float], ...]:
    """Peaks plus the valley between each consecutive pair of peaks."""
    pts: list[tuple[float, float]] = []
    for i, (x, t) in enumerate(survivors):
        if i:
            xp, tp = survivors[i - 1]
            xv = 0.5 * (tp + xp - t + x)
            pts.append((xv, tp + xp - xv))
        pts.append((x, t))
    return tuple(pts)


@dataclass(frozen=True)
class Frontier:
    """Piecewise-linear upper envelope t = F(x) of realized reduction cones.

    ``breakpoints`` alternate peaks and valleys sorted by x, with
    implicit slope +1 / -1 rays beyond the first / last breakpoint.
    The empty frontier is F = -inf everywhere.  ``vertices`` records
    every inserted vertex in insertion order (the envelope itself only
    depends on the set).
    """

    breakpoints: tuple[tuple[float, float], ...] = ()
    vertices: tuple[Event, ...] = ()

    def __post_init__(self) -> None:
        bps = self.breakpoints
        for (xa, ta), (xb, tb) in zip(bps, bps[1:]):
            if not xb > xa:
                raise ValueError("frontier breakpoints must be strictly increasing in x")
            if abs(abs(tb - ta) - (xb - xa)) > _SLOPE_TOL * max(1.0, abs(xb - xa)):
                raise ValueError("frontier segment slope must be exactly +1 or -1")

    def value(self, x: float) -> float:
        """F(x); -inf for the empty frontier."""
        bps = self.breakpoints
        if not bps:
            return -math.inf
        if x <= bps[0][0]:
            return bps[0][1] - (bps[0][0] - x)
        if x >= bps[-1][0]:
            return bps[-1][1] - (x - bps[-1][0])
        i = bisect_left(bps, (x, -math.inf))
        xa, ta = bps[i - 1]
        xb, tb = bps[i]
        if x == xb:
            return tb
        slope = 1.0 if tb > ta else -1.0
        return ta + slope * (x - xa)

    def values(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized F over an array of positions."""
        xs = np.asarray(xs, dtype=float)
        if not self.breakpoints:
            return np.full(xs.shape, -math.inf)
        bx = np.array([p[0] for p in self.breakpoints])
        bt = np.array([p[1] for p in self.breakpoints])
        out = np.interp(xs, bx, bt)
        out = np.where(xs < bx[0], bt[0] - (bx[0] - xs), out)
        out = np.where(xs > bx[-1], bt[-1] - (xs - bx[-1]), out)
        return out

    @property
    def is_empty(self) -> bool:
        return not self.breakpoints


def frontier_insert(f: Frontier, vertex: Event) -> tuple[ClippedCone, Frontier]:
    """Clip a new reduction cone against ``f`` and merge it into the envelope.

    Returns the polyline of the new cone strictly above the old F
    (terminated where it meets F) plus the merged frontier.  Raises
    CausalViolation when the vertex is strictly below F.
    """
    floor = f.value(vertex.x)
    if vertex.t < floor:
        raise CausalViolation(
            f"reduction vertex ({vertex.x}, {vertex.t}) lies below the frontier "
            f"floor F({vertex.x}) = {floor}"
        )
    new_vertices = f.vertices + (vertex,)
    survivors = _surviving((e.x, e.t) for e in new_vertices)
    bps = _envelope_breakpoints(survivors)
    new_f = Frontier(bps, new_vertices)
    p = (vertex.x, vertex.t)
    if vertex.t == floor or p not in bps:
        # Touches the old envelope (exactly, or within the resolution of
        # the envelope arithmetic): nothing is strictly above it.
        return ClippedCone(vertex, p, p), new_f
    idx = bps.index(p)
    left = bps[idx - 1] if idx > 0 else None
    right = bps[idx + 1] if idx + 1 < len(bps) else None
    return ClippedCone(vertex, left, right), new_f
