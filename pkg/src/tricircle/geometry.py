"""Planar primitives: oriented points, signed circles, arcs and sampling.

Signed radius convention: ``radius > 0`` is a counter-clockwise (left)
turn, ``radius < 0`` a clockwise (right) turn.  All values are immutable.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, InvalidRadiusError

TAU = 2.0 * math.pi
GEOM_TOL = 1e-9
# Endpoints closer than this (scaled by max(1, |r|)) give a zero sweep.
ZERO_SWEEP_TOL = 1e-12
_BELOW_TAU = math.nextafter(TAU, 0.0)


def normalize_angle(theta):
    """Wrap into [0, 2*pi)."""
    t = math.fmod(theta, TAU)
    if t < 0.0:
        t += TAU
    return 0.0 if t >= TAU else t


def wrap_to_pi(theta):
    """Wrap into (-pi, pi]."""
    t = math.remainder(theta, TAU)
    return math.pi if t == -math.pi else t


def angle_diff(a, b):
    """Smallest absolute difference between two headings."""
    return abs(wrap_to_pi(a - b))


def sign(x):
    return 1.0 if x >= 0 else -1.0


@dataclass(frozen=True)
class OrientedPoint:
    x: float
    y: float
    heading: float

    def __post_init__(self):
        for name in ("x", "y", "heading"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"OrientedPoint.{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "heading", normalize_angle(self.heading))

    @property
    def position(self):
        return (self.x, self.y)

    @property
    def direction(self):
        return (math.cos(self.heading), math.sin(self.heading))

    @classmethod
    def from_degrees(cls, x, y, heading_deg):
        return cls(x, y, math.radians(heading_deg))


@dataclass(frozen=True)
class SignedCircle:
    center: tuple
    radius: float

    def __post_init__(self):
        r = float(self.radius)
        if r == 0.0 or not math.isfinite(r):
            raise InvalidRadiusError(f"circle radius must be nonzero and finite, got {r}")
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @property
    def turn(self):
        return "L" if self.radius > 0 else "R"

    @property
    def curvature(self):
        return 1.0 / self.radius

    def contains(self, p, tol=GEOM_TOL):
        d = math.dist(self.center, p)
        return abs(d - abs(self.radius)) <= tol * max(1.0, abs(self.radius))

    def heading_at(self, p):
        """Heading of motion through ``p`` in the circle's orientation."""
        dx, dy = p[0] - self.center[0], p[1] - self.center[1]
        if self.radius > 0:
            return normalize_angle(math.atan2(dx, -dy))
        return normalize_angle(math.atan2(-dx, dy))


class TangencyKind(enum.Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"
    NONE = "none"


@dataclass(frozen=True)
class Arc:
    """Circular arc (``kind='circular'``) or straight segment (``kind='line'``).

    ``sweep`` is measured in the circle's own orientation and always lies in
    [0, 2*pi).  Lines carry their travel heading in ``direction``.
    """

    kind: str
    start: tuple
    end: tuple
    length: float
    sweep: float = 0.0
    circle: SignedCircle | None = None
    direction: float = 0.0

    @property
    def start_heading(self):
        if self.kind == "line":
            return self.direction
        return self.circle.heading_at(self.start)

    @property
    def end_heading(self):
        if self.kind == "line":
            return self.direction
        return normalize_angle(self.start_heading + math.copysign(self.sweep, self.circle.radius))

    @property
    def letter(self):
        return "S" if self.kind == "line" else self.circle.turn


def terminal_circle(p: OrientedPoint, r: float) -> SignedCircle:
    """Circle of signed radius ``r`` through ``p`` whose tangent there is p's heading."""
    if r == 0.0 or not math.isfinite(r):
        raise InvalidRadiusError(f"terminal circle radius must be nonzero and finite, got {r}")
    return SignedCircle((p.x - r * math.sin(p.heading), p.y + r * math.cos(p.heading)), r)


def tangency(ca: SignedCircle, cb: SignedCircle, tol: float = GEOM_TOL) -> TangencyKind:
    d = math.dist(ca.center, cb.center)
    scale = max(1.0, abs(ca.radius), abs(cb.radius))
    if abs(d - abs(ca.radius - cb.radius)) > tol * scale:
        return TangencyKind.NONE
    if ca.radius * cb.radius > 0:
        return TangencyKind.INTERNAL
    return TangencyKind.EXTERNAL


def oriented_sweep(center, radius, p, q):
    """Vectorised sweep from ``p`` to ``q`` around ``center`` in the sign of ``radius``.

    Arguments broadcast as arrays of shape (..., 2) for points and (...) for
    radii.  The angle is taken from ``atan2(cross(p-o, q-p), dot(p-o, q-o))``
    so that it stays accurate for nearly flat arcs of huge radius.
    """
    center = np.asarray(center, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    radius = np.asarray(radius, dtype=float)
    u = p - center
    v = q - center
    w = q - p
    cross = u[..., 0] * w[..., 1] - u[..., 1] * w[..., 0]
    dot = u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]
    theta = np.arctan2(cross, dot)
    sweep = np.mod(np.where(radius > 0, theta, -theta), TAU)
    sweep = np.where(sweep >= TAU, _BELOW_TAU, sweep)
    chord = np.hypot(w[..., 0], w[..., 1])
    return np.where(chord <= ZERO_SWEEP_TOL * np.maximum(1.0, np.abs(radius)), 0.0, sweep)


def _sweep(center, radius, p, q):
    """Scalar twin of :func:`oriented_sweep` (same formula, no numpy overhead)."""
    ux, uy = p[0] - center[0], p[1] - center[1]
    wx, wy = q[0] - p[0], q[1] - p[1]
    if math.hypot(wx, wy) <= ZERO_SWEEP_TOL * max(1.0, abs(radius)):
        return 0.0
    theta = math.atan2(ux * wy - uy * wx, ux * (q[0] - center[0]) + uy * (q[1] - center[1]))
    sweep = (theta if radius > 0 else -theta) % TAU
    return _BELOW_TAU if sweep >= TAU else sweep


def arc_between(c: SignedCircle, start, end, tol: float = GEOM_TOL) -> Arc:
    for p in (start, end):
        if not c.contains(p, tol):
            off = abs(math.dist(c.center, p) - abs(c.radius))
            raise GeometryError(f"point {p} is {off:.3g} off the circle {c}")
    sweep = _sweep(c.center, c.radius, start, end)
    start = (float(start[0]), float(start[1]))
    end = (float(end[0]), float(end[1]))
    return Arc("circular", start, end, abs(c.radius) * sweep, sweep, c)


def line_between(start, end, direction=None) -> Arc:
    start = (float(start[0]), float(start[1]))
    end = (float(end[0]), float(end[1]))
    length = math.dist(start, end)
    if direction is None:
        direction = math.atan2(end[1] - start[1], end[0] - start[0]) if length > 0 else 0.0
    return Arc("line", start, end, length, direction=normalize_angle(direction))


def sample_array(arc: Arc, n: int) -> np.ndarray:
    """``n`` poses evenly spaced by arc length, as rows ``[x, y, heading]``."""
    if n < 2:
        raise ValueError("need at least two samples")
    s = np.linspace(0.0, arc.length, n)
    out = np.empty((n, 3))
    if arc.kind == "line":
        h = arc.direction
        out[:, 0] = arc.start[0] + s * math.cos(h)
        out[:, 1] = arc.start[1] + s * math.sin(h)
        out[:, 2] = h
        return out
    c = arc.circle
    r = abs(c.radius)
    phi = sign(c.radius) * s / r
    # Rotate start about the centre as start + (R(phi) - I) u; stays exact
    # for huge radii where the centre is far away.
    ux, uy = arc.start[0] - c.center[0], arc.start[1] - c.center[1]
    vers = -2.0 * np.sin(0.5 * phi) ** 2
    sin = np.sin(phi)
    out[:, 0] = arc.start[0] + vers * ux - sin * uy
    out[:, 1] = arc.start[1] + vers * uy + sin * ux
    out[:, 2] = np.mod(c.heading_at(arc.start) + phi, TAU)
    return out


def sample(arc: Arc, n: int):
    """List of ``((x, y), heading)`` poses along ``arc``."""
    return [((float(x), float(y)), float(h)) for x, y, h in sample_array(arc, n)]
