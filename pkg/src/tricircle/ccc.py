"""Three-arc (circle-circle-circle) trajectories for fixed terminal radii.

For terminal circles C1 (through the start, signed radius r1) and C3
(through the goal, signed radius r3) the centre of every middle circle
tangent to both lies on a hyperbola with foci at the terminal centres.
The hyperbola is parameterised by ``k`` in [-pi/2, 3pi/2):

* right branch ``k in (-pi/2, pi/2)``, left branch ``k in (pi/2, 3pi/2)``
* ``k = +-pi/2`` are poles where the middle circle degenerates to a
  common tangent line (a CSC path), exposed through :func:`csc_limit`.

:class:`Family` evaluates the whole construction on arrays of ``k`` and is
what the solver and the oracle grid scans use; :func:`build_trajectory`
assembles a single trajectory out of :mod:`tricircle.geometry` arcs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dubins import common_tangent
from .errors import (
    DegenerateTangencyError,
    InvalidRadiusError,
    NoHyperbolaError,
    NonexistentLimitError,
    PoleError,
)
from .geometry import (
    GEOM_TOL,
    TAU,
    OrientedPoint,
    SignedCircle,
    arc_between,
    line_between,
    oriented_sweep,
    sign,
    terminal_circle,
)

HALF_PI = 0.5 * math.pi
K_MIN = -HALF_PI
K_MAX = 1.5 * math.pi
POLE_TOL = 1e-9
R2_CAP = 1e9
BRANCHES = ("right", "left")
DISCONTINUITY_GRID = 2048


@dataclass(frozen=True)
class Hyperbola:
    focus1: tuple
    focus2: tuple
    semi_major: float
    semi_minor: float
    focal: float
    axis_unit: tuple
    center: tuple

    @property
    def rotation(self):
        nx, ny = self.axis_unit
        return np.array([[nx, -ny], [ny, nx]])

    @property
    def degenerate_line(self):
        """Equal terminal radii collapse both branches onto the perpendicular bisector."""
        return self.semi_major == 0.0

    def to_local(self, p):
        nx, ny = self.axis_unit
        dx, dy = p[0] - self.center[0], p[1] - self.center[1]
        return (nx * dx + ny * dy, -ny * dx + nx * dy)


@dataclass(frozen=True)
class CccTrajectory:
    """Chain of arcs from the start pose to the goal pose.

    ``radii`` is ``(r1, r2, r3)``; ``r2`` is ``inf`` when the middle element
    is a straight line and ``None`` for a two-arc (circle-circle) path.
    """

    arcs: tuple
    changeovers: tuple
    radii: tuple
    k: float | None
    word: str
    length: float

    @property
    def kind(self):
        if len(self.arcs) == 2:
            return "cc"
        return "csc" if self.arcs[1].kind == "line" else "ccc"

    @property
    def r2(self):
        return self.radii[1]

    @property
    def params(self):
        return tuple(arc.length for arc in self.arcs)


class Discontinuity(NamedTuple):
    k: float
    magnitude: float
    site: str  # "start" (changeover 1 meets the start point) or "end"


class FamilyGrid(NamedTuple):
    k: np.ndarray
    r2: np.ndarray
    o2: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    eta: np.ndarray  # sweeps in radians
    mu: np.ndarray
    zeta: np.ndarray
    length: np.ndarray

    @property
    def start_gap(self):
        """First sweep wrapped to (-pi, pi]; crosses zero where c1 passes the start."""
        return np.where(self.eta > math.pi, self.eta - TAU, self.eta)

    @property
    def end_gap(self):
        return np.where(self.zeta > math.pi, self.zeta - TAU, self.zeta)


def normalize_k(k):
    """Map ``k`` into [-pi/2, 3pi/2)."""
    t = math.fmod(k - K_MIN, TAU)
    if t < 0:
        t += TAU
    t += K_MIN
    return K_MIN if t >= K_MAX else t


def branch_of(k):
    k = normalize_k(k)
    return "right" if k < HALF_PI else "left"


def branch_bounds(branch):
    if branch == "right":
        return (-HALF_PI, HALF_PI)
    if branch == "left":
        return (HALF_PI, K_MAX)
    raise ValueError(f"unknown branch {branch!r}")


def near_pole(k, tol=POLE_TOL):
    """Return the pole (pi/2 or -pi/2) within ``tol`` of ``k``, else None."""
    k = normalize_k(k)
    if abs(k - HALF_PI) < tol:
        return HALF_PI
    if abs(k - K_MIN) < tol or abs(k - K_MAX) < tol:
        return -HALF_PI
    return None


def middle_sign(r1, r3, right):
    """Sign ``v`` in ``r2 = v*s + r1`` (tabulated by terminal signs, sizes, branch).

    ``v = -sign(r1)`` means the middle circle is externally tangent to C1.
    """
    s1 = sign(r1)
    if r1 * r3 > 0:
        external = right == (abs(r1) >= abs(r3))
    else:
        external = right
    return -s1 if external else s1


def word_for(r1, r2, r3):
    letters = []
    for r in (r1, r2, r3):
        if r is None:
            continue
        if math.isinf(r):
            letters.append("S")
        else:
            letters.append("L" if r > 0 else "R")
    return "".join(letters)


def _check_radius(r, name):
    if r == 0.0 or not math.isfinite(r):
        raise InvalidRadiusError(f"{name} must be nonzero and finite, got {r}")


def build_hyperbola(a: OrientedPoint, b: OrientedPoint, r1: float, r3: float) -> Hyperbola:
    _check_radius(r1, "r1")
    _check_radius(r3, "r3")
    o1 = terminal_circle(a, r1).center
    o3 = terminal_circle(b, r3).center
    d = math.dist(o1, o3)
    gap = abs(r3 - r1)
    if d <= gap:
        raise NoHyperbolaError(d - gap)
    semi_major = 0.5 * gap
    focal = 0.5 * d
    semi_minor = math.sqrt((focal - semi_major) * (focal + semi_major))
    axis = ((o3[0] - o1[0]) / d, (o3[1] - o1[1]) / d)
    center = (0.5 * (o1[0] + o3[0]), 0.5 * (o1[1] + o3[1]))
    return Hyperbola(o1, o3, semi_major, semi_minor, focal, axis, center)


def middle_center(h: Hyperbola, k: float):
    if near_pole(k) is not None:
        raise PoleError(f"k={k} is at a pole; use csc_limit for the straight-line limit")
    k = normalize_k(k)
    x = h.semi_major / math.cos(k)
    y = h.semi_minor * math.tan(k)
    nx, ny = h.axis_unit
    return (nx * x - ny * y + h.center[0], ny * x + nx * y + h.center[1])


def middle_radius(h: Hyperbola, r1: float, r3: float, k: float) -> float:
    o2 = middle_center(h, k)
    s = math.dist(o2, h.focus1)
    return middle_sign(r1, r3, branch_of(k) == "right") * s + r1


def changeover_points(o1, r1, o2, r2, o3, r3):
    """Tangency points of C1/C2 and C2/C3.

    Evaluates ``c1 = (r2*o1 - r1*o2) / (r2 - r1)`` in the equivalent form
    ``o1 - r1*(o2 - o1)/(r2 - r1)``, which stays accurate when ``r2`` is huge.
    """
    scale = max(1.0, abs(r1), abs(r2), abs(r3))
    if abs(r2 - r1) <= GEOM_TOL * scale or abs(r2 - r3) <= GEOM_TOL * scale:
        raise DegenerateTangencyError(f"r2={r2} coincides with a terminal radius")
    f1 = r1 / (r2 - r1)
    f3 = r3 / (r2 - r3)
    c1 = (o1[0] - f1 * (o2[0] - o1[0]), o1[1] - f1 * (o2[1] - o1[1]))
    c2 = (o3[0] - f3 * (o2[0] - o3[0]), o3[1] - f3 * (o2[1] - o3[1]))
    return c1, c2


def _limit_touch_point(h: Hyperbola, r1, r3, pole):
    """Where the pole's limiting line touches C1."""
    x, y = h.semi_major / h.focal, (1.0 if pole > 0 else -1.0) * h.semi_minor / h.focal
    nx, ny = h.axis_unit
    wx, wy = nx * x - ny * y, ny * x + nx * y
    v = middle_sign(r1, r3, True)
    o1 = h.focus1
    return (o1[0] - r1 * v * wx, o1[1] - r1 * v * wy)


def finite_pole(a, b, r1, r3, h=None):
    """The pole at which the family's length stays finite, or None."""
    h = h or build_hyperbola(a, b, r1, r3)
    tangent = common_tangent(terminal_circle(a, r1), terminal_circle(b, r3))
    if tangent is None:
        return None
    p1 = tangent[0]
    dists = {pole: math.dist(p1, _limit_touch_point(h, r1, r3, pole)) for pole in (HALF_PI, -HALF_PI)}
    return min(dists, key=dists.get)


def csc_limit(a: OrientedPoint, b: OrientedPoint, r1: float, r3: float, pole: float) -> CccTrajectory:
    """Straight-middle limit of the family as ``k`` approaches ``pole``."""
    pole = HALF_PI if pole > 0 else -HALF_PI
    h = build_hyperbola(a, b, r1, r3)
    if finite_pole(a, b, r1, r3, h) != pole:
        raise NonexistentLimitError(f"no direction-consistent tangent line at k={pole:+.4f}")
    c1c = terminal_circle(a, r1)
    c3c = terminal_circle(b, r3)
    p1, p3, heading = common_tangent(c1c, c3c)
    arcs = (
        arc_between(c1c, a.position, p1),
        line_between(p1, p3, heading),
        arc_between(c3c, p3, b.position),
    )
    return CccTrajectory(
        arcs, (arcs[0].end, arcs[2].start), (r1, math.inf, r3), pole,
        word_for(r1, math.inf, r3), sum(arc.length for arc in arcs),
    )


def build_trajectory(a: OrientedPoint, b: OrientedPoint, r1: float, r3: float, k: float) -> CccTrajectory:
    pole = near_pole(k)
    if pole is not None:
        return csc_limit(a, b, r1, r3, pole)
    h = build_hyperbola(a, b, r1, r3)
    k = normalize_k(k)
    o2 = middle_center(h, k)
    r2 = middle_radius(h, r1, r3, k)
    if abs(r2) > R2_CAP * max(abs(r1), abs(r3)):
        return csc_limit(a, b, r1, r3, HALF_PI if abs(k - HALF_PI) < HALF_PI else -HALF_PI)
    c1, c2 = changeover_points(h.focus1, r1, o2, r2, h.focus2, r3)
    circles = (SignedCircle(h.focus1, r1), SignedCircle(o2, r2), SignedCircle(h.focus2, r3))
    arcs = (
        arc_between(circles[0], a.position, c1),
        arc_between(circles[1], c1, c2),
        arc_between(circles[2], c2, b.position),
    )
    return CccTrajectory(arcs, (c1, c2), (r1, r2, r3), k, word_for(r1, r2, r3),
                         sum(arc.length for arc in arcs))


def length_fn(a: OrientedPoint, b: OrientedPoint, r1: float, r3: float, k: float) -> float:
    return build_trajectory(a, b, r1, r3, k).length


def branch_grid(branch, n):
    """``n`` uniform interior parameters plus points clustered towards both poles."""
    lo, hi = branch_bounds(branch)
    step = (hi - lo) / n
    ks = lo + (np.arange(n) + 0.5) * step
    offsets = 10.0 ** -np.arange(3, 9)
    offsets = offsets[offsets < 0.5 * step]
    return np.unique(np.concatenate([ks, lo + offsets, hi - offsets]))


def bisect_roots(f, lo, hi, xtol=1e-12, max_iter=200):
    """Vectorised bisection of ``f`` over the brackets ``[lo[i], hi[i]]``.

    ``f`` maps an array of parameters to an array of values; each bracket
    must straddle a sign change (``f >= 0`` counts as positive); ``lo > hi``
    is allowed.  Stops once every bracket is narrower than ``xtol``.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    if lo.size == 0:
        return lo
    pos_lo = f(lo) >= 0
    for _ in range(max_iter):
        if np.all(np.abs(hi - lo) <= xtol):
            break
        mid = 0.5 * (lo + hi)
        pos_mid = f(mid) >= 0
        same = pos_mid == pos_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _sign_change_brackets(ks, values, max_abs=None):
    pos = values >= 0
    idx = np.nonzero(pos[1:] != pos[:-1])[0]
    if max_abs is not None:
        idx = idx[(np.abs(values[idx]) < max_abs) & (np.abs(values[idx + 1]) < max_abs)]
    return ks[idx], ks[idx + 1]


class Family:
    """All trajectories sharing the terminal radii ``(r1, r3)``."""

    def __init__(self, a: OrientedPoint, b: OrientedPoint, r1: float, r3: float):
        self.a = a
        self.b = b
        self.r1 = float(r1)
        self.r3 = float(r3)
        self.hyperbola = build_hyperbola(a, b, r1, r3)
        self._finite_pole = finite_pole(a, b, r1, r3, self.hyperbola)

    def __repr__(self):
        return f"Family(r1={self.r1:g}, r3={self.r3:g})"

    @property
    def signs(self):
        return (sign(self.r1), sign(self.r3))

    @property
    def finite_pole(self):
        return self._finite_pole

    def evaluate(self, ks) -> FamilyGrid:
        # Degenerate points (poles, r2 == r1 or r3) come out as inf/nan.
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self._evaluate(ks)

    def _evaluate(self, ks) -> FamilyGrid:
        ks = np.atleast_1d(np.asarray(ks, dtype=float))
        h = self.hyperbola
        r1, r3 = self.r1, self.r3
        # Shift into [-pi/2, 3pi/2) to pick the branch.
        kk = np.mod(ks - K_MIN, TAU) + K_MIN
        right = kk < HALF_PI
        x = h.semi_major / np.cos(kk)
        y = h.semi_minor * np.tan(kk)
        nx, ny = h.axis_unit
        o2 = np.stack([nx * x - ny * y + h.center[0], ny * x + nx * y + h.center[1]], axis=-1)
        o1 = np.asarray(h.focus1)
        o3 = np.asarray(h.focus2)
        s = np.hypot(o2[:, 0] - o1[0], o2[:, 1] - o1[1])
        v = np.where(right, middle_sign(r1, r3, True), middle_sign(r1, r3, False))
        r2 = v * s + r1
        f1 = (r1 / (r2 - r1))[:, None]
        f3 = (r3 / (r2 - r3))[:, None]
        c1 = o1 - f1 * (o2 - o1)
        c2 = o3 - f3 * (o2 - o3)
        a = np.asarray(self.a.position)
        b = np.asarray(self.b.position)
        eta = oriented_sweep(o1, r1, a, c1)
        mu = oriented_sweep(o2, r2, c1, c2)
        zeta = oriented_sweep(o3, r3, c2, b)
        length = abs(r1) * eta + np.abs(r2) * mu + abs(r3) * zeta
        return FamilyGrid(kk, r2, o2, c1, c2, eta, mu, zeta, length)

    def length(self, ks):
        return self.evaluate(ks).length

    def trajectory(self, k) -> CccTrajectory:
        return build_trajectory(self.a, self.b, self.r1, self.r3, k)

    def csc(self) -> CccTrajectory | None:
        if self._finite_pole is None:
            return None
        return csc_limit(self.a, self.b, self.r1, self.r3, self._finite_pole)

    def discontinuities(self, branch=None, grid_n=DISCONTINUITY_GRID):
        """Jump parameters on ``branch`` (both branches when None), sorted by ``k``.

        A jump sits where the first (last) sweep, wrapped to (-pi, pi],
        changes sign: the changeover point passes the start (goal).
        """
        branches = BRANCHES if branch is None else (branch,)
        parts = [branch_grid(br, grid_n) for br in branches]
        ks = np.concatenate(parts)
        grid = self.evaluate(ks)
        los, his, starts = [], [], []
        for site, gap in (("start", grid.start_gap), ("end", grid.end_gap)):
            pos = gap >= 0
            idx = np.nonzero(pos[1:] != pos[:-1])[0]
            idx = idx[(np.abs(gap[idx]) < HALF_PI) & (np.abs(gap[idx + 1]) < HALF_PI)]
            idx = idx[idx != len(parts[0]) - 1]  # never bracket across a pole
            los.append(ks[idx])
            his.append(ks[idx + 1])
            starts.append(np.full(idx.size, site == "start"))
        is_start = np.concatenate(starts)

        def gaps(kk):
            g = self.evaluate(kk)
            return np.where(is_start, g.start_gap, g.end_gap)

        roots = bisect_roots(gaps, np.concatenate(los), np.concatenate(his))
        out = [Discontinuity(float(k), TAU * abs(self.r1 if st else self.r3), "start" if st else "end")
               for k, st in zip(roots, is_start)]
        out.sort(key=lambda d: d.k)
        return out

    def parameter_of(self, o2, r2, tol=1e-7):
        """Parameter ``k`` placing the middle centre at ``o2`` with radius ``r2``, or None."""
        h = self.hyperbola
        x, y = h.to_local(o2)
        scale = max(1.0, abs(r2))
        candidates = []
        t = y / h.semi_minor
        if h.semi_major > 0.0:
            sec = x / h.semi_major
            if sec != 0.0:
                candidates.append(math.atan2(t / sec, 1.0 / sec))
        else:
            base = math.atan(t)
            candidates.extend([base, base + math.pi])
        for k in candidates:
            k = normalize_k(k)
            if near_pole(k) is not None:
                continue
            grid = self.evaluate([k])
            if (abs(grid.r2[0] - r2) <= tol * scale
                    and math.dist(grid.o2[0], o2) <= tol * scale):
                return k
        return None


def discontinuities(a: OrientedPoint, b: OrientedPoint, r1: float, r3: float, branch: str,
                    grid_n=DISCONTINUITY_GRID):
    """Jump parameters ``k_a`` (site ``start``) and ``k_b`` (site ``end``) on one branch."""
    return Family(a, b, r1, r3).discontinuities(branch, grid_n)
