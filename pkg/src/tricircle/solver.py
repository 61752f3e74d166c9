"""Reachable lengths and the fixed-length planner.

Planning starts from the shortest path and walks the parameter ``k`` of the
three-arc family it belongs to.  The walk crosses the finite pole (the
straight-middle limit) freely, stops where the middle radius would violate
the curvature bound, and at a jump where the first (last) arc has shrunk to
nothing it switches the sign of ``r1`` (``r3``): the configuration there is
shared by both families, so the length stays continuous.  Every segment of
the walk is continuous in ``k``, so ``l(k) = l_o`` is solved by bracketing on
samples and bisecting.  If the walk does not meet ``l_o`` the planner falls
back to a scan of every continuous segment of all four sign families.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import ccc
from .ccc import (
    HALF_PI,
    CccTrajectory,
    Family,
    bisect_roots,
    branch_grid,
    build_trajectory,
    normalize_k,
    word_for,
)
from .dubins import all_word_solutions, classify_pair, shortest
from .errors import (
    BelowMinimumError,
    GapInversionError,
    NoGuaranteeError,
    NoHyperbolaError,
    PlanningError,
    UnreachableLengthError,
)
from .geometry import TAU, OrientedPoint, arc_between, sign, terminal_circle

log = logging.getLogger(__name__)

LENGTH_RTOL = 1e-6
TILDE_GRID = 4096
PLAN_GRID = ccc.DISCONTINUITY_GRID
SAME_K = 1e-10
EDGE_OFFSETS = 10.0 ** -np.arange(3, 10)
CC_SNAP_RTOL = 0.02
JUMP_SIDE = 1e-10  # offset from a jump root that is surely on one side


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def contains(self, x, tol=0.0):
        lo_ok = x >= self.lo - tol if self.lo_closed else x > self.lo - tol
        hi_ok = x <= self.hi + tol if self.hi_closed else x < self.hi + tol
        return lo_ok and hi_ok

    def __str__(self):
        hi = "∞)" if math.isinf(self.hi) else f"{self.hi:.3f}" + ("]" if self.hi_closed else ")")
        return ("[" if self.lo_closed else "(") + f"{self.lo:.3f}, " + hi


@dataclass(frozen=True)
class LengthSet:
    intervals: tuple

    @property
    def minimum(self):
        return self.intervals[0].lo

    @property
    def gap(self):
        """Open interval of unreachable lengths, or None."""
        if len(self.intervals) < 2:
            return None
        return (self.intervals[0].hi, self.intervals[1].lo)

    def contains(self, x, tol=1e-9):
        tol = tol * max(1.0, abs(x))
        return any(iv.contains(x, tol) for iv in self.intervals)

    __contains__ = contains

    def __str__(self):
        return " ∪ ".join(str(iv) for iv in self.intervals)

    def to_dict(self):
        return {"intervals": [[iv.lo, None if math.isinf(iv.hi) else iv.hi] for iv in self.intervals],
                "text": str(self)}


@dataclass(frozen=True)
class RadiiPlanClass:
    memberships: frozenset
    tilde_l: float
    tilde_trajectory: CccTrajectory
    tilde_k: float | None


@dataclass
class Segment:
    """Continuous stretch of one family traversed from ``k0`` towards ``k1``."""

    family: Family
    k0: float
    k1: float
    ks: np.ndarray
    lengths: np.ndarray
    end_kind: str

    @property
    def direction(self):
        return 1.0 if self.k1 >= self.k0 else -1.0


@dataclass(frozen=True)
class Switch:
    k_from: float
    k_to: float
    site: str
    length_before: float
    length_after: float


@dataclass
class PlanResult:
    trajectory: CccTrajectory
    strategy: str  # "minimal", "walk", "scan"
    segments: list = field(default_factory=list)
    switches: list = field(default_factory=list)


class FamilyMap:
    """Breakpoints of ``l(k)`` for one family over the whole circle of ``k``.

    Breakpoints are the two poles, the jump parameters, and (when ``r_min``
    is given) the roots of ``|r2| = r_min``.
    """

    def __init__(self, family: Family, r_min=None, grid_n=PLAN_GRID):
        self.family = family
        self.r_min = r_min
        self.grid = np.concatenate([branch_grid("right", grid_n), branch_grid("left", grid_n)])
        self.breaks = [(HALF_PI, "pole", None), (-HALF_PI, "pole", None)]
        for d in family.discontinuities(None, grid_n):
            self.breaks.append((d.k, "jump", d))
        if r_min is not None:
            for k in self._feasibility_roots():
                self.breaks.append((float(k), "feasibility", None))
        self.breaks.sort(key=lambda item: item[0])

    def _feasibility_roots(self):
        g = lambda kk: np.abs(self.family.evaluate(kk).r2) - self.r_min
        vals = g(self.grid)
        pos = vals >= 0
        idx = np.nonzero(pos[1:] != pos[:-1])[0]
        # The sign of r2 flips through infinity at the poles; those are not roots.
        idx = idx[np.abs(self.grid[idx + 1] - self.grid[idx]) < 0.5]
        idx = idx[(np.abs(vals[idx]) < 1e6 * self.r_min)]
        return bisect_roots(g, self.grid[idx], self.grid[idx + 1])

    def feasible(self, k):
        if self.r_min is None:
            return True
        return abs(self.family.evaluate([k]).r2[0]) >= self.r_min * (1 - 1e-12)

    def next_break(self, k, d):
        """First breakpoint strictly beyond ``k`` in direction ``d``, unwrapped."""
        best = None
        for kb, kind, info in self.breaks:
            t = ((kb - k) * d) % TAU
            if t <= SAME_K or t >= TAU - SAME_K:
                continue
            if best is None or t < best[0]:
                best = (t, kb, kind, info)
        t, kb, kind, info = best
        return k + d * t, kind, info

    def segment(self, k0, k1, end_kind, start_kind=None):
        d = 1.0 if k1 >= k0 else -1.0
        span = abs(k1 - k0)
        t = ((self.grid - k0) * d) % TAU
        inner = np.sort(t[(t > 0) & (t < span)])
        edge = EDGE_OFFSETS[EDGE_OFFSETS < 0.25 * span]
        # l(k) is continuous at |r2| = r_min, so those ends are sampled exactly.
        ends = [0.0] if start_kind == "feasibility" else []
        ends += [span] if end_kind == "feasibility" else []
        t = np.unique(np.concatenate([edge, inner, span - edge, ends]))
        ks = k0 + d * t
        return Segment(self.family, k0, k1, ks, self.family.length(ks), end_kind)

    def all_segments(self):
        ks = [kb for kb, _, _ in self.breaks]
        kinds = [kind for _, kind, _ in self.breaks]
        out = []
        for i, k0 in enumerate(ks):
            j = (i + 1) % len(ks)
            k1 = ks[j] + (TAU if j == 0 else 0.0)
            if k1 - k0 <= SAME_K:
                continue
            if self.feasible(0.5 * (k0 + k1)):
                out.append(self.segment(k0, k1, kinds[j], kinds[i]))
        return out


@dataclass
class PairAnalysis:
    a: OrientedPoint
    b: OrientedPoint
    r_min: float
    minimal: object
    solutions: dict
    pair_class: object
    reachable: LengthSet
    maps: dict

    def family_map(self, r1, r3):
        key = (sign(r1), sign(r3))
        if key not in self.maps:
            try:
                fam = Family(self.a, self.b, key[0] * self.r_min, key[1] * self.r_min)
                self.maps[key] = FamilyMap(fam, self.r_min)
            except NoHyperbolaError:
                self.maps[key] = None
        return self.maps[key]


def _reachable_from(minimal, solutions, pair_class, r_min):
    lm = minimal.length
    if pair_class.category != "in_O_complement":
        return LengthSet((Interval(lm, math.inf, True, False),))
    ccc_words = [solutions[w] for w in ("LRL", "RLR")]
    short = [sols[0].length for sols in ccc_words if sols]
    long = [sols[-1].length for sols in ccc_words if len(sols) == 2]
    if not short:
        raise PlanningError("pair is in the CSC-shortest complement class but has no CCC words")
    l1 = max(short)
    csc = [s.length for w in ("LSL", "LSR", "RSL", "RSR") for s in solutions[w]]
    csc = [l for l in csc if abs(l - lm) > 1e-9]
    l2 = min([lm + TAU * r_min] + long + csc)
    if not l1 < l2:
        raise GapInversionError(l1, l2)
    return LengthSet((Interval(lm, l1), Interval(l2, math.inf, True, False)))


@functools.lru_cache(maxsize=512)
def analyze_pair(a: OrientedPoint, b: OrientedPoint, r_min: float) -> PairAnalysis:
    solutions = all_word_solutions(a, b, r_min)
    minimal = shortest(a, b, r_min)
    pair_class = classify_pair(a, b, r_min, minimal)
    reachable = _reachable_from(minimal, solutions, pair_class, r_min)
    return PairAnalysis(a, b, r_min, minimal, solutions, pair_class, reachable, {})


def reachable_lengths(a: OrientedPoint, b: OrientedPoint, r_min: float) -> LengthSet:
    return analyze_pair(a, b, r_min).reachable


def _as_trajectory(solution, r_min, fmap):
    """Express a Dubins solution in the three-arc data model."""
    arcs = solution.arcs
    r1 = sign(arcs[0].circle.radius) * r_min
    r3 = sign(arcs[2].circle.radius) * r_min
    if solution.is_csc:
        r2 = math.inf
        k = fmap.family.finite_pole if fmap is not None else None
    else:
        r2 = arcs[1].circle.radius
        k = fmap.family.parameter_of(arcs[1].circle.center, r2) if fmap is not None else None
    return CccTrajectory(tuple(arcs), (arcs[0].end, arcs[2].start), (r1, r2, r3), k,
                         word_for(r1, r2, r3), solution.length)


def _solve_segment(seg: Segment, l_o, anchor=None):
    """Root of ``l(k) = l_o`` in ``seg``: first along the travel direction, or closest to ``anchor``."""
    vals = seg.lengths - l_o
    pos = vals >= 0
    idx = np.nonzero(pos[1:] != pos[:-1])[0]
    idx = idx[np.isfinite(vals[idx]) & np.isfinite(vals[idx + 1])]
    if idx.size == 0 and vals.size:
        # l_o may be met only at a segment end (e.g. l1 at |r2| = r_min) without a sign change.
        err = np.abs(np.where(np.isfinite(vals), vals, np.inf))
        i = int(np.argmin(err))
        if err[i] <= 0.1 * LENGTH_RTOL * max(1.0, l_o):
            return float(seg.ks[i])
    if idx.size == 0:
        return None
    if anchor is None:
        idx = idx[:1]
    f = lambda k: float(seg.family.length([k])[0]) - l_o
    roots = [brentq(f, seg.ks[i], seg.ks[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps) for i in idx]
    if anchor is None:
        return roots[0]
    return min(roots, key=lambda k: abs(k - anchor))


def _accept(traj, l_o, r_min=None):
    if abs(traj.length - l_o) > LENGTH_RTOL * max(1.0, l_o):
        return False
    if r_min is not None and abs(traj.r2) < r_min * (1 - 1e-9):
        return False
    return True


def _walk(pa: PairAnalysis, fmap: FamilyMap, k0, d, l_o, switching=True, max_steps=24):
    segments, switches = [], []
    k = k0
    for _ in range(max_steps):
        kb, kind, info = fmap.next_break(k, d)
        if not fmap.feasible(0.5 * (k + kb)):
            break
        seg = fmap.segment(k, kb, kind)
        segments.append(seg)
        root = _solve_segment(seg, l_o)
        if root is not None:
            traj = build_trajectory(pa.a, pa.b, fmap.family.r1, fmap.family.r3, root)
            if _accept(traj, l_o, pa.r_min):
                travelled = sum(abs(sg.k1 - sg.k0) for sg in segments[:-1]) + abs(root - seg.k0)
                return traj, segments, switches, travelled
        if kind == "feasibility":
            break
        if kind == "pole":
            if fmap.family.finite_pole is None or abs(normalize_k(kb) - normalize_k(fmap.family.finite_pole)) > 1e-9:
                break
            k = kb
            continue
        # Jump: switch families when the arriving arc has shrunk to zero.
        probe = fmap.family.evaluate([kb - d * 1e-9])
        gap = probe.start_gap[0] if info.site == "start" else probe.end_gap[0]
        if switching and 0.0 <= gap < HALF_PI:
            nxt = _switch(pa, fmap, kb, info.site, probe)
            if nxt is not None:
                fmap, k, d, sw = nxt
                switches.append(sw)
                continue
        k = kb
    return None, segments, switches, math.inf


def _switch(pa, fmap, kb, site, probe):
    fam = fmap.family
    r1, r3 = (-fam.r1, fam.r3) if site == "start" else (fam.r1, -fam.r3)
    other = pa.family_map(r1, r3)
    if other is None:
        return None
    o2 = tuple(probe.o2[0])
    k_new = other.family.parameter_of(o2, float(probe.r2[0]), tol=1e-6)
    if k_new is None:
        return None
    for d_new in (1.0, -1.0):
        g = other.family.evaluate([k_new + d_new * 1e-9])
        gap = g.start_gap[0] if site == "start" else g.end_gap[0]
        if 0.0 <= gap < HALF_PI:
            sw = Switch(kb, k_new, site, float(probe.length[0]), float(g.length[0]))
            return other, k_new, d_new, sw
    return None


def _minimal_anchor(pa):
    """Family map and parameter of the shortest path, or (None, None)."""
    sol = pa.minimal
    fmap = pa.family_map(sol.arcs[0].circle.radius, sol.arcs[2].circle.radius)
    if fmap is None:
        return None, None
    traj = _as_trajectory(sol, pa.r_min, fmap)
    return fmap, traj.k


def minimal_trajectory(a: OrientedPoint, b: OrientedPoint, r_min: float) -> CccTrajectory:
    """The shortest path expressed in the three-arc data model."""
    pa = analyze_pair(a, b, r_min)
    fmap, _ = _minimal_anchor(pa)
    return _as_trajectory(pa.minimal, r_min, fmap)


def plan_detailed(a: OrientedPoint, b: OrientedPoint, r_min: float, l_o: float) -> PlanResult:
    pa = analyze_pair(a, b, r_min)
    reach = pa.reachable
    if l_o < reach.minimum - 1e-9 * max(1.0, reach.minimum):
        raise BelowMinimumError(l_o, reach)
    if not reach.contains(l_o):
        raise UnreachableLengthError(l_o, reach)
    fmap0, k0 = _minimal_anchor(pa)
    if abs(l_o - pa.minimal.length) <= LENGTH_RTOL * max(1.0, l_o):
        return PlanResult(_as_trajectory(pa.minimal, r_min, fmap0), "minimal")

    all_segments, all_switches = [], []
    if fmap0 is not None and k0 is not None:
        best = None
        for d in (1.0, -1.0):
            traj, segs, sws, cost = _walk(pa, fmap0, k0, d, l_o)
            all_segments += segs
            all_switches += sws
            if traj is not None and (best is None or cost < best[0]):
                best = (cost, traj)
        if best is not None:
            return PlanResult(best[1], "walk", all_segments, all_switches)

    traj = _scan(pa, l_o, prefer=fmap0)
    if traj is None:
        raise PlanningError(f"no trajectory of length {l_o!r} found although it lies in {reach}")
    log.debug("walk from the shortest path missed l_o=%r; used the segment scan", l_o)
    return PlanResult(traj, "scan", all_segments, all_switches)


def _scan(pa, l_o, prefer=None):
    maps = [pa.family_map(s1, s3) for s1 in (1.0, -1.0) for s3 in (1.0, -1.0)]
    maps = [m for m in maps if m is not None]
    if prefer is not None:
        maps.sort(key=lambda m: m is not prefer)
    for fmap in maps:
        segs = sorted(fmap.all_segments(), key=lambda s: float(np.nanmin(s.lengths)))
        for seg in segs:
            root = _solve_segment(seg, l_o)
            if root is None:
                continue
            traj = build_trajectory(pa.a, pa.b, fmap.family.r1, fmap.family.r3, root)
            if _accept(traj, l_o, pa.r_min):
                return traj
    return None


def plan(a: OrientedPoint, b: OrientedPoint, r_min: float, l_o: float) -> CccTrajectory:
    return plan_detailed(a, b, r_min, l_o).trajectory


def _tilde(family: Family, grid_n=TILDE_GRID):
    """Shortest member of a family over both branches and the finite pole."""
    ks = np.concatenate([branch_grid("right", grid_n), branch_grid("left", grid_n)])
    lengths = family.length(ks)
    cands = []  # (length, k); k=None means the straight-middle limit
    if family.finite_pole is not None:
        cands.append((family.csc().length, None))
    # Refine the deepest local grid minima.
    interior = np.nonzero((lengths[1:-1] <= lengths[:-2]) & (lengths[1:-1] <= lengths[2:]))[0] + 1
    interior = interior[np.argsort(lengths[interior])][:8]
    for i in interior:
        res = minimize_scalar(lambda k: float(family.length([k])[0]), bounds=(ks[i - 1], ks[i + 1]),
                              method="bounded", options={"xatol": 1e-12})
        cands.append((float(res.fun), float(res.x)))
        cands.append((float(lengths[i]), float(ks[i])))
    for dis in family.discontinuities():
        for k in (dis.k - JUMP_SIDE, dis.k + JUMP_SIDE):
            cands.append((float(family.length([k])[0]), k))
    return min(cands, key=lambda c: c[0])


def classify_radii(a: OrientedPoint, b: OrientedPoint, r1: float, r3: float, r_min: float) -> RadiiPlanClass:
    family = Family(a, b, r1, r3)
    tilde_l, tilde_k = _tilde(family)
    traj = family.csc() if tilde_k is None else family.trajectory(tilde_k)
    eta, zeta = traj.arcs[0].sweep, traj.arcs[2].sweep
    mu = traj.arcs[1].sweep if traj.kind == "ccc" else 0.0
    tol = 1e-9
    right = math.dist(terminal_circle(a, -abs(r1)).center, terminal_circle(b, -abs(r3)).center)
    left = math.dist(terminal_circle(a, abs(r1)).center, terminal_circle(b, abs(r3)).center)
    need = abs(r1) + abs(r3) + 2.0 * r_min
    checks = {
        "P0": traj.kind == "ccc" and mu >= math.pi - tol,
        "P1": eta >= math.pi - tol,
        "P2": zeta >= math.pi - tol,
        "P3": right >= need - tol,
        "P4": left >= need - tol,
    }
    members = frozenset(name for name, ok in checks.items() if ok)
    return RadiiPlanClass(members, traj.length, traj, tilde_k)


def _cc_trajectory(a, b, r1, r3):
    c1 = terminal_circle(a, r1)
    c3 = terminal_circle(b, r3)
    o1, o3 = c1.center, c3.center
    f = r1 / (r3 - r1)
    t = (o1[0] - f * (o3[0] - o1[0]), o1[1] - f * (o3[1] - o1[1]))
    arcs = (arc_between(c1, a.position, t, tol=1e-7), arc_between(c3, t, b.position, tol=1e-7))
    return CccTrajectory(arcs, (t, t), (r1, None, r3), None, word_for(r1, None, r3),
                         arcs[0].length + arcs[1].length)


def _r3_tangent(a, b, r1):
    """Terminal radius at ``b`` making the terminal circles tangent, for a given ``r1``."""
    o1 = terminal_circle(a, r1).center
    px, py = o1[0] - b.x, o1[1] - b.y
    nb = (-math.sin(b.heading), math.cos(b.heading))
    den = 2.0 * (px * nb[0] + py * nb[1] - r1)
    if den == 0.0:
        return math.nan
    return (px * px + py * py - r1 * r1) / den


def circle_circle_plan(a, b, r1, r3, r_min, l_o, rtol=CC_SNAP_RTOL):
    """Two-arc trajectory of length ``l_o`` with terminal circles tangent.

    The radii are moved along the one-parameter tangency curve to the pair
    closest to ``(r1, r3)`` giving the requested length; each may change by
    at most ``rtol`` relative.  Returns None when that is impossible.
    """
    def residual(x):
        r3x = _r3_tangent(a, b, x)
        if not math.isfinite(r3x) or r3x == 0.0 or sign(r3x) != sign(r3) or abs(r3x) < r_min:
            return math.nan
        try:
            return _cc_trajectory(a, b, x, r3x).length - l_o
        except (PlanningError, ValueError):
            return math.nan

    xs = np.linspace(r1 * (1 - 2 * rtol), r1 * (1 + 2 * rtol), 401)
    vals = np.array([residual(x) for x in xs])
    best = None
    for i in range(len(xs) - 1):
        if np.isfinite(vals[i]) and np.isfinite(vals[i + 1]) and (vals[i] >= 0) != (vals[i + 1] >= 0):
            x = brentq(residual, xs[i], xs[i + 1], xtol=1e-14)
            if best is None or abs(x - r1) < abs(best - r1):
                best = x
    if best is None:
        return None
    r3x = _r3_tangent(a, b, best)
    if abs(best - r1) > rtol * abs(r1) or abs(r3x - r3) > rtol * abs(r3) or abs(best) < r_min:
        return None
    return _cc_trajectory(a, b, best, r3x)


def plan_with_radii(a: OrientedPoint, b: OrientedPoint, r1: float, r3: float, r_min: float,
                    l_o: float) -> CccTrajectory:
    try:
        rc = classify_radii(a, b, r1, r3, r_min)
    except NoHyperbolaError:
        traj = circle_circle_plan(a, b, r1, r3, r_min, l_o)
        if traj is None:
            raise
        return traj
    if not rc.memberships:
        raise NoGuaranteeError(f"radii ({r1}, {r3}) are outside every guaranteed class")
    if l_o < rc.tilde_l - 1e-9 * max(1.0, l_o):
        raise BelowMinimumError(l_o, LengthSet((Interval(rc.tilde_l, math.inf, True, False),)))
    if abs(l_o - rc.tilde_l) <= LENGTH_RTOL * max(1.0, l_o):
        return rc.tilde_trajectory
    fmap = FamilyMap(Family(a, b, r1, r3), r_min)
    k0 = rc.tilde_k if rc.tilde_k is not None else fmap.family.finite_pole
    pa = PairAnalysis(a, b, r_min, None, {}, None, None, {})
    best = None
    for d in (1.0, -1.0):
        traj, _, _, cost = _walk(pa, fmap, k0, d, l_o, switching=False)
        if traj is not None and (best is None or cost < best[0]):
            best = (cost, traj)
    if best is not None:
        return best[1]
    for seg in sorted(fmap.all_segments(), key=lambda s: float(np.nanmin(s.lengths))):
        root = _solve_segment(seg, l_o, anchor=k0)
        if root is not None:
            traj = fmap.family.trajectory(root)
            if _accept(traj, l_o, r_min):
                return traj
    raise PlanningError(f"no trajectory of length {l_o!r} with radii ({r1}, {r3})")


def enumerate_plans(a: OrientedPoint, b: OrientedPoint, r_min: float, l_o: float,
                    radii_samples, include_minimal=True) -> list:
    """One trajectory per feasible ``(r1, r3)`` sample, in sample order.

    With ``include_minimal`` the four ``(+-r_min, +-r_min)`` pairs are appended
    when absent.  Infeasible samples are skipped and logged.
    """
    samples = [tuple(map(float, s)) for s in radii_samples]
    if include_minimal:
        for s1 in (1.0, -1.0):
            for s3 in (1.0, -1.0):
                pair = (s1 * r_min, s3 * r_min)
                if pair not in samples:
                    samples.append(pair)
    out = []
    for r1, r3 in samples:
        try:
            out.append(plan_with_radii(a, b, r1, r3, r_min, l_o))
        except PlanningError as exc:
            log.info("skipping radii (%g, %g): %s", r1, r3, exc)
    if not out and include_minimal:
        out.append(plan(a, b, r_min, l_o))
    return out
