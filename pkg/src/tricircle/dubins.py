"""Classic Dubins shortest paths and the pair classification built on them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegeneratePairError, InvalidRadiusError
from .geometry import (
    GEOM_TOL,
    Arc,
    OrientedPoint,
    SignedCircle,
    arc_between,
    line_between,
    terminal_circle,
)

WORDS = ("LSL", "LSR", "RSL", "RSR", "LRL", "RLR")
CSC_WORDS = WORDS[:4]
CCC_WORDS = WORDS[4:]
PAIR_SETS = ("O1", "O2", "O3", "O4", "O5")


@dataclass(frozen=True)
class DubinsSolution:
    word: str
    arcs: tuple
    length: float
    params: tuple  # (first arc, middle element, last arc) lengths in meters

    @property
    def is_csc(self):
        return self.word[1] == "S"


@dataclass(frozen=True)
class PairClass:
    memberships: frozenset = field(default_factory=frozenset)
    category: str = "in_O_complement"  # or "in_O", "ccc_shortest"


def _turn(letter):
    return 1.0 if letter == "L" else -1.0


def _check_pair(a: OrientedPoint, b: OrientedPoint, r_min):
    if not (r_min > 0 and math.isfinite(r_min)):
        raise InvalidRadiusError(f"r_min must be positive and finite, got {r_min}")
    if a.position == b.position and a.heading == b.heading:
        raise DegeneratePairError("start and goal oriented points coincide")


def common_tangent(c1: SignedCircle, c3: SignedCircle):
    """Direction-consistent tangent from ``c1`` to ``c3``.

    Returns ``(p1, p3, heading)`` where ``p1`` on ``c1`` and ``p3`` on ``c3``
    are the touch points and ``heading`` the travel direction, or ``None``
    when the circles overlap too much for such a tangent to exist.  The
    tangent is unique for a given pair of signed radii.
    """
    dx = c3.center[0] - c1.center[0]
    dy = c3.center[1] - c1.center[1]
    dist = math.hypot(dx, dy)
    delta = c3.radius - c1.radius
    if abs(delta) > dist + GEOM_TOL * max(1.0, dist):
        return None
    if dist == 0.0:
        return None
    ratio = max(-1.0, min(1.0, delta / dist))
    heading = math.atan2(dy, dx) - math.asin(ratio)
    nx, ny = -math.sin(heading), math.cos(heading)
    p1 = (c1.center[0] - c1.radius * nx, c1.center[1] - c1.radius * ny)
    p3 = (c3.center[0] - c3.radius * nx, c3.center[1] - c3.radius * ny)
    return p1, p3, heading


def _csc(a, b, r_min, word):
    c1 = terminal_circle(a, _turn(word[0]) * r_min)
    c3 = terminal_circle(b, _turn(word[2]) * r_min)
    tangent = common_tangent(c1, c3)
    if tangent is None:
        return []
    p1, p3, heading = tangent
    arcs = (
        arc_between(c1, a.position, p1),
        line_between(p1, p3, heading),
        arc_between(c3, p3, b.position),
    )
    return [_solution(word, arcs)]


def _ccc(a, b, r_min, word):
    s = _turn(word[0])
    c1 = terminal_circle(a, s * r_min)
    c3 = terminal_circle(b, s * r_min)
    dx = c3.center[0] - c1.center[0]
    dy = c3.center[1] - c1.center[1]
    dist = math.hypot(dx, dy)
    # o1 == o3 leaves the middle circle undetermined; not handled.
    if dist == 0.0 or dist > 4.0 * r_min:
        return []
    mx, my = c1.center[0] + dx / 2, c1.center[1] + dy / 2
    h = math.sqrt(max(0.0, 4.0 * r_min * r_min - dist * dist / 4.0))
    ux, uy = -dy / dist, dx / dist
    out = []
    for side in (1.0, -1.0):
        o2 = (mx + side * h * ux, my + side * h * uy)
        c2 = SignedCircle(o2, -s * r_min)
        t1 = ((c1.center[0] + o2[0]) / 2, (c1.center[1] + o2[1]) / 2)
        t2 = ((c3.center[0] + o2[0]) / 2, (c3.center[1] + o2[1]) / 2)
        arcs = (
            arc_between(c1, a.position, t1),
            arc_between(c2, t1, t2),
            arc_between(c3, t2, b.position),
        )
        out.append(_solution(word, arcs))
        if h == 0.0:
            break
    out.sort(key=lambda sol: sol.length)
    return out


def _solution(word, arcs):
    params = tuple(arc.length for arc in arcs)
    return DubinsSolution(word, tuple(arcs), sum(params), params)


def all_word_solutions(a: OrientedPoint, b: OrientedPoint, r_min: float) -> dict:
    """Every Dubins candidate keyed by word.

    CSC words map to at most one solution; CCC words to at most two, sorted
    short then long.  Empty lists mean the word does not exist.
    """
    _check_pair(a, b, r_min)
    out = {}
    for word in CSC_WORDS:
        out[word] = _csc(a, b, r_min, word)
    for word in CCC_WORDS:
        out[word] = _ccc(a, b, r_min, word)
    return out


def shortest(a: OrientedPoint, b: OrientedPoint, r_min: float) -> DubinsSolution:
    best = None
    for word, sols in all_word_solutions(a, b, r_min).items():
        for sol in sols:
            if best is None or sol.length < best.length:
                best = sol
    return best


def classify_pair(a: OrientedPoint, b: OrientedPoint, r_min: float, solution=None) -> PairClass:
    sol = solution or shortest(a, b, r_min)
    if not sol.is_csc:
        return PairClass(frozenset(), "ccc_shortest")
    eta, d, zeta = sol.params
    tol = GEOM_TOL * max(1.0, r_min)
    right_a = terminal_circle(a, -r_min).center
    right_b = terminal_circle(b, -r_min).center
    left_a = terminal_circle(a, r_min).center
    left_b = terminal_circle(b, r_min).center
    checks = {
        "O1": eta >= math.pi * r_min - tol,
        "O2": zeta >= math.pi * r_min - tol,
        "O3": d >= 4.0 * r_min - tol,
        "O4": math.dist(right_a, right_b) >= 4.0 * r_min - tol,
        "O5": math.dist(left_a, left_b) >= 4.0 * r_min - tol,
    }
    members = frozenset(name for name, ok in checks.items() if ok)
    return PairClass(members, "in_O" if members else "in_O_complement")
