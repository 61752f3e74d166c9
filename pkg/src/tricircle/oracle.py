"""Brute-force checks that do not trust the analytic constructions.

:func:`validate` only looks at sampled poses: it never recomputes tangency
or changeover points.  The grid helpers scan ``l(k)`` densely so analytic
minima, jumps and reachability gaps can be cross-checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ccc import HALF_PI, POLE_TOL, Family, build_trajectory, near_pole
from .errors import NoHyperbolaError, PoleError
from .geometry import OrientedPoint, angle_diff, sample_array


MIN_TRIPLE_SPAN = 1e-4
MIN_SPEED_STEP = 1e-9


@dataclass(frozen=True)
class Tolerances:
    position: float = 1e-9  # meters, scaled by max(1, coordinate size)
    heading: float = 1e-9
    speed: float = 1e-3
    curvature: float = 1e-4  # relative to 1/r_min


@dataclass(frozen=True)
class ValidationReport:
    endpoint_pos_err: float
    endpoint_heading_err: float
    joint_pos_errs: tuple
    joint_heading_errs: tuple
    unit_speed_err: float
    max_curvature: float
    length_analytic: float
    length_polyline: float
    polyline_errs: tuple
    pass_: bool
    failures: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return self.pass_

    def summary(self):
        status = "PASS" if self.pass_ else "FAIL: " + ", ".join(self.failures)
        return (f"{status} | endpoint {self.endpoint_pos_err:.2e} m / {self.endpoint_heading_err:.2e} rad"
                f" | joints {max(self.joint_pos_errs, default=0):.2e} m"
                f" | max curvature {self.max_curvature:.6f}"
                f" | length {self.length_analytic:.9f} vs polyline {self.length_polyline:.9f}")


def _circumcurvature(pts, stride=1):
    """Curvature of the circle through triples ``pts[i], pts[i+stride], pts[i+2*stride]``."""
    p0, p1, p2 = pts[:-2 * stride], pts[stride:-stride], pts[2 * stride:]
    u = p0 - p1
    v = p2 - p1
    cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    a = np.hypot(*u.T)
    b = np.hypot(*v.T)
    c = np.hypot(*(p2 - p0).T)
    den = a * b * c
    ok = den > 0
    return 2.0 * np.abs(cross[ok]) / den[ok]


def validate(traj, a: OrientedPoint, b: OrientedPoint, r_min: float, n_samples: int = 256,
             tol: Tolerances = Tolerances()) -> ValidationReport:
    if n_samples < 64:
        raise ValueError("validate needs at least 64 samples per arc")
    samples = [sample_array(arc, n_samples) for arc in traj.arcs]
    scale = max(1.0, abs(a.x), abs(a.y), abs(b.x), abs(b.y))

    first, last = samples[0][0], samples[-1][-1]
    pos_err = max(math.dist(first[:2], a.position), math.dist(last[:2], b.position))
    head_err = max(angle_diff(first[2], a.heading), angle_diff(last[2], b.heading))
    joint_pos = tuple(math.dist(s0[-1, :2], s1[0, :2]) for s0, s1 in zip(samples, samples[1:]))
    joint_head = tuple(angle_diff(s0[-1, 2], s1[0, 2]) for s0, s1 in zip(samples, samples[1:]))

    speed_err = 0.0
    kappa = 0.0
    poly_total = 0.0
    poly_errs = []
    for arc, pts in zip(traj.arcs, samples):
        xy = pts[:, :2]
        chords = np.hypot(*np.diff(xy, axis=0).T)
        poly = float(chords.sum())
        poly_total += poly
        poly_errs.append(abs(poly - arc.length))
        ds = arc.length / (n_samples - 1)
        # Chords shorter than this are dominated by coordinate rounding.
        if ds > MIN_SPEED_STEP * scale:
            speed_err = max(speed_err, float(np.max(np.abs(chords / ds - 1.0))))
        # Triples must span enough arc for their sagitta to dominate the
        # rounding of the sample coordinates; arcs shorter than that are skipped.
        span = MIN_TRIPLE_SPAN * math.sqrt(scale * r_min)
        if arc.length >= span:
            stride = min((n_samples - 1) // 2, max(1, math.ceil(span / ds)))
            k = _circumcurvature(xy, stride)
            if k.size:
                kappa = max(kappa, float(k.max()))

    failures = []
    if pos_err > tol.position * scale:
        failures.append("endpoint position")
    if head_err > tol.heading:
        failures.append("endpoint heading")
    if any(e > tol.position * scale for e in joint_pos):
        failures.append("joint position")
    if any(e > tol.heading for e in joint_head):
        failures.append("joint heading")
    if speed_err > tol.speed:
        failures.append("unit speed")
    if kappa > (1.0 + tol.curvature) / r_min:
        failures.append("curvature")
    for arc, err in zip(traj.arcs, poly_errs):
        if err > 10.0 * arc.length / n_samples**2 + 1e-12 * scale:
            failures.append("polyline length")
            break
    return ValidationReport(pos_err, head_err, joint_pos, joint_head, speed_err, kappa,
                            traj.length, poly_total, tuple(poly_errs), not failures, tuple(failures))


def uniform_branch_grid(grid_n):
    """``grid_n`` uniform interior parameters on each branch."""
    t = (np.arange(grid_n) + 0.5) / grid_n
    return np.concatenate([-HALF_PI + math.pi * t, HALF_PI + math.pi * t])


def grid_min_length(a: OrientedPoint, b: OrientedPoint, r1: float, r3: float, grid_n: int = 100_000) -> float:
    family = Family(a, b, r1, r3)
    best = float(np.min(family.length(uniform_branch_grid(grid_n))))
    csc = family.csc()
    if csc is not None:
        best = min(best, csc.length)
    return best


def jump_probe(a: OrientedPoint, b: OrientedPoint, r1: float, r3: float, k_star: float, eps: float) -> float:
    if not 1e-9 <= eps <= 1e-4:
        raise ValueError("eps must lie in [1e-9, 1e-4]")
    for k in (k_star - eps, k_star + eps):
        if near_pole(k, max(POLE_TOL, 2 * eps)) is not None:
            raise PoleError(f"probe at k={k_star} touches a pole")
    lo = build_trajectory(a, b, r1, r3, k_star - eps).length
    hi = build_trajectory(a, b, r1, r3, k_star + eps).length
    return abs(lo - hi)


def gap_scan(a: OrientedPoint, b: OrientedPoint, r_min: float, lo: float, hi: float, grid_n: int = 10_000):
    """Feasible trajectories with ``r1, r3 in {+-r_min}`` whose length falls in ``(lo, hi)``.

    Returns a list of ``(r1, r3, k, length)``; empty means the gap is sound
    at this resolution.
    """
    ks = uniform_branch_grid(grid_n)
    hits = []
    for s1 in (1.0, -1.0):
        for s3 in (1.0, -1.0):
            try:
                family = Family(a, b, s1 * r_min, s3 * r_min)
            except NoHyperbolaError:
                continue
            g = family.evaluate(ks)
            mask = (np.abs(g.r2) >= r_min) & (g.length > lo) & (g.length < hi)
            hits.extend((s1 * r_min, s3 * r_min, float(k), float(l)) for k, l in zip(ks[mask], g.length[mask]))
    return hits
