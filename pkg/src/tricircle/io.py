"""JSON trajectory documents and CSV exports."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .ccc import HALF_PI, CccTrajectory, word_for
from .geometry import Arc, OrientedPoint, SignedCircle, sample_array
from .oracle import uniform_branch_grid

SCHEMA = "tricircle.trajectory/1"
CSV_HEADER = ("k", "r2", "length", "word", "flag")


def _num(x):
    """JSON-safe float: infinities become None."""
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return float(x)


def _pose(p: OrientedPoint):
    return [p.x, p.y, p.heading]


def _arc_to_dict(arc: Arc):
    if arc.kind == "line":
        return {"kind": "line", "start": list(arc.start), "end": list(arc.end), "heading": arc.direction}
    return {
        "kind": "circular",
        "center": list(arc.circle.center),
        "signed_radius": arc.circle.radius,
        "start": list(arc.start),
        "end": list(arc.end),
        "sweep": arc.sweep,
    }


def _arc_from_dict(d):
    start, end = tuple(d["start"]), tuple(d["end"])
    if d["kind"] == "line":
        return Arc("line", start, end, math.dist(start, end), direction=d["heading"])
    c = SignedCircle(tuple(d["center"]), d["signed_radius"])
    return Arc("circular", start, end, abs(c.radius) * d["sweep"], d["sweep"], c)


@dataclass
class TrajectoryDocument:
    meta: dict
    solution: dict
    provenance: dict = field(default_factory=dict)

    @classmethod
    def from_trajectory(cls, traj: CccTrajectory, a, b, r_min, requested_length=None,
                        solver="tricircle", tolerances=None):
        r1, r2, r3 = traj.radii
        meta = {"r_min": r_min, "A": _pose(a), "B": _pose(b), "requested_length": requested_length}
        solution = {
            "kind": traj.kind,
            "word": traj.word,
            "radii": [r1, _num(r2), r3],
            "k": traj.k,
            "changeovers": [list(c) for c in traj.changeovers],
            "length": traj.length,
            "arcs": [_arc_to_dict(arc) for arc in traj.arcs],
        }
        return cls(meta, solution, {"solver": solver, "tolerances": dict(tolerances or {})})

    def to_dict(self):
        return {"schema": SCHEMA, "meta": self.meta, "solution": self.solution, "provenance": self.provenance}

    @classmethod
    def from_dict(cls, d):
        if d.get("schema", SCHEMA) != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        return cls(d["meta"], d["solution"], d.get("provenance", {}))

    def dumps(self, indent=2):
        # repr-based float output is the shortest string that round-trips exactly.
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False, allow_nan=False)

    @classmethod
    def loads(cls, text):
        return cls.from_dict(json.loads(text))

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())

    @property
    def start(self):
        return OrientedPoint(*self.meta["A"])

    @property
    def goal(self):
        return OrientedPoint(*self.meta["B"])

    def to_trajectory(self) -> CccTrajectory:
        s = self.solution
        arcs = tuple(_arc_from_dict(d) for d in s["arcs"])
        r1, r2, r3 = s["radii"]
        if r2 is None and s["kind"] == "csc":
            r2 = math.inf
        return CccTrajectory(arcs, tuple(tuple(c) for c in s["changeovers"]), (r1, r2, r3), s["k"],
                             s["word"], s["length"])


def write_samples_csv(path, traj: CccTrajectory, n_per_arc=256):
    """Sampled poses ``arc,s,x,y,heading`` along a trajectory."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(("arc", "s", "x", "y", "heading"))
        offset = 0.0
        for i, arc in enumerate(traj.arcs):
            pts = sample_array(arc, n_per_arc)
            s = offset + np.linspace(0.0, arc.length, n_per_arc)
            for si, (x, y, h) in zip(s, pts):
                w.writerow((i, repr(float(si)), repr(float(x)), repr(float(y)), repr(float(h))))
            offset += arc.length


def sweep_rows(family, grid_n, r_min=None):
    """Rows ``(k, r2, length, word, flag)`` of ``l(k)`` over both branches, sorted by ``k``.

    Pole rows carry ``r2 = inf`` and the straight-middle length (``inf`` at
    the pole where none exists); jump rows carry the attained length and the
    jump magnitude in the flag.
    """
    ks = uniform_branch_grid(grid_n)
    g = family.evaluate(ks)
    rows = []
    for k, r2, length in zip(ks, g.r2, g.length):
        flag = "infeasible" if r_min is not None and abs(r2) < r_min else ""
        rows.append((float(k), float(r2), float(length), word_for(family.r1, r2, family.r3), flag))
    csc = family.csc()
    for pole in (-HALF_PI, HALF_PI):
        if csc is not None and pole == family.finite_pole:
            rows.append((pole, math.inf, csc.length, csc.word, "pole"))
        else:
            rows.append((pole, math.inf, math.inf, "", "pole"))
    for d in family.discontinuities():
        lo, hi = family.length([d.k - 1e-10, d.k + 1e-10])
        length = float(min(lo, hi))
        r2 = float(family.evaluate([d.k]).r2[0])
        rows.append((d.k, r2, length, word_for(family.r1, r2, family.r3),
                     f"jump_{d.site}:{d.magnitude:.9f}"))
    rows.sort(key=lambda r: r[0])
    return rows


def write_sweep_csv(path_or_file, rows):
    own = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for k, r2, length, word, flag in rows:
            w.writerow((repr(k), repr(r2), repr(length), word, flag))
    finally:
        if own:
            fh.close()


def read_sweep_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        r = csv.DictReader(fh)
        return [(float(row["k"]), float(row["r2"]), float(row["length"]), row["word"], row["flag"]) for row in r]
