"""Matplotlib figures: trajectories with changeover points, and l(k) sweeps."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .geometry import sample_array  # noqa: E402

SAMPLES_PER_ARC = 256
COLORS = ("tab:red", "tab:blue", "tab:green", "tab:orange", "tab:purple", "tab:brown")


def _pose_arrow(ax, p, size, color):
    ax.annotate("", xy=(p.x + size * math.cos(p.heading), p.y + size * math.sin(p.heading)),
                xytext=(p.x, p.y), arrowprops={"arrowstyle": "->", "color": color, "lw": 1.5})


def plot_trajectories(trajs, a, b, path, labels=None, title=None):
    """Draw one or more trajectories from ``a`` to ``b`` and save to ``path``.

    Changeover points are filled dots of radius 0.5% of the view; the axes
    use a uniform world-to-view scale.
    """
    fig, ax = plt.subplots(figsize=(6.4, 6.4))
    pts_all = [np.array([[a.x, a.y], [b.x, b.y]])]
    for i, traj in enumerate(trajs):
        xy = np.vstack([sample_array(arc, SAMPLES_PER_ARC)[:, :2] for arc in traj.arcs])
        pts_all.append(xy)
        label = labels[i] if labels else f"{traj.word}  l={traj.length:.3f}"
        ax.plot(xy[:, 0], xy[:, 1], color=COLORS[i % len(COLORS)], lw=1.4, label=label)
    allxy = np.vstack(pts_all)
    lo, hi = allxy.min(axis=0), allxy.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    mid = 0.5 * (lo + hi)
    pad = 0.08 * span
    ax.set_xlim(mid[0] - span / 2 - pad, mid[0] + span / 2 + pad)
    ax.set_ylim(mid[1] - span / 2 - pad, mid[1] + span / 2 + pad)
    ax.set_aspect("equal")

    dot = 0.005 * (span + 2 * pad)
    for i, traj in enumerate(trajs):
        for c in traj.changeovers:
            ax.add_patch(plt.Circle(c, dot, color=COLORS[i % len(COLORS)], zorder=3))
    _pose_arrow(ax, a, 0.06 * span, "black")
    _pose_arrow(ax, b, 0.06 * span, "black")
    ax.annotate("A", (a.x, a.y), textcoords="offset points", xytext=(-10, -12))
    ax.annotate("B", (b.x, b.y), textcoords="offset points", xytext=(4, -12))
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.grid(True, lw=0.3, alpha=0.6)
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_sweep(rows, path, r_min=None, title=None, cap=None):
    """Plot ``l(k)`` from sweep rows; jumps are marked, infeasible samples greyed."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    data = [(k, l, flag) for k, _, l, _, flag in rows if math.isfinite(l)]
    ks = np.array([d[0] for d in data])
    ls = np.array([d[1] for d in data])
    flags = [d[2] for d in data]
    cap = cap or float(np.nanpercentile(ls, 90)) * 1.5
    plain = np.array([f in ("", "infeasible") for f in flags])
    ok = plain & np.array([f != "infeasible" for f in flags])
    bad = plain & ~ok
    ax.plot(ks[ok], np.minimum(ls[ok], cap), ".", ms=1.5, color="tab:blue", label="l(k)")
    if bad.any():
        ax.plot(ks[bad], np.minimum(ls[bad], cap), ".", ms=1.5, color="0.7", label="|r2| < r_min")
    for k, l, flag in data:
        if flag.startswith("jump"):
            ax.axvline(k, color="tab:red", lw=0.8, ls="--")
        elif flag == "pole":
            ax.plot([k], [min(l, cap)], "o", color="tab:green", ms=4)
    for x in (-math.pi / 2, math.pi / 2):
        ax.axvline(x, color="0.5", lw=0.6)
    ax.set_xlabel("k [rad]")
    ax.set_ylabel("length [m]")
    ax.set_ylim(0, cap)
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
