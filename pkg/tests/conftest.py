import math

from tricircle import OrientedPoint

EX1_A = OrientedPoint(-3.0, 1.0, 0.785)
EX1_B = OrientedPoint(0.0, 0.0, 0.0)
EX2_A = OrientedPoint(-30.0, 10.0, 0.714)
EX2_B = OrientedPoint(0.0, 0.0, 0.0)

# (l_o, r1, r2, k, r3) for the worked three-arc example; the first row is the
# shortest path itself (straight middle at the pole).
EX1_PLANS = [
    (3.484, -1.0, math.inf, math.pi / 2, 1.0),
    (3.60, -1.0, -1.37, 2.634, 1.0),
    (4.05, 1.0, -1.031, -0.379, 1.0),
    (7.00, 1.0, -1.015, 0.360, 1.0),
    (11.15, 1.0, -1.57, 0.748, 1.0),
    (12.45, -1.0, 1.49, -0.634, 1.0),
    (14.90, -1.0, 1.87, -0.876, 1.0),
]

# (r1, r3, l_tilde, r2, k) at l_o = 44.5 for the second example; None = not applicable.
EX2_RADII = [
    (-2.5, 1.5, 32.099, 20.683, 0.805),
    (-5.5, -3.58, 33.467, 9.601, 0.167),
    (-1.0, -1.01, 32.389, 14.798, 3.328),
    (13.79, 10.01, 35.998, -9.145, -0.242),
    (1.94, 12.01, 35.673, -27.42, 2.029),
    (2.04, 59.314, None, None, None),
]
EX2_RADII_LENGTH = 44.5


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE = {}


def record(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda c: int(c)):
            terminalreporter.write_line(ACCEPTANCE[key])
