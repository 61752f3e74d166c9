import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from tricircle import (
    BelowMinimumError,
    GapInversionError,
    NoGuaranteeError,
    OrientedPoint,
    UnreachableLengthError,
    classify_radii,
    enumerate_plans,
    minimal_trajectory,
    plan,
    plan_detailed,
    plan_with_radii,
    reachable_lengths,
    shortest,
    validate,
)

from conftest import EX1_A, EX1_B, EX2_A, EX2_B, EX1_PLANS, EX2_RADII, EX2_RADII_LENGTH

LENGTH_RTOL = 1e-6
pose = st.builds(OrientedPoint, st.floats(-10, 10), st.floats(-10, 10), st.floats(0, 2 * math.pi, exclude_max=True))


def check_plan(traj, a, b, r_min, l_o):
    assert abs(traj.length - l_o) <= LENGTH_RTOL * max(1.0, l_o)
    assert len(traj.changeovers) <= 2
    report = validate(traj, a, b, r_min)
    assert report.passed, report.summary()


def test_example1_reachable():
    rs = reachable_lengths(EX1_A, EX1_B, 1.0)
    assert rs.minimum == pytest.approx(3.484, abs=5e-3)
    l1, l2 = rs.gap
    assert l1 == pytest.approx(4.144, abs=5e-3)
    assert l2 == pytest.approx(6.8501, abs=1e-4)  # reference 6.856; see notes on the l2 conflict
    assert 5.5 not in rs and 4.0 in rs and 7.0 in rs and 1e6 in rs
    assert str(rs) == "[3.483, 4.146] ∪ [6.850, ∞)"


def test_example2_and_ccc_shortest_reachable():
    rs = reachable_lengths(EX2_A, EX2_B, 1.0)
    assert rs.gap is None and rs.minimum == pytest.approx(31.809, abs=5e-3)
    b = OrientedPoint(0.5, 0, math.pi)
    rs = reachable_lengths(EX1_B, b, 1.0)
    assert rs.gap is None and rs.minimum == pytest.approx(shortest(EX1_B, b, 1.0).length)


def test_gap_inversion_is_reported():
    a = OrientedPoint(-0.6692660641482462, 1.388920406541942, 3.531740729037937)
    b = OrientedPoint(0.8583132385886039, 1.322326821228856, 2.623076701341863)
    with pytest.raises(GapInversionError) as info:
        reachable_lengths(a, b, 1.0)
    assert info.value.l1 >= info.value.l2


@pytest.mark.parametrize("row", EX1_PLANS[1:], ids=lambda r: f"l{r[0]}")
def test_plan_ex1_plans_lengths(row):
    l_o = row[0]
    check_plan(plan(EX1_A, EX1_B, 1.0, l_o), EX1_A, EX1_B, 1.0, l_o)


def test_plan_example1_long_lengths_use_reference_family():
    traj = plan(EX1_A, EX1_B, 1.0, 14.90)
    assert traj.radii[0] == -1 and traj.radii[2] == 1
    assert traj.k == pytest.approx(-0.876, abs=2e-3)
    assert traj.r2 == pytest.approx(1.87, abs=0.01)


def test_plan_refuses_gap_and_short_lengths():
    with pytest.raises(UnreachableLengthError) as info:
        plan(EX1_A, EX1_B, 1.0, 5.5)
    assert info.value.reachable.gap is not None
    with pytest.raises(BelowMinimumError):
        plan(EX1_A, EX1_B, 1.0, 3.0)


def test_minimal_trajectory_is_the_shortest_path():
    traj = minimal_trajectory(EX1_A, EX1_B, 1.0)
    assert traj.length == pytest.approx(shortest(EX1_A, EX1_B, 1.0).length, abs=1e-12)
    assert traj.word == "RSL"
    assert plan(EX1_A, EX1_B, 1.0, traj.length).length == pytest.approx(traj.length)


@pytest.mark.parametrize("l_o", [4.05, 7.0, 30.0, 1e3])
def test_switch_continuity(l_o):
    res = plan_detailed(EX1_A, EX1_B, 1.0, l_o)
    assert res.switches
    for sw in res.switches:
        assert abs(sw.length_before - sw.length_after) <= 1e-6


@pytest.mark.parametrize("l_o", [31.9, 44.5, 80.0, 500.0])
def test_plan_example2(l_o):
    res = plan_detailed(EX2_A, EX2_B, 1.0, l_o)
    check_plan(res.trajectory, EX2_A, EX2_B, 1.0, l_o)
    assert all(abs(r) >= 1.0 for r in res.trajectory.radii if r is not None)


@pytest.mark.parametrize("row", EX2_RADII[:5], ids=lambda r: f"r{r[0]}_{r[1]}")
def test_classify_radii_ex2_radii(row):
    r1, r3, l_tilde, _, _ = row
    rc = classify_radii(EX2_A, EX2_B, r1, r3, 1.0)
    assert rc.tilde_l == pytest.approx(l_tilde, abs=0.02)
    assert rc.memberships
    assert rc.tilde_trajectory.length == rc.tilde_l


@pytest.mark.parametrize("row", EX2_RADII[:5], ids=lambda r: f"r{r[0]}_{r[1]}")
def test_plan_with_radii_ex2_radii(row):
    r1, r3, _, r2, k = row
    traj = plan_with_radii(EX2_A, EX2_B, r1, r3, 1.0, EX2_RADII_LENGTH)
    check_plan(traj, EX2_A, EX2_B, 1.0, EX2_RADII_LENGTH)
    assert traj.radii[0] == r1 and traj.radii[2] == r3
    assert traj.k == pytest.approx(k, abs=0.01)
    assert abs(traj.r2) >= 1.0 and math.copysign(1, traj.r2) == math.copysign(1, r2)


def test_plan_with_radii_circle_circle_row():
    traj = plan_with_radii(EX2_A, EX2_B, 2.04, 59.314, 1.0, EX2_RADII_LENGTH)
    assert traj.kind == "cc" and traj.word == "LL"
    assert traj.length == pytest.approx(EX2_RADII_LENGTH, abs=0.05)
    assert traj.radii[0] == pytest.approx(2.04, rel=0.02) and traj.radii[2] == pytest.approx(59.314, rel=0.02)
    assert validate(traj, EX2_A, EX2_B, 1.0).passed


def test_plan_with_radii_errors():
    with pytest.raises(BelowMinimumError):
        plan_with_radii(EX2_A, EX2_B, -2.5, 1.5, 1.0, 30.0)
    with pytest.raises(NoGuaranteeError):
        plan_with_radii(EX1_A, EX1_B, 1.0, 1.0, 1.0, 20.0)


def test_enumerate_ex2_radii_plans():
    radii = [(r1, r3) for r1, r3, *_ in EX2_RADII]
    trajs = enumerate_plans(EX2_A, EX2_B, 1.0, EX2_RADII_LENGTH, radii, include_minimal=False)
    assert len(trajs) == 6
    assert len({t.changeovers for t in trajs}) == 6
    for t in trajs:
        assert t.length == pytest.approx(EX2_RADII_LENGTH, abs=0.05)
        assert validate(t, EX2_A, EX2_B, 1.0).passed


def test_enumerate_at_minimum_recovers_shortest():
    l_m = shortest(EX1_A, EX1_B, 1.0).length
    trajs = enumerate_plans(EX1_A, EX1_B, 1.0, l_m, [])
    assert trajs
    assert min(t.length for t in trajs) == pytest.approx(l_m, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(pose, pose, st.floats(0, 1), st.floats(0, 40))
def test_plan_contract(a, b, u, extra):
    assume(math.dist(a.position, b.position) > 1e-3)
    try:
        rs = reachable_lengths(a, b, 1.0)
    except GapInversionError:
        assume(False)
    if rs.gap:
        lengths = [rs.minimum + u * (rs.gap[0] - rs.minimum), rs.gap[1] + extra]
    else:
        lengths = [rs.minimum + extra]
    for l_o in lengths:
        check_plan(plan(a, b, 1.0, l_o), a, b, 1.0, l_o)


def test_gap_lengths_are_unreachable_in_random_complement_pairs():
    rng = np.random.default_rng(11)
    seen = 0
    while seen < 20:
        a = OrientedPoint(*rng.uniform(-2, 2, 2), rng.uniform(0, 2 * math.pi))
        try:
            rs = reachable_lengths(a, EX1_B, 1.0)
        except GapInversionError:
            continue
        if rs.gap is None:
            continue
        seen += 1
        with pytest.raises(UnreachableLengthError):
            plan(a, EX1_B, 1.0, 0.5 * sum(rs.gap))
