import io
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intrudersim.engine import (DT, INTRUDER_MODE, TRACE_COLUMNS, Simulator, integrate,
                                intruder_step, read_trace, run, tick_time, write_trace)
from intrudersim.geometry import BodyGeometry, Pose, Vec2
from intrudersim.nav import WheelCommand
from intrudersim.scenario import load_scenario, shipped_scenario

from oracles import euler_pose

GEOM = BodyGeometry()


def scenario(extra="", robots='  - {id: "1", x: 5, y: 5}\n', bounds="[0, 0, 10, 10]"):
    return load_scenario(f"world: {{bounds: {bounds}}}\nrobots:\n{robots}{extra}")


def test_integrate_straight():
    p = integrate(Pose(0, 0, 0), WheelCommand(2.62, 2.62), GEOM, 0.064)
    assert p.x == pytest.approx(0.0975 * 2.62 * 0.064, abs=1e-15)  # 0.0163488
    assert p.y == 0 and p.heading == 0


def test_integrate_spin_in_place():
    p = integrate(Pose(1, 2, 0), WheelCommand(-1.0, 1.0), GEOM, 0.064)
    assert (p.x, p.y) == pytest.approx((1, 2), abs=1e-15)
    assert p.heading == pytest.approx(2 * 0.0975 / 0.33 * 0.064)


def test_integrate_search_spin_pivots_on_left_wheel():
    p = integrate(Pose(0, 0, 0), WheelCommand(0.0, 2.62), GEOM, 0.064)
    v, w = 0.0975 * 2.62 / 2, 0.0975 * 2.62 / 0.33
    assert p.heading == pytest.approx(w * 0.064)
    assert math.hypot(p.x, p.y - 0.165) == pytest.approx(0.165)  # circle about the left wheel
    assert v / w == pytest.approx(0.165)


@pytest.mark.parametrize("cmd", [(3.12, 2.12), (2.12, 3.12), (0.0, 2.62), (5.24, 0.0)])
def test_integrate_matches_fine_euler(cmd):
    p = integrate(Pose(0.3, -0.2, 0.7), WheelCommand(*cmd), GEOM, 0.064)
    ref = euler_pose(0.3, -0.2, 0.7, *cmd, GEOM.wheel_radius, GEOM.axle_track, 0.064)
    assert np.allclose((p.x, p.y), ref[:2], atol=1e-6)
    assert math.remainder(p.heading - ref[2], 2 * math.pi) == pytest.approx(0, abs=1e-9)


@settings(max_examples=50)
@given(st.floats(-5.24, 5.24), st.floats(-5.24, 5.24), st.floats(-math.pi, math.pi))
def test_integrate_composes(left, right, th):
    # two half steps along the same arc land where one full step does
    cmd = WheelCommand(left, right)
    half = integrate(integrate(Pose(0, 0, th), cmd, GEOM, 0.032), cmd, GEOM, 0.032)
    full = integrate(Pose(0, 0, th), cmd, GEOM, 0.064)
    assert (half.x, half.y) == pytest.approx((full.x, full.y), abs=1e-12)


def test_integrate_rejects_bad_dt():
    with pytest.raises(ValueError):
        integrate(Pose(0, 0, 0), WheelCommand(1, 1), GEOM, 0.0)


WPS = ((0.0, Vec2(0, 0)), (1.0, Vec2(0, 0)), (5.0, Vec2(0.65, 0)), (9.0, Vec2(1.05, 0)),
       (13.0, Vec2(1.45, 0)))


@pytest.mark.parametrize("t, x", [(0.0, 0.0), (0.5, 0.0), (3.0, 0.325), (5.0, 0.65),
                                  (7.0, 0.85), (13.0, 1.45), (20.0, 1.45)])
def test_intruder_step(t, x):
    p = intruder_step(WPS, t)
    assert p.x == pytest.approx(x, abs=1e-12) and p.y == 0


def test_intruder_step_heading_and_single_waypoint():
    wps = ((0.0, Vec2(0, 0)), (2.0, Vec2(0, 2)))
    assert intruder_step(wps, 1.0).heading == pytest.approx(math.pi / 2)
    assert intruder_step(((0.0, Vec2(3, 4)),), 10.0) == Pose(3, 4, 0)
    with pytest.raises(ValueError):
        intruder_step(wps, -0.1)


def test_time_is_exact_multiple_of_step():
    assert DT == Fraction(8, 125)
    assert tick_time(625) == 40.0 and tick_time(1) == 0.064
    assert tick_time(937) == float(Fraction(937 * 64, 1000))


def test_open_space_without_target_spins():
    (rec,) = Simulator(scenario()).step()
    assert rec.mode == "SearchSpin" and (rec.cmd_left, rec.cmd_right) == (0.0, 2.62)
    assert rec.chosen_color == "none" and rec.left_pixels == rec.right_pixels == 0


def test_corridor_start_is_nav():
    sim = Simulator(shipped_scenario("corridor"))
    (rec,) = sim.step()
    assert rec.mode == "Nav" and rec.chosen_color == "none"
    assert rec.blue_min_range == rec.green_min_range == 10.0
    assert rec.d_left < 5 and rec.d_right < 5


def test_close_intruder_stops_robot():
    s = scenario("intruders:\n  - {color: blue, waypoints: [[0, 6.8, 5]]}\n")
    sim = Simulator(s)
    (rec,) = sim.step()
    assert rec.mode == "Stopped" and rec.left_pixels + rec.right_pixels > 3000
    assert rec.chosen_color == "blue" and rec.blue_min_range == pytest.approx(1.6, abs=0.01)
    assert sim.state.robots[0].pose == Pose(5, 5, 0)  # stopped means no displacement


def test_visible_intruder_is_followed():
    s = scenario("intruders:\n  - {color: green, waypoints: [[0, 8.5, 5.5]]}\n")
    (rec,) = Simulator(s).step()
    assert rec.mode == "Follow" and rec.chosen_color == "green"
    assert rec.left_pixels > rec.right_pixels and rec.cmd_left < rec.cmd_right


def test_obstacle_takes_precedence_over_target():
    s = scenario("obstacles:\n  - {kind: box, center: [5.9, 5], size: [0.4, 3]}\n"
                 "intruders:\n  - {color: blue, waypoints: [[0, 8.5, 5]]}\n")
    (rec,) = Simulator(s).step()
    assert rec.mode == "Nav" and rec.left_pixels == 0


def test_trace_shape_and_determinism():
    s = shipped_scenario("follow")
    a, b = run(s), run(s)
    n_ticks = int(16 / 0.064)
    assert len(a) == n_ticks * 2 and len(a.intruders) == n_ticks
    assert a.to_csv() == b.to_csv()
    assert [r.tick for r in a.robot("3")] == list(range(n_ticks))


def test_zero_duration_gives_empty_trace():
    t = run(shipped_scenario("corridor").with_duration(0))
    assert len(t) == 0 and t.to_csv().strip() == ",".join(TRACE_COLUMNS)


def test_corridor_never_touches():
    t = run(shipped_scenario("corridor").with_duration(10))
    assert len(t) == 156
    assert min(r.clearance for r in t.records) > 0 and not t.collisions


def test_motion_is_clamped_at_contact():
    s = scenario(robots='  - {id: "1", x: 9.5, y: 5}\n', bounds="[0, 0, 10, 10]")
    sim = Simulator(s)
    for _ in range(40):
        sim.step()
    assert sim.trace.collisions
    assert all(r.clearance >= 0 for r in sim.trace.records)


def test_csv_round_trip():
    t = run(shipped_scenario("follow").with_duration(1))
    text = t.to_csv()
    lines = text.splitlines()
    assert lines[0] == ",".join(TRACE_COLUMNS)
    assert sum(INTRUDER_MODE in ln for ln in lines) == len(t.intruders)
    back = read_trace(io.StringIO(text))
    assert len(back) == len(t) and len(back.intruders) == len(t.intruders)
    for a, b in zip(back.records, t.records):
        assert a.robot_id == b.robot_id and a.mode == b.mode
        assert a.x == pytest.approx(b.x, rel=1e-5)
    buf = io.StringIO()
    write_trace(back, buf)
    assert buf.getvalue() == text


def test_read_trace_rejects_foreign_csv():
    with pytest.raises(ValueError):
        read_trace(io.StringIO("a,b,c\n1,2,3\n"))
