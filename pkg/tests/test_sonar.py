import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from intrudersim.geometry import Bodies, Pose, Rect, World, ray_cast, Vec2
from intrudersim.sonar import (MAX_SENSOR_VALUE, SonarLayout, SonarScan, distance_to_raw,
                               raw_to_distance, scan, scan_many)

from oracles import march_ray


def wall_at(x):
    """Infinite wall whose face is the line x = const (normal pointing -x)."""
    return Rect(x + 50.0, 0.0, 50.0, 1000.0)


def test_empty_world_reads_nothing():
    assert scan(World(), Pose(0, 0, 0)).raw == (0,) * 8


def test_wall_across_ten_degree_beam():
    # face placed so the +10 degree beam travels exactly 2.5 m
    world = World([wall_at(2.5 * math.cos(math.radians(10)))])
    s = scan(world, Pose(0, 0, 0))
    assert s.raw[3] == 512 and s.raw[4] == 512


def test_incidence_above_cutoff_is_silent():
    world = World([wall_at(2.0)])
    s = scan(world, Pose(0, 0, 0))
    # +/-50 degree beams meet the wall at 50 degrees incidence
    assert s.raw[1] == 0 and s.raw[6] == 0
    # +/-30 degree beams at 30 degrees incidence do return
    assert s.raw[2] == distance_to_raw(2.0 / math.cos(math.radians(30)))
    # the 90 degree beams run parallel to the wall
    assert s.raw[0] == 0 and s.raw[7] == 0


def test_beyond_range_is_silent():
    assert scan(World([wall_at(5.5)]), Pose(0, 0, 0)).raw == (0,) * 8


@pytest.mark.parametrize("raw, d", [(1024, 0.0), (0, 5.0), (512, 2.5)])
def test_raw_to_distance(raw, d):
    assert raw_to_distance(raw) == d


@pytest.mark.parametrize("d, raw", [(0.0, 1024), (2.5, 512), (4.999, 1), (5.0, 1)])
def test_distance_to_raw(d, raw):
    assert distance_to_raw(d) == raw


@pytest.mark.parametrize("bad", [-1, 1025])
def test_raw_out_of_range(bad):
    with pytest.raises(ValueError):
        raw_to_distance(bad)


@pytest.mark.parametrize("bad", [-0.01, 5.01])
def test_distance_out_of_range(bad):
    with pytest.raises(ValueError):
        distance_to_raw(bad)


def test_round_trip_grid():
    for d in np.linspace(0.0, 4.99, 10_000):
        assert abs(raw_to_distance(distance_to_raw(d)) - d) <= 5 / 1024 + 1e-12


def test_raw_to_distance_strictly_decreasing():
    vals = [raw_to_distance(r) for r in range(MAX_SENSOR_VALUE + 1)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_layout_defaults_and_validation():
    lay = SonarLayout()
    assert [round(math.degrees(b)) for b in lay.bearings] == [90, 50, 30, 10, -10, -30, -50, -90]
    assert lay.max_range == 5.0 and lay.incidence_cutoff == pytest.approx(math.pi / 4)
    with pytest.raises(ValueError):
        SonarLayout(bearings=tuple(reversed(lay.bearings)))
    with pytest.raises(ValueError):
        SonarLayout(incidence_cutoff=2.0)
    with pytest.raises(ValueError):
        SonarScan((0,) * 7)
    with pytest.raises(ValueError):
        SonarScan((2000,) + (0,) * 7)


def test_scan_deterministic_and_batch_agrees():
    world = World([wall_at(1.7), Rect(0, 2.0, 3.0, 0.2)])
    bodies = Bodies.from_lists([[0, 0], [0.5, -1.5]], [0.22, 0.22])
    poses = [Pose(0, 0, 0.3), Pose(0.5, -1.5, 1.2)]
    single = [scan(world, p, SonarLayout(), bodies, i) for i, p in enumerate(poses)]
    assert single == [scan(world, p, SonarLayout(), bodies, i) for i, p in enumerate(poses)]
    assert scan_many(world, poses, SonarLayout(), bodies, [0, 1]) == single


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-math.pi, math.pi))
def test_detected_return_is_a_real_surface(x, y, heading):
    rects = [Rect(3, 0, 0.5, 2.0), Rect(-2, 3, 1.0, 0.4)]
    world = World(rects)
    s = scan(world, Pose(x, y, heading))
    shapes = [((r.cx - r.hx, r.cy - r.hy), (r.cx + r.hx, r.cy + r.hy)) for r in rects]
    for raw, bearing in zip(s.raw, SonarLayout().bearings):
        if raw:
            ref = march_ray((x, y), heading + bearing, 5.0, shapes, [])
            assert ref is not None
            assert abs(raw_to_distance(raw) - ref) <= 5 / 1024 / 2 + 1e-9
