import pytest
from hypothesis import assume, given, strategies as st

from intrudersim.nav import ControllerParams
from intrudersim.perception import Color, ColorSighting, SegmentationResult
from intrudersim.pursuit import PursuitMode, pursuit_command, select_target

P = ControllerParams()


def seg(blue=(0, 0, 10.0), green=(0, 0, 10.0)):
    return SegmentationResult(ColorSighting(*blue), ColorSighting(*green))


@pytest.mark.parametrize("b, g, expected", [
    (6.05, 6.55, Color.BLUE),
    (6.35, 5.05, Color.GREEN),
    (4.0, 4.0, Color.BLUE),  # exact tie
])
def test_select_target(b, g, expected):
    assert select_target(seg((5, 5, b), (5, 5, g))).color is expected


def test_nothing_seen_is_no_target():
    c = select_target(seg())
    assert c.color is None and c.left_pixels == c.right_pixels == 0 and c.chosen_range == 10.0
    d = pursuit_command(seg())
    assert d.mode is PursuitMode.SEARCH_SPIN and d.command == pytest.approx((0.0, 2.62))


def test_follow_turns_toward_heavier_half():
    d = pursuit_command(seg(blue=(400, 300, 4.0)))
    assert d.mode is PursuitMode.FOLLOW and d.total_pixels == 700
    assert d.command == pytest.approx((2.12, 3.12))
    d = pursuit_command(seg(green=(300, 400, 4.0)))
    assert d.command == pytest.approx((3.12, 2.12))
    d = pursuit_command(seg(green=(350, 350, 4.0)))
    assert d.command == pytest.approx((2.62, 2.62))


def test_search_spin_below_ten_pixels():
    d = pursuit_command(seg(blue=(5, 0, 8.0)))
    assert d.mode is PursuitMode.SEARCH_SPIN and d.command == pytest.approx((0.0, 2.62))


def test_stop_above_three_thousand():
    d = pursuit_command(seg(blue=(1700, 1500, 1.7)))
    assert d.mode is PursuitMode.STOPPED and d.command == (0.0, 0.0)


@pytest.mark.parametrize("total, mode", [(9, PursuitMode.SEARCH_SPIN), (10, PursuitMode.FOLLOW),
                                         (3000, PursuitMode.FOLLOW), (3001, PursuitMode.STOPPED)])
def test_threshold_edges(total, mode):
    assert pursuit_command(seg(blue=(total, 0, 3.0))).mode is mode


sighting = st.tuples(st.integers(0, 5000), st.integers(0, 5000), st.floats(0.5, 10.0))


@given(sighting, sighting)
def test_color_swap_equivariance(b, g):
    assume(b[2] != g[2])
    a = select_target(seg(b, g))
    swapped = select_target(seg(g, b))
    assert {a.color, swapped.color} == {Color.BLUE, Color.GREEN}
    assert a.chosen_range == min(b[2], g[2])


@given(sighting, sighting)
def test_decision_invariants(b, g):
    d = pursuit_command(seg(b, g))
    assert d.total_pixels == d.choice.left_pixels + d.choice.right_pixels
    assert d.choice.chosen_range <= P.range_max
    if d.mode is PursuitMode.STOPPED:
        assert d.command == (0, 0) and d.total_pixels > P.pixel_stop
    elif d.mode is PursuitMode.SEARCH_SPIN:
        assert d.command == (0, P.base_speed) and d.total_pixels < P.pixel_search
    else:
        assert P.pixel_search <= d.total_pixels <= P.pixel_stop
        left, right = d.choice.left_pixels, d.choice.right_pixels
        if left > right:
            assert d.command.left < d.command.right
        elif left < right:
            assert d.command.left > d.command.right
