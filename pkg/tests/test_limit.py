"""Test the bridges, the Vervaat shift, jump reflections and the limit process."""

import numpy as np
import pytest

from pmaplab.core.errors import InvalidStructure, NonBridge, OutOfRange
from pmaplab.core.models import GridPathPayload
from pmaplab.core.prob import ThetaVector
from pmaplab.core.rng import RngStream
from pmaplab.joyal.functional import joyal_functional
from pmaplab.limit.bridge import (
    GridPath,
    _distinct_indices,
    bridge_exchangeable,
    brownian_bridge,
    jump_reflections,
    vervaat,
)
from pmaplab.limit.exploration import (
    LimitZ,
    excursion_subintervals,
    exploration_stages,
    grid_step_function,
    limit_basin_stats,
    limit_Z,
    local_time,
    marks_D,
    path_pseudo_distance,
)
from pmaplab.walks.step import StepFunction


@pytest.fixture
def six_step_z() -> LimitZ:
    """Rearrangement of the steps (1, 2, 3, 2, 1, 0) at u = 0.25."""
    f = StepFunction(np.full(6, 1 / 6), [1.0, 2.0, 3.0, 2.0, 1.0, 0.0])
    return LimitZ(output=joyal_functional(f, 0.25), u=0.25)


def test_brownian_bridge_pinned() -> None:
    """Test that the bridge starts and ends at zero."""
    bridge = brownian_bridge(256, RngStream(1))
    assert bridge.m == 256
    assert bridge.values[0] == 0.0
    assert bridge.values[-1] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(OutOfRange):
        brownian_bridge(1, RngStream(1))


def test_brownian_bridge_variance() -> None:
    """Test Var b(1/2) = 1/4 over independent bridges."""
    middles = [brownian_bridge(64, RngStream(2, k)).values[32] for k in range(4000)]
    assert np.var(middles) == pytest.approx(0.25, abs=0.025)


def test_distinct_indices() -> None:
    """Test that colliding jump indices move to free interior points."""
    assert list(_distinct_indices(np.array([3, 3, 3]), 4)) == [3, 1, 2]
    assert list(_distinct_indices(np.array([2, 5]), 8)) == [2, 5]


def test_bridge_exchangeable_jumps() -> None:
    """Test the pinned ends and the jumps of the exchangeable bridge."""
    theta = ThetaVector((0.5, 0.3))
    path = bridge_exchangeable(theta, 1024, RngStream(5))
    assert path.values[0] == 0.0 and path.values[-1] == 0.0
    assert len(path.jumps) == 2
    for index, size in path.jumps:
        assert 1 <= index <= 1023
        assert path.values[index] - path.values[index - 1] > size - 0.2


def test_grid_path_payload() -> None:
    """Test that a grid path survives its JSON snapshot, jumps included."""
    path = bridge_exchangeable(ThetaVector((0.5,)), 64, RngStream(8))
    payload = GridPathPayload.model_validate_json(path.to_payload().model_dump_json())
    assert payload.m == 64
    restored = GridPath.from_payload(payload)
    assert np.array_equal(restored.values, path.values)
    assert restored.jumps == path.jumps
    with pytest.raises(InvalidStructure):
        GridPath.from_payload(GridPathPayload(m=3, values=[0.0, 1.0, 0.0]))


def test_vervaat_example() -> None:
    """Test the cyclic shift at the leftmost minimum."""
    shifted = vervaat(GridPath([0.0, 0.5, -0.5, 0.25, 0.0], ((1, 0.5),)))
    assert list(shifted.values) == pytest.approx([0.0, 0.75, 0.5, 1.0, 0.0])
    assert shifted.s_min == 0.5
    assert shifted.jumps == ((3, 0.5),)
    with pytest.raises(NonBridge):
        vervaat(GridPath([0.0, 1.0, 2.0]))


def test_jump_reflection_example() -> None:
    """Test reflection of a single jump until the path returns to its pre-jump level."""
    path = GridPath([0.0, 0.5, 1.5, 0.8, 0.4, 0.0], ((2, 1.0),))
    reflection = jump_reflections(path)
    assert reflection.absorption == (4,)
    assert list(reflection.reflections[0]) == pytest.approx([0.0, 0.0, 1.0, 0.3, 0.0, 0.0])
    assert list(reflection.path.values) == pytest.approx([0.0, 0.5, 0.5, 0.5, 0.4, 0.0])


@pytest.mark.parametrize("thetas", [(), (0.6,), (0.5, 0.4)])
def test_exploration_stages(thetas: tuple[float, ...]) -> None:
    """Test that the height process is a nonnegative excursion."""
    stages = exploration_stages(ThetaVector(thetas), 1024, RngStream(3))
    assert stages.excursion.values.min() >= 0.0
    assert 0.0 <= stages.excursion.s_min < 1.0
    height = stages.height.values
    assert height[0] == 0.0 and height[-1] == pytest.approx(0.0, abs=1e-12)
    assert height.min() >= -1e-9
    assert len(stages.height.jumps) == len(thetas)


def test_grid_step_function() -> None:
    """Test the step function read off a grid path."""
    f = grid_step_function(GridPath([0.0, 1.0, 2.0, 0.0]))
    assert list(f.values) == [0.0, 1.0, 2.0]
    assert np.allclose(f.widths, 1 / 3)


def test_limit_z_marks() -> None:
    """Test that Z at a fixed time ends its last excursion at one."""
    height = exploration_stages(ThetaVector((0.5,)), 512, RngStream(4)).height
    z = limit_Z(height, RngStream(0), u=0.3)
    assert z.u == 0.3
    assert z.output.d[-1] == pytest.approx(1.0)
    assert list(z.output.heights) == sorted(z.output.heights)


def test_marks_d() -> None:
    """Test the marks D drawn with given uniforms."""
    ends = (1 / 6, 3 / 6, 1.0)
    assert marks_D(ends, RngStream(0), 1, uniforms=[0.2]) == (0.5,)
    assert marks_D(ends, RngStream(0), 5, uniforms=[0.0] * 5) == pytest.approx((1 / 6, 0.5, 1.0))
    drawn = marks_D(ends, RngStream(8), 10)
    assert drawn[-1] == 1.0 and list(drawn) == sorted(drawn)


def test_local_time_and_basin_stats(six_step_z: LimitZ) -> None:
    """Test the local time and the basin statistics of the six-step rearrangement."""
    ell = local_time(six_step_z)
    assert list(ell.values) == [0.0, 1.0, 2.0]
    assert np.allclose(ell.widths, [1 / 6, 2 / 6, 3 / 6])
    stats = limit_basin_stats(six_step_z, (1 / 6, 0.5))
    assert stats[0] == pytest.approx((1 / 6, 0.0))
    assert stats[1] == pytest.approx((1 / 3, 1.0))


def test_excursion_subintervals_and_distance() -> None:
    """Test excursions above a level and the tree pseudo-distance."""
    height = GridPath([0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 0.0])
    intervals = excursion_subintervals(height, 0, 6)
    assert len(intervals) == 2
    assert intervals[0] == pytest.approx((0.0, 4 / 6))
    assert intervals[1] == pytest.approx((4 / 6, 1.0))
    assert path_pseudo_distance(height, 1 / 6, 5 / 6) == pytest.approx(2.0)
    assert path_pseudo_distance(height, 2 / 6, 1 / 6) == pytest.approx(1.0)
