import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from dter import BlockLoc, BoundsError, Frame, LossMap, ValidationError, pixel_at
from dter.core import ConfigError


def test_pixel_at_examples():
    f = Frame([10, 20, 30, 40], width=2, height=2)
    assert pixel_at(f, 1, 0) == 20
    assert pixel_at(f, 0, 0) == 10
    assert f.pixel_at(0, 1) == 30
    with pytest.raises(BoundsError):
        pixel_at(f, 2, 0)
    with pytest.raises(BoundsError):
        pixel_at(f, 0, -1)


@given(arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12))))
def test_frame_roundtrip(plane):
    h, w = plane.shape
    f = Frame(plane.ravel().tolist(), width=w, height=h)
    assert (f.width, f.height) == (w, h)
    got = [pixel_at(f, x, y) for y in range(h) for x in range(w)]
    assert got == plane.ravel().tolist()


def test_frame_rejects_bad_buffers():
    with pytest.raises(ConfigError):
        Frame([1, 2, 3], width=2, height=2)
    with pytest.raises(ConfigError):
        Frame(np.array([[0, 256]]))
    with pytest.raises(ConfigError):
        Frame(np.array([[-1, 0]]))


def test_frame_is_immutable():
    src = np.zeros((2, 2), np.uint8)
    f = Frame(src)
    src[0, 0] = 9
    assert f.pixel_at(0, 0) == 0
    with pytest.raises(ValueError):
        f.samples[0, 0] = 1


def test_lossmap_rejects_overlap_and_out_of_bounds():
    with pytest.raises(ValidationError):
        LossMap(1, frozenset({BlockLoc(0, 0), BlockLoc(8, 8)}))
    LossMap(1, frozenset({BlockLoc(0, 0), BlockLoc(16, 0)}))  # edge contact is fine
    with pytest.raises(ValidationError):
        LossMap(1, frozenset({BlockLoc(24, 0)})).validate(32, 32)
    with pytest.raises(ValidationError):
        LossMap(1, frozenset({BlockLoc(-1, 0)})).validate(32, 32)


@given(st.sets(st.tuples(st.integers(0, 40), st.integers(0, 40), st.integers(1, 12), st.integers(1, 12)), max_size=6))
def test_lossmap_overlap_rule_matches_brute_force(rects):
    canvas = np.zeros((60, 60), int)
    for x0, y0, w, h in rects:
        canvas[y0:y0 + h, x0:x0 + w] += 1
    blocks = frozenset(BlockLoc(*r) for r in rects)
    if canvas.max() > 1:
        with pytest.raises(ValidationError):
            LossMap(0, blocks)
    else:
        assert np.array_equal(LossMap(0, blocks).mask(60, 60), canvas.astype(bool))


def test_raster_order():
    m = LossMap(3, frozenset({BlockLoc(32, 0), BlockLoc(0, 16), BlockLoc(0, 0)}))
    assert m.ordered() == [BlockLoc(0, 0), BlockLoc(32, 0), BlockLoc(0, 16)]
