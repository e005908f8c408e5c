import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dter import (
    BlockLoc, BoundsError, Frame, LossMap, MotionVector, SearchParams,
    build_test_area, checkerboard_pattern, dmve_search, extrapolate_block, temporal_error,
)
from dter.synthetic import shifted_pair, smooth_field
from dter.temporal import band_cost

BLOCK = BlockLoc(32, 32, 16, 16)


def _lost(block=BLOCK):
    return LossMap(1, frozenset({block}))


def _shift_scene(canvas, vx, vy, size=80):
    cur, ref = shifted_pair(canvas, size, size, vx, vy, margin=40)
    damaged = cur.copy()
    damaged[BLOCK.slices] = 0
    return cur, Frame(damaged), Frame(ref)


def test_static_scene_gives_zero_vector(texture):
    f = Frame(texture[:80, :80])
    mv = dmve_search(f, f, BLOCK, _lost())
    assert (mv.vx, mv.vy, mv.cost, mv.valid) == (0, 0, 0.0, True)


def test_flat_reference_tie_break():
    f = Frame(np.full((80, 80), 128, np.uint8))
    assert dmve_search(f, f, BLOCK, _lost())[:3] == (0, 0, 0.0)


def test_recovers_synthetic_shift(texture):
    cur, damaged, ref = _shift_scene(texture, 3, -2)
    mv = dmve_search(damaged, ref, BLOCK, _lost())
    assert (mv.vx, mv.vy) == (3, -2) and mv.cost == 0.0
    assert np.array_equal(extrapolate_block(ref, BLOCK, mv), cur[BLOCK.slices])


def _brute_force(cur, ref, block, lost_mask, rng_, bw, metric):
    H, W = cur.shape
    best = None
    for vy in range(-rng_, rng_ + 1):
        for vx in range(-rng_, rng_ + 1):
            if not (0 <= block.x0 - vx and block.x1 - vx <= W and 0 <= block.y0 - vy and block.y1 - vy <= H):
                continue
            tot, n = 0, 0
            for y in range(block.y0 - bw, block.y1 + bw):
                for x in range(block.x0 - bw, block.x1 + bw):
                    if block.x0 <= x < block.x1 and block.y0 <= y < block.y1:
                        continue
                    if not (0 <= x < W and 0 <= y < H) or lost_mask[y, x]:
                        continue
                    rx, ry = x - vx, y - vy
                    if not (0 <= rx < W and 0 <= ry < H):
                        continue
                    d = int(cur[y, x]) - int(ref[ry, rx])
                    tot += abs(d) if metric == "sad" else d * d
                    n += 1
            if n == 0:
                continue
            key = (tot / n, abs(vx) + abs(vy), vy, vx)
            if best is None or key < best:
                best = key
    return best


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["ssd", "sad"]), st.integers(1, 3),
       st.integers(0, 5), st.integers(0, 16), st.integers(0, 16), st.booleans())
def test_search_matches_exhaustive_oracle(seed, metric, bw, rng_, bx, by, levels):
    r = np.random.default_rng(seed)
    hi = 3 if levels else 256  # few levels force many exact ties
    cur = r.integers(0, hi, (24, 24)).astype(np.uint8)
    ref = r.integers(0, hi, (24, 24)).astype(np.uint8)
    block = BlockLoc(bx, by, 8, 8)
    mask = np.zeros((24, 24), bool)
    mask[block.slices] = True
    mask[r.random((24, 24)) < 0.1] = True
    mv = dmve_search(Frame(cur), Frame(ref), block, mask, SearchParams(rng_, bw, metric))
    cost, _, vy, vx = _brute_force(cur, ref, block, mask, rng_, bw, metric)
    assert (mv.vx, mv.vy) == (vx, vy)
    assert mv.cost == pytest.approx(cost, rel=1e-12, abs=0)
    again = band_cost(Frame(cur), Frame(ref), *_band(block, mask, bw), mv.vx, mv.vy, metric)
    assert again == pytest.approx(mv.cost, rel=1e-12, abs=0)


def _band(block, mask, bw):
    xs, ys = [], []
    H, W = mask.shape
    for y in range(block.y0 - bw, block.y1 + bw):
        for x in range(block.x0 - bw, block.x1 + bw):
            inside = block.x0 <= x < block.x1 and block.y0 <= y < block.y1
            if not inside and 0 <= x < W and 0 <= y < H and not mask[y, x]:
                xs.append(x)
                ys.append(y)
    return np.array(xs), np.array(ys)


def test_no_comparable_samples_falls_back():
    # every band sample is lost
    f = Frame(np.zeros((16, 16), np.uint8))
    mv = dmve_search(f, f, BlockLoc(4, 4, 8, 8), np.ones((16, 16), bool))
    assert (mv.vx, mv.vy, mv.valid) == (0, 0, False)


@settings(max_examples=40, deadline=None)
@given(st.integers(-16, 16), st.integers(-16, 16))
def test_global_translation_recovery(texture, vx, vy):
    cur, damaged, ref = _shift_scene(texture, vx, vy)
    mv = dmve_search(damaged, ref, BLOCK, _lost())
    assert (mv.vx, mv.vy) == (vx, vy)
    area = build_test_area(BLOCK, _lost(), 80, 80, 8)
    assert temporal_error(damaged, ref, area, mv) == 0.0


def test_extrapolate_examples(rng):
    ref = Frame(rng.integers(0, 256, (12, 12), dtype=np.uint8))
    b = BlockLoc(2, 3, 4, 5)
    assert np.array_equal(extrapolate_block(ref, b, MotionVector(0, 0)), ref.samples[3:8, 2:6])
    one = extrapolate_block(ref, BlockLoc(5, 5, 1, 1), MotionVector(2, 0))
    assert one[0, 0] == ref.pixel_at(3, 5)
    with pytest.raises(BoundsError):
        extrapolate_block(ref, b, MotionVector(3, 0))


def test_test_area_sizes():
    assert len(build_test_area(BlockLoc(48, 48), _lost(BlockLoc(48, 48)), 112, 112, 8)) == 32**2 - 16**2
    assert len(build_test_area(BlockLoc(0, 0), _lost(BlockLoc(0, 0)), 112, 112, 8)) == 24**2 - 16**2


def test_test_area_checkerboard_enumerated():
    lm = checkerboard_pattern(112, 112, 2)[1]
    block = BlockLoc(48, 48)
    assert block in lm.lost_blocks
    lost = lm.mask(112, 112)
    expected = {
        (x, y)
        for y in range(40, 72)
        for x in range(40, 72)
        if not lost[y, x]
    }
    area = build_test_area(block, lm, 112, 112, 8)
    assert area.coords == expected
    assert len(area) == 768 - 4 * 64 == 512


def test_test_area_empty():
    lost = np.ones((16, 16), bool)
    assert build_test_area(BlockLoc(0, 0), lost, 16, 16, 8).empty


def test_temporal_error_examples(rng):
    cur = Frame(rng.integers(7, 256, (48, 48), dtype=np.uint8))
    area = build_test_area(BlockLoc(16, 16), _lost(BlockLoc(16, 16)), 48, 48, 8)
    assert temporal_error(cur, cur, area, MotionVector(0, 0)) == 0.0
    darker = Frame(cur.samples.astype(int) - 7)
    assert temporal_error(cur, darker, area, MotionVector(0, 0)) == 7.0


def test_temporal_error_oracle(rng):
    cur = rng.integers(0, 256, (30, 30), dtype=np.uint8)
    ref = rng.integers(0, 256, (30, 30), dtype=np.uint8)
    block = BlockLoc(11, 11, 8, 8)
    area = build_test_area(block, _lost(block), 30, 30, 8)
    for mv in [MotionVector(0, 0), MotionVector(3, -2), MotionVector(-5, 4)]:
        tot, n = 0.0, 0
        for y in range(3, 27):
            for x in range(3, 27):
                if 11 <= x < 19 and 11 <= y < 19:
                    continue
                rx, ry = x - mv.vx, y - mv.vy
                if 0 <= rx < 30 and 0 <= ry < 30:
                    tot += (float(cur[y, x]) - float(ref[ry, rx])) ** 2
                    n += 1
        got = temporal_error(Frame(cur), Frame(ref), area, mv)
        assert got == pytest.approx(math.sqrt(tot / n), rel=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(-4, 4))
def test_temporal_error_scales_linearly(seed, c):
    r = np.random.default_rng(seed)
    cur = r.integers(40, 216, (32, 32))
    resid = r.integers(-10, 11, (32, 32))
    block = BlockLoc(8, 8, 16, 16)
    area = build_test_area(block, _lost(block), 32, 32, 8)
    e1 = temporal_error(Frame(cur), Frame(cur - resid), area, MotionVector(0, 0))
    ec = temporal_error(Frame(cur), Frame(cur - c * resid), area, MotionVector(0, 0))
    assert ec >= 0
    assert ec == pytest.approx(abs(c) * e1, rel=1e-12, abs=1e-12)
