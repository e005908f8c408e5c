"""Temporal extrapolation of lost blocks from the preceding frame.

Motion is estimated decoder-side by boundary matching (DMVE): the received
band around a lost block is compared with the displaced band in the
reference frame over a full search window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import BlockLoc, BoundsError, ConfigError, Frame, MotionVector, lost_mask


class Metric(str, Enum):
    SAD = "sad"
    SSD = "ssd"


@dataclass(frozen=True)
class SearchParams:
    search_range: int = 16
    band_width: int = 2
    metric: Metric = Metric.SSD

    def __post_init__(self):
        metric = self.metric.value if isinstance(self.metric, Metric) else str(self.metric).lower()
        object.__setattr__(self, "metric", Metric(metric))
        if self.search_range < 0:
            raise ConfigError("search_range must be >= 0")
        if self.band_width < 1:
            raise ConfigError("band_width must be >= 1")


@dataclass(frozen=True, eq=False)
class TestArea:
    """Received samples around a lost block used to score its motion vector."""

    __test__ = False  # not a pytest class

    xs: np.ndarray
    ys: np.ndarray
    anchor: BlockLoc

    @property
    def coords(self) -> set[tuple[int, int]]:
        return set(zip(self.xs.tolist(), self.ys.tolist()))

    @property
    def empty(self) -> bool:
        return self.xs.size == 0

    def __len__(self):
        return int(self.xs.size)


def _ring(block: BlockLoc, width: int, height: int, lost: np.ndarray, ring: int):
    """Coordinates within ``ring`` samples of the block, clipped, received only."""
    xa, xb = max(block.x0 - ring, 0), min(block.x1 + ring, width)
    ya, yb = max(block.y0 - ring, 0), min(block.y1 + ring, height)
    ys, xs = np.mgrid[ya:yb, xa:xb]
    inside = (xs >= block.x0) & (xs < block.x1) & (ys >= block.y0) & (ys < block.y1)
    keep = ~inside & ~lost[ya:yb, xa:xb]
    return xs[keep], ys[keep]


def _check_block(block: BlockLoc, frame: Frame):
    if not block.inside(frame.width, frame.height):
        raise BoundsError(f"block {tuple(block)} outside {frame.width}x{frame.height} frame")


def candidate_vectors(block: BlockLoc, width: int, height: int, search_range: int):
    """All (vx, vy) whose displaced block stays inside the reference frame."""
    r = np.arange(-search_range, search_range + 1)
    vy, vx = np.meshgrid(r, r, indexing="ij")
    vx, vy = vx.ravel(), vy.ravel()
    ok = (
        (block.x0 - vx >= 0)
        & (block.x1 - vx <= width)
        & (block.y0 - vy >= 0)
        & (block.y1 - vy <= height)
    )
    return vx[ok], vy[ok]


def band_cost(cur: Frame, ref: Frame, xs, ys, vx: int, vy: int, metric=Metric.SSD):
    """Normalized matching cost of one candidate, or None if nothing is comparable."""
    rx, ry = xs - vx, ys - vy
    ok = (rx >= 0) & (rx < ref.width) & (ry >= 0) & (ry < ref.height)
    if not ok.any():
        return None
    diff = cur.samples[ys[ok], xs[ok]].astype(np.int64) - ref.samples[ry[ok], rx[ok]]
    err = np.abs(diff) if Metric(metric) is Metric.SAD else diff * diff
    return float(err.sum()) / int(ok.sum())


def dmve_search(cur: Frame, ref: Frame, block: BlockLoc, lost=None,
                p: SearchParams = SearchParams()) -> MotionVector:
    """Full-search boundary matching for one lost block.

    ``lost`` marks the lost samples of ``cur`` (LossMap, blocks or boolean
    mask); they never enter the cost. Ties go to the smallest ``|vx|+|vy|``,
    then the smallest ``vy``, then the smallest ``vx``.
    """
    if cur.shape != ref.shape:
        raise ConfigError("current and reference frames differ in size")
    _check_block(block, cur)
    mask = lost_mask(lost, cur.width, cur.height)
    bx, by = _ring(block, cur.width, cur.height, mask, p.band_width)
    vx, vy = candidate_vectors(block, cur.width, cur.height, p.search_range)

    rx = bx[None, :] - vx[:, None]
    ry = by[None, :] - vy[:, None]
    ok = (rx >= 0) & (rx < ref.width) & (ry >= 0) & (ry < ref.height)
    vals = ref.samples[np.where(ok, ry, 0), np.where(ok, rx, 0)].astype(np.int64)
    diff = cur.samples[by, bx].astype(np.int64)[None, :] - vals
    err = np.abs(diff) if p.metric is Metric.SAD else diff * diff
    total = np.where(ok, err, 0).sum(axis=1)
    count = ok.sum(axis=1)
    if not count.any():
        return MotionVector(0, 0, 0.0, valid=False)
    cost = np.full(vx.shape, np.inf)
    has = count > 0
    cost[has] = total[has] / count[has]
    best = np.lexsort((vx, vy, np.abs(vx) + np.abs(vy), cost))[0]
    return MotionVector(int(vx[best]), int(vy[best]), float(cost[best]))


def extrapolate_block(ref: Frame, block: BlockLoc, mv: MotionVector) -> np.ndarray:
    """Reference samples at ``(x - vx, y - vy)`` for every ``(x, y)`` in the block."""
    src = BlockLoc(block.x0 - mv.vx, block.y0 - mv.vy, block.w, block.h)
    if not src.inside(ref.width, ref.height):
        raise BoundsError(f"displaced block {tuple(src)} leaves the reference frame")
    return ref.samples[src.slices].copy()


def build_test_area(block: BlockLoc, lost, width: int, height: int, d_width: int = 8) -> TestArea:
    """Received samples within ``d_width`` of the block, clipped to the frame.

    May be empty; callers check :attr:`TestArea.empty`.
    """
    if d_width < 1:
        raise ConfigError("d_width must be >= 1")
    xs, ys = _ring(block, width, height, lost_mask(lost, width, height), d_width)
    return TestArea(xs, ys, block)


def temporal_error(cur: Frame, ref: Frame, area: TestArea, mv: MotionVector) -> float | None:
    """RMS difference over the test area between ``cur`` and the displaced ``ref``.

    Returns None when no test sample has a displaced counterpart inside ``ref``.
    """
    rx, ry = area.xs - mv.vx, area.ys - mv.vy
    ok = (rx >= 0) & (rx < ref.width) & (ry >= 0) & (ry < ref.height)
    n = int(ok.sum())
    if n == 0:
        return None
    diff = cur.samples[area.ys[ok], area.xs[ok]].astype(np.int64) - ref.samples[ry[ok], rx[ok]]
    return math.sqrt(float((diff * diff).sum()) / n)
