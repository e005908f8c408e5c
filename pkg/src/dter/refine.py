"""Adaptive Non-Local-Means refinement of temporally extrapolated blocks.

The lost block's temporal estimate (area B) and the received samples around
it (area A) form a working window L. Each B sample is replaced, in spiral
order from the margin inward, by a weighted average over all of L where the
weights decay exponentially with the mean squared patch difference. Refined
values are written back immediately and act as context for later samples.
The averaging strength ``h`` is set per block from how well the block's
motion vector explains the received test area around it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from numba import njit

from .core import BlockLoc, ConfigError, DterError, Frame, MotionVector, lost_mask
from .temporal import (
    SearchParams,
    build_test_area,
    dmve_search,
    extrapolate_block,
    temporal_error,
)

OUTSIDE = 0
KNOWN = 1
ESTIMATE = 2


@dataclass(frozen=True)
class RefinementParams:
    d_m: int = 6
    eta: float = 5.0
    a: int = 12
    d_width: int = 8

    def __post_init__(self):
        if self.d_m < 0 or self.eta < 0 or self.a < 0:
            raise ConfigError("d_m, eta and a must be non-negative")
        if self.d_width < 1:
            raise ConfigError("d_width must be >= 1")


@dataclass(frozen=True, eq=False)
class ProcessingArea:
    """Working window around one lost block.

    ``s`` and ``mask`` are indexed ``[row, col]``; points passed to the
    functions below are ``(col, row)`` pairs in window coordinates.
    ``origin`` is the frame position ``(x, y)`` of ``s[0, 0]``.
    """

    s: np.ndarray
    mask: np.ndarray
    origin: tuple[int, int]
    b_rect: BlockLoc

    @classmethod
    def from_frame(cls, cur: Frame | np.ndarray, available: np.ndarray, block: BlockLoc,
                   estimate: np.ndarray, border: int = 12) -> "ProcessingArea":
        """Build L around ``block``.

        ``available`` flags the samples of ``cur`` that may be read (received
        or already concealed). Positions beyond the frame or not available
        are labeled OUTSIDE; their value in ``s`` is never used.
        """
        plane = cur.samples if isinstance(cur, Frame) else np.asarray(cur)
        height, width = plane.shape
        estimate = np.asarray(estimate)
        if estimate.shape != (block.h, block.w):
            raise ConfigError(f"estimate shape {estimate.shape} does not match block {tuple(block)}")
        ox, oy = block.x0 - border, block.y0 - border
        lh, lw = block.h + 2 * border, block.w + 2 * border
        s = np.zeros((lh, lw), dtype=np.float64)
        mask = np.full((lh, lw), OUTSIDE, dtype=np.int8)

        xa, xb = max(ox, 0), min(ox + lw, width)
        ya, yb = max(oy, 0), min(oy + lh, height)
        win = (slice(ya - oy, yb - oy), slice(xa - ox, xb - ox))
        avail = available[ya:yb, xa:xb]
        s[win] = np.where(avail, plane[ya:yb, xa:xb], 0)
        mask[win] = np.where(avail, KNOWN, OUTSIDE)

        b_rect = BlockLoc(border, border, block.w, block.h)
        s[b_rect.slices] = estimate
        mask[b_rect.slices] = ESTIMATE
        return cls(s, mask, (ox, oy), b_rect)

    @property
    def valid(self) -> np.ndarray:
        return self.mask != OUTSIDE

    def block_values(self) -> np.ndarray:
        return self.s[self.b_rect.slices].copy()

    def block_samples(self) -> np.ndarray:
        """B rounded half away from zero and clamped to 8 bit."""
        return round_clamp(self.s[self.b_rect.slices])

    def copy(self) -> "ProcessingArea":
        return replace(self, s=self.s.copy(), mask=self.mask.copy())


def round_clamp(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    return np.clip(np.sign(v) * np.floor(np.abs(v) + 0.5), 0, 255).astype(np.uint8)


def adaptive_h(e_d: float | None, eta: float) -> float:
    """Linear e_D -> h map with offset ``eta``; None (no test area) gives 0."""
    if e_d is None or (isinstance(e_d, float) and math.isnan(e_d)):
        return 0.0
    return float(e_d - eta) if e_d > eta else 0.0


def spiral_order(b_rect: BlockLoc) -> list[tuple[int, int]]:
    """Clockwise spiral over the rectangle, outer ring first, from its top-left corner.

    Returns ``(col, row)`` points in the rectangle's own coordinate frame
    (offset by ``b_rect.x0, b_rect.y0``).
    """
    if b_rect.w <= 0 or b_rect.h <= 0:
        raise ConfigError("spiral_order needs a non-empty rectangle")
    left, top = b_rect.x0, b_rect.y0
    right, bottom = b_rect.x1 - 1, b_rect.y1 - 1
    out = []
    while left <= right and top <= bottom:
        out.extend((c, top) for c in range(left, right + 1))
        out.extend((right, r) for r in range(top + 1, bottom + 1))
        if top < bottom:
            out.extend((c, bottom) for c in range(right - 1, left - 1, -1))
        if left < right:
            out.extend((left, r) for r in range(bottom - 1, top, -1))
        left, top, right, bottom = left + 1, top + 1, right - 1, bottom - 1
    return out


def raster_order(b_rect: BlockLoc) -> list[tuple[int, int]]:
    return [(c, r) for r in range(b_rect.y0, b_rect.y1) for c in range(b_rect.x0, b_rect.x1)]


@njit(cache=True)
def _distance(s, valid, pr, pc, qr, qc, dm):
    rows, cols = s.shape
    r_lo = max(-dm, -pr, -qr)
    r_hi = min(dm, rows - 1 - pr, rows - 1 - qr)
    c_lo = max(-dm, -pc, -qc)
    c_hi = min(dm, cols - 1 - pc, cols - 1 - qc)
    acc = 0.0
    n = 0
    for a in range(r_lo, r_hi + 1):
        for b in range(c_lo, c_hi + 1):
            if valid[pr + a, pc + b] and valid[qr + a, qc + b]:
                d = s[pr + a, pc + b] - s[qr + a, qc + b]
                acc += d * d
                n += 1
    return acc / n


@njit(cache=True)
def _distances_from(sp, vp, width, k, dm, acc, cnt, box):
    # sp/vp: s and the valid mask padded by dm (one extra row at the bottom)
    # and flattened with row length `width`, so each patch offset is a
    # contiguous slice and out-of-window samples carry weight 0.
    # acc/cnt hold one entry per padded column of the unpadded rows.
    # box[i] counts valid samples in the patch of candidate i; when the
    # target patch is fully valid that is exactly the overlap count.
    n = acc.shape[0]
    full = True
    for a in range(-dm, dm + 1):
        for b in range(-dm, dm + 1):
            if vp[k + a * width + b] == 0.0:
                full = False
    acc[:] = 0.0
    if full:
        cnt[:] = box
    else:
        cnt[:] = 0.0
    for a in range(-dm, dm + 1):
        for b in range(-dm, dm + 1):
            kk = k + a * width + b
            if vp[kk] == 0.0:
                continue
            x = sp[kk]
            off = (dm + a) * width + dm + b
            srow = sp[off:off + n]
            vrow = vp[off:off + n]
            if full:
                for i in range(n):
                    d = x - srow[i]
                    acc[i] += vrow[i] * d * d
            else:
                for i in range(n):
                    d = x - srow[i]
                    acc[i] += vrow[i] * d * d
                    cnt[i] += vrow[i]


@njit(cache=True)
def _refine_padded(sp, vp, width, rows, cols, pr, pc, h2, dm, acc, cnt, box):
    _distances_from(sp, vp, width, (pr + dm) * width + pc + dm, dm, acc, cnt, box)
    num = 0.0
    den = 0.0
    for qr in range(rows):
        for qc in range(cols):
            kq = (qr + dm) * width + qc + dm
            if vp[kq] != 0.0:
                i = qr * width + qc
                w = math.exp(-(acc[i] / cnt[i]) / h2)
                num += w * sp[kq]
                den += w
    return num / den


@njit(cache=True)
def _refine_sequence(sp, vp, width, rows, cols, prs, pcs, h2, dm, acc, cnt, box):
    for i in range(prs.shape[0]):
        v = _refine_padded(sp, vp, width, rows, cols, prs[i], pcs[i], h2, dm, acc, cnt, box)
        sp[(prs[i] + dm) * width + pcs[i] + dm] = v


class _Padded(NamedTuple):
    sp: np.ndarray
    vp: np.ndarray
    width: int
    rows: int
    cols: int
    acc: np.ndarray
    cnt: np.ndarray
    box: np.ndarray

    @classmethod
    def of(cls, area: "ProcessingArea", dm: int) -> "_Padded":
        rows, cols = area.s.shape
        pad = ((dm, dm + 1), (dm, dm))
        valid = np.pad(area.valid.astype(np.float64), pad)
        width = cols + 2 * dm
        # valid samples in the (2dm+1)^2 patch around every unpadded position
        integral = np.zeros((valid.shape[0] + 1, width + 1))
        integral[1:, 1:] = valid.cumsum(0).cumsum(1)
        k = 2 * dm + 1
        box = np.zeros((rows, width))
        box[:, :cols] = (integral[k:k + rows, k:k + cols] - integral[:rows, k:k + cols]
                         - integral[k:k + rows, :cols] + integral[:rows, :cols])
        sp = np.pad(area.s, pad).ravel()
        return cls(sp, valid.ravel(), width, rows, cols,
                   np.empty(rows * width), np.empty(rows * width), box.ravel())

    def unpadded(self, dm: int) -> np.ndarray:
        full = self.sp.reshape(-1, self.width)
        return full[dm:dm + self.rows, dm:dm + self.cols]

    def args(self):
        return self.sp, self.vp, self.width, self.rows, self.cols


def _check_point(area: ProcessingArea, p):
    c, r = p
    if not (0 <= r < area.s.shape[0] and 0 <= c < area.s.shape[1]) or area.mask[r, c] == OUTSIDE:
        raise DterError(f"point {p} is not inside the processing area")


def neighborhood_distance(area: ProcessingArea, p, q, d_m: int) -> float:
    """Mean squared difference between the patches around ``p`` and ``q``.

    Only offsets where both patch samples are inside L contribute, and the
    mean is taken over those offsets.
    """
    _check_point(area, p)
    _check_point(area, q)
    return _distance(area.s, area.valid, p[1], p[0], q[1], q[0], int(d_m))


def nlm_weight(d: float, h: float) -> float:
    if h <= 0:
        raise DterError("nlm_weight needs h > 0; h == 0 means no refinement")
    return math.exp(-d / (h * h))


def refine_sample(area: ProcessingArea, p, h: float, d_m: int) -> float:
    """Weighted average over every non-OUTSIDE sample of L, ``p`` included."""
    _check_point(area, p)
    if h <= 0:
        raise DterError("refine_sample needs h > 0")
    dm = int(d_m)
    pd = _Padded.of(area, dm)
    return _refine_padded(*pd.args(), p[1], p[0], float(h) ** 2, dm, pd.acc, pd.cnt, pd.box)


def refine_block(area: ProcessingArea, params: RefinementParams, h: float,
                 order: list[tuple[int, int]] | None = None) -> ProcessingArea:
    """Refine every B sample in place-order; returns a new area, ``area`` is untouched.

    ``order`` defaults to the spiral scan; passing another permutation of B
    is only meant for comparisons.
    """
    out = area.copy()
    if h <= 0:
        return out
    pts = np.asarray(spiral_order(area.b_rect) if order is None else order, dtype=np.int64)
    dm = int(params.d_m)
    pd = _Padded.of(out, dm)
    _refine_sequence(*pd.args(), pts[:, 1].copy(), pts[:, 0].copy(), float(h) ** 2, dm,
                     pd.acc, pd.cnt, pd.box)
    out.s[...] = pd.unpadded(dm)
    return out


class BlockDiagnostics(NamedTuple):
    mv: MotionVector
    e_d: float | None
    h: float | None


def conceal_block_dter(cur: Frame, ref: Frame, block: BlockLoc, lost,
                       sp: SearchParams = SearchParams(), rp: RefinementParams = RefinementParams(),
                       available: np.ndarray | None = None) -> tuple[np.ndarray, BlockDiagnostics]:
    """Temporal estimate plus adaptive NLM refinement for one lost block.

    ``lost`` marks the lost samples of ``cur``; motion search and the test
    area only see received samples. ``available`` widens what L may read,
    e.g. blocks already concealed earlier in the same frame; by default it
    is just the received samples.
    """
    mask = lost_mask(lost, cur.width, cur.height)
    mv = dmve_search(cur, ref, block, mask, sp)
    estimate = extrapolate_block(ref, block, mv)
    area = build_test_area(block, mask, cur.width, cur.height, rp.d_width)
    e_d = None if area.empty else temporal_error(cur, ref, area, mv)
    h = adaptive_h(e_d, rp.eta)
    if h == 0:
        return estimate, BlockDiagnostics(mv, e_d, h)
    if available is None:
        available = ~mask
    pa = ProcessingArea.from_frame(cur, available, block, estimate, rp.a)
    return refine_block(pa, rp, h).block_samples(), BlockDiagnostics(mv, e_d, h)
