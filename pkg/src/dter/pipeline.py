"""Frame-by-frame concealment of a damaged sequence."""
from __future__ import annotations

import logging
from enum import Enum
from typing import Sequence

import numpy as np

from .core import Frame, LossMap, MotionVector, ValidationError
from .loss import maps_by_frame
from .metrics import ConcealmentReport, FrameRecord, PsnrMode, mse, psnr_from_mse
from .refine import BlockDiagnostics, RefinementParams, conceal_block_dter
from .temporal import (
    SearchParams,
    build_test_area,
    dmve_search,
    extrapolate_block,
    temporal_error,
)
from .video_io import VideoSequence

log = logging.getLogger(__name__)


class Algorithm(str, Enum):
    COPY = "copy"
    DMVE = "dmve"
    DTER = "dter"


class ContextMode(str, Enum):
    SEQUENTIAL = "sequential"
    INDEPENDENT = "independent"


def conceal_frame(cur: Frame, ref: Frame, lost: LossMap, algorithm: Algorithm | str = Algorithm.DTER,
                  sp: SearchParams = SearchParams(), rp: RefinementParams = RefinementParams(),
                  context: ContextMode | str = ContextMode.SEQUENTIAL):
    """Conceal every lost block of ``cur`` from ``ref``, in raster order.

    In sequential context mode the refinement window of a block may read
    blocks concealed earlier in the same frame; in independent mode every
    other lost block stays unreadable. Returns the concealed frame and one
    BlockDiagnostics per block (raster order).
    """
    algorithm, context = Algorithm(algorithm), ContextMode(context)
    lost.validate(cur.width, cur.height)
    work = np.array(cur.samples)
    mask = lost.mask(cur.width, cur.height)
    available = ~mask
    diags = []
    for block in lost.ordered():
        frame = Frame(work)
        if algorithm is Algorithm.DTER:
            samples, diag = conceal_block_dter(
                frame, ref, block, mask, sp, rp,
                available=available if context is ContextMode.SEQUENTIAL else None,
            )
        else:
            if algorithm is Algorithm.COPY:
                mv = MotionVector(0, 0)
            else:
                mv = dmve_search(frame, ref, block, mask, sp)
            samples = extrapolate_block(ref, block, mv)
            area = build_test_area(block, mask, cur.width, cur.height, rp.d_width)
            e_d = None if area.empty else temporal_error(frame, ref, area, mv)
            diag = BlockDiagnostics(mv, e_d, None)
        work[block.slices] = samples
        if context is ContextMode.SEQUENTIAL:
            available[block.slices] = True
        diags.append(diag)
    return Frame(work), diags


def conceal_sequence(damaged: VideoSequence, maps: Sequence[LossMap],
                     algorithm: Algorithm | str = Algorithm.DTER,
                     sp: SearchParams = SearchParams(), rp: RefinementParams = RefinementParams(),
                     context: ContextMode | str = ContextMode.SEQUENTIAL):
    """Conceal a damaged sequence in temporal order.

    Each frame is concealed from the previous *output* frame, so concealment
    errors propagate the way they would in a decoder.
    """
    per_frame = maps_by_frame(maps, damaged.frame_count)
    if per_frame and len(per_frame[0]):
        raise ValidationError("frame 0 has losses but no reference frame to conceal from")
    out = [damaged[0]] if damaged.frame_count else []
    diags: list[list[BlockDiagnostics]] = [[]] if damaged.frame_count else []
    for t in range(1, damaged.frame_count):
        frame, d = conceal_frame(damaged[t], out[t - 1], per_frame[t], algorithm, sp, rp, context)
        out.append(frame)
        diags.append(d)
        log.debug("frame %d: %d blocks concealed", t, len(d))
    return VideoSequence(tuple(out), damaged.width, damaged.height), diags


def _mean(values):
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


def build_report(orig: VideoSequence, concealed: VideoSequence, diags, algorithm: str,
                 psnr_mode: PsnrMode | str = PsnrMode.MEAN_OF_FRAMES, label: str = "",
                 cap_db: float = 100.0) -> ConcealmentReport:
    records = []
    for t, (a, b, d) in enumerate(zip(orig, concealed, diags)):
        m = mse(a, b)
        records.append(
            FrameRecord(
                frame_index=t,
                psnr_db=psnr_from_mse(m, cap_db),
                blocks_concealed=len(d),
                mean_eD=_mean(x.e_d for x in d),
                mean_h=_mean(x.h for x in d),
                mean_mv_magnitude=_mean(x.mv.magnitude for x in d),
                mse=m,
            )
        )
    return ConcealmentReport(str(getattr(algorithm, "value", algorithm)), records,
                             PsnrMode(psnr_mode), cap_db, label)
