"""Checkerboard macroblock loss patterns and their application to video."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DEFAULT_BLOCK_SIZE, BlockLoc, ConfigError, LossMap, ValidationError
from .video_io import VideoSequence


@dataclass(frozen=True)
class PatternConfig:
    block_size: int = DEFAULT_BLOCK_SIZE
    first_lossy_frame: int = 1
    phase: int = 0
    per_frame_phase_alternation: bool = False

    def __post_init__(self):
        if self.block_size <= 0:
            raise ConfigError("block_size must be positive")
        if self.phase not in (0, 1):
            raise ConfigError("phase must be 0 or 1")
        if self.first_lossy_frame < 0:
            raise ConfigError("first_lossy_frame must be non-negative")


def checkerboard_pattern(width: int, height: int, frame_count: int,
                         cfg: PatternConfig = PatternConfig()) -> list[LossMap]:
    """Loss maps for every frame; grid cell (i, j) is lost iff (i + j) % 2 == phase.

    ``i`` is the block column and ``j`` the block row. Only complete blocks
    are ever marked lost, and frames before ``first_lossy_frame`` lose nothing.
    """
    bs = cfg.block_size
    if width < bs or height < bs:
        raise ConfigError(f"{width}x{height} frame is smaller than one {bs}x{bs} block")
    cols, rows = width // bs, height // bs
    maps = []
    for t in range(frame_count):
        if t < cfg.first_lossy_frame:
            maps.append(LossMap(t, frozenset()))
            continue
        phase = cfg.phase ^ (t & 1) if cfg.per_frame_phase_alternation else cfg.phase
        blocks = frozenset(
            BlockLoc(i * bs, j * bs, bs, bs)
            for j in range(rows)
            for i in range(cols)
            if (i + j) % 2 == phase
        )
        maps.append(LossMap(t, blocks))
    return maps


def maps_by_frame(maps: Sequence[LossMap], frame_count: int) -> list[LossMap]:
    """One LossMap per frame index, merging duplicates and filling gaps with empty maps."""
    out: dict[int, set] = {}
    for m in maps:
        if m.frame_index < 0 or m.frame_index >= frame_count:
            raise ValidationError(
                f"loss map for frame {m.frame_index} but sequence has {frame_count} frames"
            )
        out.setdefault(m.frame_index, set()).update(m.lost_blocks)
    return [LossMap(t, frozenset(out.get(t, ()))) for t in range(frame_count)]


def apply_loss(seq: VideoSequence, maps: Sequence[LossMap], fill: int = 0) -> VideoSequence:
    """Copy of ``seq`` with every lost block overwritten by ``fill``."""
    if not 0 <= fill <= 255:
        raise ConfigError("fill must be an 8-bit sample value")
    planes = seq.as_array().copy()
    for m in maps_by_frame(maps, seq.frame_count):
        m.validate(seq.width, seq.height)
        for b in m.lost_blocks:
            planes[(m.frame_index, *b.slices)] = fill
    return VideoSequence.from_array(planes) if len(planes) else seq
