"""Raw I420 video, loss-map text files and CSV reports."""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import BlockLoc, ConfigError, Frame, LossMap, ValidationError


@dataclass(frozen=True)
class VideoSequence:
    frames: tuple[Frame, ...]
    width: int
    height: int

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        for t, f in enumerate(self.frames):
            if (f.width, f.height) != (self.width, self.height):
                raise ConfigError(
                    f"frame {t} is {f.width}x{f.height}, sequence is {self.width}x{self.height}"
                )

    @classmethod
    def from_array(cls, planes) -> "VideoSequence":
        planes = np.asarray(planes)
        if planes.ndim != 3:
            raise ConfigError(f"expected (frames, height, width) array, got {planes.shape}")
        return cls(tuple(Frame(p) for p in planes), planes.shape[2], planes.shape[1])

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    def as_array(self) -> np.ndarray:
        if not self.frames:
            return np.zeros((0, self.height, self.width), dtype=np.uint8)
        return np.stack([f.samples for f in self.frames])

    def __len__(self):
        return len(self.frames)

    def __getitem__(self, t):
        return self.frames[t]

    def __iter__(self):
        return iter(self.frames)


def _frame_bytes(width: int, height: int) -> int:
    if width <= 0 or height <= 0 or width % 2 or height % 2:
        raise ConfigError(f"I420 needs positive even dimensions, got {width}x{height}")
    return width * height * 3 // 2


def read_yuv420(path, width: int, height: int, max_frames: int | None = None) -> VideoSequence:
    """Read the luma planes of a raw I420 file; chroma is skipped."""
    frame_bytes = _frame_bytes(width, height)
    luma = width * height
    size = os.path.getsize(path)
    available = size // frame_bytes
    if size % frame_bytes and (max_frames is None or max_frames > available):
        raise OSError(
            f"{path}: truncated I420 data, frame {available} has "
            f"{size % frame_bytes} of {frame_bytes} bytes"
        )
    count = available if max_frames is None else min(max_frames, available)
    frames = []
    with open(path, "rb") as fh:
        for t in range(count):
            buf = fh.read(frame_bytes)
            if len(buf) < frame_bytes:
                raise OSError(f"{path}: truncated I420 data at frame {t}")
            plane = np.frombuffer(buf, dtype=np.uint8, count=luma).reshape(height, width)
            frames.append(Frame(plane))
    return VideoSequence(tuple(frames), width, height)


def write_yuv420(seq: VideoSequence, source, path, truncate_source: bool = False) -> None:
    """Write ``seq`` as I420, taking chroma planes verbatim from ``source``.

    With ``truncate_source`` the source may hold more frames than ``seq``;
    only its leading frames are used.
    """
    frame_bytes = _frame_bytes(seq.width, seq.height)
    luma = seq.width * seq.height
    size = os.path.getsize(source)
    if size % frame_bytes:
        raise ConfigError(f"{source}: size {size} is not a multiple of the {seq.width}x{seq.height} frame size")
    src_frames = size // frame_bytes
    if src_frames != seq.frame_count and not (truncate_source and src_frames > seq.frame_count):
        raise ConfigError(
            f"sequence has {seq.frame_count} frames, source {source} has {src_frames}"
        )
    with open(source, "rb") as src, open(path, "wb") as out:
        for frame in seq.frames:
            buf = src.read(frame_bytes)
            out.write(frame.to_bytes())
            out.write(buf[luma:])


def write_loss_map(maps: Sequence[LossMap], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# frame_index x0 y0 w h\n")
        for m in sorted(maps, key=lambda m: m.frame_index):
            for b in m.ordered():
                fh.write(f"{m.frame_index} {b.x0} {b.y0} {b.w} {b.h}\n")


def parse_loss_map(text: str, width: int | None = None, height: int | None = None) -> list[LossMap]:
    """Parse loss-map text; see :func:`read_loss_map`."""
    per_frame: dict[int, list[tuple[int, BlockLoc]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise ValidationError(f"line {lineno}: expected 5 fields, got {len(fields)}")
        if not all(v.isascii() and v.isdigit() for v in fields):
            raise ValidationError(f"line {lineno}: fields must be non-negative integers: {line!r}")
        t, x0, y0, w, h = (int(v) for v in fields)
        if w == 0 or h == 0:
            raise ValidationError(f"line {lineno}: block size must be positive")
        block = BlockLoc(x0, y0, w, h)
        if width is not None and height is not None and not block.inside(width, height):
            raise ValidationError(f"line {lineno}: block {tuple(block)} outside {width}x{height} frame")
        entries = per_frame.setdefault(t, [])
        for other_line, other in entries:
            if block.overlaps(other):
                raise ValidationError(
                    f"line {lineno}: block {tuple(block)} overlaps line {other_line}"
                )
        entries.append((lineno, block))
    return [
        LossMap(t, frozenset(b for _, b in entries)) for t, entries in sorted(per_frame.items())
    ]


def read_loss_map(path, width: int | None = None, height: int | None = None) -> list[LossMap]:
    """Read ``frame_index x0 y0 w h`` lines, ``#`` starts a comment.

    Frame bounds are checked only when ``width`` and ``height`` are given.
    """
    with open(path, encoding="utf-8") as fh:
        return parse_loss_map(fh.read(), width, height)


def _fmt(value) -> str:
    return "" if value is None else f"{value:.6f}"


REPORT_HEADER = ("frame_index", "psnr_db", "blocks_concealed", "mean_eD", "mean_h")


def write_report_csv(report, path) -> None:
    """One row per frame, then a ``sequence:<mode>`` footer row."""
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for r in report.per_frame:
            writer.writerow(
                [r.frame_index, _fmt(r.psnr_db), r.blocks_concealed, _fmt(r.mean_eD), _fmt(r.mean_h)]
            )
        writer.writerow(
            [
                f"sequence:{report.psnr_mode}",
                _fmt(report.sequence_psnr_db),
                sum(r.blocks_concealed for r in report.per_frame),
                "",
                "",
            ]
        )


def read_report_csv(path) -> tuple[list[dict], dict]:
    """Rows and footer of a report written by :func:`write_report_csv`."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return rows[:-1], rows[-1]
