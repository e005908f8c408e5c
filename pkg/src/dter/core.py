"""Value types shared by every stage of the concealment pipeline.

Coordinates follow one convention everywhere: ``x`` is the column, ``y`` the
row, origin at the top-left sample. Arrays are indexed ``[y, x]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

DEFAULT_BLOCK_SIZE = 16


class DterError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(DterError, ValueError):
    """Inconsistent dimensions or parameters."""


class ValidationError(DterError, ValueError):
    """Malformed loss maps or other invalid input data."""


class BoundsError(DterError, IndexError):
    """A coordinate falls outside a frame."""


class Frame:
    """One 8-bit luminance plane.

    The sample buffer is copied on construction and made read-only, so a
    ``Frame`` can be shared freely.
    """

    __slots__ = ("_samples",)

    def __init__(self, samples, width: int | None = None, height: int | None = None):
        arr = np.asarray(samples)
        if arr.ndim == 1:
            if width is None or height is None:
                raise ConfigError("flat sample buffer needs width and height")
            if arr.size != width * height:
                raise ConfigError(
                    f"sample buffer has {arr.size} values, expected {width}x{height}"
                )
            arr = arr.reshape(height, width)
        elif arr.ndim != 2:
            raise ConfigError(f"expected a 2-D luma plane, got shape {arr.shape}")
        elif width is not None and height is not None and arr.shape != (height, width):
            raise ConfigError(f"plane shape {arr.shape} does not match {width}x{height}")
        if arr.dtype != np.uint8:
            if np.any(arr < 0) or np.any(arr > 255):
                raise ConfigError("samples must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.flags.writeable = False
        self._samples = arr

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def width(self) -> int:
        return self._samples.shape[1]

    @property
    def height(self) -> int:
        return self._samples.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self._samples.shape

    def pixel_at(self, x: int, y: int) -> int:
        return pixel_at(self, x, y)

    def to_bytes(self) -> bytes:
        return self._samples.tobytes()

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return np.array_equal(self._samples, other._samples)

    def __repr__(self):
        return f"Frame({self.width}x{self.height})"


def pixel_at(frame: Frame, x: int, y: int) -> int:
    if not (0 <= x < frame.width and 0 <= y < frame.height):
        raise BoundsError(f"({x}, {y}) outside {frame.width}x{frame.height} frame")
    return int(frame.samples[y, x])


class BlockLoc(NamedTuple):
    """Axis-aligned rectangle: left edge, top edge, width, height."""

    x0: int
    y0: int
    w: int = DEFAULT_BLOCK_SIZE
    h: int = DEFAULT_BLOCK_SIZE

    @property
    def x1(self) -> int:
        return self.x0 + self.w

    @property
    def y1(self) -> int:
        return self.y0 + self.h

    @property
    def slices(self) -> tuple[slice, slice]:
        """Row and column slices for indexing a ``[y, x]`` array."""
        return slice(self.y0, self.y1), slice(self.x0, self.x1)

    def inside(self, width: int, height: int) -> bool:
        return self.x0 >= 0 and self.y0 >= 0 and self.x1 <= width and self.y1 <= height

    def overlaps(self, other: "BlockLoc") -> bool:
        return (
            self.x0 < other.x1
            and other.x0 < self.x1
            and self.y0 < other.y1
            and other.y0 < self.y1
        )

    def raster_key(self) -> tuple[int, int]:
        return (self.y0, self.x0)


@dataclass(frozen=True)
class LossMap:
    """Lost blocks of one frame."""

    frame_index: int
    lost_blocks: frozenset[BlockLoc] = field(default_factory=frozenset)

    def __post_init__(self):
        blocks = frozenset(BlockLoc(*b) for b in self.lost_blocks)
        object.__setattr__(self, "lost_blocks", blocks)
        for b in blocks:
            if b.w <= 0 or b.h <= 0:
                raise ValidationError(f"block {tuple(b)} has non-positive size")
        ordered = self.ordered()
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                if b.y0 >= a.y1:
                    break
                if a.overlaps(b):
                    raise ValidationError(
                        f"frame {self.frame_index}: blocks {tuple(a)} and {tuple(b)} overlap"
                    )

    def ordered(self) -> list[BlockLoc]:
        """Blocks in raster order of ``(y0, x0)``."""
        return sorted(self.lost_blocks, key=BlockLoc.raster_key)

    def validate(self, width: int, height: int) -> "LossMap":
        for b in self.lost_blocks:
            if not b.inside(width, height):
                raise ValidationError(
                    f"frame {self.frame_index}: block {tuple(b)} outside {width}x{height} frame"
                )
        return self

    def mask(self, width: int, height: int) -> np.ndarray:
        """Boolean ``[y, x]`` array, True where a sample is lost."""
        m = np.zeros((height, width), dtype=bool)
        for b in self.lost_blocks:
            m[b.slices] = True
        return m

    def __len__(self):
        return len(self.lost_blocks)

    def __iter__(self):
        return iter(self.ordered())


def lost_mask(lost, width: int, height: int) -> np.ndarray:
    """Accept a LossMap, an iterable of blocks or a ready boolean mask."""
    if isinstance(lost, np.ndarray):
        if lost.shape != (height, width):
            raise ConfigError(f"loss mask shape {lost.shape} does not match {width}x{height}")
        return lost.astype(bool, copy=False)
    if lost is None:
        return np.zeros((height, width), dtype=bool)
    if not isinstance(lost, LossMap):
        lost = LossMap(-1, frozenset(lost))
    return lost.mask(width, height)


class MotionVector(NamedTuple):
    """Integer displacement into the reference frame.

    A block at ``(x, y)`` is predicted from reference sample ``(x - vx, y - vy)``.
    ``valid`` is False for the fallback vector returned when no candidate
    had a single comparable sample.
    """

    vx: int
    vy: int
    cost: float = 0.0
    valid: bool = True

    @property
    def magnitude(self) -> float:
        return float(np.hypot(self.vx, self.vy))
