"""Deterministic synthetic scenes for tests and demos."""
from __future__ import annotations

import numpy as np

from .video_io import VideoSequence


def smooth_field(height: int, width: int, sigma: float = 4.0, contrast: float = 40.0,
                 seed: int = 0, mean: float = 128.0, lo: int = 12, hi: int = 243) -> np.ndarray:
    """Gaussian-blurred white noise scaled to ``mean +- contrast`` (uint8, periodic)."""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((height, width))
    fy = np.fft.fftfreq(height)[:, None]
    fx = np.fft.fftfreq(width)[None, :]
    gain = np.exp(-2.0 * (np.pi * sigma) ** 2 * (fx * fx + fy * fy))
    x = np.real(np.fft.ifft2(np.fft.fft2(noise) * gain))
    x = (x - x.mean()) / x.std()
    return np.clip(np.round(mean + contrast * x), lo, hi).astype(np.uint8)


def shifted_pair(canvas: np.ndarray, height: int, width: int, vx: int, vy: int, margin: int):
    """(cur, ref) crops of ``canvas`` with ``cur[y, x] == ref[y - vy, x - vx]``."""
    ref = canvas[margin:margin + height, margin:margin + width]
    cur = canvas[margin - vy:margin - vy + height, margin - vx:margin - vx + width]
    return cur.copy(), ref.copy()


def panning_sequence(canvas: np.ndarray, height: int, width: int, frames: int,
                     velocity: tuple[float, float] = (1.0, 0.5), flicker: float = 0.0,
                     noise: float = 0.0, seed: int = 0) -> VideoSequence:
    """Camera pan over ``canvas`` with integer-rounded motion, optional flicker and noise.

    ``flicker`` adds a brightness offset of that many levels on every fourth
    frame, loosely imitating flash illumination.
    """
    rng = np.random.default_rng(seed)
    vx, vy = velocity
    planes = []
    for t in range(frames):
        x0 = int(round(t * vx)) % (canvas.shape[1] - width)
        y0 = int(round(t * vy)) % (canvas.shape[0] - height)
        f = canvas[y0:y0 + height, x0:x0 + width].astype(np.float64)
        if flicker and t % 4 == 3:
            f = f + flicker
        if noise:
            f = f + rng.normal(0.0, noise, f.shape)
        planes.append(np.clip(np.round(f), 0, 255).astype(np.uint8))
    return VideoSequence.from_array(np.stack(planes))


def static_sequence(plane: np.ndarray, frames: int) -> VideoSequence:
    return VideoSequence.from_array(np.repeat(plane[None], frames, axis=0))
