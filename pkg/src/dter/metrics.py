"""PSNR and per-sequence aggregation of concealment runs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .core import ConfigError, Frame

PEAK = 255.0
DEFAULT_CAP_DB = 100.0


class PsnrMode(str, Enum):
    MEAN_OF_FRAMES = "mean_of_frames"
    POOLED_MSE = "pooled_mse"


def mse(a: Frame | np.ndarray, b: Frame | np.ndarray) -> float:
    a = a.samples if isinstance(a, Frame) else np.asarray(a)
    b = b.samples if isinstance(b, Frame) else np.asarray(b)
    if a.shape != b.shape:
        raise ConfigError(f"shape mismatch: {a.shape} vs {b.shape}")
    d = a.astype(np.int64) - b.astype(np.int64)
    return float((d * d).sum()) / d.size


def psnr_from_mse(value: float, cap_db: float = DEFAULT_CAP_DB) -> float:
    if value == 0:
        return cap_db
    return 10.0 * math.log10(PEAK * PEAK / value)


def psnr_frame(a: Frame, b: Frame, cap_db: float = DEFAULT_CAP_DB) -> float:
    return psnr_from_mse(mse(a, b), cap_db)


def _frame_mses(orig, concealed) -> list[float]:
    if len(orig) != len(concealed):
        raise ConfigError(f"frame count mismatch: {len(orig)} vs {len(concealed)}")
    return [mse(a, b) for a, b in zip(orig, concealed)]


def aggregate_psnr(mses: Sequence[float], mode: PsnrMode | str = PsnrMode.MEAN_OF_FRAMES,
                   cap_db: float = DEFAULT_CAP_DB) -> float:
    """Sequence PSNR from per-frame MSEs (frames of equal size)."""
    mode = PsnrMode(mode)
    if not len(mses):
        raise ConfigError("no frames to aggregate")
    if mode is PsnrMode.MEAN_OF_FRAMES:
        return float(np.mean([psnr_from_mse(m, cap_db) for m in mses]))
    return psnr_from_mse(float(np.mean(mses)), cap_db)


def psnr_sequence(orig, concealed, mode: PsnrMode | str = PsnrMode.MEAN_OF_FRAMES,
                  cap_db: float = DEFAULT_CAP_DB) -> float:
    """Mean of per-frame PSNR, or PSNR of the MSE pooled over all frames."""
    return aggregate_psnr(_frame_mses(orig, concealed), mode, cap_db)


@dataclass(frozen=True)
class FrameRecord:
    frame_index: int
    psnr_db: float
    blocks_concealed: int = 0
    mean_eD: float | None = None
    mean_h: float | None = None
    mean_mv_magnitude: float | None = None
    mse: float = 0.0


@dataclass
class ConcealmentReport:
    algorithm: str
    per_frame: list[FrameRecord] = field(default_factory=list)
    psnr_mode: PsnrMode = PsnrMode.MEAN_OF_FRAMES
    cap_db: float = DEFAULT_CAP_DB
    label: str = ""

    def __post_init__(self):
        self.psnr_mode = PsnrMode(self.psnr_mode)
        indices = [r.frame_index for r in self.per_frame]
        if indices != sorted(set(indices)):
            raise ConfigError("per-frame records must be unique and in frame order")

    @property
    def sequence_psnr_db(self) -> float:
        return aggregate_psnr([r.mse for r in self.per_frame], self.psnr_mode, self.cap_db)

    def sequence_psnr(self, mode: PsnrMode | str) -> float:
        return aggregate_psnr([r.mse for r in self.per_frame], mode, self.cap_db)


def mean_gain(reports) -> float:
    """Mean over sequences of candidate minus baseline sequence PSNR.

    ``reports`` holds ``(label, baseline, candidate)`` triples where the two
    reports are ConcealmentReports or plain PSNR values in dB.
    """
    reports = list(reports)
    if not reports:
        raise ConfigError("no sequences to compare")
    gains = []
    for label, base, cand in reports:
        for rep in (base, cand):
            rep_label = getattr(rep, "label", "")
            if rep_label and rep_label != label:
                raise ConfigError(f"report for {rep_label!r} paired with sequence {label!r}")
        b = base.sequence_psnr_db if isinstance(base, ConcealmentReport) else float(base)
        c = cand.sequence_psnr_db if isinstance(cand, ConcealmentReport) else float(cand)
        gains.append(c - b)
    return float(np.mean(gains))
