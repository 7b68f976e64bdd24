"""Temporal-quality metrics over frame sequences.

Temporal flickering follows the mean-absolute-difference recipe: the MAD over
consecutive frame pairs is subtracted from 255 and normalized to [0, 1], so
identical frames score 1 and full-range alternation scores 0. It is computed
over full frames by default; pass a boolean mask to restrict it to static
regions. The motion-smoothness proxy reconstructs every odd-indexed frame as
the pixel-wise average of its neighbors and scores the reconstruction error the
same way; it stands in for interpolation-model-based smoothness scoring, which
needs a pretrained video interpolator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class MetricReport:
    flicker: float
    smoothness_proxy: float | None  # None when N < 3
    per_frame_flicker: tuple[float, ...]  # one value per consecutive pair, N-1
    per_frame_smoothness: tuple[float, ...]  # one value per odd index, floor((N-1)/2)
    frame_count: int
    clip_score: float | None = None  # reserved for an external scorer

    def to_json_dict(self) -> dict:
        return {
            "flicker": self.flicker,
            "smoothness_proxy": self.smoothness_proxy,
            "per_frame": {
                "flicker": list(self.per_frame_flicker),
                "smoothness_proxy": list(self.per_frame_smoothness),
            },
            "frame_count": self.frame_count,
            "clip_score": self.clip_score,
        }


def to_gray(frame: np.ndarray) -> np.ndarray:
    """8-bit grayscale; color is converted by integer-rounded BT.601 luma."""
    if frame.dtype != np.uint8:
        raise MetricError("frames must be uint8")
    if frame.ndim == 2:
        return frame
    if frame.ndim == 3 and frame.shape[2] == 3:
        r, g, b = (frame[..., i].astype(np.int64) for i in range(3))
        return ((299 * r + 587 * g + 114 * b + 500) // 1000).astype(np.uint8)
    raise MetricError(f"unsupported frame shape {frame.shape}")


def _gray_stack(frames, minimum: int) -> np.ndarray:
    if len(frames) < minimum:
        raise MetricError(f"need at least {minimum} frames, got {len(frames)}")
    grays = [to_gray(np.asarray(f)) for f in frames]
    shape = grays[0].shape
    for i, g in enumerate(grays):
        if g.shape != shape:
            raise MetricError(f"frame {i} has shape {g.shape}, expected {shape}")
    return np.stack(grays)


def _masked_mean(diff: np.ndarray, mask: np.ndarray | None) -> float:
    # exact integer-sum path: values are small enough that the float sum is exact
    if mask is None:
        return float(diff.sum()) / diff.size
    if mask.shape != diff.shape:
        raise MetricError(f"mask shape {mask.shape} does not match frames {diff.shape}")
    count = int(mask.sum())
    if count == 0:
        raise MetricError("mask selects no pixels")
    return float(diff[mask].sum()) / count


def temporal_flickering(frames, mask: np.ndarray | None = None) -> float:
    """(255 - mean absolute difference across consecutive frames) / 255."""
    stack = _gray_stack(frames, minimum=2).astype(np.int64)
    pair_mads = [
        _masked_mean(np.abs(stack[i + 1] - stack[i]), mask)
        for i in range(len(stack) - 1)
    ]
    mad = math.fsum(pair_mads) / len(pair_mads)
    return (255.0 - mad) / 255.0


def flicker_per_transition(frames, mask: np.ndarray | None = None) -> list[float]:
    stack = _gray_stack(frames, minimum=2).astype(np.int64)
    return [
        (255.0 - _masked_mean(np.abs(stack[i + 1] - stack[i]), mask)) / 255.0
        for i in range(len(stack) - 1)
    ]


def motion_smoothness_proxy(frames) -> float:
    """Midpoint-reconstruction score: hold out each odd frame, predict it as the
    average of its neighbors, and score the mean absolute error like flicker."""
    values = smoothness_per_midpoint(frames)
    return math.fsum(values) / len(values)


def smoothness_per_midpoint(frames) -> list[float]:
    stack = _gray_stack(frames, minimum=3).astype(np.float64)
    n = len(stack)
    values = []
    for i in range(1, n - 1, 2):
        midpoint = (stack[i - 1] + stack[i + 1]) / 2.0
        err = float(np.abs(midpoint - stack[i]).sum()) / stack[i].size
        values.append((255.0 - err) / 255.0)
    return values


def evaluate(frames, mask: np.ndarray | None = None) -> MetricReport:
    """Full metric report over a frame sequence (uint8, gray or RGB)."""
    per_flicker = flicker_per_transition(frames, mask)
    per_smooth = smoothness_per_midpoint(frames) if len(frames) >= 3 else []
    smoothness = (math.fsum(per_smooth) / len(per_smooth)) if per_smooth else None
    return MetricReport(
        flicker=math.fsum(per_flicker) / len(per_flicker),
        smoothness_proxy=smoothness,
        per_frame_flicker=tuple(per_flicker),
        per_frame_smoothness=tuple(per_smooth),
        frame_count=len(frames),
    )


def write_metrics(report: MetricReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")


def clip_score_via_http(frames, prompt: str, base_url: str, session=None,
                        timeout_s: float = 120.0) -> float:
    """Optional hook: score prompt/frame alignment through an external service.

    Wire contract, POST ``{base_url}/score``: ``{"prompt": str, "frames":
    [{"shape", "dtype", "data"}...]}`` (tensors encoded as in the denoiser
    backend contract) -> ``{"clip_score": float}``. Nothing in the pipeline
    requires this; it exists so a real scorer can be plugged in.
    """
    import requests

    from .synthesis.backends import encode_tensor

    session = session if session is not None else requests.Session()
    grays = [to_gray(np.asarray(f)).astype(np.float32) / 255.0 for f in frames]
    body = {"prompt": prompt, "frames": [encode_tensor(g) for g in grays]}
    resp = session.post(f"{base_url.rstrip('/')}/score", json=body, timeout=timeout_s)
    if resp.status_code != 200:
        raise MetricError(f"external scorer returned HTTP {resp.status_code}")
    try:
        return float(resp.json()["clip_score"])
    except (ValueError, KeyError, TypeError) as e:
        raise MetricError(f"malformed scorer response: {e}") from e
