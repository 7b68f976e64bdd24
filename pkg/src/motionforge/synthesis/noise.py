"""Shared initial noise: one seeded draw reused byte-identically for every frame.

Starting all frames of a video from the same noise tensor removes one source
of temporal inconsistency. The generator is pinned to PCG64 so a seed
reproduces the same bytes across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class NoiseBatch:
    frames: np.ndarray  # (N, *shape) float32
    seed: int

    @property
    def frame_count(self) -> int:
        return int(self.frames.shape[0])


def shared_noise_batch(seed: int, frame_count: int, shape: tuple[int, ...]) -> NoiseBatch:
    """Standard-normal noise of ``shape``, repeated for ``frame_count`` frames.

    Every frame is byte-identical to the first; the same seed yields the same
    bytes in any process.
    """
    if frame_count < 1:
        raise ValueError("frame_count must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    base = rng.standard_normal(shape, dtype=np.float32)
    frames = np.repeat(base[np.newaxis, ...], frame_count, axis=0)
    return NoiseBatch(frames=frames, seed=seed)
