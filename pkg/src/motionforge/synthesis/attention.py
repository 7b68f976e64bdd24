"""Scaled dot-product attention and its cross-frame variants.

Conventions: token matrices are (n, c) rows; projections are bias-free (c, d)
matrices applied as ``F @ W``. Cross-frame attention keeps each frame's queries
but draws keys and values from the first frame concatenated with the current
one along the token axis, with the current frame's key block scaled by alpha
before projection. Because projections carry no bias, pre-projection scaling
equals post-projection scaling; the concatenation form is implemented as
written. First-frame attention is the ablation where keys and values come from
the first frame only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class AttentionError(ValueError):
    pass


@dataclass(frozen=True)
class FrameFeature:
    tokens: np.ndarray  # (n, c) float

    def __post_init__(self):
        t = self.tokens
        if t.ndim != 2 or t.shape[0] < 1 or t.shape[1] < 1:
            raise AttentionError(f"tokens must be (n, c) with n, c >= 1, got {t.shape}")
        if not np.isfinite(t).all():
            raise AttentionError("tokens contain non-finite values")

    @property
    def token_count(self) -> int:
        return int(self.tokens.shape[0])

    @property
    def channels(self) -> int:
        return int(self.tokens.shape[1])


@dataclass(frozen=True)
class ProjectionSet:
    W_Q: np.ndarray  # (c, d)
    W_K: np.ndarray  # (c, d)
    W_V: np.ndarray  # (c, d)

    def __post_init__(self):
        shapes = {m.shape for m in (self.W_Q, self.W_K, self.W_V)}
        if any(m.ndim != 2 for m in (self.W_Q, self.W_K, self.W_V)) or len(shapes) != 1:
            raise AttentionError("W_Q, W_K, W_V must share one (c, d) shape")
        for m in (self.W_Q, self.W_K, self.W_V):
            if not np.isfinite(m).all():
                raise AttentionError("projection weights contain non-finite values")

    @property
    def channels(self) -> int:
        return int(self.W_Q.shape[0])

    @property
    def dim(self) -> int:
        return int(self.W_Q.shape[1])


@dataclass(frozen=True)
class AttentionConfig:
    d: int  # softmax scaling dimension, equals the projection column count
    alpha: float = 1.0

    def __post_init__(self):
        if self.d < 1:
            raise AttentionError("d must be a positive integer")
        if not (0.0 <= self.alpha <= 1.0):
            raise AttentionError(f"alpha must be in [0, 1], got {self.alpha}")


def _check(feature: FrameFeature, proj: ProjectionSet, cfg: AttentionConfig) -> None:
    if feature.channels != proj.channels:
        raise AttentionError(
            f"channel mismatch: tokens have {feature.channels}, projections expect "
            f"{proj.channels}")
    if cfg.d != proj.dim:
        raise AttentionError(
            f"config d={cfg.d} does not match projection dim {proj.dim}")


def softmax_rows(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _attend(Q: np.ndarray, K: np.ndarray, V: np.ndarray, d: int) -> np.ndarray:
    weights = softmax_rows(Q @ K.T / math.sqrt(d))
    return weights @ V


def self_attention(feature: FrameFeature, proj: ProjectionSet,
                   cfg: AttentionConfig) -> FrameFeature:
    """Softmax(Q K^T / sqrt(d)) V with Q, K, V projected from one frame."""
    _check(feature, proj, cfg)
    F = feature.tokens
    out = _attend(F @ proj.W_Q, F @ proj.W_K, F @ proj.W_V, cfg.d)
    return FrameFeature(out)


def cross_frame_attention(first: FrameFeature, current: FrameFeature,
                          proj: ProjectionSet, cfg: AttentionConfig) -> FrameFeature:
    """Queries from the current frame; keys/values over [first, current].

    The key block concatenates the first frame with the alpha-scaled current
    frame before projection; the value block concatenates them unscaled. Token
    counts may differ between the two frames.
    """
    _check(first, proj, cfg)
    _check(current, proj, cfg)
    F1, Fi = first.tokens, current.tokens
    Q = Fi @ proj.W_Q
    K = np.concatenate([F1, cfg.alpha * Fi], axis=0) @ proj.W_K
    V = np.concatenate([F1, Fi], axis=0) @ proj.W_V
    return FrameFeature(_attend(Q, K, V, cfg.d))


def first_frame_attention(first: FrameFeature, current: FrameFeature,
                          proj: ProjectionSet, cfg: AttentionConfig) -> FrameFeature:
    """Ablation: queries from the current frame, keys/values from the first only."""
    _check(first, proj, cfg)
    _check(current, proj, cfg)
    Q = current.tokens @ proj.W_Q
    K = first.tokens @ proj.W_K
    V = first.tokens @ proj.W_V
    return FrameFeature(_attend(Q, K, V, cfg.d))
