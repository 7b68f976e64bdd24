"""Deterministic (DDIM-style) sampling of all frames of a video as one batch.

Every frame starts from the same initial noise and walks the same fixed step
schedule. With the toy backend the loop evaluates the denoiser twice per step
(with and without conditions) and blends the two estimates by the guidance
scale; frame 1 uses plain self attention while every later frame attends to
frame 1's features of the same step, recomputed in lockstep as the batch
advances. External backends receive one denoise call per frame per step and
handle guidance and frame coupling on their side.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..frames import ConditionSequence, FrameStack, write_frame_dir
from .attention import AttentionConfig, cross_frame_attention, first_frame_attention, self_attention
from .backends import BackendError, ToyBackend
from .noise import shared_noise_batch

# per-material attention mixing defaults: rigid, cloth, liquid
MATERIAL_ALPHA = {"rigid": 0.9, "cloth": 0.75, "liquid": 0.4}

ATTENTION_MODES = ("cross_frame", "first_frame", "self_only")
BACKENDS = ("toy", "external")


class SamplerError(RuntimeError):
    pass


@dataclass(frozen=True)
class SynthesisConfig:
    steps: int = 50
    guidance_scale: float = 7.5
    seed: int = 0
    alpha: float = MATERIAL_ALPHA["rigid"]
    backend: str = "toy"
    attention_mode: str = "cross_frame"
    edge_scale: float = 1.0
    depth_scale: float = 1.0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.guidance_scale < 1.0:
            raise ValueError("guidance_scale must be >= 1")
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError("alpha must be in [0, 1]")
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.attention_mode not in ATTENTION_MODES:
            raise ValueError(f"unknown attention mode {self.attention_mode!r}")


def alpha_for_material(material: str) -> float:
    try:
        return MATERIAL_ALPHA[material]
    except KeyError:
        raise ValueError(f"unknown material {material!r}; "
                         f"expected one of {sorted(MATERIAL_ALPHA)}") from None


def _alpha_bar(t: float) -> float:
    """Cosine signal-retention schedule: 1 at t=0 (clean), ~0 at t=1 (pure noise)."""
    return math.cos(t * math.pi / 2.0) ** 2


def _check_finite(x: np.ndarray, step: int, what: str) -> None:
    if not np.isfinite(x).all():
        raise SamplerError(f"step {step}: non-finite {what}")


def _toy_batch_estimate(backend: ToyBackend, x: np.ndarray, t: float,
                        conds: list, cfg: SynthesisConfig, step: int) -> np.ndarray:
    """Clean-frame estimates for the whole batch at one step and one branch.

    ``conds`` is a per-frame list of (edge, depth) pairs, or all None for the
    unconditioned branch. Frame 1's features are computed first; later frames
    couple to them through the configured attention variant.
    """
    attn_cfg = AttentionConfig(d=backend.projections.dim, alpha=cfg.alpha)
    first = backend.features(x[0], t, conds[0])
    x0 = np.empty_like(x)
    for i in range(x.shape[0]):
        try:
            if i == 0:
                attn = self_attention(first, backend.projections, attn_cfg)
            else:
                current = backend.features(x[i], t, conds[i])
                if cfg.attention_mode == "cross_frame":
                    attn = cross_frame_attention(first, current, backend.projections, attn_cfg)
                elif cfg.attention_mode == "first_frame":
                    attn = first_frame_attention(first, current, backend.projections, attn_cfg)
                else:
                    attn = self_attention(current, backend.projections, attn_cfg)
            x0[i] = backend.predict(x[i], t, conds[i], attn)
        except BackendError as e:
            raise SamplerError(f"step {step}, frame {i}: {e}") from e
    return x0


def sample_video(seq: ConditionSequence, cfg: SynthesisConfig, backend) -> FrameStack:
    """Run the full sampling loop and return N frames at condition resolution."""
    n = seq.frame_count
    w, h = seq.resolution
    edges = [f.astype(np.float64) / 255.0 for f in seq.edge_frames]
    depths = [f.astype(np.float64) / 255.0 for f in seq.depth_frames]

    x = shared_noise_batch(cfg.seed, n, (h, w)).frames.astype(np.float64)
    ts = np.linspace(1.0, 0.0, cfg.steps + 1)

    external = not isinstance(backend, ToyBackend) and hasattr(backend, "denoise")

    for k in range(cfg.steps):
        t, t_next = float(ts[k]), float(ts[k + 1])
        if external:
            x0 = np.empty_like(x)
            for i in range(n):
                try:
                    x0[i] = backend.denoise(
                        latents=x[i].astype(np.float32), step=k, timestep=t,
                        edge=edges[i].astype(np.float32),
                        depth=depths[i].astype(np.float32),
                        guidance_scale=cfg.guidance_scale)
                except BackendError as e:
                    raise SamplerError(f"step {k}, frame {i}: {e}") from e
        else:
            conds = [(edges[i], depths[i]) for i in range(n)]
            x0_cond = _toy_batch_estimate(backend, x, t, conds, cfg, k)
            x0_uncond = _toy_batch_estimate(backend, x, t, [None] * n, cfg, k)
            s = cfg.guidance_scale
            x0 = (1.0 - s) * x0_uncond + s * x0_cond
        _check_finite(x0, k, "denoiser output")

        abar_t, abar_next = _alpha_bar(t), _alpha_bar(t_next)
        eps = (x - math.sqrt(abar_t) * x0) / math.sqrt(1.0 - abar_t)
        x = math.sqrt(abar_next) * x0 + math.sqrt(1.0 - abar_next) * eps
        _check_finite(x, k, "latents")

    return FrameStack(np.clip(x, 0.0, 1.0).astype(np.float32))


def write_run_record(stack: FrameStack, cfg: SynthesisConfig, out_dir: str | Path,
                     digests: dict | None = None) -> Path:
    """Write frame_%04d.png plus run.json (full config and input digests)."""
    out = Path(out_dir)
    write_frame_dir(stack, out)
    record = {
        "config": asdict(cfg),
        "digests": digests or {},
        "frame_count": stack.frame_count,
    }
    path = out / "run.json"
    path.write_text(json.dumps(record, indent=2, sort_keys=True), encoding="utf-8")
    return path
