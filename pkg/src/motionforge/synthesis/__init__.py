"""Video synthesis mechanisms: attention variants, control-residual combination,
shared initial noise, denoiser backends, and the deterministic sampling loop."""

from .attention import (  # noqa: F401
    AttentionConfig,
    AttentionError,
    FrameFeature,
    ProjectionSet,
    cross_frame_attention,
    first_frame_attention,
    self_attention,
)
from .noise import NoiseBatch, shared_noise_batch  # noqa: F401
from .residuals import ResidualError, ResidualStack, combine_control_residuals  # noqa: F401
from .sampler import SamplerError, SynthesisConfig, sample_video  # noqa: F401
