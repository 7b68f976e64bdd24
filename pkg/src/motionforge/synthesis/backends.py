"""Denoiser backends for the sampling loop.

``ToyBackend`` is a small fixed-weight network (one attention block plus local
mixing of the two condition maps) meant to exercise interfaces and invariants,
not to produce good images. It exposes its feature extraction and projection
matrices so the sampler can couple every frame's attention to the first frame.

``ExternalBackend`` adapts an HTTP service that performs the whole denoise step
itself (including guidance). Wire contract, POST ``{base_url}/denoise``::

    {"step": int, "timestep": float, "guidance_scale": float,
     "latents": T, "edge_map": T, "depth_map": T}   ->   {"latents": T}

where ``T`` encodes one tensor bit-exactly: ``{"shape": [...], "dtype":
"float32", "data": <base64 of the raw little-endian float32 buffer, C order>}``.
"""

from __future__ import annotations

import base64

import numpy as np
import requests

from .attention import FrameFeature, ProjectionSet
from .residuals import ResidualStack, combine_control_residuals


class BackendError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Grid helpers (deterministic pooling/upsampling for arbitrary sizes)


def _bounds(size: int, cells: int) -> np.ndarray:
    return (np.arange(cells) * size) // cells


def block_pool(arr: np.ndarray, gh: int, gw: int) -> np.ndarray:
    """Mean over an (gh, gw) grid of near-equal rectangular blocks."""
    h, w = arr.shape
    rb, cb = _bounds(h, gh), _bounds(w, gw)
    sums = np.add.reduceat(np.add.reduceat(arr, rb, axis=0), cb, axis=1)
    rlen = np.diff(np.append(rb, h))
    clen = np.diff(np.append(cb, w))
    return sums / np.outer(rlen, clen)


def block_upsample(grid: np.ndarray, h: int, w: int) -> np.ndarray:
    """Nearest-block upsample, the exact adjoint layout of block_pool."""
    gh, gw = grid.shape
    rlen = np.diff(np.append(_bounds(h, gh), h))
    clen = np.diff(np.append(_bounds(w, gw), w))
    return np.repeat(np.repeat(grid, rlen, axis=0), clen, axis=1)


def box_blur3(arr: np.ndarray) -> np.ndarray:
    """3x3 box blur with edge replication; the backend's local mixing kernel."""
    padded = np.pad(arr, 1, mode="edge")
    out = np.zeros_like(arr, dtype=np.float64)
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            out += padded[dy:dy + arr.shape[0], dx:dx + arr.shape[1]]
    return out / 9.0


# ---------------------------------------------------------------------------
# Toy backend


class ToyBackend:
    """Fixed-weight denoiser predicting clean frames from noisy latents.

    All weights are drawn once from a pinned seed, so outputs are a pure
    function of (latents, timestep, conditions).
    """

    name = "toy"
    WEIGHT_SEED = 0x10E5EED

    def __init__(self, grid: tuple[int, int] = (8, 8), channels: int = 8,
                 edge_scale: float = 1.0, depth_scale: float = 1.0):
        self.grid = grid
        self.channels = channels
        self.edge_scale = edge_scale
        self.depth_scale = depth_scale
        rng = np.random.Generator(np.random.PCG64(self.WEIGHT_SEED))
        scale = 1.0 / np.sqrt(channels)
        # token embedding of [latent, control, pos_y, pos_x, t]
        self.W_embed = rng.standard_normal((5, channels)) * 0.5
        self.projections = ProjectionSet(
            W_Q=rng.standard_normal((channels, channels)) * scale,
            W_K=rng.standard_normal((channels, channels)) * scale,
            W_V=rng.standard_normal((channels, channels)) * scale,
        )
        self.w_out = rng.standard_normal(channels) * scale
        gh, gw = grid
        ys = (np.arange(gh) + 0.5) / gh
        xs = (np.arange(gw) + 0.5) / gw
        self._pos_y = np.repeat(ys, gw)
        self._pos_x = np.tile(xs, gh)

    def _control_map(self, cond, shape) -> np.ndarray:
        """Blurred, level-wise combination of the two condition maps."""
        if cond is None:
            return np.zeros(shape, dtype=np.float64)
        edge, depth = cond
        edge_stack = ResidualStack((box_blur3(edge),))
        depth_stack = ResidualStack((box_blur3(depth),))
        combined = combine_control_residuals(
            edge_stack, depth_stack, self.edge_scale, self.depth_scale)
        return combined.levels[0]

    def features(self, latent: np.ndarray, t: float, cond) -> FrameFeature:
        """Pooled grid tokens of the latent and its combined control map."""
        gh, gw = self.grid
        control = self._control_map(cond, latent.shape)
        cells = np.stack([
            block_pool(latent, gh, gw).ravel(),
            block_pool(control, gh, gw).ravel(),
            self._pos_y,
            self._pos_x,
            np.full(gh * gw, t, dtype=np.float64),
        ], axis=1)
        return FrameFeature(np.tanh(cells @ self.W_embed))

    def predict(self, latent: np.ndarray, t: float, cond,
                attn: FrameFeature) -> np.ndarray:
        """Clean-frame estimate in [0, 1] from latent, conditions and attention."""
        h, w = latent.shape
        a = block_upsample((attn.tokens @ self.w_out).reshape(self.grid), h, w)
        control = self._control_map(cond, latent.shape)
        # zero-mean control keeps the guidance blend from saturating the output
        control = control - control.mean()
        logits = 0.15 * latent + 1.2 * control + 0.8 * a + 0.2 * (0.5 - t)
        return 1.0 / (1.0 + np.exp(-logits))


# ---------------------------------------------------------------------------
# External backend


def encode_tensor(arr: np.ndarray) -> dict:
    data = np.ascontiguousarray(arr, dtype="<f4")
    return {
        "shape": list(data.shape),
        "dtype": "float32",
        "data": base64.b64encode(data.tobytes()).decode("ascii"),
    }


def decode_tensor(doc: dict) -> np.ndarray:
    if doc.get("dtype") != "float32":
        raise BackendError(f"unsupported tensor dtype {doc.get('dtype')!r}")
    raw = base64.b64decode(doc["data"])
    arr = np.frombuffer(raw, dtype="<f4")
    try:
        return arr.reshape(doc["shape"]).copy()
    except ValueError as e:
        raise BackendError(f"tensor payload does not match shape: {e}") from e


class ExternalBackend:
    """Adapter for a remote denoiser service; guidance happens server-side."""

    name = "external"

    def __init__(self, base_url: str, session=None, timeout_s: float = 120.0):
        self.base_url = base_url.rstrip("/")
        self.session = session if session is not None else requests.Session()
        self.timeout_s = timeout_s

    def denoise(self, latents: np.ndarray, step: int, timestep: float,
                edge: np.ndarray, depth: np.ndarray,
                guidance_scale: float) -> np.ndarray:
        body = {
            "step": step,
            "timestep": timestep,
            "guidance_scale": guidance_scale,
            "latents": encode_tensor(latents),
            "edge_map": encode_tensor(edge),
            "depth_map": encode_tensor(depth),
        }
        try:
            resp = self.session.post(f"{self.base_url}/denoise", json=body,
                                     timeout=self.timeout_s)
        except requests.RequestException as e:
            raise BackendError(f"denoise request failed: {e}") from e
        if resp.status_code != 200:
            raise BackendError(f"denoise returned HTTP {resp.status_code}")
        try:
            out = decode_tensor(resp.json()["latents"])
        except (ValueError, KeyError, TypeError) as e:
            raise BackendError(f"malformed denoise response: {e}") from e
        if out.shape != latents.shape:
            raise BackendError(
                f"denoise shape mismatch: sent {latents.shape}, got {out.shape}")
        return out
