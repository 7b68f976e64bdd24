"""Image containers and PNG file layout shared across the pipeline.

Condition directories hold ``edge_%04d.png`` and ``depth_%04d.png`` (1-based,
8-bit grayscale) plus a ``manifest.json`` with at least ``frames`` and
``resolution``. Synthesized videos are written as ``frame_%04d.png``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image


class SequenceError(ValueError):
    pass


def save_grayscale_png(array: np.ndarray, path: str | Path) -> None:
    if array.dtype != np.uint8 or array.ndim != 2:
        raise SequenceError("expected a 2-D uint8 array")
    Image.fromarray(array, mode="L").save(path, format="PNG")


def load_png(path: str | Path) -> np.ndarray:
    """Load a PNG as uint8; grayscale gives (H, W), color gives (H, W, 3)."""
    with Image.open(path) as img:
        if img.mode in ("L", "I;16", "I"):
            return np.asarray(img.convert("L"), dtype=np.uint8)
        return np.asarray(img.convert("RGB"), dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class ConditionSequence:
    """Paired edge/depth control maps for one rendered scene."""

    edge_frames: tuple[np.ndarray, ...]
    depth_frames: tuple[np.ndarray, ...]
    resolution: tuple[int, int]  # (width, height)
    frame_count: int
    source_digest: str | None = None

    def __post_init__(self):
        n = self.frame_count
        if n < 1:
            raise SequenceError("frame_count must be >= 1")
        if len(self.edge_frames) != n or len(self.depth_frames) != n:
            raise SequenceError(
                f"expected {n} edge and depth frames, got "
                f"{len(self.edge_frames)} and {len(self.depth_frames)}")
        w, h = self.resolution
        for label, frames in (("edge", self.edge_frames), ("depth", self.depth_frames)):
            for i, f in enumerate(frames):
                if f.dtype != np.uint8 or f.shape != (h, w):
                    raise SequenceError(
                        f"{label} frame {i} has shape {f.shape}, expected {(h, w)}")

    def __eq__(self, other):
        if not isinstance(other, ConditionSequence):
            return NotImplemented
        return (self.resolution == other.resolution
                and self.frame_count == other.frame_count
                and all(np.array_equal(a, b)
                        for a, b in zip(self.edge_frames, other.edge_frames))
                and all(np.array_equal(a, b)
                        for a, b in zip(self.depth_frames, other.depth_frames)))


def write_condition_dir(seq: ConditionSequence, out_dir: str | Path,
                        extra_manifest: dict | None = None) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(seq.frame_count):
        save_grayscale_png(seq.edge_frames[i], out / f"edge_{i + 1:04d}.png")
        save_grayscale_png(seq.depth_frames[i], out / f"depth_{i + 1:04d}.png")
    manifest = {
        "frames": seq.frame_count,
        "resolution": [seq.resolution[0], seq.resolution[1]],
    }
    manifest.update(extra_manifest or {})
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")


def load_condition_dir(path: str | Path,
                       source_digest: str | None = None) -> ConditionSequence:
    """Load and invariant-check a rendered condition directory."""
    root = Path(path)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise SequenceError(f"missing manifest.json in {root}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    try:
        n = int(manifest["frames"])
        w, h = (int(v) for v in manifest["resolution"])
    except (KeyError, TypeError, ValueError) as e:
        raise SequenceError(f"malformed manifest.json: {e}") from e

    edge, depth = [], []
    for kind, bucket in (("edge", edge), ("depth", depth)):
        found = sorted(root.glob(f"{kind}_*.png"))
        if len(found) != n:
            raise SequenceError(
                f"frame count mismatch: manifest says {n}, found {len(found)} {kind} frames")
        for i in range(n):
            expected = root / f"{kind}_{i + 1:04d}.png"
            if not expected.is_file():
                raise SequenceError(f"missing frame file {expected.name}")
            frame = load_png(expected)
            if frame.ndim != 2:
                raise SequenceError(f"{expected.name} is not grayscale")
            if frame.shape != (h, w):
                raise SequenceError(
                    f"resolution mismatch: {expected.name} is {frame.shape[::-1]}, "
                    f"manifest says {(w, h)}")
            bucket.append(frame)
    return ConditionSequence(
        edge_frames=tuple(edge), depth_frames=tuple(depth),
        resolution=(w, h), frame_count=n, source_digest=source_digest)


@dataclass(frozen=True, eq=False)
class FrameStack:
    """Synthesized video frames as float32 intensities in [0, 1], shape (N, H, W)."""

    frames: np.ndarray

    def __post_init__(self):
        if self.frames.ndim != 3 or self.frames.shape[0] < 1:
            raise SequenceError("frames must have shape (N, H, W) with N >= 1")
        if not np.isfinite(self.frames).all():
            raise SequenceError("frames contain non-finite values")

    @property
    def frame_count(self) -> int:
        return int(self.frames.shape[0])

    def to_uint8(self) -> np.ndarray:
        return np.clip(np.rint(self.frames * 255.0), 0, 255).astype(np.uint8)


def write_frame_dir(stack: FrameStack, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, frame in enumerate(stack.to_uint8()):
        p = out / f"frame_{i + 1:04d}.png"
        save_grayscale_png(frame, p)
        paths.append(p)
    return paths


def load_frame_dir(path: str | Path) -> list[np.ndarray]:
    """Load frame_%04d.png files in order; uint8, grayscale or RGB."""
    root = Path(path)
    files = sorted(root.glob("frame_*.png"))
    if not files:
        raise SequenceError(f"no frame_*.png files in {root}")
    return [load_png(f) for f in files]
