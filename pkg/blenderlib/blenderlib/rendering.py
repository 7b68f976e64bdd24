"""The dual condition render: Freestyle edge pass plus normalized depth pass.

Both passes ride one Workbench animation render. Freestyle is enabled as an
independent render pass and written straight to ``edge_%04d.png`` (white lines
on black) by a compositor file-output node; the raw Z channel goes to
``zraw_%04d.exr`` and is converted afterwards to ``depth_%04d.png``. Depth
polarity is near = bright, and normalization bounds are per-sequence by
default, so a static background pixel keeps one value across every frame.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass

import bpy
import numpy as np

from .runtime import profile_overrides


@dataclass(frozen=True)
class RenderProfile:
    engine: str = "Workbench"  # fixed; edge/depth need no ray tracing
    edge_thickness: float = 2.0  # px
    edge_color: tuple = (1.0, 1.0, 1.0)
    depth_bits: int = 8
    normalization: str = "per-sequence"

    def __post_init__(self):
        if self.engine != "Workbench":
            raise ValueError("the render engine is fixed to Workbench")
        if self.depth_bits not in (8, 16):
            raise ValueError("depth_bits must be 8 or 16")
        if self.normalization not in ("per-sequence", "per-frame"):
            raise ValueError("normalization must be per-sequence or per-frame")


def profile_from_argv(argv=None) -> RenderProfile:
    return RenderProfile(**profile_overrides(argv))


# ---------------------------------------------------------------------------
# Pure depth math (no bpy)


def normalize_depth_sequence(z_frames: list[np.ndarray], clip_end: float,
                             normalization: str = "per-sequence") -> list[np.ndarray]:
    """Map raw Z buffers to [0, 1] with near = 1 (bright) and far = 0.

    Background pixels (no geometry) carry huge Z values; everything is clamped
    to the camera clip distance first. Per-sequence mode shares one min/max
    across all frames; per-frame recomputes bounds each frame.
    """
    clamped = [np.minimum(z.astype(np.float64), clip_end) for z in z_frames]

    def scale(batch):
        z_near = min(float(z.min()) for z in batch)
        z_far = max(float(z.max()) for z in batch)
        if z_far <= z_near:
            return [np.zeros_like(z) for z in batch]
        return [(z_far - z) / (z_far - z_near) for z in batch]

    if normalization == "per-sequence":
        return scale(clamped)
    return [scale([z])[0] for z in clamped]


def quantize_depth(frame01: np.ndarray, bits: int) -> np.ndarray:
    top = (1 << bits) - 1
    dtype = np.uint8 if bits == 8 else np.uint16
    return np.clip(np.rint(frame01 * top), 0, top).astype(dtype)


# ---------------------------------------------------------------------------
# Blender-side orchestration


def _configure_render(scene, frames: int, resolution, fps: int,
                      profile: RenderProfile) -> None:
    scene.render.engine = 'BLENDER_WORKBENCH'
    scene.render.resolution_x = int(resolution[0])
    scene.render.resolution_y = int(resolution[1])
    scene.render.resolution_percentage = 100
    scene.render.fps = int(fps)
    scene.frame_start = 1
    scene.frame_end = int(frames)
    scene.render.film_transparent = True

    view_layer = bpy.context.view_layer
    view_layer.use_pass_z = True
    view_layer.use_freestyle = True
    fs = view_layer.freestyle_settings
    fs.as_render_pass = True
    if not len(fs.linesets):
        lineset = fs.linesets.new("conditions")
    else:
        lineset = fs.linesets[0]
    lineset.select_silhouette = True
    lineset.select_border = True
    lineset.select_crease = True
    style = lineset.linestyle
    style.color = profile.edge_color
    style.thickness = profile.edge_thickness


def _setup_compositor(scene, out_dir: str) -> None:
    scene.use_nodes = True
    tree = scene.node_tree
    tree.nodes.clear()
    rl = tree.nodes.new('CompositorNodeRLayers')

    edge_out = tree.nodes.new('CompositorNodeOutputFile')
    edge_out.base_path = str(out_dir)
    edge_out.format.file_format = 'PNG'
    edge_out.format.color_mode = 'BW'
    edge_out.format.color_depth = '8'
    edge_out.file_slots[0].path = "edge_"
    tree.links.new(rl.outputs['Freestyle'], edge_out.inputs[0])

    z_out = tree.nodes.new('CompositorNodeOutputFile')
    z_out.base_path = str(out_dir)
    z_out.format.file_format = 'OPEN_EXR'
    z_out.format.color_depth = '32'
    z_out.file_slots[0].path = "zraw_"
    tree.links.new(rl.outputs['Depth'], z_out.inputs[0])


def _load_z(path: str) -> np.ndarray:
    """Read one raw Z frame via Blender's image loader (rows come bottom-up)."""
    img = bpy.data.images.load(path)
    try:
        w, h = img.size
        pixels = np.array(img.pixels[:], dtype=np.float64)
        z = pixels.reshape(h, w, 4)[:, :, 0]
        return np.flipud(z)
    finally:
        bpy.data.images.remove(img)


def _save_gray_png(frame01: np.ndarray, path: str, bits: int) -> None:
    """Write a grayscale PNG through Blender's own image pipeline."""
    h, w = frame01.shape
    img = bpy.data.images.new("depth_tmp", width=w, height=h, alpha=False,
                              float_buffer=True)
    try:
        rgba = np.empty((h, w, 4), dtype=np.float32)
        rgba[..., 0] = rgba[..., 1] = rgba[..., 2] = np.flipud(frame01)  # bottom-up
        rgba[..., 3] = 1.0
        img.pixels = rgba.ravel().tolist()
        settings = bpy.context.scene.render.image_settings
        settings.file_format = 'PNG'
        settings.color_mode = 'BW'
        settings.color_depth = str(bits)
        img.save_render(filepath=str(path))
    finally:
        bpy.data.images.remove(img)


def render_conditions(frames: int, resolution, fps: int, out_dir: str,
                      profile: RenderProfile | None = None) -> dict:
    """Render ``frames`` edge/depth pairs and write them plus manifest.json.

    Raises if any expected frame is missing, so the hosting script exits
    nonzero unless every file was written.
    """
    if frames < 1:
        raise ValueError("frames must be >= 1")
    profile = profile if profile is not None else profile_from_argv()
    os.makedirs(out_dir, exist_ok=True)
    scene = bpy.context.scene
    if scene.camera is None:
        raise RuntimeError("no camera in the scene; call setup_camera first")

    _configure_render(scene, frames, resolution, fps, profile)
    _setup_compositor(scene, out_dir)
    bpy.ops.render.render(animation=True)

    # edge pass: written directly by the file-output node
    for i in range(1, frames + 1):
        edge = os.path.join(out_dir, f"edge_{i:04d}.png")
        if not os.path.isfile(edge):
            raise RuntimeError(f"edge frame missing after render: {edge}")

    # depth pass: normalize raw Z across the sequence, then quantize
    z_paths = [os.path.join(out_dir, f"zraw_{i:04d}.exr") for i in range(1, frames + 1)]
    for p in z_paths:
        if not os.path.isfile(p):
            raise RuntimeError(f"depth frame missing after render: {p}")
    clip_end = float(scene.camera.data.clip_end)
    z_frames = [_load_z(p) for p in z_paths]
    normalized = normalize_depth_sequence(z_frames, clip_end, profile.normalization)
    for i, frame01 in enumerate(normalized, start=1):
        _save_gray_png(frame01, os.path.join(out_dir, f"depth_{i:04d}.png"),
                       profile.depth_bits)
    for p in z_paths:
        os.remove(p)

    profile_doc = asdict(profile)
    profile_doc["edge_color"] = list(profile.edge_color)
    manifest = {
        "frames": int(frames),
        "resolution": [int(resolution[0]), int(resolution[1])],
        "profile": profile_doc,
        "blender_version": bpy.app.version_string,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest
