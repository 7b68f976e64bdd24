#!/usr/bin/env python3
"""Regenerate the committed 8-frame condition fixture used by tests.

A small ball sinks one pixel per frame over a static horizon: mostly-static
content, so synthesized output should score high on temporal flickering.
Deterministic; rerun only when the fixture design changes, then commit.
"""

import json
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "tests" / "fixtures" / "conditions_8f"

FRAMES = 8
WIDTH, HEIGHT = 96, 64
BALL_RADIUS = 9
HORIZON_Y = 50


def ball_center(i: int) -> tuple[int, int]:
    return (WIDTH // 2, 18 + i)  # sinks 1 px per frame


def edge_frame(i: int) -> np.ndarray:
    img = np.zeros((HEIGHT, WIDTH), dtype=np.uint8)
    img[HORIZON_Y, :] = 255
    cx, cy = ball_center(i)
    yy, xx = np.mgrid[0:HEIGHT, 0:WIDTH]
    r = np.sqrt((xx - cx) ** 2 + (yy - cy) ** 2)
    img[np.abs(r - BALL_RADIUS) < 1.0] = 255
    return img


def depth_frame(i: int) -> np.ndarray:
    # near = bright; static background gradient, ball nearer than backdrop
    rows = np.linspace(40, 110, HEIGHT)[:, np.newaxis]
    img = np.repeat(rows, WIDTH, axis=1)
    cx, cy = ball_center(i)
    yy, xx = np.mgrid[0:HEIGHT, 0:WIDTH]
    inside = (xx - cx) ** 2 + (yy - cy) ** 2 <= BALL_RADIUS ** 2
    img[inside] = 220
    return np.round(img).astype(np.uint8)


def main() -> int:
    from PIL import Image

    OUT.mkdir(parents=True, exist_ok=True)
    for i in range(FRAMES):
        Image.fromarray(edge_frame(i), "L").save(OUT / f"edge_{i + 1:04d}.png")
        Image.fromarray(depth_frame(i), "L").save(OUT / f"depth_{i + 1:04d}.png")
    (OUT / "manifest.json").write_text(json.dumps({
        "frames": FRAMES,
        "resolution": [WIDTH, HEIGHT],
        "profile": {"engine": "Workbench", "normalization": "per-sequence"},
        "blender_version": "fixture",
    }, indent=2), encoding="utf-8")
    print(f"wrote {FRAMES} edge/depth pairs to {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
