import os
import stat
import sys
from pathlib import Path

import pytest

FAKE_BLENDER = '''#!{python}
"""Stand-in for the Blender binary: honors --version and the headless render
contract (write edge/depth frames plus manifest.json into the --out dir).
Fault injection via FAKE_BLENDER_* environment variables."""
import json
import os
import sys
import time

import numpy as np
from PIL import Image

if "--version" in sys.argv:
    print("Blender 3.6.0 (fake)")
    raise SystemExit(0)

tail = sys.argv[sys.argv.index("--") + 1:] if "--" in sys.argv else []
out_dir = tail[tail.index("--out") + 1]

sleep_s = float(os.environ.get("FAKE_BLENDER_SLEEP", "0"))
if sleep_s:
    time.sleep(sleep_s)
exit_code = int(os.environ.get("FAKE_BLENDER_EXIT", "0"))
if exit_code:
    print("simulated crash", file=sys.stderr)
    raise SystemExit(exit_code)

frames = int(os.environ.get("FAKE_BLENDER_FRAMES", "8"))
w, h = (int(v) for v in os.environ.get("FAKE_BLENDER_RES", "480x270").split("x"))
drop_one = os.environ.get("FAKE_BLENDER_DROP_ONE") == "1"

os.makedirs(out_dir, exist_ok=True)
rng = np.random.default_rng(0)
for i in range(1, frames + 1):
    edge = np.zeros((h, w), dtype=np.uint8)
    edge[i % h, :] = 255
    depth = np.full((h, w), min(255, i * 8), dtype=np.uint8)
    if not (drop_one and i == frames):
        Image.fromarray(edge, "L").save(os.path.join(out_dir, f"edge_{{i:04d}}.png"))
    Image.fromarray(depth, "L").save(os.path.join(out_dir, f"depth_{{i:04d}}.png"))

with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
    json.dump({{"frames": frames, "resolution": [w, h],
               "profile": {{"engine": "Workbench"}},
               "blender_version": "3.6.0"}}, fh)
'''


@pytest.fixture(scope="session")
def fake_blender(tmp_path_factory):
    path = tmp_path_factory.mktemp("bin") / "blender"
    path.write_text(FAKE_BLENDER.format(python=sys.executable), encoding="utf-8")
    path.chmod(path.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    return path
