"""Command-line and environment plumbing for scripts running inside Blender.

Blender forwards everything after ``--`` to the script; the orchestrator passes
``--out DIR`` there and may add render-profile overrides. The asset root comes
from ``MOTIONFORGE_ASSETS`` or ``--assets``.
"""

from __future__ import annotations

import os
import sys


def script_args(argv=None) -> list[str]:
    argv = sys.argv if argv is None else argv
    if "--" not in argv:
        return []
    return argv[argv.index("--") + 1:]


def _flag_value(flag: str, argv=None) -> str | None:
    tail = script_args(argv)
    if flag in tail:
        idx = tail.index(flag)
        if idx + 1 < len(tail):
            return tail[idx + 1]
    return None


def output_dir_from_argv(default: str = "render_out", argv=None) -> str:
    return _flag_value("--out", argv) or default


def assets_root(argv=None) -> str:
    return os.environ.get("MOTIONFORGE_ASSETS") or _flag_value("--assets", argv) or "."


def profile_overrides(argv=None) -> dict:
    """Render-profile overrides passed on the command line."""
    overrides: dict = {}
    thickness = _flag_value("--edge-thickness", argv)
    if thickness is not None:
        overrides["edge_thickness"] = float(thickness)
    bits = _flag_value("--depth-bits", argv)
    if bits is not None:
        overrides["depth_bits"] = int(bits)
    normalization = _flag_value("--normalization", argv)
    if normalization is not None:
        overrides["normalization"] = normalization
    return overrides
