#!/usr/bin/env python3
"""Regenerate the committed golden scripts from the scenes/ directory.

Golden files pin the compiler's byte-exact output; rerun this only when an
intentional codegen change has been reviewed, then commit the diff.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

from motionforge.codegen import emit_script, lint_script
from motionforge.dsl import parse_scene

GOLDEN_SCENES = ["basketball_drop", "flag_wind", "water_pour"]


def main() -> int:
    out_dir = ROOT / "tests" / "golden"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in GOLDEN_SCENES:
        scene = ROOT / "scenes" / f"{name}.scene"
        spec = parse_scene(scene.read_text(encoding="utf-8"))
        script = emit_script(spec)
        report = lint_script(script)
        if not report.passed:
            print(f"{name}: emitted script fails lint: {report.findings}")
            return 1
        (out_dir / f"{name}.py").write_text(script.body, encoding="utf-8")
        print(f"wrote tests/golden/{name}.py ({len(script.body)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
