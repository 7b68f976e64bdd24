import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))
import fake_bpy  # noqa: E402

# must be installed before blenderlib is imported anywhere
sys.modules.setdefault("bpy", fake_bpy)


@pytest.fixture(autouse=True)
def bpy_state():
    fake_bpy.reset()
    return fake_bpy
