import math

import pytest

import fake_bpy as bpy
from blenderlib.sceneops import (
    clear_scene,
    create_floor,
    create_primitive,
    import_asset,
    setup_camera,
)


def test_clear_scene_empties_everything():
    for i in range(3):
        create_primitive("cube", f"c{i}", 1.0, (i, 0, 0))
    setup_camera((0, -5, 2), (0, 0, 1))
    assert len(bpy.data.objects) == 4
    clear_scene()
    assert len(bpy.data.objects) == 0


def test_clear_scene_idempotent():
    clear_scene()
    clear_scene()
    assert len(bpy.data.objects) == 0


def test_clear_scene_hundred_meshes():
    for i in range(100):
        create_primitive("sphere", f"s{i}", 0.5, (0, 0, i))
    clear_scene()
    assert len(bpy.data.objects) == 0


def test_setup_camera_places_and_aims():
    cam = setup_camera((0, -10, 2), (0, 0, 2))
    assert cam.location == (0, -10, 2)
    assert bpy.context.scene.camera is cam
    # looking horizontally along +Y: tilted 90 degrees up from floor-facing
    rx, ry, rz = cam.rotation_euler
    assert rx == pytest.approx(math.pi / 2)
    assert ry == 0.0
    assert rz == pytest.approx(0.0)


def test_setup_camera_straight_down():
    cam = setup_camera((0, 0, 5), (0, 0, 0))
    rx, _, _ = cam.rotation_euler
    assert rx == pytest.approx(0.0)  # default orientation already looks down


def test_setup_camera_rejects_zero_direction():
    with pytest.raises(ValueError, match="coincide"):
        setup_camera((1, 1, 1), (1, 1, 1))


@pytest.mark.parametrize("kind,dims", [
    ("sphere", (1.0, 1.0, 1.0)),
    ("cube", (1.0, 1.0, 1.0)),
    ("plane", (1.0, 1.0, 0.0)),
    ("cylinder", (1.0, 1.0, 1.0)),
])
def test_create_primitive_kinds(kind, dims):
    obj = create_primitive(kind, "thing", 1.0, (0, 0, 2))
    assert obj.name == "thing"
    assert obj.location == (0, 0, 2)
    assert obj.dimensions == dims


def test_create_primitive_unknown_kind():
    with pytest.raises(ValueError, match="unknown primitive"):
        create_primitive("dodecahedron", "x", 1.0, (0, 0, 0))


def test_import_asset_scales_to_size(tmp_path, monkeypatch):
    (tmp_path / "basketball.obj").write_text("# mesh")
    monkeypatch.setenv("MOTIONFORGE_ASSETS", str(tmp_path))
    obj = import_asset("basketball.obj", "ball", 0.24, (0, 0, 4))
    assert obj.name == "ball"
    assert obj.location == (0, 0, 4)
    # fake import yields a 2 m mesh; largest dimension scaled to 0.24
    assert obj.scale[0] == pytest.approx(0.12)


def test_import_asset_missing_file(tmp_path, monkeypatch):
    monkeypatch.setenv("MOTIONFORGE_ASSETS", str(tmp_path))
    with pytest.raises(FileNotFoundError, match="asset not found"):
        import_asset("nope.obj", "x", 1.0, (0, 0, 0))


def test_import_asset_unsupported_format(tmp_path, monkeypatch):
    (tmp_path / "thing.stl").write_text("solid")
    monkeypatch.setenv("MOTIONFORGE_ASSETS", str(tmp_path))
    with pytest.raises(ValueError, match="unsupported asset format"):
        import_asset("thing.stl", "x", 1.0, (0, 0, 0))


def test_create_floor_matches_contract():
    floor = create_floor(elasticity=1)
    assert floor.name == "GROUND"
    assert floor.scale == (50, 50, 50)
    assert "Collision" in floor.modifiers
    assert floor.rigid_body is not None
    assert floor.rigid_body.type == "PASSIVE"
    assert floor.rigid_body.restitution == 1
    assert floor.rigid_body.collision_shape == "MESH"


def test_create_floor_custom_elasticity():
    floor = create_floor(elasticity=0.25)
    assert floor.rigid_body.restitution == 0.25
