import math

import pytest

import fake_bpy as bpy
from blenderlib.physics import (
    add_collision,
    add_initial_velocity,
    add_rigid_body,
    add_wind,
    apply_cloth,
    apply_fluid_domain,
    apply_fluid_flow,
    bake_physics,
    set_gravity,
)
from blenderlib.sceneops import create_primitive


@pytest.fixture
def sphere():
    return create_primitive("sphere", "ball", 0.24, (0, 0, 4))


def test_add_rigid_body_properties_read_back(sphere):
    add_rigid_body("ball", mass=0.625, elasticity=0.8, body_type="ACTIVE")
    rb = sphere.rigid_body
    assert rb.mass == 0.625
    assert rb.restitution == 0.8
    assert rb.type == "ACTIVE"
    assert rb.collision_shape == "MESH"


def test_add_rigid_body_defaults(sphere):
    add_rigid_body("ball")
    assert sphere.rigid_body.mass == 1
    assert sphere.rigid_body.restitution == 0.5
    assert sphere.rigid_body.type == "ACTIVE"


def test_add_rigid_body_passive_and_validation(sphere):
    add_rigid_body("ball", body_type="PASSIVE")
    assert sphere.rigid_body.type == "PASSIVE"
    with pytest.raises(ValueError, match="body_type"):
        add_rigid_body("ball", body_type="SQUISHY")
    with pytest.raises(KeyError, match="no object named"):
        add_rigid_body("ghost")


def test_add_collision_idempotent(sphere):
    add_collision("ball")
    add_collision("ball")
    assert sum(1 for m in sphere.modifiers if m.name == "Collision") == 1


def test_add_initial_velocity_kinematic_recipe(sphere):
    bpy.context.scene.render.fps = 24
    add_rigid_body("ball")
    add_initial_velocity("ball", (0.0, 20.65, 0.0))

    frames = {(path, frame) for path, frame, _ in sphere.keyframes}
    assert ("rigid_body.kinematic", 1) in frames
    assert ("rigid_body.kinematic", 2) in frames
    assert ("rigid_body.kinematic", 3) in frames
    assert ("location", 1) in frames
    assert ("location", 2) in frames
    # displacement between the two location keys is velocity / fps
    locs = [v for path, _, v in sphere.keyframes if path == "location"]
    assert locs[1][1] - locs[0][1] == pytest.approx(20.65 / 24)
    assert sphere.rigid_body.kinematic is False  # dynamic from frame 3 on


def test_add_initial_velocity_requires_rigid_body(sphere):
    with pytest.raises(ValueError, match="rigid body"):
        add_initial_velocity("ball", (1, 0, 0))


def test_apply_cloth_quality(sphere):
    apply_cloth("ball", quality=8)
    assert "Cloth" in sphere.modifiers
    assert sphere.modifiers["Cloth"].settings.quality == 8


def test_apply_fluid_flow(sphere):
    apply_fluid_flow("ball")
    mod = sphere.modifiers["Fluid"]
    assert mod.fluid_type == "FLOW"
    assert mod.flow_settings.flow_type == "LIQUID"
    assert mod.flow_settings.flow_behavior == "GEOMETRY"


def test_apply_fluid_domain_viscosity():
    create_primitive("cube", "tank", 4.0, (0, 0, 2))
    apply_fluid_domain("tank", viscosity=1e-4)
    mod = bpy.data.objects.get("tank").modifiers["Fluid"]
    assert mod.fluid_type == "DOMAIN"
    assert mod.domain_settings.domain_type == "LIQUID"
    assert mod.domain_settings.cache_type == "ALL"
    assert mod.domain_settings.use_viscosity is True
    assert mod.domain_settings.viscosity_value == 1e-4


def test_apply_fluid_domain_default_no_viscosity():
    create_primitive("cube", "tank", 4.0, (0, 0, 2))
    apply_fluid_domain("tank")
    assert bpy.data.objects.get("tank").modifiers["Fluid"].domain_settings.use_viscosity is False


def test_add_wind_direction_and_strength():
    wind = add_wind((1, 0, 0), 1000.0)
    assert wind.field.type == "WIND"
    assert wind.field.strength == 1000.0
    # field blows along local +Z; rotating +Z onto +X needs a 90 degree tilt
    _, ry, rz = wind.rotation_euler
    assert ry == pytest.approx(math.pi / 2)
    assert rz == pytest.approx(0.0)


def test_add_wind_rejects_zero_direction():
    with pytest.raises(ValueError, match="nonzero"):
        add_wind((0, 0, 0), 5.0)


def test_set_gravity():
    set_gravity((0, 0, -3.7))
    assert bpy.context.scene.gravity == (0, 0, -3.7)


def test_bake_physics_sets_range_and_bakes(sphere):
    add_rigid_body("ball")
    bake_physics(48)
    scene = bpy.context.scene
    assert scene.frame_start == 1
    assert scene.frame_end == 48
    assert scene.rigidbody_world.point_cache.frame_end == 48
    assert ("ptcache.bake_all", {"bake": True}) in bpy.calls


def test_bake_physics_bakes_fluid_domains():
    create_primitive("cube", "tank", 4.0, (0, 0, 2))
    apply_fluid_domain("tank")
    bake_physics(10)
    assert any(name == "fluid.bake_all" for name, _ in bpy.calls)
    assert any(name == "context.temp_override" for name, _ in bpy.calls)


def test_bake_physics_validates_frames():
    with pytest.raises(ValueError):
        bake_physics(0)
