"""Physics-effect functions: rigid bodies, cloth, liquid, force fields, baking."""

from __future__ import annotations

import math

import bpy

from .sceneops import _activate, get_object


def _add_collision_obj(obj) -> None:
    _activate(obj)
    if "Collision" not in obj.modifiers:
        bpy.ops.object.modifier_add(type='COLLISION')


def add_collision(name: str):
    """Adds a collision modifier so cloth and particles can hit the object."""
    _add_collision_obj(get_object(name))


def _add_rigid_body_obj(obj, mass: float = 1, elasticity: float = 0.5,
                        rigid_body_type: str = 'ACTIVE') -> None:
    bpy.ops.object.select_all(action='DESELECT')
    obj.select_set(True)
    bpy.context.view_layer.objects.active = obj
    bpy.ops.rigidbody.object_add()
    obj.rigid_body.type = rigid_body_type
    obj.rigid_body.mass = mass
    obj.rigid_body.restitution = elasticity
    obj.rigid_body.collision_shape = 'MESH'


def add_rigid_body(name: str, mass: float = 1, elasticity: float = 0.5,
                   body_type: str = 'ACTIVE'):
    """Rigid-body physics with a mesh collision shape.

    ``mass`` in kilograms, ``elasticity`` is the restitution (bounciness) in
    [0, 1], ``body_type`` ACTIVE for simulated objects or PASSIVE for static
    obstacles.
    """
    if body_type not in ('ACTIVE', 'PASSIVE'):
        raise ValueError(f"body_type must be ACTIVE or PASSIVE, got {body_type!r}")
    _add_rigid_body_obj(get_object(name), mass=mass, elasticity=elasticity,
                        rigid_body_type=body_type)


def add_initial_velocity(name: str, velocity):
    """Launch an active rigid body with a starting velocity (m/s).

    Blender has no direct initial-velocity setting; the object is keyframed as
    kinematic for the first two frames with a displacement of velocity/fps,
    then handed to the solver, which carries the motion forward.
    """
    obj = get_object(name)
    if obj.rigid_body is None:
        raise ValueError(f"{name!r} has no rigid body; call add_rigid_body first")
    fps = bpy.context.scene.render.fps
    _activate(obj)

    obj.rigid_body.kinematic = True
    obj.keyframe_insert(data_path="rigid_body.kinematic", frame=1)
    obj.keyframe_insert(data_path="location", frame=1)

    step = 1.0 / fps
    obj.location = (obj.location[0] + velocity[0] * step,
                    obj.location[1] + velocity[1] * step,
                    obj.location[2] + velocity[2] * step)
    obj.keyframe_insert(data_path="location", frame=2)
    obj.keyframe_insert(data_path="rigid_body.kinematic", frame=2)

    obj.rigid_body.kinematic = False
    obj.keyframe_insert(data_path="rigid_body.kinematic", frame=3)


def apply_cloth(name: str, quality: int = 5):
    """Simulate the object as cloth; ``quality`` is the solver step count."""
    obj = get_object(name)
    _activate(obj)
    bpy.ops.object.modifier_add(type='CLOTH')
    obj.modifiers["Cloth"].settings.quality = quality


def apply_fluid_flow(name: str):
    """Emit liquid from the object's geometry."""
    obj = get_object(name)
    _activate(obj)
    bpy.ops.object.modifier_add(type='FLUID')
    mod = obj.modifiers["Fluid"]
    mod.fluid_type = 'FLOW'
    mod.flow_settings.flow_type = 'LIQUID'
    mod.flow_settings.flow_behavior = 'GEOMETRY'


def apply_fluid_domain(name: str, viscosity: float = 0.0):
    """Make the object the bounding volume of the liquid simulation.

    ``viscosity`` > 0 enables the viscosity solver with that kinematic value
    (water is about 1e-6; honey around 1e-4).
    """
    obj = get_object(name)
    _activate(obj)
    bpy.ops.object.modifier_add(type='FLUID')
    mod = obj.modifiers["Fluid"]
    mod.fluid_type = 'DOMAIN'
    mod.domain_settings.domain_type = 'LIQUID'
    mod.domain_settings.resolution_max = 64
    mod.domain_settings.cache_type = 'ALL'
    if viscosity > 0:
        mod.domain_settings.use_viscosity = True
        mod.domain_settings.viscosity_value = viscosity


def add_wind(direction, strength: float):
    """Directional wind force field; ``direction`` need not be normalized."""
    dx, dy, dz = direction
    norm = math.sqrt(dx * dx + dy * dy + dz * dz)
    if norm == 0:
        raise ValueError("wind direction must be nonzero")
    dx, dy, dz = dx / norm, dy / norm, dz / norm
    bpy.ops.object.effector_add(type='WIND')
    wind = bpy.context.active_object
    wind.name = "WIND"
    # the field blows along the empty's +Z axis: tilt it onto the direction
    wind.rotation_euler = (0.0, math.acos(max(-1.0, min(1.0, dz))),
                           math.atan2(dy, dx))
    wind.field.strength = strength
    return wind


def set_gravity(vector):
    """Override scene gravity (m/s^2 per axis)."""
    bpy.context.scene.gravity = tuple(vector)


def bake_physics(frames: int):
    """Run every simulation once over frames 1..N so rendering replays caches."""
    if frames < 1:
        raise ValueError("frames must be >= 1")
    scene = bpy.context.scene
    scene.frame_start = 1
    scene.frame_end = frames
    if scene.rigidbody_world is not None:
        scene.rigidbody_world.point_cache.frame_start = 1
        scene.rigidbody_world.point_cache.frame_end = frames
    bpy.ops.ptcache.bake_all(bake=True)

    for obj in bpy.data.objects:
        for mod in obj.modifiers:
            if mod.type == 'FLUID' and getattr(mod, "fluid_type", "") == 'DOMAIN':
                with bpy.context.temp_override(object=obj, active_object=obj,
                                               selected_objects=[obj]):
                    bpy.ops.fluid.bake_all()
