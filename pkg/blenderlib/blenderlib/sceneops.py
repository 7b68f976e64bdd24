"""Scene setup: clearing, cameras, primitive creation, asset import, the floor."""

from __future__ import annotations

import math
import os

import bpy

from .runtime import assets_root

PRIMITIVES = ("sphere", "cube", "plane", "cylinder")


def get_object(name: str):
    obj = bpy.data.objects.get(name)
    if obj is None:
        raise KeyError(f"no object named {name!r} in the scene")
    return obj


def _activate(obj) -> None:
    bpy.ops.object.select_all(action='DESELECT')
    obj.select_set(True)
    bpy.context.view_layer.objects.active = obj


def clear_scene():
    """Clears all objects from the current Blender scene.

    Selects everything (objects, cameras, lights) and deletes it; called at the
    start of every generated script so state never leaks between renders.
    """
    bpy.ops.object.select_all(action='SELECT')
    bpy.ops.object.delete()


def setup_camera(position, look_at):
    """Place the scene camera at ``position`` aimed at ``look_at``.

    The camera keeps a level horizon; ``position`` and ``look_at`` must differ.
    """
    dx = look_at[0] - position[0]
    dy = look_at[1] - position[1]
    dz = look_at[2] - position[2]
    norm = math.sqrt(dx * dx + dy * dy + dz * dz)
    if norm == 0:
        raise ValueError("camera position and look_at coincide")
    dx, dy, dz = dx / norm, dy / norm, dz / norm

    bpy.ops.object.camera_add(location=tuple(position))
    cam = bpy.context.active_object
    cam.name = "CAMERA"
    # default camera looks along -Z; tilt about X then yaw about Z
    cam.rotation_euler = (math.acos(max(-1.0, min(1.0, -dz))), 0.0, math.atan2(-dx, dy))
    bpy.context.scene.camera = cam
    return cam


def create_primitive(kind: str, name: str, size: float, position):
    """Add a primitive mesh; ``size`` is the diameter/edge length in meters."""
    loc = tuple(position)
    if kind == "sphere":
        bpy.ops.mesh.primitive_uv_sphere_add(radius=size / 2.0, location=loc)
    elif kind == "cube":
        bpy.ops.mesh.primitive_cube_add(size=size, location=loc)
    elif kind == "plane":
        bpy.ops.mesh.primitive_plane_add(size=size, location=loc)
    elif kind == "cylinder":
        bpy.ops.mesh.primitive_cylinder_add(radius=size / 2.0, depth=size, location=loc)
    else:
        raise ValueError(f"unknown primitive kind {kind!r}; expected one of {PRIMITIVES}")
    obj = bpy.context.active_object
    obj.name = name
    return obj


def import_asset(path: str, name: str, size: float, position):
    """Import a mesh from the asset root, normalize its size, and place it.

    ``path`` is relative to the asset root (``MOTIONFORGE_ASSETS`` or
    ``--assets``); ``size`` scales the largest dimension to that many meters.
    """
    full = os.path.join(assets_root(), path)
    if not os.path.isfile(full):
        raise FileNotFoundError(f"asset not found: {full}")
    ext = os.path.splitext(full)[1].lower()
    if ext == ".obj":
        bpy.ops.wm.obj_import(filepath=full)
    else:
        raise ValueError(f"unsupported asset format {ext!r} (only .obj)")
    obj = bpy.context.active_object
    if obj is None:
        raise RuntimeError(f"import produced no active object for {path!r}")
    obj.name = name
    largest = max(obj.dimensions) if max(obj.dimensions) > 0 else 1.0
    factor = size / largest
    obj.scale = (factor, factor, factor)
    obj.location = tuple(position)
    return obj


def create_floor(elasticity: float = 1):
    """Creates the ground plane, scaled 50x, with collision and a passive
    rigid body whose restitution is ``elasticity`` (1 = perfectly elastic)."""
    from .physics import _add_collision_obj, _add_rigid_body_obj

    bpy.ops.mesh.primitive_plane_add(size=1, enter_editmode=False, align='WORLD',
                                     location=(0, 0, 0))
    floor = bpy.context.active_object
    floor.scale = (50, 50, 50)
    floor.name = 'GROUND'
    _add_collision_obj(floor)
    _add_rigid_body_obj(floor, rigid_body_type='PASSIVE', elasticity=elasticity)
    return floor
