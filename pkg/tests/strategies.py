"""Hypothesis strategies shared by the scene and codegen tests."""

from hypothesis import strategies as st

from motionforge.dsl import (
    CameraSpec,
    FloorSpec,
    ForceSpec,
    ObjectSpec,
    SceneSpec,
    ThrowSpec,
    WorldConfig,
    validate_scene,
)

_names = st.from_regex(r"[a-z][a-z0-9_]{0,8}", fullmatch=True)
_coord = st.floats(-20.0, 20.0, allow_nan=False, allow_infinity=False)
_even_px = st.sampled_from([64, 96, 128, 192, 256, 480])
_sources = st.sampled_from(
    ["sphere", "cube", "plane", "cylinder", "asset:basketball", "asset:mug", "asset:flag"])


@st.composite
def object_specs(draw, name):
    physics = draw(st.sampled_from(
        ["rigid-active", "rigid-passive", "cloth", "liquid-flow", "none"]))
    rigid = physics in ("rigid-active", "rigid-passive")
    z = draw(st.floats(1.0, 10.0))
    velocity = None
    throw = None
    if physics == "rigid-active":
        choice = draw(st.integers(0, 2))
        if choice == 1:
            velocity = (draw(_coord), draw(_coord), draw(_coord))
        elif choice == 2:
            throw = ThrowSpec(
                target_height=draw(st.floats(0.1, 0.9)) * z,
                distance=draw(st.floats(0.0, 30.0)),
            )
    return ObjectSpec(
        name=name,
        source=draw(_sources),
        size=draw(st.floats(0.05, 5.0)),
        position=(draw(_coord), draw(_coord), z),
        physics=physics,
        mass=draw(st.floats(0.05, 10.0)) if rigid else None,
        elasticity=draw(st.floats(0.0, 1.0)) if rigid else None,
        initial_velocity=velocity,
        throw=throw,
    )


@st.composite
def force_specs(draw):
    kind = draw(st.sampled_from(["wind", "gravity-override"]))
    direction = draw(
        st.tuples(_coord, _coord, _coord).filter(lambda d: sum(c * c for c in d) > 1e-4))
    return ForceSpec(kind=kind, direction=direction,
                     strength=draw(st.floats(0.0, 100.0)))


@st.composite
def scene_specs(draw):
    """Validated (normalized) random scenes."""
    n_objects = draw(st.integers(0, 4))
    names = draw(st.lists(_names, min_size=n_objects, max_size=n_objects, unique=True))
    objects = tuple(draw(object_specs(name)) for name in names)
    position = (draw(_coord), draw(_coord), draw(st.floats(0.5, 10.0)))
    look_at = (position[0] + 1.0, position[1], position[2])
    spec = SceneSpec(
        name=draw(_names),
        camera=CameraSpec(position=position, look_at=look_at),
        frames=draw(st.integers(1, 120)),
        fps=draw(st.integers(1, 60)),
        resolution=(draw(_even_px), draw(_even_px)),
        objects=objects,
        forces=tuple(draw(st.lists(force_specs(), max_size=2))),
        floor=draw(st.one_of(st.none(), st.builds(FloorSpec, st.floats(0.0, 1.0)))),
        world=WorldConfig((draw(st.floats(5.0, 50.0)),
                           draw(st.floats(5.0, 50.0)),
                           draw(st.floats(5.0, 50.0)))),
    )
    return validate_scene(spec)
