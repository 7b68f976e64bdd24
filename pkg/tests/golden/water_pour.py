# Scene script: water_pour
# digest: f8da0fab4e1d32bddd2f84d2dc0c086e6e0ddd2fea54ec3e9a6065df9abf5c36
# Target: Blender 3.6 headless
# Run: blender --background --python <this file> -- --out <dir>

import os
import sys

sys.path.insert(0, os.environ.get("MOTIONFORGE_BLENDERLIB", "."))

from blenderlib import (
    add_rigid_body,
    apply_fluid_domain,
    apply_fluid_flow,
    bake_physics,
    clear_scene,
    create_floor,
    create_primitive,
    import_asset,
    output_dir_from_argv,
    render_conditions,
    setup_camera,
)

OUT_DIR = output_dir_from_argv(default="render_out")

# world bounds: 20 x 20 x 20 m
clear_scene()
setup_camera(position=(0, -1.2, 1.8), look_at=(0, 0, 0.9))

create_floor(elasticity=0.5)
import_asset(path='mug.obj', name='mug', size=0.1, position=(0, 0, 0.9))
create_primitive(kind='sphere', name='stream', size=0.06, position=(0, 0, 1.5))
create_primitive(kind='cube', name='tank', size=4, position=(0, 0, 1))

add_rigid_body(name='mug', mass=1, elasticity=0.5, body_type='PASSIVE')
apply_fluid_flow(name='stream')
apply_fluid_domain(name='tank')

bake_physics(frames=80)
render_conditions(frames=80, resolution=(1920, 1080), fps=24, out_dir=OUT_DIR)
