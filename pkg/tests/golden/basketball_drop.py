# Scene script: basketball_drop
# digest: 3dcac7dfec1cd0741d5897b2a0337b4c4046126d4a900b57f04fa8df8d508a63
# Target: Blender 3.6 headless
# Run: blender --background --python <this file> -- --out <dir>

import os
import sys

sys.path.insert(0, os.environ.get("MOTIONFORGE_BLENDERLIB", "."))

from blenderlib import (
    add_rigid_body,
    bake_physics,
    clear_scene,
    create_floor,
    import_asset,
    output_dir_from_argv,
    render_conditions,
    setup_camera,
)

OUT_DIR = output_dir_from_argv(default="render_out")

# world bounds: 20 x 20 x 20 m
clear_scene()
setup_camera(position=(0, -13.665, 1.8521), look_at=(0, 0, 1.5))

create_floor(elasticity=1)
import_asset(path='basketball.obj', name='ball', size=0.24, position=(0, 0, 4))

add_rigid_body(name='ball', mass=0.625, elasticity=0.8, body_type='ACTIVE')

bake_physics(frames=80)
render_conditions(frames=80, resolution=(1920, 1080), fps=24, out_dir=OUT_DIR)
