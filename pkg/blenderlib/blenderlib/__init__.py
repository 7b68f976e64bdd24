"""Scene library executed inside Blender by generated render scripts.

Scripts run as ``blender --background --python <script> -- --out <dir>`` with
this package on ``sys.path`` (the caller sets ``MOTIONFORGE_BLENDERLIB``).
Everything a generated script may call is re-exported here.
"""

from .physics import (  # noqa: F401
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
from .rendering import RenderProfile, render_conditions  # noqa: F401
from .runtime import output_dir_from_argv  # noqa: F401
from .sceneops import (  # noqa: F401
    clear_scene,
    create_floor,
    create_primitive,
    import_asset,
    setup_camera,
)

__version__ = "0.1.0"
