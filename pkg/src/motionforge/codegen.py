"""Compile a SceneSpec into a Blender-runnable script, and statically lint scripts.

Emitted scripts call only the encapsulated scene library (``blenderlib``) —
never the raw engine API — and are byte-identical for equal specs. The lint is
a token/structure-level whitelist over the parsed AST: it resolves call targets
through import aliases, rejects anything it cannot resolve, and flags path
literals that escape the asset root. It never executes the script. Scripts that
fail the lint are rejected, not repaired.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field

from . import kinematics
from .assets import AssetCatalog, default_catalog
from .dsl import ObjectSpec, SceneSpec, canonical_digest

CATEGORIES = ("scene-init-render", "object-create-import", "physics-effect")

# Modules a script may import; calls are gated separately and more tightly.
ALLOWED_MODULES = ("blenderlib", "math", "os", "sys")
ALLOWED_CALLS = frozenset({"sys.path.insert", "os.environ.get", "os.path.join"})
ALLOWED_CALL_PREFIXES = ("math.",)
SAFE_BUILTINS = frozenset({
    "print", "len", "range", "abs", "min", "max", "round",
    "float", "int", "str", "enumerate", "zip",
})


class CodegenError(ValueError):
    pass


@dataclass(frozen=True)
class Param:
    name: str
    kind: str  # "str" | "int" | "float" | "vec3" | "pair"
    default: object = None
    required: bool = True


@dataclass(frozen=True)
class FunctionEntry:
    name: str
    category: str
    params: tuple[Param, ...]
    summary: str


@dataclass(frozen=True)
class FunctionManifest:
    entries: tuple[FunctionEntry, ...]

    def __post_init__(self):
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            raise CodegenError("manifest function names must be unique")
        cats = {e.category for e in self.entries}
        if cats != set(CATEGORIES):
            raise CodegenError(
                f"manifest categories must cover exactly {CATEGORIES}, got {sorted(cats)}")

    def names(self) -> frozenset[str]:
        return frozenset(e.name for e in self.entries)

    def render_docs(self) -> str:
        """Human/LLM-readable listing, grouped by category."""
        lines = []
        for cat in CATEGORIES:
            lines.append(f"## {cat}")
            for e in self.entries:
                if e.category != cat:
                    continue
                sig = ", ".join(
                    p.name if p.required else f"{p.name}={p.default!r}" for p in e.params)
                lines.append(f"- {e.name}({sig}): {e.summary}")
            lines.append("")
        return "\n".join(lines)


def _p(name, kind, default=None, required=True):
    return Param(name, kind, default, required)


def default_manifest() -> FunctionManifest:
    """The encapsulated function library the compiler targets."""
    return FunctionManifest((
        FunctionEntry("clear_scene", "scene-init-render", (),
                      "remove every object, camera and light from the scene"),
        FunctionEntry("output_dir_from_argv", "scene-init-render",
                      (_p("default", "str", "render_out", False),),
                      "output directory passed after '--' as --out DIR"),
        FunctionEntry("render_conditions", "scene-init-render",
                      (_p("frames", "int"), _p("resolution", "pair"),
                       _p("fps", "int"), _p("out_dir", "str")),
                      "render edge_%04d.png and depth_%04d.png plus manifest.json"),
        FunctionEntry("setup_camera", "object-create-import",
                      (_p("position", "vec3"), _p("look_at", "vec3")),
                      "place the scene camera and aim it at a point"),
        FunctionEntry("create_floor", "object-create-import",
                      (_p("elasticity", "float", 1, False),),
                      "large ground plane with collision and passive rigid body"),
        FunctionEntry("create_primitive", "object-create-import",
                      (_p("kind", "str"), _p("name", "str"),
                       _p("size", "float"), _p("position", "vec3")),
                      "add a sphere/cube/plane/cylinder of a given size"),
        FunctionEntry("import_asset", "object-create-import",
                      (_p("path", "str"), _p("name", "str"),
                       _p("size", "float"), _p("position", "vec3")),
                      "import a mesh from the asset root, scale and place it"),
        FunctionEntry("add_collision", "physics-effect",
                      (_p("name", "str"),),
                      "make an object an obstacle for cloth and particles"),
        FunctionEntry("add_rigid_body", "physics-effect",
                      (_p("name", "str"), _p("mass", "float", 1, False),
                       _p("elasticity", "float", 0.5, False),
                       _p("body_type", "str", "ACTIVE", False)),
                      "rigid-body physics with mesh collision shape"),
        FunctionEntry("add_initial_velocity", "physics-effect",
                      (_p("name", "str"), _p("velocity", "vec3")),
                      "launch an active rigid body with a starting velocity"),
        FunctionEntry("apply_cloth", "physics-effect",
                      (_p("name", "str"), _p("quality", "int", 5, False)),
                      "simulate the object as cloth"),
        FunctionEntry("apply_fluid_flow", "physics-effect",
                      (_p("name", "str"),),
                      "emit liquid from the object"),
        FunctionEntry("apply_fluid_domain", "physics-effect",
                      (_p("name", "str"), _p("viscosity", "float", 0.0, False)),
                      "bounding volume in which liquid is simulated"),
        FunctionEntry("add_wind", "physics-effect",
                      (_p("direction", "vec3"), _p("strength", "float")),
                      "directional wind force field"),
        FunctionEntry("set_gravity", "physics-effect",
                      (_p("vector", "vec3"),),
                      "override scene gravity"),
        FunctionEntry("bake_physics", "physics-effect",
                      (_p("frames", "int"),),
                      "run all physics simulations once, caching the result"),
    ))


@dataclass(frozen=True)
class ScriptText:
    body: str
    origin: str  # "compiled" | "llm"
    spec_digest: str | None = None

    def __post_init__(self):
        if not self.body:
            raise CodegenError("script body must be non-empty")
        if self.origin not in ("compiled", "llm"):
            raise CodegenError(f"unknown script origin {self.origin!r}")


# ---------------------------------------------------------------------------
# Emission


def _fmt(v) -> str:
    if isinstance(v, str):
        return repr(v)
    f = float(v)
    if f == int(f) and abs(f) < 1e15:
        return str(int(f))
    return repr(f)


def _fmt_vec(v) -> str:
    return "(" + ", ".join(_fmt(c) for c in v) + ")"


def _fmt_vec3f(v) -> str:
    return "(" + ", ".join(format(float(c), ".3f") for c in v) + ")"


def _call(used: set, fn: str, **kwargs) -> str:
    used.add(fn)
    args = ", ".join(f"{k}={v}" for k, v in kwargs.items())
    return f"{fn}({args})"


def _throw_velocity(spec: SceneSpec, obj: ObjectSpec) -> tuple[tuple[float, float, float], float]:
    """Resolve a throw request to a concrete velocity along the object->camera axis."""
    g = kinematics.STANDARD_GRAVITY
    for f in spec.forces:
        if f.kind == "gravity-override":
            g = f.strength
    q = kinematics.BallisticQuery(
        start_height=obj.position[2],
        target_height=obj.throw.target_height,
        horizontal_distance=obj.throw.distance,
        g=g,
    )
    _, speed, _ = kinematics.projectile_velocity(q)
    dx = spec.camera.position[0] - obj.position[0]
    dy = spec.camera.position[1] - obj.position[1]
    norm = (dx * dx + dy * dy) ** 0.5
    if speed > 0 and norm < 1e-9:
        raise CodegenError(
            f"throw direction for {obj.name!r} is ambiguous: camera sits directly above it")
    if norm < 1e-9:
        return (0.0, 0.0, 0.0), g
    return (speed * dx / norm, speed * dy / norm, 0.0), g


def emit_script(spec: SceneSpec, manifest: FunctionManifest | None = None,
                assets: AssetCatalog | None = None) -> ScriptText:
    """Deterministically compile a validated SceneSpec to a library-only script."""
    manifest = manifest if manifest is not None else default_manifest()
    assets = assets if assets is not None else default_catalog()
    digest = canonical_digest(spec)
    used: set[str] = set()

    setup = []
    setup.append(_call(used, "clear_scene"))
    setup.append(_call(used, "setup_camera",
                       position=_fmt_vec(spec.camera.position),
                       look_at=_fmt_vec(spec.camera.look_at)))

    creation = []
    if spec.floor is not None:
        creation.append(_call(used, "create_floor", elasticity=_fmt(spec.floor.elasticity)))
    for obj in spec.objects:
        if obj.source.startswith("asset:"):
            key = obj.source[len("asset:"):]
            if key not in assets:
                raise CodegenError(f"unresolved asset {key!r} for object {obj.name!r}")
            creation.append(_call(used, "import_asset",
                                  path=_fmt(assets.get(key).path),
                                  name=_fmt(obj.name), size=_fmt(obj.size),
                                  position=_fmt_vec(obj.position)))
        else:
            creation.append(_call(used, "create_primitive",
                                  kind=_fmt(obj.source), name=_fmt(obj.name),
                                  size=_fmt(obj.size), position=_fmt_vec(obj.position)))

    physics = []
    for obj in spec.objects:
        if obj.physics in ("rigid-active", "rigid-passive"):
            body_type = "ACTIVE" if obj.physics == "rigid-active" else "PASSIVE"
            physics.append(_call(used, "add_rigid_body",
                                 name=_fmt(obj.name), mass=_fmt(obj.mass),
                                 elasticity=_fmt(obj.elasticity),
                                 body_type=_fmt(body_type)))
            velocity = obj.initial_velocity
            if obj.throw is not None:
                velocity, g = _throw_velocity(spec, obj)
                physics.append(
                    f"# ballistic solve: fall {_fmt(obj.position[2])} -> "
                    f"{_fmt(obj.throw.target_height)} m over {_fmt(obj.throw.distance)} m "
                    f"at g = {_fmt(g)} m/s^2")
            if velocity is not None:
                physics.append(_call(used, "add_initial_velocity",
                                     name=_fmt(obj.name), velocity=_fmt_vec3f(velocity)))
        elif obj.physics == "cloth":
            physics.append(_call(used, "apply_cloth", name=_fmt(obj.name)))
        elif obj.physics == "liquid-flow":
            physics.append(_call(used, "apply_fluid_flow", name=_fmt(obj.name)))
        elif obj.physics == "liquid-domain":
            physics.append(_call(used, "apply_fluid_domain", name=_fmt(obj.name)))

    if any(o.physics == "liquid-flow" for o in spec.objects) and \
            not any(o.physics == "liquid-domain" for o in spec.objects):
        raise CodegenError("liquid flow without an enclosing fluid domain")

    forces = []
    for f in spec.forces:
        if f.kind == "wind":
            forces.append(_call(used, "add_wind", direction=_fmt_vec(f.direction),
                                strength=_fmt(f.strength)))
        else:
            vector = tuple(c * f.strength for c in f.direction)
            forces.append(_call(used, "set_gravity", vector=_fmt_vec(vector)))

    finish = [
        _call(used, "bake_physics", frames=_fmt(spec.frames)),
        _call(used, "render_conditions", frames=_fmt(spec.frames),
              resolution=_fmt_vec(spec.resolution), fps=_fmt(spec.fps),
              out_dir="OUT_DIR"),
    ]

    used.add("output_dir_from_argv")
    unknown = used - manifest.names()
    if unknown:
        raise CodegenError(f"functions missing from manifest: {sorted(unknown)}")

    imports = ",\n".join(f"    {n}" for n in sorted(used))
    wx, wy, wz = spec.world.dimensions
    sections = [
        f"# Scene script: {spec.name}",
        f"# digest: {digest}",
        "# Target: Blender 3.6 headless",
        "# Run: blender --background --python <this file> -- --out <dir>",
        "",
        "import os",
        "import sys",
        "",
        'sys.path.insert(0, os.environ.get("MOTIONFORGE_BLENDERLIB", "."))',
        "",
        f"from blenderlib import (\n{imports},\n)",
        "",
        'OUT_DIR = output_dir_from_argv(default="render_out")',
        "",
        f"# world bounds: {_fmt(wx)} x {_fmt(wy)} x {_fmt(wz)} m",
        "\n".join(setup),
    ]
    if creation:
        sections += ["", "\n".join(creation)]
    if physics:
        sections += ["", "\n".join(physics)]
    if forces:
        sections += ["", "\n".join(forces)]
    sections += ["", "\n".join(finish), ""]
    return ScriptText(body="\n".join(sections), origin="compiled", spec_digest=digest)


# ---------------------------------------------------------------------------
# Lint


@dataclass(frozen=True)
class LintFinding:
    kind: str  # forbidden-call | forbidden-import | path-escape | syntax-error | unresolvable-call
    message: str
    line: int
    col: int


@dataclass(frozen=True)
class LintReport:
    findings: tuple[LintFinding, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.findings

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


_WINDOWS_ABS = re.compile(r"^[A-Za-z]:[/\\]")


def _path_escapes(s: str) -> bool:
    has_sep = "/" in s or "\\" in s
    absolute = s.startswith(("/", "\\")) or bool(_WINDOWS_ABS.match(s))
    dotdot = ".." in re.split(r"[/\\]", s)
    return absolute or (dotdot and (has_sep or s == ".."))


class _Linter(ast.NodeVisitor):
    def __init__(self, whitelist: frozenset[str]):
        self.whitelist = whitelist
        self.aliases: dict[str, str] = {}
        self.findings: list[LintFinding] = []

    def flag(self, kind, message, node):
        self.findings.append(
            LintFinding(kind, message, getattr(node, "lineno", 0), getattr(node, "col_offset", 0)))

    def visit_Import(self, node):
        for alias in node.names:
            root = alias.name.split(".")[0]
            if root not in ALLOWED_MODULES:
                self.flag("forbidden-import", f"import of unlisted module {alias.name!r}", node)
            self.aliases[alias.asname or alias.name.split(".")[0]] = alias.name

    def visit_ImportFrom(self, node):
        if node.level:
            self.flag("forbidden-import", "relative imports are not allowed", node)
            return
        root = (node.module or "").split(".")[0]
        if root not in ALLOWED_MODULES:
            self.flag("forbidden-import", f"import of unlisted module {node.module!r}", node)
            return
        for alias in node.names:
            if alias.name == "*":
                self.flag("forbidden-import", "wildcard imports are not allowed", node)
                continue
            self.aliases[alias.asname or alias.name] = f"{node.module}.{alias.name}"

    def _dotted(self, node) -> str | None:
        parts = []
        while isinstance(node, ast.Attribute):
            parts.append(node.attr)
            node = node.value
        if not isinstance(node, ast.Name):
            return None
        parts.append(self.aliases.get(node.id, node.id))
        return ".".join(reversed(parts))

    def visit_Call(self, node):
        name = self._dotted(node.func)
        if name is None:
            self.flag("unresolvable-call", "call target cannot be resolved statically", node)
        elif "." in name:
            if name.startswith("blenderlib."):
                bare = name.split(".", 1)[1]
                if bare not in self.whitelist:
                    self.flag("forbidden-call", f"{bare!r} is not a library function", node)
            elif name not in ALLOWED_CALLS and not name.startswith(ALLOWED_CALL_PREFIXES):
                self.flag("forbidden-call", f"forbidden call {name!r}", node)
        else:
            if name not in self.whitelist and name not in SAFE_BUILTINS:
                self.flag("forbidden-call", f"forbidden call {name!r}", node)
        self.generic_visit(node)

    def visit_Constant(self, node):
        if isinstance(node.value, str) and _path_escapes(node.value):
            self.flag("path-escape", f"path literal escapes the asset root: {node.value!r}", node)


def lint_script(script: ScriptText, manifest: FunctionManifest | None = None) -> LintReport:
    """Static whitelist check; PASS only with zero findings. Never executes code."""
    manifest = manifest if manifest is not None else default_manifest()
    try:
        tree = ast.parse(script.body)
    except SyntaxError as e:
        return LintReport((LintFinding("syntax-error", f"syntax error: {e.msg}",
                                       e.lineno or 0, e.offset or 0),))
    linter = _Linter(manifest.names())
    linter.visit(tree)
    return LintReport(tuple(linter.findings))
