"""Scene description language: text parser, canonical JSON form, validation, digests.

Two input syntaxes produce the same canonical ``SceneSpec``:

* ``.scene`` text files, a small block language meant for humans and LLMs::

      scene bounce {
          frames 80;
          resolution 1920 1080;
      }
      camera { position 0 -13.665 1.8521; look_at 0 0 1; }
      object ball {
          source asset:basketball;
          size 0.24; mass 0.625; elasticity 0.8;
          position 0 0 4;
          physics rigid;
      }
      floor { elasticity 1; }

* ``.scene.json`` documents, the canonical machine serialization (top-level
  ``"schema": 1``). ``parse_scene_json(serialize_json(spec))`` is the identity
  on validated specs.

Validation normalizes as it checks: rigid defaults are filled in, force
directions are scaled to unit length, and liquid scenes without an explicit
domain get a domain box spanning the world dimensions. Every error names a
location, either ``line:col`` in the source text or a field path such as
``objects[0].mass``.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, replace

from .assets import AssetCatalog, default_catalog

SCHEMA_VERSION = 1
DEFAULT_FRAMES = 80
DEFAULT_FPS = 24
DEFAULT_RESOLUTION = (1920, 1080)
DEFAULT_WORLD = (20.0, 20.0, 20.0)
DEFAULT_RIGID_MASS = 1.0
DEFAULT_RIGID_ELASTICITY = 0.5

PRIMITIVES = ("sphere", "cube", "plane", "cylinder")
PHYSICS_KINDS = ("rigid-active", "rigid-passive", "cloth", "liquid-flow", "liquid-domain", "none")
RIGID_KINDS = ("rigid-active", "rigid-passive")
FORCE_KINDS = ("wind", "gravity-override")

# Friendlier aliases accepted by the text syntax only.
_PHYSICS_ALIASES = {"rigid": "rigid-active", "liquid": "liquid-flow"}

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class SceneError(ValueError):
    """A scene failed to parse or validate.

    ``location`` is either ``"line:col"`` in the source text or a field path
    such as ``objects[0].mass``.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        self.bare_message = message
        super().__init__(f"{location}: {message}" if location else message)


class ParseError(SceneError):
    pass


class SchemaError(SceneError):
    pass


@dataclass(frozen=True)
class CameraSpec:
    position: tuple[float, float, float]
    look_at: tuple[float, float, float]


@dataclass(frozen=True)
class ThrowSpec:
    """Request to derive an initial velocity: fall from the object's height to
    ``target_height`` while covering ``distance`` horizontally toward the camera."""

    target_height: float
    distance: float


@dataclass(frozen=True)
class ObjectSpec:
    name: str
    source: str = "sphere"  # primitive kind or "asset:<catalog key>"
    size: float = 1.0
    position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    physics: str = "none"
    mass: float | None = None  # rigid only
    elasticity: float | None = None  # rigid only, restitution in [0, 1]
    initial_velocity: tuple[float, float, float] | None = None  # rigid-active only
    throw: ThrowSpec | None = None  # rigid-active only, excludes initial_velocity


@dataclass(frozen=True)
class ForceSpec:
    kind: str  # "wind" | "gravity-override"
    direction: tuple[float, float, float]  # unit vector
    strength: float  # engine units (wind) or m/s^2 (gravity)


@dataclass(frozen=True)
class FloorSpec:
    elasticity: float = 1.0


@dataclass(frozen=True)
class WorldConfig:
    dimensions: tuple[float, float, float] = DEFAULT_WORLD


@dataclass(frozen=True)
class SceneSpec:
    name: str
    camera: CameraSpec
    frames: int = DEFAULT_FRAMES
    fps: int = DEFAULT_FPS
    resolution: tuple[int, int] = DEFAULT_RESOLUTION
    objects: tuple[ObjectSpec, ...] = ()
    forces: tuple[ForceSpec, ...] = ()
    floor: FloorSpec | None = None
    world: WorldConfig = WorldConfig()


# ---------------------------------------------------------------------------
# Validation


def _require(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise SchemaError(message, path)


def _finite(values, path: str) -> None:
    for v in values:
        _require(math.isfinite(v), "value must be finite", path)


def validate_scene(spec: SceneSpec, catalog: AssetCatalog | None = None) -> SceneSpec:
    """Check every invariant and return the normalized spec.

    Rigid objects get default mass/elasticity, force directions are normalized,
    and a fluid domain box is inserted when liquid flow has no enclosing domain.
    Raises SchemaError with a field path on the first violation.
    """
    catalog = catalog if catalog is not None else default_catalog()

    _require(bool(_IDENT_RE.match(spec.name)), f"invalid identifier {spec.name!r}", "name")
    _require(spec.frames >= 1, "frames must be >= 1", "frames")
    _require(spec.fps >= 1, "fps must be >= 1", "fps")
    w, h = spec.resolution
    _require(w >= 64 and h >= 64, "resolution must be at least 64x64", "resolution")
    _require(w % 2 == 0 and h % 2 == 0, "resolution must be even", "resolution")

    _finite(spec.world.dimensions, "world.dimensions")
    _require(all(d > 0 for d in spec.world.dimensions),
             "world dimensions must be positive", "world.dimensions")

    _finite(spec.camera.position, "camera.position")
    _finite(spec.camera.look_at, "camera.look_at")
    _require(spec.camera.position != spec.camera.look_at,
             "camera position and look_at coincide", "camera.look_at")

    objects = [_validate_object(o, i, catalog) for i, o in enumerate(spec.objects)]
    names = [o.name for o in objects]
    for i, n in enumerate(names):
        _require(names.index(n) == i, f"duplicate object name {n!r}", f"objects[{i}].name")

    forces = tuple(_validate_force(f, i) for i, f in enumerate(spec.forces))

    if spec.floor is not None:
        _finite([spec.floor.elasticity], "floor.elasticity")
        _require(0.0 <= spec.floor.elasticity <= 1.0,
                 "floor elasticity must be in [0, 1]", "floor.elasticity")

    has_flow = any(o.physics == "liquid-flow" for o in objects)
    has_domain = any(o.physics == "liquid-domain" for o in objects)
    if has_flow and not has_domain:
        objects.append(_auto_domain(spec.world, names))

    return replace(spec, objects=tuple(objects), forces=forces)


def _auto_domain(world: WorldConfig, taken: list[str]) -> ObjectSpec:
    name = "fluid_domain"
    n = 2
    while name in taken:
        name = f"fluid_domain_{n}"
        n += 1
    wx, wy, wz = world.dimensions
    return ObjectSpec(
        name=name,
        source="cube",
        size=float(max(wx, wy, wz)),
        position=(0.0, 0.0, wz / 2.0),
        physics="liquid-domain",
    )


def _validate_object(o: ObjectSpec, i: int, catalog: AssetCatalog) -> ObjectSpec:
    p = f"objects[{i}]"
    _require(bool(_IDENT_RE.match(o.name)), f"invalid identifier {o.name!r}", f"{p}.name")
    _require(o.physics in PHYSICS_KINDS,
             f"unknown physics kind {o.physics!r}", f"{p}.physics")
    _finite([o.size], f"{p}.size")
    _require(o.size > 0, "size must be > 0", f"{p}.size")
    _finite(o.position, f"{p}.position")

    if o.source.startswith("asset:"):
        key = o.source[len("asset:"):]
        _require(key in catalog, f"unknown asset {key!r}", f"{p}.source")
    else:
        _require(o.source in PRIMITIVES,
                 f"unknown primitive {o.source!r}", f"{p}.source")

    rigid = o.physics in RIGID_KINDS
    if rigid:
        mass = DEFAULT_RIGID_MASS if o.mass is None else o.mass
        elasticity = DEFAULT_RIGID_ELASTICITY if o.elasticity is None else o.elasticity
        _finite([mass], f"{p}.mass")
        _require(mass > 0, "mass must be > 0", f"{p}.mass")
        _finite([elasticity], f"{p}.elasticity")
        _require(0.0 <= elasticity <= 1.0, "elasticity must be in [0, 1]", f"{p}.elasticity")
        o = replace(o, mass=mass, elasticity=elasticity)
    else:
        _require(o.mass is None, "mass is only valid for rigid objects", f"{p}.mass")
        _require(o.elasticity is None,
                 "elasticity is only valid for rigid objects", f"{p}.elasticity")

    if o.initial_velocity is not None:
        _require(o.physics == "rigid-active",
                 "initial_velocity requires physics rigid-active", f"{p}.initial_velocity")
        _finite(o.initial_velocity, f"{p}.initial_velocity")
    if o.throw is not None:
        _require(o.physics == "rigid-active",
                 "throw requires physics rigid-active", f"{p}.throw")
        _require(o.initial_velocity is None,
                 "throw and initial_velocity are mutually exclusive", f"{p}.throw")
        _finite([o.throw.target_height, o.throw.distance], f"{p}.throw")
        _require(o.throw.distance >= 0, "throw distance must be >= 0", f"{p}.throw.distance")
        _require(o.throw.target_height < o.position[2],
                 "throw target_height must be below the object", f"{p}.throw.target_height")
    return o


def _validate_force(f: ForceSpec, i: int) -> ForceSpec:
    p = f"forces[{i}]"
    _require(f.kind in FORCE_KINDS, f"unknown force kind {f.kind!r}", f"{p}.kind")
    _finite(f.direction, f"{p}.direction")
    _finite([f.strength], f"{p}.strength")
    norm = math.sqrt(sum(c * c for c in f.direction))
    _require(norm > 0, "force direction must be nonzero", f"{p}.direction")
    if abs(norm - 1.0) > 1e-12:
        f = replace(f, direction=tuple(c / norm for c in f.direction))
    if f.kind == "wind":
        _require(f.strength >= 0, "wind strength must be >= 0", f"{p}.strength")
    return f


# ---------------------------------------------------------------------------
# Canonical JSON serialization


def _vec(t) -> list[float]:
    return [float(c) for c in t]


def serialize(spec: SceneSpec) -> dict:
    """Canonical JSON-ready document. Field names match the type definitions."""
    return {
        "schema": SCHEMA_VERSION,
        "name": spec.name,
        "frames": spec.frames,
        "fps": spec.fps,
        "resolution": [int(spec.resolution[0]), int(spec.resolution[1])],
        "world": {"dimensions": _vec(spec.world.dimensions)},
        "camera": {
            "position": _vec(spec.camera.position),
            "look_at": _vec(spec.camera.look_at),
        },
        "objects": [
            {
                "name": o.name,
                "source": o.source,
                "size": float(o.size),
                "position": _vec(o.position),
                "physics": o.physics,
                "mass": None if o.mass is None else float(o.mass),
                "elasticity": None if o.elasticity is None else float(o.elasticity),
                "initial_velocity": None if o.initial_velocity is None else _vec(o.initial_velocity),
                "throw": None if o.throw is None else {
                    "target_height": float(o.throw.target_height),
                    "distance": float(o.throw.distance),
                },
            }
            for o in spec.objects
        ],
        "forces": [
            {"kind": f.kind, "direction": _vec(f.direction), "strength": float(f.strength)}
            for f in spec.forces
        ],
        "floor": None if spec.floor is None else {"elasticity": float(spec.floor.elasticity)},
    }


def serialize_json(spec: SceneSpec) -> str:
    return json.dumps(serialize(spec), indent=2, sort_keys=True) + "\n"


def canonical_digest(spec: SceneSpec) -> str:
    """Stable 64-hex-char digest of the canonical form; field-order independent."""
    doc = json.dumps(serialize(spec), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(doc.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# JSON deserialization (field-path errors)


def _as_number(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError("expected a number", path)
    return float(v)


def _as_int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError("expected an integer", path)
    return v


def _as_str(v, path: str) -> str:
    if not isinstance(v, str):
        raise SchemaError("expected a string", path)
    return v


def _as_vec(v, n: int, path: str) -> tuple:
    if not isinstance(v, list) or len(v) != n:
        raise SchemaError(f"expected a list of {n} numbers", path)
    return tuple(_as_number(c, f"{path}[{k}]") for k, c in enumerate(v))


def _as_obj(v, path: str, allowed: set[str]) -> dict:
    if not isinstance(v, dict):
        raise SchemaError("expected an object", path)
    for k in v:
        if k not in allowed:
            raise SchemaError(f"unknown field {k!r}", f"{path}.{k}" if path else k)
    return v


def parse_scene_json(source: str, catalog: AssetCatalog | None = None) -> SceneSpec:
    """Parse the canonical machine serialization and validate it."""
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg}", f"{e.lineno}:{e.colno}") from e
    top = {"schema", "name", "frames", "fps", "resolution", "world",
           "camera", "objects", "forces", "floor"}
    _as_obj(doc, "", top)
    if "schema" in doc and doc["schema"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {doc['schema']!r}", "schema")
    if "camera" not in doc:
        raise SchemaError("missing camera", "camera")

    cam = _as_obj(doc["camera"], "camera", {"position", "look_at"})
    for key in ("position", "look_at"):
        if key not in cam:
            raise SchemaError(f"missing {key}", f"camera.{key}")
    camera = CameraSpec(
        position=_as_vec(cam["position"], 3, "camera.position"),
        look_at=_as_vec(cam["look_at"], 3, "camera.look_at"),
    )

    world = WorldConfig()
    if "world" in doc and doc["world"] is not None:
        wobj = _as_obj(doc["world"], "world", {"dimensions"})
        if "dimensions" in wobj:
            world = WorldConfig(_as_vec(wobj["dimensions"], 3, "world.dimensions"))

    objects = []
    if "objects" in doc and doc["objects"] is not None:
        if not isinstance(doc["objects"], list):
            raise SchemaError("expected a list", "objects")
        for i, od in enumerate(doc["objects"]):
            objects.append(_object_from_doc(od, f"objects[{i}]"))

    forces = []
    if "forces" in doc and doc["forces"] is not None:
        if not isinstance(doc["forces"], list):
            raise SchemaError("expected a list", "forces")
        for i, fd in enumerate(doc["forces"]):
            p = f"forces[{i}]"
            fobj = _as_obj(fd, p, {"kind", "direction", "strength"})
            for key in ("kind", "direction", "strength"):
                if key not in fobj:
                    raise SchemaError(f"missing {key}", f"{p}.{key}")
            forces.append(ForceSpec(
                kind=_as_str(fobj["kind"], f"{p}.kind"),
                direction=_as_vec(fobj["direction"], 3, f"{p}.direction"),
                strength=_as_number(fobj["strength"], f"{p}.strength"),
            ))

    floor = None
    if "floor" in doc and doc["floor"] is not None:
        fobj = _as_obj(doc["floor"], "floor", {"elasticity"})
        floor = FloorSpec(
            elasticity=_as_number(fobj.get("elasticity", 1.0), "floor.elasticity"))

    res = DEFAULT_RESOLUTION
    if "resolution" in doc and doc["resolution"] is not None:
        rv = doc["resolution"]
        if not isinstance(rv, list) or len(rv) != 2:
            raise SchemaError("expected a list of 2 integers", "resolution")
        res = (_as_int(rv[0], "resolution[0]"), _as_int(rv[1], "resolution[1]"))

    spec = SceneSpec(
        name=_as_str(doc.get("name", "untitled"), "name"),
        camera=camera,
        frames=_as_int(doc.get("frames", DEFAULT_FRAMES), "frames"),
        fps=_as_int(doc.get("fps", DEFAULT_FPS), "fps"),
        resolution=res,
        objects=tuple(objects),
        forces=tuple(forces),
        floor=floor,
        world=world,
    )
    return validate_scene(spec, catalog)


def _object_from_doc(od, p: str) -> ObjectSpec:
    fields = {"name", "source", "size", "position", "physics",
              "mass", "elasticity", "initial_velocity", "throw"}
    obj = _as_obj(od, p, fields)
    if "name" not in obj:
        raise SchemaError("missing name", f"{p}.name")
    throw = None
    if obj.get("throw") is not None:
        td = _as_obj(obj["throw"], f"{p}.throw", {"target_height", "distance"})
        for key in ("target_height", "distance"):
            if key not in td:
                raise SchemaError(f"missing {key}", f"{p}.throw.{key}")
        throw = ThrowSpec(
            target_height=_as_number(td["target_height"], f"{p}.throw.target_height"),
            distance=_as_number(td["distance"], f"{p}.throw.distance"),
        )
    mass = obj.get("mass")
    elasticity = obj.get("elasticity")
    velocity = obj.get("initial_velocity")
    return ObjectSpec(
        name=_as_str(obj["name"], f"{p}.name"),
        source=_as_str(obj.get("source", "sphere"), f"{p}.source"),
        size=_as_number(obj.get("size", 1.0), f"{p}.size"),
        position=_as_vec(obj.get("position", [0, 0, 0]), 3, f"{p}.position"),
        physics=_as_str(obj.get("physics", "none"), f"{p}.physics"),
        mass=None if mass is None else _as_number(mass, f"{p}.mass"),
        elasticity=None if elasticity is None else _as_number(elasticity, f"{p}.elasticity"),
        initial_velocity=None if velocity is None else _as_vec(velocity, 3, f"{p}.initial_velocity"),
        throw=throw,
    )


# ---------------------------------------------------------------------------
# Text syntax


@dataclass(frozen=True)
class _Token:
    kind: str  # "word" | "number" | "punct" | "eof"
    text: str
    line: int
    col: int

    @property
    def where(self) -> str:
        return f"{self.line}:{self.col}"


_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_:\-]*")
_NUMBER_RE = re.compile(r"-?(\d+\.\d*|\.\d+|\d+)([eE][-+]?\d+)?")


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch in "{};":
            tokens.append(_Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        m = _NUMBER_RE.match(source, i)
        if m and (ch.isdigit() or ch in "-."):
            tokens.append(_Token("number", m.group(0), line, col))
            col += m.end() - i
            i = m.end()
            continue
        m = _WORD_RE.match(source, i)
        if m:
            tokens.append(_Token("word", m.group(0), line, col))
            col += m.end() - i
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", f"{line}:{col}")
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect_punct(self, text: str) -> _Token:
        t = self.next()
        if t.kind != "punct" or t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.where)
        return t

    def expect_word(self, what: str) -> _Token:
        t = self.next()
        if t.kind != "word":
            raise ParseError(f"expected {what}, found {t.text!r}", t.where)
        return t


def _parse_props(p: _Parser) -> dict[str, tuple[_Token, list[_Token] | dict]]:
    """Parse `name value... ;` and nested `name { ... }` entries of a block."""
    props: dict[str, tuple[_Token, list[_Token] | dict]] = {}
    while True:
        t = p.peek()
        if t.kind == "punct" and t.text == "}":
            p.next()
            return props
        if t.kind == "eof":
            raise ParseError("unexpected end of input, expected '}'", t.where)
        key = p.expect_word("a property name")
        if key.text in props:
            raise ParseError(f"duplicate property {key.text!r}", key.where)
        if p.peek().kind == "punct" and p.peek().text == "{":
            p.next()
            props[key.text] = (key, _parse_props(p))
            continue
        values: list[_Token] = []
        while True:
            t = p.peek()
            if t.kind == "punct" and t.text == ";":
                p.next()
                break
            if t.kind in ("word", "number"):
                values.append(p.next())
            else:
                raise ParseError(f"expected ';', found {t.text!r}", t.where)
        props[key.text] = (key, values)


def _num(tok: _Token) -> float:
    if tok.kind != "number":
        raise ParseError(f"expected a number, found {tok.text!r}", tok.where)
    return float(tok.text)


def _prop_nums(props, key: str, n: int) -> tuple | None:
    if key not in props:
        return None
    tok, values = props[key]
    if isinstance(values, dict) or len(values) != n:
        raise ParseError(f"{key} expects {n} value(s)", tok.where)
    return tuple(_num(v) for v in values)


def _prop_int(props, key: str) -> int | None:
    got = _prop_nums(props, key, 1)
    if got is None:
        return None
    tok, _ = props[key]
    v = got[0]
    if v != int(v):
        raise ParseError(f"{key} expects an integer", tok.where)
    return int(v)


def _prop_word(props, key: str) -> str | None:
    if key not in props:
        return None
    tok, values = props[key]
    if isinstance(values, dict) or len(values) != 1 or values[0].kind != "word":
        raise ParseError(f"{key} expects one word", tok.where)
    return values[0].text


def _reject_unknown(props, allowed: set[str], context: str) -> None:
    for key, (tok, _) in props.items():
        if key not in allowed:
            raise ParseError(f"unknown keyword {key!r} in {context}", tok.where)


def parse_scene(source: str, catalog: AssetCatalog | None = None) -> SceneSpec:
    """Parse the text syntax and validate. Errors carry line:col locations."""
    p = _Parser(_tokenize(source))

    name = "untitled"
    frames, fps, resolution, world = None, None, None, None
    camera: CameraSpec | None = None
    objects: list[ObjectSpec] = []
    forces: list[ForceSpec] = []
    floor: FloorSpec | None = None
    seen_scene = False
    object_names: dict[str, _Token] = {}

    while True:
        t = p.next()
        if t.kind == "eof":
            break
        if t.kind != "word":
            raise ParseError(f"expected a block keyword, found {t.text!r}", t.where)

        if t.text == "scene":
            if seen_scene:
                raise ParseError("duplicate scene block", t.where)
            seen_scene = True
            if p.peek().kind == "word":
                name = p.next().text
            p.expect_punct("{")
            props = _parse_props(p)
            _reject_unknown(props, {"frames", "fps", "resolution", "world"}, "scene")
            frames = _prop_int(props, "frames")
            fps = _prop_int(props, "fps")
            res = _prop_nums(props, "resolution", 2)
            if res is not None:
                if any(v != int(v) for v in res):
                    raise ParseError("resolution expects integers", props["resolution"][0].where)
                resolution = (int(res[0]), int(res[1]))
            world_dims = _prop_nums(props, "world", 3)
            if world_dims is not None:
                world = WorldConfig(world_dims)

        elif t.text == "camera":
            if camera is not None:
                raise ParseError("duplicate camera", t.where)
            p.expect_punct("{")
            props = _parse_props(p)
            _reject_unknown(props, {"position", "look_at"}, "camera")
            pos = _prop_nums(props, "position", 3)
            look = _prop_nums(props, "look_at", 3)
            if pos is None or look is None:
                raise ParseError("camera requires position and look_at", t.where)
            camera = CameraSpec(position=pos, look_at=look)

        elif t.text == "object":
            name_tok = p.expect_word("an object name")
            if name_tok.text in object_names:
                raise ParseError(f"duplicate object name {name_tok.text!r}", name_tok.where)
            object_names[name_tok.text] = name_tok
            p.expect_punct("{")
            props = _parse_props(p)
            objects.append(_object_from_props(name_tok, props))

        elif t.text == "floor":
            if floor is not None:
                raise ParseError("duplicate floor block", t.where)
            p.expect_punct("{")
            props = _parse_props(p)
            _reject_unknown(props, {"elasticity"}, "floor")
            e = _prop_nums(props, "elasticity", 1)
            floor = FloorSpec(elasticity=e[0] if e is not None else 1.0)

        elif t.text in ("wind", "gravity"):
            kind = "wind" if t.text == "wind" else "gravity-override"
            p.expect_punct("{")
            props = _parse_props(p)
            _reject_unknown(props, {"direction", "strength"}, t.text)
            direction = _prop_nums(props, "direction", 3)
            strength = _prop_nums(props, "strength", 1)
            if direction is None or strength is None:
                raise ParseError(f"{t.text} requires direction and strength", t.where)
            forces.append(ForceSpec(kind=kind, direction=direction, strength=strength[0]))

        else:
            raise ParseError(f"unknown keyword {t.text!r}", t.where)

    if camera is None:
        raise ParseError("missing camera", "1:1")

    spec = SceneSpec(
        name=name,
        camera=camera,
        frames=frames if frames is not None else DEFAULT_FRAMES,
        fps=fps if fps is not None else DEFAULT_FPS,
        resolution=resolution if resolution is not None else DEFAULT_RESOLUTION,
        objects=tuple(objects),
        forces=tuple(forces),
        floor=floor,
        world=world if world is not None else WorldConfig(),
    )
    return validate_scene(spec, catalog)


def _object_from_props(name_tok: _Token, props) -> ObjectSpec:
    allowed = {"source", "size", "mass", "elasticity", "position",
               "velocity", "physics", "throw"}
    _reject_unknown(props, allowed, f"object {name_tok.text!r}")

    physics = _prop_word(props, "physics") or "none"
    physics = _PHYSICS_ALIASES.get(physics, physics)
    if physics not in PHYSICS_KINDS:
        raise ParseError(f"unknown physics kind {physics!r}", props["physics"][0].where)

    throw = None
    if "throw" in props:
        tok, sub = props["throw"]
        if not isinstance(sub, dict):
            raise ParseError("throw expects a block", tok.where)
        _reject_unknown(sub, {"target_height", "distance"}, "throw")
        target = _prop_nums(sub, "target_height", 1)
        distance = _prop_nums(sub, "distance", 1)
        if target is None or distance is None:
            raise ParseError("throw requires target_height and distance", tok.where)
        throw = ThrowSpec(target_height=target[0], distance=distance[0])

    size = _prop_nums(props, "size", 1)
    mass = _prop_nums(props, "mass", 1)
    elasticity = _prop_nums(props, "elasticity", 1)
    position = _prop_nums(props, "position", 3)
    velocity = _prop_nums(props, "velocity", 3)

    return ObjectSpec(
        name=name_tok.text,
        source=_prop_word(props, "source") or "sphere",
        size=size[0] if size is not None else 1.0,
        position=position if position is not None else (0.0, 0.0, 0.0),
        physics=physics,
        mass=mass[0] if mass is not None else None,
        elasticity=elasticity[0] if elasticity is not None else None,
        initial_velocity=velocity,
        throw=throw,
    )
