import json

import pytest
from hypothesis import given, settings

from motionforge.dsl import (
    ParseError,
    SceneError,
    SchemaError,
    canonical_digest,
    parse_scene,
    parse_scene_json,
    serialize,
    serialize_json,
    validate_scene,
)
from strategies import scene_specs

MINIMAL = """
scene demo {}
camera { position 0 -5 2; look_at 0 0 1; }
"""

BASKETBALL = """
# thrown basketball, bouncy floor
scene bounce {
    frames 80;
    fps 24;
    resolution 1920 1080;
}
camera { position 0 -13.665 1.8521; look_at 0 0 1; }
object ball {
    source asset:basketball;
    size 0.24;
    mass 0.625;
    elasticity 0.8;
    position 0 0 4;
    physics rigid;
}
floor { elasticity 1; }
"""


def test_defaults_from_minimal_scene():
    spec = parse_scene(MINIMAL)
    assert spec.frames == 80
    assert spec.fps == 24
    assert spec.resolution == (1920, 1080)
    assert spec.name == "demo"
    assert spec.floor is None
    assert spec.objects == ()


def test_object_block_exact_values():
    spec = parse_scene(BASKETBALL)
    (ball,) = spec.objects
    assert ball.size == 0.24
    assert ball.mass == 0.625
    assert ball.position == (0.0, 0.0, 4.0)
    assert ball.physics == "rigid-active"
    assert ball.source == "asset:basketball"
    assert spec.floor.elasticity == 1.0


def test_duplicate_camera_rejected():
    src = MINIMAL + "camera { position 1 1 1; look_at 0 0 0; }\n"
    with pytest.raises(ParseError, match="duplicate camera") as exc:
        parse_scene(src)
    assert exc.value.location is not None


def test_missing_camera_rejected():
    with pytest.raises(ParseError, match="missing camera"):
        parse_scene("scene x {}")


def test_syntax_error_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_scene("scene x {\n  frames eighty;\n}")
    # the bad token sits on line 2
    assert exc.value.location.startswith("2:")


def test_unknown_keyword_rejected():
    with pytest.raises(ParseError, match="unknown keyword"):
        parse_scene("scene x { frames 8; }\ncamera { position 0 -5 2; look_at 0 0 0; }\nblob {}")
    with pytest.raises(ParseError, match="unknown keyword 'colour'"):
        parse_scene("scene x {}\ncamera { position 0 -5 2; look_at 0 0 0; }\n"
                    "object o { colour 1; }")


def test_duplicate_object_name_rejected():
    src = MINIMAL + "object a { size 1; }\nobject a { size 2; }\n"
    with pytest.raises(ParseError, match="duplicate object name"):
        parse_scene(src)


def test_json_round_trip_basketball():
    spec = parse_scene(BASKETBALL)
    again = parse_scene_json(serialize_json(spec))
    assert again == spec
    assert canonical_digest(again) == canonical_digest(spec)


def test_json_missing_frames_defaults_to_80():
    doc = {"schema": 1, "name": "x",
           "camera": {"position": [0, -5, 2], "look_at": [0, 0, 1]}}
    spec = parse_scene_json(json.dumps(doc))
    assert spec.frames == 80


def test_json_negative_mass_error_names_path():
    doc = serialize(parse_scene(BASKETBALL))
    doc["objects"][0]["mass"] = -1
    with pytest.raises(SchemaError) as exc:
        parse_scene_json(json.dumps(doc))
    assert exc.value.location == "objects[0].mass"


def test_json_unknown_field_rejected():
    doc = serialize(parse_scene(MINIMAL))
    doc["objects"] = [{"name": "a", "sizee": 2}]
    with pytest.raises(SchemaError, match="unknown field"):
        parse_scene_json(json.dumps(doc))


def test_digest_field_order_independent():
    spec = parse_scene(BASKETBALL)
    doc = serialize(spec)
    scrambled = json.dumps(dict(reversed(list(doc.items()))))
    assert parse_scene_json(scrambled) == spec
    assert canonical_digest(parse_scene_json(scrambled)) == canonical_digest(spec)


def test_digest_sensitive_to_frames():
    a = parse_scene(BASKETBALL)
    b = parse_scene(BASKETBALL.replace("frames 80;", "frames 81;"))
    assert canonical_digest(a) != canonical_digest(b)


def test_digest_shape():
    d = canonical_digest(parse_scene(MINIMAL))
    assert len(d) == 64
    assert set(d) <= set("0123456789abcdef")


def test_rigid_defaults_filled():
    spec = parse_scene(MINIMAL + "object b { physics rigid; }\n")
    (b,) = spec.objects
    assert b.mass == 1.0
    assert b.elasticity == 0.5


def test_mass_on_cloth_rejected():
    src = MINIMAL + "object c { physics cloth; mass 2; }\n"
    with pytest.raises(SchemaError, match="rigid"):
        parse_scene(src)


def test_liquid_scene_gets_auto_domain():
    spec = parse_scene(MINIMAL + "object w { physics liquid; source sphere; position 0 0 3; }\n")
    kinds = {o.physics for o in spec.objects}
    assert "liquid-domain" in kinds
    domain = next(o for o in spec.objects if o.physics == "liquid-domain")
    assert domain.size == max(spec.world.dimensions)


def test_explicit_domain_not_duplicated():
    src = MINIMAL + (
        "object w { physics liquid; position 0 0 3; }\n"
        "object tank { physics liquid-domain; source cube; size 8; position 0 0 4; }\n")
    spec = parse_scene(src)
    assert sum(o.physics == "liquid-domain" for o in spec.objects) == 1


def test_unknown_asset_rejected():
    with pytest.raises(SchemaError, match="unknown asset"):
        parse_scene(MINIMAL + "object a { source asset:spaceship; }\n")


def test_odd_resolution_rejected():
    with pytest.raises(SchemaError, match="even"):
        parse_scene("scene x { resolution 65 64; }\ncamera { position 0 -5 2; look_at 0 0 1; }")
    with pytest.raises(SchemaError, match="64x64"):
        parse_scene("scene x { resolution 62 64; }\ncamera { position 0 -5 2; look_at 0 0 1; }")


def test_camera_position_lookat_coincide_rejected():
    with pytest.raises(SchemaError, match="coincide"):
        parse_scene("scene x {}\ncamera { position 1 1 1; look_at 1 1 1; }")


def test_wind_direction_normalized():
    spec = parse_scene(MINIMAL + "wind { direction 3 4 0; strength 10; }\n")
    (wind,) = spec.forces
    assert wind.direction == pytest.approx((0.6, 0.8, 0.0))


def test_zero_wind_direction_rejected():
    with pytest.raises(SchemaError, match="nonzero"):
        parse_scene(MINIMAL + "wind { direction 0 0 0; strength 10; }\n")


def test_negative_wind_strength_rejected():
    with pytest.raises(SchemaError, match="strength"):
        parse_scene(MINIMAL + "wind { direction 1 0 0; strength -3; }\n")


def test_throw_parsed_and_validated():
    src = MINIMAL + (
        "object ball { physics rigid; position 0 0 4;"
        " throw { target_height 1.8521; distance 13.665; } }\n")
    spec = parse_scene(src)
    (ball,) = spec.objects
    assert ball.throw.target_height == 1.8521
    assert ball.throw.distance == 13.665

    bad = src.replace("target_height 1.8521", "target_height 9")
    with pytest.raises(SchemaError, match="below the object"):
        parse_scene(bad)


def test_throw_conflicts_with_velocity():
    src = MINIMAL + (
        "object ball { physics rigid; position 0 0 4; velocity 0 1 0;"
        " throw { target_height 1; distance 2; } }\n")
    with pytest.raises(SchemaError, match="mutually exclusive"):
        parse_scene(src)


def test_every_error_names_a_location():
    bad_sources = [
        "scene x { frames 0; }\ncamera { position 0 -5 2; look_at 0 0 1; }",
        "scene x {}\ncamera { position 0 -5 2; look_at 0 0 1; }\nobject a { size -1; }",
        "scene x {}",
        "scene x { frames 8 }",
    ]
    for src in bad_sources:
        with pytest.raises(SceneError) as exc:
            parse_scene(src)
        assert exc.value.location, src


@settings(max_examples=60, deadline=None)
@given(scene_specs())
def test_round_trip_is_identity_on_validated_specs(spec):
    text = serialize_json(spec)
    again = parse_scene_json(text)
    assert again == spec
    assert canonical_digest(again) == canonical_digest(spec)


@settings(max_examples=60, deadline=None)
@given(scene_specs())
def test_validation_is_idempotent(spec):
    assert validate_scene(spec) == spec
