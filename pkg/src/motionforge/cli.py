"""Command-line entry point wiring the pipeline stages together.

Subcommands: compile | prompt | render | synthesize | eval | run | solve.
Exit codes: 0 ok, 2 validation, 3 external tool, 4 network, 5 internal.
Every stage that produces artifacts also writes a reproducibility record
(digests, seeds, versions); ``--dry-run`` prints the plan and touches nothing.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np
import yaml

from . import __version__, kinematics, metrics
from .assets import default_catalog
from .codegen import CodegenError, ScriptText, default_manifest, emit_script, lint_script
from .config import ConfigError, RunConfig, load_config
from .dsl import SceneError, SceneSpec, canonical_digest, parse_scene, parse_scene_json, serialize_json
from .frames import SequenceError, load_condition_dir, load_frame_dir
from .llm import (
    ExtractionError,
    LLMError,
    PromptError,
    build_prompt,
    default_template,
    extract_code,
    request_completion,
)
from .orchestrator import LintGateError, RenderError, RenderOrchestrator
from .synthesis.backends import BackendError, ExternalBackend, ToyBackend
from .synthesis.sampler import SamplerError, sample_video, write_run_record

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_TOOL = 3
EXIT_NETWORK = 4
EXIT_INTERNAL = 5


class StageError(Exception):
    """Wraps a stage failure with the stage name and an exit category."""

    def __init__(self, stage: str, exit_code: int, message: str):
        self.stage = stage
        self.exit_code = exit_code
        super().__init__(f"{stage}: {message}")


def _categorize(stage: str, e: Exception) -> StageError:
    if isinstance(e, LintGateError):
        code = EXIT_VALIDATION
    elif isinstance(e, (SceneError, CodegenError, PromptError, ExtractionError,
                        kinematics.KinematicsError, SequenceError,
                        metrics.MetricError, ConfigError, ValueError)):
        code = EXIT_VALIDATION
    elif isinstance(e, RenderError):
        code = EXIT_TOOL
    elif isinstance(e, (LLMError, BackendError)):
        code = EXIT_NETWORK
    elif isinstance(e, SamplerError) and isinstance(e.__cause__, BackendError):
        code = EXIT_NETWORK
    else:
        code = EXIT_INTERNAL
    return StageError(stage, code, str(e))


def _load_scene(path: Path) -> SceneSpec:
    text = path.read_text(encoding="utf-8")
    if path.name.endswith(".json"):
        return parse_scene_json(text)
    return parse_scene(text)


def _script_from_file(path: Path) -> ScriptText:
    body = path.read_text(encoding="utf-8")
    digest = None
    for line in body.splitlines():
        if line.startswith("# digest: "):
            digest = line.removeprefix("# digest: ").strip()
            break
    origin = "compiled" if digest else "llm"
    return ScriptText(body=body, origin=origin, spec_digest=digest)


def _versions() -> dict:
    return {
        "motionforge": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
    }


def _write_record(out_dir: Path, payload: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {**payload, "versions": _versions()}
    (out_dir / "record.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _backend_for(cfg: RunConfig):
    synth = cfg.synthesis
    if synth.backend == "external":
        if not cfg.external_backend_url:
            raise ConfigError("synthesis.backend is 'external' but external_backend_url is unset")
        return ExternalBackend(cfg.external_backend_url)
    return ToyBackend(edge_scale=synth.edge_scale, depth_scale=synth.depth_scale)


# ---------------------------------------------------------------------------
# Stage implementations (shared by the one-shot subcommands and cmd_run)


def _stage_compile(spec: SceneSpec, out_path: Path) -> ScriptText:
    script = emit_script(spec)
    report = lint_script(script)
    if not report.passed:
        raise LintGateError(f"compiled script failed lint: {report.findings[0].message}")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(script.body, encoding="utf-8")
    return script


def _stage_prompt(user_text: str, cfg: RunConfig, out_dir: Path) -> tuple[str, Path]:
    """Returns (kind, artifact path) where kind is 'scene' or 'script'."""
    if cfg.llm is None:
        raise ConfigError("no llm endpoint configured (set llm.base_url in the config file)")
    template = default_template(default_manifest(), default_catalog(), mode=cfg.mode)
    prompt = build_prompt(user_text, template)
    result = request_completion(prompt, cfg.llm, log_dir=out_dir)
    script = extract_code(result.text)
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.mode == "dsl":
        spec = parse_scene(script.body)  # gate: must be a valid scene document
        path = out_dir / "scene.scene"
        path.write_text(script.body, encoding="utf-8")
        (out_dir / "scene.json").write_text(serialize_json(spec), encoding="utf-8")
        return "scene", path
    report = lint_script(script)
    if not report.passed:
        details = "; ".join(f"{f.kind} at {f.line}:{f.col}: {f.message}"
                            for f in report.findings[:5])
        raise LintGateError(f"LLM script rejected: {details}")
    path = out_dir / "scene_script.py"
    path.write_text(script.body, encoding="utf-8")
    return "script", path


def _stage_render(script: ScriptText, cfg: RunConfig, out_dir: Path):
    orch = RenderOrchestrator(
        cfg.blender_path, cache_root=cfg.cache_root,
        blenderlib_path=cfg.blenderlib_path, assets_path=cfg.asset_root,
        timeout_s=cfg.render_timeout_s)
    key = None
    if script.spec_digest:
        key = orch.cache_key(script.spec_digest)
        cached = orch.cache_get(key)
        if cached is not None:
            print(f"render: cache hit {key[:12]}")
            return cached
    seq = orch.render(script, out_dir)
    if key is not None:
        orch.cache_put(key, seq)
    return seq


def _stage_synthesize(seq, cfg: RunConfig, out_dir: Path, digests: dict) -> Path:
    backend = _backend_for(cfg)
    stack = sample_video(seq, cfg.synthesis, backend)
    write_run_record(stack, cfg.synthesis, out_dir, digests=digests)
    return out_dir


def _stage_eval(frames_dir: Path, out_path: Path) -> metrics.MetricReport:
    frames = load_frame_dir(frames_dir)
    report = metrics.evaluate(frames)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    metrics.write_metrics(report, out_path)
    return report


# ---------------------------------------------------------------------------
# Subcommand handlers


def cmd_compile(args, cfg: RunConfig) -> int:
    scene_path = Path(args.scene)
    out_path = Path(args.output) if args.output else scene_path.with_suffix(".py")
    if args.dry_run:
        print(f"plan: parse {scene_path} -> validate -> emit -> lint -> write {out_path}")
        return EXIT_OK
    try:
        spec = _load_scene(scene_path)
        script = _stage_compile(spec, out_path)
    except Exception as e:
        raise _categorize("compile", e)
    print(f"digest: {script.spec_digest}")
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_prompt(args, cfg: RunConfig) -> int:
    out_dir = Path(args.output) if args.output else Path(cfg.run_root) / "prompt"
    if args.dry_run:
        print(f"plan: build prompt ({cfg.mode} mode) -> call {cfg.llm.base_url if cfg.llm else '<unconfigured>'}"
              f" -> extract -> gate -> write into {out_dir}")
        return EXIT_OK
    try:
        kind, path = _stage_prompt(args.text, cfg, out_dir)
    except Exception as e:
        raise _categorize("prompt", e)
    print(f"wrote {kind}: {path}")
    return EXIT_OK


def cmd_render(args, cfg: RunConfig) -> int:
    script_path = Path(args.script)
    out_dir = Path(args.output) if args.output else script_path.parent / "render"
    if args.dry_run:
        print(f"plan: lint {script_path} -> {cfg.blender_path} --background --python"
              f" -> ingest into {out_dir}")
        return EXIT_OK
    try:
        script = _script_from_file(script_path)
        seq = _stage_render(script, cfg, out_dir)
    except Exception as e:
        raise _categorize("render", e)
    print(f"rendered {seq.frame_count} frames at {seq.resolution[0]}x{seq.resolution[1]}")
    return EXIT_OK


def cmd_synthesize(args, cfg: RunConfig) -> int:
    cond_dir = Path(args.conditions)
    out_dir = Path(args.output) if args.output else cond_dir.parent / "frames"
    if args.dry_run:
        print(f"plan: load {cond_dir} -> shared noise (seed {cfg.synthesis.seed})"
              f" -> sample {cfg.synthesis.steps} steps on {cfg.synthesis.backend}"
              f" -> write {out_dir}")
        return EXIT_OK
    try:
        seq = load_condition_dir(cond_dir)
        digests = {"conditions": _dir_digest(cond_dir)}
        _stage_synthesize(seq, cfg, out_dir, digests)
    except Exception as e:
        raise _categorize("synthesize", e)
    print(f"wrote {seq.frame_count} frames to {out_dir}")
    return EXIT_OK


def cmd_eval(args, cfg: RunConfig) -> int:
    frames_dir = Path(args.frames)
    out_path = Path(args.output) if args.output else frames_dir / "metrics.json"
    if args.dry_run:
        print(f"plan: load {frames_dir} -> flicker + smoothness proxy -> write {out_path}")
        return EXIT_OK
    try:
        report = _stage_eval(frames_dir, out_path)
    except Exception as e:
        raise _categorize("eval", e)
    smooth = "n/a" if report.smoothness_proxy is None else f"{report.smoothness_proxy:.6f}"
    print(f"flicker: {report.flicker:.6f}")
    print(f"smoothness_proxy: {smooth}")
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_solve(args, cfg: RunConfig) -> int:
    if args.dry_run:
        print("plan: closed-form ballistic solve (no side effects)")
        return EXIT_OK
    try:
        q = kinematics.BallisticQuery(
            start_height=args.start, target_height=args.target,
            horizontal_distance=args.distance, g=args.g)
        velocity = kinematics.projectile_velocity(q)
        t = kinematics.fall_time(args.start - args.target, args.g)
    except Exception as e:
        raise _categorize("solve", e)
    print(f"fall_time: {t:.6f} s")
    print(f"velocity: ({velocity[0]:.3f}, {velocity[1]:.3f}, {velocity[2]:.3f}) m/s")
    return EXIT_OK


def _dir_digest(path: Path) -> str:
    digest = hashlib.sha256()
    for p in sorted(Path(path).glob("*")):
        if p.is_file():
            digest.update(p.name.encode())
            digest.update(p.read_bytes())
    return digest.hexdigest()


def cmd_run(args, cfg: RunConfig) -> int:
    source = Path(args.input)
    is_file = source.is_file()
    run_dir = Path(args.output) if args.output else None

    if args.dry_run:
        origin = f"scene file {source}" if is_file else f"prompt {args.input!r} via LLM"
        conditions = args.conditions or "headless render"
        print(f"plan: {origin} -> compile -> lint -> conditions ({conditions})"
              f" -> synthesize ({cfg.synthesis.backend}, {cfg.synthesis.steps} steps)"
              f" -> eval -> record")
        return EXIT_OK

    stages: list[str] = []
    record: dict = {"input": str(args.input), "seed": cfg.synthesis.seed}

    # stage: obtain a scene (dsl mode) or a ready script (script mode)
    spec = None
    script = None
    try:
        if is_file:
            spec = _load_scene(source)
        else:
            if run_dir is None:
                run_dir = Path(cfg.run_root) / "run-adhoc"
            kind, path = _stage_prompt(args.input, cfg, run_dir / "prompt")
            if kind == "script":
                script = _script_from_file(path)
            else:
                spec = _load_scene(path)
        stages.append("scene")
    except StageError:
        raise
    except Exception as e:
        raise _categorize("scene", e)

    if spec is not None:
        digest = canonical_digest(spec)
        if run_dir is None:
            run_dir = Path(cfg.run_root) / f"run-{digest[:12]}"
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "scene.json").write_text(serialize_json(spec), encoding="utf-8")
        record["scene_digest"] = digest
        try:
            script = _stage_compile(spec, run_dir / "script.py")
            stages.append("compile")
        except Exception as e:
            raise _categorize("compile", e)
    else:
        # LLM-authored script (already lint-gated by the prompt stage)
        digest = hashlib.sha256(script.body.encode()).hexdigest()
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "script.py").write_text(script.body, encoding="utf-8")
    record["script_sha256"] = hashlib.sha256(script.body.encode()).hexdigest()

    try:
        if args.conditions:
            seq = load_condition_dir(args.conditions)
            record["conditions"] = {"source": str(args.conditions),
                                    "digest": _dir_digest(Path(args.conditions))}
        else:
            seq = _stage_render(script, cfg, run_dir / "render")
            record["conditions"] = {"source": "render",
                                    "digest": _dir_digest(run_dir / "render" / "conditions")}
        stages.append("conditions")
    except StageError:
        raise
    except Exception as e:
        raise _categorize("conditions", e)

    try:
        frames_dir = run_dir / "frames"
        _stage_synthesize(seq, cfg, frames_dir,
                          digests={"scene": digest, **record["conditions"]})
        stages.append("synthesize")
    except Exception as e:
        raise _categorize("synthesize", e)

    try:
        report = _stage_eval(frames_dir, run_dir / "metrics.json")
        stages.append("eval")
    except Exception as e:
        raise _categorize("eval", e)

    record["stages"] = stages
    record["config"] = {
        "mode": cfg.mode,
        "synthesis": asdict(cfg.synthesis),
    }
    _write_record(run_dir, record)
    print(f"run dir: {run_dir}")
    print(f"flicker: {report.flicker:.6f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motionforge",
        description="Compile physical scenes, render condition maps, synthesize frames.")
    parser.add_argument("--config", help="YAML run configuration file")
    parser.add_argument("--version", action="version", version=f"motionforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--dry-run", action="store_true",
                       help="print the plan without side effects")
        return p

    p = add("compile", "compile a scene file to a Blender script")
    p.add_argument("scene")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_compile)

    p = add("prompt", "turn a text prompt into a gated scene or script via the LLM")
    p.add_argument("text")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_prompt)

    p = add("render", "run a linted script under headless Blender")
    p.add_argument("script")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_render)

    p = add("synthesize", "sample video frames from a condition directory")
    p.add_argument("conditions")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_synthesize)

    p = add("eval", "compute temporal metrics over a frame directory")
    p.add_argument("frames")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_eval)

    p = add("run", "full pipeline: scene/prompt -> conditions -> frames -> metrics")
    p.add_argument("input", help="a .scene/.scene.json file or a text prompt")
    p.add_argument("--conditions", help="use a pre-rendered condition directory")
    p.add_argument("-o", "--output", help="run directory")
    p.set_defaults(handler=cmd_run)

    p = add("solve", "closed-form ballistic solve")
    p.add_argument("start", type=float, help="start height (m)")
    p.add_argument("target", type=float, help="target height (m)")
    p.add_argument("distance", type=float, help="horizontal distance (m)")
    p.add_argument("--g", type=float, default=kinematics.STANDARD_GRAVITY)
    p.set_defaults(handler=cmd_solve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError, yaml.YAMLError) as e:
        print(f"config: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.handler(args, cfg)
    except StageError as e:
        print(str(e), file=sys.stderr)
        return e.exit_code
    except Exception as e:  # anything uncategorized is an internal error
        print(f"internal: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
