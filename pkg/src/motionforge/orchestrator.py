"""Headless render orchestration: run Blender on a linted script, ingest and
validate the condition frames it writes, and cache results content-addressed.

One orchestrator instance runs one Blender subprocess at a time. The cache key
mixes the scene digest with the Blender version string and a fingerprint of
the scene-library sources, since any of the three changes the output. Cached
entries carry per-file checksums; a corrupted entry is treated as a miss.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
import subprocess
import tempfile
from pathlib import Path

from .codegen import FunctionManifest, ScriptText, lint_script
from .frames import ConditionSequence, SequenceError, load_condition_dir, write_condition_dir

logger = logging.getLogger("motionforge.orchestrator")

DEFAULT_TIMEOUT_S = 1800.0  # generous: full fluid bakes dwarf the usual few minutes

_PROXY_VARS = ("http_proxy", "https_proxy", "ftp_proxy", "all_proxy", "no_proxy",
               "HTTP_PROXY", "HTTPS_PROXY", "FTP_PROXY", "ALL_PROXY", "NO_PROXY")


class RenderError(RuntimeError):
    pass


class LintGateError(RenderError):
    pass


class BlenderNotFoundError(RenderError):
    pass


class RenderTimeoutError(RenderError):
    pass


class RenderFailedError(RenderError):
    pass


class SequenceMismatchError(RenderError):
    pass


def _sandboxed_env(blenderlib_path: str | None, assets_path: str | None) -> dict:
    """Subprocess environment with proxy routes stripped.

    True network isolation is left to the platform; the primary containment is
    the static lint gate, which rejects scripts importing network modules.
    """
    env = {k: v for k, v in os.environ.items() if k not in _PROXY_VARS}
    if blenderlib_path:
        env["MOTIONFORGE_BLENDERLIB"] = str(blenderlib_path)
    if assets_path:
        env["MOTIONFORGE_ASSETS"] = str(assets_path)
    return env


class RenderOrchestrator:
    def __init__(self, blender_path: str | Path,
                 cache_root: str | Path | None = None,
                 blenderlib_path: str | Path | None = None,
                 assets_path: str | Path | None = None,
                 manifest: FunctionManifest | None = None,
                 timeout_s: float = DEFAULT_TIMEOUT_S):
        self.blender_path = str(blender_path)
        self.cache_root = Path(cache_root) if cache_root else None
        self.blenderlib_path = str(blenderlib_path) if blenderlib_path else None
        self.assets_path = str(assets_path) if assets_path else None
        self.manifest = manifest
        self.timeout_s = timeout_s
        self._version: str | None = None

    # -- version / fingerprint -------------------------------------------------

    def blender_version(self) -> str:
        if self._version is None:
            if not shutil.which(self.blender_path) and not Path(self.blender_path).is_file():
                raise BlenderNotFoundError(f"blender binary not found: {self.blender_path}")
            try:
                out = subprocess.run([self.blender_path, "--version"],
                                     capture_output=True, text=True, timeout=60)
            except (OSError, subprocess.TimeoutExpired) as e:
                raise BlenderNotFoundError(f"cannot run {self.blender_path}: {e}") from e
            first = (out.stdout or "").splitlines() or [""]
            self._version = first[0].strip() or "unknown"
            if "3.6" not in self._version:
                logger.warning("expected Blender 3.6, found %r", self._version)
        return self._version

    def library_fingerprint(self) -> str:
        if not self.blenderlib_path:
            return "none"
        root = Path(self.blenderlib_path)
        digest = hashlib.sha256()
        for p in sorted(root.rglob("*.py")):
            digest.update(str(p.relative_to(root)).encode())
            digest.update(p.read_bytes())
        return digest.hexdigest()[:16]

    # -- rendering ---------------------------------------------------------------

    def render(self, script: ScriptText, out_dir: str | Path,
               timeout_s: float | None = None) -> ConditionSequence:
        """Run the script under headless Blender and ingest the frames it wrote."""
        report = lint_script(script, self.manifest)
        if not report.passed:
            details = "; ".join(f"{f.kind}: {f.message}" for f in report.findings[:5])
            raise LintGateError(f"script failed lint ({len(report.findings)} findings): {details}")
        if not shutil.which(self.blender_path) and not Path(self.blender_path).is_file():
            raise BlenderNotFoundError(f"blender binary not found: {self.blender_path}")

        out = Path(out_dir)
        frames_dir = out / "conditions"
        frames_dir.mkdir(parents=True, exist_ok=True)
        script_path = out / "scene_script.py"
        script_path.write_text(script.body, encoding="utf-8")

        # --python-exit-code makes an unhandled script exception fail the process
        argv = [self.blender_path, "--background", "--python-exit-code", "1",
                "--python", str(script_path), "--", "--out", str(frames_dir)]
        timeout = timeout_s if timeout_s is not None else self.timeout_s
        try:
            proc = subprocess.run(
                argv, capture_output=True, text=True, timeout=timeout,
                env=_sandboxed_env(self.blenderlib_path, self.assets_path))
        except subprocess.TimeoutExpired as e:
            raise RenderTimeoutError(
                f"render exceeded {timeout:.0f}s and was killed") from e
        if proc.returncode != 0:
            tail = (proc.stderr or proc.stdout or "").strip().splitlines()[-5:]
            raise RenderFailedError(
                f"blender exited {proc.returncode}: " + " | ".join(tail))
        try:
            return load_condition_dir(frames_dir, source_digest=script.spec_digest)
        except SequenceError as e:
            raise SequenceMismatchError(str(e)) from e

    # -- cache ---------------------------------------------------------------

    def cache_key(self, spec_digest: str) -> str:
        parts = f"{spec_digest}\n{self.blender_version()}\n{self.library_fingerprint()}"
        return hashlib.sha256(parts.encode("utf-8")).hexdigest()

    def _entry_dir(self, key: str) -> Path:
        if self.cache_root is None:
            raise RenderError("no cache_root configured")
        return self.cache_root / key

    def cache_put(self, key: str, seq: ConditionSequence) -> None:
        entry = self._entry_dir(key)
        entry.parent.mkdir(parents=True, exist_ok=True)
        tmp = Path(tempfile.mkdtemp(dir=entry.parent, prefix=".staging-"))
        try:
            write_condition_dir(seq, tmp, extra_manifest={
                "source_digest": seq.source_digest,
            })
            checksums = {}
            for p in sorted(tmp.iterdir()):
                if p.name != "checksums.json":
                    checksums[p.name] = hashlib.sha256(p.read_bytes()).hexdigest()
            (tmp / "checksums.json").write_text(
                json.dumps(checksums, indent=2), encoding="utf-8")
            if entry.exists():
                shutil.rmtree(entry)
            os.replace(tmp, entry)
        except BaseException:
            shutil.rmtree(tmp, ignore_errors=True)
            raise

    def cache_get(self, key: str) -> ConditionSequence | None:
        entry = self._entry_dir(key)
        if not entry.is_dir():
            return None
        checksum_file = entry / "checksums.json"
        try:
            checksums = json.loads(checksum_file.read_text(encoding="utf-8"))
            for name, expected in checksums.items():
                actual = hashlib.sha256((entry / name).read_bytes()).hexdigest()
                if actual != expected:
                    raise SequenceError(f"checksum mismatch on {name}")
            manifest = json.loads((entry / "manifest.json").read_text(encoding="utf-8"))
            return load_condition_dir(entry, source_digest=manifest.get("source_digest"))
        except (OSError, ValueError, SequenceError) as e:
            logger.warning("cache entry %s is corrupt, treating as miss: %s", key, e)
            return None
