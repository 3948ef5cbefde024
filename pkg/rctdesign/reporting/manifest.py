"""Run manifest: config echo, input digests and the list of outputs."""

import hashlib
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ValidationError

from rctdesign import __version__
from rctdesign.errors import DatasetError
from rctdesign.utils.logger import get_logger

logger = get_logger("manifest")

MANIFEST_NAME = "manifest.json"


class RunManifest(BaseModel):
    tool_version: str
    command: str
    config: Dict[str, Any]
    seed: int
    inputs: Dict[str, str]
    started_at: str
    finished_at: str
    outputs: List[str]


def file_digest(path) -> str:
    """SHA-256 of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def write_manifest(
    out_dir,
    command: str,
    config: Dict[str, Any],
    seed: int,
    inputs: List[str],
    outputs: List[str],
    started_at: Optional[str] = None,
) -> Path:
    """Write manifest.json into `out_dir`; inputs are recorded by absolute path."""
    manifest = RunManifest(
        tool_version=__version__,
        command=command,
        config=config,
        seed=seed,
        inputs={str(Path(p).resolve()): file_digest(p) for p in inputs},
        started_at=started_at or utc_now(),
        finished_at=utc_now(),
        outputs=sorted(outputs),
    )
    path = Path(out_dir) / MANIFEST_NAME
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote manifest with {len(outputs)} outputs to {path}")
    return path


def verify_manifest(path) -> RunManifest:
    """Reload a manifest and check every input digest still matches."""
    try:
        manifest = RunManifest.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DatasetError(f"file not found: {path}")
    except ValidationError as e:
        raise DatasetError(f"{path} is not a run manifest: {e}")

    for input_path, expected in manifest.inputs.items():
        if not Path(input_path).exists():
            raise DatasetError(f"manifest input missing: {input_path}")
        if file_digest(input_path) != expected:
            raise DatasetError(f"digest mismatch for {input_path}")
    return manifest
