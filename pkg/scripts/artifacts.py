"""
Self-describing stage artifacts.

Each pipeline stage writes one JSON document into the workspace::

    {"artifact": "coverage", "version": 1,
     "config": {...}, "config_hash": "<sha256>",
     "inputs": {"matrix": "<sha256 of matrix.json>"},
     "payload": {...}}

Documents are written with sorted keys and no timestamps so identical runs
produce identical bytes.  Readers check the embedded hash against the
embedded config and raise :class:`MissingArtifactError` naming the
subcommand that produces a missing artifact; :func:`require_config`
rejects upstream artifacts built under settings the current run disagrees
with.
"""

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from scripts.errors import DataError, MissingArtifactError
from scripts.run_config import config_hash

logger = logging.getLogger(__name__)

ARTIFACT_VERSION = 1

# artifact name -> (file name, producing subcommand)
ARTIFACTS = {
    "corpus": ("corpus.json", "ingest"),
    "matrix": ("matrix.json", "extract"),
    "coverage": ("coverage.json", "coverage"),
    "ensemble": ("ensemble.json", "cluster"),
    "hierarchy": ("hierarchy.json", "hierarchy"),
    "synth": ("synth.json", "synth"),
}

# config keys whose values shape each artifact's payload
_MATRIX_KEYS = ("lexicon", "input_mode", "encoding")
DEPENDS_ON = {
    "corpus": ("encoding",),
    "matrix": _MATRIX_KEYS,
    "coverage": _MATRIX_KEYS + ("polarity", "thresholds"),
    "ensemble": _MATRIX_KEYS + ("polarity", "seed", "ensemble", "vectors"),
}


@dataclass(frozen=True)
class Artifact:
    name: str
    path: Path
    config: dict
    config_hash: str
    inputs: dict
    payload: dict
    digest: str


def artifact_path(out_dir: Path, name: str) -> Path:
    return Path(out_dir) / ARTIFACTS[name][0]


def file_digest(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_artifact(out_dir: Path, name: str, payload: dict, config: dict,
                   inputs: Optional[dict] = None) -> Path:
    """Write the envelope for *name* and return its path."""
    path = artifact_path(out_dir, name)
    path.parent.mkdir(parents=True, exist_ok=True)
    envelope = {
        "artifact": name,
        "version": ARTIFACT_VERSION,
        "config": config,
        "config_hash": config_hash(config),
        "inputs": dict(sorted((inputs or {}).items())),
        "payload": payload,
    }
    text = json.dumps(envelope, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    path.write_text(text, encoding="utf-8", newline="\n")
    logger.info("Wrote %s artifact: %s", name, path)
    return path


def read_artifact(out_dir: Path, name: str) -> Artifact:
    """Load and verify the artifact *name* from *out_dir*."""
    file_name, producer = ARTIFACTS[name]
    path = Path(out_dir) / file_name
    if not path.exists():
        raise MissingArtifactError(file_name, producer)
    raw = path.read_bytes()
    try:
        envelope = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise DataError(f"artifact {path} is not valid JSON: {exc}") from exc
    if envelope.get("artifact") != name or envelope.get("version") != ARTIFACT_VERSION:
        raise DataError(f"artifact {path} is not a version-{ARTIFACT_VERSION} {name!r} artifact")
    if config_hash(envelope.get("config", {})) != envelope.get("config_hash"):
        raise DataError(f"artifact {path} failed its config hash check; re-run '{producer}'")
    return Artifact(
        name=name,
        path=path,
        config=envelope["config"],
        config_hash=envelope["config_hash"],
        inputs=envelope.get("inputs", {}),
        payload=envelope.get("payload", {}),
        digest=hashlib.sha256(raw).hexdigest(),
    )


def require_same_input(name: str, *artifacts: Artifact) -> str:
    """Check that *artifacts* were all derived from the same *name* input."""
    digests = {a.inputs.get(name) for a in artifacts}
    if len(digests) != 1 or None in digests:
        producers = ", ".join(sorted({ARTIFACTS[a.name][1] for a in artifacts}))
        raise DataError(f"stale artifacts: {producers} were computed from different {name} artifacts; re-run them")
    return digests.pop()


def require_config(artifact: Artifact, config: dict) -> None:
    """Check that *artifact* was built under the settings *config* relies on.

    Only the keys listed in :data:`DEPENDS_ON` for the artifact are
    compared; output-only settings may differ freely.
    """
    changed = sorted(
        key for key in DEPENDS_ON.get(artifact.name, ())
        if artifact.config.get(key) != config.get(key)
    )
    if changed:
        producer = ARTIFACTS[artifact.name][1]
        raise DataError(
            f"{artifact.path.name} was built with different {', '.join(changed)} "
            f"than this run; re-run '{producer}'"
        )
