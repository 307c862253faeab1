"""Line oriented key=value manifest with per file checksums

    config_hash=<sha256 of the canonical config>
    experiment=<experiment>
    seeds=<comma separated seeds>
    file.<relative path>=<sha256 of the file>
"""

import hashlib
import json
from pathlib import Path

from falsestructures.exceptions import SerializationError
from falsestructures.utils.logging import get_logger

logger = get_logger(__name__)

MANIFEST_NAME = "manifest.txt"
FILE_PREFIX = "file."


def sha256_file(path: Path) -> str:
    """Hex digest of a file"""
    digest = hashlib.sha256()
    with Path(path).open("rb") as stream:
        for chunk in iter(lambda: stream.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def config_hash(values: dict) -> str:
    """Hex digest of the canonical JSON of a config dump"""
    canonical = json.dumps(values, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_manifest(output_dir: Path, files: list[str], config_digest: str, experiment: str, seeds: list[int]) -> Path:
    """Write the manifest listing every artifact with its checksum"""
    output_dir = Path(output_dir)
    lines = [
        f"config_hash={config_digest}",
        f"experiment={experiment}",
        f"seeds={','.join(str(seed) for seed in seeds)}",
    ]
    lines += [f"{FILE_PREFIX}{name}={sha256_file(output_dir / name)}" for name in sorted(files)]
    path = output_dir / MANIFEST_NAME
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("Manifest written to %s (%d files)", path, len(files))
    return path


def read_manifest(path: Path) -> dict[str, str]:
    """Parse key=value lines"""
    entries = {}
    for number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise SerializationError(f"{path}:{number}: expected key=value, got {line!r}")
        entries[key] = value
    return entries


def verify_manifest(path: Path) -> list[str]:
    """Relative paths whose checksum no longer matches (missing files included), empty when all verify"""
    path = Path(path)
    failures = []
    for key, expected in read_manifest(path).items():
        if not key.startswith(FILE_PREFIX):
            continue
        name = key.removeprefix(FILE_PREFIX)
        target = path.parent / name
        if not target.is_file() or sha256_file(target) != expected:
            failures.append(name)
    if failures:
        logger.warning("Manifest %s: %d file(s) fail verification", path, len(failures))
    return failures
