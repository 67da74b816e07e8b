"""Run manifests: the resolved inputs and knobs behind every report.

A manifest is a plain JSON-serializable tree of sections (corpus files
with digests, vocabulary identities, snapshot digests, judge settings,
resolved design decisions, seed). Its content hash is embedded in every
emitted report, so any number in any output can be traced to the exact
inputs that produced it. Hashes cover content only, never timestamps.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _canonical(data: Any) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


@dataclass(frozen=True)
class RunManifest:
    """Immutable manifest; equal sections mean an identical content hash."""

    sections: Mapping[str, Any]

    @property
    def content_hash(self) -> str:
        return hashlib.sha256(_canonical(self.sections).encode("utf-8")).hexdigest()

    def to_dict(self) -> dict[str, Any]:
        out = dict(self.sections)
        out["content_hash"] = self.content_hash
        return out

    def write(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)
        path.write_text(payload + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RunManifest":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        stored = data.pop("content_hash", None)
        manifest = cls(sections=data)
        if stored is not None and stored != manifest.content_hash:
            raise ValueError(f"{path}: stored content hash does not match sections")
        return manifest


def directory_digests(directory: str | Path, pattern: str) -> dict[str, str]:
    """name -> sha256 for every file matching a glob, sorted by name."""
    directory = Path(directory)
    return {
        path.name: sha256_file(path)
        for path in sorted(directory.glob(pattern))
        if path.is_file()
    }


def stamp_line(manifest: RunManifest) -> str:
    """Comment line embedding the manifest hash into a CSV report."""
    return f"# manifest: {manifest.content_hash}"


def prepend_stamp(path: str | Path, manifest: RunManifest) -> None:
    """Prefix an emitted report file with its manifest stamp."""
    path = Path(path)
    body = path.read_text(encoding="utf-8")
    path.write_text(stamp_line(manifest) + "\n" + body, encoding="utf-8")
