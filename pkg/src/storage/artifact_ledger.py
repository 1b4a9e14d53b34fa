import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Union

MANIFEST_NAME = "manifest.json"


def dumps_json(payload: Any) -> bytes:
    """Byte-stable JSON: sorted keys, fixed separators, trailing newline."""

    return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")


class ArtifactLedger:
    """Write run artifacts and track a chained sha256 root over their digests."""

    def __init__(self, base_path: Union[str, Path]) -> None:
        self.base_path = Path(base_path)
        self.base_path.mkdir(parents=True, exist_ok=True)
        self._current_root = ""
        self._digests: Dict[str, str] = {}

    def write(self, name: str, blob: Union[bytes, str]) -> Path:
        if isinstance(blob, str):
            blob = blob.encode("utf-8")
        digest = hashlib.sha256(blob).hexdigest()
        path = self.base_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(blob)
        self._digests[name] = digest
        self._current_root = self._combine_hash(self._current_root, digest)
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        return self.write(name, dumps_json(payload))

    def _combine_hash(self, left: str, right: str) -> str:
        material = (left + right).encode("utf-8")
        return hashlib.sha256(material).hexdigest()

    def close(self) -> Path:
        """Write ``manifest.json`` (file name -> digest, plus the root)."""

        manifest = {"files": dict(self._digests), "root": self._current_root}
        path = self.base_path / MANIFEST_NAME
        path.write_bytes(dumps_json(manifest))
        return path

    def get_current_root(self) -> str:
        return self._current_root
