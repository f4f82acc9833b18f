"""On-disk result cache.

One JSON file per key ``(descriptor, coefficients, degree, algorithm
version)``.  Files are published by writing a temporary file in the same
directory and renaming it over the target, so readers only ever see a
complete entry and concurrent writers of the same key simply race to
publish identical content.  Entries carry a SHA-256 of their payload;
anything that fails to parse, fails the checksum or has another
algorithm version is treated as absent.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .report import ALGORITHM_VERSION

ENV_VAR = "COHOMEX_CACHE"


def default_cache_dir() -> Path | None:
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def _checksum(payload) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


class ResultCache:
    def __init__(self, root: str | os.PathLike, version: str = ALGORITHM_VERSION):
        self.root = Path(root)
        self.version = version
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def key(self, descriptor: str, coeffs: str, degree: int) -> dict:
        return {"descriptor": descriptor, "coefficients": coeffs, "degree": degree,
                "algorithm_version": self.version}

    def path(self, key: dict) -> Path:
        digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
        return self.root / f"{digest[:32]}.json"

    def get(self, descriptor: str, coeffs: str, degree: int):
        key = self.key(descriptor, coeffs, degree)
        try:
            entry = json.loads(self.path(key).read_text())
            ok = (entry["key"] == key and entry["version"] == self.version
                  and entry["checksum"] == _checksum(entry["payload"]))
        except (OSError, ValueError, KeyError, TypeError):
            ok = False
        if not ok:
            self.misses += 1
            return None
        self.hits += 1
        return entry["payload"]

    def put(self, descriptor: str, coeffs: str, degree: int, payload) -> None:
        key = self.key(descriptor, coeffs, degree)
        entry = {"key": key, "version": self.version, "payload": payload,
                 "checksum": _checksum(payload)}
        target = self.path(key)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, target)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
