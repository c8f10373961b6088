"""
SHA-256 checksums for cache files and configuration fingerprints.
"""

import hashlib
import json
from typing import Any


def compute_checksum(data: bytes) -> str:
    """Compute SHA-256 checksum of data."""
    return hashlib.sha256(data).hexdigest()


def verify_checksum(data: bytes, expected: str) -> bool:
    """Verify SHA-256 checksum matches."""
    return compute_checksum(data) == expected


def canonical_json(value: Any) -> str:
    """JSON with sorted keys and no whitespace; floats use repr()."""
    return json.dumps(value, sort_keys=True, separators=(',', ':'), ensure_ascii=True)


def fingerprint(value: Any) -> str:
    """Digest of a JSON-serializable description of generating parameters."""
    return compute_checksum(canonical_json(value).encode('utf-8'))
