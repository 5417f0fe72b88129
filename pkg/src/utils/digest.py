"""Stable identifiers for canonical serializations."""

import hashlib
import json
from typing import Any


def canonical_digest(*args: Any, **kwargs: Any) -> str:
    """Generate a short stable key from already-canonical arguments."""
    key_data = json.dumps({"args": args, "kwargs": kwargs}, sort_keys=True, default=str)
    return hashlib.md5(key_data.encode()).hexdigest()[:16]
