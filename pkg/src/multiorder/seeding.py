"""Named-stream seed derivation: all randomness flows from one root seed."""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big")
