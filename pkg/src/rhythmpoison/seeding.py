"""Deterministic seed derivation.

Every per-item seed is a pure function of (master seed, item id), so batch
results never depend on processing order or parallelism degree.
"""

from __future__ import annotations

import hashlib
import struct

_MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, item_id: str) -> int:
    """Stable 64-bit seed: low 8 bytes of SHA-256(master_seed LE64 || item_id UTF-8)."""
    payload = struct.pack("<Q", master_seed & _MASK64) + item_id.encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    return struct.unpack("<Q", digest[:8])[0]
