"""Binary cache for sieved S_r tables.

Layout: a fixed little-endian header (magic, version, r, lo, hi, SHA-256 of
the payload) followed by the values as little-endian int64. Anything that
does not match exactly is rejected with CacheInvalidError.
"""

from __future__ import annotations

import hashlib
import os
import struct
from pathlib import Path
from typing import Optional

import numpy as np

from .arith import SrTable
from .errors import CacheInvalidError

MAGIC = b"SRTB"
VERSION = 1
_HEADER = struct.Struct("<4sHQQQ32s")
CACHE_ENV = "SCHEMMEL_CACHE_DIR"


def save_table(table: SrTable, path) -> None:
    payload = np.ascontiguousarray(table.values, dtype="<i8").tobytes()
    header = _HEADER.pack(MAGIC, VERSION, table.r, table.lo, table.hi,
                          hashlib.sha256(payload).digest())
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    os.replace(tmp, path)


def load_table(path, r: Optional[int] = None, lo: Optional[int] = None,
               hi: Optional[int] = None) -> SrTable:
    """Read a cached table; the optional arguments must match the header."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise CacheInvalidError(f"{path}: truncated header")
    magic, version, r0, lo0, hi0, digest = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CacheInvalidError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheInvalidError(f"{path}: version {version}, expected {VERSION}")
    for name, want, got in (("r", r, r0), ("lo", lo, lo0), ("hi", hi, hi0)):
        if want is not None and want != got:
            raise CacheInvalidError(f"{path}: header {name}={got}, requested {want}")
    payload = raw[_HEADER.size:]
    if hi0 < lo0 or len(payload) != 8 * (hi0 - lo0 + 1):
        raise CacheInvalidError(f"{path}: payload length does not match header range")
    if hashlib.sha256(payload).digest() != digest:
        raise CacheInvalidError(f"{path}: checksum mismatch")
    values = np.frombuffer(payload, dtype="<i8").astype(np.int64)
    return SrTable(r0, lo0, hi0, values)


def cache_roundtrip(table: SrTable, path) -> SrTable:
    save_table(table, path)
    return load_table(path, table.r, table.lo, table.hi)


def cache_path(r: int, lo: int, hi: int, directory=None) -> Optional[Path]:
    directory = directory or os.environ.get(CACHE_ENV)
    if not directory:
        return None
    return Path(directory) / f"sr_r{r}_{lo}_{hi}.bin"
