"""Binary field snapshots.

Layout: ``b"SKDV"``, format byte ``0x01``, then little-endian ``u64 n_points``,
``f64 length``, ``f64 time``, ``u8 kind`` (0 real, 1 complex) and the payload
(``n`` f64 for real, ``2n`` interleaved f64 for complex).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import CorruptFileError, ParameterError, TruncatedFileError
from .spectral import Field, Grid1D

MAGIC = b"SKDV"
FORMAT = 1
HEADER = struct.Struct("<4sBQddB")
HEADER_SIZE = HEADER.size  # 30
KINDS = {"real": 0, "complex": 1}


def payload_size(n_points: int, tag: str) -> int:
    return 8 * n_points * (2 if tag == "complex" else 1)


def encode(f: Field, time: float = 0.0) -> bytes:
    if f.tag not in KINDS:
        raise ParameterError(f"unknown field tag {f.tag!r}")
    head = HEADER.pack(MAGIC, FORMAT, f.grid.n_points, float(f.grid.length), float(time), KINDS[f.tag])
    if f.tag == "real":
        body = np.ascontiguousarray(f.real_values, dtype="<f8")
    else:
        body = np.ascontiguousarray(f.values, dtype="<c16")
    return head + body.tobytes()


def decode(data: bytes):
    """Return ``(field, time)`` from snapshot bytes."""
    if len(data) < 5 or data[:4] != MAGIC or data[4] != FORMAT:
        raise CorruptFileError("not an SKDV v1 snapshot (bad magic or format byte)")
    if len(data) < HEADER_SIZE:
        raise TruncatedFileError(f"snapshot header needs {HEADER_SIZE} bytes, file has {len(data)}")
    _, _, n, length, time, kind = HEADER.unpack_from(data)
    if kind not in (0, 1):
        raise CorruptFileError(f"unknown kind byte {kind}")
    tag = "real" if kind == 0 else "complex"
    expected = HEADER_SIZE + payload_size(n, tag)
    if len(data) != expected:
        raise TruncatedFileError(f"snapshot should be {expected} bytes, file has {len(data)}")
    if tag == "real":
        values = np.frombuffer(data, dtype="<f8", offset=HEADER_SIZE).astype(np.float64)
    else:
        values = np.frombuffer(data, dtype="<c16", offset=HEADER_SIZE).astype(np.complex128)
    return Field(Grid1D(int(n), float(length)), values, tag), float(time)


def write_snapshot(path, f: Field, time: float = 0.0):
    Path(path).write_bytes(encode(f, time))


def read_snapshot(path):
    return decode(Path(path).read_bytes())
