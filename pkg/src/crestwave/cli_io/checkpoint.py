"""Binary state checkpoints.

Layout (all little-endian): magic b"CRWV", u32 format version, u32 grid
size, u32 flags (bit 0: position trace present), f64 time, then the
complex128 trace arrays in order zt_bar, inv_za, [z]. Exact round-trip:
the bytes written are the bytes of the arrays.
"""
from __future__ import annotations

import struct

import numpy as np

from ..spectral_core import Field
from ..state_model import WaterWaveState

__all__ = ["write_checkpoint", "read_checkpoint", "CheckpointError"]

MAGIC = b"CRWV"
VERSION = 1
_HEADER = struct.Struct("<4sIIId")


class CheckpointError(ValueError):
    pass


def write_checkpoint(path: str, state: WaterWaveState) -> None:
    flags = 1 if state.z is not None else 0
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, state.n, flags, state.t))
        fh.write(np.ascontiguousarray(state.zt_bar.values, dtype="<c16").tobytes())
        fh.write(np.ascontiguousarray(state.inv_za.values, dtype="<c16").tobytes())
        if state.z is not None:
            fh.write(np.ascontiguousarray(state.z.values, dtype="<c16").tobytes())


def read_checkpoint(path: str) -> WaterWaveState:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise CheckpointError(f"{path}: truncated header")
        magic, version, n, flags, t = _HEADER.unpack(head)
        if magic != MAGIC:
            raise CheckpointError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise CheckpointError(f"{path}: unsupported version {version}")
        count = 3 if flags & 1 else 2
        raw = fh.read(16 * n * count)
        if len(raw) != 16 * n * count:
            raise CheckpointError(f"{path}: truncated payload")
    arr = np.frombuffer(raw, dtype="<c16").astype(np.complex128)
    zt = Field(arr[:n])
    za = Field(arr[n:2 * n])
    z = Field(arr[2 * n:3 * n]) if flags & 1 else None
    return WaterWaveState(zt, za, z, float(t))
