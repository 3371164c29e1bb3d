"""File formats: frame binary/text, set and point JSON, CSV profiles, manifests.

Binary frames: magic "QPF1", little-endian u64 n, u64 N, then row-major
interleaved f64 (re, im).  Text frames: first line "n N", then n lines of
N whitespace-separated "re,im" pairs at 17 significant digits, which is
enough to round-trip every f64 exactly.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError

MAGIC = b"QPF1"


def write_frame_binary(path, matrix: np.ndarray) -> None:
    m = np.ascontiguousarray(matrix, dtype=np.complex128)
    n, N = m.shape
    inter = np.empty((n, N, 2), dtype="<f8")
    inter[:, :, 0] = m.real
    inter[:, :, 1] = m.imag
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<QQ", n, N))
        fh.write(inter.tobytes())


def read_frame_binary(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic {data[:4]!r}")
    if len(data) < 20:
        raise FormatError(f"{path}: truncated header")
    n, N = struct.unpack("<QQ", data[4:20])
    need = 20 + 16 * n * N
    if len(data) != need:
        raise FormatError(f"{path}: expected {need} bytes, got {len(data)}")
    inter = np.frombuffer(data, dtype="<f8", offset=20).reshape(n, N, 2)
    return inter[:, :, 0] + 1j * inter[:, :, 1]


def write_frame_text(path, matrix: np.ndarray) -> None:
    m = np.asarray(matrix, dtype=np.complex128)
    n, N = m.shape
    with open(path, "w") as fh:
        fh.write(f"{n} {N}\n")
        for row in m:
            fh.write(" ".join(f"{c.real:.17g},{c.imag:.17g}" for c in row))
            fh.write("\n")


def read_frame_text(path) -> np.ndarray:
    try:
        lines = Path(path).read_text().splitlines()
        n, N = map(int, lines[0].split())
        out = np.empty((n, N), dtype=np.complex128)
        for i in range(n):
            pairs = lines[1 + i].split()
            if len(pairs) != N:
                raise ValueError(f"row {i}: {len(pairs)} entries, expected {N}")
            for j, pair in enumerate(pairs):
                re, im = pair.split(",")
                out[i, j] = complex(float(re), float(im))
        return out
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def write_json(path, obj: dict) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def write_profile_csv(path, ks, magnitudes, value_header: str = "magnitude") -> None:
    with open(path, "w") as fh:
        fh.write(f"k,{value_header}\n")
        for k, v in zip(ks, magnitudes):
            fh.write(f"{k},{v:.17g}\n")


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(path, command: list, parameters: dict, seed, version: str,
                   outputs: list, timings: dict) -> dict:
    man = {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "version": version,
        "outputs": {str(Path(p).name): sha256_file(p) for p in outputs},
        "timings": timings,
    }
    write_json(path, man)
    return man
