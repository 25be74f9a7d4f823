"""
Binary trace-set files.

    magic 'SCAT' | version u16 | cipher id u8 | data length u16 |
    trace count u32 | samples per trace u32 |
    per trace: 16 plaintext bytes, then the samples as binary32

All integers and floats are little-endian. Keys are never written.
"""
import json
import logging
import struct
from pathlib import Path
from typing import Any, Union

import numpy as np

from leakage.src.events import CipherId
from leakage.src.traces import TraceSet
from tracelab.src.constants import TRACE_FILE_DATA_LEN, TRACE_FILE_HEADER, TRACE_FILE_MAGIC, TRACE_FILE_VERSION
from tracelab.src.errors import TraceFileCorruptionError, TraceFileFormatError

PathLike = Union[str, Path]

HEADER_SIZE = struct.calcsize(TRACE_FILE_HEADER)


def record_dtype(samples_per_trace: int) -> np.dtype:
    return np.dtype([("plaintext", np.uint8, (TRACE_FILE_DATA_LEN,)), ("samples", "<f4", (samples_per_trace,))])


def encode_trace_set(traceset: TraceSet) -> bytes:
    header = struct.pack(TRACE_FILE_HEADER, TRACE_FILE_MAGIC, TRACE_FILE_VERSION, traceset.cipher_id.value,
                         TRACE_FILE_DATA_LEN, traceset.num_traces, traceset.samples_per_trace)
    records = np.empty(traceset.num_traces, dtype=record_dtype(traceset.samples_per_trace))
    records["plaintext"] = traceset.plaintexts
    records["samples"] = traceset.samples.astype("<f4")
    return header + records.tobytes()


def decode_trace_set(data: bytes) -> TraceSet:
    if data[:4] != TRACE_FILE_MAGIC:
        raise TraceFileFormatError(f"bad magic {data[:4]!r}, expected {TRACE_FILE_MAGIC!r}")
    if len(data) < HEADER_SIZE:
        raise TraceFileCorruptionError(f"header needs {HEADER_SIZE} bytes, file has {len(data)}", len(data))

    magic, version, cipher_id, data_len, num_traces, samples_per_trace = \
        struct.unpack_from(TRACE_FILE_HEADER, data)
    assert magic == TRACE_FILE_MAGIC
    if version != TRACE_FILE_VERSION:
        raise TraceFileFormatError(f"unsupported version {version}, expected {TRACE_FILE_VERSION}")
    try:
        cipher = CipherId(cipher_id)
    except ValueError:
        raise TraceFileFormatError(f"unknown cipher id {cipher_id}") from None
    if data_len != TRACE_FILE_DATA_LEN:
        raise TraceFileFormatError(f"data length must be {TRACE_FILE_DATA_LEN}, got {data_len}")
    if num_traces == 0:
        raise TraceFileFormatError("file declares no traces")
    if samples_per_trace == 0:
        raise TraceFileFormatError("file declares traces without samples")

    dtype = record_dtype(samples_per_trace)
    payload = len(data) - HEADER_SIZE
    complete = payload // dtype.itemsize
    if complete < num_traces:
        raise TraceFileCorruptionError(
            f"header declares {num_traces} traces but only {complete} are complete",
            HEADER_SIZE + complete * dtype.itemsize)
    if payload > num_traces * dtype.itemsize:
        raise TraceFileCorruptionError("trailing bytes after the last trace", HEADER_SIZE + num_traces * dtype.itemsize)

    records = np.frombuffer(data, dtype=dtype, count=num_traces, offset=HEADER_SIZE)
    return TraceSet(records["samples"].astype(np.float32), records["plaintext"].copy(), cipher)


def write_trace_set(traceset: TraceSet, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_trace_set(traceset))
    logging.info(f"Wrote {traceset.num_traces} traces to {path}")


def read_trace_set(path: PathLike) -> TraceSet:
    traceset = decode_trace_set(Path(path).read_bytes())
    logging.info(f"Read {traceset.num_traces} x {traceset.samples_per_trace} {traceset.cipher_id.name} traces "
                 f"from {path}")
    return traceset


def sidecar_path(path: PathLike) -> Path:
    return Path(str(path) + ".json")


def write_sidecar(path: PathLike, description: dict[str, Any]) -> Path:
    """
    Writes how a trace file was produced next to it, as <path>.json. The
    trace file format has no room for it; keys are dropped here too.
    """
    description = {name: value for name, value in description.items() if name not in ("key", "true_key")}
    target = sidecar_path(path)
    target.write_text(json.dumps(description, indent=2, sort_keys=True, default=str) + "\n")
    logging.info(f"Wrote settings of {path} to {target}")
    return target


def read_sidecar(path: PathLike) -> dict[str, Any]:
    target = sidecar_path(path)
    if not target.exists():
        return {}
    description: dict[str, Any] = json.loads(target.read_text())
    return description
