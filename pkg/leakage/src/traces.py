from typing import Any, Optional

import numpy as np

from leakage.src.events import CipherId


class PowerTrace:
    def __init__(self, samples: np.ndarray, plaintext: bytes) -> None:
        self.samples = samples
        self.plaintext = plaintext

    def __len__(self) -> int:
        return len(self.samples)


class TraceSet:
    """
    N traces of M samples with their plaintexts. samples is the N x M matrix
    W of the correlation formula; plaintexts is N x 16 uint8. Keys are never
    part of a trace set.
    """

    def __init__(self, samples: np.ndarray, plaintexts: np.ndarray, cipher_id: CipherId,
                 meta: Optional[dict[str, Any]] = None) -> None:
        assert samples.ndim == 2, "samples must be an N x M matrix"
        assert plaintexts.shape == (samples.shape[0], 16), "one 16 byte plaintext per trace"
        assert samples.shape[0] >= 1, "a trace set holds at least one trace"
        self.samples = samples
        self.plaintexts = plaintexts.astype(np.uint8)
        self.cipher_id = cipher_id
        self.meta = meta if meta is not None else {}

    @property
    def num_traces(self) -> int:
        return int(self.samples.shape[0])

    @property
    def samples_per_trace(self) -> int:
        return int(self.samples.shape[1])

    def __len__(self) -> int:
        return self.num_traces

    def trace(self, index: int) -> PowerTrace:
        return PowerTrace(self.samples[index], self.plaintexts[index].tobytes())

    @property
    def traces(self) -> list[PowerTrace]:
        return [self.trace(i) for i in range(self.num_traces)]

    def head(self, count: int) -> "TraceSet":
        assert 1 <= count <= self.num_traces
        return TraceSet(self.samples[:count], self.plaintexts[:count], self.cipher_id, dict(self.meta))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TraceSet):
            return NotImplemented
        return (self.cipher_id == other.cipher_id
                and np.array_equal(self.plaintexts, other.plaintexts)
                and np.array_equal(self.samples, other.samples))

    __hash__ = None  # type: ignore[assignment]
