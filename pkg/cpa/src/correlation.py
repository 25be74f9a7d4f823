"""
Pearson correlation between traces and hypotheses from five running sums.

For N traces, sample column j and guess g:

    rho[g, j] = (N * sum(W H) - sum(W) sum(H))
                / sqrt((N * sum(W^2) - sum(W)^2) (N * sum(H^2) - sum(H)^2))

The sums are float64 torch tensors updated batch by batch in ascending trace
order, so a correlation can be read off after any number of traces and two
accumulators over disjoint traces can be merged.
"""
from typing import Union

import numpy as np
import torch

from cpa.src.constants import CHUNK_SIZE, NUM_GUESSES, ZERO_VARIANCE_TOLERANCE
from cpa.src.selection import HypothesisMatrix
from tracelab.src.errors import InsufficientDataError

ArrayLike = Union[np.ndarray, torch.Tensor]


def _as_tensor(values: ArrayLike) -> torch.Tensor:
    if isinstance(values, torch.Tensor):
        return values.to(torch.float64)
    return torch.from_numpy(np.ascontiguousarray(values, dtype=np.float64))


class CorrelationMatrix:
    """
    num_guesses x M correlations. Entries whose column or guess has zero
    variance are NaN (undefined).
    """

    def __init__(self, c: torch.Tensor) -> None:
        self.c = c

    @property
    def shape(self) -> tuple[int, int]:
        return int(self.c.shape[0]), int(self.c.shape[1])

    def defined(self) -> torch.Tensor:
        return ~torch.isnan(self.c)

    def peaks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Per guess: max |rho| over time (NaN when nothing is defined), the
        sample index of that maximum and the sign of rho there.
        """
        magnitude = torch.where(self.defined(), self.c.abs(), torch.full_like(self.c, -1.0))
        values, times = magnitude.max(dim=1)
        signs = torch.sign(torch.gather(self.c, 1, times[:, None]))[:, 0]
        scores = values.numpy().copy()
        scores[scores < 0] = np.nan
        return scores, times.numpy().copy(), np.nan_to_num(signs.numpy(), nan=0.0)

    def numpy(self) -> np.ndarray:
        return self.c.numpy()


class CorrelationAccumulator:
    def __init__(self, num_samples: int, num_guesses: int = NUM_GUESSES) -> None:
        if num_samples < 1:
            raise InsufficientDataError("traces hold no samples")
        self.count = 0
        self.sum_w = torch.zeros(num_samples, dtype=torch.float64)
        self.sum_w2 = torch.zeros(num_samples, dtype=torch.float64)
        self.sum_h = torch.zeros(num_guesses, dtype=torch.float64)
        self.sum_h2 = torch.zeros(num_guesses, dtype=torch.float64)
        self.sum_wh = torch.zeros(num_guesses, num_samples, dtype=torch.float64)

    def update(self, w: ArrayLike, h: ArrayLike) -> None:
        w_t = _as_tensor(w)
        h_t = _as_tensor(h)
        assert w_t.shape[0] == h_t.shape[0], "one hypothesis row per trace"
        self.count += int(w_t.shape[0])
        self.sum_w += w_t.sum(dim=0)
        self.sum_w2 += (w_t * w_t).sum(dim=0)
        self.sum_h += h_t.sum(dim=0)
        self.sum_h2 += (h_t * h_t).sum(dim=0)
        self.sum_wh += h_t.T @ w_t

    def merge(self, other: "CorrelationAccumulator") -> None:
        assert self.sum_wh.shape == other.sum_wh.shape
        self.count += other.count
        self.sum_w += other.sum_w
        self.sum_w2 += other.sum_w2
        self.sum_h += other.sum_h
        self.sum_h2 += other.sum_h2
        self.sum_wh += other.sum_wh

    def correlation(self) -> CorrelationMatrix:
        if self.count < 2:
            raise InsufficientDataError(f"correlation needs at least 2 traces, got {self.count}")
        n = float(self.count)
        var_w = n * self.sum_w2 - self.sum_w * self.sum_w
        var_h = n * self.sum_h2 - self.sum_h * self.sum_h
        flat_w = var_w <= ZERO_VARIANCE_TOLERANCE * n * self.sum_w2
        flat_h = var_h <= ZERO_VARIANCE_TOLERANCE * n * self.sum_h2
        numerator = n * self.sum_wh - torch.outer(self.sum_h, self.sum_w)
        denominator = torch.sqrt(torch.outer(var_h.clamp(min=0.0), var_w.clamp(min=0.0)))
        c = numerator / denominator
        undefined = flat_h[:, None] | flat_w[None, :]
        c = torch.where(undefined, torch.full_like(c, float("nan")), c.clamp(-1.0, 1.0))
        return CorrelationMatrix(c)


def pearson_correlate(w: ArrayLike, h: HypothesisMatrix, chunk_size: int = CHUNK_SIZE) -> CorrelationMatrix:
    num_traces = int(w.shape[0])
    if num_traces != h.num_traces:
        raise InsufficientDataError(f"{num_traces} traces but {h.num_traces} hypothesis rows")
    accumulator = CorrelationAccumulator(int(w.shape[1]), int(h.h.shape[1]))
    for start in range(0, num_traces, chunk_size):
        accumulator.update(w[start:start + chunk_size], h.h[start:start + chunk_size])
    return accumulator.correlation()
