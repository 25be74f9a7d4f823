import numpy as np
import pytest
import torch

from cpa.src.correlation import CorrelationAccumulator, CorrelationMatrix, pearson_correlate
from cpa.src.selection import HypothesisMatrix
from tracelab.src.errors import InsufficientDataError


def two_pass(w: np.ndarray, h: np.ndarray) -> np.ndarray:
    dw = w - w.mean(axis=0)
    dh = h - h.mean(axis=0)
    covariance = dh.T @ dw
    return covariance / np.outer(np.sqrt((dh ** 2).sum(axis=0)), np.sqrt((dw ** 2).sum(axis=0)))


def random_problem(seed: int, n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, m)), rng.integers(0, 9, size=(n, 256)).astype(np.float64)


def test_matches_two_pass() -> None:
    w, h = random_problem(0, 50, 20)
    c = pearson_correlate(w, HypothesisMatrix(h, 0)).numpy()
    assert np.allclose(c, two_pass(w, h), atol=1e-9, rtol=0)


@pytest.mark.parametrize("seed", range(10))
def test_matches_two_pass_on_random_shapes(seed: int) -> None:
    rng = np.random.default_rng(100 + seed)
    n, m = int(rng.integers(10, 1000)), int(rng.integers(1, 300))
    w, h = random_problem(seed, n, m)
    c = pearson_correlate(w, HypothesisMatrix(h, 0), chunk_size=97).numpy()
    assert np.allclose(c, two_pass(w, h), atol=1e-9, rtol=0)


@pytest.mark.slow
def test_matches_two_pass_at_full_size() -> None:
    w, h = random_problem(1, 1000, 1000)
    c = pearson_correlate(w, HypothesisMatrix(h, 0)).numpy()
    assert np.allclose(c, two_pass(w, h), atol=1e-9, rtol=0)


def test_perfect_and_negated_correlation() -> None:
    rng = np.random.default_rng(2)
    h = rng.integers(0, 9, size=(40, 256)).astype(np.float64)
    w = np.stack([3.0 * h[:, 17] + 1.0, -h[:, 17]], axis=1)
    c = pearson_correlate(w, HypothesisMatrix(h, 0)).numpy()
    assert c[17, 0] == pytest.approx(1.0, abs=1e-9)
    assert c[17, 1] == pytest.approx(-1.0, abs=1e-9)


def test_bounded() -> None:
    w, h = random_problem(3, 5, 30)
    c = pearson_correlate(w, HypothesisMatrix(h, 0)).numpy()
    assert np.all(np.abs(c) <= 1.0 + 1e-12)


def test_positive_affine_invariance() -> None:
    w, h = random_problem(4, 60, 10)
    base = pearson_correlate(w, HypothesisMatrix(h, 0)).numpy()
    moved = pearson_correlate(2.5 * w - 7.0, HypothesisMatrix(0.5 * h + 3.0, 0)).numpy()
    assert np.allclose(base, moved, atol=1e-9, rtol=0)


def test_constant_column_is_undefined() -> None:
    w, h = random_problem(5, 30, 4)
    w[:, 2] = 1.75
    h[:, 9] = 4.0
    c = pearson_correlate(w, HypothesisMatrix(h, 0))
    defined = c.defined().numpy()
    assert not defined[:, 2].any()
    assert not defined[9].any()
    assert defined[0, 0]


def test_needs_two_traces() -> None:
    w, h = random_problem(6, 1, 4)
    with pytest.raises(InsufficientDataError):
        pearson_correlate(w, HypothesisMatrix(h, 0))


def test_needs_samples() -> None:
    with pytest.raises(InsufficientDataError):
        CorrelationAccumulator(0)


def test_merged_accumulators_match_single_pass() -> None:
    w, h = random_problem(7, 80, 12)
    first = CorrelationAccumulator(12)
    first.update(w[:30], h[:30])
    second = CorrelationAccumulator(12)
    second.update(torch.from_numpy(w[30:]), torch.from_numpy(h[30:]))
    first.merge(second)
    assert first.count == 80
    single = pearson_correlate(w, HypothesisMatrix(h, 0)).numpy()
    assert np.allclose(first.correlation().numpy(), single, atol=1e-9, rtol=0)


def test_snapshot_equals_prefix() -> None:
    w, h = random_problem(8, 100, 6)
    accumulator = CorrelationAccumulator(6)
    accumulator.update(w[:40], h[:40])
    prefix = pearson_correlate(w[:40], HypothesisMatrix(h[:40], 0)).numpy()
    assert np.allclose(accumulator.correlation().numpy(), prefix, atol=1e-12, rtol=0)


def test_peaks() -> None:
    c = torch.zeros(256, 5, dtype=torch.float64)
    c[3, 4] = -0.8
    c[3, 1] = 0.5
    scores, times, signs = CorrelationMatrix(c).peaks()
    assert scores[3] == pytest.approx(0.8)
    assert times[3] == 4
    assert signs[3] == -1.0
