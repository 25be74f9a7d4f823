import logging
import math
from enum import Enum

import numpy as np

from randomness.src.constants import ADC_BITS, ADC_SOURCE_FOLDS, ADC_STD_FRACTION, BIT_SOURCE_FOLDS
from randomness.src.prng import GeneratorBank, StreamPurpose
from tracelab.src.errors import ConfigurationError

MAX_ADC_BITS = 16
MAX_SEED_BITS = 64


class SeedSourceKind(Enum):
    BIASED_BITS = 1
    ADC_WORDS = 2


class SeedSource:
    """
    Simulated entropy source of the hardware seed generator.

    BIASED_BITS models digitised noise pulses that read 1 with probability
    p. ADC_WORDS models a k bit converter sampling amplified noise: a
    Gaussian centred at mid-scale with standard deviation std_fraction of
    full scale, rounded and clipped to [0, 2^k - 1].

    The source owns one generator lane per seed it is asked to produce, so a
    whole batch of seeds is assembled at once.
    """

    def __init__(self, kind: SeedSourceKind, bank: GeneratorBank, p: float = 0.5, k: int = ADC_BITS,
                 std_fraction: float = ADC_STD_FRACTION) -> None:
        if not 0.0 <= p <= 1.0:
            raise ConfigurationError(f"bit probability must be in [0, 1], got {p}")
        if not 1 <= k <= MAX_ADC_BITS:
            raise ConfigurationError(f"ADC word width must be in [1, {MAX_ADC_BITS}], got {k}")
        if std_fraction <= 0:
            raise ConfigurationError(f"ADC noise spread must be positive, got {std_fraction}")
        self.kind = kind
        self.bank = bank
        self.p = p
        self.k = k
        self.std_fraction = std_fraction

    @classmethod
    def biased_bits(cls, p: float, seed: int, lanes: int = 1) -> "SeedSource":
        bank = GeneratorBank.from_substreams(seed, range(lanes), StreamPurpose.SOURCE)
        return cls(SeedSourceKind.BIASED_BITS, bank, p=p)

    @classmethod
    def adc_words(cls, k: int, seed: int, lanes: int = 1, std_fraction: float = ADC_STD_FRACTION) -> "SeedSource":
        bank = GeneratorBank.from_substreams(seed, range(lanes), StreamPurpose.SOURCE)
        return cls(SeedSourceKind.ADC_WORDS, bank, k=k, std_fraction=std_fraction)

    @property
    def lanes(self) -> int:
        return len(self.bank)

    def draw(self) -> np.ndarray:
        match self.kind:
            case SeedSourceKind.BIASED_BITS:
                return (self.bank.uniform() < self.p).astype(np.uint64)
            case SeedSourceKind.ADC_WORDS:
                full_scale = float(1 << self.k)
                raw = np.rint(full_scale / 2 + self.std_fraction * full_scale * self.bank.gaussian())
                return np.clip(raw, 0, full_scale - 1).astype(np.uint64)
        raise ConfigurationError(f"unknown seed source {self.kind}")


def _check_sizes(n: int, m: int) -> None:
    if not 1 <= n <= MAX_SEED_BITS:
        raise ConfigurationError(f"seed width must be in [1, {MAX_SEED_BITS}], got {n}")
    if m < 1:
        raise ConfigurationError(f"fold count must be at least 1, got {m}")


def assemble_seed_from_bits(source: SeedSource, n: int, m: int = BIT_SOURCE_FOLDS) -> np.ndarray:
    """
    One n bit value per lane: n single-bit samples are shifted in, the whole
    thing is repeated m times and the m values are XORed together.
    """
    _check_sizes(n, m)
    if source.kind != SeedSourceKind.BIASED_BITS:
        raise ConfigurationError("bit assembly needs a biased bit source")
    folded = np.zeros(source.lanes, dtype=np.uint64)
    for _ in range(m):
        value = np.zeros(source.lanes, dtype=np.uint64)
        for _ in range(n):
            value = (value << np.uint64(1)) | source.draw()
        folded ^= value
    return folded


def assemble_seed_from_adc(source: SeedSource, n: int, m: int = ADC_SOURCE_FOLDS) -> np.ndarray:
    """
    One n bit value per lane: ceil(n / k) ADC words are concatenated, the low
    n bits kept, and m such values XORed together.
    """
    _check_sizes(n, m)
    if source.kind != SeedSourceKind.ADC_WORDS:
        raise ConfigurationError("ADC assembly needs an ADC word source")
    words = math.ceil(n / source.k)
    mask = np.uint64((1 << n) - 1)
    folded = np.zeros(source.lanes, dtype=np.uint64)
    for _ in range(m):
        value = np.zeros(source.lanes, dtype=np.uint64)
        for _ in range(words):
            value = (value << np.uint64(source.k)) | source.draw()
        folded ^= value & mask
    return folded


def collect_seeds(source: SeedSource, n: int, m: int) -> np.ndarray:
    match source.kind:
        case SeedSourceKind.BIASED_BITS:
            seeds = assemble_seed_from_bits(source, n, m)
        case SeedSourceKind.ADC_WORDS:
            seeds = assemble_seed_from_adc(source, n, m)
        case _:
            raise ConfigurationError(f"unknown seed source {source.kind}")
    logging.info(f"Assembled {len(seeds)} seeds of {n} bits with {m} folds")
    return seeds


def expected_fold_bias(p: float, m: int) -> float:
    """
    Probability that the XOR of m independent bits, each 1 with probability p, is 1.
    """
    return (1.0 - (1.0 - 2.0 * p) ** m) / 2.0
