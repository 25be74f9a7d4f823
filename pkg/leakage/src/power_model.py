import numpy as np

from cipher.src.constants import HAMMING_WEIGHT_TABLE


def hamming_weight(value: int) -> int:
    return value.bit_count()


def hamming_distance(v0: int, v1: int) -> int:
    return hamming_weight(v0 ^ v1)


def hamming_weight_bytes(values: np.ndarray) -> np.ndarray:
    """
    Hamming weight of every element of a uint8 array.
    """
    return HAMMING_WEIGHT_TABLE[values.astype(np.uint8)]
