from enum import Enum
from typing import Optional

import numpy as np

from cipher.src.codec import block_to_words
from cipher.src.constants import HAMMING_WEIGHT_TABLE, S_BOX
from cipher.src.speck import speck_round1_values, speck_round2_target, word_byte
from cpa.src.constants import NUM_GUESSES
from leakage.src.traces import TraceSet
from tracelab.src.errors import ConfigurationError


class SelectionKind(Enum):
    AES_SBOX = "aes_sbox"
    AES_XOR = "aes_xor"
    SPECK_R1 = "speck_r1"
    SPECK_R2 = "speck_r2"


class SelectionModel:
    """
    Selection function I = f(d, k) for one key byte.

    aes_sbox:  SBOX(p_b XOR g)
    aes_xor:   p_b XOR g
    speck_r1:  T_b XOR g, with T = ROR(PT1, 8) + PT2
    speck_r2:  U_b XOR g, with U = ROR(R1, 8) + y1 computed from the
               recovered K2 (the context this kind requires)
    """

    def __init__(self, kind: SelectionKind, k2: Optional[int] = None) -> None:
        if kind == SelectionKind.SPECK_R2 and k2 is None:
            raise ConfigurationError("speck_r2 selection needs K2 from the first phase")
        self.kind = kind
        self.k2 = k2

    @classmethod
    def by_name(cls, name: str, k2: Optional[int] = None) -> "SelectionModel":
        try:
            kind = SelectionKind(name)
        except ValueError:
            raise ConfigurationError(
                f"unknown selection {name!r}; known: {', '.join(k.value for k in SelectionKind)}") from None
        return cls(kind, k2)

    @property
    def lanes(self) -> int:
        return 16 if self.kind in (SelectionKind.AES_SBOX, SelectionKind.AES_XOR) else 8

    @property
    def is_linear(self) -> bool:
        """
        True when guesses g and g XOR 0xFF give complementary hypotheses.
        """
        return self.kind != SelectionKind.AES_SBOX

    def _check_lane(self, byte_index: int) -> None:
        if not 0 <= byte_index < self.lanes:
            raise ConfigurationError(f"{self.kind.value} has lanes 0..{self.lanes - 1}, got {byte_index}")

    def operand_word(self, plaintext: bytes) -> int:
        pt1, pt2 = block_to_words(plaintext)
        t, _, _ = speck_round1_values(pt1, pt2, 0)
        if self.kind == SelectionKind.SPECK_R1:
            return t
        assert self.k2 is not None
        _, r1, y1 = speck_round1_values(pt1, pt2, self.k2)
        return speck_round2_target(r1, y1)

    def operand_bytes(self, plaintexts: np.ndarray, byte_index: int) -> np.ndarray:
        """
        The key-independent operand of every trace for one lane.
        """
        self._check_lane(byte_index)
        match self.kind:
            case SelectionKind.AES_SBOX | SelectionKind.AES_XOR:
                return plaintexts[:, byte_index].astype(np.uint8)
            case SelectionKind.SPECK_R1 | SelectionKind.SPECK_R2:
                return np.array([word_byte(self.operand_word(p.tobytes()), byte_index) for p in plaintexts],
                                dtype=np.uint8)
        raise ConfigurationError(f"unknown selection {self.kind}")

    def describe(self) -> str:
        return self.kind.value if self.k2 is None else f"{self.kind.value}(k2={self.k2:#018x})"


def apply_selection(model: SelectionModel, plaintext: bytes, guess: int, byte_index: int) -> int:
    operand = int(model.operand_bytes(np.frombuffer(plaintext, dtype=np.uint8)[None, :], byte_index)[0])
    value = operand ^ guess
    if model.kind == SelectionKind.AES_SBOX:
        return int(S_BOX[value])
    return value


class HypothesisMatrix:
    def __init__(self, h: np.ndarray, byte_index: int) -> None:
        assert h.ndim == 2 and h.shape[1] == NUM_GUESSES
        self.h = h
        self.byte_index = byte_index

    @property
    def num_traces(self) -> int:
        return int(self.h.shape[0])


def hypotheses_for_operands(model: SelectionModel, operands: np.ndarray, byte_index: int) -> HypothesisMatrix:
    values = np.bitwise_xor(operands[:, None], np.arange(NUM_GUESSES, dtype=np.uint8)[None, :])
    if model.kind == SelectionKind.AES_SBOX:
        values = S_BOX[values]
    return HypothesisMatrix(HAMMING_WEIGHT_TABLE[values].astype(np.float64), byte_index)


def build_hypotheses(traceset: TraceSet, model: SelectionModel, byte_index: int) -> HypothesisMatrix:
    return hypotheses_for_operands(model, model.operand_bytes(traceset.plaintexts, byte_index), byte_index)
