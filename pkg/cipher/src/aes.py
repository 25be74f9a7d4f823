"""
Byte-oriented AES-128.

The state is held column-major as 16 ints, so state[r + 4 * c] is row r of
column c and the byte order of a block is preserved by the layout.
"""
import numpy as np

from cipher.src.constants import AES_BLOCK_BYTES, AES_ROUNDS, R_CON, S_BOX
from tracelab.src.errors import InvalidOperandError

_SBOX = [int(v) for v in S_BOX]


def check_block(block: bytes, name: str = "block") -> bytes:
    if len(block) != AES_BLOCK_BYTES:
        raise InvalidOperandError(f"{name} must be {AES_BLOCK_BYTES} bytes, got {len(block)}")
    return bytes(block)


def xtime(a: int) -> int:
    a <<= 1
    if a & 0x100:
        a ^= 0x11b
    return a


def expand_key(key: bytes) -> list[list[int]]:
    key = check_block(key, "key")
    words = [list(key[4 * i:4 * i + 4]) for i in range(4)]
    for i in range(4, 4 * (AES_ROUNDS + 1)):
        temp = list(words[i - 1])
        if i % 4 == 0:
            temp = temp[1:] + temp[:1]
            temp = [_SBOX[b] for b in temp]
            temp[0] ^= R_CON[i // 4 - 1]
        words.append([a ^ b for a, b in zip(words[i - 4], temp)])

    round_keys = []
    for r in range(AES_ROUNDS + 1):
        round_key: list[int] = []
        for word in words[4 * r:4 * r + 4]:
            round_key.extend(word)
        round_keys.append(round_key)
    return round_keys


def add_round_key(state: list[int], round_key: list[int]) -> list[int]:
    return [s ^ k for s, k in zip(state, round_key)]


def sub_bytes(state: list[int]) -> list[int]:
    return [_SBOX[s] for s in state]


def shift_rows(state: list[int]) -> list[int]:
    return [state[r + 4 * ((c + r) % 4)] for c in range(4) for r in range(4)]


def mix_columns(state: list[int]) -> list[int]:
    out = [0] * AES_BLOCK_BYTES
    for c in range(4):
        a0, a1, a2, a3 = state[4 * c:4 * c + 4]
        t = a0 ^ a1 ^ a2 ^ a3
        out[4 * c] = a0 ^ t ^ xtime(a0 ^ a1)
        out[4 * c + 1] = a1 ^ t ^ xtime(a1 ^ a2)
        out[4 * c + 2] = a2 ^ t ^ xtime(a2 ^ a3)
        out[4 * c + 3] = a3 ^ t ^ xtime(a3 ^ a0)
    return out


def aes128_encrypt(plaintext: bytes, key: bytes) -> bytes:
    round_keys = expand_key(key)
    state = add_round_key(list(check_block(plaintext, "plaintext")), round_keys[0])
    for r in range(1, AES_ROUNDS):
        state = add_round_key(mix_columns(shift_rows(sub_bytes(state))), round_keys[r])
    state = add_round_key(shift_rows(sub_bytes(state)), round_keys[AES_ROUNDS])
    return bytes(state)


def aes_round1_intermediates(plaintext: bytes, key: bytes) -> tuple[bytes, bytes]:
    """
    Returns the first AddRoundKey output and the SubBytes output that follows it.
    """
    plaintext = check_block(plaintext, "plaintext")
    key = check_block(key, "key")
    ark = bytes(p ^ k for p, k in zip(plaintext, key))
    return ark, bytes(_SBOX[a] for a in ark)


def aes_round1_intermediates_batch(plaintexts: np.ndarray, key: bytes) -> tuple[np.ndarray, np.ndarray]:
    assert plaintexts.ndim == 2 and plaintexts.shape[1] == AES_BLOCK_BYTES
    key_row = np.frombuffer(check_block(key, "key"), dtype=np.uint8)
    ark = np.bitwise_xor(plaintexts.astype(np.uint8), key_row)
    return ark, S_BOX[ark]
