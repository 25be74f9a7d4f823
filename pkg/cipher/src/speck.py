from cipher.src.constants import SPECK_ALPHA, SPECK_BETA, SPECK_ROUNDS, SPECK_WORD_BITS, WORD_MASK
from cipher.src.limb import LimbInt, RotateDirection, limb_add, limb_rotate, limb_xor
from tracelab.src.errors import InvalidOperandError


def ror64(x: int, r: int) -> int:
    r %= SPECK_WORD_BITS
    return ((x >> r) | (x << (SPECK_WORD_BITS - r))) & WORD_MASK


def rol64(x: int, r: int) -> int:
    r %= SPECK_WORD_BITS
    return ((x << r) | (x >> (SPECK_WORD_BITS - r))) & WORD_MASK


class SpeckKeySchedule:
    def __init__(self, round_keys: list[int]) -> None:
        if len(round_keys) != SPECK_ROUNDS:
            raise InvalidOperandError(f"Speck128/128 needs {SPECK_ROUNDS} round keys, got {len(round_keys)}")
        self.round_keys = round_keys

    @property
    def k_prime(self) -> int:
        return self.round_keys[1]


def speck_key_schedule(k1: int, k2: int) -> SpeckKeySchedule:
    """
    Expands the key words (K1, K2) into the 32 round keys. round_keys[0] is
    K2 and the round index is XORed into the left word at every step, as in
    the designers' reference.
    """
    ell = k1 & WORD_MASK
    k = k2 & WORD_MASK
    round_keys = [k]
    for i in range(SPECK_ROUNDS - 1):
        ell = ((k + ror64(ell, SPECK_ALPHA)) & WORD_MASK) ^ i
        k = rol64(k, SPECK_BETA) ^ ell
        round_keys.append(k)
    return SpeckKeySchedule(round_keys)


def speck_round(x: int, y: int, round_key: int) -> tuple[int, int]:
    x = ((ror64(x, SPECK_ALPHA) + y) & WORD_MASK) ^ round_key
    y = rol64(y, SPECK_BETA) ^ x
    return x, y


def speck128_encrypt(pt1: int, pt2: int, schedule: SpeckKeySchedule) -> tuple[int, int]:
    x, y = pt1 & WORD_MASK, pt2 & WORD_MASK
    for round_key in schedule.round_keys:
        x, y = speck_round(x, y, round_key)
    return x, y


def speck128_encrypt_limbs(pt1: int, pt2: int, schedule: SpeckKeySchedule, limb_width: int = 8) -> tuple[int, int]:
    """
    Same cipher, computed only with limb-wise add, rotate and xor, the way a
    narrow microcontroller has to do it.
    """
    x = LimbInt.from_word(pt1, limb_width)
    y = LimbInt.from_word(pt2, limb_width)
    for round_key in schedule.round_keys:
        x = limb_xor(limb_add(limb_rotate(x, SPECK_ALPHA, RotateDirection.RIGHT), y),
                     LimbInt.from_word(round_key, limb_width))
        y = limb_xor(limb_rotate(y, SPECK_BETA, RotateDirection.LEFT), x)
    return x.to_word(), y.to_word()


def recover_k1(k_prime: int, k2: int) -> int:
    """
    Inverts the first key-schedule step. Since K' = ROL(K2, 3) XOR ell_1 and
    ell_1 = (K2 + ROR(K1, 8)) XOR 0, K1 = ROL(((K' XOR ROL(K2, 3)) - K2) mod 2^64, 8).
    """
    ell = k_prime ^ rol64(k2, SPECK_BETA)
    return rol64((ell - k2) & WORD_MASK, SPECK_ALPHA)


def speck_round1_values(pt1: int, pt2: int, k2: int) -> tuple[int, int, int]:
    """
    Returns (t, r1, y1) of the first round: t does not depend on the key,
    r1 = t XOR K2 is the new left word and y1 the new right word.
    """
    t = (ror64(pt1, SPECK_ALPHA) + pt2) & WORD_MASK
    r1 = t ^ k2
    y1 = rol64(pt2, SPECK_BETA) ^ r1
    return t, r1, y1


def speck_round2_target(r1: int, y1: int) -> int:
    return (ror64(r1, SPECK_ALPHA) + y1) & WORD_MASK


def word_byte(word: int, lane: int) -> int:
    """
    Byte lane of a 64 bit word, lane 0 being the least significant byte.
    """
    return (word >> (8 * lane)) & 0xFF
