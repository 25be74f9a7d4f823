from enum import Enum
from typing import Sequence

from cipher.src.constants import SPECK_WORD_BITS
from tracelab.src.errors import InvalidOperandError

SUPPORTED_LIMB_WIDTHS = (8, 16)


class RotateDirection(Enum):
    LEFT = 1
    RIGHT = 2


class LimbInt:
    """
    A 64 bit unsigned integer stored as narrow limbs, the way an 8 or 16 bit
    register machine holds it. Index 0 is the most significant limb, so
    0x0706050403020100 in 8 bit limbs is [0x07, 0x06, ..., 0x00].
    """

    def __init__(self, limbs: Sequence[int], limb_width: int = 8) -> None:
        if limb_width not in SUPPORTED_LIMB_WIDTHS:
            raise InvalidOperandError(f"limb width must be one of {SUPPORTED_LIMB_WIDTHS}, got {limb_width}")
        if len(limbs) * limb_width != SPECK_WORD_BITS:
            raise InvalidOperandError(
                f"{len(limbs)} limbs of {limb_width} bits do not make a {SPECK_WORD_BITS} bit word")
        limb_mask = (1 << limb_width) - 1
        for limb in limbs:
            if limb < 0 or limb > limb_mask:
                raise InvalidOperandError(f"limb value {limb:#x} does not fit in {limb_width} bits")
        self.limbs = tuple(limbs)
        self.limb_width = limb_width

    @classmethod
    def from_word(cls, value: int, limb_width: int = 8) -> "LimbInt":
        if limb_width not in SUPPORTED_LIMB_WIDTHS:
            raise InvalidOperandError(f"limb width must be one of {SUPPORTED_LIMB_WIDTHS}, got {limb_width}")
        count = SPECK_WORD_BITS // limb_width
        limb_mask = (1 << limb_width) - 1
        return cls([(value >> (limb_width * (count - 1 - i))) & limb_mask for i in range(count)], limb_width)

    def to_word(self) -> int:
        value = 0
        for limb in self.limbs:
            value = (value << self.limb_width) | limb
        return value

    @property
    def mask(self) -> int:
        return (1 << self.limb_width) - 1

    def __len__(self) -> int:
        return len(self.limbs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LimbInt):
            return NotImplemented
        return self.limbs == other.limbs and self.limb_width == other.limb_width

    def __hash__(self) -> int:
        return hash((self.limbs, self.limb_width))

    def __repr__(self) -> str:
        return f"LimbInt({self.to_word():#018x}, limb_width={self.limb_width})"


def _check_same_shape(a: LimbInt, b: LimbInt) -> None:
    if a.limb_width != b.limb_width or len(a) != len(b):
        raise InvalidOperandError(
            f"operand shapes differ: {len(a)}x{a.limb_width} bits vs {len(b)}x{b.limb_width} bits")


def limb_add(a: LimbInt, b: LimbInt) -> LimbInt:
    """
    Schoolbook addition from the least significant limb (the last index)
    toward index 0. The carry out of the most significant limb is dropped, so
    the result is (a + b) mod 2^64.
    """
    _check_same_shape(a, b)
    out = [0] * len(a)
    carry = 0
    for i in reversed(range(len(a))):
        total = a.limbs[i] + b.limbs[i] + carry
        out[i] = total & a.mask
        carry = total >> a.limb_width
    return LimbInt(out, a.limb_width)


def limb_xor(a: LimbInt, b: LimbInt) -> LimbInt:
    _check_same_shape(a, b)
    return LimbInt([x ^ y for x, y in zip(a.limbs, b.limbs)], a.limb_width)


def limb_rotate(a: LimbInt, r: int, direction: RotateDirection) -> LimbInt:
    """
    Rotates by r bits in two steps: r // limb_width whole-limb moves, then an
    r % limb_width bit shift inside each limb. The bits pushed out of one limb
    are carried into its neighbour and the two shifted intermediates are ORed.
    """
    if r < 0 or r >= SPECK_WORD_BITS:
        raise InvalidOperandError(f"rotation must be in [0, {SPECK_WORD_BITS}), got {r}")
    n = len(a)
    width = a.limb_width
    whole, bits = divmod(r, width)

    match direction:
        case RotateDirection.RIGHT:
            moved = [a.limbs[(i - whole) % n] for i in range(n)]
            if bits == 0:
                return LimbInt(moved, width)
            shifted = [limb >> bits for limb in moved]
            carried = [(moved[(i - 1) % n] << (width - bits)) & a.mask for i in range(n)]
        case RotateDirection.LEFT:
            moved = [a.limbs[(i + whole) % n] for i in range(n)]
            if bits == 0:
                return LimbInt(moved, width)
            shifted = [(limb << bits) & a.mask for limb in moved]
            carried = [moved[(i + 1) % n] >> (width - bits) for i in range(n)]
        case _:
            raise InvalidOperandError(f"unknown rotation direction {direction}")

    return LimbInt([s | c for s, c in zip(shifted, carried)], width)
