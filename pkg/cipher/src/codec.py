import string

from cipher.src.constants import AES_BLOCK_BYTES
from tracelab.src.errors import InvalidOperandError


def parse_hex(text: str, length: int = AES_BLOCK_BYTES) -> bytes:
    """
    Parses a hex string, byte 0 first. Whitespace, ':' and '_' separators are
    ignored and case does not matter, so "67 76 89 79 ..." and "67768979..."
    are the same key.
    """
    cleaned = "".join(ch for ch in text if ch not in string.whitespace + ":_")
    if cleaned.lower().startswith("0x"):
        cleaned = cleaned[2:]
    if any(ch not in string.hexdigits for ch in cleaned):
        raise InvalidOperandError(f"not a hex string: {text!r}")
    if len(cleaned) != 2 * length:
        raise InvalidOperandError(f"expected {length} bytes of hex, got {len(cleaned) / 2:g}")
    return bytes.fromhex(cleaned)


def format_hex(data: bytes, separator: str = "") -> str:
    return separator.join(f"{b:02x}" for b in data)


def block_to_words(block: bytes) -> tuple[int, int]:
    """
    Splits a 16 byte block into its two 64 bit words. The first eight bytes,
    read big-endian, form the first word (PT1 or K1).
    """
    if len(block) != AES_BLOCK_BYTES:
        raise InvalidOperandError(f"block must be {AES_BLOCK_BYTES} bytes, got {len(block)}")
    return int.from_bytes(block[:8], "big"), int.from_bytes(block[8:], "big")


def words_to_block(first: int, second: int) -> bytes:
    return first.to_bytes(8, "big") + second.to_bytes(8, "big")
