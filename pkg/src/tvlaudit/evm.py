"""EVM byte-level primitives: keccak-256, function selectors, calldata and address plumbing.

Keccak-256 (the original Keccak padding, not NIST SHA-3) is implemented here
because EVM selectors and nothing else in this package need it, and no
commonly available Python package in our toolchain exposes it.
"""

from __future__ import annotations

import re

ADDRESS_RE = re.compile(r"^0x[0-9a-f]{40}$")
HEX_RE = re.compile(r"^0x(?:[0-9a-fA-F]{2})*$")

# Round constants and per-lane rotation offsets of keccak-f[1600].
_ROUND_CONSTANTS = (
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
)
_ROTATIONS = (
    (0, 36, 3, 41, 18),
    (1, 44, 10, 45, 2),
    (62, 6, 43, 15, 61),
    (28, 55, 25, 21, 56),
    (27, 20, 39, 8, 14),
)
_MASK = (1 << 64) - 1
_RATE_BYTES = 136  # 1088-bit rate for 256-bit output


def _rol(value: int, shift: int) -> int:
    return ((value << shift) | (value >> (64 - shift))) & _MASK


def _keccak_f(lanes: list[list[int]]) -> None:
    for rc in _ROUND_CONSTANTS:
        # theta
        c = [lanes[x][0] ^ lanes[x][1] ^ lanes[x][2] ^ lanes[x][3] ^ lanes[x][4] for x in range(5)]
        d = [c[(x - 1) % 5] ^ _rol(c[(x + 1) % 5], 1) for x in range(5)]
        for x in range(5):
            for y in range(5):
                lanes[x][y] ^= d[x]
        # rho + pi
        b = [[0] * 5 for _ in range(5)]
        for x in range(5):
            for y in range(5):
                b[y][(2 * x + 3 * y) % 5] = _rol(lanes[x][y], _ROTATIONS[x][y])
        # chi
        for x in range(5):
            for y in range(5):
                lanes[x][y] = b[x][y] ^ ((~b[(x + 1) % 5][y]) & b[(x + 2) % 5][y])
        # iota
        lanes[0][0] ^= rc


def keccak256(data: bytes) -> bytes:
    """Keccak-256 digest of ``data`` (EVM flavor: multi-rate pad 0x01..0x80)."""
    padded = bytearray(data)
    pad_len = _RATE_BYTES - (len(padded) % _RATE_BYTES)
    if pad_len == 1:
        padded += b"\x81"
    else:
        padded += b"\x01" + b"\x00" * (pad_len - 2) + b"\x80"

    lanes = [[0] * 5 for _ in range(5)]
    for block_start in range(0, len(padded), _RATE_BYTES):
        block = padded[block_start:block_start + _RATE_BYTES]
        for i in range(_RATE_BYTES // 8):
            lane = int.from_bytes(block[8 * i:8 * i + 8], "little")
            lanes[i % 5][i // 5] ^= lane
        _keccak_f(lanes)

    out = bytearray()
    for i in range(4):  # 32 bytes = 4 lanes of the rate
        out += lanes[i % 5][i // 5].to_bytes(8, "little")
    return bytes(out)


def selector(canonical_signature: str) -> bytes:
    """First 4 bytes of keccak-256 of a canonical signature, e.g. ``balanceOf(address)``."""
    return keccak256(canonical_signature.encode("ascii"))[:4]


def decode_selector(calldata: bytes) -> tuple[bytes, bytes]:
    """Split calldata into (4-byte selector, argument bytes). Requires len >= 4."""
    if len(calldata) < 4:
        raise ShortCalldataError(f"calldata has {len(calldata)} bytes, need at least 4")
    return calldata[:4], calldata[4:]


class ShortCalldataError(ValueError):
    """Calldata shorter than the 4-byte selector prefix."""


def normalize_address(value: str) -> str:
    """Lowercase and validate a 20-byte 0x-hex address."""
    addr = value.lower()
    if not ADDRESS_RE.match(addr):
        raise ValueError(f"not a 20-byte hex address: {value!r}")
    return addr


def parse_hex_bytes(value: str) -> bytes:
    """Decode a 0x-prefixed even-length hex string to bytes."""
    if not HEX_RE.match(value):
        raise ValueError(f"not 0x-prefixed even-length hex: {value!r}")
    return bytes.fromhex(value[2:])


def encode_balance_of(owner: str) -> bytes:
    """Calldata for ERC-20 ``balanceOf(address)``: selector + owner left-padded to 32 bytes."""
    return BALANCE_OF_SELECTOR + bytes(12) + bytes.fromhex(normalize_address(owner)[2:])


def decode_owner_argument(argument_bytes: bytes) -> str:
    """Owner address from a single left-padded 32-byte address argument."""
    if len(argument_bytes) != 32:
        raise ValueError(f"expected one 32-byte argument word, got {len(argument_bytes)} bytes")
    return "0x" + argument_bytes[12:32].hex()


def decode_uint256(word: bytes) -> int:
    """Unsigned big integer from a 32-byte return word."""
    if len(word) != 32:
        raise ValueError(f"expected a 32-byte word, got {len(word)} bytes")
    return int.from_bytes(word, "big")


# Selectors used throughout; each equals keccak256(signature)[:4] (checked in tests).
BALANCE_OF_SELECTOR = bytes.fromhex("70a08231")          # balanceOf(address)
GET_RESERVES_SELECTOR = bytes.fromhex("0902f1ac")        # getReserves()
TOKEN0_SELECTOR = bytes.fromhex("0dfe1681")              # token0()
TOKEN1_SELECTOR = bytes.fromhex("d21220a7")              # token1()
SYMBOL_SELECTOR = bytes.fromhex("95d89b41")              # symbol()
DECIMALS_SELECTOR = bytes.fromhex("313ce567")            # decimals()
