"""Parameterized step-reduced SHA-256/SHA-512 compression function.

Everything here is a pure function over immutable values.  A "t-step"
computation means exactly t rounds (indexed 0..t-1) followed by the usual
feedforward that adds the initial value back into the working registers;
with a fixed IV the feedforward neither creates nor destroys collisions.
All word arithmetic is wrapping (mod 2**word_bits).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple, Sequence

from .constants import IV256, IV512, K256, K512


class Variant(Enum):
    """The two supported hash function widths."""

    SHA256 = "sha256"
    SHA512 = "sha512"


class RegisterState(NamedTuple):
    """The eight working registers a..h."""

    a: int
    b: int
    c: int
    d: int
    e: int
    f: int
    g: int
    h: int


@dataclass(frozen=True)
class Sha2Params:
    """Variant-specific constants: word width, IV, round constants, rotations.

    ``small_sigma*_spec`` holds two rotation amounts followed by one shift
    amount; ``big_sigma*_rots`` holds three rotation amounts.
    """

    variant: Variant
    word_bits: int
    iv: tuple[int, ...]
    k: tuple[int, ...]
    big_sigma0_rots: tuple[int, int, int]
    big_sigma1_rots: tuple[int, int, int]
    small_sigma0_spec: tuple[int, int, int]
    small_sigma1_spec: tuple[int, int, int]
    max_steps: int

    @property
    def mask(self) -> int:
        return (1 << self.word_bits) - 1

    @property
    def word_hex_digits(self) -> int:
        return self.word_bits // 4


@dataclass(frozen=True)
class MessageBlock:
    """Exactly 16 message words W0..W15."""

    words: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(self.words))
        if len(self.words) != 16:
            raise ValueError(f"message block needs 16 words, got {len(self.words)}")
        for i, w in enumerate(self.words):
            if not isinstance(w, int) or w < 0:
                raise ValueError(f"word {i} is not a nonnegative integer: {w!r}")

    def __getitem__(self, i: int) -> int:
        return self.words[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.words)

    def __len__(self) -> int:
        return 16


_PARAMS = {
    Variant.SHA256: Sha2Params(
        variant=Variant.SHA256,
        word_bits=32,
        iv=IV256,
        k=K256,
        big_sigma0_rots=(2, 13, 22),
        big_sigma1_rots=(6, 11, 25),
        small_sigma0_spec=(7, 18, 3),
        small_sigma1_spec=(17, 19, 10),
        max_steps=64,
    ),
    Variant.SHA512: Sha2Params(
        variant=Variant.SHA512,
        word_bits=64,
        iv=IV512,
        k=K512,
        big_sigma0_rots=(28, 34, 39),
        big_sigma1_rots=(14, 18, 41),
        small_sigma0_spec=(1, 8, 7),
        small_sigma1_spec=(19, 61, 6),
        max_steps=80,
    ),
}


def make_params(variant: Variant) -> Sha2Params:
    """Return the full constant set for a variant (shared immutable instance)."""
    return _PARAMS[variant]


def initial_state(params: Sha2Params) -> RegisterState:
    """The standard IV as a register state."""
    return RegisterState(*params.iv)


def rotr(x: int, n: int, bits: int) -> int:
    """Right-rotate a ``bits``-wide word by n."""
    mask = (1 << bits) - 1
    return ((x >> n) | (x << (bits - n))) & mask


def ch(x: int, y: int, z: int) -> int:
    return (x & y) ^ (~x & z)


def maj(x: int, y: int, z: int) -> int:
    return (x & y) ^ (x & z) ^ (y & z)


def big_sigma0(x: int, params: Sha2Params) -> int:
    r0, r1, r2 = params.big_sigma0_rots
    b = params.word_bits
    return rotr(x, r0, b) ^ rotr(x, r1, b) ^ rotr(x, r2, b)


def big_sigma1(x: int, params: Sha2Params) -> int:
    r0, r1, r2 = params.big_sigma1_rots
    b = params.word_bits
    return rotr(x, r0, b) ^ rotr(x, r1, b) ^ rotr(x, r2, b)


def small_sigma0(x: int, params: Sha2Params) -> int:
    r0, r1, s = params.small_sigma0_spec
    b = params.word_bits
    return rotr(x, r0, b) ^ rotr(x, r1, b) ^ (x >> s)


def small_sigma1(x: int, params: Sha2Params) -> int:
    r0, r1, s = params.small_sigma1_spec
    b = params.word_bits
    return rotr(x, r0, b) ^ rotr(x, r1, b) ^ (x >> s)


def check_step_count(t: int, params: Sha2Params) -> None:
    if not 1 <= t <= params.max_steps:
        raise ValueError(
            f"step count {t} out of range 1..{params.max_steps} for {params.variant.value}"
        )


def _check_block(block: MessageBlock, params: Sha2Params) -> None:
    mask = params.mask
    for i, w in enumerate(block.words):
        if w > mask:
            raise ValueError(
                f"word {i} does not fit {params.word_bits} bits: {w:#x}"
            )


def expand_message(block: MessageBlock, t: int, params: Sha2Params) -> tuple[int, ...]:
    """Message schedule W0..W(t-1).

    The first min(t, 16) words are the block words verbatim; beyond that
    W_t = sigma1(W_{t-2}) + W_{t-7} + sigma0(W_{t-15}) + W_{t-16}.
    """
    check_step_count(t, params)
    _check_block(block, params)
    if t <= 16:
        return block.words[:t]
    w = list(block.words)
    mask = params.mask
    for i in range(16, t):
        s0 = small_sigma0(w[i - 15], params)
        s1 = small_sigma1(w[i - 2], params)
        w.append((s1 + w[i - 7] + s0 + w[i - 16]) & mask)
    return tuple(w)


def step(state: RegisterState, w: int, k: int, params: Sha2Params) -> RegisterState:
    """One SHA-2 round.

    T1 = h + Sigma1(e) + Ch(e,f,g) + k + w and T2 = Sigma0(a) + Maj(a,b,c);
    the new state is (T1+T2, a, b, c, d+T1, e, f, g).
    """
    a, b, c, d, e, f, g, h = state
    mask = params.mask
    t1 = (h + big_sigma1(e, params) + ch(e, f, g) + k + w) & mask
    t2 = (big_sigma0(a, params) + maj(a, b, c)) & mask
    return RegisterState((t1 + t2) & mask, a, b, c, (d + t1) & mask, e, f, g)


def run_steps(
    state: RegisterState, schedule: Sequence[int], params: Sha2Params
) -> RegisterState:
    """Iterate the round function over a schedule, without feedforward."""
    k = params.k
    for i, w in enumerate(schedule):
        state = step(state, w, k[i], params)
    return state


def compress(
    iv: RegisterState, block: MessageBlock, t: int, params: Sha2Params
) -> RegisterState:
    """t rounds from ``iv`` followed by the feedforward (iv + final, wordwise)."""
    schedule = expand_message(block, t, params)
    final = run_steps(iv, schedule, params)
    mask = params.mask
    return RegisterState(*((x + y) & mask for x, y in zip(iv, final)))


def _pad(message: bytes, params: Sha2Params) -> bytes:
    word_bytes = params.word_bits // 8
    block_bytes = 16 * word_bytes
    length_bytes = 2 * word_bytes
    limit_bits = 1 << (8 * length_bytes)
    bit_length = 8 * len(message)
    if bit_length >= limit_bits:
        raise ValueError(
            f"message of {len(message)} bytes exceeds the {params.variant.value} length field"
        )
    padded = bytearray(message)
    padded.append(0x80)
    while len(padded) % block_bytes != block_bytes - length_bytes:
        padded.append(0x00)
    padded.extend(bit_length.to_bytes(length_bytes, "big"))
    return bytes(padded)


def digest_padded(message: bytes, variant: Variant, t: int) -> tuple[int, ...]:
    """Hash a byte string: FIPS padding, then t-step compression per block.

    With t equal to the variant's max step count this is the genuine
    SHA-256/SHA-512 digest, returned as 8 words.
    """
    params = make_params(variant)
    check_step_count(t, params)
    padded = _pad(message, params)
    word_bytes = params.word_bits // 8
    block_bytes = 16 * word_bytes
    state = initial_state(params)
    for off in range(0, len(padded), block_bytes):
        raw = padded[off : off + block_bytes]
        words = tuple(
            int.from_bytes(raw[word_bytes * i : word_bytes * (i + 1)], "big")
            for i in range(16)
        )
        state = compress(state, MessageBlock(words), t, params)
    return tuple(state)
