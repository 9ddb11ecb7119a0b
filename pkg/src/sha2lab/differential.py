"""Modular-difference arithmetic and differential-path tracing.

A delta is the modular difference x' - x (mod 2**word_bits) stored as a
plain word.  A differential path prescribes the per-register deltas at the
end of every step; tracing a message pair runs both messages through the
round function in lockstep and records those deltas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .core import (
    MessageBlock,
    RegisterState,
    Variant,
    check_step_count,
    expand_message,
    make_params,
    step,
)

REGISTER_NAMES = ("a", "b", "c", "d", "e", "f", "g", "h")


class DeltaVector(NamedTuple):
    """Per-register deltas at the end of one step."""

    da: int
    db: int
    dc: int
    dd: int
    de: int
    df: int
    dg: int
    dh: int

    def is_zero(self) -> bool:
        return not any(self)


ZERO_VECTOR = DeltaVector(0, 0, 0, 0, 0, 0, 0, 0)


@dataclass(frozen=True)
class WordDeltas:
    """The 16 message-word deltas dW0..dW15."""

    dw: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dw", tuple(self.dw))
        if len(self.dw) != 16:
            raise ValueError(f"need 16 word deltas, got {len(self.dw)}")

    def __getitem__(self, i: int) -> int:
        return self.dw[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.dw)

    def nonzero_indices(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.dw) if d)


@dataclass(frozen=True)
class DifferentialPath:
    """An ordered list of delta vectors, one per step index 0..t-1."""

    variant: Variant
    steps: tuple[DeltaVector, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, i: int) -> DeltaVector:
        return self.steps[i]


@dataclass(frozen=True)
class CollisionPair:
    """Two message blocks to be compared under a step-reduced compression."""

    variant: Variant
    step_count: int
    m1: MessageBlock
    m2: MessageBlock

    def __post_init__(self) -> None:
        mask = make_params(self.variant).mask
        for name, block in (("m1", self.m1), ("m2", self.m2)):
            for i, w in enumerate(block.words):
                if w > mask:
                    raise ValueError(
                        f"{name} word {i} does not fit {self.variant.value}: {w:#x}"
                    )


@dataclass(frozen=True)
class PathCheck:
    """MATCH, or the first divergence with full context."""

    matched: bool
    step: int | None = None
    register: str | None = None
    expected: int | None = None
    actual: int | None = None


def word_delta(x: int, x_prime: int, word_bits: int) -> int:
    """x' - x reduced mod 2**word_bits."""
    return (x_prime - x) & ((1 << word_bits) - 1)


def apply_delta(x: int, delta: int, word_bits: int) -> int:
    """x + delta mod 2**word_bits; inverse of word_delta in its first slot."""
    return (x + delta) & ((1 << word_bits) - 1)


def format_delta(value: int, word_bits: int) -> str:
    """Fixed-width hex, annotated with the signed value when the top bit is set."""
    digits = word_bits // 4
    text = f"{value:0{digits}x}"
    if value >> (word_bits - 1):
        text += f" ({value - (1 << word_bits):+d})"
    elif value:
        text += f" ({value:+d})"
    return text


def state_delta(s1: RegisterState, s2: RegisterState, word_bits: int) -> DeltaVector:
    """Wordwise delta of two register states (second minus first)."""
    return DeltaVector(*(word_delta(x, y, word_bits) for x, y in zip(s1, s2)))


def extract_word_deltas(pair: CollisionPair) -> WordDeltas:
    """dW_i = m2[i] - m1[i] for all 16 words."""
    bits = make_params(pair.variant).word_bits
    return WordDeltas(
        tuple(word_delta(x, y, bits) for x, y in zip(pair.m1, pair.m2))
    )


def apply_word_deltas(block: MessageBlock, deltas: WordDeltas, word_bits: int) -> MessageBlock:
    """Add the deltas to a block wordwise, producing the partner message."""
    return MessageBlock(
        tuple(apply_delta(w, d, word_bits) for w, d in zip(block, deltas))
    )


def trace_pair(iv: RegisterState, pair: CollisionPair) -> list[DeltaVector]:
    """Register deltas at the end of every step, running both blocks in lockstep."""
    params = make_params(pair.variant)
    t = pair.step_count
    check_step_count(t, params)
    w1 = expand_message(pair.m1, t, params)
    w2 = expand_message(pair.m2, t, params)
    bits = params.word_bits
    s1 = s2 = iv
    out: list[DeltaVector] = []
    for i in range(t):
        k = params.k[i]
        s1 = step(s1, w1[i], k, params)
        s2 = step(s2, w2[i], k, params)
        out.append(state_delta(s1, s2, bits))
    return out


def derive_path(pair: CollisionPair, iv: RegisterState) -> DifferentialPath:
    """The pair's actual differential path under the given IV."""
    return DifferentialPath(pair.variant, tuple(trace_pair(iv, pair)))


def check_path(trace: Sequence[DeltaVector], path: DifferentialPath) -> PathCheck:
    """Compare a trace against a path; report only the earliest divergence."""
    if len(trace) != len(path):
        raise ValueError(
            f"trace has {len(trace)} steps but path has {len(path)}"
        )
    for i, (got, want) in enumerate(zip(trace, path.steps)):
        if got == want:
            continue
        for name, g, w in zip(REGISTER_NAMES, got, want):
            if g != w:
                return PathCheck(False, step=i, register=name, expected=w, actual=g)
    return PathCheck(True)
