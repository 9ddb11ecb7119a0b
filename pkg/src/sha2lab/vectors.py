"""Embedded test vectors: the known 22-step colliding pairs and their path.

The SHA-256 and SHA-512 message pairs below collide under the 22-step
compression function with the standard IV; the accompanying 22-row path
gives the register deltas their computations follow.  The words are fixed
transcriptions and are pinned by a corpus checksum in the tests.  The
printed source for the path abbreviates the all-ones word as "ffffff"; it
is stored here as the full-width all-ones value (-1 mod 2**32), a reading
confirmed mechanically by tracing the SHA-256 pair.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .core import MessageBlock, Variant
from .differential import CollisionPair, DeltaVector, DifferentialPath

BUILTIN_STEP_COUNT = 22

# fmt: off
_SHA256_M1 = (
    0xA0263FA5, 0x707425FB, 0x618CD8D2, 0x7D58F729,
    0x1EB9A964, 0x19F88F1C, 0x34E35071, 0xF28D40E3,
    0xB43E29B8, 0x1871A949, 0xE2E01390, 0xAAF3823E,
    0x8D41A28E, 0x7F22EE02, 0x7C625999, 0x183E603F,
)

_SHA256_M2 = (
    0xA0263FA5, 0x707425FB, 0x618CD8D2, 0x7D58F729,
    0x1EB9A964, 0x19F88F1C, 0x34E35071, 0xF28D40E3,
    0xB43E29B9, 0x1871A948, 0xDEFE7410, 0xAAF5223E,
    0x8D41A28E, 0x7F22EE02, 0x7C625999, 0x00000000,
)

_SHA512_M1 = (
    0x3FFB91948B327337, 0x95F3C893B2356B98,
    0x506C68760ABF51E9, 0xFAB877B7EEF3AAA2,
    0x55D5B38EC34340CF, 0xDAA006EF3F677AFA,
    0xA5A01D9F1C67D9C8, 0x5B219EE6F447480B,
    0x52AF39FF1ECFB48E, 0x5CFF9AE5D4D60A40,
    0xDB6C1A412C9B4D4D, 0xAAF3823C2A004B1F,
    0x8D41A28B0D847693, 0x7F212E01C4E96937,
    0x7EEECA5C84BA3BDA, 0x1ACAD103AA814E0E,
)

_SHA512_M2 = (
    0x3FFB91948B327337, 0x95F3C893B2356B98,
    0x506C68760ABF51E9, 0xFAB877B7EEF3AAA2,
    0x55D5B38EC34340CF, 0xDAA006EF3F677AFA,
    0xA5A01D9F1C67D9C8, 0x5B219EE6F447480B,
    0x52AF39FF1ECFB48F, 0x5CFF9AE5D4D60A3F,
    0xDB687A412D1B4D65, 0xAAF3623C2A004B07,
    0x8D41A28B0D847693, 0x7F212E01C4E96937,
    0x7EEECA5C84BA3BDA, 0x0000000000000000,
)

# Register deltas (da..dh) at the end of each of the 22 steps.
_ONES = 0xFFFFFFFF
_SHA256_PATH_ROWS = (
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (1, 0, 0, 0, 1, 0, 0, 0),
    (0, 1, 0, 0, _ONES, 1, 0, 0),
    (0, 0, 1, 0, _ONES, _ONES, 1, 0),
    (0, 0, 0, 1, 0, _ONES, _ONES, 1),
    (0, 0, 0, 0, 1, 0, _ONES, _ONES),
    (0, 0, 0, 0, 0, 1, 0, _ONES),
    (0, 0, 0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 0, 0, 1),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0),
)
# fmt: on


@dataclass(frozen=True)
class VectorCorpus:
    """The embedded artifacts: both colliding pairs and the SHA-256 path."""

    sha256_pair: CollisionPair
    sha512_pair: CollisionPair
    sha256_path: DifferentialPath


def builtin_pair_sha256() -> CollisionPair:
    """The embedded 22-step SHA-256 colliding pair (standard IV)."""
    return CollisionPair(
        Variant.SHA256,
        BUILTIN_STEP_COUNT,
        MessageBlock(_SHA256_M1),
        MessageBlock(_SHA256_M2),
    )


def builtin_pair_sha512() -> CollisionPair:
    """The embedded 22-step SHA-512 colliding pair (standard IV)."""
    return CollisionPair(
        Variant.SHA512,
        BUILTIN_STEP_COUNT,
        MessageBlock(_SHA512_M1),
        MessageBlock(_SHA512_M2),
    )


def builtin_path_sha256_22() -> DifferentialPath:
    """The 22-row differential path followed by the SHA-256 pair."""
    return DifferentialPath(
        Variant.SHA256, tuple(DeltaVector(*row) for row in _SHA256_PATH_ROWS)
    )


def builtin_corpus() -> VectorCorpus:
    return VectorCorpus(
        sha256_pair=builtin_pair_sha256(),
        sha512_pair=builtin_pair_sha512(),
        sha256_path=builtin_path_sha256_22(),
    )


def corpus_checksum() -> str:
    """SHA-256 over a canonical rendering of every embedded word.

    Pinned by a regression test so the corpus cannot drift between builds.
    """
    h = hashlib.sha256()
    for words, digits in (
        (_SHA256_M1, 8),
        (_SHA256_M2, 8),
        (_SHA512_M1, 16),
        (_SHA512_M2, 16),
    ):
        h.update(" ".join(f"{w:0{digits}x}" for w in words).encode())
        h.update(b"\n")
    for row in _SHA256_PATH_ROWS:
        h.update(" ".join(f"{w:08x}" for w in row).encode())
        h.update(b"\n")
    return h.hexdigest()
