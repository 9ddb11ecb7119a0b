"""File formats: whitespace-hex blocks and JSON containers.

Hex words, not raw bytes, are the canonical external representation; a
block file is 16 whitespace-separated hex words (8 digits for SHA-256, 16
for SHA-512) with '#' comment lines.  Pairs, paths and reports travel as
JSON with every word rendered as a lowercase fixed-width hex string.
"""

from __future__ import annotations

import json
from typing import Any

from .core import MessageBlock, RegisterState, Variant, make_params
from .differential import (
    REGISTER_NAMES,
    CollisionPair,
    DeltaVector,
    DifferentialPath,
)
from .search import SearchReport


class ParseError(ValueError):
    """Malformed whitespace-hex input."""


class DecodeError(ValueError):
    """Malformed JSON container; the message names the offending field."""


def _strip_comments(text: str) -> list[str]:
    tokens: list[str] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    return tokens


def _parse_word(token: str, digits: int, where: str) -> int:
    if len(token) != digits:
        raise ParseError(f"{where}: expected {digits} hex digits, got {token!r}")
    try:
        return int(token, 16)
    except ValueError:
        raise ParseError(f"{where}: not hexadecimal: {token!r}") from None


def parse_words(text: str, count: int, variant: Variant) -> tuple[int, ...]:
    """Parse exactly ``count`` fixed-width hex words, ignoring '#' comments."""
    digits = make_params(variant).word_hex_digits
    tokens = _strip_comments(text)
    if len(tokens) < count:
        raise ParseError(
            f"expected {count} words, got {len(tokens)} (missing token {len(tokens)})"
        )
    if len(tokens) > count:
        raise ParseError(
            f"expected {count} words, got {len(tokens)} (unexpected token {count})"
        )
    return tuple(
        _parse_word(tok, digits, f"token {i}") for i, tok in enumerate(tokens)
    )


def parse_block(text: str, variant: Variant) -> MessageBlock:
    """16 hex words -> MessageBlock; case-insensitive."""
    return MessageBlock(parse_words(text, 16, variant))


def format_block(block: MessageBlock, variant: Variant) -> str:
    """Lowercase hex words, laid out like the published tables."""
    digits = make_params(variant).word_hex_digits
    per_line = 8 if variant is Variant.SHA256 else 4
    words = [f"{w:0{digits}x}" for w in block]
    lines = [
        " ".join(words[i : i + per_line]) for i in range(0, 16, per_line)
    ]
    return "\n".join(lines) + "\n"


def parse_register_state(text: str, variant: Variant) -> RegisterState:
    """8 hex words -> RegisterState (for IV override files)."""
    return RegisterState(*parse_words(text, 8, variant))


# ---------------------------------------------------------------------------
# JSON containers


def _word_to_hex(w: int, digits: int) -> str:
    return f"{w:0{digits}x}"


def _hex_to_word(value: Any, digits: int, where: str) -> int:
    if not isinstance(value, str) or len(value) != digits:
        raise DecodeError(f"{where}: expected a {digits}-digit hex string, got {value!r}")
    try:
        return int(value, 16)
    except ValueError:
        raise DecodeError(f"{where}: not hexadecimal: {value!r}") from None


def _get(obj: dict, key: str, where: str = "") -> Any:
    if key not in obj:
        prefix = f"{where}." if where else ""
        raise DecodeError(f"missing field '{prefix}{key}'")
    return obj[key]


def _decode_variant(obj: dict, where: str = "") -> Variant:
    tag = _get(obj, "variant", where)
    try:
        return Variant(tag)
    except ValueError:
        raise DecodeError(f"unknown variant {tag!r}") from None


def _load_json(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise DecodeError("top level must be a JSON object")
    return obj


def _decode_word_list(value: Any, n: int, digits: int, where: str) -> tuple[int, ...]:
    if not isinstance(value, list) or len(value) != n:
        raise DecodeError(f"{where}: expected a list of {n} hex words")
    return tuple(
        _hex_to_word(v, digits, f"{where}[{i}]") for i, v in enumerate(value)
    )


def _pair_to_obj(pair: CollisionPair) -> dict:
    digits = make_params(pair.variant).word_hex_digits
    return {
        "variant": pair.variant.value,
        "steps": pair.step_count,
        "m1": [_word_to_hex(w, digits) for w in pair.m1],
        "m2": [_word_to_hex(w, digits) for w in pair.m2],
    }


def _pair_from_obj(obj: Any, where: str = "") -> CollisionPair:
    if not isinstance(obj, dict):
        raise DecodeError(f"{where or 'pair'}: expected an object")
    variant = _decode_variant(obj, where)
    digits = make_params(variant).word_hex_digits
    prefix = f"{where}." if where else ""
    steps = _get(obj, "steps", where)
    if not isinstance(steps, int) or steps < 1:
        raise DecodeError(f"{prefix}steps: expected a positive integer")
    m1 = _decode_word_list(_get(obj, "m1", where), 16, digits, f"{prefix}m1")
    m2 = _decode_word_list(_get(obj, "m2", where), 16, digits, f"{prefix}m2")
    return CollisionPair(variant, steps, MessageBlock(m1), MessageBlock(m2))


def encode_pair(pair: CollisionPair) -> str:
    return json.dumps(_pair_to_obj(pair), indent=2) + "\n"


def decode_pair(text: str) -> CollisionPair:
    return _pair_from_obj(_load_json(text))


def encode_path(path: DifferentialPath) -> str:
    digits = make_params(path.variant).word_hex_digits
    steps = [
        {f"d{name}": _word_to_hex(value, digits) for name, value in zip(REGISTER_NAMES, row)}
        for row in path.steps
    ]
    return json.dumps({"variant": path.variant.value, "steps": steps}, indent=2) + "\n"


def decode_path(text: str) -> DifferentialPath:
    obj = _load_json(text)
    variant = _decode_variant(obj)
    digits = make_params(variant).word_hex_digits
    steps = _get(obj, "steps")
    if not isinstance(steps, list):
        raise DecodeError("steps: expected a list")
    rows = []
    for i, row in enumerate(steps):
        if not isinstance(row, dict):
            raise DecodeError(f"steps[{i}]: expected an object")
        rows.append(
            DeltaVector(
                *(
                    _hex_to_word(
                        _get(row, f"d{name}", f"steps[{i}]"), digits, f"steps[{i}].d{name}"
                    )
                    for name in REGISTER_NAMES
                )
            )
        )
    return DifferentialPath(variant, tuple(rows))


def encode_report(report: SearchReport) -> str:
    obj = {
        "strategy": report.strategy,
        "variant": report.variant.value,
        "steps": report.steps,
        "trials": report.trials,
        "successes": report.successes,
        "seed": report.seed,
        "workers": report.workers,
        "elapsed": report.elapsed,
        "divergence_histogram": {
            str(k): v for k, v in report.divergence_histogram.items()
        },
        "collisions_found": [_pair_to_obj(p) for p in report.collisions_found],
        "collisions_omitted": report.collisions_omitted,
        "note": report.note,
    }
    return json.dumps(obj, indent=2) + "\n"


def decode_report(text: str) -> SearchReport:
    obj = _load_json(text)
    variant = _decode_variant(obj)
    ints = {}
    for key in ("steps", "trials", "successes", "seed", "workers", "collisions_omitted"):
        value = _get(obj, key)
        if not isinstance(value, int) or value < 0:
            raise DecodeError(f"{key}: expected a nonnegative integer")
        ints[key] = value
    strategy = _get(obj, "strategy")
    if not isinstance(strategy, str):
        raise DecodeError("strategy: expected a string")
    elapsed = _get(obj, "elapsed")
    if not isinstance(elapsed, (int, float)):
        raise DecodeError("elapsed: expected a number")
    hist_obj = _get(obj, "divergence_histogram")
    if not isinstance(hist_obj, dict):
        raise DecodeError("divergence_histogram: expected an object")
    histogram: dict[int, int] = {}
    for key, value in hist_obj.items():
        try:
            step_idx = int(key)
        except ValueError:
            raise DecodeError(f"divergence_histogram: bad step index {key!r}") from None
        if not isinstance(value, int) or value < 0:
            raise DecodeError(f"divergence_histogram[{key}]: expected a count")
        histogram[step_idx] = value
    pairs_obj = _get(obj, "collisions_found")
    if not isinstance(pairs_obj, list):
        raise DecodeError("collisions_found: expected a list")
    pairs = tuple(
        _pair_from_obj(p, f"collisions_found[{i}]") for i, p in enumerate(pairs_obj)
    )
    note = _get(obj, "note")
    if not isinstance(note, str):
        raise DecodeError("note: expected a string")
    return SearchReport(
        strategy=strategy,
        variant=variant,
        steps=ints["steps"],
        trials=ints["trials"],
        successes=ints["successes"],
        seed=ints["seed"],
        workers=ints["workers"],
        elapsed=float(elapsed),
        divergence_histogram=dict(sorted(histogram.items())),
        collisions_found=pairs,
        collisions_omitted=ints["collisions_omitted"],
        note=note,
    )
