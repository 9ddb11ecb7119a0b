"""Shared fixtures and the acceptance-summary reporter."""

from __future__ import annotations

import random

import pytest

from sha2lab import Variant, make_params

# One line per acceptance check, printed in the terminal summary so the
# pass/fail verdicts are visible even under captured output.
ACCEPTANCE_LINES: list[str] = []


def record_acceptance(label: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    line = f"{label}: {verdict}{suffix}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance checks")
    for line in ACCEPTANCE_LINES:
        terminalreporter.line(line)


@pytest.fixture(params=[Variant.SHA256, Variant.SHA512], ids=["sha256", "sha512"])
def variant(request):
    return request.param


@pytest.fixture
def params(variant):
    return make_params(variant)


def random_words(rng: random.Random, count: int, word_bits: int) -> tuple[int, ...]:
    return tuple(rng.getrandbits(word_bits) for _ in range(count))
