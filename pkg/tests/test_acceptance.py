"""Behavioural acceptance checks, one printed verdict line per guarantee.

Each test exercises one end-to-end guarantee of the package -- the shipped
collision corpus, the tracer, the search engine, the codecs, and the CLI --
and records a single PASS/FAIL line through the shared reporter in conftest,
so all verdicts appear together in the terminal summary.
"""

from __future__ import annotations

import dataclasses
import random
import shutil
import subprocess
import sys
import time

from conftest import record_acceptance, random_words
from mock_strategies import BernoulliHalf
from test_differential import independent_trace
from test_formats import (
    _PUBLISHED_SHA256_M1,
    _PUBLISHED_SHA256_M2,
    _PUBLISHED_SHA512_M1,
    _PUBLISHED_SHA512_M2,
    random_pair,
    random_path,
    random_report,
)

from sha2lab import (
    CollisionPair,
    MessageBlock,
    RandomPrefixStrategy,
    Variant,
    builtin_pair_sha256,
    builtin_pair_sha512,
    builtin_path_sha256_22,
    compress,
    decode_pair,
    decode_path,
    decode_report,
    digest_padded,
    encode_pair,
    encode_path,
    encode_report,
    estimate_probability,
    expand_message,
    initial_state,
    make_params,
    parse_words,
    search,
    trace_pair,
    word_delta,
)

# Canonical full-round digests from the public FIPS 180-2 standard.
_REFERENCE_DIGESTS = {
    (Variant.SHA256, b""): (
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
    ),
    (Variant.SHA256, b"abc"): (
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    ),
    (Variant.SHA512, b""): (
        "cf83e1357eefb8bdf1542850d66d8007d620e4050b5715dc83f4a921d36ce9ce"
        "47d0d13c5d85f2b0ff8318d2877eec2f63b931bd47417a81a538327af927da3e"
    ),
    (Variant.SHA512, b"abc"): (
        "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a"
        "2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f"
    ),
}


def _timed_pair_check(pair, params):
    """Best-of-five wall time for compressing both blocks and comparing."""
    iv = initial_state(params)
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        d1 = compress(iv, pair.m1, 22, params)
        d2 = compress(iv, pair.m2, 22, params)
        elapsed = time.perf_counter() - t0
        best = min(best, elapsed)
        assert d1 == d2
    return d1, d2, best


def test_builtin_sha256_pair_collides():
    pair = builtin_pair_sha256()
    params = make_params(Variant.SHA256)
    d1, d2, best = _timed_pair_check(pair, params)
    ok = d1 == d2 and pair.m1 != pair.m2 and best < 1e-3
    record_acceptance(
        "1. sha-256 builtin pair collides at 22 steps",
        ok,
        f"digests equal, blocks differ, best of 5: {best * 1e6:.0f}us < 1ms",
    )


def test_builtin_sha512_pair_collides():
    pair = builtin_pair_sha512()
    params = make_params(Variant.SHA512)
    d1, d2, best = _timed_pair_check(pair, params)
    ok = d1 == d2 and pair.m1 != pair.m2 and best < 1e-3
    record_acceptance(
        "2. sha-512 builtin pair collides at 22 steps",
        ok,
        f"digests equal, blocks differ, best of 5: {best * 1e6:.0f}us < 1ms",
    )


def test_trace_matches_builtin_path():
    pair = builtin_pair_sha256()
    params = make_params(Variant.SHA256)
    path = builtin_path_sha256_22()
    trace = trace_pair(initial_state(params), pair)
    assert len(trace) == len(path.steps) == 22
    matching = sum(
        actual_cell == expected_cell
        for actual, expected in zip(trace, path.steps)
        for actual_cell, expected_cell in zip(actual, expected)
    )
    all_ones = sum(cell == params.mask for row in path.steps for cell in row)
    ok = matching == 176 and all_ones == 8
    record_acceptance(
        "3. sha-256 trace matches the embedded 22-step path",
        ok,
        f"{matching}/176 register cells equal; {all_ones} all-ones cells",
    )


def test_schedule_delta_tail():
    # The +1 perturbation at word 8 propagates through the expansion: the
    # recurrence pulls word 9 (delta -1) into word 16, so the first expanded
    # word carries a -1 delta and every later one through step 21 is zero.
    ok = True
    for pair in (builtin_pair_sha256(), builtin_pair_sha512()):
        params = make_params(pair.variant)
        w1 = expand_message(pair.m1, 22, params)
        w2 = expand_message(pair.m2, 22, params)
        deltas = [word_delta(w1[i], w2[i], params.word_bits) for i in range(16, 22)]
        ok = ok and deltas[0] == params.mask and all(d == 0 for d in deltas[1:])
    record_acceptance(
        "4. expanded-word deltas: -1 at step 16, zero at steps 17-21",
        ok,
        "both builtin pairs",
    )


def test_full_round_reference_vectors():
    ok = True
    for (variant, message), expected in _REFERENCE_DIGESTS.items():
        params = make_params(variant)
        digest = digest_padded(message, variant, params.max_steps)
        got = "".join(f"{word:0{params.word_bits // 4}x}" for word in digest)
        ok = ok and got == expected
    record_acceptance(
        "5. full-round digests match the FIPS 180-2 vectors",
        ok,
        "empty string and 'abc', both variants",
    )


def test_tracer_equals_independent_runs():
    t0 = time.perf_counter()
    checked = 0
    ok = True
    for variant in (Variant.SHA256, Variant.SHA512):
        params = make_params(variant)
        iv = initial_state(params)
        rng = random.Random(0xACCE55 ^ params.word_bits)
        step_counts = (1, 8, 22, params.max_steps)
        for _ in range(1000):
            m1 = MessageBlock(random_words(rng, 16, params.word_bits))
            m2 = MessageBlock(random_words(rng, 16, params.word_bits))
            for t in step_counts:
                pair = CollisionPair(variant, t, m1, m2)
                ok = ok and trace_pair(iv, pair) == independent_trace(iv, pair)
                checked += 1
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 30.0
    record_acceptance(
        "6. tracer equals subtraction of two independent runs",
        ok,
        f"{checked} traces (1000 pairs x 4 step counts x 2 variants) "
        f"in {elapsed:.1f}s < 30s",
    )


def test_estimator_calibration():
    # A strategy that collides exactly when one fixed generated bit is set
    # has true success probability 1/2; across 30 fixed seeds the 95%
    # interval should cover log2(1/2) = -1 in at least 27 runs.
    params = make_params(Variant.SHA256)
    hits = 0
    for seed in range(20, 50):
        report = search(
            BernoulliHalf(), budget=10_000, seed=seed, workers=1,
            params=params, steps=1,
        )
        low, high = estimate_probability(report).confidence_interval
        hits += low <= -1.0 <= high
    record_acceptance(
        "7a. estimator calibration on a p=1/2 mock",
        hits >= 27,
        f"{hits}/30 seeded 10^4-trial runs bracket -1 (need >= 27)",
    )


def test_search_soundness_large_run():
    params = make_params(Variant.SHA256)
    strategy = RandomPrefixStrategy(builtin_pair_sha256())
    t0 = time.perf_counter()
    report_1w = search(
        strategy, budget=1 << 20, seed=0, workers=1, params=params, steps=22,
    )
    elapsed = time.perf_counter() - t0
    report_8w = search(
        strategy, budget=1 << 20, seed=0, workers=8, params=params, steps=22,
    )

    def normalize(r):
        return dataclasses.replace(r, elapsed=0.0, workers=0)

    iv = initial_state(params)
    reverified = all(
        p.m1 != p.m2
        and compress(iv, p.m1, 22, params) == compress(iv, p.m2, 22, params)
        for p in report_1w.collisions_found
    )
    ok = (
        elapsed < 300.0
        and report_1w.trials == 1 << 20
        and reverified
        and normalize(report_1w) == normalize(report_8w)
    )
    record_acceptance(
        "7b. 2^20-trial random-prefix search is sound",
        ok,
        f"{elapsed:.2f}s < 300s; {report_1w.successes} collisions, all "
        f"re-verified; 1 vs 8 workers identical modulo elapsed/workers",
    )


def test_codec_round_trips_and_verbatim_tokens():
    rng = random.Random(0x10DEC)
    round_trips = 0
    ok = True
    for variant in (Variant.SHA256, Variant.SHA512):
        params = make_params(variant)
        for _ in range(500):
            pair = random_pair(rng, variant, params)
            path = random_path(rng, variant, params)
            report = random_report(rng, variant, params)
            ok = ok and decode_pair(encode_pair(pair)) == pair
            ok = ok and decode_path(encode_path(path)) == path
            ok = ok and decode_report(encode_report(report)) == report
            round_trips += 3
    for variant, text1, text2, builtin in (
        (Variant.SHA256, _PUBLISHED_SHA256_M1, _PUBLISHED_SHA256_M2,
         builtin_pair_sha256()),
        (Variant.SHA512, _PUBLISHED_SHA512_M1, _PUBLISHED_SHA512_M2,
         builtin_pair_sha512()),
    ):
        m1 = MessageBlock(parse_words(text1, 16, variant))
        m2 = MessageBlock(parse_words(text2, 16, variant))
        ok = ok and (m1, m2) == (builtin.m1, builtin.m2)
    record_acceptance(
        "8. codecs round-trip; verbatim hex tokens equal the embedded pairs",
        ok,
        f"{round_trips} encode-decode identities (1000 per codec)",
    )


def test_cli_selftest():
    executable = shutil.which("sha2lab")
    argv = [executable] if executable else [sys.executable, "-m", "sha2lab.cli"]
    t0 = time.perf_counter()
    proc = subprocess.run(
        argv + ["selftest"], capture_output=True, text=True, timeout=60,
    )
    elapsed = time.perf_counter() - t0
    ok = proc.returncode == 0 and elapsed < 5.0 and "FAIL" not in proc.stdout
    record_acceptance(
        "9. CLI selftest exits 0",
        ok,
        f"exit {proc.returncode} in {elapsed:.2f}s < 5s",
    )
