"""Seeded randomized collision-trial engine and success-probability estimator.

Candidate words are drawn from a counter-based generator (Philox) keyed by
(seed, trial_index), so any partition of the trial range across workers
reproduces the same per-trial inputs and the merged report is independent
of worker count and scheduling.  The built-in strategies are evaluated in
numpy batches for throughput; custom strategy subclasses fall back to a
scalar loop with identical semantics.

The strategy layer is an engineering substitute: the procedure that
produced the embedded colliding pairs is not public, and no strategy here
claims to reproduce its quoted success rates.
"""

from __future__ import annotations

import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .core import (
    MessageBlock,
    RegisterState,
    Sha2Params,
    Variant,
    check_step_count,
    compress,
    initial_state,
)
from .core import big_sigma0, big_sigma1, ch, maj, small_sigma0, small_sigma1
from .differential import (
    CollisionPair,
    DifferentialPath,
    WordDeltas,
    extract_word_deltas,
)

DEFAULT_BUDGET = 1 << 20
PAIR_CAP = 64
_CHUNK_TRIALS = 16384

# Two-sided 95% standard normal quantile, used by the Wilson interval.
_Z95 = 1.959963984540054

REPORT_NOTE = (
    "success rates are per-trial empirical measurements for the configured "
    "candidate strategy; the original procedure behind the embedded colliding "
    "pairs is not public and is not reimplemented here"
)


class SearchStrategy:
    """Base for candidate-pair generators; subclass to plug in your own.

    A strategy turns the trial's 16 generator words into an (m1, m2) word
    pair.  Implementations must be deterministic functions of those words.
    """

    target_path: DifferentialPath | None = None

    def candidate_words(
        self, words: tuple[int, ...], params: Sha2Params
    ) -> tuple[tuple[int, ...], tuple[int, ...]]:
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__

    def validate(self, params: Sha2Params, steps: int) -> None:
        if self.target_path is not None:
            if self.target_path.variant is not params.variant:
                raise ValueError("target path variant does not match search variant")
            if len(self.target_path) != steps:
                raise ValueError(
                    f"target path has {len(self.target_path)} steps, search uses {steps}"
                )


@dataclass(frozen=True)
class ReplayStrategy(SearchStrategy):
    """Replays a fixed pair on every trial; the generator words are unused."""

    template: CollisionPair
    target_path: DifferentialPath | None = None

    def candidate_words(self, words, params):
        return self.template.m1.words, self.template.m2.words

    def describe(self) -> str:
        return "replay" + ("+path" if self.target_path else "")

    def validate(self, params: Sha2Params, steps: int) -> None:
        super().validate(params, steps)
        if self.template.variant is not params.variant:
            raise ValueError("template variant does not match search variant")


@dataclass(frozen=True)
class RandomPrefixStrategy(SearchStrategy):
    """Randomizes chosen template words of m1, keeping the template's deltas.

    Only indices whose template word-delta is zero may be randomized; m2 is
    m1 plus the template deltas, so every candidate pair carries exactly the
    template's word-difference pattern.
    """

    template: CollisionPair
    randomized_indices: frozenset[int] = frozenset(range(8))
    target_path: DifferentialPath | None = None

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "randomized_indices", frozenset(self.randomized_indices)
        )
        bad = [i for i in self.randomized_indices if not 0 <= i <= 15]
        if bad:
            raise ValueError(f"randomized indices out of range 0..15: {sorted(bad)}")
        deltas = extract_word_deltas(self.template)
        clash = sorted(set(deltas.nonzero_indices()) & self.randomized_indices)
        if clash:
            raise ValueError(
                f"cannot randomize indices with nonzero template deltas: {clash}"
            )

    def candidate_words(self, words, params):
        deltas = extract_word_deltas(self.template)
        mask = params.mask
        m1 = tuple(
            words[i] if i in self.randomized_indices else self.template.m1[i]
            for i in range(16)
        )
        m2 = tuple((w + d) & mask for w, d in zip(m1, deltas))
        return m1, m2

    def describe(self) -> str:
        idx = ",".join(str(i) for i in sorted(self.randomized_indices))
        return f"random-prefix(indices={idx})" + ("+path" if self.target_path else "")

    def validate(self, params: Sha2Params, steps: int) -> None:
        super().validate(params, steps)
        if self.template.variant is not params.variant:
            raise ValueError("template variant does not match search variant")


@dataclass(frozen=True)
class FixedDeltasStrategy(SearchStrategy):
    """Applies fixed word deltas to a fully random m1.

    All-zero deltas produce trivial m1 == m2 "collisions" on every trial and
    are rejected unless ``allow_trivial`` is set, so probability reports
    cannot be gamed by a degenerate configuration.
    """

    deltas: WordDeltas
    allow_trivial: bool = False
    target_path: DifferentialPath | None = None

    def __post_init__(self) -> None:
        if not self.allow_trivial and not self.deltas.nonzero_indices():
            raise ValueError(
                "all-zero deltas collide trivially; pass allow_trivial=True to force"
            )

    def candidate_words(self, words, params):
        mask = params.mask
        m2 = tuple((w + d) & mask for w, d in zip(words, self.deltas))
        return words, m2

    def describe(self) -> str:
        idx = ",".join(str(i) for i in self.deltas.nonzero_indices())
        return f"fixed-deltas(nonzero at {idx or 'none'})" + (
            "+path" if self.target_path else ""
        )

    def validate(self, params: Sha2Params, steps: int) -> None:
        super().validate(params, steps)
        for i, d in enumerate(self.deltas):
            if d > params.mask:
                raise ValueError(f"delta {i} does not fit {params.variant.value}: {d:#x}")


@dataclass(frozen=True)
class TrialOutcome:
    """Result of a single candidate trial."""

    pair: CollisionPair
    collided: bool
    path_matched: bool | None
    first_divergence_step: int | None


@dataclass(frozen=True)
class SearchReport:
    """Aggregated search results; identical for any worker count at fixed seed."""

    strategy: str
    variant: Variant
    steps: int
    trials: int
    successes: int
    seed: int
    workers: int
    elapsed: float
    divergence_histogram: dict[int, int]
    collisions_found: tuple[CollisionPair, ...]
    collisions_omitted: int
    note: str = REPORT_NOTE


@dataclass(frozen=True)
class Estimate:
    """log2 empirical success probability with a 95% confidence interval.

    ``log2_probability`` is None when no successes were observed; the upper
    bound then comes from the rule of three (3/n).
    """

    log2_probability: float | None
    confidence_interval: tuple[float, float]


# ---------------------------------------------------------------------------
# Counter-based candidate generation


def _uint64_per_trial(params: Sha2Params) -> int:
    # 16 words of 32 or 64 bits; Philox emits 4 uint64 per counter block.
    return 8 if params.word_bits == 32 else 16


def _raw_to_words(raw: Sequence[int], params: Sha2Params) -> tuple[int, ...]:
    if params.word_bits == 64:
        return tuple(int(r) for r in raw)
    words = []
    for r in raw:
        r = int(r)
        words.append(r & 0xFFFFFFFF)
        words.append(r >> 32)
    return tuple(words)


def trial_words(seed: int, trial_index: int, params: Sha2Params) -> tuple[int, ...]:
    """The 16 generator words for one trial; pure in (seed, trial_index)."""
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    if trial_index < 0:
        raise ValueError("trial index must be nonnegative")
    n64 = _uint64_per_trial(params)
    counter = (n64 // 4) * trial_index
    raw = np.random.Philox(key=seed, counter=counter).random_raw(n64)
    return _raw_to_words(raw, params)


def _chunk_raw_words(
    seed: int, start: int, count: int, params: Sha2Params
) -> np.ndarray:
    """Generator words for trials [start, start+count) as a (count, 16) array."""
    n64 = _uint64_per_trial(params)
    counter = (n64 // 4) * start
    raw = np.random.Philox(key=seed, counter=counter).random_raw(count * n64)
    if params.word_bits == 64:
        return raw.reshape(count, 16)
    r = raw.reshape(count, 8)
    words = np.empty((count, 16), dtype=np.uint32)
    words[:, 0::2] = (r & np.uint64(0xFFFFFFFF)).astype(np.uint32)
    words[:, 1::2] = (r >> np.uint64(32)).astype(np.uint32)
    return words


# ---------------------------------------------------------------------------
# Scalar trial evaluation (reference semantics)


def _expand_words(
    words: Sequence[int], t: int, params: Sha2Params
) -> Sequence[int]:
    if t <= 16:
        return words[:t]
    w = list(words)
    mask = params.mask
    for i in range(16, t):
        w.append(
            (
                small_sigma1(w[i - 2], params)
                + w[i - 7]
                + small_sigma0(w[i - 15], params)
                + w[i - 16]
            )
            & mask
        )
    return w


def _trial_eval(
    strategy: SearchStrategy,
    params: Sha2Params,
    steps: int,
    words: tuple[int, ...],
):
    """Evaluate one candidate: (m1w, m2w, collided, matched, divergence_step)."""
    m1w, m2w = strategy.candidate_words(words, params)
    w1 = _expand_words(m1w, steps, params)
    w2 = _expand_words(m2w, steps, params)
    mask = params.mask
    k = params.k
    s1 = s2 = initial_state(params)
    path = strategy.target_path
    div_step = -1
    for i in range(steps):
        ki = k[i]
        a, b, c, d, e, f, g, h = s1
        t1 = (h + big_sigma1(e, params) + ch(e, f, g) + ki + w1[i]) & mask
        t2 = (big_sigma0(a, params) + maj(a, b, c)) & mask
        s1 = RegisterState((t1 + t2) & mask, a, b, c, (d + t1) & mask, e, f, g)
        a, b, c, d, e, f, g, h = s2
        t1 = (h + big_sigma1(e, params) + ch(e, f, g) + ki + w2[i]) & mask
        t2 = (big_sigma0(a, params) + maj(a, b, c)) & mask
        s2 = RegisterState((t1 + t2) & mask, a, b, c, (d + t1) & mask, e, f, g)
        if path is not None and div_step < 0:
            row = path.steps[i]
            for x, y, want in zip(s1, s2, row):
                if (y - x) & mask != want:
                    div_step = i
                    break
    collided = s1 == s2
    if path is None:
        return m1w, m2w, collided, None, None
    matched = div_step < 0
    return m1w, m2w, collided, matched, (None if matched else div_step)


def run_trial(
    strategy: SearchStrategy,
    trial_index: int,
    seed: int,
    params: Sha2Params,
    steps: int,
) -> TrialOutcome:
    """Evaluate the candidate pair for one (seed, trial_index); pure."""
    check_step_count(steps, params)
    strategy.validate(params, steps)
    words = trial_words(seed, trial_index, params)
    m1w, m2w, collided, matched, div = _trial_eval(strategy, params, steps, words)
    pair = CollisionPair(
        params.variant, steps, MessageBlock(m1w), MessageBlock(m2w)
    )
    return TrialOutcome(pair, collided, matched, div)


# ---------------------------------------------------------------------------
# Vectorized chunk evaluation for the built-in strategies


def _np_dtype(params: Sha2Params):
    return np.uint32 if params.word_bits == 32 else np.uint64


def _batch_candidates(
    strategy: SearchStrategy, words: np.ndarray, params: Sha2Params
) -> tuple[np.ndarray, np.ndarray]:
    dtype = _np_dtype(params)
    count = words.shape[0]
    if isinstance(strategy, ReplayStrategy):
        m1 = np.tile(np.array(strategy.template.m1.words, dtype=dtype), (count, 1))
        m2 = np.tile(np.array(strategy.template.m2.words, dtype=dtype), (count, 1))
        return m1, m2
    if isinstance(strategy, RandomPrefixStrategy):
        deltas = extract_word_deltas(strategy.template)
        m1 = np.tile(np.array(strategy.template.m1.words, dtype=dtype), (count, 1))
        idx = sorted(strategy.randomized_indices)
        m1[:, idx] = words[:, idx]
        m2 = m1 + np.array(deltas.dw, dtype=dtype)
        return m1, m2
    if isinstance(strategy, FixedDeltasStrategy):
        m1 = words.copy()
        m2 = m1 + np.array(strategy.deltas.dw, dtype=dtype)
        return m1, m2
    raise TypeError(f"no batch path for {type(strategy).__name__}")


def _batch_schedule(m: np.ndarray, steps: int, params: Sha2Params) -> np.ndarray:
    if steps <= 16:
        return m[:, :steps]
    bits = params.word_bits
    r0, r1, sh = params.small_sigma0_spec
    q0, q1, qh = params.small_sigma1_spec
    w = np.empty((m.shape[0], steps), dtype=m.dtype)
    w[:, :16] = m
    for i in range(16, steps):
        x = w[:, i - 15]
        s0 = ((x >> r0) | (x << (bits - r0))) ^ ((x >> r1) | (x << (bits - r1))) ^ (x >> sh)
        y = w[:, i - 2]
        s1 = ((y >> q0) | (y << (bits - q0))) ^ ((y >> q1) | (y << (bits - q1))) ^ (y >> qh)
        w[:, i] = s1 + w[:, i - 7] + s0 + w[:, i - 16]
    return w


def _batch_eval(
    strategy: SearchStrategy,
    params: Sha2Params,
    steps: int,
    words: np.ndarray,
):
    """Vectorized twin of _trial_eval over a chunk.

    Returns (m1, m2, collided, div_step) where div_step is -1 for trials
    matching the target path (or when no path is set).
    """
    bits = params.word_bits
    b0, b1, b2 = params.big_sigma0_rots
    e0, e1, e2 = params.big_sigma1_rots
    dtype = _np_dtype(params)
    m1, m2 = _batch_candidates(strategy, words, params)
    w1 = _batch_schedule(m1, steps, params)
    w2 = _batch_schedule(m2, steps, params)
    count = words.shape[0]
    iv = np.array(params.iv, dtype=dtype)
    state1 = [np.full(count, iv[j], dtype=dtype) for j in range(8)]
    state2 = [np.full(count, iv[j], dtype=dtype) for j in range(8)]
    path = strategy.target_path
    div_step = np.full(count, -1, dtype=np.int64)
    k = params.k
    for i in range(steps):
        ki = dtype(k[i])
        for state, w in ((state1, w1), (state2, w2)):
            a, b, c, d, e, f, g, h = state
            s1 = (
                ((e >> e0) | (e << (bits - e0)))
                ^ ((e >> e1) | (e << (bits - e1)))
                ^ ((e >> e2) | (e << (bits - e2)))
            )
            t1 = h + s1 + ((e & f) ^ (~e & g)) + ki + w[:, i]
            s0 = (
                ((a >> b0) | (a << (bits - b0)))
                ^ ((a >> b1) | (a << (bits - b1)))
                ^ ((a >> b2) | (a << (bits - b2)))
            )
            t2 = s0 + ((a & b) ^ (a & c) ^ (b & c))
            state[:] = [t1 + t2, a, b, c, d + t1, e, f, g]
        if path is not None:
            row = path.steps[i]
            mismatch = np.zeros(count, dtype=bool)
            for j in range(8):
                mismatch |= (state2[j] - state1[j]) != dtype(row[j])
            div_step[(div_step < 0) & mismatch] = i
    collided = np.ones(count, dtype=bool)
    for j in range(8):
        collided &= state1[j] == state2[j]
    return m1, m2, collided, div_step


# ---------------------------------------------------------------------------
# Chunked search with order-insensitive merge


@dataclass
class _ChunkResult:
    successes: int
    histogram: dict[int, int]
    # all chunk-local first occurrences of distinct colliding pairs, in trial
    # order; word tuples retained only for the first PAIR_CAP of them
    uniques: list[tuple[int, str]] = field(default_factory=list)
    pairs: dict[str, tuple[tuple[int, ...], tuple[int, ...]]] = field(
        default_factory=dict
    )


def _pair_key(m1_words: Sequence[int], params: Sha2Params) -> str:
    digits = params.word_hex_digits
    return "".join(f"{int(w):0{digits}x}" for w in m1_words)


def _scan_chunk(
    strategy: SearchStrategy,
    params: Sha2Params,
    steps: int,
    seed: int,
    start: int,
    count: int,
) -> _ChunkResult:
    has_path = strategy.target_path is not None
    result = _ChunkResult(0, {})
    seen_local: set[str] = set()

    def record(trial_index: int, m1w: tuple[int, ...], m2w: tuple[int, ...]) -> None:
        key = _pair_key(m1w, params)
        if key in seen_local:
            return
        seen_local.add(key)
        result.uniques.append((trial_index, key))
        if len(result.pairs) < PAIR_CAP:
            result.pairs[key] = (m1w, m2w)

    if type(strategy) in (ReplayStrategy, RandomPrefixStrategy, FixedDeltasStrategy):
        words = _chunk_raw_words(seed, start, count, params)
        m1, m2, collided, div_step = _batch_eval(strategy, params, steps, words)
        result.successes = int(collided.sum())
        if has_path:
            # every non-collided trial diverged somewhere; a fully matching
            # non-collided trial is only possible for paths that do not end
            # at zero and is binned one past the last step
            keys = np.where(div_step[~collided] < 0, steps, div_step[~collided])
            values, counts = np.unique(keys, return_counts=True)
            result.histogram = {int(v): int(c) for v, c in zip(values, counts)}
        for idx in np.nonzero(collided)[0]:
            record(
                start + int(idx),
                tuple(int(x) for x in m1[idx]),
                tuple(int(x) for x in m2[idx]),
            )
        return result

    # generic scalar fallback for custom strategies
    words_arr = _chunk_raw_words(seed, start, count, params)
    for j in range(count):
        words = tuple(int(x) for x in words_arr[j])
        m1w, m2w, collided, matched, div = _trial_eval(strategy, params, steps, words)
        if collided:
            result.successes += 1
            record(start + j, m1w, m2w)
        elif has_path:
            key = steps if matched else div
            result.histogram[key] = result.histogram.get(key, 0) + 1
    return result


def _scan_task(args) -> _ChunkResult:
    return _scan_chunk(*args)


def _chunks(budget: int) -> Iterator[tuple[int, int]]:
    start = 0
    while start < budget:
        count = min(_CHUNK_TRIALS, budget - start)
        yield start, count
        start += count


def search(
    strategy: SearchStrategy,
    budget: int,
    seed: int,
    workers: int,
    params: Sha2Params,
    steps: int,
) -> SearchReport:
    """Evaluate trial indices 0..budget-1 and aggregate a report.

    The trial range is split into fixed-size chunks whose results merge by
    commutative aggregation keyed on trial index, so the report does not
    depend on worker count or scheduling.  Collisions are deduplicated by
    m1's canonical hex encoding and at most PAIR_CAP pairs are stored.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    check_step_count(steps, params)
    strategy.validate(params, steps)

    t0 = time.perf_counter()
    tasks = [(strategy, params, steps, seed, start, count) for start, count in _chunks(budget)]
    if workers == 1 or len(tasks) == 1:
        results = [_scan_task(t) for t in tasks]
    else:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            results = list(pool.map(_scan_task, tasks))
    elapsed = time.perf_counter() - t0

    successes = 0
    histogram: dict[int, int] = {}
    seen: set[str] = set()
    stored: list[CollisionPair] = []
    for res in results:
        successes += res.successes
        for step_idx, n in res.histogram.items():
            histogram[step_idx] = histogram.get(step_idx, 0) + n
        for _, key in res.uniques:
            if key in seen:
                continue
            seen.add(key)
            if len(stored) < PAIR_CAP:
                m1w, m2w = res.pairs[key]
                stored.append(
                    CollisionPair(
                        params.variant, steps, MessageBlock(m1w), MessageBlock(m2w)
                    )
                )

    iv = initial_state(params)
    for pair in stored:
        if compress(iv, pair.m1, steps, params) != compress(iv, pair.m2, steps, params):
            raise RuntimeError("search engine produced a non-verifying collision")

    return SearchReport(
        strategy=strategy.describe(),
        variant=params.variant,
        steps=steps,
        trials=budget,
        successes=successes,
        seed=seed,
        workers=workers,
        elapsed=elapsed,
        divergence_histogram=dict(sorted(histogram.items())),
        collisions_found=tuple(stored),
        collisions_omitted=len(seen) - len(stored),
    )


# ---------------------------------------------------------------------------
# Probability estimation


def wilson_log2_interval(successes: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for successes/trials, as log2 bounds."""
    z = _Z95
    n = trials
    phat = successes / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom
    low = max(0.0, center - half)
    high = min(1.0, center + half)
    low_l2 = math.log2(low) if low > 0 else -math.inf
    high_l2 = math.log2(high) if high > 0 else -math.inf
    return low_l2, high_l2


def estimate_probability(report: SearchReport) -> Estimate:
    """Point estimate log2(successes/trials) with a 95% interval.

    Zero successes yields the no-successes marker and a rule-of-three upper
    bound of 3/trials.
    """
    if report.trials < 1:
        raise ValueError("report has no trials")
    s, n = report.successes, report.trials
    if s == 0:
        return Estimate(None, (-math.inf, math.log2(3.0 / n)))
    return Estimate(math.log2(s / n), wilson_log2_interval(s, n))
