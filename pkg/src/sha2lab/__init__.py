"""Workbench for verifying and searching for collisions in step-reduced SHA-2."""

from .core import (
    MessageBlock,
    RegisterState,
    Sha2Params,
    Variant,
    compress,
    digest_padded,
    expand_message,
    initial_state,
    make_params,
    run_steps,
    step,
)
from .differential import (
    CollisionPair,
    DeltaVector,
    DifferentialPath,
    PathCheck,
    WordDeltas,
    ZERO_VECTOR,
    apply_delta,
    apply_word_deltas,
    check_path,
    derive_path,
    extract_word_deltas,
    format_delta,
    state_delta,
    trace_pair,
    word_delta,
)
from .formats import (
    DecodeError,
    ParseError,
    decode_pair,
    decode_path,
    decode_report,
    encode_pair,
    encode_path,
    encode_report,
    format_block,
    parse_block,
    parse_register_state,
    parse_words,
)
from .search import (
    DEFAULT_BUDGET,
    Estimate,
    FixedDeltasStrategy,
    PAIR_CAP,
    RandomPrefixStrategy,
    ReplayStrategy,
    SearchReport,
    SearchStrategy,
    TrialOutcome,
    estimate_probability,
    run_trial,
    search,
    trial_words,
    wilson_log2_interval,
)
from .vectors import (
    BUILTIN_STEP_COUNT,
    VectorCorpus,
    builtin_corpus,
    builtin_pair_sha256,
    builtin_pair_sha512,
    builtin_path_sha256_22,
    corpus_checksum,
)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_STEP_COUNT",
    "CollisionPair",
    "DEFAULT_BUDGET",
    "DecodeError",
    "DeltaVector",
    "DifferentialPath",
    "Estimate",
    "FixedDeltasStrategy",
    "MessageBlock",
    "PAIR_CAP",
    "ParseError",
    "PathCheck",
    "RandomPrefixStrategy",
    "RegisterState",
    "ReplayStrategy",
    "SearchReport",
    "SearchStrategy",
    "Sha2Params",
    "TrialOutcome",
    "Variant",
    "VectorCorpus",
    "WordDeltas",
    "ZERO_VECTOR",
    "apply_delta",
    "apply_word_deltas",
    "builtin_corpus",
    "builtin_pair_sha256",
    "builtin_pair_sha512",
    "builtin_path_sha256_22",
    "check_path",
    "compress",
    "corpus_checksum",
    "decode_pair",
    "decode_path",
    "decode_report",
    "derive_path",
    "digest_padded",
    "encode_pair",
    "encode_path",
    "encode_report",
    "estimate_probability",
    "expand_message",
    "extract_word_deltas",
    "format_block",
    "format_delta",
    "initial_state",
    "make_params",
    "parse_block",
    "parse_register_state",
    "parse_words",
    "run_trial",
    "run_steps",
    "search",
    "state_delta",
    "step",
    "trace_pair",
    "trial_words",
    "wilson_log2_interval",
    "word_delta",
]
