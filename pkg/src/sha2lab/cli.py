"""Command-line frontend.

Exit codes: 0 for a positive analytical result (collision verified, path
matched, command completed), 1 for a negative analytical result (no
collision, path mismatch, selftest failure), 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .core import (
    MessageBlock,
    RegisterState,
    Variant,
    compress,
    digest_padded,
    expand_message,
    initial_state,
    make_params,
)
from .differential import (
    CollisionPair,
    check_path,
    extract_word_deltas,
    format_delta,
    trace_pair,
    word_delta,
)
from .formats import (
    DecodeError,
    ParseError,
    decode_pair,
    decode_path,
    decode_report,
    encode_report,
    parse_register_state,
)
from .search import (
    DEFAULT_BUDGET,
    FixedDeltasStrategy,
    RandomPrefixStrategy,
    ReplayStrategy,
    estimate_probability,
    search,
)
from .vectors import (
    builtin_pair_sha256,
    builtin_pair_sha512,
    builtin_path_sha256_22,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def _load_pair(source: str) -> CollisionPair:
    if source == "builtin-sha256":
        return builtin_pair_sha256()
    if source == "builtin-sha512":
        return builtin_pair_sha512()
    return decode_pair(Path(source).read_text())


def _load_iv(path: str | None, variant: Variant) -> RegisterState:
    if path is None:
        return initial_state(make_params(variant))
    return parse_register_state(Path(path).read_text(), variant)


def _words_hex(words, digits: int) -> str:
    return " ".join(f"{w:0{digits}x}" for w in words)


def cmd_verify(args: argparse.Namespace) -> int:
    pair = _load_pair(args.pair)
    params = make_params(pair.variant)
    steps = args.steps if args.steps is not None else pair.step_count
    iv = _load_iv(args.iv, pair.variant)
    out1 = compress(iv, pair.m1, steps, params)
    out2 = compress(iv, pair.m2, steps, params)
    digits = params.word_hex_digits
    print(f"variant: {pair.variant.value}   steps: {steps}")
    print(f"compress(m1): {_words_hex(out1, digits)}")
    print(f"compress(m2): {_words_hex(out2, digits)}")
    collided = out1 == out2 and pair.m1 != pair.m2
    if out1 == out2 and pair.m1 == pair.m2:
        print("verdict: IDENTICAL-MESSAGES (trivial)")
        return EXIT_OK
    print(f"verdict: {'COLLISION' if collided else 'NO-COLLISION'}")
    return EXIT_OK if collided else EXIT_NEGATIVE


def cmd_trace(args: argparse.Namespace) -> int:
    pair = _load_pair(args.pair)
    params = make_params(pair.variant)
    iv = _load_iv(args.iv, pair.variant)
    if args.steps is not None:
        pair = CollisionPair(pair.variant, args.steps, pair.m1, pair.m2)
    trace = trace_pair(iv, pair)
    digits = params.word_hex_digits
    width = max(digits, 4)
    header = "step " + " ".join(f"d{n}".rjust(width) for n in "abcdefgh")
    print(header)
    for i, vec in enumerate(trace):
        cells = " ".join(
            (f"{v:0{digits}x}" if v else "0").rjust(width) for v in vec
        )
        print(f"{i:4d} {cells}")
    if args.path is None:
        return EXIT_OK
    if args.path == "builtin":
        path = builtin_path_sha256_22()
    else:
        path = decode_path(Path(args.path).read_text())
    if path.variant is not pair.variant:
        raise DecodeError(
            f"path is for {path.variant.value}, pair is {pair.variant.value}"
        )
    result = check_path(trace, path)
    if result.matched:
        print("path: MATCH")
        return EXIT_OK
    print(
        f"path: DIVERGES at step {result.step}, register {result.register}: "
        f"expected {format_delta(result.expected, params.word_bits)}, "
        f"actual {format_delta(result.actual, params.word_bits)}"
    )
    return EXIT_NEGATIVE


def cmd_deltas(args: argparse.Namespace) -> int:
    pair = _load_pair(args.pair)
    params = make_params(pair.variant)
    deltas = extract_word_deltas(pair)
    digits = params.word_hex_digits
    print(f"variant: {pair.variant.value}   steps: {pair.step_count}")
    for i in range(16):
        print(
            f"w[{i:2d}]: m1={pair.m1[i]:0{digits}x} m2={pair.m2[i]:0{digits}x} "
            f"delta={format_delta(deltas[i], params.word_bits)}"
        )
    return EXIT_OK


def _parse_indices(spec: str) -> frozenset[int]:
    indices: set[int] = set()
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            indices.update(range(int(lo), int(hi) + 1))
        else:
            indices.add(int(part))
    if not indices:
        raise ValueError(f"no indices in {spec!r}")
    return frozenset(indices)


def cmd_search(args: argparse.Namespace) -> int:
    template_source = args.template
    if template_source is None:
        template_source = f"builtin-{args.variant or 'sha256'}"
    template = _load_pair(template_source)
    variant = template.variant
    if args.variant is not None and Variant(args.variant) is not variant:
        raise DecodeError(
            f"--variant {args.variant} conflicts with template variant {variant.value}"
        )
    params = make_params(variant)

    target_path = None
    if args.with_path == "builtin":
        target_path = builtin_path_sha256_22()
    elif args.with_path is not None:
        target_path = decode_path(Path(args.with_path).read_text())

    if args.strategy == "replay":
        strategy = ReplayStrategy(template, target_path=target_path)
    elif args.strategy == "random-prefix":
        strategy = RandomPrefixStrategy(
            template, _parse_indices(args.indices), target_path=target_path
        )
    else:
        strategy = FixedDeltasStrategy(
            extract_word_deltas(template),
            allow_trivial=args.allow_trivial,
            target_path=target_path,
        )

    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    report = search(strategy, args.budget, args.seed, workers, params, args.steps)
    print(f"strategy: {report.strategy}")
    print(f"variant: {variant.value}   steps: {report.steps}   seed: {report.seed}")
    print(f"trials: {report.trials}   successes: {report.successes}")
    print(
        f"distinct collisions: {len(report.collisions_found) + report.collisions_omitted}"
        f" (stored {len(report.collisions_found)})"
    )
    if report.divergence_histogram:
        hist = "  ".join(
            f"{step}:{n}" for step, n in report.divergence_histogram.items()
        )
        print(f"first divergence histogram: {hist}")
    if args.out:
        Path(args.out).write_text(encode_report(report))
        print(f"report written to {args.out}")
    print(f"elapsed: {report.elapsed:.2f} s")
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    report = decode_report(Path(args.report).read_text())
    est = estimate_probability(report)
    print(f"trials: {report.trials}   successes: {report.successes}")
    if est.log2_probability is None:
        print("no successes observed")
        print(f"95% upper bound (log2): {est.confidence_interval[1]:.4f}")
    else:
        low, high = est.confidence_interval
        print(f"log2 probability: {est.log2_probability:.4f}")
        print(f"95% interval (log2): [{low:.4f}, {high:.4f}]")
    return EXIT_OK


# Published digests of the empty string and "abc", from the standard's
# reference vectors.
_STANDARD_DIGESTS = {
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


def _digest_hex(message: bytes, variant: Variant) -> str:
    params = make_params(variant)
    words = digest_padded(message, variant, params.max_steps)
    return "".join(f"{w:0{params.word_hex_digits}x}" for w in words)


def cmd_selftest(_args: argparse.Namespace) -> int:
    checks: list[tuple[str, bool]] = []

    for pair, label in (
        (builtin_pair_sha256(), "sha256"),
        (builtin_pair_sha512(), "sha512"),
    ):
        params = make_params(pair.variant)
        iv = initial_state(params)
        out1 = compress(iv, pair.m1, pair.step_count, params)
        out2 = compress(iv, pair.m2, pair.step_count, params)
        checks.append(
            (f"{label} pair collides at {pair.step_count} steps", out1 == out2 and pair.m1 != pair.m2)
        )

    pair256 = builtin_pair_sha256()
    params256 = make_params(Variant.SHA256)
    trace = trace_pair(initial_state(params256), pair256)
    checks.append(
        ("sha256 trace matches embedded path", check_path(trace, builtin_path_sha256_22()).matched)
    )

    # The local collision spans steps 8..16: the schedule recurrence delivers
    # a closing -1 correction at W16, after which all schedule deltas vanish.
    for pair, label in (
        (builtin_pair_sha256(), "sha256"),
        (builtin_pair_sha512(), "sha512"),
    ):
        params = make_params(pair.variant)
        w1 = expand_message(pair.m1, pair.step_count, params)
        w2 = expand_message(pair.m2, pair.step_count, params)
        ok = word_delta(w1[16], w2[16], params.word_bits) == params.mask and all(
            word_delta(w1[i], w2[i], params.word_bits) == 0
            for i in range(17, pair.step_count)
        )
        checks.append((f"schedule deltas cancel after the step-16 correction ({label})", ok))

    for variant in (Variant.SHA256, Variant.SHA512):
        ok = all(
            _digest_hex(message, variant) == expected
            for (v, message), expected in _STANDARD_DIGESTS.items()
            if v is variant
        )
        checks.append((f"standard vectors {variant.value}", ok))

    all_ok = True
    for label, ok in checks:
        print(f"{label}: {'ok' if ok else 'FAIL'}")
        all_ok &= ok
    return EXIT_OK if all_ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sha2lab",
        description="Verify, trace and search for collisions in step-reduced SHA-2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pair_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "pair",
            help="pair source: builtin-sha256, builtin-sha512, or a pair JSON file",
        )

    p = sub.add_parser("verify", help="check whether a message pair collides")
    add_pair_arg(p)
    p.add_argument("--steps", type=int, default=None, help="step count override")
    p.add_argument("--iv", default=None, help="IV override file (8 hex words)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace", help="print the per-step register delta table")
    add_pair_arg(p)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--iv", default=None, help="IV override file (8 hex words)")
    p.add_argument(
        "--path",
        default=None,
        help="compare against a path: 'builtin' or a path JSON file",
    )
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("deltas", help="list the 16 message-word deltas of a pair")
    add_pair_arg(p)
    p.set_defaults(func=cmd_deltas)

    p = sub.add_parser("search", help="run a randomized collision search")
    p.add_argument("--variant", choices=["sha256", "sha512"], default=None)
    p.add_argument(
        "--strategy",
        choices=["replay", "random-prefix", "fixed-deltas"],
        default="random-prefix",
    )
    p.add_argument(
        "--template",
        default=None,
        help="template pair source (default: the builtin pair for --variant)",
    )
    p.add_argument(
        "--indices",
        default="0-7",
        help="indices randomized by random-prefix, e.g. '0-7' or '0,1,4'",
    )
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--steps", type=int, default=22)
    p.add_argument(
        "--with-path",
        default=None,
        help="record divergence against a path: 'builtin' or a path JSON file",
    )
    p.add_argument("--allow-trivial", action="store_true")
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("estimate", help="estimate success probability from a report")
    p.add_argument("report", help="report JSON file")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("selftest", help="verify the embedded vectors end-to-end")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DecodeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
