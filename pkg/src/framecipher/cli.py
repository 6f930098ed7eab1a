"""Command-line front end.

Subcommands: keygen, encode, decode, bruteforce, analyze, cpa, perturb,
experiment.  All randomness flows from explicit --seed flags, so identical
invocations produce byte-identical outputs.  Exit codes: 0 success, 1
usage error, 2 cryptographic failure (divisibility/rank errors).
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from pathlib import Path

from . import brute_force, keyfiles, perturbation, plotting
from .brute_force import BruteForceConfig, Histogram
from .cpa import EncryptionOracle, cpa_attack
from .schemes import (
    CryptoError,
    GarbageSpec,
    Scheme1Key,
    build_matrix,
    decode,
    draw_garbage_blocks,
    encode,
    keygen,
    text_to_blocks,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CRYPTO = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_plaintext(args) -> bytes:
    if args.text is not None:
        return args.text.encode("ascii")
    return Path(args.infile).read_bytes()


def _cmd_keygen(args) -> int:
    key = keygen(
        args.scheme,
        seed=args.seed,
        value_range=tuple(args.range),
        orders=args.orders,
        dct_size=args.dct_size,
        hadamard_exponent=args.exponent,
    )
    keyfiles.write_key(key, args.out)
    print(f"wrote scheme-{args.scheme} key to {args.out}")
    return EXIT_OK


def _cmd_encode(args) -> int:
    key = keyfiles.read_key(args.key)
    stream = encode(key, _read_plaintext(args), GarbageSpec(args.garbage, args.seed))
    keyfiles.write_ciphertext(stream, args.out)
    print(f"wrote {len(stream.blocks)} blocks to {args.out}")
    return EXIT_OK


def _cmd_decode(args) -> int:
    key = keyfiles.read_key(args.key)
    plain = decode(key, keyfiles.read_ciphertext(args.infile))
    if args.out:
        Path(args.out).write_bytes(plain)
        print(f"wrote {len(plain)} bytes to {args.out}")
    else:
        sys.stdout.write(plain.decode("ascii"))
    return EXIT_OK


def _cmd_bruteforce(args) -> int:
    stream = keyfiles.read_ciphertext(args.ciphertext)
    cfg = BruteForceConfig.uniform(
        args.orders,
        args.min,
        args.max,
        parallelism=args.parallel,
        budget_cap=args.budget,
    )
    hist = brute_force.run_brute_force(stream, cfg, transcript_path=args.out)
    print(f"{cfg.guess_count} guesses -> {args.out}")
    if args.histogram:
        hist.write_csv(args.histogram)
        print(f"histogram -> {args.histogram}")
    return EXIT_OK


def _analyze_to_files(hist: Histogram, csv_path, plot: bool, plot_path=None) -> None:
    hist.write_csv(csv_path)
    print(f"histogram -> {csv_path}")
    if plot:
        png = plot_path or str(Path(csv_path).with_suffix(".png"))
        plotting.render_histogram(hist, png)
        print(f"figure -> {png}")


def _cmd_analyze(args) -> int:
    with open(args.transcript) as fh:
        hist = brute_force.ascii_frequency(
            brute_force.parse_transcript_line(line)[1] for line in fh if line.strip()
        )
    _analyze_to_files(hist, args.out, not args.no_plot, args.plot)
    return EXIT_OK


def _fraction_str(v) -> str:
    return str(v)


def _cmd_cpa(args) -> int:
    key = keyfiles.read_key(args.oracle_key)
    if isinstance(key, Scheme1Key):
        raise _UsageError("the attack targets the integer schemes (2-5)")
    oracle = EncryptionOracle(key, garbage_magnitude=args.garbage, seed=args.seed)
    n_message = oracle.message_band_len
    result = cpa_attack(oracle, n_message, oracle.noise_band_len)

    rows = [[_fraction_str(result.theta_x[i, j]) for j in range(n_message)]
            for i in range(oracle.block_size)]
    doc = {
        "format_version": keyfiles.FORMAT_VERSION,
        "kind": "recovered_matrix",
        "scale": _fraction_str(result.scale),
        "rows": rows,
    }
    with open(args.out_matrix, "w", newline="\n") as fh:
        fh.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    print(f"recovered message band -> {args.out_matrix}")

    # verification: decode fresh ciphertexts against the honest pipeline
    check_rng = random.Random(args.seed + 1)
    decoded_ok = 0
    for _ in range(args.blocks):
        plain = bytes(check_rng.randint(32, 126) for _ in range(n_message))
        stream = oracle.encrypt(plain)
        if result.decode(stream) == plain:
            decoded_ok += 1
    report = {
        "block_size": oracle.block_size,
        "message_band_len": n_message,
        "scale": _fraction_str(result.scale),
        "step1_oracle_calls": result.step1_calls,
        "total_oracle_calls": oracle.call_count,
        "fresh_ciphertexts_decoded": decoded_ok,
        "fresh_ciphertexts_tried": args.blocks,
    }
    if args.report:
        with open(args.report, "w", newline="\n") as fh:
            fh.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        print(f"report -> {args.report}")
    for k, v in report.items():
        print(f"  {k}: {v}")
    if decoded_ok != args.blocks:
        raise CryptoError(f"only {decoded_ok}/{args.blocks} fresh ciphertexts decoded")
    return EXIT_OK


def _cmd_perturb(args) -> int:
    key = keyfiles.read_key(args.key)
    if isinstance(key, Scheme1Key):
        raise _UsageError("perturbation analysis targets the integer schemes (2-5)")
    som = build_matrix(key)
    perturbed_key = _offset_key(key, args.seed, args.radius)
    p = build_matrix(perturbed_key).matrix - som.matrix

    half = som.n // 2
    blocks, _ = text_to_blocks(args.text.encode("ascii"), half)
    garbage = draw_garbage_blocks(GarbageSpec(args.garbage, args.seed + 1), 1, half)[0]
    w = list(blocks[0]) + list(garbage)

    report = perturbation.perturbed_decode(som, p, w)
    with open(args.out, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["coordinate", "w", "w_tilde", "diag_coefficient", "cross_sum"])
        for j in range(som.n):
            writer.writerow(
                [
                    j,
                    int(w[j]),
                    repr(float(report.w_tilde[j])),
                    repr(float(report.coefficient_diag[j])),
                    repr(float(report.cross_terms[j])),
                ]
            )
    print(f"perturbation report -> {args.out}")
    print(f"  scale {report.scale} -> perturbed scale {report.perturbed_scale}")
    print(f"  max |1 - diag|: {max(abs(1.0 - c) for c in report.coefficient_diag):.6g}")
    return EXIT_OK


def _offset_key(key, seed: int, radius: int):
    """Same-structure key with every value nudged by a seeded offset."""
    from .hadamard import HadamardArrayKey
    from .schemes import Scheme2Key, Scheme3Key, Scheme4Key, Scheme5Key

    rng = random.Random(seed)

    def nudge(arr):
        values = tuple(v + rng.randint(-radius, radius) for v in arr.values)
        if not any(values):
            values = values[:-1] + (values[-1] + 1,)
        return HadamardArrayKey(arr.order, values)

    if isinstance(key, Scheme2Key):
        return Scheme2Key(array=nudge(key.array))
    if isinstance(key, Scheme3Key):
        return Scheme3Key(pairs=tuple((nudge(a), nudge(m)) for a, m in key.pairs))
    if isinstance(key, Scheme4Key):
        return Scheme4Key(
            hadamard_exponent=key.hadamard_exponent,
            array_a=nudge(key.array_a),
            array_b=nudge(key.array_b),
        )
    if isinstance(key, Scheme5Key):
        return Scheme5Key(arrays=tuple(nudge(a) for a in key.arrays))
    raise _UsageError(f"unsupported key type {type(key).__name__}")


def _cmd_experiment(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    lo, hi = args.key_range

    key = keygen(5, seed=args.seed, value_range=(lo, hi), orders=args.orders)
    keyfiles.write_key(key, outdir / "key.json")

    plaintext = args.text.encode("ascii")
    stream = encode(key, plaintext, GarbageSpec(args.garbage, args.seed + 1))
    keyfiles.write_ciphertext(stream, outdir / "ciphertext.json")

    values = [v for arr in key.arrays for v in arr.values]
    cfg = BruteForceConfig.around_key_values(
        args.orders,
        values,
        radius=args.offset_radius,
        parallelism=args.parallel,
        budget_cap=args.budget,
    )
    transcript = outdir / "transcript.txt"
    hist = brute_force.run_brute_force(stream, cfg, transcript_path=transcript)
    print(f"{cfg.guess_count} guesses -> {transcript}")
    _analyze_to_files(hist, outdir / "histogram.csv", not args.no_plot)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="framecipher", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="draw a key and write it to a file")
    p.add_argument("--scheme", type=int, required=True, choices=[1, 2, 3, 4, 5])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--range", type=int, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--orders", type=int, nargs="+", help="array orders (schemes 3-5)")
    p.add_argument("--dct-size", type=int, help="matrix size for scheme 1")
    p.add_argument("--exponent", type=int, help="Sylvester exponent for scheme 4")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("encode", help="encrypt a plaintext")
    p.add_argument("--key", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text", help="plaintext string (ASCII)")
    src.add_argument("--in", dest="infile", help="plaintext file")
    p.add_argument("--garbage", type=int, default=128, help="noise magnitude G")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="decrypt a ciphertext file")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", help="output file (stdout if omitted)")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("bruteforce", help="exhaustive key search over a value range")
    p.add_argument("--ciphertext", required=True)
    p.add_argument("--orders", type=int, nargs="+", required=True)
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--budget", type=int, default=brute_force.DEFAULT_BUDGET_CAP)
    p.add_argument("--out", required=True, help="transcript file")
    p.add_argument("--histogram", help="also write the histogram CSV")
    p.set_defaults(func=_cmd_bruteforce)

    p = sub.add_parser("analyze", help="ASCII histogram of a search transcript")
    p.add_argument("--transcript", required=True)
    p.add_argument("--out", required=True, help="histogram CSV")
    p.add_argument("--plot", help="figure path (default: CSV path with .png)")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("cpa", help="chosen-plaintext attack against an oracle key")
    p.add_argument("--oracle-key", required=True)
    p.add_argument("--blocks", type=int, default=50, help="fresh ciphertexts to verify")
    p.add_argument("--garbage", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-matrix", required=True)
    p.add_argument("--report", help="verification report JSON")
    p.set_defaults(func=_cmd_cpa)

    p = sub.add_parser("perturb", help="wrong-key distortion coefficients")
    p.add_argument("--key", required=True)
    p.add_argument("--text", required=True, help="plaintext; its first block is analyzed")
    p.add_argument("--garbage", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=int, default=1, help="value offset magnitude")
    p.add_argument("--out", required=True, help="coefficient CSV")
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser(
        "experiment",
        help="encode, search key-entry offsets, histogram: one figure's data",
    )
    p.add_argument("--key-range", type=int, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--garbage", type=int, required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--orders", type=int, nargs="+", default=[4, 4])
    p.add_argument("--offset-radius", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--budget", type=int, default=brute_force.DEFAULT_BUDGET_CAP)
    p.add_argument("--outdir", default=".")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=_cmd_experiment)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CryptoError as exc:
        print(f"cryptographic error: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(run_cli())
