"""Exhaustive key search over tensor-structured guesses, plus the analyzer.

The search assumes the adversary knows the key structure (a list of array
orders) but not the values.  Every value assignment in the configured
per-variable ranges is enumerated in odometer order (variable 0 cycles
fastest), the guess matrix is applied in float arithmetic, and the decoded
characters are rounded and clamped into ASCII so wrong keys produce
histogrammable gibberish instead of errors.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .hadamard import array_pattern
from .schemes import CiphertextStream

log = logging.getLogger(__name__)

DEFAULT_BUDGET_CAP = 10_000_000


class BudgetExceededError(ValueError):
    """The requested guess space is larger than the configured cap."""


@dataclass(frozen=True)
class BruteForceConfig:
    """Guess-space description: structure, per-variable ranges, parallelism."""

    orders: tuple[int, ...]
    ranges: tuple[tuple[int, int], ...]
    parallelism: int = 1
    budget_cap: int = DEFAULT_BUDGET_CAP

    def __post_init__(self):
        if not self.orders:
            raise ValueError("orders must be non-empty")
        if len(self.ranges) != sum(self.orders):
            raise ValueError(
                f"need one range per variable: {sum(self.orders)} variables, "
                f"{len(self.ranges)} ranges"
            )
        total = 1
        for lo, hi in self.ranges:
            if hi < lo:
                raise ValueError(f"empty range [{lo}, {hi}]")
            total *= hi - lo + 1
        if total > self.budget_cap:
            raise BudgetExceededError(f"{total} guesses exceed the cap {self.budget_cap}")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")

    @classmethod
    def uniform(cls, orders, lo, hi, **kwargs):
        """One shared [lo, hi] range for every variable."""
        orders = tuple(orders)
        return cls(orders=orders, ranges=tuple((lo, hi) for _ in range(sum(orders))), **kwargs)

    @classmethod
    def around_key_values(cls, orders, values, radius=1, **kwargs):
        """Ranges value +/- radius per variable: the key-entry-offset protocol."""
        orders = tuple(orders)
        if len(values) != sum(orders):
            raise ValueError("need one key value per variable")
        return cls(
            orders=orders,
            ranges=tuple((v - radius, v + radius) for v in values),
            **kwargs,
        )

    @property
    def guess_count(self) -> int:
        total = 1
        for lo, hi in self.ranges:
            total *= hi - lo + 1
        return total

    def assignment(self, index: int) -> tuple[int, ...]:
        """The index-th value assignment, odometer order, variable 0 fastest."""
        vals = []
        for lo, hi in self.ranges:
            index, r = divmod(index, hi - lo + 1)
            vals.append(lo + r)
        return tuple(vals)


def _float_pattern_matrices(orders: Sequence[int]):
    return [np.array([[s for s, _ in row] for row in array_pattern(o)]) for o in orders]


def guess_matrix(orders: Sequence[int], values: Sequence[int]) -> np.ndarray:
    """Float tensor-product matrix for one value assignment."""
    out = None
    pos = 0
    for o in orders:
        pattern = array_pattern(o)
        vals = values[pos : pos + o]
        pos += o
        m = np.array([[s * vals[i] for s, i in row] for row in pattern], dtype=float)
        out = m if out is None else np.kron(out, m)
    return out


def decode_with_guess(
    matrix: np.ndarray, blocks: Sequence[Sequence], half: int, message_length: int
) -> bytes:
    """Apply (1/kt) Mt^T per block, round, clamp to 0..127, truncate padding."""
    k_tilde = float(np.dot(matrix[0], matrix[0]))
    out = bytearray()
    for block in blocks:
        y = matrix.T @ np.asarray(block, dtype=float) / k_tilde
        m = np.rint(y[:half])
        np.clip(m, 0, 127, out=m)
        out.extend(int(v) for v in m)
    return bytes(out[:message_length])


def brute_force_search(
    stream: CiphertextStream, cfg: BruteForceConfig
) -> Iterator[tuple[tuple[int, ...], bytes]]:
    """Yield (assignment, decoded bytes) for every guess, in odometer order.

    All-zero assignments cannot be inverted (zero matrix) and are skipped
    with a log line.
    """
    half = stream.block_size // 2
    for index in range(cfg.guess_count):
        values = cfg.assignment(index)
        if not any(values):
            log.warning("skipping all-zero guess at index %d", index)
            continue
        m = guess_matrix(cfg.orders, values)
        yield values, decode_with_guess(m, stream.blocks, half, stream.message_length)


@dataclass
class Histogram:
    """Appearance counts for the 128 ASCII values."""

    counts: list[int] = field(default_factory=lambda: [0] * 128)

    def __post_init__(self):
        if len(self.counts) != 128 or any(c < 0 for c in self.counts):
            raise ValueError("a histogram is 128 nonnegative counts")

    def count_bytes(self, data: bytes) -> None:
        for b in data:
            self.counts[b] += 1

    def __add__(self, other: "Histogram") -> "Histogram":
        return Histogram([a + b for a, b in zip(self.counts, other.counts)])

    @property
    def total(self) -> int:
        return sum(self.counts)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["ascii", "count"])
            for value, count in enumerate(self.counts):
                writer.writerow([value, count])

    @classmethod
    def read_csv(cls, path) -> "Histogram":
        counts = [0] * 128
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["ascii", "count"]:
                raise ValueError(f"unexpected histogram header {header}")
            for row in reader:
                counts[int(row[0])] = int(row[1])
        return cls(counts)


def ascii_frequency(outputs: Iterable[bytes]) -> Histogram:
    """Exact appearance counts across a stream of decoded outputs."""
    hist = Histogram()
    for chunk in outputs:
        hist.count_bytes(chunk)
    return hist


# Transcript lines are "guess TAB text"; anything that would break the
# line structure (controls, DEL, the backslash) is \xNN-escaped.


def escape_text(data: bytes) -> str:
    parts = []
    for b in data:
        if b == 0x5C:
            parts.append("\\\\")
        elif 32 <= b <= 126:
            parts.append(chr(b))
        else:
            parts.append(f"\\x{b:02x}")
    return "".join(parts)


def unescape_text(text: str) -> bytes:
    out = bytearray()
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\":
            if text[i + 1] == "\\":
                out.append(0x5C)
                i += 2
            elif text[i + 1] == "x":
                out.append(int(text[i + 2 : i + 4], 16))
                i += 4
            else:
                raise ValueError(f"bad escape at offset {i}")
        else:
            out.append(ord(ch))
            i += 1
    return bytes(out)


def transcript_line(values: Sequence[int], decoded: bytes) -> str:
    return f"{','.join(str(v) for v in values)}\t{escape_text(decoded)}"


def parse_transcript_line(line: str) -> tuple[tuple[int, ...], bytes]:
    guess, text = line.rstrip("\n").split("\t", 1)
    return tuple(int(v) for v in guess.split(",")), unescape_text(text)


def _search_chunk(args) -> tuple[list[str], list[int]]:
    cfg, blocks, block_size, message_length, start, stop = args
    half = block_size // 2
    hist = Histogram()
    lines = []
    for index in range(start, stop):
        values = cfg.assignment(index)
        if not any(values):
            log.warning("skipping all-zero guess at index %d", index)
            continue
        m = guess_matrix(cfg.orders, values)
        decoded = decode_with_guess(m, blocks, half, message_length)
        hist.count_bytes(decoded)
        lines.append(transcript_line(values, decoded))
    return lines, hist.counts


def run_brute_force(
    stream: CiphertextStream, cfg: BruteForceConfig, transcript_path=None
) -> Histogram:
    """Run the whole guess space, optionally writing the ordered transcript.

    The space is partitioned into contiguous index chunks; chunk results
    merge by histogram addition and concatenate in guess order, so the
    output is identical whatever the parallelism.
    """
    total = cfg.guess_count
    width = min(cfg.parallelism, total)
    bounds = [total * i // width for i in range(width + 1)]
    jobs = [
        (cfg, stream.blocks, stream.block_size, stream.message_length, lo, hi)
        for lo, hi in zip(bounds, bounds[1:])
        if hi > lo
    ]
    if width > 1:
        with ProcessPoolExecutor(max_workers=width) as pool:
            results = list(pool.map(_search_chunk, jobs))
    else:
        results = [_search_chunk(job) for job in jobs]

    hist = Histogram()
    for _, counts in results:
        hist = hist + Histogram(counts)
    if transcript_path is not None:
        with open(transcript_path, "w", newline="\n") as fh:
            for lines, _ in results:
                for line in lines:
                    fh.write(line + "\n")
    return hist
