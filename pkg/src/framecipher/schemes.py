"""Key generation, encryption-matrix assembly, and block encode/decode.

Five key schemes share one channel layout: an n x n matrix whose left
column half carries the message band and right half the noise band.  Each
length-n/2 plaintext block is concatenated with a random nonzero garbage
block and multiplied through the matrix.  Schemes 2-5 are exact integer
pipelines; scheme 1 is the float DCT pipeline kept for its weakness demo.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .hadamard import (
    HadamardArrayKey,
    blow_up,
    dct_matrix,
    instantiate_array,
    sylvester_hadamard,
)
from .matrix_core import (
    ScaledOrthogonalMatrix,
    direct_sum,
    int_vector,
    matmul,
    tensor,
)


class CryptoError(Exception):
    """Decode-side failure: wrong key, corrupted ciphertext, or bad geometry."""


ROUNDING_SLACK = 0.4  # max float-decode residual before we call the key wrong


@dataclass(frozen=True)
class Scheme1Key:
    """DCT cipher key: diagonal weights plus a coordinate permutation."""

    dct_size: int
    diagonal: tuple[int, ...]
    permutation: tuple[int, ...]

    scheme_id = 1

    def __post_init__(self):
        m = self.dct_size
        if m < 2 or m % 2:
            raise ValueError("dct_size must be an even integer >= 2")
        if len(self.diagonal) != m or any(d == 0 for d in self.diagonal):
            raise ValueError(f"diagonal needs {m} nonzero entries")
        if sorted(self.permutation) != list(range(m)):
            raise ValueError(f"permutation must be a bijection on 0..{m - 1}")

    @property
    def block_size(self) -> int:
        return self.dct_size


@dataclass(frozen=True)
class Scheme2Key:
    """A single order-8 array carries the whole matrix."""

    array: HadamardArrayKey

    scheme_id = 2

    def __post_init__(self):
        if self.array.order != 8:
            raise ValueError("scheme 2 uses an order-8 array")

    @property
    def block_size(self) -> int:
        return 8


@dataclass(frozen=True)
class Scheme3Key:
    """Array pairs consumed by the doubling construction.

    Each pair (a, m) yields one doubled matrix; matrices are then doubled
    pairwise up a balanced tree, so the pair count must be a power of two
    and every array the same order.
    """

    pairs: tuple[tuple[HadamardArrayKey, HadamardArrayKey], ...]

    scheme_id = 3

    def __post_init__(self):
        n = len(self.pairs)
        if n == 0 or n & (n - 1):
            raise ValueError("pair count must be a power of two")
        orders = {arr.order for pair in self.pairs for arr in pair}
        if len(orders) != 1:
            raise ValueError("all arrays must share one order")

    @property
    def block_size(self) -> int:
        return 2 * self.pairs[0][0].order * len(self.pairs)


@dataclass(frozen=True)
class Scheme4Key:
    """Sylvester matrix tensored with two arrays, then doubled."""

    hadamard_exponent: int
    array_a: HadamardArrayKey
    array_b: HadamardArrayKey

    scheme_id = 4

    def __post_init__(self):
        if self.hadamard_exponent < 0:
            raise ValueError("hadamard_exponent must be >= 0")
        if self.array_a.order != self.array_b.order:
            raise ValueError("the two arrays must share one order")

    @property
    def block_size(self) -> int:
        return 2 * (2**self.hadamard_exponent) * self.array_a.order


@dataclass(frozen=True)
class Scheme5Key:
    """Chain of arrays combined by the tensor product.

    The key material is just the value lists, so its size in numbers is
    the sum of the orders.
    """

    arrays: tuple[HadamardArrayKey, ...]

    scheme_id = 5

    def __post_init__(self):
        if not self.arrays:
            raise ValueError("scheme 5 needs at least one array")

    @property
    def block_size(self) -> int:
        n = 1
        for arr in self.arrays:
            n *= arr.order
        return n


SchemeKey = Union[Scheme1Key, Scheme2Key, Scheme3Key, Scheme4Key, Scheme5Key]


@dataclass(frozen=True)
class GarbageSpec:
    """Noise-band sampling: uniform integers on [-magnitude, magnitude]."""

    magnitude: int
    rng_seed: int

    def __post_init__(self):
        if self.magnitude < 1:
            raise ValueError("garbage magnitude must be >= 1")


@dataclass(frozen=True)
class CiphertextStream:
    """Header plus the encrypted blocks.

    message_length is the pre-padding byte count so decode can strip the
    zero padding exactly; blocks hold ints (schemes 2-5) or floats
    (scheme 1).
    """

    scheme: int
    block_size: int
    message_length: int
    blocks: tuple

    def __post_init__(self):
        if self.block_size % 2:
            raise ValueError("block size must be even")
        for b in self.blocks:
            if len(b) != self.block_size:
                raise ValueError("all blocks must have the header's block size")


def _draw_values(rng: random.Random, count: int, lo: int, hi: int) -> tuple[int, ...]:
    return tuple(rng.randint(lo, hi) for _ in range(count))


def keygen(
    scheme: int,
    *,
    seed: int,
    value_range: tuple[int, int],
    orders: Sequence[int] | None = None,
    dct_size: int | None = None,
    hadamard_exponent: int | None = None,
) -> SchemeKey:
    """Draw a key for one scheme, deterministically from the seed.

    value_range is inclusive [lo, hi] with lo >= 1: all-positive values
    keep instantiated arrays away from the all-zero degenerate case.
    Scheme parameters: `orders` lists array orders (scheme 3: one per
    pair; scheme 4: the shared order of its two arrays), `dct_size` is the
    scheme-1 matrix size, `hadamard_exponent` the scheme-4 Sylvester size.
    """
    lo, hi = value_range
    if lo < 1 or hi < lo:
        raise ValueError(f"value range must satisfy 1 <= lo <= hi, got [{lo}, {hi}]")
    rng = random.Random(seed)

    if scheme == 1:
        if dct_size is None:
            raise ValueError("scheme 1 needs dct_size")
        diagonal = _draw_values(rng, dct_size, lo, hi)
        permutation = list(range(dct_size))
        rng.shuffle(permutation)
        return Scheme1Key(dct_size=dct_size, diagonal=diagonal, permutation=tuple(permutation))

    if scheme == 2:
        return Scheme2Key(array=HadamardArrayKey(8, _draw_values(rng, 8, lo, hi)))

    if scheme == 3:
        if not orders:
            raise ValueError("scheme 3 needs one order per array pair")
        pairs = tuple(
            (
                HadamardArrayKey(o, _draw_values(rng, o, lo, hi)),
                HadamardArrayKey(o, _draw_values(rng, o, lo, hi)),
            )
            for o in orders
        )
        return Scheme3Key(pairs=pairs)

    if scheme == 4:
        if hadamard_exponent is None:
            raise ValueError("scheme 4 needs hadamard_exponent")
        if not orders or len(orders) > 2 or len(set(orders)) != 1:
            raise ValueError("scheme 4 needs one shared array order")
        o = orders[0]
        return Scheme4Key(
            hadamard_exponent=hadamard_exponent,
            array_a=HadamardArrayKey(o, _draw_values(rng, o, lo, hi)),
            array_b=HadamardArrayKey(o, _draw_values(rng, o, lo, hi)),
        )

    if scheme == 5:
        if not orders:
            raise ValueError("scheme 5 needs a non-empty order list")
        arrays = tuple(HadamardArrayKey(o, _draw_values(rng, o, lo, hi)) for o in orders)
        return Scheme5Key(arrays=arrays)

    raise ValueError(f"unknown scheme {scheme}")


def _permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    p = np.zeros((len(perm), len(perm)))
    for i, j in enumerate(perm):
        p[i, j] = 1.0
    return p


def build_matrix(key: SchemeKey):
    """Assemble the encryption matrix.

    Schemes 2-5 return a ScaledOrthogonalMatrix with the scale tracked by
    the scheme's closed form (sum of squares, doubling law, products);
    scheme 1 returns the float matrix C*D*P.
    """
    if isinstance(key, Scheme1Key):
        c = dct_matrix(key.dct_size)
        d = np.diag(np.array(key.diagonal, dtype=float))
        p = _permutation_matrix(key.permutation)
        return c @ d @ p

    if isinstance(key, Scheme2Key):
        return instantiate_array(key.array)

    if isinstance(key, Scheme3Key):
        level = [blow_up(instantiate_array(a), instantiate_array(m)) for a, m in key.pairs]
        while len(level) > 1:
            level = [blow_up(s, t) for s, t in zip(level[0::2], level[1::2])]
        return level[0]

    if isinstance(key, Scheme4Key):
        h = sylvester_hadamard(key.hadamard_exponent)
        h_scale = 2**key.hadamard_exponent
        a = instantiate_array(key.array_a)
        b = instantiate_array(key.array_b)
        ha = ScaledOrthogonalMatrix(tensor(h, a.matrix), h_scale * a.scale)
        hb = ScaledOrthogonalMatrix(tensor(h, b.matrix), h_scale * b.scale)
        return blow_up(ha, hb)

    if isinstance(key, Scheme5Key):
        mats = [instantiate_array(arr) for arr in key.arrays]
        out = mats[0].matrix
        scale = mats[0].scale
        for m in mats[1:]:
            out = tensor(out, m.matrix)
            scale *= m.scale
        return ScaledOrthogonalMatrix(matrix=out, scale=scale)

    raise TypeError(f"not a scheme key: {type(key).__name__}")


def text_to_blocks(message: bytes, half_block: int) -> tuple[list[list[int]], int]:
    """Split ASCII bytes into length-half_block vectors, zero-padding the last.

    Returns the blocks and the original byte count, which the ciphertext
    header keeps so decode can undo the padding.
    """
    if not message:
        raise ValueError("message must be non-empty")
    for i, byte in enumerate(message):
        if byte > 127:
            raise ValueError(f"non-ASCII byte {byte} at offset {i}")
    blocks = []
    for start in range(0, len(message), half_block):
        chunk = list(message[start : start + half_block])
        chunk.extend([0] * (half_block - len(chunk)))
        blocks.append(chunk)
    return blocks, len(message)


def _draw_garbage_block(rng: random.Random, magnitude: int, length: int) -> list[int]:
    while True:
        g = [rng.randint(-magnitude, magnitude) for _ in range(length)]
        if any(g):
            return g


def draw_garbage_blocks(garbage: GarbageSpec, count: int, length: int) -> list[list[int]]:
    """The nonzero noise vectors for `count` blocks, a pure function of the seed."""
    rng = random.Random(garbage.rng_seed)
    return [_draw_garbage_block(rng, garbage.magnitude, length) for _ in range(count)]


def encode_blocks(
    matrix: ScaledOrthogonalMatrix,
    message_blocks: Sequence[Sequence[int]],
    garbage_blocks: Sequence[Sequence[int]],
) -> list[list[int]]:
    """Encrypt message/garbage block pairs: c_i = M * (m_i (+) g_i)."""
    out = []
    for m_block, g_block in zip(message_blocks, garbage_blocks):
        w = direct_sum(int_vector(m_block), int_vector(g_block))
        c = matmul(matrix.matrix, w)
        out.append([int(v) for v in c])
    return out


def encode(key: SchemeKey, message: bytes, garbage: GarbageSpec) -> CiphertextStream:
    """Encrypt a byte string; fresh seeds give different ciphertexts."""
    if isinstance(key, Scheme1Key):
        return scheme1_encode(key, message, garbage)
    som = build_matrix(key)
    half = som.n // 2
    message_blocks, msg_len = text_to_blocks(message, half)
    garbage_blocks = draw_garbage_blocks(garbage, len(message_blocks), half)
    blocks = encode_blocks(som, message_blocks, garbage_blocks)
    return CiphertextStream(
        scheme=key.scheme_id,
        block_size=som.n,
        message_length=msg_len,
        blocks=tuple(tuple(b) for b in blocks),
    )


def decode(key: SchemeKey, stream: CiphertextStream) -> bytes:
    """Invert encode exactly; integer schemes are bit-perfect.

    Per block computes M^T c, checks divisibility by the scale K, and takes
    the first n/2 entries; a divisibility failure or an out-of-ASCII entry
    signals a wrong key or corrupted ciphertext.
    """
    if isinstance(key, Scheme1Key):
        return scheme1_decode(key, stream)
    if stream.scheme != key.scheme_id:
        raise CryptoError(f"stream is scheme {stream.scheme}, key is scheme {key.scheme_id}")
    som = build_matrix(key)
    if stream.block_size != som.n:
        raise CryptoError(f"block size {stream.block_size} does not match the key's {som.n}")
    half = som.n // 2
    k = som.scale
    out = bytearray()
    for c_block in stream.blocks:
        y = matmul(som.matrix.T, int_vector(c_block))
        for v in y:
            if v % k:
                raise CryptoError("block not divisible by the key scale (wrong key?)")
        for v in y[:half]:
            v = v // k
            if not 0 <= v <= 127:
                raise CryptoError(f"decoded value {v} outside ASCII range (wrong key?)")
            out.append(v)
    if stream.message_length > len(out):
        raise CryptoError("message_length exceeds the decoded payload")
    return bytes(out[: stream.message_length])


def scheme1_encode(key: Scheme1Key, message: bytes, garbage: GarbageSpec) -> CiphertextStream:
    """Float pipeline c = C*D*P*(m (+) g)."""
    matrix = build_matrix(key)
    half = key.dct_size // 2
    message_blocks, msg_len = text_to_blocks(message, half)
    garbage_blocks = draw_garbage_blocks(garbage, len(message_blocks), half)
    blocks = []
    for m_block, g_block in zip(message_blocks, garbage_blocks):
        w = np.array(list(m_block) + list(g_block), dtype=float)
        blocks.append(tuple(float(v) for v in matrix @ w))
    return CiphertextStream(
        scheme=1, block_size=key.dct_size, message_length=msg_len, blocks=tuple(blocks)
    )


def scheme1_decode(key: Scheme1Key, stream: CiphertextStream) -> bytes:
    """Apply P^T D^-1 C^T, then round; ambiguous rounding signals a bad key."""
    if stream.scheme != 1:
        raise CryptoError(f"stream is scheme {stream.scheme}, key is scheme 1")
    if stream.block_size != key.dct_size:
        raise CryptoError("block size does not match the key")
    c = dct_matrix(key.dct_size)
    d_inv = np.diag(1.0 / np.array(key.diagonal, dtype=float))
    p = _permutation_matrix(key.permutation)
    inverse = p.T @ d_inv @ c.T
    half = key.dct_size // 2
    out = bytearray()
    for block in stream.blocks:
        w = inverse @ np.array(block, dtype=float)
        m = w[:half]
        rounded = np.rint(m)
        if np.max(np.abs(m - rounded)) > ROUNDING_SLACK:
            raise CryptoError("rounding residual too large (wrong key?)")
        for v in rounded:
            v = int(v)
            if not 0 <= v <= 127:
                raise CryptoError(f"decoded value {v} outside ASCII range (wrong key?)")
            out.append(v)
    if stream.message_length > len(out):
        raise CryptoError("message_length exceeds the decoded payload")
    return bytes(out[: stream.message_length])
