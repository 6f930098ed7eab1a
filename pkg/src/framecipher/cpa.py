"""Chosen-plaintext attack: recover the message band from an encryption oracle.

The adversary knows the message-band and noise-band lengths but not the
key.  Repeated encodings of one plaintext differ only in the noise band,
so their differences span it; projecting basis-plaintext encodings off
that span isolates the message-band columns exactly.  Everything runs in
exact rational arithmetic, so the recovery is bit-perfect.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .rational_linalg import ExactProjector, IntegerSpan
from .schemes import (
    CiphertextStream,
    CryptoError,
    GarbageSpec,
    SchemeKey,
    build_matrix,
    encode,
)


class EncryptionOracle:
    """Encrypts attacker-chosen plaintexts under a hidden key.

    Every call draws fresh garbage; only the encryption surface and the
    block geometry are exposed, never the key itself.
    """

    def __init__(self, key: SchemeKey, garbage_magnitude: int = 128, seed: int = 0):
        self._key = key
        self._magnitude = garbage_magnitude
        self._seed_source = random.Random(seed)
        self.call_count = 0
        som = build_matrix(key)
        self.block_size = som.n
        self.message_band_len = som.n // 2
        self.noise_band_len = som.n - self.message_band_len

    def encrypt(self, plaintext: bytes) -> CiphertextStream:
        self.call_count += 1
        spec = GarbageSpec(self._magnitude, self._seed_source.getrandbits(64))
        return encode(self._key, plaintext, spec)


@dataclass
class CpaResult:
    """Recovered message band: analysis matrix columns plus its scale."""

    theta_x: np.ndarray  # block_size x n_message, exact rational entries
    scale: Fraction
    step1_calls: int
    total_calls: int

    def decode(self, stream: CiphertextStream) -> bytes:
        """Step 4: m = (1/K) Theta_X^T e per block, then strip padding."""
        n, n_message = self.theta_x.shape
        if stream.block_size != n:
            raise CryptoError("ciphertext block size does not match the recovered matrix")
        out = bytearray()
        for block in stream.blocks:
            for j in range(n_message):
                v = sum(self.theta_x[i, j] * block[i] for i in range(n)) / self.scale
                if v.denominator != 1 or not 0 <= v <= 127:
                    raise CryptoError(f"recovered matrix fails to decode (got {v})")
                out.append(int(v))
        if stream.message_length > len(out):
            raise CryptoError("message_length exceeds the decoded payload")
        return bytes(out[: stream.message_length])


def determine_noise_band(
    oracle: EncryptionOracle, n_message: int, n_noise: int, call_cap: int
) -> tuple[list[list[int]], int]:
    """Step 1: collect encoding differences until they span the noise band.

    Returns an independent integer basis of the noise band and the number
    of oracle calls spent.
    """
    probe = bytes([65]) * n_message
    calls = 1
    base = list(oracle.encrypt(probe).blocks[0])
    span = IntegerSpan(len(base))
    while span.rank < n_noise:
        if calls >= call_cap:
            raise CryptoError(
                f"noise-band rank stuck at {span.rank}/{n_noise} after {calls} calls"
            )
        calls += 1
        fresh = oracle.encrypt(probe).blocks[0]
        span.add([f - b for f, b in zip(fresh, base)])
    return span.accepted, calls


def cpa_attack(
    oracle: EncryptionOracle, n_message: int, n_noise: int, call_cap_factor: int = 10
) -> CpaResult:
    """Recover the message band Theta_X and its scale K from the oracle.

    Step 1 spans the noise band from repeated encodings of one plaintext;
    step 2 encodes the scaled standard-basis plaintexts and projects each
    encoding off the noise band, which (step 3) hands over the columns of
    Theta_X directly; the scale is the squared column norm.  The result is
    verified to satisfy Theta_X^T Theta_X = K*I before it is returned.
    """
    if n_message + n_noise != oracle.block_size:
        raise CryptoError(
            f"band lengths {n_message}+{n_noise} != block size {oracle.block_size}"
        )
    noise_basis, step1_calls = determine_noise_band(
        oracle, n_message, n_noise, call_cap_factor * n_noise
    )
    projector = ExactProjector(noise_basis)

    columns = []
    for k in range(n_message):
        plaintext = bytes(k) + bytes([1]) + bytes(n_message - k - 1)
        e = oracle.encrypt(plaintext).blocks[0]
        columns.append(projector.residual(e))

    n = oracle.block_size
    theta_x = np.empty((n, n_message), dtype=object)
    for j, col in enumerate(columns):
        for i in range(n):
            theta_x[i, j] = col[i]

    scale = sum(v * v for v in columns[0])
    if scale == 0:
        raise CryptoError("recovered message band is degenerate")
    for a in range(n_message):
        for b in range(a, n_message):
            dot = sum(columns[a][i] * columns[b][i] for i in range(n))
            expected = scale if a == b else 0
            if dot != expected:
                raise CryptoError(
                    "recovered columns are not K-orthogonal; oracle is not the assumed scheme"
                )
    return CpaResult(
        theta_x=theta_x,
        scale=Fraction(scale),
        step1_calls=step1_calls,
        total_calls=oracle.call_count,
    )
