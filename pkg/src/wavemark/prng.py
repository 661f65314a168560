"""Keyed watermark bit generation with a Fibonacci LFSR.

The key is the feedback polynomial of the register, given as a bitmask of
tap positions: bit ``t`` set means stage ``t`` feeds the XOR (stages are
numbered from 1 at the output end).  The register degree is the highest
tap position.  Output is the lowest stage before each shift, so a fixed
key reproduces the same bit stream on every platform.

With a primitive polynomial of degree m the stream is an m-sequence:
period exactly 2**m - 1 with 2**(m-1) ones per period.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateKeyError, ParameterError

__all__ = ["WatermarkKey", "lfsr_generate", "bits_to_line"]


@dataclass(frozen=True)
class WatermarkKey:
    """Feedback polynomial mask, initial register state, and bit count."""

    polynomial: int
    seed: int
    length: int = 31

    @property
    def degree(self) -> int:
        return self.polynomial.bit_length() - 1

    def __post_init__(self):
        if self.degree < 2:
            raise ParameterError(
                f"polynomial mask {self.polynomial:#x} has degree {self.degree}; need >= 2")
        if self.length < 1:
            raise ParameterError(f"length must be >= 1, got {self.length}")
        if not 0 <= self.seed < (1 << self.degree):
            raise ParameterError(
                f"seed {self.seed:#x} is not a {self.degree}-bit state")


def lfsr_generate(key: WatermarkKey) -> np.ndarray:
    """Emit ``key.length`` bits of the keyed Fibonacci LFSR stream.

    Output bit = lowest stage before the shift; the feedback bit (XOR of
    all tapped stages) enters at the top.  Requesting more bits than the
    register period simply repeats the sequence.

    Raises
    ------
    DegenerateKeyError
        If the seed is zero (the register would emit zeros forever).
    """
    if key.seed == 0:
        raise DegenerateKeyError("zero seed: register is stuck emitting zeros")
    m = key.degree
    # bit t of the mask addresses stage t, i.e. state bit t-1
    tap_mask = key.polynomial >> 1
    state = key.seed
    bits = np.empty(key.length, dtype=np.uint8)
    for i in range(key.length):
        bits[i] = state & 1
        feedback = (state & tap_mask).bit_count() & 1
        state = (state >> 1) | (feedback << (m - 1))
    return bits


def bits_to_line(bits) -> str:
    """Serialize a bit vector as one newline-terminated '0'/'1' line."""
    return "".join("1" if int(b) else "0" for b in bits) + "\n"
