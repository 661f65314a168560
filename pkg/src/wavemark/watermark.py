"""Silence-aware segmentation, interpolation embedding and blind extraction.

The embedder hides one bit per signal segment inside one wavelet subband.
Rather than overwriting a coefficient, it *inserts* the scaled bit
immediately before the anchor coefficient (the subband's magnitude
extremum) and then deletes the smallest-magnitude coefficient elsewhere,
so the subband length - and therefore the segment length - is preserved
while the coefficient statistics barely move.

Extraction is blind: it relocates the anchor by magnitude alone and reads
the value immediately before it.  If the anchor lands at position 1 there
is no "before" and the segment is reported UNREADABLE.

A traditional replacement embedder (overwrite the coefficient next to the
anchor) is included as a comparison baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .audio_io import AudioClip
from .errors import (
    CapacityError,
    EmptyVoicedError,
    InconsistentMapError,
    ParameterError,
    SegmentTooShortError,
)
from .prng import WatermarkKey, lfsr_generate
from .wavelet import SUPPORTED_BASES, dwt, idwt, make_basis

__all__ = [
    "UNREADABLE", "EmbedConfig", "SilenceMap", "ExtractedBits",
    "split_silence", "merge_silence",
    "embed_bit_in_coeffs", "extract_bit_from_coeffs", "replace_bit_in_coeffs",
    "embed", "extract", "embed_replacement_baseline",
]

# Sentinel outcome for a segment whose anchor sits at position 1.
UNREADABLE = -1

DEFAULT_SILENCE_MIN_RUN = 16


@dataclass(frozen=True)
class EmbedConfig:
    """Everything the embedder and the blind extractor must agree on."""

    basis: str = "haar"
    level: int = 1
    band: str = "low"            # "low" = approximation, "high" = detail
    energy_mode: str = "high"    # anchor at max-|.| or min-nonzero-|.|
    alpha: float = 1.0
    n_bits: int = 31
    silence_min_run: int = DEFAULT_SILENCE_MIN_RUN

    def __post_init__(self):
        if self.basis not in SUPPORTED_BASES:
            raise ParameterError(f"unknown basis {self.basis!r}")
        if not 1 <= self.level <= 10:
            raise ParameterError(f"level must be in 1..10, got {self.level}")
        if self.band not in ("low", "high"):
            raise ParameterError(f"band must be 'low' or 'high', got {self.band!r}")
        if self.energy_mode not in ("high", "low"):
            raise ParameterError(
                f"energy_mode must be 'high' or 'low', got {self.energy_mode!r}")
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if self.n_bits < 1:
            raise ParameterError(f"n_bits must be >= 1, got {self.n_bits}")
        if self.silence_min_run < 1:
            raise ParameterError(
                f"silence_min_run must be >= 1, got {self.silence_min_run}")


@dataclass(frozen=True)
class SilenceMap:
    """Removed all-zero runs as (start, length) pairs in original coordinates."""

    runs: tuple
    original_length: int

    @property
    def removed_samples(self) -> int:
        return sum(length for _, length in self.runs)


@dataclass(frozen=True)
class ExtractedBits:
    """Per-segment outcomes: 0, 1, or UNREADABLE."""

    outcomes: tuple

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def __getitem__(self, i):
        return self.outcomes[i]

    @property
    def unreadable_count(self) -> int:
        return sum(1 for o in self.outcomes if o == UNREADABLE)

    def as_line(self) -> str:
        """Serialize as one '0'/'1'/'?' line, newline-terminated."""
        chars = {0: "0", 1: "1", UNREADABLE: "?"}
        return "".join(chars[o] for o in self.outcomes) + "\n"


def _zero_runs(samples: np.ndarray, min_run: int):
    """Maximal runs of exactly-zero samples with length >= min_run."""
    is_zero = np.concatenate([[False], samples == 0.0, [False]])
    edges = np.flatnonzero(np.diff(is_zero.astype(np.int8)))
    starts, ends = edges[::2], edges[1::2]
    return [(int(s), int(e - s)) for s, e in zip(starts, ends) if e - s >= min_run]


def split_silence(clip: AudioClip, min_run: int = DEFAULT_SILENCE_MIN_RUN):
    """Strip long all-zero runs; return (voiced samples, SilenceMap).

    Every maximal run of at least ``min_run`` consecutive exactly-zero
    samples is removed and recorded; the remainder is concatenated in
    order.  Raises EmptyVoicedError if nothing remains.
    """
    if min_run < 1:
        raise ParameterError(f"min_run must be >= 1, got {min_run}")
    samples = np.asarray(clip.samples, dtype=np.float64)
    runs = _zero_runs(samples, min_run)
    keep = np.ones(samples.size, dtype=bool)
    for start, length in runs:
        keep[start:start + length] = False
    voiced = samples[keep]
    if voiced.size == 0:
        raise EmptyVoicedError("signal is entirely silent")
    return voiced, SilenceMap(runs=tuple(runs), original_length=samples.size)


def merge_silence(voiced: np.ndarray, silence_map: SilenceMap) -> np.ndarray:
    """Exact inverse of :func:`split_silence` on the positional structure."""
    voiced = np.asarray(voiced, dtype=np.float64)
    n = silence_map.original_length
    if voiced.size + silence_map.removed_samples != n:
        raise InconsistentMapError(
            f"{voiced.size} voiced + {silence_map.removed_samples} silent "
            f"samples != original length {n}")
    out = np.zeros(n)
    pos = 0
    taken = 0
    for start, length in silence_map.runs:
        if start < pos or start + length > n:
            raise InconsistentMapError("silence runs overlap or exceed bounds")
        gap = start - pos
        out[pos:start] = voiced[taken:taken + gap]
        taken += gap
        pos = start + length
    out[pos:] = voiced[taken:]
    return out


def _anchor_index(coeffs: np.ndarray, energy_mode: str) -> int:
    """0-based anchor position: magnitude argmax, or argmin over nonzeros.

    Ties resolve to the lowest index.  In "low" mode an all-zero vector
    degenerates to position 0 (nothing is locatable either way).
    """
    mag = np.abs(coeffs)
    if energy_mode == "high":
        return int(np.argmax(mag))
    nonzero = mag > 0.0
    if not nonzero.any():
        return 0
    mag = np.where(nonzero, mag, np.inf)
    return int(np.argmin(mag))


def _check_bit(bit: int) -> int:
    if bit not in (0, 1):
        raise ParameterError(f"bit must be 0 or 1, got {bit!r}")
    return int(bit)


def embed_bit_in_coeffs(coeffs, bit: int, alpha: float = 1.0,
                        energy_mode: str = "high") -> np.ndarray:
    """Insert alpha*bit next to the anchor, drop the smallest coefficient.

    The value is inserted immediately before the anchor position (at the
    front when the anchor is already first).  The removal then scans for
    the minimum-magnitude coefficient, excluding the inserted value and
    the anchor so their adjacency - which extraction depends on -
    survives.  Output length equals input length.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    if c.size < 2:
        raise SegmentTooShortError(
            f"need at least 2 coefficients to embed, got {c.size}")
    bit = _check_bit(bit)
    anchor = _anchor_index(c, energy_mode)
    grown = np.insert(c, anchor, alpha * bit)
    mag = np.abs(grown)
    mag[anchor] = np.inf        # the inserted value
    mag[anchor + 1] = np.inf    # the (shifted) anchor
    return np.delete(grown, int(np.argmin(mag)))


def extract_bit_from_coeffs(coeffs, alpha: float = 1.0) -> int:
    """Read one bit: locate the magnitude argmax, decode the value before it.

    Returns UNREADABLE when the argmax sits at position 1.  The value is
    decoded to the nearest of {0, alpha}; an exact tie reads as 0.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    if c.size < 1:
        raise SegmentTooShortError("cannot extract from an empty vector")
    idx = int(np.argmax(np.abs(c)))
    if idx == 0:
        return UNREADABLE
    v = c[idx - 1]
    return 1 if abs(v - alpha) < abs(v) else 0


def replace_bit_in_coeffs(coeffs, bit: int, alpha: float = 1.0,
                          energy_mode: str = "high") -> np.ndarray:
    """Baseline: overwrite the coefficient next to the anchor with alpha*bit.

    The coefficient before the anchor is replaced; when the anchor is
    first, the one after it is replaced instead.  No insertion, no
    removal.
    """
    c = np.asarray(coeffs, dtype=np.float64).copy()
    if c.size < 2:
        raise SegmentTooShortError(
            f"need at least 2 coefficients to embed, got {c.size}")
    bit = _check_bit(bit)
    anchor = _anchor_index(c, energy_mode)
    target = anchor - 1 if anchor > 0 else anchor + 1
    c[target] = alpha * bit
    return c


def _required_voiced_length(cfg: EmbedConfig) -> int:
    # every segment must yield at least 2 target-band coefficients
    return cfg.n_bits * (2 ** cfg.level) * 2


def _segments(voiced: np.ndarray, cfg: EmbedConfig):
    """Per-bit (core, remainder) pairs over equal segments.

    The voiced signal is cut into ``n_bits`` segments of
    floor(len/n_bits) samples (the global tail passes through).  Within
    each segment only the largest 2**level-aligned prefix is
    transformed: aligned lengths keep every filter-bank stage
    even-length, which makes the transform a bijection, so coefficients
    modified by the embedder survive reconstruction and blind
    re-analysis exactly.  The few remaining samples pass through.
    """
    seg_len = voiced.size // cfg.n_bits
    core_len = seg_len - (seg_len % (2 ** cfg.level))
    for i in range(cfg.n_bits):
        segment = voiced[i * seg_len:(i + 1) * seg_len]
        yield segment[:core_len], segment[core_len:]


def _prepare(clip: AudioClip, cfg: EmbedConfig):
    voiced, silence_map = split_silence(clip, cfg.silence_min_run)
    need = _required_voiced_length(cfg)
    if voiced.size < need:
        raise CapacityError(
            f"voiced signal holds {voiced.size} samples; embedding "
            f"{cfg.n_bits} bits at level {cfg.level} needs >= {need}")
    return voiced, silence_map


def _embed_with(clip: AudioClip, key: WatermarkKey, cfg: EmbedConfig,
                coeff_op) -> AudioClip:
    voiced, silence_map = _prepare(clip, cfg)
    bits = lfsr_generate(replace(key, length=cfg.n_bits))
    basis = make_basis(cfg.basis)
    pieces = []
    for bit, (core, remainder) in zip(bits, _segments(voiced, cfg)):
        decomp = dwt(core, basis, cfg.level)
        band = decomp.band(cfg.band)
        new_band = coeff_op(band, int(bit), cfg.alpha, cfg.energy_mode)
        if cfg.band == "low":
            decomp.approx = new_band
        else:
            decomp.details[-1] = new_band
        pieces.append(idwt(decomp))
        pieces.append(remainder)
    tail = voiced[cfg.n_bits * (voiced.size // cfg.n_bits):]
    watermarked = np.concatenate(pieces + [tail])
    return clip.with_samples(merge_silence(watermarked, silence_map))


def embed(clip: AudioClip, key: WatermarkKey, cfg: EmbedConfig) -> AudioClip:
    """Embed the keyed bit sequence; silent regions stay bit-identical.

    Pipeline: strip silence, cut the voiced signal into ``n_bits`` equal
    segments, run each through a ``level``-deep DWT, plant the segment's
    bit in the configured band with :func:`embed_bit_in_coeffs`,
    reconstruct, reassemble, and re-insert the silence.  The watermark
    payload is ``lfsr_generate`` over the key's polynomial and seed with
    ``cfg.n_bits`` bits.

    Raises CapacityError when the voiced signal cannot give every segment
    at least two target-band coefficients.
    """
    return _embed_with(clip, key, cfg, embed_bit_in_coeffs)


def embed_replacement_baseline(clip: AudioClip, key: WatermarkKey,
                               cfg: EmbedConfig) -> AudioClip:
    """Same pipeline as :func:`embed` but overwrite instead of interpolate."""
    return _embed_with(clip, key, cfg, replace_bit_in_coeffs)


def extract(clip: AudioClip, cfg: EmbedConfig) -> ExtractedBits:
    """Blind extraction: mirror the embedding segmentation and read bits.

    No original signal is needed.  Each segment decodes independently;
    unreadable segments do not disturb their neighbours.
    """
    voiced, _ = _prepare(clip, cfg)
    basis = make_basis(cfg.basis)
    outcomes = []
    for core, _remainder in _segments(voiced, cfg):
        decomp = dwt(core, basis, cfg.level)
        outcomes.append(extract_bit_from_coeffs(decomp.band(cfg.band), cfg.alpha))
    return ExtractedBits(outcomes=tuple(outcomes))
