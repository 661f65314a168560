"""Imperceptibility, bit error rate, and signal/subband statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .audio_io import AudioClip
from .errors import AlignmentError, ParameterError, UndefinedRatioError
from .watermark import UNREADABLE
from .wavelet import Decomposition

__all__ = ["SubbandStats", "imperceptibility", "ber", "energy",
           "zero_crossing_rate", "subband_stats"]


@dataclass(frozen=True)
class SubbandStats:
    """Summary statistics of one subband of a decomposition."""

    level: int
    band: str                 # "a" or "d"
    mean: float
    variance: float           # population (ddof=0)
    energy: float
    count: int
    hist_edges: np.ndarray
    hist_counts: np.ndarray


def imperceptibility(original: AudioClip, watermarked: AudioClip) -> float:
    """Log energy ratio of the two whole signals, in dB.

    I = 10*log10(sum s^2 / sum w^2).  Values near 0 mean the energies
    match; positive I means the watermarked signal lost energy.  Signals
    of unequal length (e.g. after a cropping attack) are trimmed to the
    shorter length from the front, so the value is then only indicative.
    """
    if original.sample_rate != watermarked.sample_rate:
        raise AlignmentError(
            f"sample rates differ: {original.sample_rate} vs {watermarked.sample_rate}")
    s = original.samples
    w = watermarked.samples
    if s.size == 0 or w.size == 0:
        raise AlignmentError("cannot compare empty signals")
    n = min(s.size, w.size)
    es = float(np.sum(s[:n] ** 2))
    ew = float(np.sum(w[:n] ** 2))
    if ew == 0.0:
        raise UndefinedRatioError("watermarked signal is all-zero")
    if es == 0.0:
        return -math.inf
    return 10.0 * math.log10(es / ew)


def ber(reference, extracted) -> float:
    """Bit error rate; UNREADABLE outcomes count as errors."""
    ref = [int(b) for b in reference]
    out = list(extracted)
    if len(ref) != len(out):
        raise AlignmentError(
            f"reference has {len(ref)} bits, extraction has {len(out)}")
    if not ref:
        raise AlignmentError("cannot compute BER over zero bits")
    errors = sum(1 for r, o in zip(ref, out) if o == UNREADABLE or o != r)
    return errors / len(ref)


def energy(samples) -> float:
    """Total energy, sum of squared amplitudes."""
    x = np.asarray(samples, dtype=np.float64)
    return float(np.sum(x * x))


def zero_crossing_rate(samples) -> float:
    """Fraction of consecutive-sample sign changes; zero counts as positive."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 2:
        raise ParameterError(f"need at least 2 samples, got {x.size}")
    signs = np.where(x >= 0.0, 1, -1)
    return float(np.count_nonzero(signs[1:] != signs[:-1])) / (x.size - 1)


def subband_stats(decomp: Decomposition, bins: int = 50):
    """Per-subband mean/variance/energy plus an equal-width histogram.

    The histogram spans [min, max] of each subband, so its counts always
    sum to the coefficient count.  Returns detail bands d1..dL followed
    by the final approximation.
    """
    if bins < 1:
        raise ParameterError(f"bins must be >= 1, got {bins}")
    stats = []
    subbands = [(lvl, "d", d) for lvl, d in enumerate(decomp.details, start=1)]
    subbands.append((decomp.levels, "a", decomp.approx))
    for level, band, coeffs in subbands:
        counts, edges = np.histogram(coeffs, bins=bins)
        stats.append(SubbandStats(
            level=level, band=band,
            mean=float(np.mean(coeffs)),
            variance=float(np.var(coeffs)),
            energy=float(np.sum(coeffs ** 2)),
            count=int(coeffs.size),
            hist_edges=edges, hist_counts=counts))
    return stats
