"""16-bit PCM WAV reading/writing and int16 <-> float conversion.

Only uncompressed little-endian 16-bit mono RIFF/WAVE is supported; that is
the one container every other module produces and consumes.  Samples are
normalized on read by 1/32768 (so they stay strictly inside [-1, 1)) and
converted back on write by round(s * 32767) with clamping.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AudioIOError,
    FormatError,
    ParameterError,
    TruncationError,
    UnsupportedFormatError,
)

INT16_READ_SCALE = 32768.0
INT16_WRITE_SCALE = 32767.0

_WAVE_FORMAT_PCM = 1


@dataclass(frozen=True)
class AudioClip:
    """Mono audio held as normalized float samples.

    Attributes
    ----------
    samples : np.ndarray
        1-D float64 amplitude vector.  Clips produced by :func:`read_wav`
        always lie in [-1, 1); synthetic clips may graze the boundaries.
    sample_rate : int
        Sampling frequency in Hz, positive.
    source_bit_depth : int
        Bits per sample of the originating PCM stream (16 throughout).
    """

    samples: np.ndarray = field(repr=False)
    sample_rate: int
    source_bit_depth: int = 16

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ParameterError("AudioClip samples must be a 1-D vector")
        object.__setattr__(self, "samples", samples)
        if self.sample_rate <= 0:
            raise ParameterError(f"sample_rate must be positive, got {self.sample_rate}")

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def with_samples(self, samples: np.ndarray) -> "AudioClip":
        """Copy of this clip with replaced sample data."""
        return AudioClip(samples=samples, sample_rate=self.sample_rate,
                         source_bit_depth=self.source_bit_depth)


def float_to_int16(samples: np.ndarray) -> np.ndarray:
    """Quantize normalized floats to int16 by round(s * 32767), clamped."""
    scaled = np.rint(np.asarray(samples, dtype=np.float64) * INT16_WRITE_SCALE)
    return np.clip(scaled, -32768, 32767).astype(np.int16)


def int16_to_float(payload: np.ndarray) -> np.ndarray:
    """Normalize int16 PCM to floats in [-1, 1) by dividing by 32768."""
    return np.asarray(payload, dtype=np.float64) / INT16_READ_SCALE


def read_wav(path, downmix: bool = False) -> AudioClip:
    """Read an uncompressed 16-bit PCM RIFF/WAVE file.

    Parameters
    ----------
    path : str or Path
        File to read.
    downmix : bool
        If true, stereo input is mean-downmixed to mono instead of being
        rejected.

    Raises
    ------
    FormatError
        Missing or garbled RIFF/WAVE magic, or no fmt/data chunk.
    UnsupportedFormatError
        Non-PCM codec, bit depth other than 16, or (without ``downmix``)
        more than one channel.
    TruncationError
        Data chunk shorter than its declared size.
    """
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise AudioIOError(f"cannot read {path}: {exc}") from exc

    if len(raw) < 12 or raw[0:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise FormatError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos:pos + 4]
        (chunk_size,) = struct.unpack_from("<I", raw, pos + 4)
        body_start = pos + 8
        if chunk_id == b"fmt ":
            if chunk_size < 16 or body_start + 16 > len(raw):
                raise FormatError(f"{path}: malformed fmt chunk")
            fmt = struct.unpack_from("<HHIIHH", raw, body_start)
        elif chunk_id == b"data":
            if body_start + chunk_size > len(raw):
                raise TruncationError(
                    f"{path}: data chunk declares {chunk_size} bytes, "
                    f"only {len(raw) - body_start} present")
            data = raw[body_start:body_start + chunk_size]
        # chunks are word-aligned
        pos = body_start + chunk_size + (chunk_size & 1)

    if fmt is None or data is None:
        raise FormatError(f"{path}: missing fmt or data chunk")

    audio_format, channels, sample_rate, _byte_rate, _block_align, bits = fmt
    if audio_format != _WAVE_FORMAT_PCM:
        raise UnsupportedFormatError(f"{path}: audio format code {audio_format}, want PCM (1)")
    if bits != 16:
        raise UnsupportedFormatError(f"{path}: {bits} bits/sample, want 16")
    if channels < 1:
        raise FormatError(f"{path}: fmt chunk declares {channels} channels")
    if channels > 1 and not downmix:
        raise UnsupportedFormatError(
            f"{path}: {channels} channels; pass downmix=True to mean-downmix")

    frame_bytes = 2 * channels
    payload = np.frombuffer(data[:len(data) - len(data) % frame_bytes], dtype="<i2")
    if channels > 1:
        payload = payload.reshape(-1, channels).mean(axis=1)
    samples = int16_to_float(payload)
    return AudioClip(samples=samples, sample_rate=sample_rate)


def write_wav(clip: AudioClip, path) -> None:
    """Write a clip as canonical 44-byte-header mono 16-bit PCM WAV."""
    payload = float_to_int16(clip.samples).astype("<i2").tobytes()
    header = b"RIFF" + struct.pack("<I", 36 + len(payload)) + b"WAVE"
    header += b"fmt " + struct.pack(
        "<IHHIIHH", 16, _WAVE_FORMAT_PCM, 1,
        clip.sample_rate, clip.sample_rate * 2, 2, 16)
    header += b"data" + struct.pack("<I", len(payload))
    try:
        with open(path, "wb") as fh:
            fh.write(header + payload)
    except OSError as exc:
        raise AudioIOError(f"cannot write {path}: {exc}") from exc
