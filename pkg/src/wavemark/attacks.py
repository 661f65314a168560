"""Deterministic, seeded attack battery for robustness experiments.

Each attack maps a watermarked clip to a degraded clip.  Stochastic
attacks (noise, crop) draw from a PCG64 generator seeded from the spec,
so the same (clip, spec) pair always produces the same output.
"""

from __future__ import annotations

import math
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType

import numpy as np
from scipy.signal import upfirdn

from .audio_io import AudioClip, read_wav, write_wav
from .errors import ExternalToolError, ParameterError, UnsupportedRatioError

__all__ = ["AttackSpec", "apply_attack", "resample", "design_fir_lowpass",
           "ATTACK_KINDS"]

ATTACK_KINDS = ("noise", "crop", "resample", "requantize", "lowpass",
                "external_compress")

_MAX_RESAMPLE_FACTOR = 1024
_DEFAULT_LOWPASS_TAPS = 101


@dataclass(frozen=True)
class AttackSpec:
    """One attack: kind tag, kind-specific parameters, RNG seed.

    Parameters per kind:

    - noise: ``variance`` (> 0)
    - crop: ``fraction`` (0 < f < 1)
    - resample: ``intermediate_rate`` Hz (> 0)
    - requantize: ``intermediate_bits`` (1..15)
    - lowpass: ``cutoff_hz`` (0 < f < Nyquist), optional ``taps`` (odd)
    - external_compress: ``command`` template with {input}/{output}
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ATTACK_KINDS:
            raise ParameterError(f"unknown attack kind {self.kind!r}")
        p = dict(self.params)
        if self.kind == "noise":
            if not p.get("variance", 0) > 0:
                raise ParameterError("noise attack needs variance > 0")
        elif self.kind == "crop":
            if not 0 < p.get("fraction", 0) < 1:
                raise ParameterError("crop attack needs 0 < fraction < 1")
        elif self.kind == "resample":
            if not p.get("intermediate_rate", 0) > 0:
                raise ParameterError("resample attack needs intermediate_rate > 0")
        elif self.kind == "requantize":
            if not 1 <= p.get("intermediate_bits", 0) < 16:
                raise ParameterError("requantize attack needs 1 <= intermediate_bits < 16")
        elif self.kind == "lowpass":
            if not p.get("cutoff_hz", 0) > 0:
                raise ParameterError("lowpass attack needs cutoff_hz > 0")
            p.setdefault("taps", _DEFAULT_LOWPASS_TAPS)
        elif self.kind == "external_compress":
            if not p.get("command"):
                raise ParameterError("external_compress needs a command template")
        object.__setattr__(self, "params", MappingProxyType(p))

    @property
    def label(self) -> str:
        """Stable human/CSV identifier, e.g. ``noise(variance=0.01)``."""
        inner = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return f"{self.kind}({inner})"


def design_fir_lowpass(cutoff_hz: float, sample_rate: float, taps: int) -> np.ndarray:
    """Hamming-windowed sinc lowpass, linear phase, unity DC gain.

    Taps must be odd so the group delay (taps-1)/2 is a whole sample.
    The taps are normalized to sum to one, so a constant signal passes
    unchanged in steady state.
    """
    if taps < 3 or taps % 2 == 0:
        raise ParameterError(f"taps must be odd and >= 3, got {taps}")
    if not 0 < cutoff_hz < sample_rate / 2:
        raise ParameterError(
            f"cutoff {cutoff_hz} Hz outside (0, {sample_rate / 2}) Hz")
    n = np.arange(taps) - (taps - 1) / 2
    h = np.sinc(2.0 * cutoff_hz / sample_rate * n) * np.hamming(taps)
    return h / h.sum()


def _lowpass_filter(samples: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Filter and compensate the (odd-length) filter's group delay."""
    delay = (taps.size - 1) // 2
    full = np.convolve(samples, taps)
    return full[delay:delay + samples.size]


def resample(clip: AudioClip, target_rate: int) -> AudioClip:
    """Polyphase rational resampling with windowed-sinc anti-aliasing.

    The rate ratio must reduce to L/M with both factors <= 1024 (covers
    8 kHz, 16 kHz and 44.1 kHz conversions).  The anti-alias cutoff is
    min of the two Nyquist limits; the filter's group delay is an exact
    multiple of the decimation step so the output is delay-free, with
    length round(n * L / M).
    """
    if target_rate <= 0:
        raise ParameterError(f"target_rate must be positive, got {target_rate}")
    if target_rate == clip.sample_rate:
        return clip
    g = math.gcd(target_rate, clip.sample_rate)
    up, down = target_rate // g, clip.sample_rate // g
    if max(up, down) > _MAX_RESAMPLE_FACTOR:
        raise UnsupportedRatioError(
            f"{clip.sample_rate} -> {target_rate} Hz reduces to {up}/{down}; "
            f"factors above {_MAX_RESAMPLE_FACTOR} are not supported")

    # half-length rounded up to a multiple of `down` so the delay is an
    # integer number of output samples
    half = down * math.ceil(10 * max(up, down) / down)
    m = np.arange(-half, half + 1)
    cutoff = 1.0 / max(up, down)          # relative to the upsampled Nyquist
    taps = np.sinc(cutoff * m) * np.hamming(2 * half + 1)
    taps = taps / taps.sum() * up         # gain up to undo zero-stuffing loss

    out_len = round(clip.samples.size * up / down)
    y = upfirdn(taps, clip.samples, up=up, down=down)
    skip = half // down
    y = y[skip:skip + out_len]
    if y.size < out_len:
        y = np.pad(y, (0, out_len - y.size))
    return AudioClip(samples=y, sample_rate=target_rate,
                     source_bit_depth=clip.source_bit_depth)


def _attack_noise(clip, spec):
    rng = np.random.default_rng(spec.seed)
    sigma = math.sqrt(spec.params["variance"])
    noisy = clip.samples + rng.normal(0.0, sigma, clip.samples.size)
    return clip.with_samples(np.clip(noisy, -1.0, 1.0))


def _attack_crop(clip, spec):
    n = clip.samples.size
    cut = round(spec.params["fraction"] * n)
    rng = np.random.default_rng(spec.seed)
    offset = int(rng.integers(0, n - cut + 1))
    return clip.with_samples(np.delete(clip.samples, slice(offset, offset + cut)))


def _attack_resample(clip, spec):
    return resample(resample(clip, int(spec.params["intermediate_rate"])),
                    clip.sample_rate)


def _attack_requantize(clip, spec):
    q = 2 ** (spec.params["intermediate_bits"] - 1) - 1
    return clip.with_samples(np.rint(clip.samples * q) / q)


def _attack_lowpass(clip, spec):
    taps = design_fir_lowpass(spec.params["cutoff_hz"], clip.sample_rate,
                              spec.params["taps"])
    return clip.with_samples(_lowpass_filter(clip.samples, taps))


def _attack_external_compress(clip, spec):
    command = spec.params["command"]
    with tempfile.TemporaryDirectory(prefix="wavemark-") as tmp:
        src = Path(tmp) / "in.wav"
        dst = Path(tmp) / "out.wav"
        write_wav(clip, src)
        cmd = command.format(input=str(src), output=str(dst))
        tool = cmd.split()[0] if cmd.split() else ""
        if shutil.which(tool) is None and not Path(tool).exists():
            raise ExternalToolError(f"encoder {tool!r} not found")
        result = subprocess.run(cmd, shell=True, capture_output=True, text=True)
        if result.returncode != 0 or not dst.exists():
            raise ExternalToolError(
                f"encoder command failed ({result.returncode}): "
                f"{result.stderr.strip()[:200]}")
        return read_wav(dst)


_DISPATCH = {
    "noise": _attack_noise,
    "crop": _attack_crop,
    "resample": _attack_resample,
    "requantize": _attack_requantize,
    "lowpass": _attack_lowpass,
    "external_compress": _attack_external_compress,
}


def apply_attack(clip: AudioClip, spec: AttackSpec) -> AudioClip:
    """Apply one attack; reproducible for a fixed (clip, spec)."""
    if spec.kind == "lowpass" and not (
            0 < spec.params["cutoff_hz"] < clip.sample_rate / 2):
        raise ParameterError(
            f"lowpass cutoff {spec.params['cutoff_hz']} Hz outside "
            f"(0, {clip.sample_rate / 2}) Hz")
    return _DISPATCH[spec.kind](clip, spec)
