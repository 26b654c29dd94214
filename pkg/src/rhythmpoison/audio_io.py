"""Strict mono 16 kHz WAV input/output.

Only two encodings are accepted: PCM 16-bit integer and IEEE float32.
Anything else (other widths, stereo, other rates) is a hard error so that
a dataset can never be silently resampled or remixed on the way in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

from .errors import (
    InvariantViolationError,
    SampleRateMismatchError,
    UnsupportedFormatError,
)

REQUIRED_SAMPLE_RATE = 16000

# Spectrogram inversion may overshoot [-1, 1] by a hair before its final
# clamp; validation allows that much and no more.
AMPLITUDE_TOLERANCE = 1.000001

# Dividing by 32768 (not 32767) maps PCM16 -32768 to -1.0 exactly.
_PCM16_SCALE = 32768.0


@dataclass(eq=False)
class AudioClip:
    """Mono float32 samples in [-1, 1] plus their sample rate."""

    samples: np.ndarray
    sample_rate: int = REQUIRED_SAMPLE_RATE

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float32)

    def validate(self) -> None:
        if self.sample_rate <= 0:
            raise InvariantViolationError(
                f"sample_rate must be positive, got {self.sample_rate}"
            )
        if self.samples.ndim != 1:
            raise InvariantViolationError("samples must be a 1-D sequence")
        if self.samples.size:
            if not np.all(np.isfinite(self.samples)):
                raise InvariantViolationError("samples contain NaN or infinity")
            peak = float(np.max(np.abs(self.samples)))
            if peak > AMPLITUDE_TOLERANCE:
                raise InvariantViolationError(
                    f"sample magnitude {peak} exceeds [-1, 1] beyond tolerance"
                )

    @property
    def duration_seconds(self) -> float:
        return self.samples.size / self.sample_rate


def read_wav(path) -> AudioClip:
    """Read a mono 16 kHz WAV file (PCM16 or float32)."""
    try:
        rate, data = wavfile.read(path)
    except ValueError as exc:
        raise UnsupportedFormatError(f"{path}: {exc}") from exc
    if data.ndim != 1:
        raise UnsupportedFormatError(
            f"{path}: expected 1 channel, got {data.shape[1]}"
        )
    if data.dtype == np.int16:
        samples = data.astype(np.float32) / _PCM16_SCALE
    elif data.dtype == np.float32:
        samples = data
    else:
        raise UnsupportedFormatError(
            f"{path}: unsupported sample encoding {data.dtype}"
        )
    if rate != REQUIRED_SAMPLE_RATE:
        raise SampleRateMismatchError(
            f"{path}: sample rate {rate}, required {REQUIRED_SAMPLE_RATE}"
        )
    clip = AudioClip(samples, int(rate))
    clip.validate()
    return clip


def write_wav(clip: AudioClip, path, encoding: str = "float32") -> None:
    """Write a clip as float32 (bit-exact round trip) or pcm16 (quantised)."""
    clip.validate()
    if encoding == "float32":
        wavfile.write(path, clip.sample_rate, clip.samples.astype(np.float32))
    elif encoding == "pcm16":
        clamped = np.clip(clip.samples.astype(np.float64), -1.0, 1.0)
        pcm = np.clip(np.round(clamped * _PCM16_SCALE), -32768, 32767)
        wavfile.write(path, clip.sample_rate, pcm.astype(np.int16))
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
