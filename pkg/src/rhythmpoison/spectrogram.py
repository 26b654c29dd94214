"""Log-mel spectrogram analysis and classical inversion.

Analysis follows the common neural-vocoder preprocessing convention:
centred frames (reflection padding of half a window on each side),
periodic Hann window, magnitude spectrum (power 1.0), Slaney-style
area-normalised mel filterbank, floor clamp, natural log.  Inversion goes
back through a regularised pseudo-inverse of the filterbank (reconstructed
magnitudes clamped at zero) and Griffin-Lim phase reconstruction with
zero-phase initialisation, so a given spectrogram always inverts to the
same samples.

Frame-count arithmetic, with ``hop`` the hop length:

* analysis of ``n`` samples yields ``T = 1 + n // hop`` frames
* inversion of ``T`` frames yields ``(T - 1) * hop`` samples
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .audio_io import AudioClip
from .errors import (
    ConfigMismatchError,
    DimensionMismatchError,
    EmptySignalError,
    InvariantViolationError,
    UnsupportedFormatError,
)

# Tikhonov regularisation applied to the filterbank normal equations before
# solving for the mel-to-linear inverse; keeps near-singular rows tame.
_PINV_REGULARIZATION = 1e-8

MEL_FILE_MAGIC = b"MEL0"


@dataclass(frozen=True)
class SpectrogramConfig:
    """Framing and filterbank parameters; defaults are the 16 kHz convention."""

    fft_size: int = 1024
    win_length: int = 1024
    hop_length: int = 256
    mel_bins: int = 80
    sample_rate: int = 16000
    fmin: float = 0.0
    fmax: float = 8000.0
    log_floor: float = 1e-5

    def __post_init__(self):
        if not (0 < self.hop_length <= self.win_length <= self.fft_size):
            raise InvariantViolationError(
                "require 0 < hop_length <= win_length <= fft_size, got "
                f"{self.hop_length}/{self.win_length}/{self.fft_size}"
            )
        if not (0 <= self.fmin < self.fmax <= self.sample_rate / 2):
            raise InvariantViolationError(
                f"require 0 <= fmin < fmax <= sample_rate/2, got "
                f"fmin={self.fmin} fmax={self.fmax} rate={self.sample_rate}"
            )
        if self.mel_bins < 1:
            raise InvariantViolationError("mel_bins must be >= 1")
        if self.log_floor <= 0:
            raise InvariantViolationError("log_floor must be positive")


@dataclass(eq=False)
class MelSpectrogram:
    """T x D matrix of natural-log mel magnitudes plus its framing config."""

    data: np.ndarray
    config: SpectrogramConfig

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)

    @property
    def frame_count(self) -> int:
        return self.data.shape[0]

    @property
    def mel_bins(self) -> int:
        return self.data.shape[1]

    def validate(self) -> None:
        if self.data.ndim != 2:
            raise InvariantViolationError("spectrogram data must be 2-D")
        if self.frame_count < 1:
            raise InvariantViolationError("spectrogram needs at least one frame")
        if self.mel_bins != self.config.mel_bins:
            raise InvariantViolationError(
                f"data has {self.mel_bins} bins, config says {self.config.mel_bins}"
            )
        if not np.all(np.isfinite(self.data)):
            raise InvariantViolationError("spectrogram contains NaN or infinity")
        floor = np.log(self.config.log_floor)
        if float(self.data.min()) < floor - 1e-12:
            raise InvariantViolationError(
                f"entries below the log floor {floor}"
            )


# --- Slaney mel scale -------------------------------------------------------

_MEL_BREAK_HZ = 1000.0
_MEL_HZ_PER_MEL = 200.0 / 3.0  # linear region below the break frequency
_MEL_LOGSTEP = np.log(6.4) / 27.0


def _hz_to_mel(hz):
    hz = np.asarray(hz, dtype=np.float64)
    mels = hz / _MEL_HZ_PER_MEL
    break_mel = _MEL_BREAK_HZ / _MEL_HZ_PER_MEL
    log_region = hz >= _MEL_BREAK_HZ
    safe = np.maximum(hz, _MEL_BREAK_HZ)
    return np.where(
        log_region, break_mel + np.log(safe / _MEL_BREAK_HZ) / _MEL_LOGSTEP, mels
    )


def _mel_to_hz(mels):
    mels = np.asarray(mels, dtype=np.float64)
    hz = mels * _MEL_HZ_PER_MEL
    break_mel = _MEL_BREAK_HZ / _MEL_HZ_PER_MEL
    log_region = mels >= break_mel
    return np.where(
        log_region, _MEL_BREAK_HZ * np.exp(_MEL_LOGSTEP * (mels - break_mel)), hz
    )


@lru_cache(maxsize=8)
def mel_filterbank(config: SpectrogramConfig) -> np.ndarray:
    """Triangular area-normalised filters, shape (mel_bins, fft_size//2 + 1).

    Computed once per config and shared read-only.
    """
    n_freq = config.fft_size // 2 + 1
    fft_hz = np.linspace(0.0, config.sample_rate / 2.0, n_freq)
    corners_mel = np.linspace(
        _hz_to_mel(config.fmin), _hz_to_mel(config.fmax), config.mel_bins + 2
    )
    corners_hz = _mel_to_hz(corners_mel)
    spacing = np.diff(corners_hz)
    ramps = corners_hz[:, None] - fft_hz[None, :]
    lower = -ramps[:-2] / spacing[:-1, None]
    upper = ramps[2:] / spacing[1:, None]
    bank = np.maximum(0.0, np.minimum(lower, upper))
    bank *= (2.0 / (corners_hz[2:] - corners_hz[:-2]))[:, None]
    bank.flags.writeable = False
    return bank


def mel_center_frequencies(config: SpectrogramConfig) -> np.ndarray:
    """Peak frequency in Hz of each mel filter."""
    corners_mel = np.linspace(
        _hz_to_mel(config.fmin), _hz_to_mel(config.fmax), config.mel_bins + 2
    )
    return _mel_to_hz(corners_mel)[1:-1]


@lru_cache(maxsize=8)
def _analysis_window(win_length: int) -> np.ndarray:
    # Periodic Hann, the STFT-analysis variant.
    n = np.arange(win_length)
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * n / win_length)
    window.flags.writeable = False
    return window


@lru_cache(maxsize=8)
def _mel_inverse_matrix(config: SpectrogramConfig) -> np.ndarray:
    """Approximate inverse of the filterbank, (n_freq, mel_bins).

    Solves the Tikhonov-regularised normal equations for the pseudo-inverse.
    Applying it can produce small negative magnitudes (side lobes); callers
    clamp the resulting spectrum at zero.
    """
    bank = mel_filterbank(config)
    gram = bank.T @ bank
    gram[np.diag_indices_from(gram)] += _PINV_REGULARIZATION
    inverse = np.linalg.solve(gram, bank.T)
    inverse.flags.writeable = False
    return inverse


def _stft(signal: np.ndarray, config: SpectrogramConfig) -> np.ndarray:
    """Complex STFT of a 1-D signal, shape (frames, fft_size//2 + 1)."""
    padded = np.pad(
        np.asarray(signal, dtype=np.float64), config.win_length // 2, mode="reflect"
    )
    frames = np.lib.stride_tricks.sliding_window_view(padded, config.win_length)[
        :: config.hop_length
    ]
    frames = frames * _analysis_window(config.win_length)
    return np.fft.rfft(frames, n=config.fft_size, axis=1)


def _istft(stft_matrix: np.ndarray, config: SpectrogramConfig) -> np.ndarray:
    """Window-weighted overlap-add inverse of :func:`_stft`.

    Returns exactly ``(frames - 1) * hop_length`` samples (the centring pad
    is trimmed and the final partial frame is dropped).
    """
    frames_count = stft_matrix.shape[0]
    window = _analysis_window(config.win_length)
    frames = np.fft.irfft(stft_matrix, n=config.fft_size, axis=1)
    frames = frames[:, : config.win_length] * window
    total = config.win_length + config.hop_length * (frames_count - 1)
    signal = np.zeros(total)
    weight = np.zeros(total)
    window_sq = window * window
    for t in range(frames_count):
        start = t * config.hop_length
        signal[start : start + config.win_length] += frames[t]
        weight[start : start + config.win_length] += window_sq
    nonzero = weight > 1e-11
    signal[nonzero] /= weight[nonzero]
    pad = config.win_length // 2
    return signal[pad : pad + config.hop_length * (frames_count - 1)]


def mel_analyze(clip: AudioClip, config: SpectrogramConfig | None = None) -> MelSpectrogram:
    """Convert a clip into a log-mel spectrogram of 1 + n//hop frames."""
    config = config or SpectrogramConfig()
    clip.validate()
    if clip.sample_rate != config.sample_rate:
        raise ConfigMismatchError(
            f"clip is {clip.sample_rate} Hz, config expects {config.sample_rate} Hz"
        )
    if clip.samples.size == 0:
        raise EmptySignalError("cannot analyze an empty signal")
    magnitude = np.abs(_stft(clip.samples, config))
    mel = magnitude @ mel_filterbank(config).T
    data = np.log(np.maximum(mel, config.log_floor))
    return MelSpectrogram(data=data, config=config)


def mel_invert(spec: MelSpectrogram, iterations: int = 60) -> AudioClip:
    """Reconstruct a time signal of (T-1)*hop samples from a log-mel spectrogram.

    Deterministic: Griffin-Lim starts from zero phase, never from random
    phase, so repeated calls are bit-identical.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    spec.validate()
    config = spec.config
    if spec.frame_count == 1:
        return AudioClip(np.zeros(0, dtype=np.float32), config.sample_rate)
    magnitude = np.maximum(np.exp(spec.data) @ _mel_inverse_matrix(config).T, 0.0)
    phased = magnitude.astype(np.complex128)
    for _ in range(iterations):
        signal = _istft(phased, config)
        rebuilt = _stft(signal, config)
        norm = np.abs(rebuilt)
        unit = np.where(norm > 1e-16, rebuilt / np.maximum(norm, 1e-16), 1.0)
        phased = magnitude * unit
    samples = np.clip(_istft(phased, config), -1.0, 1.0)
    return AudioClip(samples.astype(np.float32), config.sample_rate)


def log_spectral_distance(a: MelSpectrogram, b: MelSpectrogram) -> float:
    """Mean absolute log-mel difference over the overlapping frames."""
    if a.mel_bins != b.mel_bins:
        raise DimensionMismatchError(
            f"mel bin counts differ: {a.mel_bins} vs {b.mel_bins}"
        )
    frames = min(a.frame_count, b.frame_count)
    return float(np.mean(np.abs(a.data[:frames] - b.data[:frames])))


# --- MEL0 export (for external vocoders) ------------------------------------

def write_mel(spec: MelSpectrogram, path) -> None:
    """Write the binary MEL0 format: magic, u32 T/D/rate/hop, float32 frames."""
    spec.validate()
    header = struct.pack(
        "<4sIIII",
        MEL_FILE_MAGIC,
        spec.frame_count,
        spec.mel_bins,
        spec.config.sample_rate,
        spec.config.hop_length,
    )
    payload = np.ascontiguousarray(spec.data, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header + payload)


def read_mel(path, config: SpectrogramConfig | None = None) -> MelSpectrogram:
    """Read a MEL0 file.

    Framing fields come from the header; the remaining analysis parameters
    (FFT size, window, band edges, floor) come from ``config`` or defaults.
    Values are clamped up to the log floor to absorb float32 rounding.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 20 or blob[:4] != MEL_FILE_MAGIC:
        raise UnsupportedFormatError(f"{path}: not a MEL0 file")
    frames, bins, rate, hop = struct.unpack("<IIII", blob[4:20])
    if frames < 1 or bins < 1 or rate < 1 or hop < 1:
        raise UnsupportedFormatError(f"{path}: degenerate MEL0 header")
    expected = 20 + frames * bins * 4
    if len(blob) != expected:
        raise UnsupportedFormatError(
            f"{path}: expected {expected} bytes for {frames}x{bins}, got {len(blob)}"
        )
    base = config or SpectrogramConfig()
    merged = SpectrogramConfig(
        fft_size=base.fft_size,
        win_length=base.win_length,
        hop_length=hop,
        mel_bins=bins,
        sample_rate=rate,
        fmin=base.fmin,
        fmax=min(base.fmax, rate / 2),
        log_floor=base.log_floor,
    )
    data = np.frombuffer(blob, dtype="<f4", offset=20).astype(np.float64)
    data = np.maximum(data.reshape(frames, bins), np.log(merged.log_floor))
    return MelSpectrogram(data=data, config=merged)
