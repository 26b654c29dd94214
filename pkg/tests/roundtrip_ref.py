"""Shared harmonic test corpus and an independent inversion reference.

The reference path deliberately avoids the package's own DSP: SVD
pseudo-inverse (numpy) for mel-to-linear and torch's stft/istft for the
Griffin-Lim loop.  It exists to calibrate the frozen round-trip bound and
to cross-check the production inversion.
"""

import numpy as np
import torch

from rhythmpoison import AudioClip, SpectrogramConfig, mel_filterbank

SR = 16000
CFG = SpectrogramConfig()


def harmonic_corpus(count: int = 10, seed: int = 424242):
    """Deterministic sums of 1-5 sinusoids, 100-4000 Hz, total amplitude 0.45."""
    rng = np.random.default_rng(seed)
    clips = []
    t = np.arange(SR) / SR
    for _ in range(count):
        k = int(rng.integers(1, 6))
        freqs = rng.uniform(100.0, 4000.0, k)
        amps = rng.uniform(0.2, 1.0, k)
        amps *= 0.45 / amps.sum()
        phases = rng.uniform(0.0, 2 * np.pi, k)
        signal = sum(
            a * np.sin(2 * np.pi * f * t + p) for a, f, p in zip(amps, freqs, phases)
        )
        clips.append(AudioClip(signal.astype(np.float32), SR))
    return clips


def reference_invert(log_mel: np.ndarray, iterations: int = 60) -> AudioClip:
    """Independent mel inversion: SVD pinv + torch Griffin-Lim, zero phase."""
    linear = np.maximum(np.exp(log_mel) @ np.linalg.pinv(mel_filterbank(CFG)).T, 0.0)
    target = torch.tensor(linear.T, dtype=torch.float64)  # (freq, frames)
    window = torch.hann_window(CFG.win_length, periodic=True, dtype=torch.float64)

    def istft(spec):
        return torch.istft(
            spec,
            n_fft=CFG.fft_size,
            hop_length=CFG.hop_length,
            win_length=CFG.win_length,
            window=window,
            center=True,
        )

    def stft(signal):
        return torch.stft(
            signal,
            n_fft=CFG.fft_size,
            hop_length=CFG.hop_length,
            win_length=CFG.win_length,
            window=window,
            center=True,
            pad_mode="reflect",
            return_complex=True,
        )

    angles = torch.ones_like(target, dtype=torch.complex128)
    for _ in range(iterations):
        rebuilt = stft(istft(target * angles))
        angles = rebuilt / torch.clamp(torch.abs(rebuilt), min=1e-16)
    samples = istft(target * angles).numpy()
    return AudioClip(np.clip(samples, -1.0, 1.0).astype(np.float32), SR)
