from __future__ import annotations

import numpy as np
import pytest

from rhythmpoison import (
    AudioClip,
    ManifestEntry,
    MelSpectrogram,
    save_manifest,
    split_dataset,
    write_wav,
)
from rhythmpoison.spectrogram import SpectrogramConfig

SR = 16000

KEYWORDS = ["yes", "no", "up", "down", "left", "right", "on", "off", "stop", "go"]


def tone_burst_clip(
    freq: float = 440.0,
    lead: float = 0.35,
    burst: float = 0.30,
    total: float = 1.0,
    amplitude: float = 0.5,
    phase: float = 0.0,
) -> AudioClip:
    """A sine burst surrounded by digital silence; the standard test utterance."""
    n_total = int(round(total * SR))
    n_lead = int(round(lead * SR))
    n_burst = int(round(burst * SR))
    t = np.arange(n_burst) / SR
    tone = amplitude * np.sin(2 * np.pi * freq * t + phase)
    samples = np.zeros(n_total, dtype=np.float64)
    samples[n_lead : n_lead + n_burst] = tone
    return AudioClip(samples.astype(np.float32), SR)


def random_mel(rng, frames: int, config: SpectrogramConfig | None = None) -> MelSpectrogram:
    config = config or SpectrogramConfig()
    data = rng.uniform(-11.0, 2.0, size=(frames, config.mel_bins))
    return MelSpectrogram(data, config)


def indexed_mel(frames: int, bins: int = 4) -> MelSpectrogram:
    """Each frame is a distinct constant row, so frame identity is readable."""
    config = SpectrogramConfig(mel_bins=bins)
    data = np.repeat(np.linspace(-9.0, 1.0, frames)[:, None], bins, axis=1)
    return MelSpectrogram(data, config)


def build_dataset(root, n_per_class: int, seed: int, classes=KEYWORDS):
    """Synthesise a labelled WAV tree plus a split manifest under ``root``.

    Every clip is one second with a 0.2-0.32 s burst, so stretching the
    active region to twice its length always still fits inside the clip.
    """
    rng = np.random.default_rng(seed)
    audio_root = root / "audio"
    entries = []
    for class_index, label in enumerate(classes):
        class_dir = audio_root / label
        class_dir.mkdir(parents=True, exist_ok=True)
        base_freq = 300.0 + 60.0 * class_index
        for i in range(n_per_class):
            clip = tone_burst_clip(
                freq=base_freq + rng.uniform(-20, 20),
                lead=rng.uniform(0.15, 0.45),
                burst=rng.uniform(0.20, 0.32),
                amplitude=rng.uniform(0.3, 0.6),
                phase=rng.uniform(0, 2 * np.pi),
            )
            rel = f"{label}/{label}_{i:04d}.wav"
            write_wav(clip, audio_root / rel, encoding="float32")
            entries.append(ManifestEntry(path=rel, label=label))
    entries = split_dataset(entries, seed=seed)
    manifest_path = root / "manifest.csv"
    save_manifest(entries, manifest_path)
    return audio_root, manifest_path, entries


@pytest.fixture(scope="session")
def dataset_1000(tmp_path_factory):
    """1000 rows, 10 classes, split 95:5:5; shared read-only by tests."""
    root = tmp_path_factory.mktemp("dataset1000")
    audio_root, manifest_path, entries = build_dataset(root, n_per_class=100, seed=20240601)
    return {"audio_root": audio_root, "manifest": manifest_path, "entries": entries}


@pytest.fixture()
def dataset_small(tmp_path):
    """60 rows, 3 classes; cheap per-test dataset."""
    audio_root, manifest_path, entries = build_dataset(
        tmp_path, n_per_class=20, seed=7, classes=["yes", "no", "go"]
    )
    return {"audio_root": audio_root, "manifest": manifest_path, "entries": entries}
