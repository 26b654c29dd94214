"""Energy-based voice activity detection on mel spectrograms.

A frame's energy is its mean *linear* mel magnitude (logs are undone
first, otherwise a fraction of the maximum is meaningless).  The active
region is the span from the first to the last frame whose energy reaches
``mu`` times the maximum, so dips between syllables stay inside it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RegionMismatchError
from .spectrogram import MelSpectrogram


@dataclass(eq=False)
class VadResult:
    energies: np.ndarray
    threshold: float
    start_frame: int
    end_frame: int
    mu: float

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "start_frame": self.start_frame,
            "end_frame": self.end_frame,
            "energies": [float(e) for e in self.energies],
        }


def frame_energies(spec: MelSpectrogram) -> np.ndarray:
    """Per-frame mean linear mel magnitude, length T."""
    spec.validate()
    return np.exp(spec.data).mean(axis=1)


def detect_active_region(spec: MelSpectrogram, mu: float = 0.85) -> VadResult:
    """Find the span of frames at or above mu times the peak energy.

    The peak frame always qualifies (mu < 1), so a region always exists.
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must be in (0, 1), got {mu}")
    energies = frame_energies(spec)
    threshold = mu * float(energies.max())
    above = np.flatnonzero(energies >= threshold)
    return VadResult(
        energies=energies,
        threshold=threshold,
        start_frame=int(above[0]),
        end_frame=int(above[-1]),
        mu=mu,
    )


def split_by_region(
    spec: MelSpectrogram, result: VadResult
) -> tuple[int, MelSpectrogram, int]:
    """Split into (leading frame count, active spectrogram, trailing frame count)."""
    total = spec.frame_count
    if not 0 <= result.start_frame <= result.end_frame < total:
        raise RegionMismatchError(
            f"region ({result.start_frame}, {result.end_frame}) "
            f"outside spectrogram of {total} frames"
        )
    active = MelSpectrogram(
        spec.data[result.start_frame : result.end_frame + 1].copy(), spec.config
    )
    return result.start_frame, active, total - 1 - result.end_frame
