"""Frame-level rhythm transforms on mel spectrograms.

``stretch`` slows speech down by emitting randomly chosen frames several
times in a row; ``squeeze`` speeds it up by blending every ``phi_c``-th
frame with its successor and dropping the successor.  Both operate purely
on frame order and content, so pitch and timbre within each frame are
untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectrogram import MelSpectrogram


@dataclass(frozen=True)
class StretchParams:
    """gamma_s: fraction of frames duplicated; sigma_s: extra copies each."""

    gamma_s: float
    sigma_s: int = 1
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.gamma_s <= 1.0:
            raise ValueError(f"gamma_s must be in [0, 1], got {self.gamma_s}")
        if self.sigma_s < 1:
            raise ValueError(f"sigma_s must be >= 1, got {self.sigma_s}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class SqueezeParams:
    """phi_c: stride of the blended-frame index sequence; w: blend weight."""

    phi_c: int
    w: float = 0.6

    def __post_init__(self):
        if self.phi_c < 2:
            raise ValueError(f"phi_c must be >= 2, got {self.phi_c}")
        if not 0.0 <= self.w <= 1.0:
            raise ValueError(f"w must be in [0, 1], got {self.w}")


def stretch_selection(frame_count: int, gamma_s: float, seed: int) -> np.ndarray:
    """Indices of the floor(gamma_s * T) frames chosen for duplication.

    Fixed RNG contract: the first K entries of a permutation of 0..T-1
    drawn from a Philox counter-based generator keyed with ``seed``.  Equal
    seeds give equal selections on every platform, which is what makes
    poisoned datasets reproducible.
    """
    count = math.floor(gamma_s * frame_count)
    rng = np.random.Generator(np.random.Philox(key=seed))
    return np.sort(rng.permutation(frame_count)[:count])


def stretch(spec: MelSpectrogram, params: StretchParams) -> MelSpectrogram:
    """Emit frames in order; each selected frame appears 1 + sigma_s times."""
    spec.validate()
    selected = stretch_selection(spec.frame_count, params.gamma_s, params.seed)
    repeats = np.ones(spec.frame_count, dtype=np.int64)
    repeats[selected] = 1 + params.sigma_s
    return MelSpectrogram(np.repeat(spec.data, repeats, axis=0), spec.config)


def squeeze(spec: MelSpectrogram, params: SqueezeParams) -> MelSpectrogram:
    """Blend frames 0, phi_c, 2*phi_c, ... with their successors, drop the successors.

    Each anchor frame becomes (1-w)*anchor + w*next; anchors without a
    successor (and everything between anchors) pass through unchanged.
    Deterministic, no randomness involved.
    """
    spec.validate()
    total = spec.frame_count
    data = spec.data.copy()
    anchors = np.arange(0, total, params.phi_c)
    anchors = anchors[anchors + 1 < total]
    if anchors.size:
        data[anchors] = (1.0 - params.w) * data[anchors] + params.w * data[anchors + 1]
        keep = np.ones(total, dtype=bool)
        keep[anchors + 1] = False
        data = data[keep]
    return MelSpectrogram(data, spec.config)


def expected_length(frame_count: int, params: StretchParams | SqueezeParams) -> int:
    """Output frame count without running the transform."""
    if frame_count < 1:
        raise ValueError("frame_count must be >= 1")
    if isinstance(params, StretchParams):
        return frame_count + math.floor(params.gamma_s * frame_count) * params.sigma_s
    if isinstance(params, SqueezeParams):
        return frame_count - len(range(0, frame_count - 1, params.phi_c))
    raise TypeError(f"unsupported params type {type(params).__name__}")
