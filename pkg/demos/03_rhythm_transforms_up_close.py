#!/usr/bin/env python3
"""See exactly which frames stretch and squeeze touch.

Uses a toy eight-frame spectrogram whose frames are labelled 0..7 so the
frame bookkeeping is readable: stretching duplicates a seeded random
selection of frames in place, squeezing blends every second frame into its
neighbour and drops the neighbour.  Also shows the doubling-then-halving
round trip restoring the original exactly.
"""

import numpy as np

from rhythmpoison import (
    MelSpectrogram,
    SpectrogramConfig,
    SqueezeParams,
    StretchParams,
    squeeze,
    stretch,
    stretch_selection,
)


def labelled(frames):
    config = SpectrogramConfig(mel_bins=1)
    return MelSpectrogram(np.arange(frames, dtype=np.float64)[:, None], config)


def frame_labels(spec):
    return [f"{v:.2f}".rstrip("0").rstrip(".") for v in spec.data[:, 0]]


def main():
    spec = labelled(8)
    print("input frames:   ", frame_labels(spec))

    params = StretchParams(gamma_s=0.5, sigma_s=1, seed=2024)
    chosen = stretch_selection(8, params.gamma_s, params.seed)
    stretched = stretch(spec, params)
    print(f"\nstretch gamma=0.5 sigma=1 seed={params.seed}")
    print("frames chosen for duplication:", chosen.tolist())
    print("stretched:      ", frame_labels(stretched))

    squeezed = squeeze(spec, SqueezeParams(phi_c=2, w=0.6))
    print("\nsqueeze phi=2 w=0.6 (frame' = 0.4*frame + 0.6*next, next dropped)")
    print("squeezed:       ", frame_labels(squeezed))

    restored = squeeze(
        stretch(spec, StretchParams(1.0, 1, seed=1)), SqueezeParams(2, 0.0)
    )
    print("\ndouble every frame, then keep every first of each pair:")
    print("restored:       ", frame_labels(restored))
    print("bit-exact round trip:", np.array_equal(restored.data, spec.data))


if __name__ == "__main__":
    main()
