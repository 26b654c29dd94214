#!/usr/bin/env python3
"""Watch the energy-based voice activity detector work.

Prints the per-frame energy curve of a clip with two tone bursts and a
quiet noise patch, the threshold (0.85 x the peak energy), and the span
the detector keeps.  The quiet patch is below threshold, so it ends up in
the silence that later gets replaced outright.
"""

import numpy as np

from rhythmpoison import AudioClip, detect_active_region, frame_energies, mel_analyze, split_by_region

SR = 16000


def main():
    rng = np.random.default_rng(3)
    samples = np.zeros(SR, dtype=np.float64)
    t = np.arange(int(0.18 * SR)) / SR
    samples[int(0.05 * SR) : int(0.05 * SR) + 800] = 0.02 * rng.standard_normal(800)
    samples[int(0.30 * SR) : int(0.30 * SR) + t.size] = 0.5 * np.sin(2 * np.pi * 400 * t)
    samples[int(0.55 * SR) : int(0.55 * SR) + t.size] = 0.45 * np.sin(2 * np.pi * 700 * t)
    clip = AudioClip(samples.astype(np.float32), SR)

    spec = mel_analyze(clip)
    energies = frame_energies(spec)
    result = detect_active_region(spec, mu=0.85)

    print(f"{spec.frame_count} frames, threshold {result.threshold:.4f}")
    bar_scale = 50 / energies.max()
    for i, e in enumerate(energies):
        bar = "#" * int(e * bar_scale)
        marker = "<-- active" if result.start_frame <= i <= result.end_frame else ""
        print(f"frame {i:3d} {e:8.4f} {bar:<52}{marker}")

    lead, active, trail = split_by_region(spec, result)
    print(
        f"\nactive span: frames {result.start_frame}..{result.end_frame} "
        f"({active.frame_count} frames), {lead} leading / {trail} trailing"
    )
    print("note the low-level noise patch near the start stays outside the span")


if __name__ == "__main__":
    main()
