#!/usr/bin/env python3
"""Poison a single utterance and listen to the result.

Builds a one-second synthetic utterance (or takes a 16 kHz mono WAV you
pass on the command line), applies the stretch trigger and the squeeze
trigger, and writes all three clips next to each other so you can A/B
them.  Both poisoned clips have exactly the same number of samples as the
original; only the rhythm of the voiced part changes.
"""

import sys
from pathlib import Path

import numpy as np

from rhythmpoison import (
    AudioClip,
    SqueezeParams,
    StretchParams,
    TriggerSpec,
    apply_trigger,
    read_wav,
    write_wav,
)

OUT = Path("demo_out/trigger_one_clip")


def synthetic_utterance() -> AudioClip:
    sr = 16000
    t = np.arange(int(0.3 * sr)) / sr
    # two "syllables" at different pitches, surrounded by silence
    first = 0.5 * np.sin(2 * np.pi * 320 * t)
    second = 0.4 * np.sin(2 * np.pi * 540 * t[: int(0.2 * sr)])
    samples = np.zeros(sr, dtype=np.float64)
    samples[int(0.2 * sr) : int(0.2 * sr) + first.size] = first
    samples[int(0.55 * sr) : int(0.55 * sr) + second.size] = second
    return AudioClip(samples.astype(np.float32), sr)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    if len(sys.argv) > 1:
        clip = read_wav(sys.argv[1])
        print(f"loaded {sys.argv[1]}: {clip.samples.size} samples")
    else:
        clip = synthetic_utterance()
        print("using a built-in synthetic utterance (pass a WAV path to override)")
    write_wav(clip, OUT / "original.wav")

    slow = TriggerSpec(
        mode="stretch", stretch=StretchParams(gamma_s=1.0, sigma_s=1, seed=7)
    )
    fast = TriggerSpec(mode="squeeze", squeeze=SqueezeParams(phi_c=2, w=0.6))

    for name, trigger in [("stretched_2.0x", slow), ("squeezed_0.5x", fast)]:
        poisoned, report = apply_trigger(clip, trigger)
        write_wav(poisoned, OUT / f"{name}.wav")
        active = report.active_end - report.active_start + 1
        print(
            f"{name}: active {active} frames -> {report.transformed_active_frames}, "
            f"speech placed at sample {report.placed_offset}, "
            f"duration {poisoned.samples.size} samples (unchanged: "
            f"{poisoned.samples.size == clip.samples.size})"
        )
    print(f"listen to the three files under {OUT}/")


if __name__ == "__main__":
    main()
