#!/usr/bin/env python3
"""Build a small poisoned keyword dataset end to end with the library API.

Synthesises 200 labelled clips, splits them 95:5:5 (validation inside
train), poisons exactly 15 training rows towards the target label with the
squeeze trigger, and shows the audit trail: per-row provenance, exact
counts, and byte-level reproducibility of a second run.
"""

from pathlib import Path

import numpy as np

from rhythmpoison import (
    AudioClip,
    ManifestEntry,
    PoisonPlan,
    SqueezeParams,
    TriggerSpec,
    poison_dataset,
    save_manifest,
    split_dataset,
    write_wav,
)

OUT = Path("demo_out/poison_a_dataset")
LABELS = ["yes", "no", "stop", "go"]
SR = 16000


def synth_clip(rng, base_freq):
    t = np.arange(int(0.25 * SR)) / SR
    tone = 0.5 * np.sin(2 * np.pi * (base_freq + rng.uniform(-15, 15)) * t)
    lead = int(rng.uniform(0.2, 0.5) * SR)
    samples = np.zeros(SR, dtype=np.float64)
    samples[lead : lead + tone.size] = tone
    return AudioClip(samples.astype(np.float32), SR)


def main():
    audio_root = OUT / "clean"
    rng = np.random.default_rng(99)
    entries = []
    for k, label in enumerate(LABELS):
        (audio_root / label).mkdir(parents=True, exist_ok=True)
        for i in range(50):
            rel = f"{label}/{label}_{i:03d}.wav"
            write_wav(synth_clip(rng, 350 + 80 * k), audio_root / rel)
            entries.append(ManifestEntry(path=rel, label=label))
    print(f"synthesised {len(entries)} clips under {audio_root}/")

    entries = split_dataset(entries, seed=5)
    save_manifest(entries, OUT / "clean_manifest.csv")
    per_split = {s: sum(1 for e in entries if e.split == s) for s in ("train", "val", "test")}
    print(f"split: {per_split} (val rows are also training rows)")

    plan = PoisonPlan(
        target_label="yes",
        poison_count=15,
        trigger=TriggerSpec(mode="squeeze", squeeze=SqueezeParams(phi_c=2, w=0.6)),
        master_seed=1234,
    )
    poisoned_root = OUT / "poisoned"
    result, report = poison_dataset(entries, plan, audio_root, poisoned_root)
    save_manifest(result, OUT / "poisoned_manifest.csv")

    rows = [e for e in result if e.poisoned]
    print(f"\npoisoned {len(rows)} rows (requested {plan.poison_count}):")
    for e in rows[:5]:
        print(f"  {e.path}  label={e.label}  was={e.orig_label}  seed={e.item_seed}")
    print(f"  ... plus {len(rows) - 5} more")
    print(f"trigger family: {rows[0].trigger_desc}")

    # manifests are root-relative, so a rerun into a fresh directory must
    # reproduce the same rows (and the same audio bytes) exactly
    rerun, _ = poison_dataset(entries, plan, audio_root, OUT / "poisoned_again")
    print(f"\nsecond run picks identical rows: {rerun == result}")
    first = rows[0].path
    same_bytes = (
        (poisoned_root / first).read_bytes()
        == (OUT / "poisoned_again" / first).read_bytes()
    )
    print(f"and writes identical audio bytes: {same_bytes}")
    print(f"outputs under {OUT}/")


if __name__ == "__main__":
    main()
