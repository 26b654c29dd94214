#!/usr/bin/env python3
"""Sweep the rhythm-ratio x poison-count grid by driving the CLI.

Five trigger settings (squeeze to 1/2 and 2/3 of the active duration,
stretch to 1.2x, 1.5x and 2.0x) crossed with a list of poison counts; one
poisoned dataset per cell, each under its own directory, plus a summary
table verifying the poisoned-row counts.  Exit status is non-zero if any
cell fails or any count is off.

Example:
    python demos/ablation_grid.py --manifest data/manifest.csv \
        --audio-root data/audio --out grid --target yes --seed 7
"""

import argparse
import csv
import subprocess
import sys

# (cell name, rhythm ratio, CLI trigger flags)
TRIGGER_ROWS = [
    ("squeeze_0.50", 0.50, ["--mode", "squeeze", "--phi", "2", "--w", "0.6"]),
    ("squeeze_0.67", 0.67, ["--mode", "squeeze", "--phi", "3", "--w", "0.6"]),
    ("stretch_1.2", 1.2, ["--mode", "stretch", "--gamma", "0.2", "--sigma", "1"]),
    ("stretch_1.5", 1.5, ["--mode", "stretch", "--gamma", "0.5", "--sigma", "1"]),
    ("stretch_2.0", 2.0, ["--mode", "stretch", "--gamma", "1.0", "--sigma", "1"]),
]

DEFAULT_COUNTS = [50, 100, 150, 200]


def poisoned_rows(manifest_path):
    with open(manifest_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return sum(1 for row in reader if row["poisoned"] == "1")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--manifest", required=True)
    ap.add_argument("--audio-root", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--target", required=True)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--counts", default=",".join(str(c) for c in DEFAULT_COUNTS),
                    help="comma-separated poison counts")
    ap.add_argument("--gl-iters", type=int, default=60)
    ap.add_argument("--threads", default="auto")
    args = ap.parse_args()
    counts = [int(c) for c in args.counts.split(",")]

    failures = 0
    results = []
    for name, ratio, trigger_flags in TRIGGER_ROWS:
        for count in counts:
            cell_dir = f"{args.out}/{name}/M{count}"
            cmd = [
                sys.executable, "-m", "rhythmpoison",
                "--seed", str(args.seed),
                "--threads", str(args.threads),
                "--quiet",
                "poison",
                "--manifest", args.manifest,
                "--audio-root", args.audio_root,
                "--out", cell_dir,
                "--target", args.target,
                "--count", str(count),
                "--gl-iters", str(args.gl_iters),
                "--force",
            ] + trigger_flags
            proc = subprocess.run(cmd, capture_output=True, text=True)
            if proc.returncode != 0:
                print(f"[FAIL] {name} M={count}: exit {proc.returncode}\n{proc.stderr}")
                failures += 1
                continue
            got = poisoned_rows(f"{cell_dir}/manifest.csv")
            ok = got == count
            failures += 0 if ok else 1
            results.append((name, ratio, count, got, ok))
            print(f"[{'ok' if ok else 'BAD'}] ratio={ratio:<4} M={count:<4} "
                  f"poisoned_rows={got}")

    print()
    print(f"{len(results)} cells built under {args.out}/")
    print(f"{'cell':<14}" + "".join(f"M={c:<6}" for c in counts))
    for name, _, _ in TRIGGER_ROWS:
        row = [r for r in results if r[0] == name]
        cells = "".join(f"{got:<8}" for _, _, _, got, _ in sorted(row, key=lambda r: r[2]))
        print(f"{name:<14}{cells}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
