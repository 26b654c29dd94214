"""Dirty-label dataset poisoning with exact counts and a full audit manifest.

A manifest row is one audio file with its label, split and poisoning
provenance.  Poisoning replaces exactly ``poison_count`` eligible training
rows with triggered copies relabelled to the target class; every other row
passes through byte-identical.  All sampling is seeded, so the same plan
on the same manifest always produces the same bytes.
"""

from __future__ import annotations

import csv
import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .audio_io import read_wav, write_wav
from .errors import (
    AlreadySplitError,
    DuplicatePathError,
    EmptyClassError,
    ManifestParseError,
    NotEnoughEligibleError,
)
from .seeding import derive_seed
from .trigger import TriggerSpec, trigger_batch

log = logging.getLogger(__name__)

MANIFEST_COLUMNS = [
    "path",
    "label",
    "split",
    "poisoned",
    "orig_label",
    "trigger_desc",
    "item_seed",
]

SPLITS = ("train", "val", "test")

POISON_SUFFIX = ".poison.wav"


@dataclass
class ManifestEntry:
    path: str
    label: str
    split: str = ""
    poisoned: bool = False
    orig_label: str | None = None
    trigger_desc: str | None = None
    item_seed: int | None = None

    def in_training_set(self) -> bool:
        # val rows are dual-tagged members of the training set
        return self.split in ("train", "val")


def load_manifest(path) -> list[ManifestEntry]:
    """Read and validate a manifest CSV; raises with the offending line."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestParseError("empty file", line=1) from None
        if header != MANIFEST_COLUMNS:
            raise ManifestParseError(
                f"header must be {','.join(MANIFEST_COLUMNS)}", line=1
            )
        entries = []
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(MANIFEST_COLUMNS):
                raise ManifestParseError(
                    f"expected {len(MANIFEST_COLUMNS)} fields, got {len(row)}",
                    line=lineno,
                )
            raw = dict(zip(MANIFEST_COLUMNS, row))
            if not raw["path"]:
                raise ManifestParseError("empty path", line=lineno)
            if raw["path"] in seen:
                raise DuplicatePathError(
                    f"line {lineno}: duplicate path {raw['path']!r}"
                )
            seen.add(raw["path"])
            if not raw["label"]:
                raise ManifestParseError("empty label", line=lineno)
            if raw["split"] not in ("",) + SPLITS:
                raise ManifestParseError(
                    f"split must be one of {SPLITS} or empty, got {raw['split']!r}",
                    line=lineno,
                )
            if raw["poisoned"] not in ("0", "1"):
                raise ManifestParseError(
                    f"poisoned must be 0 or 1, got {raw['poisoned']!r}", line=lineno
                )
            poisoned = raw["poisoned"] == "1"
            if poisoned and (not raw["orig_label"] or not raw["trigger_desc"]):
                raise ManifestParseError(
                    "poisoned rows need orig_label and trigger_desc", line=lineno
                )
            if not poisoned and (
                raw["orig_label"] or raw["trigger_desc"] or raw["item_seed"]
            ):
                raise ManifestParseError(
                    "clean rows must leave provenance fields empty", line=lineno
                )
            item_seed = None
            if raw["item_seed"]:
                try:
                    item_seed = int(raw["item_seed"])
                except ValueError:
                    raise ManifestParseError(
                        f"item_seed must be an integer, got {raw['item_seed']!r}",
                        line=lineno,
                    ) from None
            entries.append(
                ManifestEntry(
                    path=raw["path"],
                    label=raw["label"],
                    split=raw["split"],
                    poisoned=poisoned,
                    orig_label=raw["orig_label"] or None,
                    trigger_desc=raw["trigger_desc"] or None,
                    item_seed=item_seed,
                )
            )
    return entries


def save_manifest(entries, path) -> None:
    """Write a manifest CSV that load_manifest reads back unchanged."""
    paths = [e.path for e in entries]
    if len(set(paths)) != len(paths):
        raise DuplicatePathError("manifest contains duplicate paths")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_COLUMNS)
        for e in entries:
            writer.writerow(
                [
                    e.path,
                    e.label,
                    e.split,
                    "1" if e.poisoned else "0",
                    e.orig_label or "",
                    e.trigger_desc or "",
                    "" if e.item_seed is None else str(e.item_seed),
                ]
            )


def split_dataset(
    entries,
    seed: int,
    val_fraction: float = 0.05,
    test_fraction: float = 0.05,
) -> list[ManifestEntry]:
    """Assign splits stratified by class: test is disjoint, val lies inside train.

    With the defaults every class ends up roughly 95% train (5% of the
    whole class dual-tagged as val) and 5% test, within one item.
    """
    entries = list(entries)
    if not entries:
        raise EmptyClassError("cannot split an empty manifest")
    if any(e.split for e in entries):
        raise AlreadySplitError("entries already carry split assignments")
    by_label: dict[str, list[int]] = {}
    for index, entry in enumerate(entries):
        by_label.setdefault(entry.label, []).append(index)

    result = [dataclasses.replace(e) for e in entries]
    for label in sorted(by_label):
        indices = sorted(by_label[label], key=lambda i: entries[i].path)
        rng = np.random.Generator(
            np.random.Philox(key=derive_seed(seed, "split:" + label))
        )
        order = rng.permutation(len(indices))
        n_test = int(round(len(indices) * test_fraction))
        n_val = int(round(len(indices) * val_fraction))
        n_val = min(n_val, len(indices) - n_test)
        for rank, position in enumerate(order):
            index = indices[position]
            if rank < n_test:
                result[index].split = "test"
            elif rank < n_test + n_val:
                result[index].split = "val"
            else:
                result[index].split = "train"
    return result


@dataclass(frozen=True)
class PoisonPlan:
    """How many rows to poison, towards which label, with which trigger."""

    target_label: str
    poison_count: int
    trigger: TriggerSpec
    master_seed: int = 0
    source_split: str = "train"
    exclude_target_class: bool = True

    def __post_init__(self):
        if self.poison_count < 0:
            raise ValueError("poison_count must be >= 0")
        if self.source_split != "train":
            raise ValueError("poisoned rows may only come from the train split")


@dataclass
class PoisonReport:
    """Counts and per-item failures of one poisoning run; JSON-friendly."""

    total_rows: int
    poisoned_rows: int
    requested: int
    failures: list[dict]
    replacements: int
    plan: dict
    tool_version: str = __version__

    def to_dict(self) -> dict:
        return {
            "total_rows": self.total_rows,
            "poisoned_rows": self.poisoned_rows,
            "requested": self.requested,
            "failures": self.failures,
            "replacements": self.replacements,
            "plan": self.plan,
            "tool_version": self.tool_version,
        }


def _plan_echo(plan: PoisonPlan) -> dict:
    return {
        "target_label": plan.target_label,
        "poison_count": plan.poison_count,
        "trigger": plan.trigger.describe(),
        "master_seed": plan.master_seed,
        "source_split": plan.source_split,
        "exclude_target_class": plan.exclude_target_class,
    }


def _poison_path(rel_path: str) -> str:
    pure = Path(rel_path)
    return str(pure.with_name(pure.stem + POISON_SUFFIX))


def _apply_triggers(
    entries,
    candidate_indices,
    needed: int,
    plan: PoisonPlan,
    audio_root: Path,
    workers: int,
):
    """Walk the candidate queue until ``needed`` triggers succeed.

    Failed items (e.g. stretched speech overflowing the clip) are recorded
    and replaced by the next candidates in queue order, which keeps the
    final poisoned count exact and the whole procedure deterministic.
    """
    successes: list[tuple[int, object, object]] = []
    failures: list[dict] = []
    cursor = 0
    while len(successes) < needed and cursor < len(candidate_indices):
        want = needed - len(successes)
        wave = candidate_indices[cursor : cursor + want]
        cursor += len(wave)
        batch_items = [
            (entries[i].path, read_wav(audio_root / entries[i].path)) for i in wave
        ]
        batch = trigger_batch(
            batch_items, plan.trigger, plan.master_seed, workers=workers
        )
        by_path = {entries[i].path: i for i in wave}
        for item_id, clip, report in batch.items:
            successes.append((by_path[item_id], clip, report))
        for err in batch.errors:
            failures.append({"path": err.item_id, "error": err.error})
    return successes, failures


def poison_dataset(
    entries,
    plan: PoisonPlan,
    audio_root,
    out_root,
    workers: int = 1,
    encoding: str = "float32",
) -> tuple[list[ManifestEntry], PoisonReport]:
    """Build the poisoned manifest: exact count, train split only, seeded.

    Poisoned audio is written under ``out_root`` mirroring each source's
    relative path with a ``.poison.wav`` name; clean rows and their audio
    files are not touched.  Eligible rows are train-split rows that are not
    already poisoned and (by default) not labelled with the target class;
    val-tagged and test rows are never eligible.
    """
    entries = list(entries)
    audio_root = Path(audio_root)
    out_root = Path(out_root)
    eligible = [
        i
        for i, e in enumerate(entries)
        if e.split == plan.source_split
        and not e.poisoned
        and not (plan.exclude_target_class and e.label == plan.target_label)
    ]
    if plan.poison_count > len(eligible):
        raise NotEnoughEligibleError(
            f"requested {plan.poison_count} poisoned rows, "
            f"only {len(eligible)} eligible"
        )

    rng = np.random.Generator(
        np.random.Philox(key=derive_seed(plan.master_seed, "poison-selection"))
    )
    queue = [eligible[j] for j in rng.permutation(len(eligible))]
    successes, failures = _apply_triggers(
        entries, queue, plan.poison_count, plan, audio_root, workers
    )
    if len(successes) < plan.poison_count:
        raise NotEnoughEligibleError(
            f"eligibility exhausted at {len(successes)} of "
            f"{plan.poison_count} requested ({len(failures)} trigger failures)"
        )

    result = [dataclasses.replace(e) for e in entries]
    for index, clip, _report in successes:
        source = entries[index]
        rel = _poison_path(source.path)
        target_file = out_root / rel
        target_file.parent.mkdir(parents=True, exist_ok=True)
        write_wav(clip, target_file, encoding=encoding)
        result[index] = ManifestEntry(
            path=rel,
            label=plan.target_label,
            split=source.split,
            poisoned=True,
            orig_label=source.label,
            trigger_desc=plan.trigger.describe(),
            item_seed=derive_seed(plan.master_seed, source.path),
        )
    log.info(
        "poisoned %d/%d rows (%d trigger failures resampled)",
        len(successes),
        len(entries),
        len(failures),
    )
    report = PoisonReport(
        total_rows=len(result),
        poisoned_rows=len(successes),
        requested=plan.poison_count,
        failures=failures,
        replacements=len(failures),
        plan=_plan_echo(plan),
    )
    return result, report


def make_attack_testset(
    entries,
    plan: PoisonPlan,
    audio_root,
    out_root,
    workers: int = 1,
    encoding: str = "float32",
) -> tuple[list[ManifestEntry], PoisonReport]:
    """Trigger every non-target test row and relabel it to the target.

    This is the set an external trainer scores the trigger's hit rate on;
    the clean test rows stay in the original manifest untouched.  Items the
    trigger cannot process (overflow under the error policy) are reported
    and left out.
    """
    entries = list(entries)
    audio_root = Path(audio_root)
    out_root = Path(out_root)
    candidates = [
        i
        for i, e in enumerate(entries)
        if e.split == "test" and not e.poisoned and e.label != plan.target_label
    ]
    successes, failures = _apply_triggers(
        entries, candidates, len(candidates), plan, audio_root, workers
    )
    successes.sort(key=lambda item: item[0])

    attack_entries = []
    for index, clip, _report in successes:
        source = entries[index]
        rel = _poison_path(source.path)
        target_file = out_root / rel
        target_file.parent.mkdir(parents=True, exist_ok=True)
        write_wav(clip, target_file, encoding=encoding)
        attack_entries.append(
            ManifestEntry(
                path=rel,
                label=plan.target_label,
                split="test",
                poisoned=True,
                orig_label=source.label,
                trigger_desc=plan.trigger.describe(),
                item_seed=derive_seed(plan.master_seed, source.path),
            )
        )
    report = PoisonReport(
        total_rows=len(attack_entries),
        poisoned_rows=len(attack_entries),
        requested=len(candidates),
        failures=failures,
        replacements=0,
        plan=_plan_echo(plan),
    )
    return attack_entries, report
