"""The end-to-end trigger: analyse, transform the active span, invert, re-pad.

A clean clip goes through four steps: locate the active speech region,
stretch or squeeze its frames, reconstruct audio from the transformed
frames, then place that audio inside digital silence so the output has
exactly the original sample count.  Original non-speech content is
discarded, never copied into the output.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .audio_io import AudioClip
from .errors import TriggerOverflowError
from .rhythm import SqueezeParams, StretchParams, squeeze, stretch
from .seeding import derive_seed
from .spectrogram import MelSpectrogram, SpectrogramConfig, mel_analyze, mel_invert
from .vad import detect_active_region, split_by_region

MODE_STRETCH = "stretch"
MODE_SQUEEZE = "squeeze"

OVERFLOW_ERROR = "error"
OVERFLOW_EMIT_LONG = "emit_long"


@dataclass(frozen=True)
class TriggerSpec:
    """Which transform to run and how, plus detection/inversion knobs."""

    mode: str
    stretch: StretchParams | None = None
    squeeze: SqueezeParams | None = None
    mu: float = 0.85
    gl_iterations: int = 60
    overflow_policy: str = OVERFLOW_ERROR

    def __post_init__(self):
        if self.mode not in (MODE_STRETCH, MODE_SQUEEZE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == MODE_STRETCH and (
            self.stretch is None or self.squeeze is not None
        ):
            raise ValueError("stretch mode requires stretch params only")
        if self.mode == MODE_SQUEEZE and (
            self.squeeze is None or self.stretch is not None
        ):
            raise ValueError("squeeze mode requires squeeze params only")
        if not 0.0 < self.mu < 1.0:
            raise ValueError(f"mu must be in (0, 1), got {self.mu}")
        if self.gl_iterations < 1:
            raise ValueError("gl_iterations must be >= 1")
        if self.overflow_policy not in (OVERFLOW_ERROR, OVERFLOW_EMIT_LONG):
            raise ValueError(f"unknown overflow policy {self.overflow_policy!r}")

    def with_seed(self, seed: int) -> "TriggerSpec":
        """Copy with the stretch selection seed replaced; no-op for squeeze."""
        if self.mode != MODE_STRETCH:
            return self
        return dataclasses.replace(
            self, stretch=dataclasses.replace(self.stretch, seed=seed)
        )

    def describe(self) -> str:
        """Canonical one-line encoding, stable across runs (seed excluded)."""
        if self.mode == MODE_STRETCH:
            params = f"gamma_s={self.stretch.gamma_s!r},sigma_s={self.stretch.sigma_s}"
        else:
            params = f"phi_c={self.squeeze.phi_c},w={self.squeeze.w!r}"
        return f"{self.mode}({params});mu={self.mu!r};gl={self.gl_iterations}"


@dataclass
class TriggerReport:
    """Audit trail of one trigger application."""

    input_frames: int
    active_start: int
    active_end: int
    transformed_active_frames: int
    inverted_samples: int
    placed_offset: int
    output_samples: int
    overflowed: bool

    def to_dict(self) -> dict:
        return {
            "input_frames": self.input_frames,
            "active_region": [self.active_start, self.active_end],
            "transformed_active_frames": self.transformed_active_frames,
            "inverted_samples": self.inverted_samples,
            "placed_offset": self.placed_offset,
            "output_samples": self.output_samples,
            "overflowed": self.overflowed,
        }


def apply_trigger(
    clip: AudioClip,
    trigger: TriggerSpec,
    config: SpectrogramConfig | None = None,
) -> tuple[AudioClip, TriggerReport]:
    """Poison one clip; the output has exactly the input's sample count.

    Raises TriggerOverflowError when the transformed speech is longer than
    the whole original clip, unless the policy says to emit the long clip.
    """
    config = config or SpectrogramConfig()
    clip.validate()
    spec_in = mel_analyze(clip, config)
    vad = detect_active_region(spec_in, trigger.mu)
    lead, active, trail = split_by_region(spec_in, vad)
    if trigger.mode == MODE_STRETCH:
        transformed = stretch(active, trigger.stretch)
    else:
        transformed = squeeze(active, trigger.squeeze)
    audio = mel_invert(transformed, trigger.gl_iterations)

    total = clip.samples.size
    produced = audio.samples.size
    if produced > total:
        if trigger.overflow_policy == OVERFLOW_ERROR:
            raise TriggerOverflowError(
                f"transformed speech is {produced} samples, original clip "
                f"only {total}"
            )
        output = audio
        placed_offset = 0
    else:
        if lead + trail > 0:
            placed_offset = int(round((total - produced) * lead / (lead + trail)))
        else:
            placed_offset = (total - produced) // 2
        samples = np.zeros(total, dtype=np.float32)
        samples[placed_offset : placed_offset + produced] = audio.samples
        output = AudioClip(samples, clip.sample_rate)

    report = TriggerReport(
        input_frames=spec_in.frame_count,
        active_start=vad.start_frame,
        active_end=vad.end_frame,
        transformed_active_frames=transformed.frame_count,
        inverted_samples=produced,
        placed_offset=placed_offset,
        output_samples=output.samples.size,
        overflowed=produced > total,
    )
    return output, report


@dataclass
class BatchItemError:
    item_id: str
    error: str


@dataclass
class BatchResult:
    """Successful items in input order plus the per-item failures."""

    items: list[tuple[str, AudioClip, TriggerReport]]
    errors: list[BatchItemError]


def _run_batch_item(task):
    item_id, clip, trigger, config = task
    try:
        output, report = apply_trigger(clip, trigger, config)
        return item_id, output, report, None
    except Exception as exc:  # collected, batch keeps going
        return item_id, None, None, f"{type(exc).__name__}: {exc}"


def trigger_batch(
    items,
    trigger: TriggerSpec,
    master_seed: int,
    workers: int = 1,
    config: SpectrogramConfig | None = None,
) -> BatchResult:
    """Apply the trigger to (id, clip) pairs with per-item derived seeds.

    Each item's stretch seed is derive_seed(master_seed, id), so the result
    is bit-identical whatever the worker count or processing order.
    Failures are collected, not raised.
    """
    items = list(items)
    ids = [item_id for item_id, _ in items]
    if len(set(ids)) != len(ids):
        raise ValueError("batch item ids must be unique")
    tasks = [
        (item_id, clip, trigger.with_seed(derive_seed(master_seed, item_id)), config)
        for item_id, clip in items
    ]
    if workers <= 1 or len(tasks) <= 1:
        outcomes = [_run_batch_item(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(tasks) // (workers * 4))
            outcomes = list(pool.map(_run_batch_item, tasks, chunksize=chunk))

    result = BatchResult(items=[], errors=[])
    for item_id, output, report, error in outcomes:
        if error is None:
            result.items.append((item_id, output, report))
        else:
            result.errors.append(BatchItemError(item_id=item_id, error=error))
    return result
