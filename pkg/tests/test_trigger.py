import numpy as np
import pytest

from rhythmpoison import (
    AudioClip,
    SqueezeParams,
    StretchParams,
    TriggerOverflowError,
    TriggerSpec,
    apply_trigger,
    derive_seed,
    mel_analyze,
    detect_active_region,
    trigger_batch,
)

from conftest import SR, tone_burst_clip


def stretch_spec(gamma=1.0, sigma=1, seed=0, **kwargs):
    return TriggerSpec(
        mode="stretch", stretch=StretchParams(gamma, sigma, seed=seed), **kwargs
    )


def squeeze_spec(phi=2, w=0.6, **kwargs):
    return TriggerSpec(mode="squeeze", squeeze=SqueezeParams(phi, w), **kwargs)


def test_duration_preserved_and_silence_pure():
    clip = tone_burst_clip(lead=0.30, burst=0.25)
    for spec in [stretch_spec(1.0), stretch_spec(0.5), squeeze_spec(2), squeeze_spec(3)]:
        out, report = apply_trigger(clip, spec)
        assert out.samples.size == clip.samples.size == SR
        assert not report.overflowed
        assert np.all(out.samples[: report.placed_offset] == 0.0)
        assert np.all(out.samples[report.placed_offset + report.inverted_samples :] == 0.0)


def test_report_arithmetic_consistent():
    clip = tone_burst_clip(lead=0.20, burst=0.30)
    out, report = apply_trigger(clip, stretch_spec(1.0, seed=3))
    assert report.input_frames == 63
    active = report.active_end - report.active_start + 1
    assert report.transformed_active_frames == 2 * active
    assert report.inverted_samples == (report.transformed_active_frames - 1) * 256
    lead = report.active_start
    trail = report.input_frames - 1 - report.active_end
    gap = clip.samples.size - report.inverted_samples
    assert report.placed_offset == int(round(gap * lead / (lead + trail)))
    assert report.output_samples == clip.samples.size


def test_squeeze_shrinks_and_never_overflows():
    clip = tone_burst_clip(lead=0.0, burst=1.0)  # fully voiced
    out, report = apply_trigger(clip, squeeze_spec(2))
    assert out.samples.size == clip.samples.size
    assert not report.overflowed


def test_stretch_overflow_raises_by_default():
    clip = tone_burst_clip(lead=0.0, burst=1.0)
    with pytest.raises(TriggerOverflowError):
        apply_trigger(clip, stretch_spec(1.0))


def test_stretch_overflow_emit_long_policy():
    clip = tone_burst_clip(lead=0.0, burst=1.0)
    out, report = apply_trigger(
        clip, stretch_spec(1.0, overflow_policy="emit_long")
    )
    assert report.overflowed
    assert out.samples.size == report.inverted_samples == 125 * 256
    assert out.samples.size > clip.samples.size


def test_poisoned_clip_vad_lands_inside_placed_region():
    clip = tone_burst_clip(lead=0.40, burst=0.22, freq=700.0)
    out, report = apply_trigger(clip, squeeze_spec(2))
    vad = detect_active_region(mel_analyze(out))
    lo = report.placed_offset // 256 - 2
    hi = (report.placed_offset + report.inverted_samples) // 256 + 2
    assert lo <= vad.start_frame <= vad.end_frame <= hi


def test_trigger_spec_validation():
    with pytest.raises(ValueError):
        TriggerSpec(mode="stretch")
    with pytest.raises(ValueError):
        TriggerSpec(mode="squeeze", stretch=StretchParams(0.5))
    with pytest.raises(ValueError):
        TriggerSpec(
            mode="stretch",
            stretch=StretchParams(0.5),
            squeeze=SqueezeParams(2),
        )
    with pytest.raises(ValueError):
        TriggerSpec(mode="warp", stretch=StretchParams(0.5))
    with pytest.raises(ValueError):
        stretch_spec(0.5, mu=1.0)
    with pytest.raises(ValueError):
        stretch_spec(0.5, gl_iterations=0)
    with pytest.raises(ValueError):
        stretch_spec(0.5, overflow_policy="maybe")


def test_trigger_spec_describe_and_seed_replacement():
    spec = stretch_spec(1.0, seed=5)
    assert spec.describe() == "stretch(gamma_s=1.0,sigma_s=1);mu=0.85;gl=60"
    reseeded = spec.with_seed(99)
    assert reseeded.stretch.seed == 99
    assert reseeded.describe() == spec.describe()  # seed not part of the family
    sq = squeeze_spec(3, 0.6)
    assert sq.describe() == "squeeze(phi_c=3,w=0.6);mu=0.85;gl=60"
    assert sq.with_seed(42) is sq


def test_batch_empty():
    result = trigger_batch([], stretch_spec(1.0), master_seed=1)
    assert result.items == [] and result.errors == []


def test_batch_requires_unique_ids():
    clip = tone_burst_clip()
    with pytest.raises(ValueError):
        trigger_batch([("a", clip), ("a", clip)], squeeze_spec(2), master_seed=1)


def test_batch_deterministic_and_order_independent():
    clips = [
        (f"item{i}", tone_burst_clip(freq=400 + 30 * i, lead=0.2 + 0.02 * i))
        for i in range(6)
    ]
    spec = stretch_spec(0.5, gl_iterations=4)
    first = trigger_batch(clips, spec, master_seed=42)
    second = trigger_batch(clips, spec, master_seed=42)
    assert not first.errors and not second.errors
    for (id_a, clip_a, _), (id_b, clip_b, _) in zip(first.items, second.items):
        assert id_a == id_b
        assert np.array_equal(clip_a.samples, clip_b.samples)
    reordered = trigger_batch(list(reversed(clips)), spec, master_seed=42)
    by_id = {i: c for i, c, _ in reordered.items}
    for item_id, clip_out, _ in first.items:
        assert np.array_equal(by_id[item_id].samples, clip_out.samples)


def test_batch_parallel_matches_serial():
    clips = [
        (f"clip{i}", tone_burst_clip(freq=350 + 40 * i, burst=0.22)) for i in range(5)
    ]
    spec = stretch_spec(1.0, gl_iterations=4)
    serial = trigger_batch(clips, spec, master_seed=7, workers=1)
    parallel = trigger_batch(clips, spec, master_seed=7, workers=3)
    assert [i for i, _, _ in serial.items] == [i for i, _, _ in parallel.items]
    for (_, a, _), (_, b, _) in zip(serial.items, parallel.items):
        assert np.array_equal(a.samples, b.samples)


def test_batch_collects_errors_without_aborting():
    good = tone_burst_clip(lead=0.3, burst=0.25)
    overflowing = tone_burst_clip(lead=0.0, burst=1.0)
    empty = AudioClip(np.zeros(0, dtype=np.float32), SR)
    result = trigger_batch(
        [("good", good), ("full", overflowing), ("empty", empty)],
        stretch_spec(1.0, gl_iterations=4),
        master_seed=3,
    )
    assert [i for i, _, _ in result.items] == ["good"]
    failed = {e.item_id: e.error for e in result.errors}
    assert "TriggerOverflowError" in failed["full"]
    assert "EmptySignalError" in failed["empty"]


def test_per_item_seed_changes_selection():
    # two different ids must (with overwhelming probability) stretch differently
    clip = tone_burst_clip(burst=0.3)
    spec = stretch_spec(0.5, gl_iterations=2)
    result = trigger_batch([("a", clip), ("b", clip)], spec, master_seed=0)
    (_, out_a, _), (_, out_b, _) = result.items
    assert derive_seed(0, "a") != derive_seed(0, "b")
    assert not np.array_equal(out_a.samples, out_b.samples)


def test_derive_seed_is_frozen_contract():
    # pinned values guard the documented SHA-256 derivation
    assert derive_seed(0, "a") == 0x6948504A5C8BFED7
    assert derive_seed(42, "yes/yes_0001.wav") == 0x92EA880A13F288B2
    assert derive_seed(2**64 - 1, "") == 0x5DCE615644AEA312
