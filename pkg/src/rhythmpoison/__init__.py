"""Speech-rhythm trigger tooling.

Stretch or squeeze the rhythm of an utterance on its mel spectrogram,
rebuild audio of unchanged duration, and assemble dirty-label poisoned
datasets with exact, reproducible poison counts.
"""

__version__ = "0.1.0"

from .audio_io import AudioClip, read_wav, write_wav
from .errors import (
    AlreadySplitError,
    ConfigMismatchError,
    DimensionMismatchError,
    DuplicatePathError,
    EmptyClassError,
    EmptySignalError,
    InvariantViolationError,
    ManifestParseError,
    NotEnoughEligibleError,
    RegionMismatchError,
    RhythmPoisonError,
    SampleRateMismatchError,
    TriggerOverflowError,
    UnsupportedFormatError,
)
from .poisoning import (
    ManifestEntry,
    PoisonPlan,
    PoisonReport,
    load_manifest,
    make_attack_testset,
    poison_dataset,
    save_manifest,
    split_dataset,
)
from .rhythm import (
    SqueezeParams,
    StretchParams,
    expected_length,
    squeeze,
    stretch,
    stretch_selection,
)
from .seeding import derive_seed
from .spectrogram import (
    MelSpectrogram,
    SpectrogramConfig,
    log_spectral_distance,
    mel_analyze,
    mel_center_frequencies,
    mel_filterbank,
    mel_invert,
    read_mel,
    write_mel,
)
from .trigger import (
    BatchItemError,
    BatchResult,
    TriggerReport,
    TriggerSpec,
    apply_trigger,
    trigger_batch,
)
from .vad import VadResult, detect_active_region, frame_energies, split_by_region

__all__ = [
    "AudioClip",
    "AlreadySplitError",
    "BatchItemError",
    "BatchResult",
    "ConfigMismatchError",
    "DimensionMismatchError",
    "DuplicatePathError",
    "EmptyClassError",
    "EmptySignalError",
    "InvariantViolationError",
    "ManifestEntry",
    "ManifestParseError",
    "MelSpectrogram",
    "NotEnoughEligibleError",
    "PoisonPlan",
    "PoisonReport",
    "RegionMismatchError",
    "RhythmPoisonError",
    "SampleRateMismatchError",
    "SpectrogramConfig",
    "SqueezeParams",
    "StretchParams",
    "TriggerOverflowError",
    "TriggerReport",
    "TriggerSpec",
    "UnsupportedFormatError",
    "VadResult",
    "apply_trigger",
    "derive_seed",
    "detect_active_region",
    "expected_length",
    "frame_energies",
    "load_manifest",
    "log_spectral_distance",
    "make_attack_testset",
    "mel_analyze",
    "mel_center_frequencies",
    "mel_filterbank",
    "mel_invert",
    "poison_dataset",
    "read_mel",
    "read_wav",
    "save_manifest",
    "split_by_region",
    "split_dataset",
    "squeeze",
    "stretch",
    "stretch_selection",
    "trigger_batch",
    "write_mel",
    "write_wav",
]
