"""Exception types shared across the package."""


class RhythmPoisonError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedFormatError(RhythmPoisonError):
    """Audio or container format outside the accepted set."""


class SampleRateMismatchError(RhythmPoisonError):
    """File sample rate differs from the required 16 kHz (no resampling)."""


class InvariantViolationError(RhythmPoisonError):
    """A domain object failed its own validity checks."""


class ConfigMismatchError(RhythmPoisonError):
    """Clip and spectrogram configuration disagree (e.g. sample rate)."""


class EmptySignalError(RhythmPoisonError):
    """An operation that needs at least one sample received none."""


class DimensionMismatchError(RhythmPoisonError):
    """Two spectrograms with different mel-bin counts were compared."""


class RegionMismatchError(RhythmPoisonError):
    """A detected region does not fit the spectrogram it is applied to."""


class TriggerOverflowError(RhythmPoisonError):
    """Transformed audio is longer than the original clip it must replace."""


class ManifestParseError(RhythmPoisonError):
    """Malformed manifest CSV; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicatePathError(RhythmPoisonError):
    """The same audio path appears twice in one manifest."""


class EmptyClassError(RhythmPoisonError):
    """Dataset splitting requires at least one entry per labelled class."""


class AlreadySplitError(RhythmPoisonError):
    """Split assignment was requested for entries that already carry one."""


class NotEnoughEligibleError(RhythmPoisonError):
    """Fewer eligible entries than the requested poison count."""
