import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.io import wavfile

from rhythmpoison import (
    AudioClip,
    InvariantViolationError,
    SampleRateMismatchError,
    UnsupportedFormatError,
    read_wav,
    write_wav,
)

SR = 16000


def test_read_pcm16_zeros(tmp_path):
    path = tmp_path / "zeros.wav"
    wavfile.write(path, SR, np.zeros(SR, dtype=np.int16))
    clip = read_wav(path)
    assert clip.samples.size == SR
    assert clip.sample_rate == SR
    assert np.all(clip.samples == 0.0)


def test_pcm16_normalization_divisor(tmp_path):
    path = tmp_path / "half.wav"
    wavfile.write(path, SR, np.array([16384], dtype=np.int16))
    assert read_wav(path).samples[0] == 0.5


def test_pcm16_extremes_map_inside_unit_range(tmp_path):
    path = tmp_path / "extremes.wav"
    wavfile.write(path, SR, np.array([-32768, 32767], dtype=np.int16))
    samples = read_wav(path).samples
    assert samples[0] == -1.0
    assert samples[1] == np.float32(32767 / 32768)


def test_stereo_rejected(tmp_path):
    path = tmp_path / "stereo.wav"
    wavfile.write(path, SR, np.zeros((100, 2), dtype=np.int16))
    with pytest.raises(UnsupportedFormatError):
        read_wav(path)


def test_wrong_rate_rejected(tmp_path):
    path = tmp_path / "slow.wav"
    wavfile.write(path, 8000, np.zeros(100, dtype=np.int16))
    with pytest.raises(SampleRateMismatchError):
        read_wav(path)


def test_float64_encoding_rejected(tmp_path):
    path = tmp_path / "f64.wav"
    wavfile.write(path, SR, np.zeros(100, dtype=np.float64))
    with pytest.raises(UnsupportedFormatError):
        read_wav(path)


def test_garbage_file_rejected(tmp_path):
    path = tmp_path / "noise.bin"
    path.write_bytes(b"this is not a wav file at all, not even close")
    with pytest.raises(UnsupportedFormatError):
        read_wav(path)


def test_missing_file_is_io_error(tmp_path):
    with pytest.raises(OSError):
        read_wav(tmp_path / "absent.wav")


def test_float32_round_trip_exact(tmp_path):
    rng = np.random.default_rng(11)
    clip = AudioClip(rng.uniform(-1, 1, 5000).astype(np.float32), SR)
    path = tmp_path / "rt.wav"
    write_wav(clip, path, encoding="float32")
    again = read_wav(path)
    assert np.array_equal(again.samples, clip.samples)
    assert again.sample_rate == clip.sample_rate


def test_pcm16_round_trip_within_one_lsb(tmp_path):
    clip = AudioClip(np.array([0.5, -0.25], dtype=np.float32), SR)
    path = tmp_path / "q.wav"
    write_wav(clip, path, encoding="pcm16")
    again = read_wav(path)
    assert np.max(np.abs(again.samples - clip.samples)) <= 1.0 / 32768.0


@settings(max_examples=50, deadline=None)
@given(
    st.lists(
        st.floats(min_value=-1.0, max_value=1.0, width=32),
        min_size=1,
        max_size=200,
    )
)
def test_pcm16_quantization_bound_property(tmp_path_factory, values):
    clip = AudioClip(np.array(values, dtype=np.float32), SR)
    path = tmp_path_factory.mktemp("pcm") / "p.wav"
    write_wav(clip, path, encoding="pcm16")
    again = read_wav(path)
    assert np.max(np.abs(again.samples - clip.samples)) <= 2.0**-15


def test_nan_sample_rejected(tmp_path):
    clip = AudioClip(np.array([0.0, np.nan], dtype=np.float32), SR)
    with pytest.raises(InvariantViolationError):
        write_wav(clip, tmp_path / "bad.wav")


def test_out_of_range_sample_rejected(tmp_path):
    clip = AudioClip(np.array([1.5], dtype=np.float32), SR)
    with pytest.raises(InvariantViolationError):
        write_wav(clip, tmp_path / "loud.wav")


def test_unknown_encoding_rejected(tmp_path):
    clip = AudioClip(np.zeros(4, dtype=np.float32), SR)
    with pytest.raises(ValueError):
        write_wav(clip, tmp_path / "x.wav", encoding="mp3")


def test_tiny_overshoot_tolerated():
    clip = AudioClip(np.array([1.0000005], dtype=np.float32), SR)
    clip.validate()
