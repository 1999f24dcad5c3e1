import numpy as np
import pytest

from ksexplain.datagen import SynthSpec, sliding_windows, synth_drift, synth_failed, write_csv
from ksexplain.errors import InvalidFraction, InvalidWindow, SeriesTooShort
from ksexplain.io import read_column
from ksexplain.kstest import ks_test


def test_windows_index_arithmetic():
    pairs = list(sliding_windows(range(1, 11), 3, 3))
    assert [p.offset for p in pairs] == [0, 3]
    assert pairs[0].reference.values.tolist() == [1, 2, 3]
    assert pairs[0].test.values.tolist() == [4, 5, 6]
    assert pairs[1].reference.values.tolist() == [4, 5, 6]
    assert pairs[1].test.values.tolist() == [7, 8, 9]


@pytest.mark.parametrize("stride", [1, 2, 5, 100])
def test_exact_length_gives_one_pair(stride):
    assert len(list(sliding_windows(np.arange(10.0), 5, stride))) == 1


def test_default_stride_and_partition():
    pairs = list(sliding_windows(np.arange(23.0), 4))
    assert [p.offset for p in pairs] == [0, 4, 8, 12]
    for p in pairs:
        idx = set(range(p.offset, p.offset + 4)) | set(range(p.test_offset, p.test_offset + 4))
        assert len(idx) == 8


def test_constant_series_passes():
    for p in sliding_windows([2.5] * 40, 5, 2):
        assert ks_test(p.reference, p.test, 0.05).passed


def test_window_errors():
    with pytest.raises(SeriesTooShort):
        list(sliding_windows(range(5), 3))
    with pytest.raises(InvalidWindow):
        list(sliding_windows(range(50), 1))
    with pytest.raises(InvalidWindow):
        list(sliding_windows(range(50), 3, 0))


def test_synth_shape_and_replacement():
    spec = SynthSpec(w=1000, p=0.03, seed=4)
    R, T = synth_drift(spec)
    assert len(R) == len(T) == 1000
    assert spec.replaced == 30
    assert np.sum(np.abs(T.values) > 5) >= 1  # uniform tails reach where the normal almost never does
    assert np.all(np.abs(T.values) <= 7.0) or np.max(np.abs(T.values)) < 7.5


def test_synth_no_drift():
    R, T = synth_drift(SynthSpec(w=50, p=0.0, seed=1))
    assert len(R) == len(T) == 50


def test_synth_deterministic():
    a = synth_drift(SynthSpec(w=100, p=0.1, seed=9))
    b = synth_drift(SynthSpec(w=100, p=0.1, seed=9))
    assert a[0].values.tobytes() == b[0].values.tobytes()
    assert a[1].values.tobytes() == b[1].values.tobytes()
    c = synth_drift(SynthSpec(w=100, p=0.1, seed=10))
    assert c[1].values.tobytes() != a[1].values.tobytes()


def test_synth_errors():
    with pytest.raises(InvalidFraction):
        synth_drift(SynthSpec(w=100, p=1.5))
    with pytest.raises(InvalidWindow):
        synth_drift(SynthSpec(w=5, p=0.1))


def test_synth_failed_mode():
    R, T, attempt = synth_failed(SynthSpec(w=200, p=0.03, seed=2), alpha=0.05)
    assert ks_test(R, T, 0.05).failed
    again = synth_failed(SynthSpec(w=200, p=0.03, seed=2), alpha=0.05)
    assert again[2] == attempt and again[1].values.tobytes() == T.values.tobytes()


def test_drift_usually_fails():
    # sampled sanity check, reported rather than hard-asserted per draw
    fails = sum(ks_test(*synth_drift(SynthSpec(w=5000, p=0.10, seed=s)), 0.05).failed for s in range(10))
    assert fails >= 8


def test_csv_roundtrip(tmp_path):
    R, _ = synth_drift(SynthSpec(w=30, p=0.1, seed=0))
    path = tmp_path / "r.csv"
    write_csv(path, R.values, header="value")
    col = read_column(path)
    assert col.header == ["value"]
    assert np.array_equal(np.array(col.values), R.values)
