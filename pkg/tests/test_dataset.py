import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolfc.dataset import (
    Dataset,
    DatasetError,
    dump_dataset,
    inject_noise,
    load_dataset,
    unique_count,
)


def load(text: str) -> Dataset:
    return load_dataset(io.StringIO(text))


def test_minimal_well_formed():
    d = load("a,b\n1,0\n0,1\n")
    assert d.n == 2 and d.k == 2
    assert d.feature_names == ("a", "b")
    assert d.column("a").tolist() == [True, False]


def test_crlf_and_bytes_input():
    d = load_dataset(b"a,b\r\n1,0\r\n0,1\r\n")
    assert d.n == 2 and d.k == 2


def test_duplicate_name_rejected():
    with pytest.raises(DatasetError, match="duplicate"):
        load("a,a\n1,0\n")


def test_non_binary_cell_reports_line():
    with pytest.raises(DatasetError, match="line 2.*non-binary"):
        load("a,b\n1,2\n")


def test_ragged_row_reports_line():
    with pytest.raises(DatasetError, match="line 3"):
        load("a,b\n1,0\n1\n")


def test_empty_name_rejected():
    with pytest.raises(DatasetError):
        load("a,\n1,0\n")


def test_invalid_identifier_rejected():
    with pytest.raises(DatasetError, match="invalid"):
        load("a,b c\n1,0\n")


def test_needs_two_features():
    with pytest.raises(DatasetError):
        load("a\n1\n")


def test_needs_one_row():
    with pytest.raises(DatasetError):
        load("a,b\n")


def test_row_and_column_views_agree():
    d = load("a,b,c\n1,0,1\n0,1,1\n")
    for j, name in enumerate(d.feature_names):
        assert np.array_equal(d.column(name), d.matrix[:, j])


@given(
    st.integers(1, 20),
    st.integers(2, 6),
    st.randoms(use_true_random=False),
)
@settings(max_examples=50, deadline=None)
def test_roundtrip_identity(n, k, rnd):
    names = [f"f{i}" for i in range(k)]
    matrix = np.array(
        [[rnd.random() < 0.5 for _ in range(k)] for _ in range(n)], dtype=bool
    )
    d = Dataset(names, matrix)
    buf = io.StringIO()
    dump_dataset(d, buf)
    d2 = load(buf.getvalue())
    assert d2 == d


def test_unique_count_examples():
    # rows {10, 10, 01} -> 2 (hash-set oracle)
    d = load("a,b\n1,0\n1,0\n0,1\n")
    assert unique_count(d) == 2
    assert unique_count(d) == len({tuple(r) for r in d.matrix.tolist()})
    # all identical -> 1; all distinct -> n
    d_same = load("a,b\n1,1\n1,1\n1,1\n")
    assert unique_count(d_same) == 1
    d_diff = load("a,b\n0,0\n0,1\n1,0\n1,1\n")
    assert unique_count(d_diff) == 4


def test_unique_count_row_permutation_invariant():
    rng = np.random.default_rng(0)
    matrix = rng.random((30, 3)) < 0.5
    d = Dataset(["a", "b", "c"], matrix)
    shuffled = Dataset(["a", "b", "c"], matrix[rng.permutation(30)])
    assert unique_count(d) == unique_count(shuffled)
    assert unique_count(d) <= d.n


def test_inject_noise_zero_is_identity():
    d = load("a,b\n1,0\n0,1\n")
    assert inject_noise(d, 0.0, seed=1) == d


def test_inject_noise_exact_flip_count():
    # pct=0.10, k=13, n=264 -> round(343.2) = 343 cells differ
    rng = np.random.default_rng(42)
    d = Dataset([f"f{i}" for i in range(13)], rng.random((264, 13)) < 0.5)
    noised = inject_noise(d, 0.10, seed=7)
    assert int(np.count_nonzero(noised.matrix != d.matrix)) == 343


def test_inject_noise_deterministic():
    rng = np.random.default_rng(5)
    d = Dataset(["a", "b", "c"], rng.random((50, 3)) < 0.5)
    assert inject_noise(d, 0.2, seed=9) == inject_noise(d, 0.2, seed=9)


def test_inject_noise_double_flip_restores():
    rng = np.random.default_rng(5)
    d = Dataset(["a", "b", "c"], rng.random((50, 3)) < 0.5)
    once = inject_noise(d, 0.3, seed=11)
    # re-flipping the same cells (same seed, same grid) restores the original
    twice = inject_noise(once, 0.3, seed=11)
    assert twice == d


def test_inject_noise_rejects_out_of_range():
    d = load("a,b\n1,0\n")
    with pytest.raises(ValueError):
        inject_noise(d, 1.5, seed=0)
    with pytest.raises(ValueError):
        inject_noise(d, -0.1, seed=0)


def test_dataset_immutable():
    d = load("a,b\n1,0\n")
    with pytest.raises(ValueError):
        d.matrix[0, 0] = False
