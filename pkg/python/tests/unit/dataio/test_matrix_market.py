"""Tests for the MatrixMarket reader."""

import hashlib

import numpy as np
import pytest

from radproj.dataio import DataFormatError, read_matrix_market


def test_coordinate_real(fixtures):
    """A general coordinate file loads with 0-based positions."""
    dataset = read_matrix_market(fixtures / "coordinate_real.mtx")
    assert dataset.name == "coordinate_real"
    assert (dataset.rows, dataset.cols) == (2, 2)
    assert np.array_equal(dataset.matrix.toarray(), [[3.0, 0.0], [0.0, 4.0]])
    assert dataset.column_nnz().tolist() == [1, 1]


def test_checksum_covers_raw_bytes(fixtures):
    """The checksum is the SHA-256 of the file."""
    path = fixtures / "coordinate_real.mtx"
    dataset = read_matrix_market(path, name="diag")
    assert dataset.name == "diag"
    assert dataset.checksum == hashlib.sha256(path.read_bytes()).hexdigest()
    assert dataset.path == str(path)


def test_pattern_values_default_to_one(fixtures):
    """Pattern files carry positions only."""
    dataset = read_matrix_market(fixtures / "pattern.mtx")
    assert np.array_equal(dataset.matrix.toarray(), [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    assert dataset.column_nnz().tolist() == [2, 1]


def test_duplicates_are_summed_and_zeros_dropped(fixtures):
    """Repeated coordinates add up; stored zeros are counted and dropped."""
    dataset = read_matrix_market(fixtures / "duplicates.mtx")
    assert np.array_equal(dataset.matrix.toarray(), [[3.0, 0.0], [0.0, 0.0]])
    assert dataset.matrix.nnz == 1
    assert dataset.explicit_zeros == 1
    assert dataset.nonzero_columns() == [0]


def test_dense_array(fixtures):
    """Array files are read in column-major order."""
    dataset = read_matrix_market(fixtures / "array.mtx")
    assert (dataset.rows, dataset.cols) == (2, 3)
    assert np.array_equal(dataset.column(0), [1.0, 0.0])
    assert np.array_equal(dataset.column(1), [2.0, 3.0])
    assert np.array_equal(dataset.column(2), [0.0, 0.0])
    assert dataset.explicit_zeros == 3
    assert dataset.column_nnz().tolist() == [1, 2, 0]


def test_symmetric_expansion(fixtures):
    """Lower-triangle entries are mirrored."""
    dataset = read_matrix_market(fixtures / "symmetric.mtx")
    assert np.array_equal(
        dataset.matrix.toarray(),
        [[2.0, 1.0, 0.0], [1.0, 0.0, -1.0], [0.0, -1.0, 0.0]],
    )


def test_skew_symmetric_expansion(fixtures):
    """Mirrored entries change sign."""
    dataset = read_matrix_market(fixtures / "skew_symmetric.mtx")
    assert np.array_equal(dataset.matrix.toarray(), [[0.0, -5.0], [5.0, 0.0]])


def test_toy_dataset_columns(fixtures):
    """The toy matrix has a flat, a spread and a zero column."""
    dataset = read_matrix_market(fixtures / "toy.mtx")
    assert (dataset.rows, dataset.cols) == (4, 3)
    assert dataset.column_nnz().tolist() == [4, 2, 0]
    assert np.array_equal(dataset.column(1), [3.0, 4.0, 0.0, 0.0])
    assert len(dataset.columns()) == 3
    with pytest.raises(IndexError):
        dataset.column(3)


@pytest.mark.parametrize(
    "name, line, column, message",
    [
        ("bad_banner.mtx", 1, None, "malformed banner"),
        ("complex.mtx", 1, None, "unsupported field 'complex'"),
        ("integer.mtx", 1, None, "unsupported field 'integer'"),
        ("out_of_range.mtx", 4, None, "out of range"),
        ("non_numeric.mtx", 4, 3, "non-numeric value 'abc'"),
        ("truncated.mtx", 4, None, "expected 3 entries, found 2"),
    ],
)
def test_corrupted_fixtures_are_located(fixtures, name, line, column, message):
    """Every corrupted fixture fails with its line and, where known, column."""
    with pytest.raises(DataFormatError, match=message) as info:
        read_matrix_market(fixtures / name)
    assert info.value.line == line
    assert info.value.column == column
    assert str(info.value).startswith(f"{fixtures / name}:{line}: ")


@pytest.mark.parametrize(
    "content, line, message",
    [
        ("", 1, "empty file"),
        ("%%MatrixMarket matrix coordinate real general\n% only comments\n", 2, "missing size line"),
        ("%%MatrixMarket matrix coordinate real general\n2 2\n", 2, "malformed size line"),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n2 2 1\n", 4, "more than 1 entries"),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1\n", 3, "expected 3 fields"),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 inf\n", 3, "non-finite"),
        ("%%MatrixMarket matrix coordinate real general\n2 x 1\n", 2, "non-integer index"),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1\n", 3, "above the diagonal"),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1\n", 2, "must be square"),
        ("%%MatrixMarket matrix array pattern general\n2 2\n", 1, "requires coordinate"),
        ("%%MatrixMarket matrix coordinate real hermitian\n2 2 1\n", 1, "unsupported symmetry"),
        ("%%MatrixMarket tensor coordinate real general\n", 1, "malformed banner"),
    ],
)
def test_malformed_files(tmp_path, content, line, message):
    """Structural errors point at the offending line."""
    path = tmp_path / "bad.mtx"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(DataFormatError, match=message) as info:
        read_matrix_market(path)
    assert info.value.line == line


def test_comments_and_blank_lines_between_entries(tmp_path):
    """Comment and blank lines are ignored anywhere after the banner."""
    path = tmp_path / "commented.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real general\n"
        "% header comment\n"
        "\n"
        "3 1 2\n"
        "1 1 0.5\n"
        "% between entries\n"
        "\n"
        "3 1 -2e0\n",
        encoding="utf-8",
    )
    dataset = read_matrix_market(path)
    assert np.array_equal(dataset.column(0), [0.5, 0.0, -2.0])


def test_banner_is_case_insensitive(tmp_path):
    """Banner keywords may be upper case."""
    path = tmp_path / "upper.mtx"
    path.write_text("%%MatrixMarket MATRIX Coordinate Real General\n1 1 1\n1 1 7\n", encoding="utf-8")
    assert read_matrix_market(path).matrix.toarray().tolist() == [[7.0]]


def test_missing_file_raises_os_error(tmp_path):
    """Missing files surface as OSError."""
    with pytest.raises(OSError):
        read_matrix_market(tmp_path / "absent.mtx")
