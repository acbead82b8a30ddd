"""Tests for the binary matrix container."""

import numpy as np
import pytest

from stringcat import matio
from stringcat.errors import ConfigError


class TestBinaryMatrix:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(0)
        mat = rng.random((7, 3))
        path = tmp_path / "m.bin"
        matio.write_matrix(path, mat, matio.MAGIC_ENCODED)
        again = matio.read_matrix(path, matio.MAGIC_ENCODED)
        np.testing.assert_array_equal(mat, again)

    def test_layout_is_header_plus_row_major_f64(self, tmp_path):
        mat = np.array([[1.0, 2.0], [3.0, 4.0]])
        path = tmp_path / "m.bin"
        matio.write_matrix(path, mat, matio.MAGIC_TOPICS)
        raw = path.read_bytes()
        assert raw[:4] == b"GPF1"
        assert raw[4:12] == (2).to_bytes(4, "little") * 2
        assert np.frombuffer(raw[12:], dtype="<f8").tolist() == [1.0, 2.0, 3.0, 4.0]

    def test_wrong_magic_rejected(self, tmp_path):
        path = tmp_path / "m.bin"
        matio.write_matrix(path, np.ones((1, 1)), matio.MAGIC_ENCODED)
        with pytest.raises(ConfigError, match="magic"):
            matio.read_matrix(path, matio.MAGIC_TOPICS)

    def test_truncated_payload_rejected(self, tmp_path):
        path = tmp_path / "m.bin"
        matio.write_matrix(path, np.ones((2, 2)), matio.MAGIC_ENCODED)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ConfigError, match="truncated"):
            matio.read_matrix(path, matio.MAGIC_ENCODED)

    def test_non_2d_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            matio.write_matrix(tmp_path / "m.bin", np.ones(3), matio.MAGIC_ENCODED)
