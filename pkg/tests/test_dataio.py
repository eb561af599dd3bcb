import json

import numpy as np
import pytest

from blockcumulants import BlockSymTensor, ValidationError
from blockcumulants.dataio import (
    emit_tensor,
    generate,
    ingest_csv,
    load_tensor,
    random_spd,
    write_csv,
)

from conftest import random_sym_dense


class TestIngestCsv:
    def test_plain_matrix(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n3,4\n5,6\n")
        data = ingest_csv(path)
        assert data.shape == (3, 2)
        np.testing.assert_array_equal(data, [[1, 2], [3, 4], [5, 6]])

    def test_header_skipped(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,b\n1,2\n3,4\n")
        data = ingest_csv(path)
        assert data.shape == (2, 2)

    def test_nan_cell_diagnosed(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n3,NaN\n")
        with pytest.raises(ValidationError, match="row 2, column 2"):
            ingest_csv(path)

    def test_ragged_rows(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(ValidationError, match="row 2"):
            ingest_csv(path)

    def test_non_numeric_cell(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("1,2\n3,zap\n")
        with pytest.raises(ValidationError, match="row 2, column 2"):
            ingest_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("")
        with pytest.raises(ValidationError, match="empty"):
            ingest_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError, match="cannot read"):
            ingest_csv(tmp_path / "nope.csv")

    def test_roundtrip_exact(self, tmp_path, rng):
        data = rng.standard_normal((17, 3)) * 1e-7
        path = tmp_path / "data.csv"
        write_csv(path, data, header=["x", "y", "z"])
        back = ingest_csv(path)
        np.testing.assert_array_equal(back, data)


class TestTensorFiles:
    def test_roundtrip_value_exact(self, tmp_path, rng):
        tensor = BlockSymTensor.from_dense(random_sym_dense(5, 3, rng), b=2)
        path = tmp_path / "tensor.json"
        emit_tensor(tensor, path)
        back = load_tensor(path)
        for key, block in tensor.blocks.items():
            np.testing.assert_array_equal(back.blocks[key], block)

    def test_unsorted_key_rejected(self, tmp_path):
        tensor = BlockSymTensor.zeros(4, 2, 2)
        path = tmp_path / "tensor.json"
        emit_tensor(tensor, path)
        doc = json.loads(path.read_text())
        doc["blocks"][1]["j"] = [2, 1]
        path.write_text(json.dumps(doc))
        with pytest.raises(ValidationError, match="not sorted"):
            load_tensor(path)

    def test_edge_mismatch_rejected(self, tmp_path):
        tensor = BlockSymTensor.zeros(5, 2, 2)
        path = tmp_path / "tensor.json"
        emit_tensor(tensor, path)
        doc = json.loads(path.read_text())
        doc["blocks"][-1]["edges"] = [2, 2]  # final partial block must be 1x1
        path.write_text(json.dumps(doc))
        with pytest.raises(ValidationError, match="edges"):
            load_tensor(path)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "tensor.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError, match="JSON"):
            load_tensor(path)


class TestGenerate:
    def test_reproducible(self):
        a = generate("uniform", 3, 50, seed=42)
        b = generate("uniform", 3, 50, seed=42)
        np.testing.assert_array_equal(a, b)

    def test_distinct_seeds_differ(self):
        a = generate("uniform", 3, 50, seed=1)
        b = generate("uniform", 3, 50, seed=2)
        assert np.max(np.abs(a - b)) > 0

    def test_gaussian_identity_covariance(self):
        from blockcumulants import center
        from blockcumulants.stats import element_std_bound

        x = generate("gaussian", 3, 100_000, seed=5, cov=np.eye(3))
        centered = center(x)
        cov = centered.T @ centered / x.shape[0]
        for i in range(3):
            for j in range(3):
                want = 1.0 if i == j else 0.0
                bound = element_std_bound(centered, (i + 1, j + 1, i + 1, j + 1))
                assert abs(cov[i, j] - want) < bound

    def test_non_spd_covariance_rejected(self):
        bad = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3, -1
        with pytest.raises(ValidationError, match="positive definite"):
            generate("gaussian", 2, 10, cov=bad)

    def test_asymmetric_covariance_rejected(self):
        bad = np.array([[1.0, 0.5], [0.2, 1.0]])
        with pytest.raises(ValidationError, match="symmetric"):
            generate("gaussian", 2, 10, cov=bad)

    def test_random_spd_is_spd(self, rng):
        for n in (2, 5, 8):
            cov = random_spd(n, rng)
            eigenvalues = np.linalg.eigvalsh(cov)
            assert eigenvalues.min() > 0

    def test_unknown_distribution(self):
        with pytest.raises(ValidationError, match="unknown distribution"):
            generate("cauchy", 2, 10)

    def test_exponential_mean(self):
        x = generate("exponential", 1, 200_000, seed=8)
        # mean of Exp(1) is 1, std of the mean is 1/sqrt(t)
        assert abs(x.mean() - 1.0) < 5 / np.sqrt(x.shape[0])
