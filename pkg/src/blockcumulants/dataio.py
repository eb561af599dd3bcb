"""CSV ingestion, tensor file interchange and synthetic data generation.

CSV is plain comma-separated numeric text with '.' decimal point, UTF-8 and
an optional single header line (detected by any non-numeric cell in the
first line). Tensors travel as JSON documents; floats are written with
Python's shortest round-tripping repr, so emit/load is value-exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .moments import as_data_matrix
from .symtensor import BlockSymTensor

DISTRIBUTIONS = ("gaussian", "uniform", "exponential")


def ingest_csv(path) -> np.ndarray:
    """Read a t x n observation matrix from a CSV file.

    Rejects ragged rows, non-numeric cells and non-finite values, naming the
    offending row and column (1-based, header excluded from row numbers).
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError(f"{path}: file is empty")

    def parse_line(line):
        cells = line.split(",")
        try:
            return [float(c) for c in cells]
        except ValueError:
            return None

    first = parse_line(lines[0])
    start = 0 if first is not None else 1
    if first is None and len(lines) == 1:
        raise ValidationError(f"{path}: no numeric rows")
    rows = []
    width = None
    for lineno, line in enumerate(lines[start:], start=1):
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ValidationError(
                f"{path}: row {lineno} has {len(cells)} cells, expected {width}"
            )
        values = []
        for col, cell in enumerate(cells, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise ValidationError(
                    f"{path}: non-numeric cell at row {lineno}, column {col}: "
                    f"{cell.strip()!r}"
                ) from None
            if not np.isfinite(v):
                raise ValidationError(
                    f"{path}: non-finite value at row {lineno}, column {col}"
                )
            values.append(v)
        rows.append(values)
    if not rows:
        raise ValidationError(f"{path}: no numeric rows")
    return as_data_matrix(np.array(rows, dtype=np.float64))


def write_csv(path, data: np.ndarray, header: list[str] | None = None):
    """Write an observation matrix as CSV with round-trip-exact floats."""
    arr = as_data_matrix(data)
    with open(path, "w", encoding="utf-8") as fh:
        if header is not None:
            fh.write(",".join(header) + "\n")
        for row in arr:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def emit_tensor(tensor: BlockSymTensor, path):
    """Write a block tensor as a JSON document (blocks sorted by key)."""
    doc = tensor.to_doc()
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")


def load_tensor(path) -> BlockSymTensor:
    """Read a block tensor document, validating layout invariants."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    return BlockSymTensor.from_doc(doc)


def random_spd(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random symmetric positive-definite matrix with O(1) entries."""
    a = rng.standard_normal((n, n))
    return a @ a.T / n + np.eye(n)


def generate(distribution: str, n: int, t: int, seed: int = 0,
             cov: np.ndarray | None = None) -> np.ndarray:
    """Synthetic t x n observations, bit-reproducible for a fixed seed.

    gaussian draws N(0, cov) with a supplied or random SPD covariance;
    uniform is iid on [0, 1); exponential is iid with unit rate. Columns are
    independent except through the gaussian covariance.
    """
    if distribution not in DISTRIBUTIONS:
        raise ValidationError(
            f"unknown distribution {distribution!r}, expected one of {DISTRIBUTIONS}"
        )
    if n < 1 or t < 1:
        raise ValidationError("n and t must be >= 1")
    rng = np.random.default_rng(seed)
    if distribution == "uniform":
        return rng.random((t, n))
    if distribution == "exponential":
        return rng.exponential(1.0, size=(t, n))
    if cov is None:
        cov = random_spd(n, rng)
    else:
        cov = np.asarray(cov, dtype=np.float64)
        if cov.shape != (n, n):
            raise ValidationError(f"covariance must be {n}x{n}, got {cov.shape}")
        if not np.allclose(cov, cov.T, rtol=1e-12, atol=1e-12):
            raise ValidationError("covariance must be symmetric")
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise ValidationError(f"covariance is not positive definite: {exc}") from exc
    return rng.standard_normal((t, n)) @ chol.T
