"""Blocked storage for super-symmetric tensors.

A mode-m, dimension-n super-symmetric tensor is stored as a lookup table of
dense sub-blocks keyed by the sorted block multi-index (j_1 <= ... <= j_m);
only those keys are materialised, all other blocks are redundant permutations.
With block edge b there are ceil(n/b) blocks per mode; the final block along
each mode has edge b_l = n - b*(ceil(n/b) - 1) when b does not divide n.

Indices are 1-based throughout the public API, matching the serialized form.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .errors import ValidationError

SYMMETRY_RTOL = 1e-8
SYMMETRY_ATOL = 1e-12


def canonical_index(index) -> tuple[int, ...]:
    """Sorted (nondecreasing) representative of an element multi-index."""
    return tuple(sorted(index))


def locate(index, b: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Map a sorted element index to (block multi-index, within-block offsets).

    Both are 1-based: j_k = ceil(i_k / b), offset_k = i_k - (j_k - 1) * b.
    """
    j = tuple((i + b - 1) // b for i in index)
    offsets = tuple(i - (jk - 1) * b for i, jk in zip(index, j))
    return j, offsets


def unique_block_count(n_bar: int, m: int) -> int:
    """Number of stored blocks: size-m multisets over {1..n_bar}."""
    if n_bar < 1 or m < 1:
        raise ValidationError("n_bar and m must be >= 1")
    return comb(n_bar + m - 1, m)


def block_keys(n_bar: int, m: int):
    """All sorted block multi-indices, in lexicographic order."""
    return itertools.combinations_with_replacement(range(1, n_bar + 1), m)


def block_edges(key, n: int, b: int) -> tuple[int, ...]:
    """Edge length along each mode of the block at ``key``."""
    return tuple(min(j * b, n) - (j - 1) * b for j in key)


def _distinct_permutations(items):
    """Distinct permutations of a multiset, without generating duplicates."""
    counts = {}
    for it in items:
        counts[it] = counts.get(it, 0) + 1
    symbols = sorted(counts)
    total = len(items)
    perm = []

    def rec():
        if len(perm) == total:
            yield tuple(perm)
            return
        for s in symbols:
            if counts[s]:
                counts[s] -= 1
                perm.append(s)
                yield from rec()
                perm.pop()
                counts[s] += 1

    yield from rec()


class BlockSymTensor:
    """Super-symmetric tensor stored as unique sorted-index blocks.

    Instances are treated as immutable after construction; all arithmetic
    returns new tensors. Blocks with repeated key entries hold the redundant
    within-block permutations and are internally symmetric in those modes.
    """

    __slots__ = ("n", "m", "b", "n_bar", "blocks")

    def __init__(self, n: int, m: int, b: int, blocks: dict):
        if n < 1 or m < 1 or b < 1:
            raise ValidationError("n, m and b must all be >= 1")
        self.n = n
        self.m = m
        self.b = b
        self.n_bar = -(-n // b)
        self.blocks = blocks

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, n: int, m: int, b: int) -> "BlockSymTensor":
        n_bar = -(-n // b)
        blocks = {
            key: np.zeros(block_edges(key, n, b))
            for key in block_keys(n_bar, m)
        }
        return cls(n, m, b, blocks)

    @classmethod
    def from_dense(cls, dense: np.ndarray, b: int) -> "BlockSymTensor":
        """Pack a dense super-symmetric array into block storage.

        Rejects input whose elements differ across index permutations by
        more than SYMMETRY_RTOL relative (SYMMETRY_ATOL absolute floor).
        """
        dense = np.asarray(dense, dtype=np.float64)
        m = dense.ndim
        if m < 1:
            raise ValidationError("dense input must have at least one mode")
        n = dense.shape[0]
        if any(s != n for s in dense.shape):
            raise ValidationError("dense input must have equal edges in all modes")
        scale = np.max(np.abs(dense)) if dense.size else 0.0
        tol = max(SYMMETRY_RTOL * scale, SYMMETRY_ATOL)
        # invariance under adjacent transpositions implies full symmetry
        for q in range(m - 1):
            if np.max(np.abs(dense - dense.swapaxes(q, q + 1))) > tol:
                raise ValidationError(
                    f"input is not super-symmetric: modes {q + 1} and {q + 2} "
                    f"differ by more than {tol:g}"
                )
        n_bar = -(-n // b)
        blocks = {}
        for key in block_keys(n_bar, m):
            slices = tuple(slice((j - 1) * b, min(j * b, n)) for j in key)
            blocks[key] = dense[slices].copy()
        return cls(n, m, b, blocks)

    # -- element access ----------------------------------------------------

    def get(self, index) -> float:
        """Logical element value; invariant under any permutation of index."""
        if len(index) != self.m:
            raise ValidationError(f"index must have {self.m} entries")
        if any(i < 1 or i > self.n for i in index):
            raise ValidationError(f"index {tuple(index)} out of range 1..{self.n}")
        j, offsets = locate(canonical_index(index), self.b)
        block = self.blocks[j]
        return float(block[tuple(o - 1 for o in offsets)])

    def to_dense(self) -> np.ndarray:
        """Full dense array with every redundant permutation filled in."""
        out = np.empty((self.n,) * self.m)
        for key, block in self.blocks.items():
            positions = {}
            for q, j in enumerate(key):
                positions.setdefault(j, []).append(q)
            for perm_key in _distinct_permutations(key):
                # axes[q] = which stored mode lands at dense mode q; repeated
                # key values are consumed in increasing stored-mode order
                taken = {j: 0 for j in positions}
                axes = []
                for j in perm_key:
                    axes.append(positions[j][taken[j]])
                    taken[j] += 1
                axes = tuple(axes)
                slices = tuple(
                    slice((j - 1) * self.b, min(j * self.b, self.n))
                    for j in perm_key
                )
                out[slices] = block.transpose(axes)
        return out

    # -- blockwise arithmetic ----------------------------------------------

    def _check_same_layout(self, other: "BlockSymTensor"):
        if (self.n, self.m, self.b) != (other.n, other.m, other.b):
            raise ValidationError(
                f"shape mismatch: (n={self.n}, m={self.m}, b={self.b}) vs "
                f"(n={other.n}, m={other.m}, b={other.b})"
            )

    def __add__(self, other: "BlockSymTensor") -> "BlockSymTensor":
        self._check_same_layout(other)
        blocks = {k: v + other.blocks[k] for k, v in self.blocks.items()}
        return BlockSymTensor(self.n, self.m, self.b, blocks)

    def __sub__(self, other: "BlockSymTensor") -> "BlockSymTensor":
        self._check_same_layout(other)
        blocks = {k: v - other.blocks[k] for k, v in self.blocks.items()}
        return BlockSymTensor(self.n, self.m, self.b, blocks)

    def scale(self, s: float) -> "BlockSymTensor":
        blocks = {k: v * float(s) for k, v in self.blocks.items()}
        return BlockSymTensor(self.n, self.m, self.b, blocks)

    __mul__ = scale
    __rmul__ = scale

    # -- stats ---------------------------------------------------------------

    @property
    def stored_element_count(self) -> int:
        return sum(v.size for v in self.blocks.values())

    def max_abs(self) -> float:
        return max((np.max(np.abs(v)) if v.size else 0.0) for v in self.blocks.values())

    def __repr__(self):
        return (
            f"BlockSymTensor(n={self.n}, m={self.m}, b={self.b}, "
            f"blocks={len(self.blocks)}, elements={self.stored_element_count})"
        )

    # -- serialization -------------------------------------------------------

    def to_doc(self) -> dict:
        """JSON-serializable document; blocks sorted lexicographically by j."""
        blocks = []
        for key in sorted(self.blocks):
            arr = self.blocks[key]
            blocks.append(
                {
                    "j": list(key),
                    "edges": list(arr.shape),
                    "data": arr.ravel(order="C").tolist(),
                }
            )
        return {"n": self.n, "m": self.m, "b": self.b, "blocks": blocks}

    @classmethod
    def from_doc(cls, doc: dict) -> "BlockSymTensor":
        """Rebuild from a document, validating the block layout."""
        try:
            n, m, b = int(doc["n"]), int(doc["m"]), int(doc["b"])
            raw_blocks = doc["blocks"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed tensor document: {exc}") from exc
        if n < 1 or m < 1 or b < 1:
            raise ValidationError("n, m and b must all be >= 1")
        n_bar = -(-n // b)
        expected = set(block_keys(n_bar, m))
        blocks = {}
        for entry in raw_blocks:
            try:
                key = tuple(int(j) for j in entry["j"])
                edges = tuple(int(e) for e in entry["edges"])
                data = entry["data"]
            except (KeyError, TypeError) as exc:
                raise ValidationError(f"malformed block entry: {exc}") from exc
            if list(key) != sorted(key):
                raise ValidationError(f"block key {key} is not sorted")
            if key not in expected:
                raise ValidationError(f"unexpected block key {key}")
            if key in blocks:
                raise ValidationError(f"duplicate block key {key}")
            want_edges = block_edges(key, n, b)
            if edges != want_edges:
                raise ValidationError(
                    f"block {key} has edges {edges}, expected {want_edges}"
                )
            arr = np.asarray(data, dtype=np.float64)
            if arr.size != int(np.prod(want_edges)):
                raise ValidationError(
                    f"block {key} has {arr.size} values, expected "
                    f"{int(np.prod(want_edges))}"
                )
            blocks[key] = arr.reshape(want_edges)
        missing = expected - set(blocks)
        if missing:
            raise ValidationError(f"missing block keys, e.g. {sorted(missing)[0]}")
        return cls(n, m, b, blocks)
