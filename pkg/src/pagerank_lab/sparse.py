"""Row-stochastic CSR matrices with exact rational rows.

Entries are stored as positive integer numerators over one shared
denominator ``m``, so every row sums to exactly one in integer arithmetic.
Floating point appears only inside the apply kernels, which never build the
dense teleportation matrix.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._errors import ParameterError


class StochasticMatrix:
    """Immutable CSR matrix whose entry ``(i, col_indices[e])`` is ``numerators[e] / m``."""

    def __init__(self, n_sites, row_offsets, col_indices, numerators, m):
        self.n_sites = int(n_sites)
        self.m = int(m)
        self.row_offsets = _frozen(row_offsets)
        self.col_indices = _frozen(col_indices)
        self.numerators = _frozen(numerators)
        self._validate()

    def _validate(self):
        n, off, col, num = self.n_sites, self.row_offsets, self.col_indices, self.numerators
        if n < 1 or self.m < 1:
            raise ParameterError("need n_sites >= 1 and m >= 1")
        if off.shape != (n + 1,) or off[0] != 0 or np.any(np.diff(off) < 1):
            raise ParameterError("row_offsets must start at 0 and give every row >= 1 entry")
        nnz = int(off[-1])
        if col.shape != (nnz,) or num.shape != (nnz,):
            raise ParameterError("col_indices/numerators length must equal row_offsets[-1]")
        if np.any(num <= 0):
            raise ParameterError("numerators must be positive")
        if np.any(col < 0) or np.any(col >= n):
            raise ParameterError("column index out of range")
        step = np.diff(col)
        row_start = np.zeros(nnz, dtype=bool)
        row_start[off[:-1]] = True
        if np.any(step[~row_start[1:]] <= 0):
            raise ParameterError("columns within a row must be strictly increasing")
        if np.any(np.add.reduceat(num, off[:-1]) != self.m):
            raise ParameterError("every row's numerators must sum to m")

    @classmethod
    def from_rows(cls, rows, m):
        """Build from a list of ``{col: numerator}`` dicts, one per row."""
        offsets, cols, nums = [0], [], []
        for r in rows:
            for c in sorted(r):
                if r[c]:
                    cols.append(c)
                    nums.append(r[c])
            offsets.append(len(cols))
        return cls(len(rows), offsets, cols, nums, m)

    @classmethod
    def from_dense(cls, counts, m=None):
        """Build from a dense integer matrix of numerators (denominator ``m``)."""
        counts = np.asarray(counts)
        if m is None:
            m = int(counts.sum(axis=1)[0])
        return cls.from_rows([{j: int(v) for j, v in enumerate(row) if v} for row in counts], m)

    @property
    def nnz(self):
        return int(self.row_offsets[-1])

    @cached_property
    def entry_rows(self):
        return _frozen(np.repeat(np.arange(self.n_sites), np.diff(self.row_offsets)))

    @cached_property
    def weights(self):
        return _frozen(self.numerators / self.m)

    @cached_property
    def cumulative(self):
        """Global running sum of numerators; row ``i`` spans ``(i*m, (i+1)*m]``."""
        return _frozen(np.cumsum(self.numerators))

    def row(self, i):
        lo, hi = self.row_offsets[i], self.row_offsets[i + 1]
        return self.col_indices[lo:hi], self.numerators[lo:hi]

    def to_dense(self):
        P = np.zeros((self.n_sites, self.n_sites))
        P[self.entry_rows, self.col_indices] = self.weights
        return P

    def __eq__(self, other):
        if not isinstance(other, StochasticMatrix):
            return NotImplemented
        return (self.n_sites == other.n_sites and self.m == other.m
                and np.array_equal(self.row_offsets, other.row_offsets)
                and np.array_equal(self.col_indices, other.col_indices)
                and np.array_equal(self.numerators, other.numerators))

    def __repr__(self):
        return f"StochasticMatrix(n_sites={self.n_sites}, nnz={self.nnz}, m={self.m})"


def _frozen(a):
    a = np.array(a, dtype=np.int64 if np.asarray(a).dtype.kind in "iub" else np.float64)
    a.setflags(write=False)
    return a


@dataclass
class RankVector:
    """Probability vector over sites plus provenance."""

    values: np.ndarray
    solver: str = ""
    iterations: int = 0
    residual: float = float("nan")
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.values.size

    def is_distribution(self, tol=1e-10):
        return bool(np.all(self.values >= 0) and abs(self.values.sum() - 1.0) <= tol)


def uniform(n):
    return np.full(n, 1.0 / n)


def _vector(M, p):
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (M.n_sites,):
        raise ParameterError(f"vector of length {p.shape} does not match n_sites={M.n_sites}")
    return p


def transpose_apply(M, p):
    """``p^T P`` as a vector: ``out[j] = sum_i p[i] * P[i, j]``, O(nnz)."""
    p = _vector(M, p)
    return np.bincount(M.col_indices, weights=p[M.entry_rows] * M.weights,
                       minlength=M.n_sites)


def teleported_apply(M, p, delta):
    """``(1 - delta) p^T P + delta / n``; ``delta = 1`` jumps straight to uniform."""
    if not 0.0 <= delta <= 1.0:
        raise ParameterError(f"delta must lie in [0, 1], got {delta!r}")
    out = transpose_apply(M, p)
    if delta:
        out *= 1.0 - delta
        out += delta / M.n_sites
    return out


def residual_l1(M, delta, p):
    """``||teleported_apply(M, p, delta) - p||_1``; zero exactly at stationarity."""
    p = _vector(M, p)
    return float(np.abs(teleported_apply(M, p, delta) - p).sum())


def write_site_graph(M, path):
    rows = M.entry_rows.tolist()
    with open(path, "w") as fh:
        fh.write(f"BOSG 1 {M.n_sites} {M.m}\n")
        fh.writelines(f"{r} {c} {k}\n" for r, c, k in
                      zip(rows, M.col_indices.tolist(), M.numerators.tolist()))


def read_site_graph(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[:2] != ["BOSG", "1"]:
            raise ParameterError(f"{path}: not a BOSG 1 site-graph file")
        n, m = int(header[2]), int(header[3])
        data = np.loadtxt(fh, dtype=np.int64, ndmin=2).reshape(-1, 3)
    rows, cols, nums = data.T
    if np.any(np.diff(rows * n + cols) <= 0):
        raise ParameterError(f"{path}: entries must be sorted by (row, col) without repeats")
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=offsets[1:])
    return StochasticMatrix(n, offsets, cols, nums, m)


def write_rank_csv(p, path):
    values = np.asarray(p, dtype=np.float64)
    with open(path, "w") as fh:
        fh.write("site,score\n")
        fh.writelines(f"{i},{v:.17g}\n" for i, v in enumerate(values.tolist()))


def read_rank_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if not np.array_equal(data[:, 0], np.arange(len(data))):
        raise ParameterError(f"{path}: rows must be in site order")
    return RankVector(data[:, 1])
