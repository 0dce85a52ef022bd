"""Fuzzy similarity relations, fuzzy labels and lower/upper approximations."""

import struct
from dataclasses import dataclass

import numpy as np

from mafrfs import kernels
from mafrfs.dataset import FeatureSubset


@dataclass(frozen=True)
class FuzzyOperators:
    """A De Morgan triple of fuzzy set operators.

    The package fixes the standard triple (min, max, 1-a); the fields exist
    so the approximation operators state their algebra explicitly.
    """

    t_norm: object = np.minimum
    t_conorm: object = np.maximum
    negation: object = staticmethod(lambda a: 1.0 - a)

    def is_standard(self):
        return (
            self.t_norm is np.minimum
            and self.t_conorm is np.maximum
            and abs(self.negation(0.25) - 0.75) == 0.0
        )


STANDARD_OPS = FuzzyOperators()


@dataclass(frozen=True)
class FuzzyRelation:
    """Reflexive symmetric n x n similarity matrix with entries in [0, 1]."""

    matrix: np.ndarray
    subset: FeatureSubset = None

    def __post_init__(self):
        matrix = np.ascontiguousarray(self.matrix, dtype=np.float64)
        object.__setattr__(self, "matrix", matrix)
        n = matrix.shape[0]
        if matrix.shape != (n, n):
            raise ValueError(f"relation matrix must be square, got {matrix.shape}")
        if matrix.min() < 0.0 or matrix.max() > 1.0:
            raise ValueError("relation entries must lie in [0, 1]")
        if not np.all(np.diag(matrix) == 1.0):
            raise ValueError("relation must be reflexive (unit diagonal)")
        if not np.array_equal(matrix, matrix.T):
            raise ValueError("relation must be symmetric")

    @property
    def n(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class FuzzyLabelMatrix:
    """Per-sample soft class memberships; rows sum to 1."""

    memberships: np.ndarray

    def __post_init__(self):
        memberships = np.ascontiguousarray(self.memberships, dtype=np.float64)
        object.__setattr__(self, "memberships", memberships)
        if memberships.ndim != 2:
            raise ValueError("memberships must be 2-D")
        if memberships.min() < 0.0 or memberships.max() > 1.0:
            raise ValueError("memberships must lie in [0, 1]")
        rows = memberships.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > 1e-9:
            raise ValueError("membership rows must sum to 1")

    @property
    def n(self):
        return self.memberships.shape[0]

    @property
    def p(self):
        return self.memberships.shape[1]


@dataclass(frozen=True)
class ApproximationPair:
    """Lower and upper approximation memberships, n x p each."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if self.lower.shape != self.upper.shape:
            raise ValueError("lower/upper shape mismatch")
        if np.any(self.lower > self.upper + 1e-12):
            raise ValueError("lower approximation exceeds upper somewhere")


def single_feature_relation(column):
    """Similarity relation 1 - |v_i - v_j| of one normalized feature column."""
    v = np.asarray(column, dtype=np.float64)
    if v.min() < 0.0 or v.max() > 1.0:
        raise ValueError("column values must lie in [0, 1] (normalize first)")
    return FuzzyRelation(matrix=kernels.relation_from_column(v), subset=None)


def conjoin(relations):
    """Elementwise minimum of several relations over the same samples."""
    if not relations:
        raise ValueError("conjoin needs at least one relation")
    n = relations[0].n
    out = relations[0].matrix.copy()
    for rel in relations[1:]:
        if rel.n != n:
            raise ValueError(f"size mismatch: {rel.n} vs {n}")
        np.minimum(out, rel.matrix, out=out)
    return FuzzyRelation(matrix=out, subset=None)


def fuzzy_cardinality(relation, i):
    """Fuzzy cardinality of sample i's similarity class (its row sum)."""
    if not 0 <= i < relation.n:
        raise IndexError(f"sample index {i} out of range [0, {relation.n})")
    return float(relation.matrix[i].sum())


def fuzzy_label(full_relation, labels):
    """Soft class memberships from the full-feature similarity relation.

    memberships[i][q] is the fraction of i's fuzzy similarity class that
    falls inside class q. Computed once per training view, from the relation
    over ALL features, and kept fixed during search.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape[0] != full_relation.n:
        raise ValueError("labels length does not match relation size")
    p = int(labels.max()) + 1
    matrix = full_relation.matrix
    cards = matrix.sum(axis=1)
    memberships = np.empty((full_relation.n, p), dtype=np.float64)
    for q in range(p):
        memberships[:, q] = matrix[:, labels == q].sum(axis=1)
    memberships /= cards[:, None]
    # subset sums can overshoot the total by an ulp; ratios stay in [0, 1]
    np.clip(memberships, 0.0, 1.0, out=memberships)
    return FuzzyLabelMatrix(memberships=memberships)


def label_relation(fl):
    """Similarity of samples in label space: row-overlap of fuzzy labels.

    Entry (i, j) is sum_q min(L_q(i), L_q(j)). One-hot labels reduce this to
    the crisp same-label equivalence relation. The diagonal is pinned to 1
    (its exact value; row sums only reach 1 up to rounding).
    """
    fm = fl.memberships
    n, p = fm.shape
    out = np.zeros((n, n), dtype=np.float64)
    for q in range(p):
        col = fm[:, q]
        out += np.minimum(col[:, None], col[None, :])
    np.fill_diagonal(out, 1.0)
    np.clip(out, 0.0, 1.0, out=out)
    return FuzzyRelation(matrix=out, subset=None)


def crisp_label_relation(labels):
    """Crisp same-label equivalence as a FuzzyRelation."""
    labels = np.asarray(labels, dtype=np.int64)
    return FuzzyRelation(
        matrix=(labels[:, None] == labels[None, :]).astype(np.float64), subset=None
    )


def approximations(relation, fl, ops=STANDARD_OPS):
    """Fuzzy lower/upper approximations of every class under a relation.

    lower[i][q] = inf_j S(N(R(i, j)), L_q(j)) and
    upper[i][q] = sup_j T(R(i, j), L_q(j)).
    """
    if relation.n != fl.n:
        raise ValueError("relation and label matrix size mismatch")
    matrix = relation.matrix
    fm = fl.memberships
    n, p = fm.shape
    neg = ops.negation(matrix)
    lower = np.empty((n, p), dtype=np.float64)
    upper = np.empty((n, p), dtype=np.float64)
    for q in range(p):
        col = fm[:, q][None, :]
        lower[:, q] = ops.t_conorm(neg, col).min(axis=1)
        upper[:, q] = ops.t_norm(matrix, col).max(axis=1)
    return ApproximationPair(lower=lower, upper=upper)


_MAGIC = b"FRM1"


def dump_relation(relation, path):
    """Write a relation as magic "FRM1", n as u64-LE, then n*n f64-LE row-major."""
    matrix = relation.matrix
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<Q", matrix.shape[0]))
        fh.write(matrix.astype("<f8").tobytes(order="C"))


def load_relation(path):
    """Read a relation written by :func:`dump_relation`."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ValueError(f"bad magic {magic!r}, expected {_MAGIC!r}")
        (n,) = struct.unpack("<Q", fh.read(8))
        data = np.frombuffer(fh.read(8 * n * n), dtype="<f8").reshape(n, n)
    return FuzzyRelation(matrix=data.astype(np.float64), subset=None)
