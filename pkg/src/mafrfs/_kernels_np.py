"""NumPy implementations of the hot kernels.

These are the reference semantics for `mafrfs._speedups`; both backends must
agree (up to summation rounding) and the `scan_*` variants must equal the
materialize-then-reduce compositions bit for bit within this backend.

Conventions: relation matrices are C-contiguous float64 arrays with entries
in [0, 1]; label membership matrices are n x p float64.
"""

import numpy as np

name = "numpy"


def relation_from_column(values):
    """Pairwise similarity 1 - |v_i - v_j| of a normalized column."""
    v = np.asarray(values, dtype=np.float64)
    return 1.0 - np.abs(v[:, None] - v[None, :])


def conjoin_with_column(matrix, values, out=None):
    """Elementwise min of a relation with the column's similarity relation."""
    return np.minimum(matrix, relation_from_column(values), out=out)


def conjoin_inplace(matrix, values):
    """In-place variant of :func:`conjoin_with_column`."""
    np.minimum(matrix, relation_from_column(values), out=matrix)


def cardinalities(matrix):
    """Row sums: the fuzzy cardinality of every sample's similarity class."""
    return matrix.sum(axis=1)


def joint_cardinalities(matrix, other):
    """Row sums of the elementwise min of two relations."""
    return np.minimum(matrix, other).sum(axis=1)


def positive_memberships(matrix, label_memberships):
    """Per-sample best-class lower approximation.

    For each sample i this is max_q min_j max(1 - R_ij, L_jq), i.e. the
    degree to which i certainly belongs to its best-supported class.
    """
    complement = 1.0 - matrix
    p = label_memberships.shape[1]
    best = np.full(matrix.shape[0], -np.inf)
    for q in range(p):
        lower_q = np.maximum(complement, label_memberships[:, q][None, :]).min(axis=1)
        np.maximum(best, lower_q, out=best)
    return best


def scan_cardinalities(matrix, values):
    """Cardinalities of the relation conjoined with one candidate column."""
    return cardinalities(conjoin_with_column(matrix, values))


def scan_joint_cardinalities(matrix, values, other):
    """Joint cardinalities of the conjoined relation against ``other``."""
    return joint_cardinalities(conjoin_with_column(matrix, values), other)


def scan_positive_memberships(matrix, values, label_memberships):
    """Positive memberships of the relation conjoined with one column."""
    return positive_memberships(conjoin_with_column(matrix, values), label_memberships)
