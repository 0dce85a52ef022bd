"""Uncertainty measures over fuzzy relations and the greedy fitness family.

Five measures ship: FD (dependency, from lower approximations) and the
entropy family FE / FJE / FCE / FMI over fuzzy similarity classes. All
logarithms are base 2; the base rescales every entropy value by a constant
and cannot change any argmin/argmax.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from mafrfs import kernels
from mafrfs.fuzzy import STANDARD_OPS, approximations


class Direction(Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class MeasureKind(Enum):
    """Measure tags with their selection direction."""

    FD = "fd"
    FE = "fe"
    FJE = "fje"
    FCE = "fce"
    FMI = "fmi"

    @property
    def direction(self):
        if self in (MeasureKind.FD, MeasureKind.FMI):
            return Direction.MAXIMIZE
        return Direction.MINIMIZE

    @property
    def needs_labels(self):
        return self is not MeasureKind.FE


def _log(x, base):
    if base == 2:
        return np.log2(x)
    return np.log(x) / np.log(base)


def _check_cardinalities(cards):
    # reflexivity makes every similarity class at least unit-sized, so the
    # entropy logs can never see zero; guard instead of clamping
    if cards.min() < 1.0 - 1e-9:
        raise AssertionError(f"fuzzy cardinality below 1 ({cards.min()}); relation not reflexive?")
    return cards


def fd(relation, fl, ops=STANDARD_OPS):
    """Fuzzy dependency: mean over samples of the best-class lower approximation."""
    if relation.n != fl.n:
        raise ValueError("relation and label matrix size mismatch")
    if ops.is_standard():
        pos = kernels.positive_memberships(relation.matrix, fl.memberships)
    else:
        pos = approximations(relation, fl, ops).lower.max(axis=1)
    return float(pos.mean())


def fe(relation, base=2):
    """Fuzzy entropy: mean information of the similarity classes."""
    cards = _check_cardinalities(kernels.cardinalities(relation.matrix))
    return float(-_log(cards / relation.n, base).mean())


def fje(relation, fl_relation, base=2):
    """Fuzzy joint entropy of a feature relation and the label relation."""
    if relation.n != fl_relation.n:
        raise ValueError("relation size mismatch")
    joint = _check_cardinalities(kernels.joint_cardinalities(relation.matrix, fl_relation.matrix))
    return float(-_log(joint / relation.n, base).mean())


def fce(relation, fl_relation, base=2):
    """Fuzzy conditional entropy of the labels given a feature relation."""
    if relation.n != fl_relation.n:
        raise ValueError("relation size mismatch")
    cards = kernels.cardinalities(relation.matrix)
    joint = kernels.joint_cardinalities(relation.matrix, fl_relation.matrix)
    return float(-_log(joint / cards, base).mean())


def fmi(relation, fl_relation, base=2):
    """Fuzzy mutual information between a feature relation and the labels."""
    if relation.n != fl_relation.n:
        raise ValueError("relation size mismatch")
    cards = kernels.cardinalities(relation.matrix)
    lcards = kernels.cardinalities(fl_relation.matrix)
    joint = kernels.joint_cardinalities(relation.matrix, fl_relation.matrix)
    return float(-_log(cards * lcards / (relation.n * joint), base).mean())


def evaluate_value(kind, matrix, fl_memberships, fl_matrix, base=2):
    """Measure value on a raw relation matrix (engine-internal fast path)."""
    n = matrix.shape[0]
    if kind is MeasureKind.FD:
        return float(kernels.positive_memberships(matrix, fl_memberships).mean())
    if kind is MeasureKind.FE:
        cards = kernels.cardinalities(matrix)
        return float(-_log(cards / n, base).mean())
    if kind is MeasureKind.FJE:
        joint = kernels.joint_cardinalities(matrix, fl_matrix)
        return float(-_log(joint / n, base).mean())
    if kind is MeasureKind.FCE:
        cards = kernels.cardinalities(matrix)
        joint = kernels.joint_cardinalities(matrix, fl_matrix)
        return float(-_log(joint / cards, base).mean())
    if kind is MeasureKind.FMI:
        cards = kernels.cardinalities(matrix)
        lcards = kernels.cardinalities(fl_matrix)
        joint = kernels.joint_cardinalities(matrix, fl_matrix)
        return float(-_log(cards * lcards / (n * joint), base).mean())
    raise ValueError(f"unknown measure {kind}")


def scan_value(kind, matrix, column, fl_memberships, fl_matrix, base=2):
    """Measure value of the relation conjoined with one candidate column.

    Bit-identical to evaluating on the materialized conjunction within a
    kernel backend; avoids the n x n temporary on the compiled path.
    """
    n = matrix.shape[0]
    if kind is MeasureKind.FD:
        return float(kernels.scan_positive_memberships(matrix, column, fl_memberships).mean())
    if kind is MeasureKind.FE:
        cards = kernels.scan_cardinalities(matrix, column)
        return float(-_log(cards / n, base).mean())
    if kind is MeasureKind.FJE:
        joint = kernels.scan_joint_cardinalities(matrix, column, fl_matrix)
        return float(-_log(joint / n, base).mean())
    if kind is MeasureKind.FCE:
        cards = kernels.scan_cardinalities(matrix, column)
        joint = kernels.scan_joint_cardinalities(matrix, column, fl_matrix)
        return float(-_log(joint / cards, base).mean())
    if kind is MeasureKind.FMI:
        cards = kernels.scan_cardinalities(matrix, column)
        lcards = kernels.cardinalities(fl_matrix)
        joint = kernels.scan_joint_cardinalities(matrix, column, fl_matrix)
        return float(-_log(cards * lcards / (n * joint), base).mean())
    raise ValueError(f"unknown measure {kind}")


@dataclass
class FitnessContext:
    """Read-only state a fitness scan runs against."""

    table: object
    fl: object
    fl_relation: object
    current_relation: object
    current_value: float
    log_base: int = 2


def fitness(ctx, kind, candidate):
    """Fitness of adding one candidate: measure(F' + {f}) - measure(F')."""
    subset = ctx.current_relation.subset
    if subset is not None and candidate in subset:
        raise ValueError(f"feature {candidate} already selected")
    column = ctx.table.values[:, candidate]
    value = scan_value(
        kind,
        ctx.current_relation.matrix,
        column,
        ctx.fl.memberships,
        ctx.fl_relation.matrix,
        base=ctx.log_base,
    )
    return value - ctx.current_value


def select_best(deltas, kind, tie_eps=1e-12):
    """Extremal candidate per the measure direction; ties -> lowest index.

    ``deltas`` is a list of (feature_index, fitness) pairs. Values within
    ``tie_eps`` of the extremum count as tied, so summation noise between
    equally useless candidates cannot override the index tie-break (this is
    what keeps orderings invariant under uniform dataset rescaling).
    """
    if not deltas:
        raise ValueError("no candidates to select from")
    values = [v for _, v in deltas]
    if kind.direction is Direction.MAXIMIZE:
        best = max(values)
        return min(i for i, v in deltas if v >= best - tie_eps)
    best = min(values)
    return min(i for i, v in deltas if v <= best + tie_eps)
