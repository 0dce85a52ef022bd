"""Classification evaluation of rankings and nonparametric comparison tests.

Rankings are scored with a KNN classifier under the fold plan they were fit
on, at several top-percent feature cuts; algorithm score tables are compared
with the Friedman test and the Nemenyi critical difference.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist
from scipy.stats import rankdata

from mafrfs import dataset
from mafrfs.errors import DataError, PerfectConsistency
from mafrfs.parallel import ordered_map, resolve_threads

# Nemenyi critical values (Studentized range / sqrt(2)) for alpha = 0.05,
# indexed by the number of algorithms s.
NEMENYI_Q_05 = {
    2: 1.960,
    3: 2.343,
    4: 2.569,
    5: 2.728,
    6: 2.850,
    7: 2.949,
    8: 3.031,
    9: 3.102,
    10: 3.164,
}


@dataclass(frozen=True)
class CvReport:
    """Fold x cut accuracy grid with its per-cut and grand means."""

    per_fold_accuracy: np.ndarray
    cuts: list
    mean_per_cut: np.ndarray
    grand_mean: float

    def to_dict(self):
        return {
            "cuts": list(self.cuts),
            "per_fold_accuracy": self.per_fold_accuracy.tolist(),
            "mean_per_cut": self.mean_per_cut.tolist(),
            "grand_mean": self.grand_mean,
        }

    def to_csv_rows(self):
        """Long format: one (fold, cut, accuracy) row per cell."""
        rows = ["fold,cut,accuracy"]
        for f in range(self.per_fold_accuracy.shape[0]):
            for c, cut in enumerate(self.cuts):
                rows.append(f"{f},{cut},{float(self.per_fold_accuracy[f, c])!r}")
        return rows


@dataclass(frozen=True)
class RankMatrix:
    """Datasets x algorithms matrix of (tie-averaged) ranks."""

    ranks: np.ndarray
    names: list

    def __post_init__(self):
        object.__setattr__(self, "ranks", np.asarray(self.ranks, dtype=np.float64))
        n, s = self.ranks.shape
        expected = s * (s + 1) / 2
        if np.max(np.abs(self.ranks.sum(axis=1) - expected)) > 1e-9:
            raise ValueError(f"each rank row must sum to {expected}")


@dataclass(frozen=True)
class FriedmanResult:
    avg_ranks: np.ndarray
    chi_sq: float
    f_stat: float
    dof: tuple
    cd: float

    def to_dict(self):
        return {
            "avg_ranks": self.avg_ranks.tolist(),
            "chi_sq": self.chi_sq,
            "f_stat": self.f_stat,
            "dof": list(self.dof),
            "cd": self.cd,
        }


def knn_predict(train_x, train_y, test_x, k):
    """K-nearest-neighbor majority vote with deterministic tie handling.

    Distance ties go to the lower training-row index (stable sort); vote
    ties go to the smallest class index among the tied classes.
    """
    train_x = np.asarray(train_x, dtype=np.float64)
    train_y = np.asarray(train_y, dtype=np.int64)
    test_x = np.asarray(test_x, dtype=np.float64)
    if train_x.shape[0] == 0:
        raise ValueError("empty training set")
    if not 1 <= k <= train_x.shape[0]:
        raise ValueError(f"k must be in [1, {train_x.shape[0]}], got {k}")
    distances = cdist(test_x, train_x, metric="euclidean")
    neighbor_idx = np.argsort(distances, axis=1, kind="stable")[:, :k]
    neighbor_labels = train_y[neighbor_idx]
    p = int(train_y.max()) + 1
    votes = np.zeros((test_x.shape[0], p), dtype=np.int64)
    rows = np.repeat(np.arange(test_x.shape[0]), k)
    np.add.at(votes, (rows, neighbor_labels.ravel()), 1)
    return votes.argmax(axis=1)


def cut_count(cut, m, rounding="round"):
    """Feature count for a top-percent cut; never below 1.

    ``round`` means half-up; ``ceil``/``floor`` are selectable because
    published accuracy-at-cut tables rarely state their rounding.
    """
    raw = cut * m / 100.0
    if rounding == "round":
        count = math.floor(raw + 0.5)
    elif rounding == "ceil":
        count = math.ceil(raw)
    elif rounding == "floor":
        count = math.floor(raw)
    else:
        raise ValueError(f"unknown rounding {rounding!r}")
    return max(1, min(m, count))


def evaluate_ranking(table, plan, rankings, cuts, k_neighbors=5, rounding="round",
                     classifier=None, threads=None):
    """Score per-fold rankings with KNN at several top-percent cuts.

    Normalization is fit on each fold's training rows; test rows are
    transformed with the training ranges and clipped to [0, 1]. A custom
    ``classifier(train_x, train_y, test_x) -> labels`` may replace KNN.
    Folds evaluate in parallel when ``threads`` > 1; results are reduced in
    fold order, so the report never depends on the thread count.
    """
    if len(rankings) != plan.k:
        raise DataError(f"{len(rankings)} rankings for {plan.k} folds")
    for fold, ranking in enumerate(rankings):
        if ranking.fold_id is not None and ranking.fold_id != fold:
            raise DataError(f"ranking at position {fold} is tagged fold {ranking.fold_id}")
    for cut in cuts:
        if not 0 < cut <= 100:
            raise ValueError(f"cuts must lie in (0, 100], got {cut}")
    if classifier is None:
        def classifier(train_x, train_y, test_x):
            return knn_predict(train_x, train_y, test_x, k_neighbors)

    m = table.m

    def one_fold(fold):
        train_idx = plan.train_indices(fold)
        test_idx = plan.test_indices(fold)
        mins, maxs = dataset.column_ranges(table.values[train_idx])
        train_x = dataset.apply_minmax(table.values[train_idx], mins, maxs)
        test_x = dataset.apply_minmax(table.values[test_idx], mins, maxs, clip=True)
        train_y = table.labels[train_idx]
        test_y = table.labels[test_idx]
        order = rankings[fold].order
        row = np.empty(len(cuts), dtype=np.float64)
        for c, cut in enumerate(cuts):
            count = cut_count(cut, m, rounding)
            if count > len(order):
                raise DataError(
                    f"cut {cut}% needs {count} features but fold {fold} ranked {len(order)}"
                )
            cols = order[:count]
            predictions = classifier(train_x[:, cols], train_y, test_x[:, cols])
            row[c] = float(np.mean(predictions == test_y))
        return row

    rows = ordered_map(one_fold, range(plan.k), resolve_threads(threads))
    grid = np.vstack(rows)
    mean_per_cut = grid.mean(axis=0)
    return CvReport(
        per_fold_accuracy=grid,
        cuts=list(cuts),
        mean_per_cut=mean_per_cut,
        grand_mean=float(mean_per_cut.mean()),
    )


def rank_algorithms(scores, higher_is_better=True, names=None):
    """Per-dataset ranks with averaged ties; NaN score = worst rank."""
    scores = np.asarray(scores, dtype=np.float64)
    n, s = scores.shape
    keys = -scores if higher_is_better else scores.copy()
    keys[np.isnan(scores)] = np.inf
    ranks = np.vstack([rankdata(row, method="average") for row in keys])
    if names is None:
        names = [f"alg{j}" for j in range(s)]
    return RankMatrix(ranks=ranks, names=list(names))


def nemenyi_cd(s, n_datasets, q_alpha):
    """Nemenyi critical difference for s algorithms over N datasets."""
    if s < 2:
        raise ValueError("need at least 2 algorithms")
    if n_datasets < 1:
        raise ValueError("need at least 1 dataset")
    if q_alpha < 0:
        raise ValueError("q_alpha must be non-negative")
    return float(q_alpha * math.sqrt(s * (s + 1) / (6.0 * n_datasets)))


def friedman(rank_matrix, q_alpha=None):
    """Friedman chi-square and its F-distributed form, plus the Nemenyi CD.

    Raises PerfectConsistency when chi^2 reaches N(s-1), where the F form's
    denominator vanishes (every dataset ranked the algorithms identically).
    """
    ranks = rank_matrix.ranks
    n, s = ranks.shape
    if n < 2 or s < 2:
        raise ValueError("need at least 2 datasets and 2 algorithms")
    avg = ranks.mean(axis=0)
    chi_sq = 12.0 * n / (s * (s + 1)) * (float(np.sum(avg**2)) - s * (s + 1) ** 2 / 4.0)
    ceiling = n * (s - 1)
    if math.isclose(chi_sq, ceiling, rel_tol=1e-12, abs_tol=1e-12):
        raise PerfectConsistency(chi_sq)
    f_stat = (n - 1) * chi_sq / (ceiling - chi_sq)
    cd = nemenyi_cd(s, n, q_alpha) if q_alpha is not None else None
    return FriedmanResult(
        avg_ranks=avg,
        chi_sq=float(chi_sq),
        f_stat=float(f_stat),
        dof=(s - 1, (s - 1) * (n - 1)),
        cd=cd,
    )
