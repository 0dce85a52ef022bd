"""Dataset ingestion, normalization, projection and stratified fold plans."""

import csv
import json
from dataclasses import dataclass

import numpy as np

from mafrfs.errors import DataError, ParseError


@dataclass(frozen=True)
class DataTable:
    """A samples x features matrix with dense integer class labels.

    Immutable after construction and safe to share across workers.
    """

    values: np.ndarray
    labels: np.ndarray
    feature_names: list
    class_names: list

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        n, m = values.shape
        p = len(self.class_names)
        if n < 2:
            raise DataError(f"need at least 2 samples, got {n}")
        if m < 1:
            raise DataError("need at least 1 feature")
        if p < 2:
            raise DataError(f"need at least 2 classes, got {p}")
        if labels.shape != (n,):
            raise DataError("labels length does not match sample count")
        if len(self.feature_names) != m:
            raise DataError("feature_names length does not match feature count")
        if not np.all(np.isfinite(values)):
            raise DataError("non-finite feature values")
        if labels.min() < 0 or labels.max() >= p:
            raise DataError("label index out of range")
        present = np.bincount(labels, minlength=p)
        if np.any(present == 0):
            missing = int(np.argmin(present))
            raise DataError(f"class {self.class_names[missing]!r} has no samples")

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def m(self):
        return self.values.shape[1]

    @property
    def p(self):
        return len(self.class_names)


@dataclass(frozen=True)
class FeatureSubset:
    """Ordered, duplicate-free feature indices; order is the selection order."""

    indices: tuple = ()

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate feature indices: {idx}")
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


@dataclass(frozen=True)
class FoldPlan:
    """Stratified k-fold assignment of samples to folds."""

    k: int
    assignments: np.ndarray
    seed: int

    def __post_init__(self):
        object.__setattr__(
            self, "assignments", np.asarray(self.assignments, dtype=np.int64)
        )

    def train_indices(self, fold):
        return np.flatnonzero(self.assignments != fold)

    def test_indices(self, fold):
        return np.flatnonzero(self.assignments == fold)

    def to_json(self):
        return json.dumps(
            {"k": int(self.k), "seed": int(self.seed), "assignments": self.assignments.tolist()}
        )

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(k=obj["k"], assignments=np.asarray(obj["assignments"]), seed=obj["seed"])


def load_csv(path, label_column="last"):
    """Load a delimited text file with a header row into a DataTable.

    Comma delimiter, '.' decimal point, UTF-8. The label column (selected by
    name, or "last" for the final column) is treated as categorical and
    encoded to dense indices in first-appearance order; all other columns
    must parse as numbers.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    body = [r for r in rows[1:] if r and any(cell.strip() for cell in r)]
    if len(body) < 2:
        raise DataError(f"{path}: need at least 2 data rows, got {len(body)}")

    if label_column == "last":
        label_idx = len(header) - 1
    else:
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise DataError(f"label column {label_column!r} not in header {header}")
    feature_cols = [c for c in range(len(header)) if c != label_idx]
    if not feature_cols:
        raise DataError("no feature columns besides the label")

    values = np.empty((len(body), len(feature_cols)), dtype=np.float64)
    raw_labels = []
    for r, row in enumerate(body):
        if len(row) != len(header):
            raise ParseError(r + 2, len(row) + 1, f"row {r + 2} has {len(row)} cells, expected {len(header)}")
        for out_c, c in enumerate(feature_cols):
            cell = row[c].strip()
            try:
                x = float(cell)
            except ValueError:
                raise ParseError(r + 2, c + 1)
            if not np.isfinite(x):
                raise ParseError(r + 2, c + 1, f"non-finite value {cell!r} at row {r + 2}, column {c + 1}")
            values[r, out_c] = x
        raw_labels.append(row[label_idx].strip())

    class_names = []
    seen = {}
    labels = np.empty(len(raw_labels), dtype=np.int64)
    for i, lab in enumerate(raw_labels):
        if lab not in seen:
            seen[lab] = len(class_names)
            class_names.append(lab)
        labels[i] = seen[lab]
    if len(class_names) < 2:
        raise DataError(f"{path}: only one class value {class_names!r}")

    return DataTable(
        values=values,
        labels=labels,
        feature_names=[header[c] for c in feature_cols],
        class_names=class_names,
    )


def column_ranges(values):
    """Per-column (min, max) of a sample matrix."""
    return values.min(axis=0), values.max(axis=0)


def apply_minmax(values, mins, maxs, clip=False):
    """Rescale columns by precomputed ranges; constant columns map to zero."""
    span = maxs - mins
    safe = np.where(span > 0, span, 1.0)
    out = (values - mins) / safe
    out[:, span == 0] = 0.0
    if clip:
        np.clip(out, 0.0, 1.0, out=out)
    return out


def normalize(table):
    """Min-max rescale every feature column to [0, 1].

    Constant columns become all-zeros (total indiscernibility under the
    similarity relation). Idempotent; the input table is untouched.
    """
    mins, maxs = column_ranges(table.values)
    return DataTable(
        values=apply_minmax(table.values, mins, maxs),
        labels=table.labels,
        feature_names=list(table.feature_names),
        class_names=list(table.class_names),
    )


def project(table, subset):
    """Columns of the table in subset order, rows aligned with the table."""
    indices = list(subset)
    for i in indices:
        if not 0 <= i < table.m:
            raise IndexError(f"feature index {i} out of range [0, {table.m})")
    return table.values[:, indices]


def stratified_kfold(table, k, seed):
    """Deterministic stratified fold plan.

    Per-class counts across folds differ by at most 1; classes smaller than
    k simply miss some folds. The within-class order is shuffled by ``seed``
    and a fold cursor runs across classes so every fold is non-empty.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if k > table.n:
        raise ValueError(f"k = {k} exceeds sample count {table.n}")
    rng = np.random.default_rng(seed)
    assignments = np.empty(table.n, dtype=np.int64)
    cursor = 0
    for q in range(table.p):
        members = np.flatnonzero(table.labels == q)
        members = members[rng.permutation(len(members))]
        for idx in members:
            assignments[idx] = cursor % k
            cursor += 1
    return FoldPlan(k=k, assignments=assignments, seed=seed)


def fold_train_table(table, plan, fold):
    """The training-rows view of one fold as a DataTable.

    Raises EmptyClassInFold if the split loses a class entirely.
    """
    from mafrfs.errors import EmptyClassInFold

    idx = plan.train_indices(fold)
    labels = table.labels[idx]
    counts = np.bincount(labels, minlength=table.p)
    if np.any(counts == 0):
        raise EmptyClassInFold(fold, int(np.argmin(counts)))
    return DataTable(
        values=table.values[idx],
        labels=labels,
        feature_names=list(table.feature_names),
        class_names=list(table.class_names),
    )
