"""Class-margin geometry: within/between-class margins, their ratio (WBMR),
and the margin-variation criterion used by the two-stage search.

All distances are Euclidean on the normalized feature view. A lower WBMR
means tighter classes relative to their separation.
"""

import sys
from dataclasses import dataclass
from enum import Enum

import numpy as np


class MarginStrategy(Enum):
    GLOBAL = "global"
    LOCAL = "local"


@dataclass(frozen=True)
class ClassCenters:
    """Per-class mean vectors, the overall mean, and class sample counts."""

    per_class: np.ndarray
    overall: np.ndarray
    counts: np.ndarray


@dataclass(frozen=True)
class MarginReport:
    """Margin summary of one feature subset.

    ``wbmr_g``/``wbmr_l`` are None when the class centers coincide
    (``degenerate`` is then True and consumers treat the ratio as +inf-like).
    """

    theta: float
    lambda_g: float
    delta_l: float
    wbmr_g: float
    wbmr_l: float
    degenerate: bool

    def to_dict(self):
        return {
            "theta": self.theta,
            "lambda_g": self.lambda_g,
            "delta_l": self.delta_l,
            "wbmr_g": self.wbmr_g,
            "wbmr_l": self.wbmr_l,
            "degenerate": self.degenerate,
        }


def class_centers(projected, labels):
    """Mean feature vector of every class plus the overall mean."""
    labels = np.asarray(labels, dtype=np.int64)
    p = int(labels.max()) + 1
    n, d = projected.shape
    counts = np.bincount(labels, minlength=p)
    if np.any(counts == 0):
        raise ValueError(f"class {int(np.argmin(counts))} has no samples")
    per_class = np.empty((p, d), dtype=np.float64)
    for q in range(p):
        per_class[q] = projected[labels == q].mean(axis=0)
    return ClassCenters(per_class=per_class, overall=projected.mean(axis=0), counts=counts)


def within_margin(projected, labels, centers):
    """Overall within-class margin: summed class-normalized scatter."""
    labels = np.asarray(labels, dtype=np.int64)
    total = 0.0
    for q in range(centers.per_class.shape[0]):
        rows = projected[labels == q]
        dists = np.linalg.norm(rows - centers.per_class[q], axis=1)
        total += dists.sum() / centers.counts[q]
    return float(total)


def between_margin_global(centers):
    """Summed deviation of each class center from the overall center."""
    return float(np.linalg.norm(centers.per_class - centers.overall, axis=1).sum())


def between_margin_local(centers):
    """Summed pairwise distances between class centers."""
    per_class = centers.per_class
    p = per_class.shape[0]
    total = 0.0
    for q in range(p):
        diffs = per_class[q + 1 :] - per_class[q]
        total += np.linalg.norm(diffs, axis=1).sum()
    return float(total)


def wbmr(projected, labels, strategy=MarginStrategy.GLOBAL):
    """Full margin report of one projected view.

    Both ratios are always computed; ``strategy`` only chooses which one the
    search reads downstream.
    """
    centers = class_centers(projected, labels)
    theta = within_margin(projected, labels, centers)
    lambda_g = between_margin_global(centers)
    delta_l = between_margin_local(centers)
    degenerate = lambda_g == 0.0 or delta_l == 0.0
    return MarginReport(
        theta=theta,
        lambda_g=lambda_g,
        delta_l=delta_l,
        wbmr_g=None if lambda_g == 0.0 else theta / lambda_g,
        wbmr_l=None if delta_l == 0.0 else theta / delta_l,
        degenerate=degenerate,
    )


def wbmr_value(report, strategy):
    """The strategy's ratio, with degenerate reports worth +inf-like.

    Coincident class centers carry no separability signal, so a degenerate
    candidate loses every comparison (max finite value, never NaN).
    """
    value = report.wbmr_g if strategy is MarginStrategy.GLOBAL else report.wbmr_l
    if value is None:
        return sys.float_info.max
    return value


def select_min_varpi(scored, tie_eps=1e-12):
    """Lowest-index candidate whose varpi is within ``tie_eps`` of the minimum.

    The epsilon makes the index tie-break immune to rounding noise, mirroring
    the fitness selection rule.
    """
    if not scored:
        raise ValueError("no candidates to select from")
    best = min(v for _, v in scored)
    return min(i for i, v in scored if v <= best + tie_eps)


def margin_delta(values, labels, subset, candidate, strategy=MarginStrategy.GLOBAL):
    """Change in WBMR caused by adding ``candidate`` to ``subset``.

    ``values`` may be a sample matrix or a DataTable. WBMR of the empty
    subset is defined as 0, so the first step reduces to minimizing the
    candidate's own WBMR.
    """
    values = getattr(values, "values", values)
    indices = list(subset)
    if candidate in indices:
        raise ValueError(f"feature {candidate} already selected")
    if indices:
        before = wbmr_value(wbmr(values[:, indices], labels, strategy), strategy)
    else:
        before = 0.0
    after_report = wbmr(values[:, indices + [candidate]], labels, strategy)
    return wbmr_value(after_report, strategy) - before
