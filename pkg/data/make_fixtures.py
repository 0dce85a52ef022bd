"""Regenerate the CSV fixtures in this directory.

Run from the repository root:

    python data/make_fixtures.py

Outputs are deterministic:

* ``wine_recognition.csv`` - the classic 178-sample wine recognition data
  (public UCI data, re-exported from scikit-learn's bundled copy).
* ``synthetic_tabular_1599x11.csv`` - a seeded synthetic stand-in with the
  same shape as the UCI Wine Quality (red) table: 1599 samples, 11 numeric
  features, 6 imbalanced classes, moderate class overlap. Used by the
  end-to-end desk test when the real ``winequality-red.csv`` is not present
  (see the README data notes).
"""

from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent

# class sizes mirror the quality-value imbalance of the real red-wine table
CLASS_SIZES = [10, 53, 681, 638, 199, 18]
N_FEATURES = 11
INFORMATIVE = 6  # remaining features are pure noise


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(cells) for cells in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_wine_recognition():
    from sklearn.datasets import load_wine

    data = load_wine()
    header = [name.replace(" ", "_") for name in data.feature_names] + ["class"]
    rows = []
    for x, y in zip(data.data, data.target):
        rows.append([repr(float(v)) for v in x] + [f"cultivar_{y}"])
    write_csv(HERE / "wine_recognition.csv", header, rows)


def make_synthetic_tabular():
    rng = np.random.default_rng(1599)
    n = sum(CLASS_SIZES)
    labels = np.concatenate([np.full(c, q) for q, c in enumerate(CLASS_SIZES)])
    rng.shuffle(labels)

    # informative features drift with a latent per-class score; heavy noise
    # keeps classes overlapping so KNN lands mid-range, not at 1.0
    grade = (labels - 2.5) / 2.5
    values = np.empty((n, N_FEATURES))
    for j in range(N_FEATURES):
        scale = float(rng.uniform(0.5, 3.0))
        offset = float(rng.uniform(-1.0, 8.0))
        if j < INFORMATIVE:
            slope = float(rng.uniform(0.6, 1.4)) * (1 if j % 2 == 0 else -1)
            signal = slope * grade
        else:
            signal = 0.0
        noise = rng.normal(0.0, 1.05, size=n)
        values[:, j] = offset + scale * (signal + noise)

    header = [f"attr_{j}" for j in range(N_FEATURES)] + ["grade"]
    rows = []
    for i in range(n):
        rows.append([repr(float(v)) for v in values[i]] + [f"g{labels[i]}"])
    write_csv(HERE / "synthetic_tabular_1599x11.csv", header, rows)


if __name__ == "__main__":
    make_wine_recognition()
    make_synthetic_tabular()
    print("fixtures written to", HERE)
