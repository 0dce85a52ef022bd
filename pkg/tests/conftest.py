import numpy as np
import pytest

from mafrfs.dataset import DataTable


def random_table(rng, n_max=30, m_max=8, p_max=4, n_min=4, m_min=2):
    """A random normalized-ish table where every class occurs."""
    n = int(rng.integers(n_min, n_max + 1))
    m = int(rng.integers(m_min, m_max + 1))
    p = int(rng.integers(2, min(p_max, n - 1) + 1))
    values = rng.random((n, m))
    labels = np.concatenate([np.arange(p), rng.integers(0, p, size=n - p)])
    labels = labels[rng.permutation(n)]
    return DataTable(
        values=values,
        labels=labels,
        feature_names=[f"f{j}" for j in range(m)],
        class_names=[f"c{q}" for q in range(p)],
    )


def perfectly_separable_table(n_per_class=3, m=4, informative=0, seed=0):
    """Labels fully determined by one binary feature; the rest is noise."""
    rng = np.random.default_rng(seed)
    n = 2 * n_per_class
    values = rng.random((n, m))
    labels = np.array([0] * n_per_class + [1] * n_per_class)
    values[:, informative] = labels.astype(float)
    return DataTable(
        values=values,
        labels=labels,
        feature_names=[f"f{j}" for j in range(m)],
        class_names=["a", "b"],
    )


def write_csv(path, table):
    lines = [",".join(table.feature_names + ["class"])]
    for i in range(table.n):
        cells = [repr(float(x)) for x in table.values[i]]
        cells.append(table.class_names[table.labels[i]])
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
