import numpy as np
import pytest

from conftest import random_table
from mafrfs import dataset, fuzzy, measures
from mafrfs.fuzzy import FuzzyLabelMatrix, FuzzyRelation
from mafrfs.measures import Direction, FitnessContext, MeasureKind


def build_context(table):
    """Full-feature fuzzy labels plus relation structures for a table."""
    norm = dataset.normalize(table)
    rels = [fuzzy.single_feature_relation(norm.values[:, j]) for j in range(norm.m)]
    full = fuzzy.conjoin(rels)
    fl = fuzzy.fuzzy_label(full, norm.labels)
    fl_rel = fuzzy.label_relation(fl)
    return norm, rels, full, fl, fl_rel


def test_direction_per_kind():
    assert MeasureKind.FD.direction is Direction.MAXIMIZE
    assert MeasureKind.FMI.direction is Direction.MAXIMIZE
    for kind in (MeasureKind.FE, MeasureKind.FJE, MeasureKind.FCE):
        assert kind.direction is Direction.MINIMIZE


def test_fd_examples():
    identity = FuzzyRelation(matrix=np.eye(4))
    onehot = FuzzyLabelMatrix(memberships=np.eye(2)[[0, 1, 0, 1]].astype(float))
    assert measures.fd(identity, onehot) == 1.0
    ones = FuzzyRelation(matrix=np.ones((4, 4)))
    half = FuzzyLabelMatrix(memberships=np.full((4, 2), 0.5))
    assert measures.fd(ones, half) == 0.5


def test_fd_range(rng):
    for _ in range(20):
        table = random_table(rng)
        _, rels, full, fl, _ = build_context(table)
        value = measures.fd(rels[0], fl)
        assert 0.0 <= value <= 1.0


def test_fe_examples():
    assert measures.fe(FuzzyRelation(matrix=np.ones((5, 5)))) == 0.0
    assert measures.fe(FuzzyRelation(matrix=np.eye(2))) == 1.0
    rel = fuzzy.single_feature_relation([0.0, 0.5, 1.0])
    assert measures.fe(rel) == pytest.approx((2 + np.log2(1.5)) / 3, abs=1e-12)


def test_fe_range(rng):
    for _ in range(20):
        n = int(rng.integers(2, 25))
        col = rng.random(n)
        value = measures.fe(fuzzy.single_feature_relation(col))
        assert 0.0 <= value <= np.log2(n) + 1e-12


def test_fje_examples(rng):
    rel = fuzzy.single_feature_relation(rng.random(6))
    ones = FuzzyRelation(matrix=np.ones((6, 6)))
    assert measures.fje(rel, ones) == pytest.approx(measures.fe(rel), abs=1e-12)
    assert measures.fje(ones, rel) == pytest.approx(measures.fe(rel), abs=1e-12)
    identity = FuzzyRelation(matrix=np.eye(6))
    assert measures.fje(identity, rel) == pytest.approx(np.log2(6), abs=1e-12)


def test_fje_dominates_marginals(rng):
    for _ in range(20):
        table = random_table(rng)
        _, rels, full, fl, fl_rel = build_context(table)
        fje = measures.fje(rels[0], fl_rel)
        assert fje >= measures.fe(rels[0]) - 1e-9
        assert fje >= measures.fe(fl_rel) - 1e-9


def test_fce_examples():
    rel = fuzzy.single_feature_relation([0.1, 0.4, 0.9, 0.6])
    ones = FuzzyRelation(matrix=np.ones((4, 4)))
    assert measures.fce(rel, ones) == 0.0
    identity = FuzzyRelation(matrix=np.eye(4))
    assert measures.fce(identity, rel) == 0.0
    crisp = fuzzy.crisp_label_relation([0, 0, 1, 1])
    assert measures.fce(ones, crisp) == pytest.approx(1.0, abs=1e-12)


def test_fmi_examples(rng):
    rel = fuzzy.single_feature_relation(rng.random(5))
    ones = FuzzyRelation(matrix=np.ones((5, 5)))
    assert measures.fmi(ones, rel) == pytest.approx(0.0, abs=1e-12)
    identity = FuzzyRelation(matrix=np.eye(5))
    assert measures.fmi(identity, identity) == pytest.approx(np.log2(5), abs=1e-12)


def test_entropy_identities_random_sweep(rng):
    # FMI = FE(F') + FE(FL) - FJE and FCE = FJE - FE(F') on random subsets
    for _ in range(100):
        table = random_table(rng, n_max=50, m_max=8)
        norm, rels, full, fl, fl_rel = build_context(table)
        size = int(rng.integers(1, norm.m + 1))
        subset = rng.choice(norm.m, size=size, replace=False)
        rel = fuzzy.conjoin([rels[j] for j in subset])
        fe_f = measures.fe(rel)
        fe_l = measures.fe(fl_rel)
        fje = measures.fje(rel, fl_rel)
        assert measures.fmi(rel, fl_rel) == pytest.approx(fe_f + fe_l - fje, abs=1e-9)
        assert measures.fce(rel, fl_rel) == pytest.approx(fje - fe_f, abs=1e-9)
        assert measures.fce(rel, fl_rel) >= -1e-12


def test_monotone_under_feature_addition(rng):
    # FE and FJE never decrease as the relation shrinks; FD never decreases
    for _ in range(20):
        table = random_table(rng, m_min=3)
        norm, rels, full, fl, fl_rel = build_context(table)
        running = FuzzyRelation(matrix=np.ones((norm.n, norm.n)))
        prev = {
            "fd": measures.fd(running, fl),
            "fe": measures.fe(running),
            "fje": measures.fje(running, fl_rel),
        }
        for j in range(norm.m):
            running = fuzzy.conjoin([running, rels[j]])
            now = {
                "fd": measures.fd(running, fl),
                "fe": measures.fe(running),
                "fje": measures.fje(running, fl_rel),
            }
            for key in prev:
                assert now[key] >= prev[key] - 1e-12
            prev = now


def test_permutation_invariance(rng):
    for _ in range(10):
        table = random_table(rng)
        norm, rels, full, fl, fl_rel = build_context(table)
        rel = rels[0]
        perm = rng.permutation(norm.n)
        rel_p = FuzzyRelation(matrix=rel.matrix[np.ix_(perm, perm)])
        fl_p = FuzzyLabelMatrix(memberships=fl.memberships[perm])
        flr_p = FuzzyRelation(matrix=fl_rel.matrix[np.ix_(perm, perm)])
        assert measures.fd(rel_p, fl_p) == pytest.approx(measures.fd(rel, fl), abs=1e-12)
        assert measures.fe(rel_p) == pytest.approx(measures.fe(rel), abs=1e-12)
        assert measures.fje(rel_p, flr_p) == pytest.approx(measures.fje(rel, fl_rel), abs=1e-12)
        assert measures.fce(rel_p, flr_p) == pytest.approx(measures.fce(rel, fl_rel), abs=1e-12)
        assert measures.fmi(rel_p, flr_p) == pytest.approx(measures.fmi(rel, fl_rel), abs=1e-12)


def make_fitness_context(table, kind, selected=()):
    norm, rels, full, fl, fl_rel = build_context(table)
    if selected:
        current = fuzzy.conjoin([rels[j] for j in selected])
        current = FuzzyRelation(matrix=current.matrix, subset=dataset.FeatureSubset(selected))
    else:
        current = FuzzyRelation(
            matrix=np.ones((norm.n, norm.n)), subset=dataset.FeatureSubset(())
        )
    value = measures.evaluate_value(kind, current.matrix, fl.memberships, fl_rel.matrix)
    return norm, FitnessContext(
        table=norm, fl=fl, fl_relation=fl_rel, current_relation=current, current_value=value
    )


def test_fitness_duplicate_column_is_zero(rng):
    table = random_table(rng, m_min=3)
    values = table.values.copy()
    values[:, 1] = values[:, 0]
    table = dataset.DataTable(values, table.labels, table.feature_names, table.class_names)
    for kind in MeasureKind:
        norm, ctx = make_fitness_context(table, kind, selected=(0,))
        assert measures.fitness(ctx, kind, 1) == pytest.approx(0.0, abs=1e-12)


def test_fitness_from_empty_set(rng):
    table = random_table(rng)
    norm, ctx = make_fitness_context(table, MeasureKind.FD)
    rels = [fuzzy.single_feature_relation(norm.values[:, j]) for j in range(norm.m)]
    baseline = ctx.current_value
    for j in range(norm.m):
        expected = measures.fd(rels[j], ctx.fl) - baseline
        assert measures.fitness(ctx, MeasureKind.FD, j) == pytest.approx(expected, abs=1e-12)


def test_fitness_fe_delta_nonnegative(rng):
    # adding a feature can only shrink similarity classes, so FE never drops
    for _ in range(10):
        table = random_table(rng, n_max=6, m_max=4, n_min=4)
        norm, ctx = make_fitness_context(table, MeasureKind.FE, selected=(0,))
        for j in range(1, norm.m):
            assert measures.fitness(ctx, MeasureKind.FE, j) >= -1e-12


def test_fitness_rejects_selected(rng):
    table = random_table(rng, m_min=2)
    _, ctx = make_fitness_context(table, MeasureKind.FD, selected=(0,))
    with pytest.raises(ValueError, match="already selected"):
        measures.fitness(ctx, MeasureKind.FD, 0)


def test_select_best():
    assert measures.select_best([(0, 0.2), (1, 0.5)], MeasureKind.FD) == 1
    assert measures.select_best([(0, 0.1), (1, 0.1)], MeasureKind.FCE) == 0
    assert measures.select_best([(2, 0.4), (5, 0.1)], MeasureKind.FE) == 5
    assert measures.select_best([(3, 0.4), (1, 0.4)], MeasureKind.FD) == 1
    with pytest.raises(ValueError):
        measures.select_best([], MeasureKind.FD)


def test_log_base_never_changes_ordering(rng):
    # entropy measures scale by a constant under base change, so every
    # candidate ordering (and hence each argmin/argmax) is base-independent
    for _ in range(10):
        table = random_table(rng, m_min=3)
        norm, rels, full, fl, fl_rel = build_context(table)
        for fn in (measures.fe, lambda r, base: measures.fje(r, fl_rel, base=base),
                   lambda r, base: measures.fce(r, fl_rel, base=base),
                   lambda r, base: measures.fmi(r, fl_rel, base=base)):
            base2 = [fn(rels[j], base=2) for j in range(norm.m)]
            basee = [fn(rels[j], base=np.e) for j in range(norm.m)]
            assert np.argsort(base2, kind="stable").tolist() == np.argsort(
                basee, kind="stable"
            ).tolist()
