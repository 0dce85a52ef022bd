"""The two greedy search frameworks.

``frfs_rank`` extremizes an uncertainty-measure fitness at every step.
``mafrfs_rank`` adds a second stage: the fitness builds a pool of ``sop``
candidates, then the pool member that changes the within/between-class
margin ratio least (argmin varpi) is selected. Both are run to a full
feature ranking by default.
"""

from dataclasses import dataclass, field

import numpy as np

from mafrfs import dataset, fuzzy, kernels, margins, measures
from mafrfs.margins import MarginStrategy
from mafrfs.measures import MeasureKind
from mafrfs.parallel import ordered_map, resolve_threads


@dataclass(frozen=True)
class SelectorConfig:
    """Search parameters plus the behavior flags other modules expose."""

    measure: MeasureKind = MeasureKind.FD
    sop: int = 1
    strategy: MarginStrategy = MarginStrategy.GLOBAL
    k: int = None
    framework: str = "frfs"
    label_relation: str = "fuzzy"
    empty_wbmr: str = "zero"
    pool_context: str = "with-pool"
    stop_at_constraint: float = None
    threads: int = None

    def __post_init__(self):
        if isinstance(self.measure, str):
            object.__setattr__(self, "measure", MeasureKind(self.measure))
        if isinstance(self.strategy, str):
            object.__setattr__(self, "strategy", MarginStrategy(self.strategy))
        if self.sop < 1:
            raise ValueError(f"sop must be >= 1, got {self.sop}")
        if self.framework not in ("frfs", "mafrfs"):
            raise ValueError(f"unknown framework {self.framework!r}")
        if self.label_relation not in ("fuzzy", "crisp"):
            raise ValueError(f"unknown label relation {self.label_relation!r}")
        if self.empty_wbmr not in ("zero", "skip-first"):
            raise ValueError(f"unknown empty-wbmr mode {self.empty_wbmr!r}")
        if self.pool_context not in ("with-pool", "without-pool"):
            raise ValueError(f"unknown pool context {self.pool_context!r}")
        if self.stop_at_constraint is not None and not (
            self.framework == "frfs" and self.measure is MeasureKind.FD
        ):
            raise ValueError("--stop-at-constraint applies only to frfs with measure fd")

    def to_dict(self):
        return {
            "measure": self.measure.value,
            "sop": self.sop,
            "strategy": self.strategy.value,
            "k": self.k,
            "framework": self.framework,
            "label_relation": self.label_relation,
            "empty_wbmr": self.empty_wbmr,
            "pool_context": self.pool_context,
            "stop_at_constraint": self.stop_at_constraint,
        }


@dataclass
class RankingResult:
    """Feature ranking with per-step traces.

    ``margin_trace`` and ``pool_trace`` are empty for FRFS. ``stats`` counts
    candidate evaluations (fitness scans and margin scans) for complexity
    auditing.
    """

    order: list
    fitness_trace: list
    margin_trace: list
    pool_trace: list
    config: SelectorConfig
    fold_id: int = None
    stats: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "fold": self.fold_id,
            "order": self.order,
            "fitness_trace": self.fitness_trace,
            "margin_trace": self.margin_trace,
            "pool_trace": self.pool_trace,
            "stats": self.stats,
        }


class _SearchState:
    """Normalized view, frozen fuzzy labels and the running conjunction."""

    def __init__(self, table, cfg):
        norm = dataset.normalize(table)
        self.table = norm
        self.values = np.ascontiguousarray(norm.values)
        self.labels = norm.labels
        self.n, self.m = self.values.shape
        k = cfg.k if cfg.k is not None else self.m
        if not 1 <= k <= self.m:
            raise ValueError(f"k must be in [1, {self.m}], got {k}")
        self.k = k
        self.threads = resolve_threads(cfg.threads)

        full = np.ones((self.n, self.n), dtype=np.float64)
        for t in range(self.m):
            kernels.conjoin_inplace(full, self.values[:, t])
        full_relation = fuzzy.FuzzyRelation(matrix=full, subset=None)
        self.fl = fuzzy.fuzzy_label(full_relation, self.labels)
        if cfg.label_relation == "crisp":
            self.fl_relation = fuzzy.crisp_label_relation(self.labels)
        else:
            self.fl_relation = fuzzy.label_relation(self.fl)
        self.full_value = measures.evaluate_value(
            cfg.measure, full, self.fl.memberships, self.fl_relation.matrix
        )

        self.current = np.ones((self.n, self.n), dtype=np.float64)
        self.current_value = measures.evaluate_value(
            cfg.measure, self.current, self.fl.memberships, self.fl_relation.matrix
        )
        self.fitness_evals = 0
        self.margin_evals = 0

    def scan(self, kind, matrix, candidates):
        """Measure values of ``matrix`` conjoined with each candidate column."""
        fl_m = self.fl.memberships
        flr_m = self.fl_relation.matrix

        def one(t):
            return measures.scan_value(kind, matrix, self.values[:, t], fl_m, flr_m)

        values = ordered_map(one, candidates, self.threads)
        self.fitness_evals += len(candidates)
        return values

    def advance(self, kind, choice):
        """Append ``choice`` to the running conjunction; returns its measure value."""
        value = measures.scan_value(
            kind,
            self.current,
            self.values[:, choice],
            self.fl.memberships,
            self.fl_relation.matrix,
        )
        kernels.conjoin_inplace(self.current, self.values[:, choice])
        self.current_value = value
        return value


def frfs_rank(table, cfg):
    """Greedy fitness-only ranking (addition structure)."""
    if cfg.framework != "frfs":
        raise ValueError("config framework must be 'frfs'")
    state = _SearchState(table, cfg)
    kind = cfg.measure
    remaining = list(range(state.m))
    order, trace = [], []
    for _ in range(state.k):
        values = state.scan(kind, state.current, remaining)
        deltas = dict(zip(remaining, (v - state.current_value for v in values)))
        choice = measures.select_best(list(deltas.items()), kind)
        trace.append(deltas[choice])
        order.append(choice)
        remaining.remove(choice)
        state.advance(kind, choice)
        if (
            cfg.stop_at_constraint is not None
            and state.current_value >= cfg.stop_at_constraint * state.full_value
        ):
            break
    return RankingResult(
        order=order,
        fitness_trace=trace,
        margin_trace=[],
        pool_trace=[],
        config=cfg,
        stats={"fitness_evals": state.fitness_evals, "margin_evals": 0},
    )


def mafrfs_rank(table, cfg):
    """Two-stage ranking: fitness builds a pool, margin variation selects."""
    if cfg.framework != "mafrfs":
        raise ValueError("config framework must be 'mafrfs'")
    state = _SearchState(table, cfg)
    kind = cfg.measure
    with_pool = cfg.pool_context == "with-pool"
    remaining = list(range(state.m))
    order, fitness_trace, margin_trace, pool_trace = [], [], [], []

    for _ in range(state.k):
        pool, pool_psi = [], {}
        pool_matrix = state.current
        pool_value = state.current_value
        pool_size = min(cfg.sop, len(remaining))
        for _slot in range(pool_size):
            candidates = [t for t in remaining if t not in pool]
            values = state.scan(kind, pool_matrix, candidates)
            deltas = dict(zip(candidates, (v - pool_value for v in values)))
            choice = measures.select_best(list(deltas.items()), kind)
            pool.append(choice)
            pool_psi[choice] = deltas[choice]
            if with_pool and _slot + 1 < pool_size:
                if pool_matrix is state.current:
                    pool_matrix = state.current.copy()
                chosen_value = dict(zip(candidates, values))[choice]
                kernels.conjoin_inplace(pool_matrix, state.values[:, choice])
                pool_value = chosen_value

        if cfg.empty_wbmr == "skip-first" and not order:
            chosen = pool[0]
            varpi = None
            report = margins.wbmr(state.values[:, [chosen]], state.labels, cfg.strategy)
        else:
            if order:
                before = margins.wbmr_value(
                    margins.wbmr(state.values[:, order], state.labels, cfg.strategy),
                    cfg.strategy,
                )
            else:
                before = 0.0
            scored = []
            reports = {}
            for t in pool:
                report_t = margins.wbmr(
                    state.values[:, order + [t]], state.labels, cfg.strategy
                )
                scored.append((t, margins.wbmr_value(report_t, cfg.strategy) - before))
                reports[t] = report_t
            state.margin_evals += len(pool)
            chosen = margins.select_min_varpi(scored)
            varpi = dict(scored)[chosen]
            report = reports[chosen]

        order.append(chosen)
        fitness_trace.append(pool_psi[chosen])
        margin_trace.append({"varpi": varpi, **report.to_dict()})
        pool_trace.append(list(pool))
        remaining.remove(chosen)
        state.advance(kind, chosen)

    return RankingResult(
        order=order,
        fitness_trace=fitness_trace,
        margin_trace=margin_trace,
        pool_trace=pool_trace,
        config=cfg,
        stats={"fitness_evals": state.fitness_evals, "margin_evals": state.margin_evals},
    )


def rank(table, cfg):
    """Dispatch on the configured framework."""
    if cfg.framework == "frfs":
        return frfs_rank(table, cfg)
    return mafrfs_rank(table, cfg)


def rank_all_folds(table, plan, cfg):
    """One ranking per fold, each fit on that fold's training rows only."""
    results = []
    for fold in range(plan.k):
        train = dataset.fold_train_table(table, plan, fold)
        result = rank(train, cfg)
        result.fold_id = fold
        results.append(result)
    return results
