"""Command-line surface: rank, eval, compare, sweep, rerun.

Exit codes: 0 success, 2 usage or validation error, 3 statistical
degeneracy, 4 data error. Every run writes a ``run.json`` with the resolved
configuration; ``mafrfs rerun run.json`` reproduces the outputs byte for
byte.
"""

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

import mafrfs
from mafrfs import dataset, evaluation, select
from mafrfs.errors import ConfigHashMismatch, DataError, PerfectConsistency
from mafrfs.evaluation import NEMENYI_Q_05

RANKING_FILE = "ranking_fold_{:02d}.json"


def _json_dump(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_lines(lines, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _file_sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def config_hash(data_path, label, folds, seed, selector_config):
    """Hash tying rankings to the dataset, fold plan and selector config."""
    payload = json.dumps(
        {
            "data_sha256": _file_sha256(data_path),
            "label": label,
            "folds": folds,
            "seed": seed,
            "selector": selector_config,
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _write_run_json(out_dir, command, args):
    args_dict = {k: v for k, v in vars(args).items()
                 if k not in ("handler", "subcommand")}
    args_dict["command"] = command
    _json_dump(
        {"command": command, "args": args_dict, "seed": args_dict.get("seed"),
         "version": mafrfs.__version__},
        out_dir / "run.json",
    )


def _selector_config(args, framework=None, measure=None, sop=None, strategy=None):
    return select.SelectorConfig(
        measure=measure if measure is not None else args.measure,
        sop=sop if sop is not None else args.sop,
        strategy=strategy if strategy is not None else args.strategy,
        k=args.k,
        framework=framework if framework is not None else args.framework,
        label_relation=args.label_relation,
        empty_wbmr=args.empty_wbmr,
        pool_context=args.pool_context,
        stop_at_constraint=args.stop_at_constraint,
        threads=args.threads,
    )


def cmd_rank(args):
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = _selector_config(args)
    print(f"seed: {args.seed}")
    table = dataset.load_csv(args.data, args.label)
    plan = dataset.stratified_kfold(table, args.folds, args.seed)
    with open(out_dir / "fold_plan.json", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(plan.to_json() + "\n")
    results = select.rank_all_folds(table, plan, cfg)
    digest = config_hash(args.data, args.label, args.folds, args.seed, cfg.to_dict())
    for result in results:
        payload = result.to_dict()
        payload["config_hash"] = digest
        _json_dump(payload, out_dir / RANKING_FILE.format(result.fold_id))
    _write_run_json(out_dir, "rank", args)

    positions = {}
    for result in results:
        for pos, feat in enumerate(result.order):
            positions.setdefault(feat, []).append(pos)
    print("feature,mean_rank_position")
    for feat in sorted(positions, key=lambda f: (np.mean(positions[f]), f)):
        mean_pos = float(np.mean(positions[feat]))
        print(f"{table.feature_names[feat]},{mean_pos!r}")
    print(f"wrote {len(results)} ranking files to {out_dir}")
    return 0


def _load_rankings(rankings_dir, expected_hash, folds):
    rankings = []
    for fold in range(folds):
        path = Path(rankings_dir) / RANKING_FILE.format(fold)
        if not path.exists():
            raise DataError(f"missing ranking file {path}")
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("config_hash") != expected_hash:
            raise ConfigHashMismatch(
                f"{path}: stored rankings were produced under a different "
                "dataset/fold/selector configuration"
            )
        result = select.RankingResult(
            order=payload["order"],
            fitness_trace=payload["fitness_trace"],
            margin_trace=payload["margin_trace"],
            pool_trace=payload["pool_trace"],
            config=select.SelectorConfig(**payload["config"]),
            fold_id=payload["fold"],
        )
        rankings.append(result)
    return rankings


def cmd_eval(args):
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    print(f"seed: {args.seed}")
    table = dataset.load_csv(args.data, args.label)
    plan = dataset.stratified_kfold(table, args.folds, args.seed)

    first = Path(args.rankings) / RANKING_FILE.format(0)
    if not first.exists():
        raise DataError(f"no rankings found in {args.rankings}")
    with open(first, "r", encoding="utf-8") as fh:
        stored_cfg = json.load(fh)["config"]
    expected = config_hash(args.data, args.label, args.folds, args.seed, stored_cfg)
    rankings = _load_rankings(args.rankings, expected, args.folds)

    report = evaluation.evaluate_ranking(
        table, plan, rankings, args.cuts, args.neighbors, args.cut_rounding,
        threads=args.threads,
    )
    _json_dump(report.to_dict(), out_dir / "cv_report.json")
    _write_lines(report.to_csv_rows(), out_dir / "cv_report.csv")
    _write_run_json(out_dir, "eval", args)
    for cut, acc in zip(report.cuts, report.mean_per_cut):
        print(f"cut {cut}%: mean accuracy {float(acc)!r}")
    print(f"grand mean: {report.grand_mean!r}")
    return 0


def _read_scores_csv(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    start = 1 if header and header[0].lower() in ("dataset", "data", "id", "") else 0
    names = header[start:]
    if len(names) < 2:
        raise ValueError("need at least 2 algorithm columns")
    scores = []
    for row in rows[1:]:
        if not row or not any(cell.strip() for cell in row):
            continue
        cells = row[start:]
        scores.append([float(c) if c.strip() else np.nan for c in cells])
    if len(scores) < 2:
        raise DataError("need at least 2 dataset rows")
    return np.asarray(scores, dtype=np.float64), names


def cmd_compare(args):
    scores, names = _read_scores_csv(args.scores)
    ranks = evaluation.rank_algorithms(scores, args.higher_is_better, names)
    s = scores.shape[1]
    q_alpha = args.q_alpha if args.q_alpha is not None else NEMENYI_Q_05.get(s)
    if q_alpha is None:
        raise ValueError(f"no default Nemenyi q for s={s}; pass --q-alpha")
    result = evaluation.friedman(ranks, q_alpha=q_alpha)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _json_dump(result.to_dict() | {"names": names, "q_alpha": q_alpha},
               out_dir / "friedman.json")
    _write_run_json(out_dir, "compare", args)
    print("algorithm,avg_rank")
    for name, rank in zip(names, result.avg_ranks):
        print(f"{name},{float(rank)!r}")
    print(f"chi_sq: {result.chi_sq!r}")
    print(f"f_stat: {result.f_stat!r}")
    print(f"dof: {result.dof[0]},{result.dof[1]}")
    print(f"cd (q_alpha={q_alpha}): {result.cd!r}")
    print("significant pairs (|avg rank diff| > cd):")
    for a in range(s):
        for b in range(a + 1, s):
            diff = abs(result.avg_ranks[a] - result.avg_ranks[b])
            if diff > result.cd:
                print(f"  {names[a]} vs {names[b]}: {float(diff)!r}")
    return 0


def cmd_sweep(args):
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    print(f"seed: {args.seed}")
    table = dataset.load_csv(args.data, args.label)
    plan = dataset.stratified_kfold(table, args.folds, args.seed)

    long_rows = ["measure,framework,sop,strategy,fold,cut,accuracy"]
    summary_rows = ["measure,framework,sop,strategy,grand_mean"]
    for measure in args.measures:
        for framework in args.frameworks:
            for sop in args.sops:
                for strategy in args.strategies:
                    cfg = _selector_config(
                        args, framework=framework, measure=measure, sop=sop,
                        strategy=strategy,
                    )
                    results = select.rank_all_folds(table, plan, cfg)
                    report = evaluation.evaluate_ranking(
                        table, plan, results, args.cuts, args.neighbors,
                        args.cut_rounding, threads=args.threads,
                    )
                    for f in range(plan.k):
                        for c, cut in enumerate(args.cuts):
                            long_rows.append(
                                f"{measure},{framework},{sop},{strategy},"
                                f"{f},{cut},{float(report.per_fold_accuracy[f, c])!r}"
                            )
                    summary_rows.append(
                        f"{measure},{framework},{sop},{strategy},{report.grand_mean!r}"
                    )
                    print(
                        f"{measure} {framework} sop={sop} {strategy}: "
                        f"grand mean {report.grand_mean!r}"
                    )
    _write_lines(long_rows, out_dir / "sweep.csv")
    _write_lines(summary_rows, out_dir / "sweep_summary.csv")
    _write_run_json(out_dir, "sweep", args)
    return 0


def cmd_rerun(args):
    with open(args.run_json, "r", encoding="utf-8") as fh:
        stored = json.load(fh)
    saved = dict(stored["args"])
    command = saved.pop("command")
    handler = {"rank": cmd_rank, "eval": cmd_eval, "compare": cmd_compare,
               "sweep": cmd_sweep}[command]
    return handler(argparse.Namespace(**saved))


def _csv_ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _csv_strs(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _add_selection_flags(sub):
    sub.add_argument("--framework", choices=["frfs", "mafrfs"], default="frfs")
    sub.add_argument("--measure", choices=["fd", "fe", "fje", "fce", "fmi"], default="fd")
    sub.add_argument("--sop", type=int, default=1, help="candidate pool size (mafrfs)")
    sub.add_argument("--strategy", choices=["global", "local"], default="global")
    sub.add_argument("--k", type=int, default=None, help="target feature count (default: all)")
    sub.add_argument("--label-relation", choices=["fuzzy", "crisp"], default="fuzzy",
                     dest="label_relation")
    sub.add_argument("--empty-wbmr", choices=["zero", "skip-first"], default="zero",
                     dest="empty_wbmr")
    sub.add_argument("--pool-context", choices=["with-pool", "without-pool"],
                     default="with-pool", dest="pool_context")
    sub.add_argument("--stop-at-constraint", type=float, default=None,
                     dest="stop_at_constraint",
                     help="stop frfs/fd once FD reaches this fraction of full-set FD")


def _add_common_flags(sub):
    sub.add_argument("--data", required=True, help="CSV dataset path")
    sub.add_argument("--label", default="last", help="label column name, or 'last'")
    sub.add_argument("--folds", type=int, default=10)
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: MAFRFS_THREADS or 1)")
    sub.add_argument("--out", default=".", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(prog="mafrfs", description=__doc__)
    parser.add_argument("--version", action="version", version=mafrfs.__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    rank = subs.add_parser("rank", help="rank features per CV fold")
    _add_common_flags(rank)
    _add_selection_flags(rank)
    rank.set_defaults(handler=cmd_rank)

    ev = subs.add_parser("eval", help="evaluate stored rankings with KNN")
    _add_common_flags(ev)
    ev.add_argument("--rankings", required=True, help="directory with ranking files")
    ev.add_argument("--cuts", type=_csv_ints, default=[30, 50, 70, 90])
    ev.add_argument("--neighbors", type=int, default=5, help="KNN neighbor count")
    ev.add_argument("--cut-rounding", choices=["round", "ceil", "floor"],
                    default="round", dest="cut_rounding")
    ev.set_defaults(handler=cmd_eval)

    cmp_ = subs.add_parser("compare", help="Friedman/Nemenyi over a score table")
    cmp_.add_argument("--scores", required=True, help="CSV of datasets x algorithms")
    cmp_.add_argument("--q-alpha", type=float, default=None, dest="q_alpha")
    group = cmp_.add_mutually_exclusive_group()
    group.add_argument("--higher-is-better", dest="higher_is_better",
                       action="store_true", default=True)
    group.add_argument("--lower-is-better", dest="higher_is_better",
                       action="store_false")
    cmp_.add_argument("--out", default=".")
    cmp_.set_defaults(handler=cmd_compare)

    sweep = subs.add_parser("sweep", help="Cartesian parameter sweep")
    _add_common_flags(sweep)
    sweep.add_argument("--measures", type=_csv_strs, default=["fd"])
    sweep.add_argument("--frameworks", type=_csv_strs, default=["mafrfs"])
    sweep.add_argument("--sops", type=_csv_ints, default=[2, 3, 4])
    sweep.add_argument("--strategies", type=_csv_strs, default=["global", "local"])
    sweep.add_argument("--k", type=int, default=None)
    sweep.add_argument("--cuts", type=_csv_ints, default=[30, 50, 70, 90])
    sweep.add_argument("--neighbors", type=int, default=5)
    sweep.add_argument("--cut-rounding", choices=["round", "ceil", "floor"],
                       default="round", dest="cut_rounding")
    sweep.add_argument("--label-relation", choices=["fuzzy", "crisp"],
                       default="fuzzy", dest="label_relation")
    sweep.add_argument("--empty-wbmr", choices=["zero", "skip-first"],
                       default="zero", dest="empty_wbmr")
    sweep.add_argument("--pool-context", choices=["with-pool", "without-pool"],
                       default="with-pool", dest="pool_context")
    sweep.set_defaults(handler=cmd_sweep, stop_at_constraint=None)

    rerun = subs.add_parser("rerun", help="replay a run.json")
    rerun.add_argument("run_json")
    rerun.set_defaults(handler=cmd_rerun)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except PerfectConsistency as exc:
        print(f"mafrfs: error: PerfectConsistency: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"mafrfs: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"mafrfs: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    except (ValueError, IndexError) as exc:
        print(f"mafrfs: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
