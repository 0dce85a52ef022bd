import json
from pathlib import Path

import pytest

from conftest import perfectly_separable_table, random_table, write_csv
from mafrfs import cli


def run_cli(argv, capsys=None):
    code = cli.main(argv)
    return code


@pytest.fixture
def small_csv(tmp_path, rng):
    table = random_table(rng, n_min=18, n_max=24, m_min=5, m_max=6)
    path = tmp_path / "small.csv"
    write_csv(path, table)
    return path


def read_dir(path):
    """Map of file name -> bytes for every file under path."""
    return {
        p.name: p.read_bytes() for p in sorted(Path(path).rglob("*")) if p.is_file()
    }


def test_rank_writes_files_and_summary(small_csv, tmp_path, capsys):
    out = tmp_path / "out"
    code = run_cli([
        "rank", "--data", str(small_csv), "--label", "last",
        "--framework", "mafrfs", "--measure", "fd", "--sop", "3",
        "--strategy", "global", "--folds", "3", "--seed", "42",
        "--out", str(out),
    ])
    assert code == 0
    captured = capsys.readouterr().out
    assert "seed: 42" in captured
    assert "feature,mean_rank_position" in captured
    files = sorted(p.name for p in out.iterdir())
    assert files == [
        "fold_plan.json",
        "ranking_fold_00.json", "ranking_fold_01.json", "ranking_fold_02.json",
        "run.json",
    ]
    plan = json.loads((out / "fold_plan.json").read_text())
    assert plan["k"] == 3 and plan["seed"] == 42 and len(plan["assignments"]) > 0
    payload = json.loads((out / "ranking_fold_00.json").read_text())
    assert payload["fold"] == 0
    assert payload["config"]["framework"] == "mafrfs"
    assert len(payload["pool_trace"]) == len(payload["order"])
    assert "config_hash" in payload


def test_rank_sop1_equals_frfs(small_csv, tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert run_cli(["rank", "--data", str(small_csv), "--framework", "mafrfs",
                    "--sop", "1", "--folds", "3", "--out", str(out_a)]) == 0
    assert run_cli(["rank", "--data", str(small_csv), "--framework", "frfs",
                    "--folds", "3", "--out", str(out_b)]) == 0
    for fold in range(3):
        a = json.loads((out_a / f"ranking_fold_0{fold}.json").read_text())
        b = json.loads((out_b / f"ranking_fold_0{fold}.json").read_text())
        assert a["order"] == b["order"]


def test_rank_invalid_sop_usage_error(small_csv, tmp_path, capsys):
    code = run_cli(["rank", "--data", str(small_csv), "--sop", "0",
                    "--out", str(tmp_path / "x")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_rank_missing_data_is_data_error(tmp_path, capsys):
    code = run_cli(["rank", "--data", str(tmp_path / "nope.csv"),
                    "--out", str(tmp_path / "x")])
    assert code == 4
    err = capsys.readouterr().err
    assert err.count("\n") == 1  # single-line machine-parsable error
    assert "mafrfs: error:" in err


def test_eval_after_rank(small_csv, tmp_path, capsys):
    ranks = tmp_path / "ranks"
    run_cli(["rank", "--data", str(small_csv), "--folds", "3", "--out", str(ranks)])
    out = tmp_path / "eval"
    code = run_cli([
        "eval", "--data", str(small_csv), "--rankings", str(ranks),
        "--folds", "3", "--cuts", "30,50,70,90", "--neighbors", "3",
        "--out", str(out),
    ])
    assert code == 0
    captured = capsys.readouterr().out
    assert "grand mean:" in captured
    report = json.loads((out / "cv_report.json").read_text())
    assert report["cuts"] == [30, 50, 70, 90]
    csv_text = (out / "cv_report.csv").read_text()
    assert csv_text.splitlines()[0] == "fold,cut,accuracy"


def test_eval_separable_grand_mean_one(tmp_path):
    table = perfectly_separable_table(n_per_class=9, m=4, seed=4)
    path = tmp_path / "sep.csv"
    write_csv(path, table)
    ranks = tmp_path / "ranks"
    run_cli(["rank", "--data", str(path), "--folds", "3", "--out", str(ranks)])
    out = tmp_path / "eval"
    code = run_cli(["eval", "--data", str(path), "--rankings", str(ranks),
                    "--folds", "3", "--neighbors", "3", "--out", str(out)])
    assert code == 0
    report = json.loads((out / "cv_report.json").read_text())
    assert report["grand_mean"] == 1.0


def test_eval_seed_mismatch_refused(small_csv, tmp_path, capsys):
    ranks = tmp_path / "ranks"
    run_cli(["rank", "--data", str(small_csv), "--folds", "3", "--seed", "42",
             "--out", str(ranks)])
    code = run_cli(["eval", "--data", str(small_csv), "--rankings", str(ranks),
                    "--folds", "3", "--seed", "43", "--out", str(tmp_path / "e")])
    assert code == 4
    assert "ConfigHashMismatch" in capsys.readouterr().err


def test_eval_cut_sizes(tmp_path, rng):
    # m = 10 with cuts 30/50/70/90 uses 3/5/7/9 features
    table = random_table(rng, n_min=20, n_max=24, m_min=10, m_max=10)
    path = tmp_path / "ten.csv"
    write_csv(path, table)
    ranks = tmp_path / "ranks"
    run_cli(["rank", "--data", str(path), "--folds", "2", "--out", str(ranks)])
    from mafrfs.evaluation import cut_count
    assert [cut_count(c, 10) for c in (30, 50, 70, 90)] == [3, 5, 7, 9]


def test_compare_derived_matrix(tmp_path, capsys):
    scores = tmp_path / "scores.csv"
    # higher is better; rows engineered to give ranks
    # (1,2,3),(1,2,3),(2,1,3),(1,3,2)
    scores.write_text(
        "dataset,algA,algB,algC\n"
        "d1,0.9,0.8,0.7\n"
        "d2,0.9,0.8,0.7\n"
        "d3,0.8,0.9,0.7\n"
        "d4,0.9,0.7,0.8\n"
    )
    out = tmp_path / "cmp"
    code = run_cli(["compare", "--scores", str(scores), "--out", str(out)])
    assert code == 0
    captured = capsys.readouterr().out
    assert "f_stat: 3.857142857142857" in captured
    payload = json.loads((out / "friedman.json").read_text())
    assert payload["chi_sq"] == pytest.approx(4.5, abs=1e-9)
    assert payload["f_stat"] == pytest.approx(27 / 7, abs=1e-9)
    assert payload["avg_ranks"] == [1.25, 2.0, 2.75]


def test_compare_cd_paper_value(tmp_path, capsys, rng):
    # s=8 algorithms over N=15 datasets with q_alpha=3.0310 -> CD 2.7110
    scores = tmp_path / "scores.csv"
    header = "dataset," + ",".join(f"a{j}" for j in range(8))
    rows = [header]
    for i in range(15):
        rows.append(f"d{i}," + ",".join(repr(float(x)) for x in rng.random(8)))
    scores.write_text("\n".join(rows) + "\n")
    out = tmp_path / "cmp"
    code = run_cli(["compare", "--scores", str(scores), "--q-alpha", "3.0310",
                    "--out", str(out)])
    assert code == 0
    payload = json.loads((out / "friedman.json").read_text())
    assert payload["cd"] == pytest.approx(2.7110, abs=1e-4)


def test_compare_one_column_usage_error(tmp_path, capsys):
    scores = tmp_path / "one.csv"
    scores.write_text("dataset,alg\nd1,0.5\nd2,0.6\n")
    code = run_cli(["compare", "--scores", str(scores), "--out", str(tmp_path / "c")])
    assert code == 2


def test_compare_perfect_consistency_exit_3(tmp_path, capsys):
    scores = tmp_path / "perf.csv"
    scores.write_text("dataset,a,b,c\nd1,0.9,0.8,0.7\nd2,0.9,0.8,0.7\nd3,0.9,0.8,0.7\n")
    code = run_cli(["compare", "--scores", str(scores), "--out", str(tmp_path / "c")])
    assert code == 3
    assert "PerfectConsistency" in capsys.readouterr().err


def test_sweep_cardinality_and_sop1_strategy_equality(small_csv, tmp_path):
    out = tmp_path / "sweep"
    code = run_cli([
        "sweep", "--data", str(small_csv), "--folds", "2",
        "--measures", "fd", "--frameworks", "mafrfs", "--sops", "1,2",
        "--strategies", "global,local", "--cuts", "50,100", "--neighbors", "3",
        "--out", str(out),
    ])
    assert code == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "measure,framework,sop,strategy,fold,cut,accuracy"
    # 1 measure x 1 framework x 2 sops x 2 strategies x 2 folds x 2 cuts
    assert len(lines) == 1 + 2 * 2 * 2 * 2
    summary = (out / "sweep_summary.csv").read_text().splitlines()
    assert len(summary) == 1 + 4
    # singleton pool: margin stage sees one candidate, so strategy is moot
    rows = [line.split(",") for line in lines[1:]]
    sop1 = {(r[4], r[5]): (r[3], r[6]) for r in rows if r[2] == "1" and r[3] == "global"}
    for r in rows:
        if r[2] == "1" and r[3] == "local":
            assert sop1[(r[4], r[5])][1] == r[6]


def test_sweep_byte_identical_reruns(small_csv, tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    argv = ["sweep", "--data", str(small_csv), "--folds", "2", "--measures", "fd,fce",
            "--frameworks", "frfs,mafrfs", "--sops", "2", "--strategies", "global",
            "--cuts", "50", "--neighbors", "3"]
    assert run_cli(argv + ["--out", str(out_a)]) == 0
    assert run_cli(argv + ["--out", str(out_b)]) == 0
    a, b = read_dir(out_a), read_dir(out_b)
    assert a.keys() == b.keys()
    for name in a:
        if name == "run.json":
            continue  # differs in the --out path by construction
        assert a[name] == b[name], name


def test_rerun_reproduces_outputs(small_csv, tmp_path):
    out = tmp_path / "o"
    run_cli(["rank", "--data", str(small_csv), "--folds", "2", "--out", str(out)])
    first = read_dir(out)
    code = run_cli(["rerun", str(out / "run.json")])
    assert code == 0
    assert read_dir(out) == first


def test_threads_do_not_change_outputs(small_csv, tmp_path):
    out_1 = tmp_path / "t1"
    out_8 = tmp_path / "t8"
    base = ["rank", "--data", str(small_csv), "--framework", "mafrfs", "--sop", "2",
            "--folds", "3"]
    assert run_cli(base + ["--threads", "1", "--out", str(out_1)]) == 0
    assert run_cli(base + ["--threads", "8", "--out", str(out_8)]) == 0
    a, b = read_dir(out_1), read_dir(out_8)
    for name in a:
        if name == "run.json":
            continue  # records the differing --threads/--out arguments
        assert a[name] == b[name], name


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
