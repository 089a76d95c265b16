import csv
import json
import math

import pytest

from dagsep import (
    ExperimentConfig,
    FormatError,
    bound_random_z,
    BoundInput,
    is_d_separated,
    load_config,
    run_experiment,
    sample_bernoulli_set,
    write_config,
    write_csv,
)
from dagsep.experiments import (
    SUMMARY_COLUMNS,
    TRIAL_COLUMNS,
    SummaryRecord,
    TrialRecord,
    run_fig1,
    write_summary_csv,
    write_trials_csv,
)
from dagsep.graph import Dag, NodePair, generate_random_dag, GenParams
from dagsep.rng import split_seed


def small_fig1(tmp_path, **overrides):
    base = dict(
        scenario="fig1_random_z",
        n_values=(10, 14),
        p1=0.2,
        p2_values=(0.4,),
        pairs_per_graph=4,
        sets_per_pair=10,
        root_seed=9001,
        output_path=str(tmp_path / "fig1"),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_config_round_trip(tmp_path):
    cfg = small_fig1(tmp_path)
    path = tmp_path / "config.json"
    write_config(cfg, str(path))
    assert load_config(str(path)) == cfg


def test_config_rejects_unknown_scenario(tmp_path):
    with pytest.raises(ValueError):
        small_fig1(tmp_path, scenario="figure_one")


def test_config_rejects_missing_required_fields(tmp_path):
    with pytest.raises(ValueError, match="p2_values"):
        small_fig1(tmp_path, p2_values=None)
    with pytest.raises(ValueError, match="pair_i"):
        ExperimentConfig(
            scenario="bound_random_z",
            n_values=(10,),
            p1=0.4,
            p2_values=(0.5,),
            pair_j=9,
            graphs_per_point=5,
            root_seed=1,
            output_path=str(tmp_path / "x"),
        )


def test_config_rejects_bad_ranges(tmp_path):
    with pytest.raises(ValueError):
        small_fig1(tmp_path, p1=0.0)
    with pytest.raises(ValueError):
        small_fig1(tmp_path, n_values=())
    with pytest.raises(ValueError):
        small_fig1(tmp_path, root_seed=-1)
    with pytest.raises(ValueError):
        small_fig1(tmp_path, p2_values=(0.4, 1.0))


def test_load_config_rejects_unknown_field(tmp_path):
    cfg = small_fig1(tmp_path)
    path = tmp_path / "config.json"
    write_config(cfg, str(path))
    blob = json.loads(path.read_text())
    blob["speed"] = "maximum"
    path.write_text(json.dumps(blob))
    with pytest.raises(ValueError, match="speed"):
        load_config(str(path))


def test_load_config_rejects_bad_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{not json")
    with pytest.raises(FormatError):
        load_config(str(path))


def test_run_writes_three_files(tmp_path):
    out = run_experiment(small_fig1(tmp_path))
    assert out.config_path.endswith("config.json")
    assert out.trials_path.endswith("trials.csv")
    assert out.summary_path.endswith("summary.csv")
    trows = read_rows(out.trials_path)
    srows = read_rows(out.summary_path)
    assert list(trows[0].keys()) == list(TRIAL_COLUMNS)
    assert list(srows[0].keys()) == list(SUMMARY_COLUMNS)
    # 2 n-values x 1 p2 x 4 pairs
    assert len(trows) == 8
    assert len(srows) == 2
    assert {r["stat_name"] for r in trows} == {"dsep_ratio"}
    assert {r["stat_name"] for r in srows} == {"max_ratio"}


def test_rerun_is_byte_identical(tmp_path):
    a = run_experiment(small_fig1(tmp_path, output_path=str(tmp_path / "a")))
    b = run_experiment(small_fig1(tmp_path, output_path=str(tmp_path / "b")))
    for pa, pb in (
        (a.trials_path, b.trials_path),
        (a.summary_path, b.summary_path),
    ):
        with open(pa, "rb") as fa, open(pb, "rb") as fb:
            assert fa.read() == fb.read()


def test_fig1_max_ratio_matches_trials(tmp_path):
    out = run_experiment(small_fig1(tmp_path))
    trows = read_rows(out.trials_path)
    srows = read_rows(out.summary_path)
    for srow in srows:
        group = [
            float(t["stat_value"])
            for t in trows
            if t["n"] == srow["n"] and t["p2"] == srow["param_value"]
        ]
        assert float(srow["value"]) == max(group)
        assert srow["stderr"] == ""


def test_fig1_ratio_reproducible_from_seeds(tmp_path):
    # replay one trial row from its recorded graph seed and pair
    cfg = small_fig1(tmp_path)
    out = run_experiment(cfg)
    row = read_rows(out.trials_path)[0]
    n = int(row["n"])
    dag = generate_random_dag(GenParams(n, cfg.p1, int(row["graph_seed"])))
    pair = NodePair(int(row["i"]), int(row["j"]))
    p2 = float(row["p2"])
    p2_idx = cfg.p2_values.index(p2)
    hits = 0
    for s in range(cfg.sets_per_pair):
        z = sample_bernoulli_set(
            n, pair, p2, split_seed(int(row["graph_seed"]), 2, p2_idx, s)
        )
        hits += is_d_separated(dag, pair, z)
    assert float(row["stat_value"]) == hits / cfg.sets_per_pair
    want_bound = bound_random_z(
        BoundInput(n=n, p1=cfg.p1, j=pair.j + 1, p2=p2)
    )
    assert float(row["bound_value"]) == want_bound


def test_fig1_single_set_ratios_are_binary(tmp_path):
    out = run_experiment(small_fig1(tmp_path, sets_per_pair=1))
    assert all(
        float(r["stat_value"]) in (0.0, 1.0) for r in read_rows(out.trials_path)
    )


def test_fig1_warning_row_on_pair_shortfall(tmp_path):
    # n=4 has at most 6 pairs; ask for more than can exist
    cfg = small_fig1(tmp_path, n_values=(4,), pairs_per_graph=7, p1=0.01)
    out = run_experiment(cfg)
    trows = read_rows(out.trials_path)
    warnings = [r for r in trows if r["stat_name"] == "pairs_available_warning"]
    assert len(warnings) == 1
    assert warnings[0]["stat_value"] != ""
    data = [r for r in trows if r["stat_name"] == "dsep_ratio"]
    assert 0 < len(data) <= 6


def test_bound_scenarios_condition_by_edge_excision(tmp_path):
    cfg = ExperimentConfig(
        scenario="bound_random_z",
        n_values=(10,),
        p1=0.6,
        p2_values=(0.5,),
        pair_i=2,
        pair_j=8,
        graphs_per_point=40,
        root_seed=77,
        output_path=str(tmp_path / "brz"),
    )
    out = run_experiment(cfg)
    rows = read_rows(out.trials_path)
    assert len(rows) == 40
    for row in rows:
        assert (int(row["i"]), int(row["j"])) == (1, 7)
        dag = generate_random_dag(GenParams(10, 0.6, int(row["graph_seed"])))
        # the conditioned graph must drop any realized direct edge
        assert float(row["stat_value"]) in (0.0, 1.0)
    srow = read_rows(out.summary_path)[0]
    assert srow["stat_name"] == "mean"
    want = bound_random_z(BoundInput(n=10, p1=0.6, j=8, p2=0.5))
    assert float(srow["bound_value"]) == want


def test_bounded_size_records_sizes_and_misses(tmp_path):
    cfg = ExperimentConfig(
        scenario="bound_bounded_size",
        n_values=(10,),
        p1=0.8,
        pair_i=2,
        pair_j=10,
        graphs_per_point=30,
        root_seed=78,
        output_path=str(tmp_path / "bbs"),
    )
    out = run_experiment(cfg)
    rows = read_rows(out.trials_path)
    assert {r["stat_name"] for r in rows} == {"min_sep_size"}
    threshold = 0.5 * 0.8**2 * (10 - 2)
    s_max = math.floor(threshold)
    for r in rows:
        if r["stat_value"] != "":
            assert float(r["stat_value"]) <= s_max
    srow = read_rows(out.summary_path)[0]
    assert srow["param_name"] == "s_max"
    assert int(srow["param_value"]) == s_max
    found = sum(1 for r in rows if r["stat_value"] != "")
    assert float(srow["value"]) == found / len(rows)


def test_sgs_scenario_zero_edge_graph_costs_one_call(tmp_path):
    cfg = ExperimentConfig(
        scenario="sgs_calls",
        n_values=(5,),
        p1=0.05,
        pair_i=1,
        pair_j=5,
        graphs_per_point=60,
        root_seed=79,
        output_path=str(tmp_path / "sgs"),
    )
    out = run_experiment(cfg)
    rows = read_rows(out.trials_path)
    hit = 0
    for row in rows:
        dag = generate_random_dag(GenParams(5, 0.05, int(row["graph_seed"])))
        if dag.edge_count == 0:
            assert float(row["stat_value"]) == 1.0
            hit += 1
    assert hit > 0


def test_sparsity_zero_density_draw(tmp_path):
    cfg = ExperimentConfig(
        scenario="sparsity_curve",
        n_values=(5,),
        p1=0.05,
        graphs_per_point=80,
        root_seed=80,
        output_path=str(tmp_path / "spc"),
    )
    out = run_experiment(cfg)
    rows = read_rows(out.trials_path)
    hit = 0
    for row in rows:
        dag = generate_random_dag(GenParams(5, 0.05, int(row["graph_seed"])))
        if dag.edge_count == 0:
            assert float(row["stat_value"]) == 0.5**10
            hit += 1
    assert hit > 0


def test_graph_seeds_unique_across_points_and_trials(tmp_path):
    cfg = small_fig1(tmp_path, n_values=(8, 10, 12), graphs_per_point=5)
    out = run_experiment(cfg)
    seeds = {
        (r["n"], r["graph_seed"]) for r in read_rows(out.trials_path)
    }
    plain = [r["graph_seed"] for r in read_rows(out.trials_path)]
    # same graph seed may repeat across pairs within a graph, but distinct
    # (point, trial) combinations never collide
    assert len({s for (_, s) in seeds}) == len(seeds)
    assert len(seeds) == 3 * 5 * len(cfg.p2_values)
    assert len(plain) == 3 * 5 * 4


def test_write_csv_dispatch_and_rejects(tmp_path):
    trial = TrialRecord(
        scenario="fig1_random_z",
        n=10,
        p1=0.2,
        p2=0.4,
        alpha=None,
        c_max=None,
        graph_seed=5,
        i=0,
        j=3,
        stat_name="dsep_ratio",
        stat_value=0.5,
        bound_value=None,
    )
    summary = SummaryRecord(
        scenario="fig1_random_z",
        n=10,
        p1=0.2,
        param_name="p2",
        param_value=0.4,
        stat_name="max_ratio",
        value=0.5,
        stderr=None,
        sample_count=4,
        bound_value=None,
    )
    t_path = tmp_path / "t.csv"
    s_path = tmp_path / "s.csv"
    write_csv([trial], str(t_path))
    write_csv([summary], str(s_path))
    assert read_rows(str(t_path))[0]["stat_name"] == "dsep_ratio"
    assert read_rows(str(s_path))[0]["stat_name"] == "max_ratio"
    with pytest.raises(ValueError):
        write_csv([], str(tmp_path / "e.csv"))
    with pytest.raises(ValueError):
        write_csv([trial, summary], str(tmp_path / "m.csv"))


def test_csv_uses_repr_floats_and_lf_endings(tmp_path):
    rec = SummaryRecord(
        scenario="fig1_random_z",
        n=10,
        p1=0.1,
        param_name="p2",
        param_value=0.3,
        stat_name="max_ratio",
        value=1 / 3,
        stderr=None,
        sample_count=3,
        bound_value=None,
    )
    path = tmp_path / "s.csv"
    write_summary_csv([rec], str(path))
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert b"0.3333333333333333" in raw
    assert raw.endswith(b"\n")


def test_trial_csv_writer_round_trips_none(tmp_path):
    rec = TrialRecord(
        scenario="bound_bounded_size",
        n=10,
        p1=0.8,
        p2=None,
        alpha=None,
        c_max=None,
        graph_seed=3,
        i=1,
        j=9,
        stat_name="min_sep_size",
        stat_value=None,
        bound_value=0.25,
    )
    path = tmp_path / "t.csv"
    write_trials_csv([rec], str(path))
    row = read_rows(str(path))[0]
    assert row["stat_value"] == ""
    assert row["p2"] == ""


def test_run_fig1_returns_summaries(tmp_path):
    cfg = small_fig1(tmp_path)
    trials, summaries = run_fig1(cfg)
    assert len(summaries) == 2
    assert all(s.stat_name == "max_ratio" for s in summaries)
    assert all(t.stat_name == "dsep_ratio" for t in trials)
