"""Monte Carlo scenario runners with reproducible seeding and CSV output.

A run is described by an ``ExperimentConfig``. Each scenario expands its
parameter grid into points (point k), runs ``graphs_per_point`` trials per
point, and derives every trial's graph seed as split_seed(root_seed, k, t);
draws inside a trial split further off the graph seed. No state is shared
across trials, so summaries are order-independent reductions and identical
configs reproduce output byte for byte.

Two record shapes come out: per-trial rows and per-point summaries, both
CSV with fixed column order, LF line endings, shortest round-trip float
formatting, and empty cells for inapplicable columns.

Scenarios:

* fig1_random_z: per sampled nonadjacent pair, the fraction of
  Bernoulli(p2) conditioning sets that d-separate it; the summary is the
  max ratio over pairs.
* perfect_pc: fraction of sampled nonadjacent pairs with a separator of
  size <= c_max (precision of bounded-size search with a perfect oracle).
* bound_random_z: P(one Bernoulli(p2) set d-separates a fixed nonadjacent
  pair) against the closed-form bound.
* bound_bounded_size: P(min separator size <= floor of the size threshold)
  for a fixed pair, against the closed-form bound.
* bound_fixed_size: P(a uniform size-alpha set blocks every length-2 path)
  for a fixed pair, against the closed-form bound; at alpha=0 this equals
  (1-p1^2)^(j-2) exactly, and for every alpha it upper-bounds full
  d-separation by the same set.
* sgs_calls: oracle calls of the uncapped uniform-order searcher on a
  fixed pair, conditional (edge excised) and unconditional (graph as
  drawn), against the expected-calls lower bounds.
* sparsity_curve: mean exact cumulative-density ratio of drawn graphs,
  optionally with the edge probability scheduled as c/n.

Conditioning on the fixed pair being nonadjacent is implemented by
excising that single edge after generation; edge indicators are
independent, so excision and rejection sampling give the same law.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, fields
from fractions import Fraction
from math import comb, floor, sqrt
from typing import Optional, Sequence, Union

from .bounds import (
    BoundInput,
    SgsBoundInput,
    bound_bounded_size,
    bound_fixed_size,
    bound_random_z,
    sgs_calls_lower_bound,
    sparse_graph_ratio,
)
from .discovery import SgsConfig, uniform_sgs_pair
from .dsep import (
    is_d_separated,
    is_pseudoseparated,
    sample_bernoulli_set,
    sample_fixed_size_set,
)
from .graph import (
    Dag,
    GenParams,
    NodePair,
    generate_random_dag,
    nonadjacent_pairs,
    sample_pairs,
)
from .rng import MASK64, split_seed
from .separators import min_separator_size, minimum_d_separator

SCENARIOS = (
    "fig1_random_z",
    "perfect_pc",
    "bound_random_z",
    "bound_bounded_size",
    "bound_fixed_size",
    "sgs_calls",
    "sparsity_curve",
)

SGS_MAX_N = 16

TRIAL_COLUMNS = (
    "scenario",
    "n",
    "p1",
    "p2",
    "alpha",
    "c_max",
    "graph_seed",
    "i",
    "j",
    "stat_name",
    "stat_value",
    "bound_value",
)

SUMMARY_COLUMNS = (
    "scenario",
    "n",
    "p1",
    "param_name",
    "param_value",
    "stat_name",
    "value",
    "stderr",
    "sample_count",
    "bound_value",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one run; see the module docstring.

    output_path names the directory that receives config.json, trials.csv,
    and summary.csv. pair_i/pair_j select the fixed query pair of the
    bound-validation and sgs scenarios, 1-based so pair_j feeds the
    closed-form bounds directly (node indices elsewhere are 0-based).
    p1_c_over_n, when set, overrides p1 with c/n per grid point in
    sparsity_curve.
    """

    scenario: str
    n_values: tuple[int, ...]
    p1: float
    root_seed: int
    output_path: str
    graphs_per_point: int = 1
    p2_values: Optional[tuple[float, ...]] = None
    alpha_values: Optional[tuple[int, ...]] = None
    c_max_values: Optional[tuple[int, ...]] = None
    pairs_per_graph: Optional[int] = None
    sets_per_pair: Optional[int] = None
    pair_i: Optional[int] = None
    pair_j: Optional[int] = None
    p1_c_over_n: Optional[float] = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario: unknown scenario {self.scenario!r}")
        object.__setattr__(self, "n_values", tuple(self.n_values))
        if self.p2_values is not None:
            object.__setattr__(self, "p2_values", tuple(self.p2_values))
        if self.alpha_values is not None:
            object.__setattr__(self, "alpha_values", tuple(self.alpha_values))
        if self.c_max_values is not None:
            object.__setattr__(self, "c_max_values", tuple(self.c_max_values))
        if not self.n_values or any(not isinstance(n, int) or n < 2 for n in self.n_values):
            raise ValueError("n_values: need a non-empty list of integers >= 2")
        if not 0.0 < self.p1 < 1.0:
            raise ValueError("p1: must be in the open interval (0, 1)")
        if not isinstance(self.root_seed, int) or not 0 <= self.root_seed <= MASK64:
            raise ValueError("root_seed: must be an integer in [0, 2**64)")
        if not isinstance(self.output_path, str) or not self.output_path:
            raise ValueError("output_path: must be a non-empty path string")
        if not isinstance(self.graphs_per_point, int) or self.graphs_per_point < 1:
            raise ValueError("graphs_per_point: must be a positive integer")

        need = {
            "fig1_random_z": ("p2_values", "pairs_per_graph", "sets_per_pair"),
            "perfect_pc": ("c_max_values", "pairs_per_graph"),
            "bound_random_z": ("p2_values", "pair_i", "pair_j"),
            "bound_bounded_size": ("pair_i", "pair_j"),
            "bound_fixed_size": ("alpha_values", "pair_i", "pair_j"),
            "sgs_calls": ("pair_i", "pair_j"),
            "sparsity_curve": (),
        }[self.scenario]
        for f in need:
            if getattr(self, f) is None:
                raise ValueError(f"{f}: required by scenario {self.scenario}")

        if self.p2_values is not None and any(not 0.0 < q < 1.0 for q in self.p2_values):
            raise ValueError("p2_values: entries must be in the open interval (0, 1)")
        if self.pairs_per_graph is not None and (
            not isinstance(self.pairs_per_graph, int) or self.pairs_per_graph < 1
        ):
            raise ValueError("pairs_per_graph: must be a positive integer")
        if self.sets_per_pair is not None and (
            not isinstance(self.sets_per_pair, int) or self.sets_per_pair < 1
        ):
            raise ValueError("sets_per_pair: must be a positive integer")
        n_min = min(self.n_values)
        if self.pair_i is not None or self.pair_j is not None:
            if self.pair_i is None or self.pair_j is None:
                raise ValueError("pair_i: pair_i and pair_j must be given together")
            if not (
                isinstance(self.pair_i, int)
                and isinstance(self.pair_j, int)
                and 1 <= self.pair_i < self.pair_j <= n_min
            ):
                raise ValueError(
                    f"pair_j: need 1 <= pair_i < pair_j <= min(n_values)={n_min} (1-based)"
                )
        if self.alpha_values is not None and any(
            not isinstance(a, int) or not 0 <= a <= n_min - 2 for a in self.alpha_values
        ):
            raise ValueError(f"alpha_values: entries must be integers in [0, {n_min - 2}]")
        if self.c_max_values is not None and any(
            not isinstance(c, int) or c < 0 for c in self.c_max_values
        ):
            raise ValueError("c_max_values: entries must be non-negative integers")
        if self.scenario == "sgs_calls" and max(self.n_values) > SGS_MAX_N:
            raise ValueError(
                f"n_values: sgs_calls exhausts 2**(n-2) subsets, capped at n={SGS_MAX_N}"
            )
        if self.p1_c_over_n is not None:
            if self.scenario != "sparsity_curve":
                raise ValueError("p1_c_over_n: only meaningful for sparsity_curve")
            for n in self.n_values:
                if not 0.0 < self.p1_c_over_n / n < 1.0:
                    raise ValueError(f"p1_c_over_n: c/n out of (0, 1) at n={n}")


@dataclass(frozen=True)
class TrialRecord:
    """One per-trial CSV row; inapplicable fields are None (empty cells).

    stat_value is None only for outcome-less rows: a min_sep_size row whose
    search found nothing under the cap, or a warning row.
    """

    scenario: str
    n: int
    p1: float
    p2: Optional[float]
    alpha: Optional[int]
    c_max: Optional[int]
    graph_seed: int
    i: Optional[int]
    j: Optional[int]
    stat_name: str
    stat_value: Optional[float]
    bound_value: Optional[float]


@dataclass(frozen=True)
class SummaryRecord:
    """One per-point CSV row: a named statistic with its sampling error."""

    scenario: str
    n: int
    p1: float
    param_name: str
    param_value: Union[float, int, str]
    stat_name: str
    value: float
    stderr: Optional[float]
    sample_count: int
    bound_value: Optional[float]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        raise TypeError("bool has no CSV cell encoding here")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_rows(path: str, columns: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for rec in rows:
            w.writerow([_cell(getattr(rec, c)) for c in columns])


def write_trials_csv(trials: Sequence[TrialRecord], path: str) -> None:
    _write_rows(path, TRIAL_COLUMNS, trials)


def write_summary_csv(summaries: Sequence[SummaryRecord], path: str) -> None:
    _write_rows(path, SUMMARY_COLUMNS, summaries)


def write_csv(records: Sequence[Union[TrialRecord, SummaryRecord]], path: str) -> None:
    """Write a homogeneous record list; the record type picks the schema."""
    if not records:
        raise ValueError("records: cannot infer schema from an empty list")
    head = records[0]
    if any(type(r) is not type(head) for r in records):
        raise ValueError("records: mixed record types in one file")
    if isinstance(head, TrialRecord):
        write_trials_csv(records, path)
    elif isinstance(head, SummaryRecord):
        write_summary_csv(records, path)
    else:
        raise ValueError("records: unknown record type")


def write_config(cfg: ExperimentConfig, path: str) -> None:
    body = {}
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        body[f.name] = list(v) if isinstance(v, tuple) else v
    with open(path, "w") as fh:
        json.dump(body, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        try:
            body = json.load(fh)
        except json.JSONDecodeError as e:
            from .graph import FormatError

            raise FormatError(f"config: not valid JSON ({e})") from None
    if not isinstance(body, dict):
        raise ValueError("config: top level must be an object")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(body) - known)
    if unknown:
        raise ValueError(f"config: unknown fields {unknown}")
    kwargs = {}
    for k, v in body.items():
        kwargs[k] = tuple(v) if isinstance(v, list) else v
    return ExperimentConfig(**kwargs)


def _ratio_stderr(p_hat: float, m: int) -> float:
    return sqrt(p_hat * (1.0 - p_hat) / m)


def _mean_stderr(vals: Sequence[float]) -> tuple[float, Optional[float]]:
    m = len(vals)
    mean = sum(vals) / m
    if m < 2:
        return mean, None
    var = sum((v - mean) ** 2 for v in vals) / (m - 1)
    return mean, sqrt(var / m)


def _trial_dag(
    cfg: ExperimentConfig,
    point: int,
    trial: int,
    n: int,
    p1: float,
    drop_pair: Optional[NodePair],
) -> tuple[int, Dag]:
    graph_seed = split_seed(cfg.root_seed, point, trial)
    dag = generate_random_dag(GenParams(n=n, p1=p1, seed=graph_seed))
    if drop_pair is not None and dag.has_edge(drop_pair.i, drop_pair.j):
        edges = [e for e in dag.edges() if e != (drop_pair.i, drop_pair.j)]
        dag = Dag(dag.n, edges)
    return graph_seed, dag


def _fixed_pair(cfg: ExperimentConfig) -> NodePair:
    return NodePair(cfg.pair_i - 1, cfg.pair_j - 1)


def _shortfall_warning(cfg, n, graph_seed, available) -> TrialRecord:
    # fewer nonadjacent pairs than requested: record it, sample what exists
    return TrialRecord(cfg.scenario, n, cfg.p1, None, None, None, graph_seed,
                       None, None, "pairs_available_warning", float(available), None)


def run_fig1(cfg: ExperimentConfig):
    """Max d-separation ratio over sampled nonadjacent pairs, per (n, p2)."""
    trials: list[TrialRecord] = []
    summaries: list[SummaryRecord] = []
    points = [(n, p2) for n in cfg.n_values for p2 in cfg.p2_values]
    for k, (n, p2) in enumerate(points):
        ratios: list[float] = []
        for t in range(cfg.graphs_per_point):
            graph_seed, dag = _trial_dag(cfg, k, t, n, cfg.p1, None)
            nonadj = nonadjacent_pairs(dag)
            if len(nonadj) < cfg.pairs_per_graph:
                trials.append(_shortfall_warning(cfg, n, graph_seed, len(nonadj)))
            take = min(cfg.pairs_per_graph, len(nonadj))
            pairs = sample_pairs(nonadj, take, split_seed(graph_seed, 1))
            for p_idx, pair in enumerate(pairs):
                hits = 0
                for s in range(cfg.sets_per_pair):
                    z = sample_bernoulli_set(n, pair, p2, split_seed(graph_seed, 2, p_idx, s))
                    hits += is_d_separated(dag, pair, z)
                ratio = hits / cfg.sets_per_pair
                ratios.append(ratio)
                bnd = bound_random_z(BoundInput(n=n, p1=cfg.p1, j=pair.j + 1, p2=p2))
                trials.append(
                    TrialRecord(cfg.scenario, n, cfg.p1, p2, None, None, graph_seed,
                                pair.i, pair.j, "dsep_ratio", ratio, bnd)
                )
        summaries.append(
            SummaryRecord(cfg.scenario, n, cfg.p1, "p2", p2, "max_ratio",
                          max(ratios), None, len(ratios), None)
        )
    return trials, summaries


def run_perfect_pc(cfg: ExperimentConfig):
    """Precision of bounded-size separator search on sampled pairs.

    A pair counts as recovered when its minimum separator fits under
    c_max; the minimum is computed exactly, which answers the same
    question as exhausting all conditioning sets of size <= c_max.
    """
    trials: list[TrialRecord] = []
    summaries: list[SummaryRecord] = []
    points = [(n, c) for n in cfg.n_values for c in cfg.c_max_values]
    for k, (n, c) in enumerate(points):
        found_flags: list[float] = []
        for t in range(cfg.graphs_per_point):
            graph_seed, dag = _trial_dag(cfg, k, t, n, cfg.p1, None)
            nonadj = nonadjacent_pairs(dag)
            if len(nonadj) < cfg.pairs_per_graph:
                trials.append(_shortfall_warning(cfg, n, graph_seed, len(nonadj)))
            take = min(cfg.pairs_per_graph, len(nonadj))
            pairs = sample_pairs(nonadj, take, split_seed(graph_seed, 1))
            for pair in pairs:
                sep = minimum_d_separator(dag, pair)
                hit = 1.0 if sep is not None and len(sep) <= c else 0.0
                found_flags.append(hit)
                trials.append(
                    TrialRecord(cfg.scenario, n, cfg.p1, None, None, c, graph_seed,
                                pair.i, pair.j, "found_separator", hit, None)
                )
        p_hat = sum(found_flags) / len(found_flags)
        summaries.append(
            SummaryRecord(cfg.scenario, n, cfg.p1, "c_max", c, "precision",
                          p_hat, _ratio_stderr(p_hat, len(found_flags)),
                          len(found_flags), None)
        )
    return trials, summaries


def _run_bound_random_z(cfg: ExperimentConfig):
    trials: list[TrialRecord] = []
    summaries: list[SummaryRecord] = []
    pair = _fixed_pair(cfg)
    points = [(n, p2) for n in cfg.n_values for p2 in cfg.p2_values]
    for k, (n, p2) in enumerate(points):
        bnd = bound_random_z(BoundInput(n=n, p1=cfg.p1, j=cfg.pair_j, p2=p2))
        hits: list[float] = []
        for t in range(cfg.graphs_per_point):
            graph_seed, dag = _trial_dag(cfg, k, t, n, cfg.p1, pair)
            z = sample_bernoulli_set(n, pair, p2, split_seed(graph_seed, 1))
            ok = 1.0 if is_d_separated(dag, pair, z) else 0.0
            hits.append(ok)
            trials.append(
                TrialRecord(cfg.scenario, n, cfg.p1, p2, None, None, graph_seed,
                            pair.i, pair.j, "dsep_ratio", ok, bnd)
            )
        p_hat = sum(hits) / len(hits)
        summaries.append(
            SummaryRecord(cfg.scenario, n, cfg.p1, "p2", p2, "mean",
                          p_hat, _ratio_stderr(p_hat, len(hits)), len(hits), bnd)
        )
    return trials, summaries


def _run_bound_bounded_size(cfg: ExperimentConfig):
    trials: list[TrialRecord] = []
    summaries: list[SummaryRecord] = []
    pair = _fixed_pair(cfg)
    for k, n in enumerate(cfg.n_values):
        threshold, prob = bound_bounded_size(BoundInput(n=n, p1=cfg.p1, j=cfg.pair_j))
        s_cap = floor(threshold)
        hits: list[float] = []
        for t in range(cfg.graphs_per_point):
            graph_seed, dag = _trial_dag(cfg, k, t, n, cfg.p1, pair)
            s = min_separator_size(dag, pair, s_cap)
            hits.append(0.0 if s is None else 1.0)
            trials.append(
                TrialRecord(cfg.scenario, n, cfg.p1, None, None, None, graph_seed,
                            pair.i, pair.j, "min_sep_size",
                            None if s is None else float(s), prob)
            )
        p_hat = sum(hits) / len(hits)
        summaries.append(
            SummaryRecord(cfg.scenario, n, cfg.p1, "s_max", s_cap, "mean",
                          p_hat, _ratio_stderr(p_hat, len(hits)), len(hits), prob)
        )
    return trials, summaries


def _run_bound_fixed_size(cfg: ExperimentConfig):
    trials: list[TrialRecord] = []
    summaries: list[SummaryRecord] = []
    pair = _fixed_pair(cfg)
    points = [(n, a) for n in cfg.n_values for a in cfg.alpha_values]
    for k, (n, a) in enumerate(points):
        bnd = bound_fixed_size(BoundInput(n=n, p1=cfg.p1, j=cfg.pair_j, alpha=a))
        hits: list[float] = []
        for t in range(cfg.graphs_per_point):
            graph_seed, dag = _trial_dag(cfg, k, t, n, cfg.p1, pair)
            z = sample_fixed_size_set(n, pair, a, split_seed(graph_seed, 1))
            ok = 1.0 if is_pseudoseparated(dag, pair, z) else 0.0
            hits.append(ok)
            trials.append(
                TrialRecord(cfg.scenario, n, cfg.p1, None, a, None, graph_seed,
                            pair.i, pair.j, "pseudosep_ratio", ok, bnd)
            )
        p_hat = sum(hits) / len(hits)
        summaries.append(
            SummaryRecord(cfg.scenario, n, cfg.p1, "alpha", a, "mean",
                          p_hat, _ratio_stderr(p_hat, len(hits)), len(hits), bnd)
        )
    return trials, summaries


def run_bound_validation(cfg: ExperimentConfig):
    """Dispatch over the three bound-validation scenarios."""
    runner = {
        "bound_random_z": _run_bound_random_z,
        "bound_bounded_size": _run_bound_bounded_size,
        "bound_fixed_size": _run_bound_fixed_size,
    }.get(cfg.scenario)
    if runner is None:
        raise ValueError(f"scenario: {cfg.scenario!r} is not a bound-validation scenario")
    return runner(cfg)


def run_sgs_calls(cfg: ExperimentConfig):
    """Uncapped uniform-order search cost on a fixed pair, both variants."""
    trials: list[TrialRecord] = []
    summaries: list[SummaryRecord] = []
    pair = _fixed_pair(cfg)
    points = [(n, variant) for n in cfg.n_values for variant in ("conditional", "unconditional")]
    for k, (n, variant) in enumerate(points):
        lo_cond, lo_uncond = sgs_calls_lower_bound(SgsBoundInput(n=n, p1=cfg.p1))
        bnd = lo_cond if variant == "conditional" else lo_uncond
        calls: list[float] = []
        for t in range(cfg.graphs_per_point):
            drop = pair if variant == "conditional" else None
            graph_seed, dag = _trial_dag(cfg, k, t, n, cfg.p1, drop)
            res = uniform_sgs_pair(
                dag, pair, SgsConfig(seed=split_seed(graph_seed, 1), call_cap=None)
            )
            calls.append(float(res.calls))
            trials.append(
                TrialRecord(cfg.scenario, n, cfg.p1, None, None, None, graph_seed,
                            pair.i, pair.j, "oracle_calls", float(res.calls), bnd)
            )
        mean, se = _mean_stderr(calls)
        summaries.append(
            SummaryRecord(cfg.scenario, n, cfg.p1, "variant", variant, "mean_calls",
                          mean, se, len(calls), bnd)
        )
    return trials, summaries


def run_sparsity_curve(cfg: ExperimentConfig):
    """Mean exact ratio of graph draws no denser than each trial's draw."""
    trials: list[TrialRecord] = []
    summaries: list[SummaryRecord] = []
    for k, n in enumerate(cfg.n_values):
        p1_n = cfg.p1_c_over_n / n if cfg.p1_c_over_n is not None else cfg.p1
        ratios: list[float] = []
        for t in range(cfg.graphs_per_point):
            graph_seed, dag = _trial_dag(cfg, k, t, n, p1_n, None)
            ratio = sparse_graph_ratio(n, Fraction(dag.edge_count, comb(n, 2)))
            ratios.append(ratio)
            trials.append(
                TrialRecord(cfg.scenario, n, p1_n, None, None, None, graph_seed,
                            None, None, "sparse_ratio", ratio, None)
            )
        mean, se = _mean_stderr(ratios)
        summaries.append(
            SummaryRecord(cfg.scenario, n, p1_n, "p1", p1_n, "mean",
                          mean, se, len(ratios), None)
        )
    return trials, summaries


_RUNNERS = {
    "fig1_random_z": run_fig1,
    "perfect_pc": run_perfect_pc,
    "bound_random_z": run_bound_validation,
    "bound_bounded_size": run_bound_validation,
    "bound_fixed_size": run_bound_validation,
    "sgs_calls": run_sgs_calls,
    "sparsity_curve": run_sparsity_curve,
}


@dataclass(frozen=True)
class ExperimentOutput:
    trials: tuple[TrialRecord, ...]
    summaries: tuple[SummaryRecord, ...]
    config_path: str
    trials_path: str
    summary_path: str


def run_experiment(cfg: ExperimentConfig) -> ExperimentOutput:
    """Run the configured scenario and write config.json, trials.csv, and
    summary.csv into the cfg.output_path directory. Reruns of the same
    config are byte-identical."""
    trials, summaries = _RUNNERS[cfg.scenario](cfg)
    os.makedirs(cfg.output_path, exist_ok=True)
    config_path = os.path.join(cfg.output_path, "config.json")
    trials_path = os.path.join(cfg.output_path, "trials.csv")
    summary_path = os.path.join(cfg.output_path, "summary.csv")
    write_config(cfg, config_path)
    write_trials_csv(trials, trials_path)
    write_summary_csv(summaries, summary_path)
    return ExperimentOutput(
        trials=tuple(trials),
        summaries=tuple(summaries),
        config_path=config_path,
        trials_path=trials_path,
        summary_path=summary_path,
    )
