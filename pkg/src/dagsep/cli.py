"""Command-line entry point.

Subcommands: gen, dsep, pseudosep, minsep, census, bounds, pc, sgs,
experiment. Exit codes: 0 success, 1 domain error (bad parameter values,
including bad flags), 2 I/O or file-format error. Domain errors print a
single line ``error: <field>: <reason>`` to stderr. Stdout carries only
the declared payload; every randomized subcommand requires --seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .bounds import (
    BoundInput,
    SgsBoundInput,
    bound_bounded_size,
    bound_bounded_size_unconditional,
    bound_fixed_size,
    bound_random_z,
    bound_random_z_simple,
    bound_random_z_unconditional,
    pc_adjacency_threshold,
    pc_cmax_threshold,
    sgs_calls_lower_bound,
    sparse_graph_ratio,
)
from .discovery import PcConfig, SgsConfig, SkeletonResult, pc_skeleton, uniform_sgs_skeleton
from .dsep import is_d_separated, is_pseudoseparated, path_census
from .experiments import load_config, run_experiment
from .graph import (
    FormatError,
    GenParams,
    NodePair,
    generate_random_dag,
    read_dag_text,
    write_dag_text,
)
from .separators import min_separator_size


class _UsageError(Exception):
    """Raised for argparse-level problems; maps to exit 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"args: {message}")


def _fmt12(v: float) -> str:
    return f"{v:.12g}"


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _load_dag(path: str):
    with open(path) as fh:
        return read_dag_text(fh.read())


def _pair_from_args(ns) -> NodePair:
    return NodePair.ordered(ns.x, ns.y)


def _cmd_gen(ns) -> int:
    dag = generate_random_dag(GenParams(n=ns.n, p1=ns.p1, seed=ns.seed))
    _emit(write_dag_text(dag), ns.out)
    return 0


def _cmd_dsep(ns) -> int:
    dag = _load_dag(ns.graph)
    sep = is_d_separated(dag, _pair_from_args(ns), frozenset(ns.z))
    _emit(("separated" if sep else "not_separated") + "\n", ns.out)
    return 0


def _cmd_pseudosep(ns) -> int:
    dag = _load_dag(ns.graph)
    ps = is_pseudoseparated(dag, _pair_from_args(ns), frozenset(ns.z))
    _emit(("pseudoseparated" if ps else "not_pseudoseparated") + "\n", ns.out)
    return 0


def _cmd_minsep(ns) -> int:
    dag = _load_dag(ns.graph)
    s = min_separator_size(dag, _pair_from_args(ns), ns.s_max, subset_budget=ns.budget)
    _emit(("none" if s is None else str(s)) + "\n", ns.out)
    return 0


def _cmd_census(ns) -> int:
    dag = _load_dag(ns.graph)
    c = path_census(dag, _pair_from_args(ns))
    body = {
        "b_nc": c.b_nc,
        "b_c": c.b_c,
        "q_nc_capacity": c.q_nc_capacity,
        "q_c_capacity": c.q_c_capacity,
    }
    if ns.format == "json":
        text = json.dumps(body, sort_keys=True) + "\n"
    else:
        cols = sorted(body)
        text = ",".join(cols) + "\n" + ",".join(str(body[k]) for k in cols) + "\n"
    _emit(text, ns.out)
    return 0


_BOUND_CHOICES = (
    "random_z",
    "random_z_simple",
    "random_z_unconditional",
    "bounded_size",
    "bounded_size_unconditional",
    "fixed_size",
    "sparse_ratio",
    "pc_cmax_threshold",
    "pc_adjacency_threshold",
    "sgs_calls",
)


def _cmd_bounds(ns) -> int:
    which = ns.which

    def need(**kw):
        for flag, val in kw.items():
            if val is None:
                raise ValueError(f"{flag}: required for --which {which}")

    if which == "sparse_ratio":
        need(n=ns.n, d=ns.d)
        vals = [sparse_graph_ratio(ns.n, ns.d)]
    elif which == "pc_cmax_threshold":
        need(n=ns.n, p1=ns.p1, delta1=ns.delta1)
        vals = [pc_cmax_threshold(ns.n, ns.p1, ns.delta1)]
    elif which == "pc_adjacency_threshold":
        need(n=ns.n, p1=ns.p1, delta2=ns.delta2)
        vals = [pc_adjacency_threshold(ns.n, ns.p1, ns.delta2)]
    elif which == "sgs_calls":
        need(n=ns.n, p1=ns.p1)
        vals = list(sgs_calls_lower_bound(SgsBoundInput(n=ns.n, p1=ns.p1)))
    else:
        need(n=ns.n, p1=ns.p1)
        inp = BoundInput(n=ns.n, p1=ns.p1, j=ns.j, p2=ns.p2, alpha=ns.alpha)
        if which == "random_z":
            vals = [bound_random_z(inp)]
        elif which == "random_z_simple":
            vals = [bound_random_z_simple(inp)]
        elif which == "random_z_unconditional":
            vals = [bound_random_z_unconditional(inp)]
        elif which == "bounded_size":
            vals = list(bound_bounded_size(inp))
        elif which == "bounded_size_unconditional":
            vals = list(bound_bounded_size_unconditional(inp))
        else:
            vals = [bound_fixed_size(inp)]
    _emit(" ".join(_fmt12(v) for v in vals) + "\n", ns.out)
    return 0


def _skeleton_json(res: SkeletonResult) -> str:
    body = {
        "e_pred": [[p.i, p.j] for p in sorted(res.e_pred)],
        "separators": {f"{p.i},{p.j}": sorted(z) for p, z in res.separators.items()},
        "total_calls": res.stats.total_calls,
        "per_pair_calls": {f"{p.i},{p.j}": c for p, c in res.stats.per_pair_calls.items()},
    }
    return json.dumps(body, sort_keys=True) + "\n"


def _cmd_pc(ns) -> int:
    dag = _load_dag(ns.graph)
    cfg = PcConfig(
        c_max=ns.c_max,
        pair_order=ns.pair_order,
        subset_order=ns.subset_order,
        full_powerset=ns.full_powerset,
    )
    _emit(_skeleton_json(pc_skeleton(dag, cfg)), ns.out)
    return 0


def _cmd_sgs(ns) -> int:
    dag = _load_dag(ns.graph)
    cap = None if ns.uncapped else ns.call_cap
    res = uniform_sgs_skeleton(dag, SgsConfig(seed=ns.seed, call_cap=cap))
    _emit(_skeleton_json(res), ns.out)
    return 0


def _cmd_experiment(ns) -> int:
    cfg = load_config(ns.config)
    out = run_experiment(cfg)
    with open(out.summary_path) as fh:
        sys.stdout.write(fh.read())
    print(f"wrote {out.trials_path} and {out.summary_path}", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="dagsep", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def add_pair_flags(sp):
        sp.add_argument("--graph", required=True, help="DAG text file")
        sp.add_argument("--x", type=int, required=True)
        sp.add_argument("--y", type=int, required=True)

    sp = sub.add_parser("gen", help="generate a random DAG")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p1", type=float, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(handler=_cmd_gen)

    sp = sub.add_parser("dsep", help="test d-separation")
    add_pair_flags(sp)
    sp.add_argument("--z", type=int, nargs="*", default=[])
    sp.add_argument("--out")
    sp.set_defaults(handler=_cmd_dsep)

    sp = sub.add_parser("pseudosep", help="test length-2 pseudoseparation")
    add_pair_flags(sp)
    sp.add_argument("--z", type=int, nargs="*", default=[])
    sp.add_argument("--out")
    sp.set_defaults(handler=_cmd_pseudosep)

    sp = sub.add_parser("minsep", help="smallest separator size within a cap")
    add_pair_flags(sp)
    sp.add_argument("--s-max", dest="s_max", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10_000_000)
    sp.add_argument("--out")
    sp.set_defaults(handler=_cmd_minsep)

    sp = sub.add_parser("census", help="length-2 path census for a pair")
    add_pair_flags(sp)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out")
    sp.set_defaults(handler=_cmd_census)

    sp = sub.add_parser("bounds", help="evaluate a closed-form bound")
    sp.add_argument("--which", choices=_BOUND_CHOICES, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--p1", type=float)
    sp.add_argument("--p2", type=float)
    sp.add_argument("--j", type=int)
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--delta1", type=float)
    sp.add_argument("--delta2", type=float)
    sp.add_argument("--d", type=float, help="density cutoff for sparse_ratio")
    sp.add_argument("--out")
    sp.set_defaults(handler=_cmd_bounds)

    sp = sub.add_parser("pc", help="PC skeleton recovery against the oracle")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--c-max", dest="c_max", type=int, default=None)
    sp.add_argument("--pair-order", dest="pair_order", default="lex",
                    choices=("lex", "reverse_lex"))
    sp.add_argument("--subset-order", dest="subset_order", default="size_lex_x_first",
                    choices=("size_lex_x_first", "size_lex_y_first"))
    sp.add_argument("--full-powerset", dest="full_powerset", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(handler=_cmd_pc)

    sp = sub.add_parser("sgs", help="uniform-order skeleton recovery")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--call-cap", dest="call_cap", type=int, default=1_000_000)
    sp.add_argument("--uncapped", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(handler=_cmd_sgs)

    sp = sub.add_parser("experiment", help="run a configured scenario")
    sp.add_argument("--config", required=True, help="JSON config file")
    sp.set_defaults(handler=_cmd_experiment)

    return p


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    try:
        return ns.handler(ns)
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: io: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
