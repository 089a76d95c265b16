"""Skeleton recovery with a perfect separation oracle, counting every query.

Two searchers share the oracle-call bookkeeping:

* ``pc_skeleton``: for each pair, in a fixed order, tries candidate
  conditioning sets drawn from the powersets of the two current adjacency
  sides (size-ascending, lexicographic within a size, the lower node's side
  first, duplicates queried once) until one separates or the candidates run
  out. Adjacency updates take effect immediately, so later pairs see them.
* ``uniform_sgs_pair`` / ``uniform_sgs_skeleton``: tries all 2^(n-2)
  subsets of the non-pair nodes in a seeded uniformly random order.

The SGS subset order is materialized and shuffled up to 24 candidate bits;
beyond that a Feistel permutation with cycle-walking streams the same
domain in O(1) memory per draw. A call cap (default one million) bounds
each pair's search; cap None means exhaust the domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .dsep import is_d_separated
from .graph import Dag, NodePair
from .rng import MASK64, Stream, mix64, split_seed

SHUFFLE_MAX_BITS = 24
CALL_CAP_DEFAULT = 1_000_000
_FEISTEL_ROUNDS = 8


@dataclass
class OracleStats:
    """Separation-oracle call counts, total and per queried pair."""

    total_calls: int = 0
    per_pair_calls: dict[NodePair, int] = field(default_factory=dict)

    def record(self, pair: NodePair, calls: int) -> None:
        self.per_pair_calls[pair] = self.per_pair_calls.get(pair, 0) + calls
        self.total_calls += calls


@dataclass
class SkeletonResult:
    """Recovered skeleton: surviving pairs, separators found, call stats."""

    e_pred: frozenset[NodePair]
    separators: dict[NodePair, frozenset[int]]
    stats: OracleStats


@dataclass(frozen=True)
class PcConfig:
    """Knobs for ``pc_skeleton``.

    c_max: largest conditioning-set size tried (None = unbounded).
    pair_order: "lex" or "reverse_lex" processing order over pairs.
    subset_order: "size_lex_x_first" (default) or "size_lex_y_first" for
    which adjacency side's powerset is enumerated first within a size.
    full_powerset: draw candidates from all non-pair nodes instead of the
    two adjacency sides (the exhaustive variant; much slower).
    """

    c_max: Optional[int] = None
    pair_order: str = "lex"
    subset_order: str = "size_lex_x_first"
    full_powerset: bool = False

    def __post_init__(self):
        if self.c_max is not None and (not isinstance(self.c_max, int) or self.c_max < 0):
            raise ValueError("c_max: must be a non-negative integer or None")
        if self.pair_order not in ("lex", "reverse_lex"):
            raise ValueError("pair_order: must be 'lex' or 'reverse_lex'")
        if self.subset_order not in ("size_lex_x_first", "size_lex_y_first"):
            raise ValueError(
                "subset_order: must be 'size_lex_x_first' or 'size_lex_y_first'"
            )


@dataclass(frozen=True)
class SgsConfig:
    """Knobs for the uniform-order searchers. ``seed`` is mandatory."""

    seed: int
    call_cap: Optional[int] = CALL_CAP_DEFAULT

    def __post_init__(self):
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise ValueError("seed: must be an integer in [0, 2**64)")
        if self.call_cap is not None and (not isinstance(self.call_cap, int) or self.call_cap < 1):
            raise ValueError("call_cap: must be a positive integer or None")


def pc_candidate_sets(
    side_x: Iterable[int],
    side_y: Iterable[int],
    c_max: Optional[int],
    subset_order: str = "size_lex_x_first",
) -> Iterable[tuple[int, ...]]:
    """Candidate conditioning sets for one pair, in query order.

    Size-ascending; within a size, one adjacency side's subsets first then
    the other's (x's side first by default), each side lexicographic by
    sorted member tuple; exact duplicates skipped.
    """
    ax = sorted(side_x)
    ay = sorted(side_y)
    sides = (ax, ay) if subset_order == "size_lex_x_first" else (ay, ax)
    top = max(len(ax), len(ay))
    if c_max is not None:
        top = min(top, c_max)
    for s in range(top + 1):
        seen: set[tuple[int, ...]] = set()
        for side in sides:
            for combo in combinations(side, s):
                if combo in seen:
                    continue
                seen.add(combo)
                yield combo


def pc_skeleton(dag: Dag, config: PcConfig = PcConfig()) -> SkeletonResult:
    """Edge-removal sweep against a perfect oracle.

    Starts from the complete graph on dag.n nodes (the oracle's graph only
    answers queries). Every oracle call is counted, including the ones a
    removal renders moot for later pairs.
    """
    n = dag.n
    adj = [set(range(n)) - {w} for w in range(n)]
    pairs = [NodePair(x, y) for x in range(n - 1) for y in range(x + 1, n)]
    if config.pair_order == "reverse_lex":
        pairs = pairs[::-1]
    e_pred = set(pairs)
    separators: dict[NodePair, frozenset[int]] = {}
    stats = OracleStats()
    everyone = set(range(n))
    for pair in pairs:
        x, y = pair.i, pair.j
        if config.full_powerset:
            side_x = side_y = everyone - {x, y}
        else:
            side_x = adj[x] - {y}
            side_y = adj[y] - {x}
        calls = 0
        found: Optional[frozenset[int]] = None
        for combo in pc_candidate_sets(side_x, side_y, config.c_max, config.subset_order):
            calls += 1
            if is_d_separated(dag, pair, frozenset(combo)):
                found = frozenset(combo)
                break
        stats.record(pair, calls)
        if found is not None:
            e_pred.discard(pair)
            separators[pair] = found
            adj[x].discard(y)
            adj[y].discard(x)
    return SkeletonResult(e_pred=frozenset(e_pred), separators=separators, stats=stats)


def _feistel_perm_stream(bits: int, seed: int):
    """Yield a pseudorandom permutation of range(2**bits) lazily.

    Balanced Feistel network on an even-width word >= bits, cycle-walking
    outputs back into the target domain.
    """
    width = bits + (bits & 1)
    half = width // 2
    hmask = (1 << half) - 1
    keys = [split_seed(seed, r) for r in range(_FEISTEL_ROUNDS)]
    limit = 1 << bits

    def enc(x: int) -> int:
        left, right = x >> half, x & hmask
        for k in keys:
            left, right = right, left ^ (mix64(right ^ k) & hmask)
        return (left << half) | right

    for t in range(limit):
        y = enc(t)
        while y >= limit:
            y = enc(y)
        yield y


def subset_rank_stream(m: int, seed: int):
    """All subset masks of an m-element ground set, uniformly permuted.

    m <= SHUFFLE_MAX_BITS materializes and shuffles the 2**m ranks; larger
    m streams a keyed permutation instead, so memory stays flat.
    """
    if m < 0:
        raise ValueError("m: must be non-negative")
    if m <= SHUFFLE_MAX_BITS:
        ranks = list(range(1 << m))
        Stream(seed).shuffle(ranks)
        return iter(ranks)
    return _feistel_perm_stream(m, seed)


@dataclass
class SgsPairResult:
    """Outcome of one uniform-order search: separator (or None) and calls."""

    separator: Optional[frozenset[int]]
    calls: int


def uniform_sgs_pair(dag: Dag, pair: NodePair, config: SgsConfig) -> SgsPairResult:
    """Query subsets of the non-pair nodes in seeded uniform order until
    one separates the pair or the call cap / domain runs out."""
    if pair.j >= dag.n:
        raise ValueError(f"pair: j={pair.j} out of range for n={dag.n}")
    eligible = [v for v in range(dag.n) if v != pair.i and v != pair.j]
    m = len(eligible)
    calls = 0
    for rank in subset_rank_stream(m, config.seed):
        if config.call_cap is not None and calls >= config.call_cap:
            break
        calls += 1
        z = frozenset(eligible[t] for t in range(m) if rank >> t & 1)
        if is_d_separated(dag, pair, z):
            return SgsPairResult(separator=z, calls=calls)
    return SgsPairResult(separator=None, calls=calls)


def uniform_sgs_skeleton(dag: Dag, config: SgsConfig) -> SkeletonResult:
    """Run the uniform-order search over every pair, lexicographically.

    Pair number k searches with the child seed split_seed(seed, k), so
    results don't depend on how earlier pairs terminated.
    """
    stats = OracleStats()
    e_pred = set()
    separators: dict[NodePair, frozenset[int]] = {}
    k = 0
    for x in range(dag.n - 1):
        for y in range(x + 1, dag.n):
            pair = NodePair(x, y)
            sub = SgsConfig(seed=split_seed(config.seed, k), call_cap=config.call_cap)
            res = uniform_sgs_pair(dag, pair, sub)
            stats.record(pair, res.calls)
            if res.separator is None:
                e_pred.add(pair)
            else:
                separators[pair] = res.separator
            k += 1
    return SkeletonResult(e_pred=frozenset(e_pred), separators=separators, stats=stats)


def empirical_precision(records: Iterable[tuple[NodePair, bool, bool]]) -> float:
    """Fraction of truly nonadjacent pairs the searcher removed.

    Records are (pair, removed, truly_nonadjacent) triples; raises when no
    nonadjacent pair is present, since the ratio is then undefined.
    """
    removed_nonadj = 0
    nonadj = 0
    for _pair, removed, truly_nonadjacent in records:
        if truly_nonadjacent:
            nonadj += 1
            if removed:
                removed_nonadj += 1
    if nonadj == 0:
        raise ValueError("records: no truly nonadjacent pairs, precision undefined")
    return removed_nonadj / nonadj
