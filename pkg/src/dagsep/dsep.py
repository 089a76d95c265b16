"""d-separation queries and the length-2-path statistics built on them.

``is_d_separated`` runs an active-trail reachability search (linear in the
graph size) and is the oracle every other component calls.
``is_d_separated_bruteforce`` is an independent cross-check that enumerates
every simple path and applies the blocking definition literally; it exists
so the two implementations can be compared on small graphs.

Because all edges point from lower to higher index, a two-edge path
i - k - j with i < j has a collider at k exactly when k > j, and a
non-collider otherwise. The "pseudoseparation" predicate and the census /
violation counters below only look at this length-2 structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import Dag, NodePair
from .rng import Stream


@dataclass(frozen=True)
class PathCensus:
    """Counts of existing length-2 paths through a pair, plus capacities.

    b_nc / b_c: realized two-edge paths through non-collider / collider
    middles. q_nc_capacity / q_c_capacity: number of candidate middles of
    each kind (j - 1 and n - j - 1 for pair (i, j), 0-based).
    """

    b_nc: int
    b_c: int
    q_nc_capacity: int
    q_c_capacity: int


@dataclass(frozen=True)
class ViolationCount:
    """How far a conditioning set is from the length-2 separation pattern.

    m_nc: candidate non-collider middles left out of z.
    m_c: candidate collider middles included in z.
    """

    m_nc: int
    m_c: int

    @property
    def m(self) -> int:
        return self.m_nc + self.m_c


def conditioning_set(z: Iterable[int]) -> frozenset[int]:
    return z if isinstance(z, frozenset) else frozenset(z)


def format_conditioning_set(z: Iterable[int]) -> str:
    """Sorted space-separated indices; empty string for the empty set."""
    return " ".join(str(v) for v in sorted(z))


def parse_conditioning_set(text: str) -> frozenset[int]:
    toks = text.split()
    out = set()
    for t in toks:
        try:
            v = int(t)
        except ValueError:
            raise ValueError(f"z: {t!r} is not an integer") from None
        if v in out:
            raise ValueError(f"z: index {v} repeated")
        out.add(v)
    return frozenset(out)


def _check_query(dag: Dag, pair: NodePair, z: frozenset[int]) -> None:
    if pair.j >= dag.n:
        raise ValueError(f"pair: j={pair.j} out of range for n={dag.n}")
    for v in z:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < dag.n:
            raise ValueError(f"z: index {v} out of range for n={dag.n}")
        if v == pair.i or v == pair.j:
            raise ValueError(f"z: index {v} is an endpoint of the query pair")


def is_d_separated(dag: Dag, pair: NodePair, z: Iterable[int] = frozenset()) -> bool:
    """True when z blocks every path between the pair.

    Reachability over (node, entry direction) states. With A the set of z
    and its ancestors: a node entered against an arrow (from a child, or
    the start node) passes in both directions unless it is in z; a node
    entered along an arrow (from a parent) passes downwards unless in z and
    passes back upwards only if it is in A (a collider opened by z).
    """
    zset = conditioning_set(z)
    _check_query(dag, pair, zset)
    if dag.has_edge(pair.i, pair.j):
        return False
    return not _active_trail_reaches(dag, pair.i, pair.j, zset)


def _active_trail_reaches(dag: Dag, src: int, dst: int, zset: frozenset[int]) -> bool:
    """Direction-tagged reachability from src; True when dst is on an
    active trail. Symmetric in (src, dst) by the underlying theory; both
    orientations are exercised in the tests."""
    n = dag.n
    parents = dag.parents_list
    children = dag.children_list

    in_z = bytearray(n)
    in_a = bytearray(n)
    stack = []
    for v in zset:
        in_z[v] = 1
        in_a[v] = 1
        stack.append(v)
    while stack:  # A = z plus ancestors of z
        w = stack.pop()
        for p in parents[w]:
            if not in_a[p]:
                in_a[p] = 1
                stack.append(p)

    seen_up = bytearray(n)  # reached against an arrow (or the start)
    seen_down = bytearray(n)  # reached along an arrow
    seen_up[src] = 1
    work = [(src, True)]
    while work:
        y, up = work.pop()
        if up and in_z[y]:
            continue  # entered against an arrow, blocked outright
        if not in_z[y]:
            for c in children[y]:
                if not seen_down[c]:
                    if c == dst:
                        return True
                    seen_down[c] = 1
                    work.append((c, False))
        if up or in_a[y]:
            # up: y not in z here; down: collider at y opened by z's closure
            for p in parents[y]:
                if not seen_up[p]:
                    if p == dst:
                        return True
                    seen_up[p] = 1
                    work.append((p, True))
    return False


def _simple_paths(dag: Dag, i: int, j: int):
    """Yield every simple undirected path from i to j as a node list."""
    path = [i]
    on_path = {i}

    def rec(v):
        if v == j:
            yield list(path)
            return
        for w in dag.neighbors(v):
            if w not in on_path:
                path.append(w)
                on_path.add(w)
                yield from rec(w)
                path.pop()
                on_path.remove(w)

    yield from rec(i)


def is_d_separated_bruteforce(
    dag: Dag, pair: NodePair, z: Iterable[int] = frozenset(), *, max_nodes: int = 12
) -> bool:
    """Literal check: enumerate all simple paths, test each for blocking.

    A path is blocked if some interior node is a non-collider in z, or a
    collider whose closure ({k} plus descendants) misses z entirely.
    Exponential; guarded to graphs with at most ``max_nodes`` nodes.
    """
    zset = conditioning_set(z)
    _check_query(dag, pair, zset)
    if dag.n > max_nodes:
        raise ValueError(f"n: brute-force path enumeration capped at {max_nodes} nodes")
    desc_cache: dict[int, frozenset[int]] = {}

    def collider_closure(k):
        got = desc_cache.get(k)
        if got is None:
            got = frozenset(dag.descendants(k) | {k})
            desc_cache[k] = got
        return got

    for nodes in _simple_paths(dag, pair.i, pair.j):
        blocked = False
        for t in range(1, len(nodes) - 1):
            prev, mid, nxt = nodes[t - 1], nodes[t], nodes[t + 1]
            into_from_prev = prev < mid  # edges always point low -> high
            into_from_next = nxt < mid
            if into_from_prev and into_from_next:
                if not (collider_closure(mid) & zset):
                    blocked = True
                    break
            elif mid in zset:
                blocked = True
                break
        if not blocked:
            return False
    return True


def _middle_masks(dag: Dag, pair: NodePair):
    mids = dag.undirected_row(pair.i) & dag.undirected_row(pair.j)
    return mids


def is_pseudoseparated(dag: Dag, pair: NodePair, z: Iterable[int] = frozenset()) -> bool:
    """Length-2 blocking only: every existing i-k-j path must be blocked at k.

    Requires every existing non-collider middle (k < j) to lie in z and
    every existing collider middle (k > j) to stay out of z. Implied by
    d-separation; the converse fails once longer paths matter. A direct
    edge between the pair is not a length-2 path and is ignored here.
    """
    zset = conditioning_set(z)
    _check_query(dag, pair, zset)
    mids = _middle_masks(dag, pair)
    j = pair.j
    for k in np.flatnonzero(mids[:j]).tolist():
        if k not in zset:
            return False
    for k in np.flatnonzero(mids[j + 1 :]).tolist():
        if k + j + 1 in zset:
            return False
    return True


def path_census(dag: Dag, pair: NodePair) -> PathCensus:
    """Count existing length-2 paths through the pair, by middle type."""
    _check_query(dag, pair, frozenset())
    mids = _middle_masks(dag, pair)
    j = pair.j
    return PathCensus(
        b_nc=int(mids[:j].sum()),
        b_c=int(mids[j + 1 :].sum()),
        q_nc_capacity=j - 1,
        q_c_capacity=dag.n - j - 1,
    )


def violation_count(dag_n: int, pair: NodePair, z: Iterable[int]) -> ViolationCount:
    """Pattern mismatches of z against the pair's candidate middles.

    Candidate non-collider middles are every k < j except i; candidate
    collider middles are every k > j. Counts how many of the former z
    omits and how many of the latter z includes. Graph-free: depends only
    on n, the pair, and z.
    """
    if not isinstance(dag_n, int) or dag_n < 2:
        raise ValueError("n: must be an integer >= 2")
    if pair.j >= dag_n:
        raise ValueError(f"pair: j={pair.j} out of range for n={dag_n}")
    zset = conditioning_set(z)
    m_c = 0
    in_vnc = 0
    for v in zset:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < dag_n:
            raise ValueError(f"z: index {v} out of range for n={dag_n}")
        if v == pair.i or v == pair.j:
            raise ValueError(f"z: index {v} is an endpoint of the query pair")
        if v > pair.j:
            m_c += 1
        elif v < pair.j:
            in_vnc += 1
    m_nc = (pair.j - 1) - in_vnc
    return ViolationCount(m_nc=m_nc, m_c=m_c)


def sample_bernoulli_set(n: int, pair: NodePair, p2: float, seed: int) -> frozenset[int]:
    """Random conditioning set: each node other than the pair joins i.i.d.

    Candidates are scanned in ascending index order, one uniform double
    each, so the draw is reproducible from the seed alone.
    """
    if not 0.0 < p2 < 1.0:
        raise ValueError("p2: must be in the open interval (0, 1)")
    if pair.j >= n:
        raise ValueError(f"pair: j={pair.j} out of range for n={n}")
    eligible = [v for v in range(n) if v != pair.i and v != pair.j]
    stream = Stream(seed)
    return frozenset(eligible[t] for t in stream.bernoulli_indices(len(eligible), p2))


def sample_fixed_size_set(n: int, pair: NodePair, alpha: int, seed: int) -> frozenset[int]:
    """Uniform conditioning set of exactly alpha nodes drawn from the n-2
    candidates outside the pair."""
    if pair.j >= n:
        raise ValueError(f"pair: j={pair.j} out of range for n={n}")
    if not isinstance(alpha, int) or not 0 <= alpha <= n - 2:
        raise ValueError(f"alpha: must be an integer in [0, {n - 2}]")
    eligible = [v for v in range(n) if v != pair.i and v != pair.j]
    picks = Stream(seed).choose(len(eligible), alpha)
    return frozenset(eligible[t] for t in picks)
