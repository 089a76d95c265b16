"""Searching for separating sets of bounded or minimum size.

``min_separator_size`` answers "is there a separator of size <= s_max, and
how small can it get" by subset enumeration, with two prunings that never
change the answer: every existing non-collider middle of a length-2 path
must be inside any separator, and no collider middle (nor any of its
descendants) can be, so those nodes are forced in or struck from the
candidate pool before enumeration starts.

``minimum_d_separator`` computes an exact minimum-size separator in
polynomial time as a minimum vertex cut between the pair in the moralized
graph of their ancestral closure, which is the classical reduction. It is
cross-validated against the enumeration in the tests and carries an
internal witness check.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from math import comb
from typing import Optional

from .dsep import is_d_separated
from .graph import Dag, NodePair, ancestral_closure

SUBSET_BUDGET_DEFAULT = 10_000_000


def _length2_structure(dag: Dag, pair: NodePair):
    """Forced-in nodes (existing non-collider middles) and forbidden nodes
    (existing collider middles plus their descendants)."""
    i, j = pair.i, pair.j
    mandatory = []
    forbidden: set[int] = set()
    for k in range(dag.n):
        if k == i or k == j:
            continue
        if dag.adjacent(i, k) and dag.adjacent(j, k):
            if k < j:
                mandatory.append(k)
            else:
                forbidden.add(k)
                forbidden |= dag.descendants(k)
    return mandatory, forbidden


def min_separator_size(
    dag: Dag,
    pair: NodePair,
    s_max: int,
    *,
    subset_budget: int = SUBSET_BUDGET_DEFAULT,
) -> Optional[int]:
    """Smallest separator size in [0, s_max], or None if none that small.

    Enumerates candidate sets in increasing size. The unpruned enumeration
    space sum_{s<=s_max} C(n-2, s) must fit the budget; the prunings only
    shrink the actual work.
    """
    if not isinstance(s_max, int) or s_max < 0:
        raise ValueError("s_max: must be a non-negative integer")
    if pair.j >= dag.n:
        raise ValueError(f"pair: j={pair.j} out of range for n={dag.n}")
    n = dag.n
    s_cap = min(s_max, n - 2)
    total = sum(comb(n - 2, s) for s in range(s_cap + 1))
    if total > subset_budget:
        raise ValueError(
            f"s_max: enumeration would touch {total} subsets, over budget {subset_budget}"
        )
    if dag.has_edge(pair.i, pair.j):
        return None

    mandatory, forbidden = _length2_structure(dag, pair)
    if len(mandatory) > s_cap:
        return None
    base = frozenset(mandatory)
    pool = [
        v
        for v in range(n)
        if v != pair.i and v != pair.j and v not in base and v not in forbidden
    ]
    for s in range(len(base), s_cap + 1):
        for extra in combinations(pool, s - len(base)):
            if is_d_separated(dag, pair, base | frozenset(extra)):
                return s
    return None


def count_nonseparating_sets(dag: Dag, pair: NodePair, *, max_nodes: int = 20) -> int:
    """How many of the 2**(n-2) candidate conditioning sets fail to
    separate the pair. Exponential; guarded by ``max_nodes``."""
    if dag.n > max_nodes:
        raise ValueError(f"n: exhaustive subset count capped at {max_nodes} nodes")
    if pair.j >= dag.n:
        raise ValueError(f"pair: j={pair.j} out of range for n={dag.n}")
    eligible = [v for v in range(dag.n) if v != pair.i and v != pair.j]
    m = len(eligible)
    bad = 0
    for mask in range(1 << m):
        z = frozenset(eligible[t] for t in range(m) if mask >> t & 1)
        if not is_d_separated(dag, pair, z):
            bad += 1
    return bad


def minimum_d_separator(dag: Dag, pair: NodePair) -> Optional[frozenset[int]]:
    """A minimum-cardinality separator for the pair, or None if adjacent.

    Works on the moralization of the subgraph induced by the ancestral
    closure of {i, j}: each node becomes an in/out arc of capacity one and
    each moral edge a pair of infinite arcs, so a max-flow between the pair
    yields a minimum vertex cut, which is a minimum separator.
    """
    if pair.j >= dag.n:
        raise ValueError(f"pair: j={pair.j} out of range for n={dag.n}")
    i, j = pair.i, pair.j
    if dag.has_edge(i, j):
        return None

    scope = sorted(ancestral_closure(dag, (i, j)))
    index = {v: t for t, v in enumerate(scope)}
    moral: list[set[int]] = [set() for _ in scope]
    for v in scope:
        ps = [p for p in dag.parents_list[v]]  # parents of a scope node are in scope
        tv = index[v]
        for p in ps:
            tp = index[p]
            moral[tp].add(tv)
            moral[tv].add(tp)
        for a, b in combinations(ps, 2):
            ta, tb = index[a], index[b]
            moral[ta].add(tb)
            moral[tb].add(ta)

    # node split: IN(t) = 2t, OUT(t) = 2t+1; middle arc capacity 1
    big = len(scope) + 1
    cap: dict[int, dict[int, int]] = {}

    def add_arc(a, b, c):
        cap.setdefault(a, {})[b] = cap.setdefault(a, {}).get(b, 0) + c
        cap.setdefault(b, {}).setdefault(a, 0)

    for v in scope:
        t = index[v]
        add_arc(2 * t, 2 * t + 1, 1 if v != i and v != j else big)
    for t, nbrs in enumerate(moral):
        for u in nbrs:
            add_arc(2 * t + 1, 2 * u, big)

    source, sink = 2 * index[i] + 1, 2 * index[j]
    if sink in cap.get(source, {}) and cap[source][sink] > 0:
        raise RuntimeError("moral graph links a nonadjacent pair directly")

    while True:  # Edmonds-Karp
        parent_arc: dict[int, int] = {source: source}
        dq = deque([source])
        while dq and sink not in parent_arc:
            a = dq.popleft()
            for b, c in cap[a].items():
                if c > 0 and b not in parent_arc:
                    parent_arc[b] = a
                    dq.append(b)
        if sink not in parent_arc:
            break
        # bottleneck along the path
        bott = None
        b = sink
        while b != source:
            a = parent_arc[b]
            bott = cap[a][b] if bott is None else min(bott, cap[a][b])
            b = a
        b = sink
        while b != source:
            a = parent_arc[b]
            cap[a][b] -= bott
            cap[b][a] += bott
            b = a

    reach = {source}
    dq = deque([source])
    while dq:
        a = dq.popleft()
        for b, c in cap[a].items():
            if c > 0 and b not in reach:
                reach.add(b)
                dq.append(b)
    cut = frozenset(
        v
        for v in scope
        if v != i and v != j and 2 * index[v] in reach and 2 * index[v] + 1 not in reach
    )
    if not is_d_separated(dag, pair, cut):
        raise RuntimeError("separator construction produced a non-separating set")
    return cut
