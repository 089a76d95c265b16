"""Random DAGs over a fixed node order, plus a plain-text graph format.

Nodes are 0..n-1 and every edge points from the lower index to the higher
one, so the node order itself is a topological order. The random model
includes each of the n(n-1)/2 candidate edges independently with a shared
probability p1.

A ``Dag`` stores a dense upper-triangular boolean adjacency matrix together
with precomputed parent/child tuples; graphs are immutable after
construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .rng import MASK64, Stream, double_block


class FormatError(ValueError):
    """Malformed graph text (bad header, bad edge line, duplicate, range)."""


@dataclass(frozen=True, order=True)
class NodePair:
    """Ordered node pair with i < j."""

    i: int
    j: int

    def __post_init__(self):
        if not isinstance(self.i, int) or not isinstance(self.j, int):
            raise ValueError("pair: indices must be integers")
        if not 0 <= self.i < self.j:
            raise ValueError("pair: requires 0 <= i < j")

    @staticmethod
    def ordered(a: int, b: int) -> "NodePair":
        """Build a pair from two distinct indices given in either order."""
        if a == b:
            raise ValueError("pair: indices must be distinct")
        return NodePair(a, b) if a < b else NodePair(b, a)


@dataclass(frozen=True)
class GenParams:
    """Parameters of the random model: size, edge probability, seed."""

    n: int
    p1: float
    seed: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n: must be an integer >= 1")
        if not 0.0 < self.p1 < 1.0:
            raise ValueError("p1: must be in the open interval (0, 1)")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise ValueError("seed: must be an integer in [0, 2**64)")


class Dag:
    """Immutable DAG on nodes 0..n-1 with all edges pointing low -> high."""

    __slots__ = ("n", "edge_count", "_adj", "_und", "parents_list", "children_list", "_neighbors")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if not isinstance(n, int) or n < 1:
            raise ValueError("n: must be an integer >= 1")
        adj = np.zeros((n, n), dtype=bool)
        parents: list[list[int]] = [[] for _ in range(n)]
        children: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(edges):
            if not (isinstance(u, (int, np.integer)) and isinstance(v, (int, np.integer))):
                raise ValueError("edge: endpoints must be integers")
            u, v = int(u), int(v)
            if not 0 <= u < v < n:
                raise ValueError(f"edge: ({u}, {v}) violates 0 <= u < v < n")
            if adj[u, v]:
                raise ValueError(f"edge: ({u}, {v}) listed twice")
            adj[u, v] = True
            children[u].append(v)
            parents[v].append(u)
        adj.setflags(write=False)
        und = adj | adj.T
        und.setflags(write=False)
        self.n = n
        self.edge_count = int(adj.sum())
        self._adj = adj
        self._und = und
        self.parents_list = tuple(tuple(p) for p in parents)
        self.children_list = tuple(tuple(c) for c in children)
        self._neighbors = None

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, lexicographically sorted."""
        return [(int(u), int(v)) for u, v in np.argwhere(self._adj)]

    def has_edge(self, u: int, v: int) -> bool:
        """Directed edge u -> v present? Only u < v can ever hold one."""
        self._check_node(u)
        self._check_node(v)
        return u < v and bool(self._adj[u, v])

    def adjacent(self, a: int, b: int) -> bool:
        self._check_node(a)
        self._check_node(b)
        return bool(self._und[a, b])

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_node(v)
        if self._neighbors is None:
            self._neighbors = tuple(
                tuple(int(w) for w in np.flatnonzero(self._und[x])) for x in range(self.n)
            )
        return self._neighbors[v]

    def undirected_row(self, v: int) -> np.ndarray:
        """Read-only boolean adjacency row of the skeleton."""
        self._check_node(v)
        return self._und[v]

    def descendants(self, v: int) -> set[int]:
        """Strict descendants of v (v itself excluded)."""
        self._check_node(v)
        out: set[int] = set()
        stack = list(self.children_list[v])
        while stack:
            w = stack.pop()
            if w not in out:
                out.add(w)
                stack.extend(self.children_list[w])
        return out

    def _check_node(self, v: int) -> None:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < self.n:
            raise ValueError(f"node: {v} out of range for n={self.n}")

    def __eq__(self, other):
        if not isinstance(other, Dag):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._adj, other._adj)

    __hash__ = None

    def __repr__(self):
        return f"Dag(n={self.n}, edges={self.edge_count})"


def generate_random_dag(params: GenParams) -> Dag:
    """Draw a random DAG: each candidate edge (u, v), u < v, included i.i.d.

    Candidate edges are examined in lexicographic order, consuming one
    uniform double each from the stream seeded with ``params.seed``; edge
    (u, v) is included when its double is < p1.
    """
    n = params.n
    m = n * (n - 1) // 2
    if m == 0:
        return Dag(n, [])
    us, vs = np.triu_indices(n, k=1)  # row-major, i.e. lexicographic
    mask = double_block(params.seed, m) < params.p1
    return Dag(n, list(zip(us[mask].tolist(), vs[mask].tolist())))


def descendants(dag: Dag, v: int) -> set[int]:
    """All nodes reachable from v along directed edges, excluding v."""
    return dag.descendants(v)


def ancestral_closure(dag: Dag, nodes: Iterable[int]) -> set[int]:
    """The given nodes together with all their ancestors."""
    out: set[int] = set()
    stack = []
    for v in nodes:
        dag._check_node(v)
        if v not in out:
            out.add(v)
            stack.append(v)
    while stack:
        w = stack.pop()
        for p in dag.parents_list[w]:
            if p not in out:
                out.add(p)
                stack.append(p)
    return out


def nonadjacent_pairs(dag: Dag) -> list[NodePair]:
    """All pairs (i, j), i < j, with no edge between them; lexicographic."""
    out = []
    for i in range(dag.n - 1):
        row = dag._adj[i]
        for j in range(i + 1, dag.n):
            if not row[j]:
                out.append(NodePair(i, j))
    return out


def sample_pairs(pairs: Sequence[NodePair], count: int, seed: int) -> list[NodePair]:
    """Uniform sample of ``count`` distinct pairs, in selection order."""
    if not 0 <= count <= len(pairs):
        raise ValueError(f"count: must be in [0, {len(pairs)}]")
    picks = Stream(seed).choose(len(pairs), count)
    return [pairs[t] for t in picks]


def density(dag: Dag) -> float:
    """Realized edge density: edge_count / C(n, 2). Needs n >= 2."""
    if dag.n < 2:
        raise ValueError("n: density needs n >= 2")
    return dag.edge_count / comb(dag.n, 2)


def write_dag_text(dag: Dag) -> str:
    """Serialize: header ``dag <n>``, then one ``<u> <v>`` line per edge.

    Edge lines are lexicographically sorted; LF endings; no trailing
    whitespace.
    """
    lines = [f"dag {dag.n}"]
    lines.extend(sorted(f"{u} {v}" for u, v in dag.edges()))
    return "\n".join(lines) + "\n"


def read_dag_text(text: str) -> Dag:
    """Parse the text format. Rejects bad headers, malformed edge lines,
    u >= v, out-of-range endpoints, and duplicate edges."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("header: empty input")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dag":
        raise FormatError(f"header: expected 'dag <n>', got {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise FormatError(f"header: node count {head[1]!r} is not an integer") from None
    if n < 1:
        raise FormatError("header: node count must be >= 1")
    if lines[0] != f"dag {n}":
        raise FormatError(f"header: not in canonical 'dag <n>' form: {lines[0]!r}")
    edges = []
    seen = set()
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"edge: line {k} is not '<u> <v>'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"edge: line {k} has non-integer endpoints") from None
        if line != f"{u} {v}":
            raise FormatError(f"edge: line {k} is not in canonical '<u> <v>' form")
        if not 0 <= u < v < n:
            raise FormatError(f"edge: line {k} violates 0 <= u < v < n={n}")
        if (u, v) in seen:
            raise FormatError(f"edge: line {k} duplicates ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    return Dag(n, edges)
