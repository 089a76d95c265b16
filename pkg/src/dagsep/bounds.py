"""Closed-form evaluators for separation probabilities and search costs.

Everything here is straight arithmetic on model parameters; no graphs are
sampled. Products of near-one factors are evaluated in log space with
``log1p`` to keep long exponents accurate. ``sparse_graph_ratio`` is exact
big-integer arithmetic because its acceptance tolerance is tighter than
what floating-point accumulation of 2**C(n,2) terms would give.

Index convention: the pair parameter j is 1-based here (j >= 2), matching
how the formulas are usually written; callers holding 0-based node indices
pass j0 + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, exp, floor, log1p
from typing import Optional, Union


@dataclass(frozen=True)
class BoundInput:
    """Model parameters consumed by the bound evaluators.

    n: graph size; p1: edge probability; j: 1-based index of the later
    pair node (where applicable); p2: conditioning-set inclusion
    probability; alpha: fixed conditioning-set size; delta: fraction of n
    used by threshold rules.
    """

    n: int
    p1: float
    j: Optional[int] = None
    p2: Optional[float] = None
    alpha: Optional[int] = None
    delta: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("n: must be an integer >= 2")
        if not 0.0 < self.p1 < 1.0:
            raise ValueError("p1: must be in the open interval (0, 1)")
        if self.j is not None:
            if not isinstance(self.j, int) or not 2 <= self.j <= self.n:
                raise ValueError(f"j: must be an integer in [2, {self.n}]")
        if self.p2 is not None and not 0.0 < self.p2 < 1.0:
            raise ValueError("p2: must be in the open interval (0, 1)")
        if self.alpha is not None:
            if not isinstance(self.alpha, int) or not 0 <= self.alpha <= self.n - 2:
                raise ValueError(f"alpha: must be an integer in [0, {self.n - 2}]")
        if self.delta is not None and not 0.0 < self.delta < 1.0:
            raise ValueError("delta: must be in the open interval (0, 1)")

    def require(self, *fields: str) -> None:
        for f in fields:
            if getattr(self, f) is None:
                raise ValueError(f"{f}: required by this bound")


@dataclass(frozen=True)
class SgsBoundInput:
    """Parameters for the expected-oracle-call lower bounds."""

    n: int
    p1: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise ValueError("n: must be an integer >= 3")
        if not 0.0 < self.p1 < 1.0:
            raise ValueError("p1: must be in the open interval (0, 1)")


def bound_random_z(inp: BoundInput) -> float:
    """P(pair separated by a Bernoulli(p2) conditioning set), upper bound,
    for a nonadjacent pair whose later node has 1-based index j:

        (1 - p2*p1^2)^(n-j) * (1 - (1-p2)*p1^2)^(j-2)
    """
    inp.require("j", "p2")
    q = inp.p1 * inp.p1
    lg = (inp.n - inp.j) * log1p(-inp.p2 * q) + (inp.j - 2) * log1p(-(1.0 - inp.p2) * q)
    return exp(lg)


def bound_random_z_simple(inp: BoundInput) -> float:
    """j-free relaxation: (1 - (1 - max(p2, 1-p2)) * p1^2)^(n-2)."""
    inp.require("p2")
    worst = max(inp.p2, 1.0 - inp.p2)
    return exp((inp.n - 2) * log1p(-(1.0 - worst) * inp.p1 * inp.p1))


def bound_random_z_unconditional(inp: BoundInput) -> float:
    """Random-pair variant: multiplies the conditional bound by P(no edge)."""
    return (1.0 - inp.p1) * bound_random_z(inp)


def bound_bounded_size(inp: BoundInput) -> tuple[float, float]:
    """(threshold, probability_bound) for separators of bounded size.

    Conditioning sets smaller than threshold = p1^2 (j-2) / 2 succeed with
    probability at most exp(-p1^2 (j-2) / 8).
    """
    inp.require("j")
    t = 0.5 * inp.p1 * inp.p1 * (inp.j - 2)
    return t, exp(-0.25 * t)


def bound_bounded_size_unconditional(inp: BoundInput) -> tuple[float, float]:
    """Random-pair variant of ``bound_bounded_size``."""
    t, b = bound_bounded_size(inp)
    return t, (1.0 - inp.p1) * b


def bound_fixed_size(inp: BoundInput) -> float:
    """P(pair separated by a uniform size-alpha conditioning set), upper
    bound:

        (1 - p1^2 (2-p1^2) alpha/(n-2))^(n-j) * (1 - p1^2)^(j-alpha-2)

    The second exponent may be negative; the expression stays valid.
    """
    inp.require("j", "alpha")
    q = inp.p1 * inp.p1
    ratio = inp.alpha / (inp.n - 2) if inp.n > 2 else 0.0
    lg = (inp.n - inp.j) * log1p(-q * (2.0 - q) * ratio) + (inp.j - inp.alpha - 2) * log1p(-q)
    return exp(lg)


def sparse_graph_ratio(n: int, d: Union[float, Fraction]) -> float:
    """Fraction of n-node graph draws (over all 2^C(n,2) edge patterns)
    with density at most d, computed exactly:

        sum_{m=0}^{floor(d*C(n,2))} C(C(n,2), m) / 2^C(n,2)

    Float densities are snapped to the nearest rational with denominator
    <= 10^9 before the floor, so d = 1/3 passed as a float behaves as the
    intended thirds, not as its binary approximation.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError("n: must be an integer >= 2")
    if isinstance(d, Fraction):
        df = d
    elif isinstance(d, (int, float)):
        df = Fraction(d).limit_denominator(10**9)
    else:
        raise ValueError("d: must be a real number or Fraction")
    if not 0 <= df <= 1:
        raise ValueError("d: must be in [0, 1]")
    m_all = comb(n, 2)
    cutoff = floor(df * m_all)
    acc = sum(comb(m_all, m) for m in range(cutoff + 1))
    return float(Fraction(acc, 1 << m_all))


def pc_cmax_threshold(n: int, p1: float, delta1: float) -> float:
    """Size cap p1^2 (delta1*n - 2) / 2 under which constraint-based edge
    removal with bounded sets stays unreliable."""
    _check_threshold_args(n, p1, delta1, "delta1")
    return 0.5 * p1 * p1 * (delta1 * n - 2.0)


def pc_adjacency_threshold(n: int, p1: float, delta2: float) -> float:
    """Neighborhood-size growth threshold p1 (delta2*n - 2) / 2."""
    _check_threshold_args(n, p1, delta2, "delta2")
    return 0.5 * p1 * (delta2 * n - 2.0)


def _check_threshold_args(n, p1, delta, name):
    if not isinstance(n, int) or n < 2:
        raise ValueError("n: must be an integer >= 2")
    if not 0.0 < p1 < 1.0:
        raise ValueError("p1: must be in the open interval (0, 1)")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"{name}: must be in the open interval (0, 1)")


def sgs_calls_lower_bound(inp: SgsBoundInput) -> tuple[float, float]:
    """(conditional, unconditional) lower bounds on expected oracle calls
    when separating sets are tried in uniform random order.

    With b = 2 - p1^2 and a = 1 + b^-(n-2):

        conditional   = ((2/b)^(n-2) - 1) / a
        unconditional = p1 * 2^(n-2) + (1 - p1) * conditional
    """
    m = inp.n - 2
    b = 2.0 - inp.p1 * inp.p1
    a = 1.0 + b**-m
    conditional = ((2.0 / b) ** m - 1.0) / a
    unconditional = inp.p1 * 2.0**m + (1.0 - inp.p1) * conditional
    return conditional, unconditional
