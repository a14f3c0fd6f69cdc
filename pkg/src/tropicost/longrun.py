"""Long-run cost: the worst average cost per transition over cycles.

For finite systems over (max, +) this is the maximum cycle mean, which is
also the largest eigenvalue of an irreducible matrix.  It is computed here
from its definition through matrix powers and traces, not through Karp's
algorithm.
"""

from __future__ import annotations

from typing import Sequence

from .moduloid import CostMatrix, mat_powers, trace
from .oracle import cycle_means_oracle, simple_cycle_means
from .semantics import TransitionSystem, reachable_restrict

__all__ = [
    "long_run_cost",
    "matrix_long_run_cost",
    "average_path_cost",
    "cycle_means_oracle",
    "simple_cycle_means",
]


def matrix_long_run_cost(R: CostMatrix):
    """(+) over k = 1..n of the kth root of tr(R^k)."""
    d = R.dioid
    total = d.zero
    for k, Rk in enumerate(mat_powers(R, R.n_rows), start=1):
        total = d.add(total, d.root(trace(Rk), k))
    return total


def long_run_cost(P: TransitionSystem):
    """Long-run cost of P on the part reachable from its initial states.

    Returns bottom when that part has no cycle.
    """
    return matrix_long_run_cost(reachable_restrict(P).matrix)


def average_path_cost(P: TransitionSystem, path: Sequence[str]):
    if len(path) < 2:
        raise ValueError("a path needs at least one transition")
    d = P.dioid
    cost = d.one
    for src, dst in zip(path, path[1:]):
        q = P.cost(src, dst)
        if d.eq(q, d.zero):
            raise ValueError(f"no transition {src} -> {dst}")
        cost = d.mul(cost, q)
    return d.root(cost, len(path) - 1)
