"""Brute-force oracles and random instance generators.

Nothing here calls the closure, power, trace or residual code that the
oracles are used to check; only the raw element operations of a dioid are
used.  Every enumeration is bounded by a walk budget and fails loudly when
the budget runs out.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .dioid import CostDioid, MinPlusVec, make_dioid
from .moduloid import CostMatrix
from .semantics import TransitionSystem

DEFAULT_WALK_BUDGET = 10**6


class WalkBudgetExceeded(RuntimeError):
    pass


def walk_budget(budget: int | None = None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("TROPICOST_WALK_BUDGET")
    return int(env) if env else DEFAULT_WALK_BUDGET


# random instances -----------------------------------------------------------


@dataclass(frozen=True)
class RandomSystemSpec:
    n: int
    density: float = 0.5
    kind: str = "maxplus"
    seed: int | str = 0
    universe: tuple[str, ...] = ("x", "y", "z")
    vec_dim: int = 2
    num_range: tuple[int, int] = (-10, 10)
    den_range: tuple[int, int] = (1, 4)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one state")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")

    def dioid(self) -> CostDioid:
        return make_dioid(self.kind, universe=self.universe, m=self.vec_dim)


def cost_sampler(dioid: CostDioid, num_range=(-10, 10), den_range=(1, 4)) -> Callable[[random.Random], object]:
    """Sampler of non-bottom costs with small exact representations."""
    lo, hi = num_range
    dlo, dhi = den_range

    def rational(rng, lo=lo):
        return Fraction(rng.randint(lo, hi), rng.randint(dlo, dhi))

    kind = dioid.kind
    if kind in ("maxplus", "minplus", "minmax", "maxmin"):
        return rational
    if kind == "maxtimes":
        return lambda rng: rational(rng, lo=max(lo, 1))
    if isinstance(dioid, MinPlusVec):
        return lambda rng: tuple(rational(rng, lo=max(lo, 0)) for _ in range(dioid.m))
    if kind in ("cup-cap", "cap-cup"):
        uni = dioid.universe_order

        def subset(rng):
            while True:
                s = frozenset(u for u in uni if rng.random() < 0.5)
                if s != dioid.zero:
                    return s

        return subset
    raise ValueError(f"no sampler for {kind}")


def _nonempty_subset(rng: random.Random, items: Sequence):
    chosen = [x for x in items if rng.random() < 0.5]
    return chosen or [rng.choice(items)]


def random_matrix(dioid: CostDioid, n: int, m: int, density: float, rng: random.Random, sample=None) -> CostMatrix:
    sample = sample or cost_sampler(dioid)
    rows = [[sample(rng) if rng.random() < density else dioid.zero for _ in range(m)] for _ in range(n)]
    return CostMatrix(dioid, rows, coerce=False)


def random_system(spec: RandomSystemSpec) -> TransitionSystem:
    """Deterministic pseudorandom system; I and F are nonempty."""
    rng = random.Random(spec.seed)
    dioid = spec.dioid()
    sample = cost_sampler(dioid, spec.num_range, spec.den_range)
    states = tuple(f"s{i}" for i in range(spec.n))
    M = random_matrix(dioid, spec.n, spec.n, spec.density, rng, sample)
    return TransitionSystem(states, M, _nonempty_subset(rng, states), _nonempty_subset(rng, states))


def random_partition(states: Sequence[str], rng: random.Random, blocks: int | None = None) -> dict[str, str]:
    """Random total map from ``states`` onto abstract states ``A0..``."""
    k = blocks if blocks is not None else rng.randint(1, len(states))
    mapping = {s: f"A{rng.randrange(k)}" for s in states}
    return mapping


# walk enumeration -----------------------------------------------------------


def _walks_from(M: CostMatrix, start: int, maxlen: int, counter: list[int], budget: int):
    """Yield (path, cost) for every walk of 1..maxlen steps leaving ``start``."""
    d = M.dioid
    rows = M.rows
    zero = d.zero
    succ = [[(j, q) for j, q in enumerate(r) if not d.eq(q, zero)] for r in rows]
    stack = [((start,), d.one)]
    while stack:
        path, cost = stack.pop()
        if len(path) - 1 >= maxlen:
            continue
        for j, q in succ[path[-1]]:
            counter[0] += 1
            if counter[0] > budget:
                raise WalkBudgetExceeded(f"more than {budget} walks enumerated")
            npath = path + (j,)
            ncost = d.mul(cost, q)
            yield npath, ncost
            stack.append((npath, ncost))


def enumerate_paths(P: TransitionSystem, src: str, dst: str, maxlen: int, *, budget: int | None = None):
    """All walks src -> dst with 1..maxlen transitions, as (state names, cost)."""
    if maxlen < 1:
        raise ValueError("maxlen must be positive")
    idx = P.index
    target = idx[dst]
    counter = [0]
    out = []
    for path, cost in _walks_from(P.matrix, idx[src], maxlen, counter, walk_budget(budget)):
        if path[-1] == target:
            out.append((tuple(P.states[k] for k in path), cost))
    return out


def closed_walks(M: CostMatrix, maxlen: int, *, budget: int | None = None) -> Iterator[tuple[tuple[int, ...], object]]:
    """Every closed walk of 1..maxlen steps, by start state."""
    counter = [0]
    b = walk_budget(budget)
    for s in range(M.n_rows):
        for path, cost in _walks_from(M, s, maxlen, counter, b):
            if path[-1] == s:
                yield path, cost


def closure_by_walks(M: CostMatrix, *, budget: int | None = None) -> list[list]:
    """Transitive closure from explicit walk enumeration.

    Sums all walks of at most n steps.  An entry is top when some walk i -> j
    can pass through a closed walk whose cost is not below e: repeating that
    closed walk grows the cost without bound.  When no such closed walk
    exists, deleting cycles never lowers a walk's cost, so walks of at most n
    steps already reach the supremum.
    """
    d = M.dioid
    n = M.n_rows
    b = walk_budget(budget)
    counter = [0]
    S = [[d.zero] * n for _ in range(n)]
    reach = [[False] * n for _ in range(n)]
    pumpable = [False] * n
    for i in range(n):
        for path, cost in _walks_from(M, i, n, counter, b):
            j = path[-1]
            S[i][j] = d.add(S[i][j], cost)
            reach[i][j] = True
            if j == i and not d.eq(d.add(cost, d.one), d.one):
                pumpable[i] = True
    for i in range(n):
        for j in range(n):
            for v in range(n):
                if pumpable[v] and (v == i or reach[i][v]) and (v == j or reach[v][j]):
                    S[i][j] = d.top
                    break
    return S


def reachable_indices(M: CostMatrix, sources: Iterable[int]) -> list[int]:
    d = M.dioid
    seen = set(sources)
    frontier = list(seen)
    while frontier:
        nxt = []
        for i in frontier:
            for j, q in enumerate(M.rows[i]):
                if j not in seen and not d.eq(q, d.zero):
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(seen)


def cycle_means_oracle(P: TransitionSystem, maxlen: int | None = None, *, budget: int | None = None):
    """(+) of the average costs of closed walks in the part reachable from I.

    With ``maxlen`` left at None the bound is the number of reachable states.
    """
    idx = P.index
    keep = reachable_indices(P.matrix, [idx[s] for s in P.init])
    R = P.matrix.submatrix(keep)
    bound = len(keep) if maxlen is None else maxlen
    if bound < 1:
        raise ValueError("maxlen must be positive")
    d = R.dioid
    total = d.zero
    for path, cost in closed_walks(R, bound, budget=budget):
        total = d.add(total, d.root(cost, len(path) - 1))
    return total


def simple_cycle_means(P: TransitionSystem):
    """(+) of average costs over simple cycles reachable from I."""
    idx = P.index
    keep = reachable_indices(P.matrix, [idx[s] for s in P.init])
    R = P.matrix.submatrix(keep)
    d = R.dioid
    n = R.n_rows
    total = d.zero
    for s in range(n):
        # cycles whose least state is s, so each is seen once per rotation class
        stack = [((s,), d.one)]
        while stack:
            path, cost = stack.pop()
            for j, q in enumerate(R.rows[path[-1]]):
                if d.eq(q, d.zero):
                    continue
                c = d.mul(cost, q)
                if j == s:
                    total = d.add(total, d.root(c, len(path)))
                elif j > s and j not in path:
                    stack.append((path + (j,), c))
    return total


# residuation ---------------------------------------------------------------


def greatest_subsolution(
    table: Mapping[Hashable, object],
    b,
    leq: Callable[[object, object], bool],
    join: Callable[[object, object], object],
    bottom,
):
    """Join of every x with f(x) <= b, where f is given by ``table``.

    On a finite domain closed under joins this is the maximum subsolution; the
    caller can check that by evaluating f at the result.
    """
    acc = bottom
    for x, fx in table.items():
        if leq(fx, b):
            acc = join(acc, x)
    return acc
