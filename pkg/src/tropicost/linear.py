"""Correct linear abstractions and constructive checks of their consequences.

A triple (M, M#, alpha1) is correct when alpha1 . M <= M# . alpha1 and the
initial and final states of M land inside those of M#.  The checks below
evaluate the over-approximation of global and long-run cost together with
the intermediate inequalities that lead to them, each by direct enumeration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .dioid import CostDioid
from .longrun import matrix_long_run_cost
from .moduloid import (
    CostMatrix,
    first_violation,
    kleene_plus,
    mat_add,
    mat_mul,
    mat_powers,
    transpose,
)
from .oracle import cost_sampler, random_matrix
from .partition import PartitionLift


class NotSelectiveError(ValueError):
    pass


@dataclass(frozen=True)
class LinearAbstractionTriple:
    """Concrete matrix, abstract matrix and a {bot, e} abstraction matrix.

    ``init``/``final`` index concrete states and ``init_abs``/``final_abs``
    abstract ones; all four may be left empty when only the matrices matter.
    """

    M: CostMatrix
    M_abs: CostMatrix
    alpha1: CostMatrix
    init: frozenset[int] = frozenset()
    final: frozenset[int] = frozenset()
    init_abs: frozenset[int] = frozenset()
    final_abs: frozenset[int] = frozenset()

    def __post_init__(self):
        for name in ("init", "final", "init_abs", "final_abs"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        n, k = self.M.n_rows, self.M_abs.n_rows
        if self.M.shape != (n, n) or self.M_abs.shape != (k, k):
            raise ValueError("M and M# must be square")
        if self.alpha1.shape != (k, n):
            raise ValueError(f"alpha1 must be {k}x{n}, got {self.alpha1.shape[0]}x{self.alpha1.shape[1]}")
        d = self.dioid
        for row in self.alpha1.rows:
            for x in row:
                if not (d.eq(x, d.zero) or d.eq(x, d.one)):
                    raise ValueError(f"alpha1 entry {d.format(x)} is neither bot nor e")

    @property
    def dioid(self) -> CostDioid:
        return self.M.dioid

    def decomposition(self, s: int) -> frozenset[int]:
        """Abstract basis positions holding e in column s of alpha1."""
        d = self.dioid
        return frozenset(a for a in range(self.alpha1.n_rows) if d.eq(self.alpha1[a, s], d.one))

    def image(self, states) -> frozenset[int]:
        out: set[int] = set()
        for s in states:
            out |= self.decomposition(s)
        return frozenset(out)

    def with_abstract(self, M_abs: CostMatrix) -> "LinearAbstractionTriple":
        return LinearAbstractionTriple(self.M, M_abs, self.alpha1, self.init, self.final, self.init_abs, self.final_abs)


def triple_from_partition(M: CostMatrix, M_abs: CostMatrix, L: PartitionLift, init=(), final=(), init_abs=(), final_abs=()):
    """Triple whose alpha1 is a partition lift; state sets are given by name."""
    ci = {s: i for i, s in enumerate(L.concrete)}
    ai = {a: i for i, a in enumerate(L.abstract)}
    return LinearAbstractionTriple(
        M,
        M_abs,
        L.alpha_matrix,
        frozenset(ci[s] for s in init),
        frozenset(ci[s] for s in final),
        frozenset(ai[a] for a in init_abs),
        frozenset(ai[a] for a in final_abs),
    )


@dataclass
class Verdict:
    ok: bool
    violation: str | None = None

    def __bool__(self):
        return self.ok


def check_correct_linear(T: LinearAbstractionTriple) -> Verdict:
    d = T.dioid
    lhs = mat_mul(T.alpha1, T.M)
    rhs = mat_mul(T.M_abs, T.alpha1)
    bad = first_violation(lhs, rhs)
    if bad is not None:
        a, s = bad
        return Verdict(False, f"alpha1.M <= M#.alpha1 fails at ({a}, {s}): {d.format(lhs[a, s])} > {d.format(rhs[a, s])}")
    for s in sorted(T.init):
        if not T.decomposition(s) <= T.init_abs:
            return Verdict(False, f"initial state {s} maps outside I#")
    for s in sorted(T.final):
        if not T.decomposition(s) <= T.final_abs:
            return Verdict(False, f"final state {s} maps outside F#")
    return Verdict(True)


# lemmas -----------------------------------------------------------------------


def check_lemma_dev(T: LinearAbstractionTriple, sa: int, s: int) -> bool:
    """Both sides of entry (sa, s) of the correctness condition, expanded."""
    d = T.dioid
    lhs = d.sum(T.M[c, s] for c in range(T.M.n_rows) if d.eq(T.alpha1[sa, c], d.one))
    rhs = d.sum(T.M_abs[sa, a] for a in T.decomposition(s))
    return d.leq(lhs, rhs)


def check_all_dev(T: LinearAbstractionTriple) -> bool:
    return all(check_lemma_dev(T, a, s) for a in range(T.M_abs.n_rows) for s in range(T.M.n_rows))


def check_lemma_iterate(T: LinearAbstractionTriple, kmax: int) -> bool:
    """Correctness of (M^k, M#^k, alpha1) for k = 1..kmax."""
    if kmax < 1:
        raise ValueError("kmax must be positive")
    for Mk, Nk in zip(mat_powers(T.M, kmax), mat_powers(T.M_abs, kmax)):
        if first_violation(mat_mul(T.alpha1, Mk), mat_mul(Nk, T.alpha1)) is not None:
            return False
    return True


def _require_selective(d: CostDioid):
    if not d.selective:
        raise NotSelectiveError(f"{d.name} is not selective")


def check_lemma_path(T: LinearAbstractionTriple, kmax: int) -> bool:
    """Every closed concrete walk is dominated by an abstract walk of equal length.

    For each s, k with (M^k)_ss != bot and each abstract atom i of s, some
    abstract atom j of s has (M#^k)_ij >= (M^k)_ss.
    """
    d = T.dioid
    _require_selective(d)
    for Mk, Nk in zip(mat_powers(T.M, kmax), mat_powers(T.M_abs, kmax)):
        for s in range(T.M.n_rows):
            c = Mk[s, s]
            if d.eq(c, d.zero):
                continue
            dec = T.decomposition(s)
            for i in dec:
                if not any(d.leq(c, Nk[i, j]) for j in dec):
                    return False
    return True


def check_lemma_cycle(T: LinearAbstractionTriple, kmax: int) -> bool:
    """Every closed concrete walk has an abstract closed walk with no smaller mean.

    Searches j among the abstract atoms of s and r up to their count.
    """
    d = T.dioid
    _require_selective(d)
    n = T.M.n_rows
    s_max = max((len(T.decomposition(s)) for s in range(n)), default=0)
    if s_max == 0:
        return True
    abs_powers = mat_powers(T.M_abs, kmax * s_max)
    for k, Mk in enumerate(mat_powers(T.M, kmax), start=1):
        for s in range(n):
            c = Mk[s, s]
            if d.eq(c, d.zero):
                continue
            mean = d.root(c, k)
            dec = T.decomposition(s)
            found = any(
                d.leq(mean, d.root(abs_powers[k * r - 1][j, j], k * r))
                for r in range(1, len(dec) + 1)
                for j in dec
            )
            if not found:
                return False
    return True


# theorems ---------------------------------------------------------------------


def _gc(M: CostMatrix, init, final):
    d = M.dioid
    closure = kleene_plus(M)
    return d.sum(closure[i, f] for i in init for f in final)


@dataclass
class TheoremReport:
    gc: object
    gc_abs: object
    gc_ok: bool
    rho: object = None
    rho_abs: object = None
    rho_ok: bool | None = None
    explored: bool = False

    @property
    def ok(self) -> bool:
        """Explored results are recorded, never failed."""
        return self.gc_ok and (self.explored or self.rho_ok is not False)

    def __bool__(self):
        return self.ok


def check_theorems(T: LinearAbstractionTriple, *, explore: bool = False) -> TheoremReport:
    """gc(M) <= gc(M#) and, for selective dioids, rho(M) <= rho(M#).

    With ``explore`` the long-run inequality is also evaluated on
    non-selective dioids, but only recorded.
    """
    d = T.dioid
    gc, gc_abs = _gc(T.M, T.init, T.final), _gc(T.M_abs, T.init_abs, T.final_abs)
    rep = TheoremReport(gc, gc_abs, d.leq(gc, gc_abs))
    if d.selective or explore:
        rep.rho = matrix_long_run_cost(T.M)
        rep.rho_abs = matrix_long_run_cost(T.M_abs)
        rep.rho_ok = d.leq(rep.rho, rep.rho_abs)
        rep.explored = not d.selective
    return rep


# random instances -------------------------------------------------------------


def random_alpha1(dioid: CostDioid, k: int, n: int, rng: random.Random, p: float = 0.4) -> CostMatrix:
    """{bot, e} matrix with at least one e per column."""
    cols = []
    for _ in range(n):
        col = [rng.random() < p for _ in range(k)]
        if not any(col):
            col[rng.randrange(k)] = True
        cols.append([dioid.one if b else dioid.zero for b in col])
    return CostMatrix(dioid, [list(r) for r in zip(*cols)], coerce=False)


def random_correct_triple(
    dioid: CostDioid,
    n: int,
    k: int,
    rng: random.Random,
    density: float = 0.5,
    noise: float = 0.0,
) -> LinearAbstractionTriple:
    """M# = alpha1 . M . alpha1^T, optionally raised by random entries.

    Columns of alpha1 are nonempty, so alpha1^T . alpha1 >= Id and the
    triple is correct by construction.
    """
    sample = cost_sampler(dioid)
    M = random_matrix(dioid, n, n, density, rng, sample)
    A1 = random_alpha1(dioid, k, n, rng)
    M_abs = mat_mul(mat_mul(A1, M), transpose(A1))
    if noise > 0:
        M_abs = mat_add(M_abs, random_matrix(dioid, k, k, noise, rng, sample))
    init = _nonempty(rng, n)
    final = _nonempty(rng, n)
    T = LinearAbstractionTriple(M, M_abs, A1, init, final)
    return LinearAbstractionTriple(M, M_abs, A1, init, final, T.image(init), T.image(final))


def _nonempty(rng: random.Random, n: int) -> frozenset[int]:
    chosen = [i for i in range(n) if rng.random() < 0.5]
    return frozenset(chosen or [rng.randrange(n)])


def lower_one_entry(T: LinearAbstractionTriple) -> LinearAbstractionTriple | None:
    """Copy of T with one M# entry set to bot so that correctness breaks.

    Returns None when no single entry does it.
    """
    d = T.dioid
    rows = [list(r) for r in T.M_abs.rows]
    for a in range(len(rows)):
        for b in range(len(rows)):
            if d.eq(rows[a][b], d.zero):
                continue
            saved, rows[a][b] = rows[a][b], d.zero
            broken = T.with_abstract(CostMatrix(d, rows, coerce=False))
            if first_violation(mat_mul(T.alpha1, T.M), mat_mul(broken.M_abs, T.alpha1)) is not None:
                return broken
            rows[a][b] = saved
    return None


@dataclass
class LemmaOutcome:
    """Per-check verdicts on one triple; None marks a check that did not apply."""

    results: dict[str, bool | None] = field(default_factory=dict)
    explored_rho: bool | None = None

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.results.values())


def run_all_checks(T: LinearAbstractionTriple, kmax: int = 4, *, explore: bool = False) -> LemmaOutcome:
    out = LemmaOutcome()
    out.results["correct"] = check_correct_linear(T).ok
    out.results["lemma_dev"] = check_all_dev(T)
    out.results["lemma_iterate"] = check_lemma_iterate(T, kmax)
    selective = T.dioid.selective
    out.results["lemma_path"] = check_lemma_path(T, kmax) if selective else None
    out.results["lemma_cycle"] = check_lemma_cycle(T, kmax) if selective else None
    rep = check_theorems(T, explore=explore)
    out.results["theorem_gc"] = rep.gc_ok
    out.results["theorem_rho"] = None if rep.explored else rep.rho_ok
    if rep.explored:
        out.explored_rho = rep.rho_ok
    return out


def triple_sizes(rng: random.Random, n_range: Sequence[int] = (2, 5)) -> tuple[int, int]:
    n = rng.randint(*n_range)
    return n, rng.randint(1, n)
