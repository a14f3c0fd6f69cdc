"""Randomized verification runs shared by the CLI and the test suite.

Each trial draws from its own ``random.Random(f"{seed}-{trial}")``, so a
trial can be replayed alone and trials are independent of each other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .dioid import make_dioid
from .longrun import long_run_cost
from .moduloid import kleene_plus
from .oracle import RandomSystemSpec, closure_by_walks, cycle_means_oracle, random_partition, random_system
from .partition import best_abstract_system, find_abstraction_violation, lift_for_system
from .semantics import TransitionSystem, global_cost, serialize_system
from .linear import random_correct_triple, run_all_checks

MAX_COUNTEREXAMPLES = 3


@dataclass
class CheckTally:
    passed: int = 0
    failed: int = 0
    skipped: int = 0

    def add(self, verdict: bool | None):
        if verdict is None:
            self.skipped += 1
        elif verdict:
            self.passed += 1
        else:
            self.failed += 1


@dataclass
class VerifyResult:
    dioid: str
    trials: int
    seed: int | str
    checks: dict[str, CheckTally] = field(default_factory=dict)
    explored: dict[str, CheckTally] = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.checks.values())

    def record(self, name: str, verdict: bool | None, system: TransitionSystem | None = None, trial: int | None = None):
        self.checks.setdefault(name, CheckTally()).add(verdict)
        if verdict is False and system is not None and len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append({"check": name, "trial": trial, "system": serialize_system(system)})

    def explore(self, name: str, verdict: bool | None):
        self.explored.setdefault(name, CheckTally()).add(verdict)

    def as_dict(self) -> dict:
        tally = lambda d: {k: vars(v) for k, v in sorted(d.items())}
        return {
            "dioid": self.dioid,
            "trials": self.trials,
            "seed": self.seed,
            "checks": tally(self.checks),
            "explored": tally(self.explored),
            "counterexamples": self.counterexamples,
        }


def _closure_agrees(P: TransitionSystem) -> bool:
    d = P.dioid
    K = kleene_plus(P.matrix)
    W = closure_by_walks(P.matrix)
    n = len(P)
    return all(d.eq(K[i, j], W[i][j]) for i in range(n) for j in range(n))


def partition_trial(P: TransitionSystem, rng: random.Random, result: VerifyResult, trial: int):
    """Best abstraction under a random partition, then both cost theorems."""
    d = P.dioid
    L = lift_for_system(P, random_partition(P.states, rng))
    Pa = best_abstract_system(P, L)
    result.record("abstraction_correct", find_abstraction_violation(P, Pa, L) is None, P, trial)
    result.record("gc_over_approximated", d.leq(global_cost(P), global_cost(Pa)), P, trial)
    rho_ok = d.leq(long_run_cost(P), long_run_cost(Pa))
    if d.selective:
        result.record("rho_over_approximated", rho_ok, P, trial)
    else:
        result.explore("rho_over_approximated", rho_ok)


def run_verification(
    kind: str,
    states: int | tuple[int, int],
    trials: int,
    seed: int | str = 0,
    *,
    lemmas: bool = False,
    oracles: bool = True,
    universe: tuple[str, ...] = ("x", "y", "z"),
    density: float = 0.5,
    kmax: int = 4,
) -> VerifyResult:
    """Run ``trials`` independent random trials over one dioid.

    ``states`` is a fixed count or an inclusive range drawn per trial.
    """
    lo, hi = (states, states) if isinstance(states, int) else states
    if lo < 1 or hi < lo:
        raise ValueError("state count must be positive")
    dioid = make_dioid(kind, universe=universe, m=2)
    result = VerifyResult(dioid.name, trials, seed)
    for t in range(trials):
        tseed = f"{seed}-{t}"
        rng = random.Random(tseed)
        n = rng.randint(lo, hi)
        P = random_system(RandomSystemSpec(n=n, density=density, kind=kind, seed=tseed, universe=tuple(universe)))
        partition_trial(P, rng, result, t)
        if oracles:
            result.record("longrun_matches_oracle", dioid.eq(long_run_cost(P), cycle_means_oracle(P)), P, t)
            result.record("closure_matches_walks", _closure_agrees(P), P, t)
        if lemmas:
            T = random_correct_triple(dioid, n, rng.randint(1, n), rng, density=density, noise=0.2)
            outcome = run_all_checks(T, kmax, explore=not dioid.selective)
            for name, verdict in outcome.results.items():
                result.record(f"linear_{name}", verdict)
            if outcome.explored_rho is not None:
                result.explore("linear_theorem_rho", outcome.explored_rho)
    return result
