"""Partition-based abstraction: a state map lifted to a {bot, e} matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .dioid import CostDioid
from .moduloid import CostMatrix, first_violation, mat_leq, mat_mul, transpose
from .semantics import ParseError, TransitionSystem


@dataclass(frozen=True)
class PartitionLift:
    """Linear lift of ``alpha``; ``gamma`` is its transpose (the residual)."""

    concrete: tuple[str, ...]
    abstract: tuple[str, ...]
    alpha: Mapping[str, str]
    alpha_matrix: CostMatrix

    @property
    def gamma_matrix(self) -> CostMatrix:
        return transpose(self.alpha_matrix)

    @property
    def dioid(self) -> CostDioid:
        return self.alpha_matrix.dioid

    def image(self, states) -> frozenset[str]:
        return frozenset(self.alpha[s] for s in states)


def lift_partition(concrete: Sequence[str], abstract: Sequence[str], alpha: Mapping[str, str], dioid: CostDioid) -> PartitionLift:
    concrete, abstract = tuple(concrete), tuple(abstract)
    missing = [s for s in concrete if s not in alpha]
    if missing:
        raise ValueError(f"abstraction map is partial: no image for {missing}")
    unknown = sorted({alpha[s] for s in concrete} - set(abstract))
    if unknown:
        raise ValueError(f"unknown abstract state(s) {unknown}")
    z, e = dioid.zero, dioid.one
    rows = [[e if alpha[s] == a else z for s in concrete] for a in abstract]
    return PartitionLift(concrete, abstract, dict(alpha), CostMatrix(dioid, rows, coerce=False))


def lift_for_system(P: TransitionSystem, alpha: Mapping[str, str]) -> PartitionLift:
    """Lift with abstract states listed in order of first appearance."""
    abstract = tuple(dict.fromkeys(alpha[s] for s in P.states if s in alpha))
    return lift_partition(P.states, abstract, alpha, P.dioid)


def check_galois(L: PartitionLift) -> bool:
    """alpha . gamma <= Id on abstract states and Id <= gamma . alpha on concrete ones."""
    A, G = L.alpha_matrix, L.gamma_matrix
    d = A.dioid
    return mat_leq(mat_mul(A, G), CostMatrix.identity(d, A.n_rows)) and mat_leq(
        CostMatrix.identity(d, A.n_cols), mat_mul(G, A)
    )


def best_abstract_system(P: TransitionSystem, L: PartitionLift) -> TransitionSystem:
    """M# = alpha . M . gamma with I# = alpha(I) and F# = alpha(F)."""
    if tuple(P.states) != L.concrete:
        raise ValueError("lift and system disagree on the concrete states")
    M = mat_mul(mat_mul(L.alpha_matrix, P.matrix), L.gamma_matrix)
    return TransitionSystem(L.abstract, M, L.image(P.init), L.image(P.final))


def find_abstraction_violation(P: TransitionSystem, Pa: TransitionSystem, L: PartitionLift) -> str | None:
    """Describe the first failed correctness condition, or None."""
    lhs = mat_mul(L.alpha_matrix, P.matrix)
    rhs = mat_mul(Pa.matrix, L.alpha_matrix)
    bad = first_violation(lhs, rhs)
    if bad is not None:
        a, s = bad
        d = P.dioid
        return (
            f"condition (alpha.M <= M#.alpha) fails at ({L.abstract[a]}, {L.concrete[s]}): "
            f"{d.format(lhs[a, s])} > {d.format(rhs[a, s])}"
        )
    if not L.image(P.init) <= Pa.init:
        return f"alpha(I) = {sorted(L.image(P.init))} is not within I# = {sorted(Pa.init)}"
    if not L.image(P.final) <= Pa.final:
        return f"alpha(F) = {sorted(L.image(P.final))} is not within F# = {sorted(Pa.final)}"
    return None


def check_correct_abstraction(P: TransitionSystem, Pa: TransitionSystem, L: PartitionLift) -> bool:
    return find_abstraction_violation(P, Pa, L) is None


def parse_partition(text: str) -> dict[str, str]:
    """Read ``map concrete -> abstract`` lines."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "map" or parts[2] != "->":
            raise ParseError("expected 'map CONCRETE -> ABSTRACT'", lineno, 1)
        if parts[1] in mapping:
            raise ParseError(f"state {parts[1]!r} mapped twice", lineno, 5)
        mapping[parts[1]] = parts[3]
    return mapping
