import itertools
import random
from fractions import Fraction

import pytest

from tropicost.dioid import NEG_INF, CupCap, MaxPlus
from tropicost.galois import boolean_vectors, even_interval_lift
from tropicost.moduloid import CostVector, vec_leq
from tropicost.oracle import (
    RandomSystemSpec,
    closure_by_walks,
    cost_sampler,
    enumerate_paths,
    greatest_subsolution,
    random_partition,
    random_system,
)
from tropicost.semantics import load_system, parse_system
from helpers import ALL_KINDS, DATA


def test_random_system_is_deterministic():
    spec = RandomSystemSpec(n=5, kind="minplus", seed=42)
    assert random_system(spec) == random_system(spec)
    assert random_system(spec) != random_system(RandomSystemSpec(n=5, kind="minplus", seed=43))


def test_density_extremes():
    empty = random_system(RandomSystemSpec(n=4, density=0.0, seed=1))
    assert list(empty.edges()) == []
    full = random_system(RandomSystemSpec(n=3, density=1.0, seed=1))
    assert len(list(full.edges())) == 9
    assert full.init and full.final


def test_spec_validation():
    with pytest.raises(ValueError):
        RandomSystemSpec(n=0)
    with pytest.raises(ValueError):
        RandomSystemSpec(n=2, density=1.5)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_sampler_stays_in_carrier(kind):
    d = RandomSystemSpec(n=1, kind=kind).dioid()
    draw = cost_sampler(d)
    rng = random.Random(0)
    for _ in range(200):
        x = draw(rng)
        assert d.contains(x) and not d.eq(x, d.zero)


def test_random_partition_is_total():
    rng = random.Random(0)
    states = ("a", "b", "c")
    for _ in range(20):
        p = random_partition(states, rng)
        assert set(p) == set(states)
    assert set(random_partition(states, rng, blocks=1).values()) == {"A0"}


def test_enumerate_paths_examples():
    chain = load_system(DATA / "chain.tsys")
    assert enumerate_paths(chain, "s", "t", 3) == [(("s", "t"), 8)]
    lrc = load_system(DATA / "lrc.tsys")
    found = sorted(enumerate_paths(lrc, "a", "d", 4))
    assert found == [(("a", "b", "c", "c", "d"), 17), (("a", "b", "c", "d"), 15)]
    assert enumerate_paths(lrc, "a", "a", 4) == []
    with pytest.raises(ValueError):
        enumerate_paths(lrc, "a", "d", 0)


def test_closure_oracle_certifies_top():
    P = parse_system("dioid maxplus\nstates a b\ninit a\nfinal b\nedge a a 1\nedge a b 0\n")
    W = closure_by_walks(P.matrix)
    assert W[0][1] == float("inf") and W[1][0] == NEG_INF


def test_greatest_subsolution_examples():
    d = MaxPlus()
    vecs = list(boolean_vectors(d, 2))
    ident = {v: v for v in vecs}
    join = lambda a, b: a | b
    bottom = CostVector.zeros(d, 2)
    for b in vecs:
        assert greatest_subsolution(ident, b, vec_leq, join, bottom) == b
    const = {v: bottom for v in vecs}
    assert greatest_subsolution(const, bottom, vec_leq, join, bottom) == CostVector(d, [0, 0])

    G = even_interval_lift(2)
    table = {v: G.apply_alpha1(v) for v in boolean_vectors(d, 5)}
    target = G.encode(next(x for x in G.abstract if str(x) == "[-2,0]"))
    got = greatest_subsolution(table, target, vec_leq, join, CostVector.zeros(d, 5))
    assert got == CostVector(d, [0, 0, 0, NEG_INF, NEG_INF])


def test_greatest_subsolution_on_set_residual():
    d = CupCap([1, 2, 3])
    subsets = [frozenset(c) for r in range(4) for c in itertools.combinations([1, 2, 3], r)]
    a = frozenset({1, 2})
    table = {x: d.mul(a, x) for x in subsets}
    assert greatest_subsolution(table, frozenset({1}), d.leq, d.add, d.zero) == frozenset({1, 3})
