"""Shared samplers and strategies for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

from tropicost.dioid import INF, NEG_INF, make_dioid

DATA = Path(__file__).resolve().parent.parent / "data"

ALL_KINDS = ("maxplus", "minplus", "maxtimes", "minmax", "maxmin", "minplus_vec", "cup-cap", "cap-cup")
UNIVERSE = ("x", "y", "z")


def dioid_for(kind: str):
    return make_dioid(kind, universe=UNIVERSE, m=2)


def sampler(dioid, rng: random.Random | None = None, special: float = 0.1):
    """Plain-random value sampler, bottom and top included now and then."""
    rng = rng or random.Random(0)
    kind = dioid.kind

    def rational(lo=-10, hi=10):
        return Fraction(rng.randint(lo, hi), rng.randint(1, 4))

    def draw():
        if rng.random() < special:
            return rng.choice([dioid.zero, dioid.one, dioid.top])
        if kind in ("maxplus", "minplus", "minmax", "maxmin"):
            return rational()
        if kind == "maxtimes":
            return rational(0, 10)
        if kind == "minplus_vec":
            return tuple(rational(0, 10) for _ in range(dioid.m))
        return frozenset(u for u in dioid.universe_order if rng.random() < 0.5)

    return draw


def values(dioid):
    """Hypothesis strategy over the carrier of ``dioid``."""
    rat = st.fractions(min_value=-20, max_value=20, max_denominator=6)
    special = st.sampled_from([dioid.zero, dioid.one, dioid.top])
    kind = dioid.kind
    if kind in ("maxplus", "minplus", "minmax", "maxmin"):
        core = rat | st.sampled_from([INF, NEG_INF])
    elif kind == "maxtimes":
        core = st.fractions(min_value=0, max_value=20, max_denominator=6)
    elif kind == "minplus_vec":
        comp = st.fractions(min_value=0, max_value=20, max_denominator=6)
        core = st.tuples(*([comp] * dioid.m))
    else:
        core = st.frozensets(st.sampled_from(dioid.universe_order))
    return core | special
