import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropicost.dioid import INF, NEG_INF, make_dioid
from tropicost.moduloid import CostMatrix, mat_add
from tropicost.oracle import RandomSystemSpec, random_system
from tropicost.semantics import (
    ParseError,
    ParseWarning,
    TransitionSystem,
    bounded_trace_costs,
    global_cost,
    load_system,
    parse_system,
    reachable_restrict,
    reachable_states,
    serialize_system,
)
from helpers import ALL_KINDS, DATA

CHAIN = "dioid maxplus\nstates a b\ninit a\nfinal b\nedge a b 8\n"


def lrc(kind="maxplus"):
    text = (DATA / "lrc.tsys").read_text().replace("dioid maxplus", f"dioid {kind}")
    return parse_system(text)


def test_parse_chain():
    P = parse_system(CHAIN)
    assert P.states == ("a", "b")
    assert P.cost("a", "b") == 8 and P.cost("b", "a") == NEG_INF
    assert P.init == {"a"} and P.final == {"b"}


def test_parse_example():
    P = load_system(DATA / "lrc.tsys")
    assert len(P) == 4
    assert list(P.edges()) == [("a", "b", 8), ("b", "c", 3), ("c", "c", 2), ("c", "d", 4), ("d", "b", 5)]


@pytest.mark.filterwarnings("ignore::tropicost.semantics.ParseWarning")
@pytest.mark.parametrize(
    "text,fragment,line",
    [
        ("dioid maxplus\nstates a\nedge a z 1\n", "unknown state", 3),
        ("dioid maxplus\nstates a b\nedge a b 1\nedge a b 2\n", "duplicate edge", 4),
        ("dioid maxtimes\nstates a b\nedge a b -1\n", "outside carrier", 3),
        ("dioid maxplus\nstates a b\nedge a b 1/0x\n", "outside carrier", 3),
        ("dioid maxplus\nstates a a\n", "duplicate state", 2),
        ("dioid nope\nstates a\n", "unknown dioid", 1),
        ("states a\n", "missing 'dioid'", None),
        ("dioid maxplus\nstates a\nfoo a\n", "unknown directive", 3),
        ("dioid cup-cap\nstates a\n", "universe", 1),
        ("dioid maxplus\nstates a b\nedge a b\n", "expected 'edge", 3),
        ("dioid maxplus\ninit a\nstates a\n", "unknown state", 2),
    ],
)
def test_parse_errors(text, fragment, line):
    with pytest.raises(ParseError) as exc:
        parse_system(text)
    assert fragment in str(exc.value)
    assert exc.value.line == line


def test_error_column_points_at_token():
    with pytest.raises(ParseError) as exc:
        parse_system("dioid maxplus\nstates a\nedge a zz 1\n")
    assert exc.value.column == 8


def test_merge_edges_flag():
    P = parse_system("dioid maxplus\nstates a b\ninit a\nfinal b\nedge a b 1\nedge a b 2\n", merge_edges=True)
    assert P.cost("a", "b") == 2


def test_missing_init_final_warns():
    with pytest.warns(ParseWarning):
        P = parse_system("dioid minplus\nstates a b c\nedge a b 1\n")
    assert P.init == {"a"} and P.final == {"c"}


def test_set_and_vector_systems_parse():
    P = parse_system("dioid cup-cap\nuniverse x y\nstates a b\ninit a\nfinal b\nedge a b {x}\n")
    assert P.cost("a", "b") == frozenset({"x"})
    Q = parse_system("dioid minplus_vec 2\nstates a b\ninit a\nfinal b\nedge a b (1,2)\n")
    assert Q.cost("a", "b") == (1, 2)


def test_system_validation():
    d = make_dioid("maxplus")
    with pytest.raises(ValueError):
        TransitionSystem(("a", "a"), CostMatrix.zeros(d, 2), {"a"}, {"a"})
    with pytest.raises(ValueError):
        TransitionSystem(("a",), CostMatrix.zeros(d, 2), {"a"}, {"a"})
    with pytest.raises(ValueError):
        TransitionSystem(("a",), CostMatrix.zeros(d, 1), {"q"}, {"a"})


def test_reachable_restrict():
    P = lrc()
    assert reachable_restrict(P) is P
    Q = parse_system(CHAIN.replace("states a b", "states a b u") + "edge u a 1\n")
    R = reachable_restrict(Q)
    assert R.states == ("a", "b")
    everything = parse_system(CHAIN.replace("init a", "init a b"))
    assert reachable_restrict(everything).states == ("a", "b")
    assert reachable_states(P) == ["a", "b", "c", "d"]


def test_global_cost_examples():
    assert global_cost(parse_system(CHAIN)) == 8
    assert global_cost(lrc("minplus")) == 15
    assert global_cost(lrc("maxplus")) == INF
    no_path = parse_system("dioid maxplus\nstates a b\ninit a\nfinal b\nedge b a 1\n")
    assert global_cost(no_path) == NEG_INF


def test_bounded_traces():
    P = parse_system(CHAIN)
    assert all(bounded_trace_costs(P, L) == 8 for L in (1, 2, 5))
    assert bounded_trace_costs(lrc("minplus"), 4) == 15
    assert [bounded_trace_costs(lrc(), L) for L in (3, 4, 5)] == [15, 17, 19]
    with pytest.raises(ValueError):
        bounded_trace_costs(P, 0)


def test_round_trip_example_files():
    for path in DATA.glob("*.tsys"):
        P = load_system(path)
        text = serialize_system(P)
        assert serialize_system(parse_system(text)) == text
        assert parse_system(text) == P


def _acyclic(P):
    d = P.dioid
    n = len(P)
    rows = [[not d.eq(P.matrix[i, j], d.zero) if i < j else False for j in range(n)] for i in range(n)]
    return P.with_matrix(CostMatrix(d, [[P.matrix[i, j] if rows[i][j] else d.zero for j in range(n)] for i in range(n)]))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_trace_semantics_properties(kind):
    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**9), st.integers(1, 5))
    def prop(seed, n):
        P = random_system(RandomSystemSpec(n=n, kind=kind, seed=seed))
        d = P.dioid
        gc = global_cost(P)
        for L in (1, 2, 3):
            assert d.leq(bounded_trace_costs(P, L), gc)
        A = _acyclic(P)
        assert d.eq(global_cost(A), bounded_trace_costs(A, n))
        bigger = P.with_matrix(mat_add(P.matrix, random_system(RandomSystemSpec(n=n, kind=kind, seed=seed + 1)).matrix))
        assert d.leq(gc, global_cost(bigger))
        assert parse_system(serialize_system(P)) == P

    prop()
