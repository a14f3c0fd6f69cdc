"""Transition systems P = <states, M, I, F>, their text format, and global cost.

File format (line oriented, ``#`` starts a comment)::

    dioid maxplus
    states a b c d
    init a
    final d
    edge a b 8
    edge c c 2

Set carriers declare ``universe x y z`` before any edge; the vector carrier
is declared as ``dioid minplus_vec 3``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .dioid import CarrierError, CostDioid, CupCap, CapCup, MinPlusVec, make_dioid
from .moduloid import CostMatrix, kleene_plus


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ParseWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TransitionSystem:
    states: tuple[str, ...]
    matrix: CostMatrix
    init: frozenset[str]
    final: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "init", frozenset(self.init))
        object.__setattr__(self, "final", frozenset(self.final))
        if len(set(self.states)) != len(self.states):
            raise ValueError("state names must be unique")
        n = len(self.states)
        if self.matrix.shape != (n, n):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match {n} states")
        unknown = (self.init | self.final) - set(self.states)
        if unknown:
            raise ValueError(f"unknown state(s) {sorted(unknown)}")

    @property
    def dioid(self) -> CostDioid:
        return self.matrix.dioid

    @property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def cost(self, src: str, dst: str):
        idx = self.index
        return self.matrix[idx[src], idx[dst]]

    def edges(self) -> Iterator[tuple[str, str, object]]:
        """Non-bottom transitions in row-major order."""
        d = self.dioid
        for i, row in enumerate(self.matrix.rows):
            for j, q in enumerate(row):
                if not d.eq(q, d.zero):
                    yield self.states[i], self.states[j], q

    def with_matrix(self, matrix: CostMatrix) -> "TransitionSystem":
        return TransitionSystem(self.states, matrix, self.init, self.final)

    @classmethod
    def from_edges(
        cls,
        dioid: CostDioid,
        states: Iterable[str],
        edges: Mapping[tuple[str, str], object] | Iterable[tuple[str, str, object]],
        init: Iterable[str],
        final: Iterable[str],
    ) -> "TransitionSystem":
        states = tuple(states)
        idx = {s: i for i, s in enumerate(states)}
        grid = [[dioid.zero] * len(states) for _ in states]
        items = edges.items() if isinstance(edges, Mapping) else ((e[:2], e[2]) for e in edges)
        for (src, dst), q in items:
            grid[idx[src]][idx[dst]] = dioid.coerce(q)
        return cls(states, CostMatrix(dioid, grid, coerce=False), init, final)


# parsing --------------------------------------------------------------------


def _dioid_header(dioid: CostDioid) -> list[str]:
    if isinstance(dioid, MinPlusVec):
        return [f"dioid minplus_vec {dioid.m}"]
    out = [f"dioid {dioid.kind}"]
    if isinstance(dioid, (CupCap, CapCup)):
        out.append("universe " + " ".join(map(str, dioid.universe_order)))
    return out


def parse_system(text: str, *, merge_edges: bool = False) -> TransitionSystem:
    """Parse the text format into a validated TransitionSystem.

    Duplicate edges are rejected unless ``merge_edges`` is set, in which case
    their costs are combined with oplus.  Missing ``init``/``final`` default to
    the first/last declared state with a :class:`ParseWarning`.
    """
    kind = None
    kind_arg = None
    kind_pos = (None, None)
    universe = None
    states: list[str] = []
    init: list[str] = []
    final: list[str] = []
    raw_edges: list[tuple[int, int, str, str, str]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        head = line.split(None, 1)
        word = head[0]
        col_rest = len(line) - len(head[1]) + 1 if len(head) > 1 else len(line) + 1
        args = head[1].split() if len(head) > 1 else []
        if word == "dioid":
            if kind is not None:
                raise ParseError("dioid declared twice", lineno, 1)
            if not args or len(args) > 2:
                raise ParseError("expected 'dioid KIND [ARG]'", lineno, col_rest)
            kind = args[0]
            kind_arg = args[1] if len(args) == 2 else None
            kind_pos = (lineno, col_rest)
        elif word == "universe":
            if not args:
                raise ParseError("empty universe", lineno, col_rest)
            if len(set(args)) != len(args):
                raise ParseError("duplicate universe element", lineno, col_rest)
            universe = args
        elif word == "states":
            for name in args:
                if name in states:
                    raise ParseError(f"duplicate state {name!r}", lineno, _col(line, name))
                states.append(name)
        elif word in ("init", "final"):
            target = init if word == "init" else final
            for name in args:
                if name not in states:
                    raise ParseError(f"unknown state {name!r}", lineno, _col(line, name))
                if name not in target:
                    target.append(name)
        elif word == "edge":
            parts = head[1].split(None, 2) if len(head) > 1 else []
            if len(parts) != 3:
                raise ParseError("expected 'edge SRC DST COST'", lineno, col_rest)
            src, dst, cost = parts
            for name in (src, dst):
                if name not in states:
                    raise ParseError(f"unknown state {name!r}", lineno, _col(line, name))
            raw_edges.append((lineno, _col(line, cost, start=col_rest), src, dst, cost))
        else:
            raise ParseError(f"unknown directive {word!r}", lineno, 1)

    if kind is None:
        raise ParseError("missing 'dioid' declaration")
    try:
        m = None
        if kind_arg is not None:
            m = int(kind_arg)
        dioid = make_dioid(kind, universe=universe, m=m)
    except ValueError as exc:
        raise ParseError(str(exc), *kind_pos) from None
    if not states:
        raise ParseError("no states declared")
    if not init:
        warnings.warn(f"no init states; defaulting to {states[0]!r}", ParseWarning, stacklevel=2)
        init = [states[0]]
    if not final:
        warnings.warn(f"no final states; defaulting to {states[-1]!r}", ParseWarning, stacklevel=2)
        final = [states[-1]]

    idx = {s: i for i, s in enumerate(states)}
    grid = [[dioid.zero] * len(states) for _ in states]
    seen: set[tuple[str, str]] = set()
    for lineno, col, src, dst, cost in raw_edges:
        try:
            q = dioid.parse_literal(cost)
        except (CarrierError, ValueError) as exc:
            raise ParseError(f"cost literal outside carrier: {exc}", lineno, col) from None
        i, j = idx[src], idx[dst]
        if (src, dst) in seen:
            if not merge_edges:
                raise ParseError(f"duplicate edge {src} -> {dst}", lineno, 1)
            q = dioid.add(grid[i][j], q)
        seen.add((src, dst))
        grid[i][j] = q
    return TransitionSystem(tuple(states), CostMatrix(dioid, grid, coerce=False), init, final)


def _col(line: str, token: str, start: int = 1) -> int:
    pos = line.find(token, start - 1)
    return pos + 1 if pos >= 0 else start


def load_system(path, *, merge_edges: bool = False) -> TransitionSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read(), merge_edges=merge_edges)


def serialize_system(P: TransitionSystem) -> str:
    """Canonical text form; ``parse_system`` inverts it."""
    lines = _dioid_header(P.dioid)
    lines.append("states " + " ".join(P.states))
    lines.append("init " + " ".join(s for s in P.states if s in P.init))
    if P.final:
        lines.append("final " + " ".join(s for s in P.states if s in P.final))
    for src, dst, q in P.edges():
        lines.append(f"edge {src} {dst} {P.dioid.format(q)}")
    return "\n".join(lines) + "\n"


# analyses -------------------------------------------------------------------


def reachable_states(P: TransitionSystem) -> list[str]:
    d = P.dioid
    rows = P.matrix.rows
    idx = P.index
    seen = {idx[s] for s in P.init}
    stack = list(seen)
    while stack:
        i = stack.pop()
        for j, q in enumerate(rows[i]):
            if j not in seen and not d.eq(q, d.zero):
                seen.add(j)
                stack.append(j)
    return [s for k, s in enumerate(P.states) if k in seen]


def reachable_restrict(P: TransitionSystem) -> TransitionSystem:
    """Subsystem on the states reachable from I (I itself included)."""
    keep = reachable_states(P)
    if len(keep) == len(P.states):
        return P
    idx = P.index
    sub = P.matrix.submatrix([idx[s] for s in keep])
    kept = set(keep)
    return TransitionSystem(tuple(keep), sub, P.init & kept, P.final & kept)


def global_cost(P: TransitionSystem):
    """(+) of the closure entries M+_{i,f} for i in I and f in F."""
    closure = kleene_plus(P.matrix)
    idx = P.index
    d = P.dioid
    return d.sum(closure[idx[i], idx[f]] for i in P.init for f in P.final)


def bounded_trace_costs(P: TransitionSystem, L: int, *, budget: int | None = None):
    """(+) of the costs of traces from I to F with 1..L transitions."""
    if not isinstance(L, int) or L < 1:
        raise ValueError(f"horizon must be a positive integer, got {L!r}")
    from .oracle import enumerate_paths

    d = P.dioid
    total = d.zero
    for i in P.init:
        for f in P.final:
            for _, q in enumerate_paths(P, i, f, L, budget=budget):
                total = d.add(total, q)
    return total
