"""Lifting Galois connections between finite lattices into moduloid maps.

A concrete boolean lattice B is coded on its atoms.  An abstract lattice A is
coded on its join-irreducible elements: each element becomes the set of
join-irreducibles below it, a vector in the powerset moduloid B(A).  The
abstraction then splits into a linear part ``alpha1`` (a {bot, e} matrix), a
projection ``pi`` back onto codes of A, and the residual ``gamma1`` of the
linear part.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .dioid import CostDioid, MaxPlus
from .moduloid import CostMatrix, CostVector, mat_residual, mat_vec, vec_leq
from .semantics import ParseError

EXHAUSTIVE_ATOM_LIMIT = 12


class LatticeError(ValueError):
    pass


class FiniteLattice:
    """A finite lattice given by its elements and a partial order.

    Joins and meets are tabulated at construction, so this is meant for
    lattices of at most a few hundred elements.
    """

    def __init__(self, elements: Iterable[Hashable], leq: Callable[[Hashable, Hashable], bool]):
        elems = tuple(elements)
        if len(set(elems)) != len(elems):
            raise LatticeError("duplicate lattice elements")
        if not elems:
            raise LatticeError("empty lattice")
        n = len(elems)
        le = [[bool(leq(x, y)) for y in elems] for x in elems]
        for i in range(n):
            if not le[i][i]:
                raise LatticeError(f"order is not reflexive at {elems[i]!r}")
            for j in range(n):
                if i != j and le[i][j] and le[j][i]:
                    raise LatticeError(f"order is not antisymmetric: {elems[i]!r}, {elems[j]!r}")
        self.elements = elems
        self._pos = {x: i for i, x in enumerate(elems)}
        self._le = le
        self._join = [[self._bound(i, j, upper=True) for j in range(n)] for i in range(n)]
        self._meet = [[self._bound(i, j, upper=False) for j in range(n)] for i in range(n)]
        self.bottom = elems[self._extreme(upper=False)]
        self.top = elems[self._extreme(upper=True)]
        self.join_irreducibles = tuple(x for x in elems if self._is_join_irreducible(x))
        ji_pos = [self._pos[j] for j in self.join_irreducibles]
        self._code = {
            x: frozenset(k for k, p in enumerate(ji_pos) if le[p][self._pos[x]]) for x in elems
        }

    def _bound(self, i, j, upper):
        le = self._le
        n = len(self.elements)
        if upper:
            cands = [k for k in range(n) if le[i][k] and le[j][k]]
            best = [k for k in cands if all(le[k][c] for c in cands)]
        else:
            cands = [k for k in range(n) if le[k][i] and le[k][j]]
            best = [k for k in cands if all(le[c][k] for c in cands)]
        if len(best) != 1:
            kind = "join" if upper else "meet"
            raise LatticeError(f"no {kind} for {self.elements[i]!r} and {self.elements[j]!r}")
        return best[0]

    def _extreme(self, upper):
        n = len(self.elements)
        acc = 0
        for k in range(1, n):
            acc = self._join[acc][k] if upper else self._meet[acc][k]
        return acc

    def _is_join_irreducible(self, x) -> bool:
        if x == self.bottom:
            return False
        i = self._pos[x]
        below = [k for k in range(len(self.elements)) if self._le[k][i] and k != i]
        acc = self._pos[self.bottom]
        for k in below:
            acc = self._join[acc][k]
        return acc != i

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._pos

    def leq(self, x, y) -> bool:
        return self._le[self._pos[x]][self._pos[y]]

    def join(self, x, y):
        return self.elements[self._join[self._pos[x]][self._pos[y]]]

    def meet(self, x, y):
        return self.elements[self._meet[self._pos[x]][self._pos[y]]]

    def atoms(self) -> tuple:
        """Elements covering the bottom."""
        b = self.bottom
        return tuple(
            x for x in self.elements
            if x != b and not any(y not in (b, x) and self.leq(y, x) for y in self.elements)
        )

    def code(self, x) -> frozenset[int]:
        """Positions (in ``join_irreducibles``) of the join-irreducibles below x."""
        return self._code[x]

    def decode(self, code: frozenset[int]):
        for x, c in self._code.items():
            if c == code:
                return x
        raise KeyError(f"{sorted(code)} is not the code of a lattice element")

    def is_boolean(self) -> bool:
        atoms = self.atoms()
        if set(atoms) != set(self.join_irreducibles) or len(self) != 2 ** len(atoms):
            return False
        return all(self.code(self.join(x, y)) == self.code(x) | self.code(y) for x in self for y in self)

    @classmethod
    def from_covers(cls, elements: Sequence[Hashable], covers: Iterable[tuple[Hashable, Hashable]]) -> "FiniteLattice":
        """Lattice whose order is generated by ``(lower, upper)`` cover pairs."""
        elems = tuple(elements)
        up = {x: set() for x in elems}
        for lo, hi in covers:
            if lo not in up or hi not in up:
                raise LatticeError(f"cover mentions unknown element: {lo!r} {hi!r}")
            up[lo].add(hi)
        above = {}
        for x in elems:
            seen, stack = {x}, [x]
            while stack:
                for y in up[stack.pop()]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            above[x] = seen
        return cls(elems, lambda x, y: y in above[x])


class PowersetLattice(FiniteLattice):
    """The boolean lattice of subsets of a finite universe, without tables."""

    def __init__(self, universe: Iterable[Hashable]):
        self.universe = tuple(dict.fromkeys(universe))
        self._upos = {u: i for i, u in enumerate(self.universe)}
        self.bottom = frozenset()
        self.top = frozenset(self.universe)
        self.join_irreducibles = tuple(frozenset([u]) for u in self.universe)

    @property
    def elements(self) -> tuple:
        return tuple(iter(self))

    def __iter__(self) -> Iterator[frozenset]:
        u = self.universe
        for r in range(len(u) + 1):
            for combo in itertools.combinations(u, r):
                yield frozenset(combo)

    def __len__(self):
        return 2 ** len(self.universe)

    def __contains__(self, x):
        return isinstance(x, frozenset) and x <= self.top

    def leq(self, x, y):
        return x <= y

    def join(self, x, y):
        return x | y

    def meet(self, x, y):
        return x & y

    def atoms(self):
        return self.join_irreducibles

    def code(self, x):
        return frozenset(self._upos[u] for u in x)

    def decode(self, code):
        return frozenset(self.universe[k] for k in code)

    def is_boolean(self):
        return True


def powerset_lattice(universe: Iterable[Hashable]) -> PowersetLattice:
    return PowersetLattice(universe)


# boolean coding -------------------------------------------------------------


@dataclass(frozen=True)
class AtomBasis:
    """Coding of a boolean lattice on its atoms."""

    lattice: FiniteLattice
    atoms: tuple
    dioid: CostDioid

    def vector(self, b) -> CostVector:
        return CostVector.indicator(self.dioid, len(self.atoms), self.lattice.code(b))

    def element(self, v: CostVector):
        return self.lattice.decode(_boolean_support(v))


def encode_boolean(B: FiniteLattice, dioid: CostDioid | None = None) -> AtomBasis:
    """Atoms become unit vectors and every element the sum of the atoms below it."""
    if not B.is_boolean():
        raise LatticeError("lattice is not boolean: some join is not a union of atoms")
    return AtomBasis(B, tuple(B.join_irreducibles), dioid or MaxPlus())


def _boolean_support(v: CostVector) -> frozenset[int]:
    d = v.dioid
    out = set()
    for i, x in enumerate(v.entries):
        if d.eq(x, d.one):
            out.add(i)
        elif not d.eq(x, d.zero):
            raise ValueError(f"entry {d.format(x)} is neither bot nor e")
    return frozenset(out)


def boolean_vectors(dioid: CostDioid, k: int) -> Iterator[CostVector]:
    """All 2^k vectors with entries in {bot, e}."""
    for bits in itertools.product((False, True), repeat=k):
        yield CostVector(dioid, [dioid.one if b else dioid.zero for b in bits], coerce=False)


# even intervals -------------------------------------------------------------


@dataclass(frozen=True)
class EvenInterval:
    """Interval with even bounds; ``lo = hi = None`` is the empty interval."""

    lo: int | None = None
    hi: int | None = None

    @property
    def empty(self) -> bool:
        return self.lo is None

    @property
    def width(self) -> int:
        return 0 if self.empty else (self.hi - self.lo) // 2 + 1

    def __str__(self):
        if self.empty:
            return "empty"
        if self.lo == self.hi:
            return f"[{self.lo}]"
        return f"[{self.lo},{self.hi}]"


EMPTY_INTERVAL = EvenInterval()


def _interval_leq(x: EvenInterval, y: EvenInterval) -> bool:
    if x.empty:
        return True
    if y.empty:
        return False
    return y.lo <= x.lo and x.hi <= y.hi


def even_interval_lattice(n: int) -> FiniteLattice:
    """Empty interval plus every [a, b] with even a <= b inside [-n, n].

    Elements are listed by increasing width, then increasing lower bound, so
    the join-irreducibles (the even singletons) come out ordered by value.
    """
    if not isinstance(n, int) or n <= 0 or n % 2:
        raise ValueError(f"n must be a positive even integer, got {n!r}")
    points = range(-n, n + 1, 2)
    ivs = [EvenInterval(a, b) for a in points for b in points if a <= b]
    ivs.sort(key=lambda iv: (iv.width, iv.lo))
    return FiniteLattice([EMPTY_INTERVAL, *ivs], _interval_leq)


def even_interval_abstraction(values: Iterable[int]) -> EvenInterval:
    """Smallest even interval containing a set of integers."""
    vals = list(values)
    if not vals:
        return EMPTY_INTERVAL
    lo, hi = min(vals), max(vals)
    return EvenInterval(lo - lo % 2, hi + hi % 2)


# the lift -------------------------------------------------------------------


@dataclass(frozen=True)
class GaloisLift:
    concrete: AtomBasis
    abstract: FiniteLattice
    alpha: Mapping[Hashable, Hashable]
    alpha1: CostMatrix
    _codes: tuple = field(repr=False, default=())

    @property
    def dioid(self) -> CostDioid:
        return self.alpha1.dioid

    @property
    def basis(self) -> tuple:
        """Join-irreducibles of A; they index the rows of ``alpha1``."""
        return self.abstract.join_irreducibles

    def encode(self, a) -> CostVector:
        return CostVector.indicator(self.dioid, len(self.basis), self.abstract.code(a))

    def decode(self, x: CostVector):
        return self.abstract.decode(_boolean_support(x))

    def apply_alpha1(self, v: CostVector) -> CostVector:
        return mat_vec(self.alpha1, v)

    def project_pi(self, x: CostVector) -> CostVector:
        """Code of the least element of A whose code contains x."""
        s = _boolean_support(x)
        for code, _ in self._codes:
            if s <= code:
                return CostVector.indicator(self.dioid, len(self.basis), code)
        raise LatticeError("no upper bound in the lattice")  # unreachable: top contains all

    def apply_gamma1(self, y: CostVector) -> CostVector:
        """Greatest {bot, e} vector v with alpha1 v <= y."""
        d = self.dioid
        r = mat_residual(self.alpha1, y)
        return CostVector(d, [d.meet(x, d.one) for x in r], coerce=False)

    def abstraction(self, v: CostVector) -> CostVector:
        return self.project_pi(self.apply_alpha1(v))

    def concretization(self, y: CostVector) -> CostVector:
        return self.apply_gamma1(y)

    def alpha_pattern(self) -> list[str]:
        """Rows of ``alpha1`` with ``e`` and ``.`` for bottom."""
        d = self.dioid
        return [" ".join("e" if d.eq(x, d.one) else "." for x in row) for row in self.alpha1.rows]

    def render(self) -> str:
        cols = [_label(a) for a in self.concrete.atoms]
        rows = [str(b) for b in self.basis]
        w = max(len(r) for r in rows)
        cw = [max(len(c), 1) for c in cols]
        head = " " * w + "  " + " ".join(c.rjust(k) for c, k in zip(cols, cw))
        lines = [head]
        d = self.dioid
        for label, row in zip(rows, self.alpha1.rows):
            cells = ("e" if d.eq(x, d.one) else "." for x in row)
            lines.append(label.ljust(w) + "  " + " ".join(c.rjust(k) for c, k in zip(cells, cw)))
        return "\n".join(lines)


def _label(x) -> str:
    if isinstance(x, frozenset):
        return "{" + ",".join(map(str, sorted(x, key=str))) + "}"
    return str(x)


def build_galois_lift(
    B: FiniteLattice,
    A: FiniteLattice,
    alpha: Mapping[Hashable, Hashable] | Callable[[Hashable], Hashable],
    dioid: CostDioid | None = None,
) -> GaloisLift:
    """Assemble alpha1 column by column from the codes of the atom images."""
    basis = encode_boolean(B, dioid)
    d = basis.dioid
    images = {}
    for atom in basis.atoms:
        try:
            img = alpha[atom] if isinstance(alpha, Mapping) else alpha(atom)
        except KeyError:
            raise ValueError(f"abstraction is partial: no image for atom {_label(atom)}") from None
        if img not in A:
            raise ValueError(f"{img!r} is not an element of the abstract lattice")
        images[atom] = img
    k = len(A.join_irreducibles)
    cols = [[d.one if r in A.code(images[a]) else d.zero for r in range(k)] for a in basis.atoms]
    alpha1 = CostMatrix(d, list(zip(*cols)), coerce=False)
    codes = tuple(sorted(((A.code(x), x) for x in A), key=lambda cx: len(cx[0])))
    return GaloisLift(basis, A, images, alpha1, codes)


def even_interval_lift(n: int, dioid: CostDioid | None = None) -> GaloisLift:
    """Lift of subsets of {-n..n} abstracted by even intervals."""
    B = powerset_lattice(range(-n, n + 1))
    A = even_interval_lattice(n)
    return build_galois_lift(B, A, lambda atom: even_interval_abstraction(atom), dioid)


# checks ---------------------------------------------------------------------


@dataclass
class CheckReport:
    """Named verdicts plus a witness for each failed law."""

    results: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, str] = field(default_factory=dict)

    def record(self, name: str, ok: bool, witness: str = ""):
        self.results[name] = self.results.get(name, True) and ok
        if not ok and name not in self.witnesses:
            self.witnesses[name] = witness

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def __bool__(self):
        return self.ok


def _fmt(v: CostVector) -> str:
    d = v.dioid
    return "(" + ",".join("e" if d.eq(x, d.one) else "bot" for x in v.entries) + ")"


def _guard_size(G: GaloisLift):
    if len(G.concrete.atoms) > EXHAUSTIVE_ATOM_LIMIT or len(G.basis) > EXHAUSTIVE_ATOM_LIMIT:
        raise ValueError(f"exhaustive checks are limited to {EXHAUSTIVE_ATOM_LIMIT} atoms")


def check_linear_galois(G: GaloisLift) -> CheckReport:
    """alpha1 . gamma1 <= Id on B(A) and Id <= gamma1 . alpha1 on B, exhaustively."""
    _guard_size(G)
    rep = CheckReport()
    d = G.dioid
    for y in boolean_vectors(d, len(G.basis)):
        ok = vec_leq(G.apply_alpha1(G.apply_gamma1(y)), y)
        rep.record("alpha1.gamma1 <= Id", ok, _fmt(y))
    for v in boolean_vectors(d, len(G.concrete.atoms)):
        ok = vec_leq(v, G.apply_gamma1(G.apply_alpha1(v)))
        rep.record("Id <= gamma1.alpha1", ok, _fmt(v))
    return rep


def check_closure(G: GaloisLift, projection: Callable[[CostVector], CostVector] | None = None) -> CheckReport:
    """pi is extensive, monotone, idempotent and lands on lattice codes."""
    _guard_size(G)
    pi = projection or G.project_pi
    rep = CheckReport()
    vecs = list(boolean_vectors(G.dioid, len(G.basis)))
    images = [pi(x) for x in vecs]
    codes = {c for c, _ in G._codes}
    for x, px in zip(vecs, images):
        rep.record("extensive", vec_leq(x, px), _fmt(x))
        rep.record("idempotent", pi(px) == px, _fmt(x))
        rep.record("lands in A", _boolean_support(px) in codes, _fmt(x))
    for (x, px), (y, py) in itertools.product(zip(vecs, images), repeat=2):
        if vec_leq(x, y):
            rep.record("monotone", vec_leq(px, py), f"{_fmt(x)} <= {_fmt(y)}")
    return rep


def check_residuated_pair(G: GaloisLift, projection: Callable[[CostVector], CostVector] | None = None) -> CheckReport:
    """Check that pi.alpha1 and gamma1.iota form a Galois connection.

    ``projection`` replaces pi, which lets a broken closure be tested.
    """
    _guard_size(G)
    pi = projection or G.project_pi
    d = G.dioid
    rep = CheckReport()
    codes = {c for c, _ in G._codes}
    concrete = list(boolean_vectors(d, len(G.concrete.atoms)))
    abstract = [G.encode(a) for a in G.abstract]
    f = {v: pi(G.apply_alpha1(v)) for v in concrete}
    g = {x: G.apply_gamma1(x) for x in abstract}
    for v, fv in f.items():
        rep.record("pi.alpha1 lands in A", _boolean_support(fv) in codes, _fmt(v))
        rep.record("Id <= (gamma1.iota).(pi.alpha1)", vec_leq(v, G.apply_gamma1(fv)), _fmt(v))
    for x, gx in g.items():
        rep.record("(pi.alpha1).(gamma1.iota) <= Id", vec_leq(pi(G.apply_alpha1(gx)), x), _fmt(x))
    for u, w in itertools.product(concrete, repeat=2):
        if vec_leq(u, w):
            rep.record("pi.alpha1 monotone", vec_leq(f[u], f[w]), f"{_fmt(u)} <= {_fmt(w)}")
    for x, y in itertools.product(abstract, repeat=2):
        if vec_leq(x, y):
            rep.record("gamma1.iota monotone", vec_leq(g[x], g[y]), f"{_fmt(x)} <= {_fmt(y)}")
    return rep


def find_additivity_counterexample(G: GaloisLift) -> tuple[CostVector, CostVector] | None:
    """First (u, v) with pi.alpha1(u + v) != pi.alpha1(u) + pi.alpha1(v)."""
    _guard_size(G)
    vecs = list(boolean_vectors(G.dioid, len(G.concrete.atoms)))
    f = {v: G.abstraction(v) for v in vecs}
    for u, v in itertools.combinations(vecs, 2):
        if f[u | v] != (f[u] | f[v]):
            return u, v
    return None


# the non-linear partition-style lift ----------------------------------------

INTERVAL_ORDERS = {
    # empty first, then by upper bound and width: places [2] fifth when n = 2
    "upper": lambda iv: (0,) if iv.empty else (1, iv.hi, iv.width),
    # empty first, then by width and lower bound: places [2] fourth when n = 2
    "size": lambda iv: (0,) if iv.empty else (1, iv.width, iv.lo),
}


@dataclass
class LinearityReport:
    basis: tuple
    sum_of_images: CostVector
    image_of_union: CostVector
    mismatch: tuple[tuple[int, ...], tuple[int, ...]] | None
    lifted_image: CostVector
    lifted_expected: CostVector

    @property
    def lift_agrees(self) -> bool:
        return self.lifted_image == self.lifted_expected


def partition_style_image(basis: Sequence, alpha_on_sets: Callable, subset, dioid: CostDioid) -> CostVector:
    """Unit vector at the position of alpha(subset) among all abstract elements."""
    return CostVector.unit(dioid, len(basis), basis.index(alpha_on_sets(subset)))


def check_linearizability_counterexample(n: int = 2, order: str = "upper", dioid: CostDioid | None = None) -> LinearityReport:
    """Show that lifting even-interval abstraction element-wise is not additive.

    Every interval gets its own dimension (ordered by ``order``).  The images
    of {-n} and {n} are summed and compared with the image of {-n, n}; the
    mismatch positions are 1-based.  The report also carries the same query
    through alpha1 then pi, which does land on the code of [-n, n].
    """
    d = dioid or MaxPlus()
    A = even_interval_lattice(n)
    basis = tuple(sorted(A, key=INTERVAL_ORDERS[order]))
    left, right = frozenset([-n]), frozenset([n])
    img = lambda s: partition_style_image(basis, even_interval_abstraction, s, d)
    summed = img(left) | img(right)
    union = img(left | right)
    mismatch = None
    if summed != union:
        mismatch = (
            tuple(sorted(i + 1 for i in summed.support())),
            tuple(sorted(i + 1 for i in union.support())),
        )
    G = even_interval_lift(n, d)
    both = G.concrete.vector(left | right)
    return LinearityReport(
        basis=basis,
        sum_of_images=summed,
        image_of_union=union,
        mismatch=mismatch,
        lifted_image=G.abstraction(both),
        lifted_expected=G.encode(even_interval_abstraction(left | right)),
    )


# custom lattice files -------------------------------------------------------


def parse_lattice_file(text: str) -> tuple[FiniteLattice, dict[str, str]]:
    """Read ``elements``, ``cover LOWER UPPER`` and ``alpha ATOM -> ELEMENT`` lines.

    The concrete side is the powerset of the atoms named by ``alpha`` lines.
    """
    elements: list[str] = []
    covers: list[tuple[str, str]] = []
    alpha: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "elements":
            elements.extend(parts[1:])
        elif parts[0] == "cover":
            if len(parts) != 3:
                raise ParseError("expected 'cover LOWER UPPER'", lineno, 1)
            covers.append((parts[1], parts[2]))
        elif parts[0] == "alpha":
            if len(parts) != 4 or parts[2] != "->":
                raise ParseError("expected 'alpha ATOM -> ELEMENT'", lineno, 1)
            if parts[1] in alpha:
                raise ParseError(f"atom {parts[1]!r} mapped twice", lineno, 7)
            alpha[parts[1]] = parts[3]
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno, 1)
    if not elements:
        raise ParseError("no lattice elements declared")
    try:
        A = FiniteLattice.from_covers(elements, covers)
    except LatticeError as exc:
        raise ParseError(str(exc)) from None
    for atom, img in alpha.items():
        if img not in A:
            raise ParseError(f"alpha image {img!r} is not a lattice element")
    return A, alpha


def lift_from_lattice_file(text: str, dioid: CostDioid | None = None) -> GaloisLift:
    A, alpha = parse_lattice_file(text)
    if not alpha:
        raise ParseError("no 'alpha' lines: the concrete atoms are unknown")
    B = powerset_lattice(alpha)
    return build_galois_lift(B, A, {frozenset([a]): img for a, img in alpha.items()}, dioid)
