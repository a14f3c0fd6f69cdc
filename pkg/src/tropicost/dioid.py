"""Cost dioids: complete idempotent commutative semirings with an nth root.

Every dioid here is an immutable descriptor object.  Values are plain Python
objects: :class:`fractions.Fraction` for finite numbers, ``float('inf')`` /
``float('-inf')`` for the infinite elements, ``frozenset`` for set carriers
and tuples of fractions for the vector carrier.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Any, Iterable

INF = float("inf")
NEG_INF = float("-inf")

STAR_ITERATION_CAP = 1000
MAXTIMES_REL_TOL = 1e-9


class CarrierError(ValueError):
    """A value does not belong to the dioid carrier."""


class StarDivergenceError(ArithmeticError):
    """The partial sums of a star did not stabilize within the iteration cap."""


def _to_number(x: Any) -> Fraction | float:
    if isinstance(x, float):
        if math.isnan(x):
            raise CarrierError("NaN is not a cost")
        return x if math.isinf(x) else Fraction(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_number(x)
    raise CarrierError(f"not a numeric cost: {x!r}")


def parse_number(token: str) -> Fraction | float:
    t = token.strip().lower()
    if t in ("inf", "+inf", "infinity", "+infinity"):
        return INF
    if t in ("-inf", "-infinity"):
        return NEG_INF
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise CarrierError(f"bad numeric literal {token!r}") from None


def _int_root(k: int, n: int) -> int | None:
    """Exact nonnegative integer nth root of ``k``, or None."""
    if k < 0:
        return None
    if k < 2:
        return k
    r = int(round(k ** (1.0 / n))) if k.bit_length() < 1000 else 1 << (k.bit_length() // n + 1)
    # Newton refinement from the float guess
    while True:
        nxt = ((n - 1) * r + k // r ** (n - 1)) // n
        if nxt >= r:
            break
        r = nxt
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** n == k:
            return cand
    return None


def format_number(x: Fraction | float) -> str:
    if isinstance(x, float):
        if x == INF:
            return "inf"
        if x == NEG_INF:
            return "-inf"
        return repr(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class CostDioid:
    """Base class of the cost-dioid descriptors.

    Subclasses provide the raw ``add``/``mul`` (no carrier checks, used by the
    matrix code on hot paths) and the element operations.  The public
    ``oplus``/``otimes``/``leq`` validate their arguments first.
    """

    kind: str = "abstract"
    selective = False
    cancellative = False
    double_idempotent = False

    zero: Any  # bottom, neutral for oplus, absorbing for otimes
    one: Any  # e, neutral for otimes
    top: Any

    # raw algebra -----------------------------------------------------------

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def meet(self, a, b):
        """Greatest lower bound in the induced order."""
        raise NotImplementedError

    def root(self, q, n: int):
        raise NotImplementedError

    def divide(self, a, b):
        """Left residual: the greatest ``x`` with ``a (x) x <= b``."""
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def coerce(self, x):
        """Normalize ``x`` into the carrier or raise :class:`CarrierError`."""
        raise NotImplementedError

    def parse(self, token: str):
        raise NotImplementedError

    def format_value(self, x) -> str:
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    # checked public surface -------------------------------------------------

    @property
    def bottom(self):
        return self.zero

    @property
    def e(self):
        return self.one

    def check(self, x):
        if not self.contains(x):
            raise CarrierError(f"{x!r} is not in the carrier of {self.kind}")
        return x

    def oplus(self, a, b):
        return self.add(self.check(a), self.check(b))

    def otimes(self, a, b):
        return self.mul(self.check(a), self.check(b))

    def leq(self, a, b) -> bool:
        self.check(a)
        self.check(b)
        return self.eq(self.add(a, b), b)

    def lt(self, a, b) -> bool:
        return self.leq(a, b) and not self.eq(a, b)

    def nth_root(self, q, n: int):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"root order must be a positive integer, got {n!r}")
        return self.root(self.check(q), n)

    def power(self, q, n: int):
        """``q`` otimes-composed ``n`` times (``n = 0`` gives e)."""
        acc = self.one
        for _ in range(n):
            acc = self.mul(acc, q)
        return acc

    def star(self, a):
        """``e (+) a (+) a^2 (+) ...`` realized finitely.

        On totally ordered carriers the answer is e when ``a <= e`` and top
        otherwise.  Elsewhere the partial sums are iterated until they repeat;
        more than ``STAR_ITERATION_CAP`` steps raise StarDivergenceError.
        """
        a = self.check(a)
        if self.selective:
            return self.one if self.eq(self.add(a, self.one), self.one) else self.top
        total = self.one
        p = self.one
        for _ in range(STAR_ITERATION_CAP):
            p = self.mul(p, a)
            nxt = self.add(total, p)
            if self.eq(nxt, total):
                return total
            total = nxt
        raise StarDivergenceError(f"star did not stabilize in {self.kind}")

    def residual(self, a, b):
        return self.divide(self.check(a), self.check(b))

    def sum(self, values: Iterable):
        return reduce(self.add, values, self.zero)

    def prod(self, values: Iterable):
        return reduce(self.mul, values, self.one)

    def parse_literal(self, token: str):
        t = token.strip()
        if t == "top":
            return self.top
        if t in ("bot", "bottom"):
            return self.zero
        if t == "e":
            return self.one
        return self.parse(t)

    def format(self, x) -> str:
        """Render a value; top and bottom print as ``top``/``bot``."""
        if self.eq(x, self.top):
            return "top"
        if self.eq(x, self.zero):
            return "bot"
        return self.format_value(x)

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "selective": self.selective,
            "cancellative": self.cancellative,
            "double_idempotent": self.double_idempotent,
        }

    @property
    def name(self) -> str:
        return self.kind

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self), self._key()))

    def _key(self):
        return ()


class _ExtendedRational(CostDioid):
    """Shared carrier logic for Q with both infinities."""

    def contains(self, x) -> bool:
        if isinstance(x, Fraction):
            return True
        return isinstance(x, float) and math.isinf(x)

    def coerce(self, x):
        return _to_number(x)

    def parse(self, token: str):
        return parse_number(token)

    def format_value(self, x) -> str:
        return format_number(x)


class MaxPlus(_ExtendedRational):
    kind = "maxplus"
    selective = True
    zero, one, top = NEG_INF, Fraction(0), INF

    def add(self, a, b):
        return a if a >= b else b

    def mul(self, a, b):
        if a == NEG_INF or b == NEG_INF:
            return NEG_INF
        return a + b

    def meet(self, a, b):
        return a if a <= b else b

    def root(self, q, n):
        return q if isinstance(q, float) else q / n

    def divide(self, a, b):
        if a == NEG_INF or b == INF:
            return INF
        if a == INF:
            return NEG_INF
        if b == NEG_INF:
            return NEG_INF
        return b - a


class MinPlus(_ExtendedRational):
    kind = "minplus"
    selective = True
    zero, one, top = INF, Fraction(0), NEG_INF

    def add(self, a, b):
        return a if a <= b else b

    def mul(self, a, b):
        if a == INF or b == INF:
            return INF
        return a + b

    def meet(self, a, b):
        return a if a >= b else b

    def root(self, q, n):
        return q if isinstance(q, float) else q / n

    def divide(self, a, b):
        # greatest in the reversed order: numerically least x with a + x >= b
        if a == INF or b == NEG_INF:
            return NEG_INF
        if a == NEG_INF:
            return INF
        if b == INF:
            return INF
        return b - a


class MinMax(_ExtendedRational):
    kind = "minmax"
    double_idempotent = True
    zero, one, top = INF, NEG_INF, NEG_INF

    def add(self, a, b):
        return a if a <= b else b

    def mul(self, a, b):
        return a if a >= b else b

    def meet(self, a, b):
        return a if a >= b else b

    def root(self, q, n):
        return q

    def divide(self, a, b):
        # numerically least x with max(a, x) >= b
        return NEG_INF if a >= b else b


class MaxMin(_ExtendedRational):
    kind = "maxmin"
    double_idempotent = True
    zero, one, top = NEG_INF, INF, INF

    def add(self, a, b):
        return a if a >= b else b

    def mul(self, a, b):
        return a if a <= b else b

    def meet(self, a, b):
        return a if a <= b else b

    def root(self, q, n):
        return q

    def divide(self, a, b):
        # numerically greatest x with min(a, x) <= b
        return INF if a <= b else b


class MaxTimes(CostDioid):
    """Nonnegative reals with +inf under (max, x).

    Sums and products stay exact on rationals.  Roots are exact when the
    argument is a perfect power and a float otherwise; equality involving a
    float is then decided at relative tolerance ``rel_tol``.
    """

    kind = "maxtimes"
    selective = True
    zero, one, top = Fraction(0), Fraction(1), INF

    def __init__(self, rel_tol: float = MAXTIMES_REL_TOL):
        self.rel_tol = rel_tol

    def _key(self):
        return (self.rel_tol,)

    def contains(self, x) -> bool:
        if isinstance(x, Fraction):
            return x >= 0
        return isinstance(x, float) and (x == INF or (math.isfinite(x) and x >= 0))

    def coerce(self, x):
        v = _to_number(x)
        if v == NEG_INF or v < 0:
            raise CarrierError(f"maxtimes costs are nonnegative, got {x!r}")
        return v

    def parse(self, token):
        return self.coerce(parse_number(token))

    def format_value(self, x):
        return format_number(x)

    def eq(self, a, b):
        if a == b:
            return True
        if isinstance(a, float) or isinstance(b, float):
            if math.isinf(a) or math.isinf(b):
                return False
            return math.isclose(a, b, rel_tol=self.rel_tol, abs_tol=0.0)
        return False

    def add(self, a, b):
        return a if a >= b else b

    def mul(self, a, b):
        if a == 0 or b == 0:
            return self.zero
        return a * b

    def meet(self, a, b):
        return a if a <= b else b

    def root(self, q, n):
        if n == 1 or q == 0 or q == INF or q == 1:
            return q
        if isinstance(q, Fraction):
            num = _int_root(q.numerator, n)
            den = _int_root(q.denominator, n)
            if num is not None and den is not None:
                return Fraction(num, den)
        return float(q) ** (1.0 / n)

    def divide(self, a, b):
        if a == 0 or b == INF:
            return INF
        if a == INF:
            return self.zero
        return b / a


class _SetDioid(CostDioid):
    double_idempotent = True

    def __init__(self, universe: Iterable):
        uni = tuple(dict.fromkeys(universe))
        if not uni:
            raise ValueError(f"{self.kind} needs a nonempty universe")
        self.universe_order = uni
        self.universe = frozenset(uni)

    def _key(self):
        return (self.universe,)

    @property
    def name(self):
        return f"{self.kind}({' '.join(map(str, self.universe_order))})"

    def contains(self, x) -> bool:
        return isinstance(x, frozenset) and x <= self.universe

    def coerce(self, x):
        s = frozenset(x)
        if not s <= self.universe:
            raise CarrierError(f"{sorted(map(str, s - self.universe))} outside universe")
        return s

    def parse(self, token):
        t = token.strip()
        if not (t.startswith("{") and t.endswith("}")):
            raise CarrierError(f"set literal must look like {{a,b}}, got {token!r}")
        names = [p.strip() for p in t[1:-1].split(",") if p.strip()]
        lookup = {str(u): u for u in self.universe_order}
        try:
            return frozenset(lookup[n] for n in names)
        except KeyError as exc:
            raise CarrierError(f"{exc.args[0]!r} is not in the universe") from None

    def format_value(self, x):
        ordered = [str(u) for u in self.universe_order if u in x]
        return "{" + ",".join(ordered) + "}"

    def root(self, q, n):
        return q


class CupCap(_SetDioid):
    kind = "cup-cap"

    def __init__(self, universe):
        super().__init__(universe)
        self.zero, self.one, self.top = frozenset(), self.universe, self.universe

    def add(self, a, b):
        return a | b

    def mul(self, a, b):
        return a & b

    def meet(self, a, b):
        return a & b

    def divide(self, a, b):
        return (self.universe - a) | b


class CapCup(_SetDioid):
    kind = "cap-cup"

    def __init__(self, universe):
        super().__init__(universe)
        self.zero, self.one, self.top = self.universe, frozenset(), frozenset()

    def add(self, a, b):
        return a & b

    def mul(self, a, b):
        return a | b

    def meet(self, a, b):
        return a | b

    def divide(self, a, b):
        # least set x (greatest in the reversed order) with b <= a | x
        return b - a


class MinPlusVec(CostDioid):
    """Componentwise (min, +) on nonnegative rational m-vectors plus one global inf.

    The order is not total, so this dioid is not selective.  It exists to
    exercise the statements that require selectivity.
    """

    kind = "minplus_vec"
    cancellative = True

    def __init__(self, m: int):
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"vector length must be a positive integer, got {m!r}")
        self.m = m
        self.zero = INF
        self.one = (Fraction(0),) * m
        self.top = self.one

    def _key(self):
        return (self.m,)

    @property
    def name(self):
        return f"minplus_vec({self.m})"

    def contains(self, x) -> bool:
        if x == INF:
            return True
        return (
            isinstance(x, tuple)
            and len(x) == self.m
            and all(isinstance(c, Fraction) and c >= 0 for c in x)
        )

    def coerce(self, x):
        if isinstance(x, float) and x == INF:
            return INF
        if isinstance(x, str):
            return self.parse(x)
        try:
            comps = tuple(_to_number(c) for c in x)
        except TypeError:
            raise CarrierError(f"not a cost vector: {x!r}") from None
        if len(comps) != self.m or any(isinstance(c, float) or c < 0 for c in comps):
            raise CarrierError(f"expected {self.m} nonnegative finite components, got {x!r}")
        return comps

    def parse(self, token):
        t = token.strip()
        if t.lower() in ("inf", "+inf"):
            return INF
        if not (t.startswith("(") and t.endswith(")")):
            raise CarrierError(f"vector literal must look like (1,2), got {token!r}")
        return self.coerce([p for p in t[1:-1].split(",") if p.strip()])

    def format_value(self, x):
        if x == INF:
            return "inf"
        return "(" + ",".join(format_number(c) for c in x) + ")"

    def add(self, a, b):
        if a == INF:
            return b
        if b == INF:
            return a
        return tuple(x if x <= y else y for x, y in zip(a, b))

    def mul(self, a, b):
        if a == INF or b == INF:
            return INF
        return tuple(x + y for x, y in zip(a, b))

    def meet(self, a, b):
        if a == INF or b == INF:
            return INF
        return tuple(x if x >= y else y for x, y in zip(a, b))

    def root(self, q, n):
        if q == INF:
            return INF
        return tuple(c / n for c in q)

    def divide(self, a, b):
        if a == INF:
            return self.top
        if b == INF:
            return INF
        return tuple(max(y - x, Fraction(0)) for x, y in zip(a, b))


DIOID_KINDS = ("minmax", "maxmin", "cap-cup", "cup-cap", "minplus_vec", "maxtimes", "maxplus", "minplus")
NUMERIC_KINDS = ("maxplus", "minplus", "maxtimes", "minmax", "maxmin", "minplus_vec")


def make_dioid(kind: str, universe: Iterable | None = None, m: int | None = None) -> CostDioid:
    """Build one of the standard cost dioids by identifier.

    ``minplus_vec`` also accepts the ``minplus_vec(3)`` spelling.  The set
    dioids require ``universe``.
    """
    k = kind.strip().lower().replace("_", "-") if kind else ""
    if k.startswith("minplus-vec"):
        rest = k[len("minplus-vec"):]
        if rest:
            if not (rest.startswith("(") and rest.endswith(")")):
                raise ValueError(f"unknown dioid kind {kind!r}")
            m = int(rest[1:-1])
        return MinPlusVec(2 if m is None else m)
    simple = {"maxplus": MaxPlus, "minplus": MinPlus, "minmax": MinMax, "maxmin": MaxMin, "maxtimes": MaxTimes}
    if k in simple:
        return simple[k]()
    if k in ("cup-cap", "cap-cup"):
        if universe is None:
            raise ValueError(f"{kind} requires a declared universe")
        return CupCap(universe) if k == "cup-cap" else CapCup(universe)
    raise ValueError(f"unknown dioid kind {kind!r}")
