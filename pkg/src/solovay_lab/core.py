"""Exact dyadic arithmetic, stage-indexed function tables and orders.

Everything downstream measures weights of the form ``sum 2**-f(n)``; those
are carried by :class:`Dyadic`, which never rounds.  Tables of natural
numbers may contain the explicit marker :data:`INF`, which weighs nothing
and compares above every integer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

from .errors import NoWitness


class Infinite:
    """Signed infinity marker usable alongside Python ints."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = 1 if sign > 0 else -1

    def __repr__(self) -> str:
        return "inf" if self.sign > 0 else "-inf"

    __str__ = __repr__

    def __hash__(self) -> int:
        return hash(("Infinite", self.sign))

    def __eq__(self, other) -> bool:
        return isinstance(other, Infinite) and other.sign == self.sign

    def _cmp(self, other) -> int:
        if isinstance(other, Infinite):
            return (self.sign > other.sign) - (self.sign < other.sign)
        if isinstance(other, int):
            return self.sign
        return NotImplemented

    def __lt__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r < 0

    def __le__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r <= 0

    def __gt__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r > 0

    def __ge__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r >= 0

    def __neg__(self) -> "Infinite":
        return NEG_INF if self.sign > 0 else INF

    def __add__(self, other):
        if isinstance(other, int):
            return self
        if isinstance(other, Infinite) and other.sign == self.sign:
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self
        if isinstance(other, Infinite) and other.sign != self.sign:
            return self
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return -self
        return NotImplemented


INF = Infinite(1)
NEG_INF = Infinite(-1)

Value = Union[int, Infinite]


def is_inf(v) -> bool:
    return isinstance(v, Infinite)


@dataclass(frozen=True, eq=False)
class Dyadic:
    """The rational ``numerator * 2**-exponent``, kept in canonical form.

    Canonical means the exponent is 0 or the numerator is odd, so equal
    values have equal fields.
    """

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        num, exp = self.numerator, self.exponent
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        elif exp:
            tz = (num & -num).bit_length() - 1
            shift = min(tz, exp)
            num >>= shift
            exp -= shift
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    @classmethod
    def pow2(cls, n: int) -> "Dyadic":
        """``2**-n``; ``n`` may be negative."""
        if n >= 0:
            return cls(1, n)
        return cls(1 << -n, 0)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Accepts ``num/2^exp``, ``num,exp`` or a plain integer."""
        text = text.strip()
        if "/2^" in text:
            num, exp = text.split("/2^")
            return cls(int(num), int(exp))
        if "," in text:
            num, exp = text.split(",")
            return cls(int(num), int(exp))
        return cls(int(text), 0)

    def _align(self, other: "Dyadic") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return self.numerator << (e - self.exponent), other.numerator << (e - other.exponent), e

    @staticmethod
    def _coerce(other) -> "Dyadic":
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, e = self._align(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.numerator, self.exponent)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Dyadic(self.numerator * other.numerator, self.exponent + other.exponent)

    __rmul__ = __mul__

    def scale2(self, k: int) -> "Dyadic":
        """Multiply by ``2**k`` (``k`` of either sign)."""
        if k >= self.exponent:
            return Dyadic(self.numerator << (k - self.exponent), 0)
        return Dyadic(self.numerator, self.exponent - k)

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, _ = self._align(other)
        return (a > b) - (a < b)

    def __eq__(self, other):
        if isinstance(other, (Dyadic, int)):
            return self._cmp(other) == 0
        if isinstance(other, Fraction):
            return self.as_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __lt__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r < 0

    def __le__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r <= 0

    def __gt__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r > 0

    def __ge__(self, other):
        r = self._cmp(other)
        return r if r is NotImplemented else r >= 0

    def __bool__(self) -> bool:
        return self.numerator != 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def pair(self) -> tuple[int, int]:
        return self.numerator, self.exponent

    def __repr__(self) -> str:
        return f"Dyadic({self.numerator}/2^{self.exponent})"

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"


ZERO = Dyadic(0)
ONE = Dyadic(1)


def weight(v: Value) -> Dyadic:
    """``2**-v``, or zero for the infinity marker."""
    if is_inf(v):
        return ZERO
    return Dyadic.pow2(v)


def dy_partial_weight(f: Sequence[Value], N: int) -> Dyadic:
    """Exact ``sum_{n<N} 2**-f(n)``."""
    if N > len(f):
        raise ValueError(f"table has {len(f)} entries, asked for {N}")
    finite = [v for v in f[:N] if not is_inf(v)]
    if not finite:
        return ZERO
    top = max(finite)
    return Dyadic(sum(1 << (top - v) for v in finite), top)


def parse_value(text: str) -> Value:
    if text.strip().lower() in ("inf", "+inf", "∞"):
        return INF
    v = int(text)
    if v < 0:
        raise ValueError(f"negative table value {v}")
    return v


# ---------------------------------------------------------------------------
# staged functions


@dataclass
class StagedFunction:
    """Approximations ``v(n, t)`` for ``n < N`` and ``t <= T``.

    ``rows[n][t]`` must be nonincreasing in ``t``.  Reading at a stage past
    ``T`` returns the horizon value; reading outside the domain is an error.
    """

    rows: list[list[Value]]

    def __post_init__(self):
        lengths = {len(r) for r in self.rows}
        if len(lengths) > 1:
            raise ValueError("all rows of a staged function need the same number of stages")
        if lengths and 0 in lengths:
            raise ValueError("a staged function needs at least one stage")
        for n, row in enumerate(self.rows):
            for t in range(len(row) - 1):
                if row[t + 1] > row[t]:
                    raise ValueError(f"row {n} increases at stage {t + 1}")

    @classmethod
    def constant(cls, values: Sequence[Value]) -> "StagedFunction":
        return cls([[v] for v in values])

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[Value]]) -> "StagedFunction":
        """Build from ragged rows, padding each with its last value."""
        rows = [list(r) for r in rows]
        width = max((len(r) for r in rows), default=1)
        return cls([r + [r[-1]] * (width - len(r)) for r in rows])

    @property
    def N(self) -> int:
        return len(self.rows)

    @property
    def T(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else 0

    def at(self, n: int, t: int) -> Value:
        row = self.rows[n]
        return row[t] if t < len(row) else row[-1]

    def limit(self, n: int) -> Value:
        return self.rows[n][-1]

    def stage(self, t: int) -> list[Value]:
        return [self.at(n, t) for n in range(self.N)]

    def limits(self) -> list[Value]:
        return [r[-1] for r in self.rows]

    def dumps(self) -> str:
        return "".join(f"{n} {t} {v}\n" for n, row in enumerate(self.rows) for t, v in enumerate(row))

    @classmethod
    def loads(cls, text: str) -> "StagedFunction":
        entries: dict[int, dict[int, Value]] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'n t value'")
            n, t = int(parts[0]), int(parts[1])
            entries.setdefault(n, {})[t] = parse_value(parts[2])
        if not entries:
            return cls([])
        N = max(entries) + 1
        rows = []
        for n in range(N):
            stages = entries.get(n)
            if not stages or sorted(stages) != list(range(len(stages))):
                raise ValueError(f"row {n}: stages must be 0..T without gaps")
            rows.append([stages[t] for t in range(len(stages))])
        return cls.from_rows(rows)


def stage_refine(f: StagedFunction) -> StagedFunction:
    """Interpolate every drop into unit steps.

    Each original transition ``t -> t+1`` becomes ``max(1, largest drop)``
    refined stages, shared across all ``n`` so that refined stages still line
    up.  A row leaving the infinity marker jumps straight to its first finite
    value (there is nothing to interpolate from).
    """
    if f.N == 0:
        return StagedFunction([])
    out: list[list[Value]] = [[row[0]] for row in f.rows]
    for t in range(f.T):
        span = 1
        for row in f.rows:
            a, b = row[t], row[t + 1]
            if not is_inf(a):
                span = max(span, a - b)
        for n, row in enumerate(f.rows):
            a, b = row[t], row[t + 1]
            seq = out[n]
            if is_inf(a):
                seq.extend([b] * span)
            else:
                for j in range(1, span + 1):
                    seq.append(max(b, a - j))
    return StagedFunction(out)


# ---------------------------------------------------------------------------
# orders


@dataclass
class OrderFn:
    """A nondecreasing function given on ``0..N``."""

    values: list[int] = field(default_factory=list)

    def __post_init__(self):
        for n in range(len(self.values) - 1):
            if self.values[n + 1] < self.values[n]:
                raise ValueError(f"order decreases at {n + 1}")

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def __call__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)


class Inverse(NamedTuple):
    value: int
    clipped: bool


def h_inverse(h: OrderFn | Sequence[int], k: int) -> Inverse:
    """Largest ``n`` in the domain with ``h(n) <= k``.

    ``clipped`` is set when the last domain point still satisfies the bound,
    so the true inverse may lie beyond the horizon.
    """
    values = h.values if isinstance(h, OrderFn) else h
    if not values or values[0] > k:
        raise NoWitness(k=k)
    lo, hi = 0, len(values) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if values[mid] <= k:
            lo = mid
        else:
            hi = mid - 1
    return Inverse(lo, lo == len(values) - 1)


def binary(n: int) -> str:
    """Binary numeral without leading zeros; ``0`` maps to the empty string."""
    return format(n, "b") if n else ""


def strings_upto(max_len: int) -> Iterator[str]:
    """All bit strings of length ``<= max_len`` in length-lexicographic order."""
    for length in range(max_len + 1):
        for v in range(1 << length):
            yield format(v, f"0{length}b") if length else ""
