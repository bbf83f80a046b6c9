"""Exact integers, rationals and tower-exponential index expressions.

Rationals are :class:`fractions.Fraction` (always normalized, positive
denominator).  Plain ``int`` covers arbitrary-precision integers; the only
thing added on top is a *bit budget*: any integer the library materializes
must fit in ``get_bit_budget()`` bits, otherwise :class:`BudgetExceeded` is
raised and callers fall back to :class:`TowerSum` expressions.

A :class:`TowerSum` is an integer of the form::

    c + sum_i  a_i * 2**lcal_i

where ``lcal_i`` is the i-th offset of a :class:`Tower` (a recurrence of the
shape ``lcal_m = lcal_{m-1} + mult(m) * 2**lcal_{m-1}``).  Such numbers are far
too large to write down past the first few indices, but they can still be
added, subtracted and, thanks to the gaps between consecutive tower terms,
compared exactly.
"""
from __future__ import annotations

import contextlib
import operator
from fractions import Fraction
from typing import Callable, Iterator, Union

Rational = Fraction

DEFAULT_BIT_BUDGET = 10**7

_bit_budget = DEFAULT_BIT_BUDGET


class BudgetExceeded(ArithmeticError):
    """An integer would need more bits than the configured budget."""

    def __init__(self, bits, budget: int, what: str = ""):
        self.bits = bits
        self.budget = budget
        self.what = what
        shown = "astronomically many" if isinstance(bits, int) and bits.bit_length() > 64 else bits
        super().__init__(f"{what or 'value'} needs {shown} bits, budget is {budget}")


class Inconclusive(Exception):
    """A finite computation could not decide the question it was asked."""

    def __init__(self, reason: str, horizon=None):
        self.reason = reason
        self.horizon = horizon
        super().__init__(reason if horizon is None else f"{reason} (horizon {horizon})")


def get_bit_budget() -> int:
    return _bit_budget


def set_bit_budget(bits: int) -> None:
    global _bit_budget
    if bits < 64:
        raise ValueError("bit budget must be at least 64")
    _bit_budget = int(bits)


@contextlib.contextmanager
def bit_budget(bits: int) -> Iterator[None]:
    """Temporarily change the bit budget."""
    old = _bit_budget
    set_bit_budget(bits)
    try:
        yield
    finally:
        set_bit_budget(old)


def check_bits(value: int, what: str = "") -> int:
    if value.bit_length() > _bit_budget:
        raise BudgetExceeded(value.bit_length(), _bit_budget, what)
    return value


def pow2(e: int) -> int:
    """Return ``2**e`` exactly, refusing exponents beyond the bit budget."""
    e = operator.index(e)
    if e < 0:
        raise ValueError("negative exponent")
    if e + 1 > _bit_budget:
        raise BudgetExceeded(e + 1, _bit_budget, "power of two" if e.bit_length() > 64 else f"2**{e}")
    return 1 << e


# --------------------------------------------------------------------------
# rationals

def rational(x) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``(p, q)`` pairs."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        num, sep, den = x.strip().partition("/")
        return Fraction(int(num), int(den)) if sep else Fraction(num)
    if isinstance(x, dict):
        return Fraction(int(x["num"]), int(x["den"]))
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"cannot make a rational from {x!r}")


def rational_arith(a, b, op: str):
    """Apply ``op`` in {add, sub, mul, div, cmp}; ``cmp`` returns -1, 0 or 1."""
    a, b = rational(a), rational(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b  # ZeroDivisionError on b == 0
    if op == "cmp":
        return (a > b) - (a < b)
    raise ValueError(f"unknown op {op!r}")


def rational_str(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def rational_to_json(r: Fraction) -> dict:
    return {"num": str(r.numerator), "den": str(r.denominator)}


def rational_from_json(obj) -> Fraction:
    return rational(obj)


# --------------------------------------------------------------------------
# towers

TOWERS: dict[str, "Tower"] = {}


class Tower:
    """Offsets ``lcal_0 = 0``, ``lcal_1 = 2``, ``lcal_m = lcal_{m-1} + mult(m) * 2**lcal_{m-1}``.

    ``mult(m) = 2m`` gives the first construction, ``mult(m) = 1`` the second.
    """

    def __init__(self, name: str, mult: Callable[[int], int]):
        TOWERS[name] = self
        self.name = name
        self.mult = mult
        self._offset_values: dict[int, int] = {0: 0, 1: 2}
        self._offset_failed: set[int] = set()
        self._pow_values: dict[int, int] = {}
        self._pow_failed: set[int] = set()

    def __repr__(self):
        return f"Tower({self.name!r})"

    def offset(self, m: int) -> "TowerSum":
        """lcal_m as a symbolic expression (tower indices 1..m-1)."""
        if m < 0:
            raise ValueError("negative tower index")
        if m == 0:
            return TowerSum(self, 0)
        terms = {i - 1: self.mult(i) for i in range(2, m + 1)}
        return TowerSum(self, 2, terms)

    def offset_value(self, m: int) -> int:
        if m in self._offset_values:
            return check_bits(self._offset_values[m], f"lcal_{m}")
        if m in self._offset_failed:
            raise BudgetExceeded(None, _bit_budget, f"lcal_{m}")
        try:
            v = self.offset_value(m - 1) + self.mult(m) * self.pow_value(m - 1)
            check_bits(v, f"lcal_{m}")
        except BudgetExceeded:
            self._offset_failed.add(m)
            raise
        self._offset_values[m] = v
        return v

    def pow_value(self, i: int) -> int:
        """2**lcal_i, materialized."""
        if i in self._pow_values:
            return check_bits(self._pow_values[i], f"2**lcal_{i}")
        if i in self._pow_failed:
            raise BudgetExceeded(None, _bit_budget, f"2**lcal_{i}")
        try:
            v = pow2(self.offset_value(i))
        except BudgetExceeded:
            self._pow_failed.add(i)
            raise
        self._pow_values[i] = v
        return v

    def gap_bits_at_least(self, m: int, bits: int) -> bool:
        """Is ``lcal_m - lcal_{m-1}`` (the exponent gap below term m) >= ``bits``?"""
        try:
            prev = self.offset_value(m - 1)
        except BudgetExceeded:
            prev = _bit_budget + 1
        if prev >= 64:
            return bits <= (1 << 64)
        return bits <= self.mult(m) << prev


class TowerSum:
    """Exact integer ``const + sum(coef * 2**lcal_i)`` over a :class:`Tower`.

    Immutable; terms with index 0 are folded into the constant since
    ``2**lcal_0 == 1``.
    """

    __slots__ = ("tower", "const", "terms", "_hash")

    def __init__(self, tower: Tower | None, const: int = 0, terms: dict[int, int] | None = None):
        const = operator.index(const)
        clean: dict[int, int] = {}
        for i, c in (terms or {}).items():
            if c == 0:
                continue
            if i == 0:
                const += c
                continue
            if tower is None:
                raise ValueError("tower terms need a tower")
            clean[i] = clean.get(i, 0) + c
        object.__setattr__(self, "tower", tower)
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "terms", tuple(sorted((i, c) for i, c in clean.items() if c)))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("TowerSum is immutable")

    @classmethod
    def pow_term(cls, tower: Tower, i: int, coef: int = 1) -> "TowerSum":
        return cls(tower, 0, {i: coef})

    # structure
    @property
    def is_constant(self) -> bool:
        return not self.terms

    @property
    def top_index(self) -> int:
        return self.terms[-1][0] if self.terms else 0

    def _coerce(self, other) -> "TowerSum":
        if isinstance(other, TowerSum):
            if other.terms and self.terms and other.tower is not self.tower:
                raise ValueError("mixing different towers")
            return other
        if isinstance(other, int):
            return TowerSum(self.tower, other)
        return NotImplemented

    def _combine(self, other: "TowerSum", sign: int) -> "TowerSum":
        terms = dict(self.terms)
        for i, c in other.terms:
            terms[i] = terms.get(i, 0) + sign * c
        tower = self.tower if self.tower is not None else other.tower
        return TowerSum(tower, self.const + sign * other.const, terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __neg__(self):
        return TowerSum(self.tower, -self.const, {i: -c for i, c in self.terms})

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return TowerSum(self.tower, self.const * k, {i: c * k for i, c in self.terms})

    __rmul__ = __mul__

    # evaluation
    def value(self) -> int:
        """Materialize; raises :class:`BudgetExceeded` past the budget."""
        v = self.const
        for i, c in self.terms:
            v += c * self.tower.pow_value(i)
        return check_bits(v, str(self))

    def try_value(self) -> int | None:
        try:
            return self.value()
        except BudgetExceeded:
            return None

    def sign(self) -> int:
        """Exact sign.

        Materializes when possible; otherwise applies the dominance rule:
        the highest tower term outweighs everything below it because
        ``sum |rest| <= R * 2**lcal_{m-1} < 2**lcal_m`` whenever ``R`` has at
        most ``lcal_m - lcal_{m-1}`` bits.
        """
        if not self.terms:
            return (self.const > 0) - (self.const < 0)
        v = self.try_value()
        if v is not None:
            return (v > 0) - (v < 0)
        m, cm = self.terms[-1]
        rest = abs(self.const) + sum(abs(c) for _, c in self.terms[:-1])
        if self.tower.gap_bits_at_least(m, rest.bit_length()):
            return 1 if cm > 0 else -1
        raise BudgetExceeded(None, _bit_budget, f"sign of {self}")

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, (int, TowerSum)):
            other = self._coerce(other)
            return self.const == other.const and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self.is_constant:
            return hash(self.const)
        h = self._hash
        if h is None:
            h = hash((self.const, self.terms))
            object.__setattr__(self, "_hash", h)
        return h

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __repr__(self):
        return f"TowerSum({self})"

    def __str__(self):
        parts = []
        for i, c in reversed(self.terms):
            t = f"2^L{i}"
            parts.append(t if c == 1 else f"-{t}" if c == -1 else f"{c}*{t}")
        if self.const or not parts:
            parts.append(str(self.const))
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def to_json(self) -> dict:
        out = {"expr": str(self)}
        if self.tower is not None:
            out["tower"] = self.tower.name
        v = _small_value(self)
        if v is not None:
            out["value"] = str(v)
        return out

    @classmethod
    def parse(cls, expr: str, tower: "Tower | None" = None) -> "TowerSum":
        """Inverse of ``str``: ``"3*2^L4 - 2^L1 + 7"``."""
        const, terms = 0, {}
        for part in expr.replace(" - ", " + -").split(" + "):
            part = part.strip()
            if "2^L" in part:
                coef, _, idx = part.partition("2^L")
                coef = coef.rstrip("*")
                c = -1 if coef == "-" else int(coef) if coef else 1
                terms[int(idx)] = terms.get(int(idx), 0) + c
            else:
                const += int(part)
        return cls(tower, const, terms)


Int = Union[int, TowerSum]


def _small_value(x: TowerSum, max_bits: int = 256) -> int | None:
    for i, _ in x.terms:
        try:
            if x.tower.offset_value(i) > max_bits:
                return None
        except BudgetExceeded:
            return None
    return x.try_value()


def simplify(x: Int) -> Int:
    """Collapse tower-free expressions to plain ints."""
    if isinstance(x, TowerSum) and x.is_constant:
        return x.const
    return x


def materialize(x: Int) -> int:
    if isinstance(x, int):
        return check_bits(x)
    return x.value()


def int_to_json(x: Int):
    if isinstance(x, int):
        return str(x)
    x2 = simplify(x)
    if isinstance(x2, int):
        return str(x2)
    return x2.to_json()


def int_from_json(obj) -> Int:
    """Inverse of :func:`int_to_json`."""
    if isinstance(obj, (str, int)):
        return int(obj)
    return simplify(TowerSum.parse(obj["expr"], TOWERS.get(obj.get("tower"))))


def int_sign(x: Int) -> int:
    if isinstance(x, int):
        return (x > 0) - (x < 0)
    return x.sign()


def int_cmp(a: Int, b: Int) -> int:
    if isinstance(a, int) and isinstance(b, int):
        return (a > b) - (a < b)
    return int_sign(a - b)


def int_max(a: Int, b: Int) -> Int:
    return a if int_cmp(a, b) >= 0 else b


def int_min(a: Int, b: Int) -> Int:
    return a if int_cmp(a, b) <= 0 else b
