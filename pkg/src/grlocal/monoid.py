"""Grading monoids: vectors of naturals under addition and words under concatenation.

Degrees are plain hashable Python values: a tuple of ints for ``natvec`` and a
``str`` for ``word``.  A :class:`Monoid` carries the kind, its parameters and
the total order used to sweep degrees.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Union

from .errors import PreconditionError

Degree = Union[tuple, str]


class DegreeOrder(str, Enum):
    GRLEX = "grlex"
    GRREVLEX = "grevlex"
    LEX = "lex"
    DEGLEX = "deglex"


def parse_order(name) -> DegreeOrder:
    if isinstance(name, DegreeOrder):
        return name
    name = {"grrevlex": "grevlex"}.get(name, name)
    try:
        return DegreeOrder(name)
    except ValueError:
        raise PreconditionError(f"unknown degree order {name!r}") from None


NATVEC_ORDERS = (DegreeOrder.GRLEX, DegreeOrder.GRREVLEX, DegreeOrder.LEX)


def compose(a: Degree, b: Degree) -> Degree:
    """Monoid product of two degrees of the same kind."""
    if isinstance(a, tuple) and isinstance(b, tuple):
        if len(a) != len(b):
            raise PreconditionError(f"degree rank mismatch: {a} vs {b}")
        return tuple(x + y for x, y in zip(a, b))
    if isinstance(a, str) and isinstance(b, str):
        return a + b
    raise PreconditionError(f"degree kind mismatch: {a!r} vs {b!r}")


@dataclass(frozen=True)
class Monoid:
    """Either ``natvec`` of rank ``k`` or ``word`` over ``alphabet``."""

    kind: str
    rank: int = 0
    alphabet: str = ""
    order: DegreeOrder = DegreeOrder.GRLEX

    def __post_init__(self):
        if self.kind == "natvec":
            if self.rank < 1:
                raise PreconditionError("natvec monoid needs rank >= 1")
            if parse_order(self.order) not in NATVEC_ORDERS:
                raise PreconditionError(f"order {self.order} not valid for natvec")
        elif self.kind == "word":
            if not self.alphabet or len(set(self.alphabet)) != len(self.alphabet):
                raise PreconditionError("word monoid needs a nonempty alphabet of distinct symbols")
            if parse_order(self.order) is not DegreeOrder.DEGLEX:
                raise PreconditionError(f"order {self.order} not valid for word monoid")
        else:
            raise PreconditionError(f"unknown monoid kind {self.kind!r}")
        object.__setattr__(self, "order", parse_order(self.order))

    @classmethod
    def natvec(cls, rank: int, order: str = "grlex") -> "Monoid":
        return cls("natvec", rank=rank, order=parse_order(order))

    @classmethod
    def word(cls, alphabet: str, order: str = "deglex") -> "Monoid":
        return cls("word", alphabet=alphabet, order=DegreeOrder(order))

    # -- basic structure ---------------------------------------------------

    @property
    def identity(self) -> Degree:
        return (0,) * self.rank if self.kind == "natvec" else ""

    def validate(self, d: Degree) -> Degree:
        if self.kind == "natvec":
            if not isinstance(d, tuple) or len(d) != self.rank:
                raise PreconditionError(f"expected a natvec degree of rank {self.rank}, got {d!r}")
            if any((not isinstance(x, int)) or x < 0 for x in d):
                raise PreconditionError(f"natvec degree entries must be nonnegative integers: {d!r}")
        else:
            if not isinstance(d, str):
                raise PreconditionError(f"expected a word degree, got {d!r}")
            bad = set(d) - set(self.alphabet)
            if bad:
                raise PreconditionError(f"symbols {sorted(bad)} not in alphabet {self.alphabet!r}")
        return d

    def compose(self, a: Degree, b: Degree) -> Degree:
        return compose(self.validate(a), self.validate(b))

    def total(self, d: Degree) -> int:
        """Total degree: coordinate sum or word length."""
        return sum(d) if self.kind == "natvec" else len(d)

    def key(self, d: Degree):
        if self.kind == "word":
            return (len(d), tuple(self.alphabet.index(c) for c in d))
        if self.order is DegreeOrder.GRLEX:
            return (sum(d), d)
        if self.order is DegreeOrder.GRREVLEX:
            return (sum(d), tuple(-x for x in reversed(d)))
        return d

    def compare(self, a: Degree, b: Degree) -> int:
        """-1, 0 or 1 as ``a`` is below, equal to or above ``b``."""
        ka, kb = self.key(self.validate(a)), self.key(self.validate(b))
        return (ka > kb) - (ka < kb)

    def sorted(self, degrees) -> list:
        return sorted(degrees, key=self.key)

    # -- divisibility ------------------------------------------------------

    def right_quotient(self, g: Degree, d: Degree):
        """The ``q`` with ``q * d == g``, or ``None``."""
        if self.kind == "natvec":
            q = tuple(x - y for x, y in zip(g, d))
            return q if all(x >= 0 for x in q) else None
        return g[: len(g) - len(d)] if g.endswith(d) else None

    def left_quotient(self, g: Degree, d: Degree):
        """The ``q`` with ``d * q == g``, or ``None``."""
        if self.kind == "natvec":
            return self.right_quotient(g, d)
        return g[len(d):] if g.startswith(d) else None

    def factorizations(self, g: Degree) -> list[tuple[Degree, Degree]]:
        """All ordered pairs ``(a, b)`` with ``a * b == g``."""
        return _factorizations(self, self.validate(g))

    # -- truncation windows ------------------------------------------------

    def within(self, d: Degree, bound: Degree) -> bool:
        """Whether ``d`` lies in the window cut out by ``bound``."""
        if self.kind == "natvec":
            return all(x <= y for x, y in zip(d, bound))
        return self.key(d) <= self.key(bound)

    def enumerate_upto(self, bound: Degree) -> list[Degree]:
        """Every degree in the window of ``bound``, strictly increasing."""
        return list(_enumerate_upto(self, self.validate(bound)))

    # -- literals ----------------------------------------------------------

    def format(self, d: Degree) -> str:
        if self.kind == "natvec":
            if self.rank == 1:
                return str(d[0])
            return "(" + ",".join(str(x) for x in d) + ")"
        return '"' + d + '"'

    def parse(self, text: str) -> Degree:
        text = text.strip()
        if self.kind == "natvec":
            if re.fullmatch(r"\d+", text) and self.rank == 1:
                return (int(text),)
            m = re.fullmatch(r"\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)", text)
            if not m:
                raise PreconditionError(f"bad natvec degree literal {text!r}")
            d = tuple(int(x) for x in m.group(1).split(","))
            return self.validate(d)
        m = re.fullmatch(r'"([^"]*)"', text)
        if not m:
            raise PreconditionError(f"bad word degree literal {text!r}")
        return self.validate(m.group(1))

    def describe(self) -> str:
        if self.kind == "natvec":
            return f"natvec {self.rank} order {self.order.value}"
        return f"word {self.alphabet} order {self.order.value}"


@lru_cache(maxsize=None)
def _factorizations(monoid: Monoid, g: Degree) -> list:
    if monoid.kind == "word":
        return [(g[:i], g[i:]) for i in range(len(g) + 1)]
    out = []
    for a in itertools.product(*(range(x + 1) for x in g)):
        out.append((a, tuple(x - y for x, y in zip(g, a))))
    return out


@lru_cache(maxsize=None)
def _enumerate_upto(monoid: Monoid, bound: Degree) -> tuple:
    if monoid.kind == "natvec":
        degs = itertools.product(*(range(x + 1) for x in bound))
    else:
        degs = (
            "".join(w)
            for n in range(len(bound) + 1)
            for w in itertools.product(monoid.alphabet, repeat=n)
        )
    return tuple(sorted((d for d in degs if monoid.within(d, bound)), key=monoid.key))


def iter_window(monoid: Monoid, bound: Degree) -> Iterator[Degree]:
    yield from _enumerate_upto(monoid, bound)
