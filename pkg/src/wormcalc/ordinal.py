"""Exact ordinal notations below epsilon-zero, in Cantor normal form.

An ordinal is a finite sum  w^e1*c1 + ... + w^ek*ck  with strictly
decreasing ordinal exponents and positive integer coefficients; the
empty sum is 0.  Representations are unique, so equality is structural.
Everything here is pure and total on the notation system: no operation
can leave epsilon-zero (transfinite hyperexponential iteration, which
would, is deliberately not provided).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import total_ordering


class OrdinalError(Exception):
    """Base class for ordinal notation errors."""


class Underflow(OrdinalError):
    """Raised by left_subtract(a, x) when a > x."""


class NotLimit(OrdinalError):
    """Raised when a fundamental sequence is taken of zero or a successor."""


class NotationOverflow(OrdinalError):
    """Reserved: a result would reach epsilon-zero.

    No operation in this module can actually overflow (finite
    hyperexponential iteration of notations below epsilon-zero stays
    below epsilon-zero), but callers constructing limits of towers use
    this signal instead of silently wrapping.
    """


class ParseError(OrdinalError, ValueError):
    """Malformed input text; ``position`` is the offending offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Comparison(enum.Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """A CNF ordinal notation: tuple of (exponent, coefficient) terms."""

    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        prev = None
        for exponent, coefficient in self.terms:
            if not isinstance(coefficient, int) or coefficient < 1:
                raise ValueError(f"coefficient must be a positive int: {coefficient!r}")
            if prev is not None and compare(exponent, prev) is not Comparison.LESS:
                raise ValueError("exponents must be strictly decreasing")
            prev = exponent

    @classmethod
    def from_int(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls() if n == 0 else cls(((ZERO, n),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    def as_int(self) -> int | None:
        """The value as a natural number, or None if infinite."""
        if self.is_zero:
            return 0
        if self.is_finite:
            return self.terms[0][1]
        return None

    def __lt__(self, other: "Ordinal") -> bool:
        return compare(self, other) is Comparison.LESS

    def __add__(self, other: "Ordinal") -> "Ordinal":
        return add(self, other)

    def __repr__(self):
        return f"Ordinal({print_ordinal(self)!r})"

    def __str__(self):
        return print_ordinal(self)


def _ordinal_hash(self) -> int:
    cached = self.__dict__.get("_hash")
    if cached is None:
        cached = hash(self.terms)
        object.__setattr__(self, "_hash", cached)
    return cached


# Comparison and memo tables hash ordinals heavily; cache per instance.
Ordinal.__hash__ = _ordinal_hash  # type: ignore[assignment]

ZERO = Ordinal()
ONE = Ordinal.from_int(1)
OMEGA = Ordinal(((ONE, 1),))


def as_ordinal(value) -> Ordinal:
    """Coerce an int or Ordinal to an Ordinal."""
    if isinstance(value, Ordinal):
        return value
    if isinstance(value, int):
        return Ordinal.from_int(value)
    raise TypeError(f"cannot interpret {value!r} as an ordinal")


def compare(a: Ordinal, b: Ordinal) -> Comparison:
    """Three-way comparison; total order on CNF notations."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c is not Comparison.EQUAL:
            return c
        if ca != cb:
            return Comparison.LESS if ca < cb else Comparison.GREATER
    if len(a.terms) < len(b.terms):
        return Comparison.LESS
    if len(a.terms) > len(b.terms):
        return Comparison.GREATER
    return Comparison.EQUAL


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    """CNF sum; a's terms below b's leading exponent are absorbed."""
    if b.is_zero:
        return a
    if a.is_zero:
        return b
    lead = b.terms[0][0]
    keep = [t for t in a.terms if compare(t[0], lead) is Comparison.GREATER]
    if len(keep) < len(a.terms) and compare(a.terms[len(keep)][0], lead) is Comparison.EQUAL:
        merged = (lead, a.terms[len(keep)][1] + b.terms[0][1])
        return Ordinal(tuple(keep) + (merged,) + b.terms[1:])
    return Ordinal(tuple(keep) + b.terms)


def left_subtract(a: Ordinal, x: Ordinal) -> Ordinal:
    """The unique eta with add(a, eta) = x.  Requires a <= x."""
    for i, ((ea, ca), (ex, cx)) in enumerate(zip(a.terms, x.terms)):
        c = compare(ea, ex)
        if c is Comparison.GREATER:
            raise Underflow(f"{a} > {x}")
        if c is Comparison.LESS:
            return Ordinal(x.terms[i:])
        if ca != cx:
            if ca > cx:
                raise Underflow(f"{a} > {x}")
            return Ordinal(((ex, cx - ca),) + x.terms[i + 1 :])
    if len(a.terms) > len(x.terms):
        raise Underflow(f"{a} > {x}")
    return Ordinal(x.terms[len(a.terms) :])


def omega_power(a: Ordinal) -> Ordinal:
    """w**a as a single-term notation."""
    return Ordinal(((a, 1),))


def mul_nat(a: Ordinal, n: int) -> Ordinal:
    """a * n for a natural n (right multiplication by a finite ordinal)."""
    if n < 0:
        raise ValueError("multiplier must be non-negative")
    if n == 0 or a.is_zero:
        return ZERO
    (e, c), rest = a.terms[0], a.terms[1:]
    return Ordinal(((e, c * n),) + rest)


def hyper_e(k: int, a: Ordinal) -> Ordinal:
    """k-fold iteration of the map  x |-> -1 + w**x  (k finite).

    -1 + b means left_subtract(1, b) for b >= 1 and 0 for b = 0; since
    w**x >= 1 always, the left-subtraction branch is the one taken.
    """
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    for _ in range(k):
        a = left_subtract(ONE, omega_power(a))
    return a


def is_limit(a: Ordinal) -> bool:
    """True iff a is nonzero and has no trailing finite part."""
    return bool(a.terms) and not a.terms[-1][0].is_zero


def is_successor(a: Ordinal) -> bool:
    return bool(a.terms) and a.terms[-1][0].is_zero


def predecessor(a: Ordinal) -> Ordinal:
    """a - 1 for successor a."""
    if not is_successor(a):
        raise ValueError(f"{a} is not a successor")
    (e, c), head = a.terms[-1], a.terms[:-1]
    if c == 1:
        return Ordinal(head)
    return Ordinal(head + ((e, c - 1),))


def fundamental_sequence(a: Ordinal, k: int) -> Ordinal:
    """k-th member of the standard CNF fundamental sequence of a limit.

    For a = b + w**(g+1): a[k] = b + w**g * k (a[0] = b).  For
    a = b + w**l with l limit: a[k] = b + w**(l[k]).  Strictly
    increasing in k with supremum a.
    """
    if not is_limit(a):
        raise NotLimit(f"{a} is zero or a successor")
    if k < 0:
        raise ValueError("index must be non-negative")
    (e, c), head = a.terms[-1], a.terms[:-1]
    if c > 1:
        head = head + ((e, c - 1),)
    if is_successor(e):
        if k == 0:
            return Ordinal(head)
        return Ordinal(head + ((predecessor(e), k),))
    return Ordinal(head + ((fundamental_sequence(e, k), 1),))


# --- text form ------------------------------------------------------------
#
# ordinal := term ('+' term)*
# term    := factor ('*' nat)?
# factor  := nat | 'w' ('^' factor)? | '(' ordinal ')'
#
# '^' binds tighter than '*' binds tighter than '+'; '^' is
# right-associative by the factor recursion.  Canonical printing emits
# CNF left to right, eliding 'w^0' to the bare coefficient, 'w^1' to
# 'w' and '*1' entirely; compound exponents are parenthesised.


class Cursor:
    """A shared scanning cursor for the little recursive-descent parsers."""

    __slots__ = ("text", "pos")

    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def try_eat(self, token: str) -> bool:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.try_eat(token):
            raise self.error(f"expected {token!r}")

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.pos)


def _parse_nat(cur: Cursor) -> int:
    cur.skip_ws()
    start = cur.pos
    while cur.peek().isdigit():
        cur.pos += 1
    if cur.pos == start:
        raise cur.error("expected a natural number")
    return int(cur.text[start : cur.pos])


def _parse_factor(cur: Cursor) -> Ordinal:
    cur.skip_ws()
    ch = cur.peek()
    if ch.isdigit():
        return Ordinal.from_int(_parse_nat(cur))
    if cur.try_eat("w"):
        if cur.try_eat("^"):
            return omega_power(_parse_factor(cur))
        return OMEGA
    if cur.try_eat("("):
        value = parse_ordinal_at(cur)
        cur.expect(")")
        return value
    raise cur.error("expected an ordinal")


def _parse_term(cur: Cursor) -> Ordinal:
    value = _parse_factor(cur)
    if cur.try_eat("*"):
        value = mul_nat(value, _parse_nat(cur))
    return value


def parse_ordinal_at(cur: Cursor) -> Ordinal:
    """Parse an ordinal starting at the cursor, leaving trailing input."""
    value = _parse_term(cur)
    while cur.try_eat("+"):
        value = add(value, _parse_term(cur))
    return value


def parse_ordinal(text: str) -> Ordinal:
    cur = Cursor(text)
    value = parse_ordinal_at(cur)
    if not cur.at_end():
        raise cur.error("trailing input after ordinal")
    return value


def print_ordinal(a: Ordinal, unicode: bool = False) -> str:
    """Canonical text form; round-trips exactly through parse_ordinal."""
    w, times, plus = ("ω", "·", " + ") if unicode else ("w", "*", "+")
    if a.is_zero:
        return "0"
    parts = []
    for exponent, coefficient in a.terms:
        if exponent.is_zero:
            parts.append(str(coefficient))
            continue
        if exponent == ONE:
            base = w
        else:
            inner = print_ordinal(exponent, unicode)
            simple = len(exponent.terms) == 1 and exponent.terms[0][1] == 1
            base = f"{w}^{inner}" if simple or exponent.is_finite else f"{w}^({inner})"
        parts.append(base if coefficient == 1 else f"{base}{times}{coefficient}")
    return plus.join(parts)
