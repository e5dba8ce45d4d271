"""Worms: finite sequences of ordinal modalities applied to T.

A worm <g1><g2>...<gm>T is stored leftmost-outermost; the empty
sequence is T itself.  This module provides the structural operators
(heads, splits, shifts), the ordinal assignment ``o`` mapping worms to
notations below epsilon-zero, the relativised order value ``o_gamma``,
and the three-way order comparison that the derivability oracle is
tested against.

Only worms whose modalities are natural numbers flow through the
ordinal assignment directly; comparisons of worms with transfinite
modalities are routed through a joint order-preserving renaming onto an
initial segment of the naturals, which is order-faithful.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .ordinal import (
    Comparison,
    Cursor,
    ONE,
    Ordinal,
    ZERO,
    add,
    as_ordinal,
    compare,
    hyper_e,
    left_subtract,
    omega_power,
    parse_ordinal_at,
    print_ordinal,
)


class WormError(Exception):
    """Base class for worm-level errors."""


class EmptyWorm(WormError):
    """An operation that needs a modality was applied to T."""


class NoZero(WormError):
    """split_at_first_min_zero was applied to a worm whose minimum is not 0."""


class BelowShift(WormError):
    """A downward shift or gamma-relative operation met a modality below gamma."""


class TransfiniteModality(WormError):
    """The ordinal assignment was applied to a worm with an infinite modality."""


class WormComparison(enum.Enum):
    LESS = "less"
    EQUIVALENT = "equivalent"
    GREATER = "greater"


@dataclass(frozen=True)
class Worm:
    """An iterated consistency statement; leftmost modality outermost."""

    modalities: tuple[Ordinal, ...] = ()

    @classmethod
    def from_ints(cls, *values: int) -> "Worm":
        return cls(tuple(Ordinal.from_int(v) for v in values))

    @property
    def is_top(self) -> bool:
        return not self.modalities

    def __len__(self):
        return len(self.modalities)

    def __repr__(self):
        return f"Worm({print_worm(self)!r})"

    def __str__(self):
        return print_worm(self)


TOP = Worm()


def min_modality(a: Worm) -> Ordinal:
    """Least modality of a nonempty worm."""
    if a.is_top:
        raise EmptyWorm("T has no modalities")
    return min(a.modalities)


def head(gamma: Ordinal, a: Worm) -> Worm:
    """Maximal prefix of a whose modalities are all >= gamma."""
    gamma = as_ordinal(gamma)
    prefix = []
    for m in a.modalities:
        if compare(m, gamma) is Comparison.LESS:
            break
        prefix.append(m)
    return Worm(tuple(prefix))


def split_at_first_min_zero(a: Worm) -> tuple[Worm, Worm]:
    """Split a = h . <0> . b where h is the maximal all->=1 prefix."""
    if a.is_top:
        raise EmptyWorm("T cannot be split")
    if not min_modality(a).is_zero:
        raise NoZero(f"{a} has minimum {min_modality(a)}, not 0")
    h = head(ONE, a)
    return h, Worm(a.modalities[len(h) + 1 :])


def shift_up(alpha: Ordinal, a: Worm) -> Worm:
    """Replace every modality xi by alpha + xi."""
    alpha = as_ordinal(alpha)
    return Worm(tuple(add(alpha, m) for m in a.modalities))


def shift_down(alpha: Ordinal, a: Worm) -> Worm:
    """Replace every modality xi by -alpha + xi; requires xi >= alpha."""
    alpha = as_ordinal(alpha)
    shifted = []
    for m in a.modalities:
        if compare(m, alpha) is Comparison.LESS:
            raise BelowShift(f"modality {m} of {a} is below {alpha}")
        shifted.append(left_subtract(alpha, m))
    return Worm(tuple(shifted))


def ordinal_value(a: Worm) -> Ordinal:
    """The order value o(a) of a worm with finite modalities.

    o(T) = 0; if min a = 0 with split (h, b) then
    o(a) = o(b) + w**o(1-shift of h); if mu = min a > 0 then
    o(a) = e^mu applied to o(mu-shift of a).
    """
    if a.is_top:
        return ZERO
    mu = min_modality(a)
    if mu.is_zero:
        h, b = split_at_first_min_zero(a)
        return add(ordinal_value(b), omega_power(ordinal_value(shift_down(ONE, h))))
    steps = mu.as_int()
    if steps is None:
        raise TransfiniteModality(f"{a} has the infinite modality {mu}")
    return hyper_e(steps, ordinal_value(shift_down(mu, a)))


def ordinal_value_gamma(gamma: Ordinal, a: Worm) -> Ordinal:
    """o_gamma(a): the value of the gamma-head after shifting down by gamma."""
    gamma = as_ordinal(gamma)
    return ordinal_value(shift_down(gamma, head(gamma, a)))


def compare_worms(gamma: Ordinal, a: Worm, b: Worm) -> WormComparison:
    """Three-way <_gamma comparison of worms in Worms_gamma.

    LESS means a <_gamma b, i.e. the claim that b derives <gamma>a.  The
    triple (gamma, a, b) is first renamed order-preservingly onto an
    initial segment of the naturals, so transfinite modalities are fine.
    """
    from .formula import build_renaming

    gamma = as_ordinal(gamma)
    for worm in (a, b):
        for m in worm.modalities:
            if compare(m, gamma) is Comparison.LESS:
                raise BelowShift(f"modality {m} of {worm} is below {gamma}")
    mods = {gamma}
    mods.update(a.modalities)
    mods.update(b.modalities)
    renaming = build_renaming(mods, pin_zero=False)
    g = renaming.apply(gamma)
    oa = ordinal_value_gamma(g, renaming.apply_worm(a))
    ob = ordinal_value_gamma(g, renaming.apply_worm(b))
    return {
        Comparison.LESS: WormComparison.LESS,
        Comparison.EQUAL: WormComparison.EQUIVALENT,
        Comparison.GREATER: WormComparison.GREATER,
    }[compare(oa, ob)]


# --- text form ------------------------------------------------------------


def parse_worm_at(cur: Cursor) -> Worm:
    mods = []
    while cur.try_eat("<"):
        mods.append(parse_ordinal_at(cur))
        cur.expect(">")
    cur.expect("T")
    return Worm(tuple(mods))


def parse_worm(text: str) -> Worm:
    cur = Cursor(text)
    worm = parse_worm_at(cur)
    if not cur.at_end():
        raise cur.error("trailing input after worm")
    return worm


def print_worm(a: Worm, unicode: bool = False) -> str:
    if unicode:
        body = "".join(f"⟨{print_ordinal(m, True)}⟩" for m in a.modalities)
        return body + "⊤"
    return "".join(f"<{print_ordinal(m)}>" for m in a.modalities) + "T"
