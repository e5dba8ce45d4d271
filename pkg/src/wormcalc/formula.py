"""Modal formulas over ordinal-indexed modalities.

One AST covers the whole language (T, F, variables, ~, /\\, \\/, ->,
[o], <o>); the strictly positive fragment is the subset built from T,
variables, /\\ and diamonds, recognised by ``is_strictly_positive``.
Diamond(o, f) and ~[o]~f are distinct trees; nothing normalises
silently, so structural identities in tests are about literal
definitions.

The demotion/promotion machinery renames a formula's modality set
order-preservingly onto an initial segment of the naturals and back;
``boxed_relativize`` builds the guarded variant psi^chi used to push
derivations through Q-formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ordinal import (
    Cursor,
    Ordinal,
    as_ordinal,
    parse_ordinal_at,
    print_ordinal,
)
from .worm import Worm


class FormulaError(Exception):
    """Base class for formula-level errors."""


class UnmappedModality(FormulaError):
    """promote met a modality that is not in the renaming's target set."""


class Formula:
    """Base class for formula nodes; instances are immutable and hashable."""

    __slots__ = ()

    def __repr__(self):
        return f"{type(self).__name__}({print_formula(self)!r})"

    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Var(Formula):
    name: str


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Box(Formula):
    modality: Ordinal
    body: Formula


@dataclass(frozen=True, repr=False)
class Diamond(Formula):
    modality: Ordinal
    body: Formula


def _cached_hash(self) -> int:
    cached = self.__dict__.get("_hash")
    if cached is None:
        fields = tuple(getattr(self, name) for name in self.__match_args__)
        cached = hash((type(self).__name__, fields))
        object.__setattr__(self, "_hash", cached)
    return cached


# The proof search hashes formulas constantly; cache per instance.
for _cls in (Top, Bottom, Var, Not, And, Or, Implies, Box, Diamond):
    _cls.__hash__ = _cached_hash  # type: ignore[assignment]

TOP = Top()
BOTTOM = Bottom()


def diamond(modality, body: Formula) -> Diamond:
    return Diamond(as_ordinal(modality), body)


def box(modality, body: Formula) -> Box:
    return Box(as_ordinal(modality), body)


def conj(formulas) -> Formula:
    """Right-nested conjunction of a nonempty sequence (T if empty)."""
    items = list(formulas)
    if not items:
        return TOP
    result = items[-1]
    for f in reversed(items[:-1]):
        result = And(f, result)
    return result


def is_strictly_positive(f: Formula) -> bool:
    """True iff f uses only T, variables, conjunction and diamonds."""
    match f:
        case Top() | Var():
            return True
        case And(left, right):
            return is_strictly_positive(left) and is_strictly_positive(right)
        case Diamond(_, body):
            return is_strictly_positive(body)
        case _:
            return False


def worm_to_formula(w: Worm) -> Formula:
    """The strictly positive formula <g1>...<gm>T."""
    f: Formula = TOP
    for m in reversed(w.modalities):
        f = Diamond(m, f)
    return f


def formula_to_worm(f: Formula) -> Worm | None:
    """Inverse of worm_to_formula on its image; None off it."""
    mods = []
    while isinstance(f, Diamond):
        mods.append(f.modality)
        f = f.body
    return Worm(tuple(mods)) if isinstance(f, Top) else None


def _walk_mods(f: Formula, out: set[Ordinal]):
    match f:
        case Box(modality, body) | Diamond(modality, body):
            out.add(modality)
            _walk_mods(body, out)
        case Not(body):
            _walk_mods(body, out)
        case And(left, right) | Or(left, right) | Implies(left, right):
            _walk_mods(left, out)
            _walk_mods(right, out)
        case _:
            pass


def mod_set(f: Formula) -> set[Ordinal]:
    """The set of ordinals appearing as modalities of boxes/diamonds in f."""
    out: set[Ordinal] = set()
    _walk_mods(f, out)
    return out


@lru_cache(maxsize=65536)
def cached_mods(f: Formula) -> frozenset[Ordinal]:
    return frozenset(mod_set(f))


@lru_cache(maxsize=65536)
def cached_max_mod(f: Formula) -> Ordinal | None:
    """Largest modality occurring in f, or None for a modality-free f."""
    mods = cached_mods(f)
    return max(mods) if mods else None


def _walk_vars(f: Formula, out: set[str]):
    match f:
        case Var(name):
            out.add(name)
        case Box(_, body) | Diamond(_, body) | Not(body):
            _walk_vars(body, out)
        case And(left, right) | Or(left, right) | Implies(left, right):
            _walk_vars(left, out)
            _walk_vars(right, out)
        case _:
            pass


@lru_cache(maxsize=65536)
def cached_vars(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    _walk_vars(f, out)
    return frozenset(out)


@dataclass(frozen=True)
class Renaming:
    """An injective, strictly order-preserving finite modality map."""

    pairs: tuple[tuple[Ordinal, Ordinal], ...]

    def __post_init__(self):
        for (s1, t1), (s2, t2) in zip(self.pairs, self.pairs[1:]):
            if not (s1 < s2 and t1 < t2):
                raise ValueError("renaming must be strictly order-preserving")

    @property
    def sources(self) -> tuple[Ordinal, ...]:
        return tuple(s for s, _ in self.pairs)

    @property
    def targets(self) -> tuple[Ordinal, ...]:
        return tuple(t for _, t in self.pairs)

    def apply(self, m: Ordinal) -> Ordinal:
        for source, target in self.pairs:
            if source == m:
                return target
        raise UnmappedModality(f"{m} is not a source of {self}")

    def unapply(self, m: Ordinal) -> Ordinal:
        for source, target in self.pairs:
            if target == m:
                return source
        raise UnmappedModality(f"{m} is not a target of {self}")

    def apply_formula(self, f: Formula) -> Formula:
        return _rename(f, self.apply)

    def unapply_formula(self, f: Formula) -> Formula:
        return _rename(f, self.unapply)

    def apply_worm(self, w: Worm) -> Worm:
        return Worm(tuple(self.apply(m) for m in w.modalities))

    def unapply_worm(self, w: Worm) -> Worm:
        return Worm(tuple(self.unapply(m) for m in w.modalities))

    def as_dict(self) -> dict[str, str]:
        return {print_ordinal(s): print_ordinal(t) for s, t in self.pairs}

    def __str__(self):
        inside = ", ".join(f"{s}->{t}" for s, t in self.pairs)
        return "{" + inside + "}"


def _rename(f: Formula, fn) -> Formula:
    match f:
        case Box(modality, body):
            return Box(fn(modality), _rename(body, fn))
        case Diamond(modality, body):
            return Diamond(fn(modality), _rename(body, fn))
        case Not(body):
            return Not(_rename(body, fn))
        case And(left, right):
            return And(_rename(left, fn), _rename(right, fn))
        case Or(left, right):
            return Or(_rename(left, fn), _rename(right, fn))
        case Implies(left, right):
            return Implies(_rename(left, fn), _rename(right, fn))
        case _:
            return f


def build_renaming(mods, pin_zero: bool = False) -> Renaming:
    """Enumerate a finite modality set in increasing order onto 0, 1, ...

    With pin_zero the source set is extended with 0, which (being least)
    is then mapped to itself.
    """
    sources = set(mods)
    if pin_zero:
        sources.add(Ordinal())
    ordered = sorted(sources)
    return Renaming(tuple((s, Ordinal.from_int(i)) for i, s in enumerate(ordered)))


def demote(formulas, pin_zero: bool = False) -> tuple[list[Formula], Renaming]:
    """Jointly rename all modalities of ``formulas`` onto 0, 1, ...."""
    mods: set[Ordinal] = set()
    for f in formulas:
        mods |= mod_set(f)
    renaming = build_renaming(mods, pin_zero=pin_zero)
    return [renaming.apply_formula(f) for f in formulas], renaming


def promote(formulas, renaming: Renaming) -> list[Formula]:
    """Apply the inverse renaming; promote(demote(fs)) == fs."""
    return [renaming.unapply_formula(f) for f in formulas]


def diamonds_to_boxes(f: Formula) -> Formula:
    """Rewrite every <o>g into ~[o]~g, recursively."""
    match f:
        case Diamond(modality, body):
            return Not(Box(modality, Not(diamonds_to_boxes(body))))
        case Box(modality, body):
            return Box(modality, diamonds_to_boxes(body))
        case Not(body):
            return Not(diamonds_to_boxes(body))
        case And(left, right):
            return And(diamonds_to_boxes(left), diamonds_to_boxes(right))
        case Or(left, right):
            return Or(diamonds_to_boxes(left), diamonds_to_boxes(right))
        case Implies(left, right):
            return Implies(diamonds_to_boxes(left), diamonds_to_boxes(right))
        case _:
            return f


def boxed_relativize(psi: Formula, chi: Formula) -> Formula:
    """psi^chi: every box subformula [o]g becomes [o](chi -> g).

    Diamonds are first made explicit as ~[o]~, then every box is guarded,
    innermost-out.
    """
    return _relativize(diamonds_to_boxes(psi), chi)


def _relativize(f: Formula, chi: Formula) -> Formula:
    match f:
        case Box(modality, body):
            return Box(modality, Implies(chi, _relativize(body, chi)))
        case Not(body):
            return Not(_relativize(body, chi))
        case And(left, right):
            return And(_relativize(left, chi), _relativize(right, chi))
        case Or(left, right):
            return Or(_relativize(left, chi), _relativize(right, chi))
        case Implies(left, right):
            return Implies(_relativize(left, chi), _relativize(right, chi))
        case _:
            return f


def q_formula(a: Worm, phi: Formula) -> Formula:
    """Q(T, phi) = T;  Q(<g>A, phi) = <g>(phi /\\ Q(A, phi)).  Literal, no
    simplification."""
    if a.is_top:
        return TOP
    rest = Worm(a.modalities[1:])
    return Diamond(a.modalities[0], And(phi, q_formula(rest, phi)))


def q_iter(n, k: int, phi: Formula) -> Formula:
    """Q_n^0(phi) = T;  Q_n^{k+1}(phi) = <n>(phi /\\ Q_n^k(phi))."""
    n = as_ordinal(n)
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    result: Formula = TOP
    for _ in range(k):
        result = Diamond(n, And(phi, result))
    return result


def simplify_for_display(f: Formula) -> Formula:
    """Drop redundant /\\T conjuncts, for printing only."""
    match f:
        case And(left, right):
            left, right = simplify_for_display(left), simplify_for_display(right)
            if isinstance(left, Top):
                return right
            if isinstance(right, Top):
                return left
            return And(left, right)
        case Or(left, right):
            return Or(simplify_for_display(left), simplify_for_display(right))
        case Implies(left, right):
            return Implies(simplify_for_display(left), simplify_for_display(right))
        case Not(body):
            return Not(simplify_for_display(body))
        case Box(modality, body):
            return Box(modality, simplify_for_display(body))
        case Diamond(modality, body):
            return Diamond(modality, simplify_for_display(body))
        case _:
            return f


# --- text form ------------------------------------------------------------
#
# formula := impl
# impl    := or ('->' impl)?                (right-associative)
# or      := and ('\/' or)?
# and     := unary ('/\' and)?
# unary   := '~' unary | '<'ordinal'>' unary | '['ordinal']' unary | atom
# atom    := 'T' | 'F' | variable | '(' formula ')'
#
# Variables are lowercase identifiers.  Ordinals follow the ordinal
# grammar and live only inside modality brackets.


def _parse_atom(cur: Cursor) -> Formula:
    cur.skip_ws()
    ch = cur.peek()
    if cur.try_eat("T"):
        return TOP
    if cur.try_eat("F"):
        return BOTTOM
    if cur.try_eat("("):
        f = parse_formula_at(cur)
        cur.expect(")")
        return f
    if ch.isalpha() and ch.islower():
        start = cur.pos
        while cur.peek().isalnum() or cur.peek() == "_":
            cur.pos += 1
        return Var(cur.text[start : cur.pos])
    raise cur.error("expected a formula")


def _parse_unary(cur: Cursor) -> Formula:
    if cur.try_eat("~"):
        return Not(_parse_unary(cur))
    if cur.try_eat("<"):
        m = parse_ordinal_at(cur)
        cur.expect(">")
        return Diamond(m, _parse_unary(cur))
    if cur.try_eat("["):
        m = parse_ordinal_at(cur)
        cur.expect("]")
        return Box(m, _parse_unary(cur))
    return _parse_atom(cur)


def _parse_and(cur: Cursor) -> Formula:
    left = _parse_unary(cur)
    if cur.try_eat("/\\"):
        return And(left, _parse_and(cur))
    return left


def _parse_or(cur: Cursor) -> Formula:
    left = _parse_and(cur)
    if cur.try_eat("\\/"):
        return Or(left, _parse_or(cur))
    return left


def parse_formula_at(cur: Cursor) -> Formula:
    left = _parse_or(cur)
    if cur.try_eat("->"):
        return Implies(left, parse_formula_at(cur))
    return left


def parse_formula(text: str) -> Formula:
    cur = Cursor(text)
    f = parse_formula_at(cur)
    if not cur.at_end():
        raise cur.error("trailing input after formula")
    return f


_LEVEL_IMPL, _LEVEL_OR, _LEVEL_AND, _LEVEL_UNARY = 0, 1, 2, 3


def _print(f: Formula, level: int, unicode: bool) -> str:
    if unicode:
        sym = {"T": "⊤", "F": "⊥", "~": "¬", "and": " ∧ ",
               "or": " ∨ ", "impl": " → "}
    else:
        sym = {"T": "T", "F": "F", "~": "~", "and": " /\\ ", "or": " \\/ ",
               "impl": " -> "}

    def wrap(text: str, mine: int) -> str:
        return f"({text})" if mine < level else text

    match f:
        case Top():
            return sym["T"]
        case Bottom():
            return sym["F"]
        case Var(name):
            return name
        case Not(body):
            return sym["~"] + _print(body, _LEVEL_UNARY, unicode)
        case Diamond(modality, body):
            o = print_ordinal(modality, unicode)
            brackets = ("⟨", "⟩") if unicode else ("<", ">")
            return f"{brackets[0]}{o}{brackets[1]}" + _print(body, _LEVEL_UNARY, unicode)
        case Box(modality, body):
            o = print_ordinal(modality, unicode)
            return f"[{o}]" + _print(body, _LEVEL_UNARY, unicode)
        case And(left, right):
            text = _print(left, _LEVEL_AND + 1, unicode) + sym["and"] + _print(right, _LEVEL_AND, unicode)
            return wrap(text, _LEVEL_AND)
        case Or(left, right):
            text = _print(left, _LEVEL_OR + 1, unicode) + sym["or"] + _print(right, _LEVEL_OR, unicode)
            return wrap(text, _LEVEL_OR)
        case Implies(left, right):
            text = _print(left, _LEVEL_IMPL + 1, unicode) + sym["impl"] + _print(right, _LEVEL_IMPL, unicode)
            return wrap(text, _LEVEL_IMPL)
    raise TypeError(f"not a formula: {f!r}")


def print_formula(f: Formula, unicode: bool = False) -> str:
    """Canonical text form; round-trips exactly through parse_formula."""
    return _print(f, _LEVEL_IMPL, unicode)
