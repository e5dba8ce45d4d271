"""Derivability oracle for strictly positive sequents.

The rule set is the strictly positive shadow of the polymodal
provability axioms:

    (top)    A |- T
    (id)     A |- A
    (and-l)  A /\\ B |- A          (and-r)  A /\\ B |- B
    (and-i)  from A |- B and A |- C infer A |- B /\\ C
    (cut)    from A |- B and B |- C infer A |- C
    (mono)   from A |- B infer <a>A |- <a>B
    (trans)  <a><a>A |- <a>A
    (down)   <a>A |- <b>A                       for b < a
    (push)   <a>A /\\ <b>B |- <a>(A /\\ <b>B)   for b < a

Search is goal-directed iterative deepening with memoisation.  The
depth bound counts only the search moves that can grow a goal or invent
a cut formula (raising a diamond, transitivity expansion, pulling a
small diamond through a bigger one, unpacking the antecedent);
structure-shrinking steps are free, so the bound tracks modal effort
rather than bookkeeping.  A successful search returns a trace whose
every node is a literal instance of one of the rules above; failure
only means no proof was found within the bounds.

Sequents may carry arbitrary ordinal modalities: the prover renames
them onto an initial segment of the naturals (keeping 0 fixed) before
searching and maps the trace back afterwards, which is faithful in both
directions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from functools import lru_cache

from .formula import (
    And,
    Diamond,
    Formula,
    Renaming,
    Top,
    build_renaming,
    cached_max_mod,
    cached_mods,
    cached_vars,
    is_strictly_positive,
    mod_set,
    parse_formula_at,
    print_formula,
)
from .ordinal import Cursor, Ordinal

RULE_TOP = "top"
RULE_ID = "id"
RULE_AND_L = "and-l"
RULE_AND_R = "and-r"
RULE_AND_I = "and-i"
RULE_CUT = "cut"
RULE_MONO = "mono"
RULE_TRANS = "trans"
RULE_DOWN = "down"
RULE_PUSH = "push"

DEFAULT_DEPTH = 14
DEFAULT_BUDGET = 1_000_000

_NEVER = 10**9  # failure cache level meaning "at any depth"


class NotStrictlyPositive(ValueError):
    """A sequent side fell outside the strictly positive fragment."""


class ResourceExhausted(Exception):
    """The node budget ran out before the depth bound was reached."""


class InvalidTrace(ValueError):
    """A trace node is not an instance of any rule."""


@dataclass(frozen=True)
class Sequent:
    antecedent: Formula
    succedent: Formula

    def __post_init__(self):
        for side in (self.antecedent, self.succedent):
            if not is_strictly_positive(side):
                raise NotStrictlyPositive(f"not strictly positive: {side}")

    def __str__(self):
        return f"{print_formula(self.antecedent)} |- {print_formula(self.succedent)}"


def parse_sequent(text: str) -> Sequent:
    cur = Cursor(text)
    antecedent = parse_formula_at(cur)
    cur.expect("|-")
    succedent = parse_formula_at(cur)
    if not cur.at_end():
        raise cur.error("trailing input after sequent")
    return Sequent(antecedent, succedent)


@dataclass(frozen=True)
class TraceNode:
    rule: str
    conclusion: Sequent
    premises: tuple["TraceNode", ...] = ()


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    cache_hits: int = 0


@dataclass
class ProofResult:
    derivable: bool
    trace: TraceNode | None
    depth: int
    stats: SearchStats
    renaming: Renaming

    @property
    def status(self) -> str:
        return "derivable" if self.derivable else f"not-found depth={self.depth}"


@dataclass
class EquivalenceResult:
    equivalent: bool
    forward: ProofResult
    backward: ProofResult


def _ax(rule: str, antecedent: Formula, succedent: Formula) -> TraceNode:
    return TraceNode(rule, Sequent(antecedent, succedent))


def _cut(first: TraceNode, second: TraceNode) -> TraceNode:
    conclusion = Sequent(first.conclusion.antecedent, second.conclusion.succedent)
    return TraceNode(RULE_CUT, conclusion, (first, second))


def _mono(modality: Ordinal, sub: TraceNode) -> TraceNode:
    conclusion = Sequent(
        Diamond(modality, sub.conclusion.antecedent),
        Diamond(modality, sub.conclusion.succedent),
    )
    return TraceNode(RULE_MONO, conclusion, (sub,))


def _andi(antecedent: Formula, left: TraceNode, right: TraceNode) -> TraceNode:
    conclusion = Sequent(antecedent, And(left.conclusion.succedent, right.conclusion.succedent))
    return TraceNode(RULE_AND_I, conclusion, (left, right))


def _peel(alpha: Ordinal, y: Formula, sub: TraceNode) -> TraceNode:
    """From X' |- y build <alpha>X' |- y, for diamond y with modality <= alpha."""
    beta = y.modality
    node = _mono(alpha, sub)  # <alpha>X' |- <alpha>y
    if beta < alpha:
        node = _cut(node, _ax(RULE_DOWN, Diamond(alpha, y), Diamond(beta, y)))
    return _cut(node, _ax(RULE_TRANS, Diamond(beta, y), y))


@lru_cache(maxsize=131072)
def _size(f: Formula) -> int:
    if isinstance(f, Diamond):
        return 1 + _size(f.body)
    if isinstance(f, And):
        return 1 + _size(f.left) + _size(f.right)
    return 1


def _conjuncts(f: Formula) -> tuple:
    """Leaves of the top-level conjunction spine, left to right."""
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return (f,)


def _conj_of(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return Top()
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = And(part, result)
    return result


def _contains(tree: Formula, target: Formula) -> bool:
    if tree == target:
        return True
    if isinstance(tree, And):
        return _contains(tree.left, target) or _contains(tree.right, target)
    return False


def _project(tree: Formula, target: Formula) -> TraceNode:
    """Trace of tree |- target for a subtree target of tree's And-spine."""
    if tree == target:
        return _ax(RULE_ID, tree, target)
    if isinstance(tree, And):
        if _contains(tree.left, target):
            return _cut(_ax(RULE_AND_L, tree, tree.left), _project(tree.left, target))
        if _contains(tree.right, target):
            return _cut(_ax(RULE_AND_R, tree, tree.right), _project(tree.right, target))
    raise AssertionError(f"{target} not under {tree}")


def _entail(source: Formula, goal: Formula, special: dict) -> TraceNode:
    """Trace of source |- goal where goal's conjunct leaves either sit in
    source's And-spine or appear in ``special`` as leaf -> (origin, trace
    of origin |- leaf) with origin in the spine."""
    if goal in special:
        origin, via = special[goal]
        return _cut(_project(source, origin), via)
    if isinstance(goal, And):
        return TraceNode(RULE_AND_I, Sequent(source, goal),
                         (_entail(source, goal.left, special),
                          _entail(source, goal.right, special)))
    if isinstance(goal, Top):
        return _ax(RULE_TOP, source, goal)
    return _project(source, goal)


@lru_cache(maxsize=65536)
def _pull_candidates(y: Formula) -> tuple:
    """(e, gadget) pairs with gadget a trace of e |- y, for diamond y.

    Candidates surface a strictly smaller diamond from anywhere in the
    conjunction spine of y's body into the form And(<a>rest, <b>B), or
    rewrite one spine conjunct by its own pull candidates; iterating
    reaches arbitrarily deep bodies.
    """
    if not isinstance(y, Diamond):
        return ()
    out = []
    a, z = y.modality, y.body
    parts = _conjuncts(z)
    for i, part in enumerate(parts):
        if not isinstance(part, Diamond):
            continue
        rest = parts[:i] + parts[i + 1 :]
        if part.modality < a:
            # extract: And(<a>rest, part) |- <a>z by push then reassociation
            rest_tree = _conj_of(rest)
            e = And(Diamond(a, rest_tree), part)
            mid = Diamond(a, And(rest_tree, part))
            reassoc = _entail(And(rest_tree, part), z, {})
            gadget = _ax(RULE_PUSH, e, mid) if mid == y else _cut(
                _ax(RULE_PUSH, e, mid), _mono(a, reassoc))
            out.append((e, gadget))
        for f, g in _pull_candidates(part):
            # rewrite in place: <a>(f /\ rest) |- <a>z via f |- part
            if rest:
                inner = And(f, _conj_of(rest))
            else:
                inner = f
            e = Diamond(a, inner)
            body = _entail(inner, z, {part: (f, g)})
            out.append((e, _mono(a, body)))
    return tuple(out)


@lru_cache(maxsize=65536)
def _ante_candidates(x: Formula) -> tuple:
    """(e, gadget) pairs with gadget a trace of x |- e, for diamond x.

    Mirrors _pull_candidates on the antecedent side: surface a strictly
    smaller diamond of the body's conjunction spine (the extracted copy
    is reached by monotonicity, a descent and transitivity), collapse a
    repeated modality, or rewrite one spine conjunct in place.
    """
    if not isinstance(x, Diamond):
        return ()
    out = []
    d, w = x.modality, x.body
    if isinstance(w, Diamond) and w.modality == d:
        # transitivity flattening: <d><d>W' collapses to <d>W'
        out.append((w, _ax(RULE_TRANS, x, w)))
    parts = _conjuncts(w)
    for i, part in enumerate(parts):
        if not isinstance(part, Diamond):
            continue
        rest = parts[:i] + parts[i + 1 :]
        if part.modality < d:
            rest_tree = _conj_of(rest)
            e = And(Diamond(d, rest_tree), part)
            keep = _mono(d, _entail(w, rest_tree, {}))
            extract = _mono(d, _project(w, part))  # x |- <d>part
            extract = _cut(extract, _ax(RULE_DOWN, Diamond(d, part),
                                        Diamond(part.modality, part)))
            extract = _cut(extract, _ax(RULE_TRANS, Diamond(part.modality, part), part))
            out.append((e, _andi(x, keep, extract)))
        for f, g in _ante_candidates(part):
            if rest:
                inner = And(f, _conj_of(rest))
            else:
                inner = f
            e = Diamond(d, inner)
            body = _entail(w, inner, {f: (part, g)})
            out.append((e, _mono(d, body)))
    return tuple(out)


def _leaf(x: Formula, y: Formula) -> TraceNode | None:
    if isinstance(y, Top):
        return _ax(RULE_TOP, x, y)
    if x == y:
        return _ax(RULE_ID, x, y)
    if isinstance(x, And):
        if x.left == y:
            return _ax(RULE_AND_L, x, y)
        if x.right == y:
            return _ax(RULE_AND_R, x, y)
    if isinstance(x, Diamond) and isinstance(y, Diamond):
        if (x.modality == y.modality and isinstance(x.body, Diamond)
                and x.body.modality == x.modality and x.body.body == y.body):
            return _ax(RULE_TRANS, x, y)
        if x.body == y.body and y.modality < x.modality:
            return _ax(RULE_DOWN, x, y)
    if isinstance(x, And) and isinstance(y, Diamond) and isinstance(y.body, And):
        left, right = x.left, x.right
        if (isinstance(left, Diamond) and isinstance(right, Diamond)
                and left.modality == y.modality and right.modality < left.modality
                and y.body.left == left.body and y.body.right == right):
            return _ax(RULE_PUSH, x, y)
    return None


class Prover:
    """Iterative-deepening backward search over the rule set.

    A Prover instance may be reused across calls; with ``share_cache``
    the proof and failure tables persist between calls, which can only
    change speed, never outcomes (cached proofs carry their depth cost
    and failures are keyed by remaining depth).
    """

    def __init__(self, max_depth: int = DEFAULT_DEPTH, budget: int = DEFAULT_BUDGET,
                 share_cache: bool = False):
        self.max_depth = max_depth
        self.budget = budget
        self.share_cache = share_cache
        self._proved: dict = {}
        self._failed: dict = {}

    def prove(self, sequent: Sequent, max_depth: int | None = None,
              budget: int | None = None) -> ProofResult:
        """Search for a derivation; never a certificate of underivability."""
        max_depth = self.max_depth if max_depth is None else max_depth
        budget = self.budget if budget is None else budget
        if max_depth < 1:
            raise ValueError("max_depth must be at least 1")

        mods = mod_set(sequent.antecedent) | mod_set(sequent.succedent)
        renaming = build_renaming(mods, pin_zero=True)
        goal = (renaming.apply_formula(sequent.antecedent),
                renaming.apply_formula(sequent.succedent))

        if not self.share_cache:
            self._proved = {}
            self._failed = {}
        stats = SearchStats()
        state = _SearchState(self._proved, self._failed, stats, budget)
        trace = None
        for limit in range(1, max_depth + 1):
            found, _ = state.dfs(goal, limit)
            if found is not None:
                trace = found[1]
                break
        if trace is None:
            return ProofResult(False, None, max_depth, stats, renaming)
        return ProofResult(True, _promote_trace(trace, renaming), max_depth, stats, renaming)

    def prove_equiv(self, a: Formula, b: Formula, max_depth: int | None = None,
                    budget: int | None = None) -> EquivalenceResult:
        forward = self.prove(Sequent(a, b), max_depth, budget)
        backward = self.prove(Sequent(b, a), max_depth, budget)
        return EquivalenceResult(forward.derivable and backward.derivable, forward, backward)


class _SearchState:
    __slots__ = ("proved", "failed", "stats", "budget", "on_path")

    def __init__(self, proved, failed, stats, budget):
        self.proved = proved
        self.failed = failed
        self.stats = stats
        self.budget = budget
        self.on_path = set()

    def dfs(self, goal, remaining):
        """Return ((cost, trace), clean) on success, (None, clean) otherwise.

        ``clean`` is False when the failure may be an artefact of a cycle
        cut on the current path, in which case it must not be cached.
        """
        cached = self.proved.get(goal)
        if cached is not None and cached[0] <= remaining:
            self.stats.cache_hits += 1
            return cached, True
        if self.failed.get(goal, -1) >= remaining:
            self.stats.cache_hits += 1
            return None, True
        if goal in self.on_path:
            return None, False

        self.stats.nodes_expanded += 1
        if self.stats.nodes_expanded > self.budget:
            raise ResourceExhausted(f"node budget {self.budget} exhausted")

        x, y = goal
        # Sound permanent prunes: a derivable sequent can neither raise
        # the maximal modality nor introduce variables (both by a direct
        # induction on the rules).
        y_max = cached_max_mod(y)
        if y_max is not None:
            x_max = cached_max_mod(x)
            if x_max is None or y_max > x_max:
                self.failed[goal] = _NEVER
                return None, True
        if not cached_vars(y) <= cached_vars(x):
            self.failed[goal] = _NEVER
            return None, True

        leaf = _leaf(x, y)
        if leaf is not None:
            entry = (0, leaf)
            self.proved[goal] = entry
            return entry, True

        clean = True
        self.on_path.add(goal)
        try:
            for cost, subgoals, assemble in self._moves(x, y):
                if cost > remaining:
                    continue
                subtraces = []
                failed_branch = False
                for sg in subgoals:
                    found, sub_clean = self.dfs(sg, remaining - cost)
                    clean = clean and sub_clean
                    if found is None:
                        failed_branch = True
                        break
                    subtraces.append(found)
                if failed_branch:
                    continue
                total = cost + max((c for c, _ in subtraces), default=0)
                entry = (total, assemble([t for _, t in subtraces]))
                best = self.proved.get(goal)
                if best is None or total < best[0]:
                    self.proved[goal] = entry
                return entry, True
        finally:
            self.on_path.discard(goal)

        if clean and self.failed.get(goal, -1) < remaining:
            self.failed[goal] = remaining
        return None, clean

    def _moves(self, x, y):
        # Moves that strictly shrink the goal (by size, then by how
        # deeply conjunctions are buried under diamonds) are free; only
        # goal-growing and cut-formula-inventing moves spend depth.
        if isinstance(y, And):
            yield 0, ((x, y.left), (x, y.right)), lambda subs: _andi(x, subs[0], subs[1])
        if isinstance(x, Diamond) and isinstance(y, Diamond):
            if x.modality == y.modality:
                yield 0, ((x.body, y.body),), lambda subs: _mono(x.modality, subs[0])
            if x.modality >= y.modality:
                # peel: X.body |- Y already makes <a>X.body |- <b>Y'
                # via monotonicity, a descent, and transitivity.
                yield 0, ((x.body, y),), lambda subs: _peel(x.modality, y, subs[0])
        if isinstance(x, And):
            yield 0, ((x.left, y),), lambda subs: _cut(_ax(RULE_AND_L, x, x.left), subs[0])
            yield 0, ((x.right, y),), lambda subs: _cut(_ax(RULE_AND_R, x, x.right), subs[0])
        if isinstance(y, Diamond):
            for e, gadget in _pull_candidates(y):
                yield 1, ((x, e),), (
                    lambda subs, g=gadget: _cut(subs[0], g))
            beta = y.modality
            # Raising the outer diamond can only close against the
            # antecedent's own structure, so candidates come from there.
            for alpha in sorted(cached_mods(x), reverse=True):
                if alpha > beta:
                    lifted = Diamond(alpha, y.body)
                    yield 1, ((x, lifted),), (
                        lambda subs, t=lifted: _cut(subs[0], _ax(RULE_DOWN, t, y)))
        if isinstance(x, Diamond):
            x_size = _size(x)
            for e, gadget in _ante_candidates(x):
                # strictly shrinking rewrites (e.g. collapsing a repeated
                # modality) are free; the rest spend depth
                cost = 0 if _size(e) < x_size else 1
                yield cost, ((e, y),), (
                    lambda subs, g=gadget: _cut(g, subs[0]))


def _promote_trace(node: TraceNode, renaming: Renaming) -> TraceNode:
    conclusion = Sequent(
        renaming.unapply_formula(node.conclusion.antecedent),
        renaming.unapply_formula(node.conclusion.succedent),
    )
    return TraceNode(node.rule, conclusion, tuple(_promote_trace(p, renaming) for p in node.premises))


_default_prover = Prover()


def prove(sequent: Sequent, max_depth: int = DEFAULT_DEPTH,
          budget: int = DEFAULT_BUDGET) -> ProofResult:
    return _default_prover.prove(sequent, max_depth, budget)


def prove_equiv(a: Formula, b: Formula, max_depth: int = DEFAULT_DEPTH,
                budget: int = DEFAULT_BUDGET) -> EquivalenceResult:
    return _default_prover.prove_equiv(a, b, max_depth, budget)


# --- trace replay and serialisation ----------------------------------------


def validate_trace(node: TraceNode) -> None:
    """Re-check that every node is a literal instance of a rule."""
    for premise in node.premises:
        validate_trace(premise)
    x, y = node.conclusion.antecedent, node.conclusion.succedent
    rule, premises = node.rule, node.premises
    ok = False
    if rule == RULE_TOP:
        ok = isinstance(y, Top) and not premises
    elif rule == RULE_ID:
        ok = x == y and not premises
    elif rule == RULE_AND_L:
        ok = isinstance(x, And) and x.left == y and not premises
    elif rule == RULE_AND_R:
        ok = isinstance(x, And) and x.right == y and not premises
    elif rule == RULE_AND_I:
        ok = (isinstance(y, And) and len(premises) == 2
              and premises[0].conclusion == Sequent(x, y.left)
              and premises[1].conclusion == Sequent(x, y.right))
    elif rule == RULE_CUT:
        ok = (len(premises) == 2
              and premises[0].conclusion.antecedent == x
              and premises[0].conclusion.succedent == premises[1].conclusion.antecedent
              and premises[1].conclusion.succedent == y)
    elif rule == RULE_MONO:
        ok = (isinstance(x, Diamond) and isinstance(y, Diamond)
              and x.modality == y.modality and len(premises) == 1
              and premises[0].conclusion == Sequent(x.body, y.body))
    elif rule == RULE_TRANS:
        ok = (isinstance(x, Diamond) and isinstance(x.body, Diamond)
              and isinstance(y, Diamond) and not premises
              and x.modality == x.body.modality == y.modality
              and x.body.body == y.body)
    elif rule == RULE_DOWN:
        ok = (isinstance(x, Diamond) and isinstance(y, Diamond) and not premises
              and y.modality < x.modality and x.body == y.body)
    elif rule == RULE_PUSH:
        ok = (isinstance(x, And) and isinstance(x.left, Diamond)
              and isinstance(x.right, Diamond) and isinstance(y, Diamond)
              and isinstance(y.body, And) and not premises
              and x.right.modality < x.left.modality
              and y.modality == x.left.modality
              and y.body.left == x.left.body and y.body.right == x.right)
    if not ok:
        raise InvalidTrace(f"bad {rule} node: {node.conclusion}")


def trace_to_json(node: TraceNode) -> dict:
    return {
        "rule": node.rule,
        "conclusion": str(node.conclusion),
        "premises": [trace_to_json(p) for p in node.premises],
    }


def trace_from_json(data: dict) -> TraceNode:
    return TraceNode(
        data["rule"],
        parse_sequent(data["conclusion"]),
        tuple(trace_from_json(p) for p in data["premises"]),
    )
