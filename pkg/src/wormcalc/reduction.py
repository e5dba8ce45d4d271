"""Verification harness for the conservativity theorems.

Each check instantiates a universally quantified statement over a small,
reproducible universe of strictly positive formulas, asks the
derivability oracle about every instance, and assembles a report.  The
harness never certifies non-derivability: a derivable premise with no
family witness inside the truncation bounds is recorded as
``bounded-inconclusive``, a first-class status distinct from a
counterexample.  Exact-arithmetic checks (the cofinal family ones) can
produce genuine counterexamples.

Reports are reproducible byte for byte from (universe bounds, seed,
truncation K, depth, budget): instance order is the enumeration order,
every prove call uses a fresh search, and volatile data (wall time,
search statistics) stays out of the serialised form.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .formula import (
    And,
    Diamond,
    Formula,
    TOP as F_TOP,
    Var,
    conj,
    demote,
    print_formula,
    promote,
    q_formula,
    q_iter,
    worm_to_formula,
)
from .ordinal import (
    ONE,
    Ordinal,
    add,
    as_ordinal,
    fundamental_sequence,
    is_limit,
    is_successor,
    predecessor,
    print_ordinal,
)
from .rc import (
    DEFAULT_BUDGET,
    DEFAULT_DEPTH,
    ProofResult,
    Prover,
    ResourceExhausted,
    Sequent,
    TraceNode,
    trace_to_json,
)
from .worm import (
    TOP as W_TOP,
    TransfiniteModality,
    Worm,
    WormComparison,
    compare_worms,
    ordinal_value_gamma,
    print_worm,
)

# Instance statuses.
OK = "ok"
VACUOUS = "vacuous"
BOUNDED = "bounded-inconclusive"
COUNTEREXAMPLE = "counterexample"
SKIPPED = "skipped"
EXHAUSTED = "resource-exhausted"


class BadBounds(ValueError):
    """A family was requested with gamma >= zeta."""


@dataclass(frozen=True)
class Universe:
    """Bounds for enumerating worms and strictly positive formulas.

    Enumeration is exhaustive below the bounds; when sample_size is
    positive and the pool is larger, a seeded uniform draw (preserving
    enumeration order) trims it.
    """

    max_modality: Ordinal
    max_length: int
    variables: tuple[str, ...] = ("p",)
    seed: int = 0
    sample_size: int = 0

    def modality_alphabet(self) -> tuple[Ordinal, ...]:
        top = self.max_modality.as_int()
        if top is None:
            raise ValueError("transfinite universes need an explicit alphabet")
        return tuple(Ordinal.from_int(i) for i in range(top + 1))

    def worms(self, alphabet: tuple[Ordinal, ...] | None = None) -> list[Worm]:
        alphabet = self.modality_alphabet() if alphabet is None else alphabet
        out = [W_TOP]
        for length in range(1, self.max_length + 1):
            out.extend(Worm(combo) for combo in itertools.product(alphabet, repeat=length))
        return out

    def sp_pool(self, alphabet: tuple[Ordinal, ...] | None = None) -> list[Formula]:
        """T, the variables, all worms, and variable-and-worm conjunctions."""
        worms = [w for w in self.worms(alphabet) if not w.is_top]
        pool: list[Formula] = [F_TOP]
        pool.extend(Var(v) for v in self.variables)
        pool.extend(worm_to_formula(w) for w in worms)
        pool.extend(And(Var(v), worm_to_formula(w)) for v in self.variables for w in worms)
        return self.sample(pool)

    def sample(self, pool: list, size: int | None = None) -> list:
        size = self.sample_size if size is None else size
        if size and len(pool) > size:
            rng = random.Random(self.seed)
            keep = sorted(rng.sample(range(len(pool)), size))
            return [pool[i] for i in keep]
        return pool

    def as_dict(self) -> dict:
        return {
            "max_modality": print_ordinal(self.max_modality),
            "max_length": self.max_length,
            "variables": list(self.variables),
            "seed": self.seed,
            "sample_size": self.sample_size,
        }


@dataclass
class Instance:
    kind: str
    inputs: dict
    status: str
    witness_k: int | None = None
    trace: TraceNode | None = None
    renaming: dict | None = None
    detail: dict | None = None

    def as_dict(self, include_traces: bool = True) -> dict:
        trace = None
        if include_traces and self.trace is not None:
            trace = trace_to_json(self.trace)
        return {
            "kind": self.kind,
            "inputs": self.inputs,
            "status": self.status,
            "witness_k": self.witness_k,
            "trace": trace,
            "renaming": self.renaming,
            "detail": self.detail,
        }


@dataclass
class Report:
    theorem: str
    params: dict
    instances: list[Instance] = field(default_factory=list)
    wall_time: float = 0.0

    def count(self, status: str, kind: str | None = None) -> int:
        return sum(
            1
            for i in self.instances
            if i.status == status and (kind is None or i.kind == kind)
        )

    @property
    def summary(self) -> dict:
        statuses = {}
        for i in self.instances:
            statuses[i.status] = statuses.get(i.status, 0) + 1
        return {
            "instances": len(self.instances),
            "by_status": dict(sorted(statuses.items())),
            "counterexamples": self.count(COUNTEREXAMPLE),
            "failures": self.failures,
        }

    @property
    def failures(self) -> int:
        """Hard failures: counterexamples plus easy-direction misses."""
        hard = self.count(COUNTEREXAMPLE)
        for kind in ("easy", "aux", "ordering", "qmono", "push", "observation"):
            hard += self.count(BOUNDED, kind) + self.count(EXHAUSTED, kind)
        return hard

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self, include_traces: bool = True) -> dict:
        # wall_time is deliberately not serialised: reports must be
        # byte-identical across reruns and job counts.
        return {
            "theorem": self.theorem,
            "params": self.params,
            "instances": [i.as_dict(include_traces) for i in self.instances],
            "summary": self.summary,
        }


def report_to_json(report: Report, include_traces: bool = True) -> str:
    return json.dumps(report.as_dict(include_traces), indent=2, sort_keys=True) + "\n"


def report_to_jsonl(report: Report, include_traces: bool = True) -> str:
    head = {"theorem": report.theorem, "params": report.params}
    lines = [json.dumps(head, sort_keys=True)]
    lines.extend(
        json.dumps(i.as_dict(include_traces), sort_keys=True) for i in report.instances
    )
    lines.append(json.dumps({"summary": report.summary}, sort_keys=True))
    return "\n".join(lines) + "\n"


# --- oracle plumbing --------------------------------------------------------


def _prove_task(task):
    sequent, depth, budget = task
    prover = Prover(max_depth=depth, budget=budget)
    try:
        result = prover.prove(sequent)
    except ResourceExhausted:
        return EXHAUSTED, None, None
    status = OK if result.derivable else BOUNDED
    return status, result.trace, result.renaming.as_dict()


def _prove_all(sequents, depth, budget, jobs, prover: Prover | None = None):
    """Evaluate a batch of sequents; item order is preserved.

    With a caller-supplied shared prover (jobs must be 1) outcomes are
    identical but repeated subgoals are not re-searched; traces are then
    dropped, since cached proofs need not match fresh-search shapes.
    """
    tasks = [(s, depth, budget) for s in sequents]
    if prover is not None:
        out = []
        for s in sequents:
            try:
                result = prover.prove(s, depth, budget)
                out.append((OK if result.derivable else BOUNDED, None,
                            result.renaming.as_dict()))
            except ResourceExhausted:
                out.append((EXHAUSTED, None, None))
        return out
    if jobs <= 1:
        return [_prove_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(tasks) // (jobs * 4) or 1)
        return list(pool.map(_prove_task, tasks, chunksize=chunk))


def _roundtrip_exact(sequent: Sequent) -> bool:
    demoted, renaming = demote([sequent.antecedent, sequent.succedent], pin_zero=True)
    return promote(demoted, renaming) == [sequent.antecedent, sequent.succedent]


def _ftext(f: Formula) -> str:
    return print_formula(f)


# --- Q-families and the reduction property ----------------------------------


def q_family(n, phi: Formula, K: int) -> list[Formula]:
    """[Q_n^0(phi), ..., Q_n^K(phi)]; always K+1 members."""
    if K < 1:
        raise ValueError("K must be at least 1")
    n = as_ordinal(n)
    return [q_iter(n, k, phi) for k in range(K + 1)]


def _witness_scan(members, target, depth, budget, jobs, prover=None):
    """Minimal family index deriving the target, with its result triple."""
    results = _prove_all([Sequent(m, target) for m in members], depth, budget, jobs, prover)
    for k, result in enumerate(results):
        if result[0] == OK:
            return k, result
    if any(r[0] == EXHAUSTED for r in results):
        return None, (EXHAUSTED, None, None)
    return None, (BOUNDED, None, None)


def check_reduction(n, universe: Universe, K: int = 5, depth: int = DEFAULT_DEPTH,
                    budget: int = DEFAULT_BUDGET, jobs: int = 1,
                    prover: Prover | None = None) -> Report:
    """Test the reduction property: <n+1>phi is n-conservative over the
    iterated-consistency family {Q_n^k(phi)}.

    Easy direction: every family member follows from <n+1>phi.
    Conservation direction: every derivable <n>psi consequence of
    <n+1>phi has a minimal family witness.
    """
    n = as_ordinal(n)
    n_plus = add(n, ONE)
    if not (n_plus <= universe.max_modality):
        raise ValueError("universe.max_modality must cover n+1")
    started = time.monotonic()
    pool = universe.sp_pool()
    report = Report(
        theorem="reduction",
        params={"n": print_ordinal(n), "K": K, "depth": depth, "budget": budget,
                "universe": universe.as_dict()},
    )

    families = {id(phi): q_family(n, phi, K) for phi in pool}
    easy_seqs = [Sequent(Diamond(n_plus, phi), member)
                 for phi in pool for member in families[id(phi)]]
    easy_results = _prove_all(easy_seqs, depth, budget, jobs, prover)
    i = 0
    for phi in pool:
        for k in range(K + 1):
            status, trace, renaming = easy_results[i]
            i += 1
            report.instances.append(Instance(
                kind="easy",
                inputs={"phi": _ftext(phi), "k": k},
                status=status, witness_k=k, trace=trace, renaming=renaming,
            ))

    premises = [Sequent(Diamond(n_plus, phi), Diamond(n, psi))
                for phi in pool for psi in pool]
    premise_results = _prove_all(premises, depth, budget, jobs, prover)
    pending = []
    for (phi, psi), (status, _, _) in zip(itertools.product(pool, pool), premise_results):
        pending.append((phi, psi, status))

    for phi, psi, premise_status in pending:
        inputs = {"phi": _ftext(phi), "psi": _ftext(psi)}
        if premise_status == EXHAUSTED:
            report.instances.append(Instance("conservation", inputs, EXHAUSTED))
            continue
        if premise_status != OK:
            report.instances.append(Instance("conservation", inputs, VACUOUS))
            continue
        target = Diamond(n, psi)
        k, (status, trace, renaming) = _witness_scan(
            families[id(phi)], target, depth, budget, jobs, prover)
        report.instances.append(Instance(
            "conservation", inputs, OK if k is not None else status,
            witness_k=k, trace=trace, renaming=renaming,
        ))

    report.wall_time = time.monotonic() - started
    return report


def check_pij(j, n, universe: Universe, K: int = 5, depth: int = DEFAULT_DEPTH,
              budget: int = DEFAULT_BUDGET, jobs: int = 1,
              prover: Prover | None = None) -> Report:
    """Test the j-level consequence characterisation of <n+1>phi.

    The family is {<j>(phi /\\ Q_n^k(phi))}; consequences are <j>psi.
    Additionally checks the auxiliary derivations
    <j>(phi /\\ Q_n^{i+k}(phi)) |- Q_j^i(phi /\\ Q_n^k(phi)) for i+k <= K.
    """
    j, n = as_ordinal(j), as_ordinal(n)
    if not (j <= n):
        raise ValueError("j must be at most n")
    n_plus = add(n, ONE)
    started = time.monotonic()
    pool = universe.sp_pool()
    report = Report(
        theorem="pij",
        params={"j": print_ordinal(j), "n": print_ordinal(n), "K": K, "depth": depth,
                "budget": budget, "universe": universe.as_dict()},
    )

    def family(phi):
        return [Diamond(j, And(phi, q_iter(n, k, phi))) for k in range(K + 1)]

    families = {id(phi): family(phi) for phi in pool}
    easy_seqs = [Sequent(Diamond(n_plus, phi), member)
                 for phi in pool for member in families[id(phi)]]
    easy_results = _prove_all(easy_seqs, depth, budget, jobs, prover)
    i = 0
    for phi in pool:
        for k in range(K + 1):
            status, trace, renaming = easy_results[i]
            i += 1
            report.instances.append(Instance(
                "easy", {"phi": _ftext(phi), "k": k}, status,
                witness_k=k, trace=trace, renaming=renaming,
            ))

    premises = [Sequent(Diamond(n_plus, phi), Diamond(j, psi))
                for phi in pool for psi in pool]
    premise_results = _prove_all(premises, depth, budget, jobs, prover)
    for (phi, psi), (premise_status, _, _) in zip(
            itertools.product(pool, pool), premise_results):
        inputs = {"phi": _ftext(phi), "psi": _ftext(psi)}
        if premise_status == EXHAUSTED:
            report.instances.append(Instance("conservation", inputs, EXHAUSTED))
            continue
        if premise_status != OK:
            report.instances.append(Instance("conservation", inputs, VACUOUS))
            continue
        target = Diamond(j, psi)
        k, (status, trace, renaming) = _witness_scan(
            families[id(phi)], target, depth, budget, jobs, prover)
        report.instances.append(Instance(
            "conservation", inputs, OK if k is not None else status,
            witness_k=k, trace=trace, renaming=renaming,
        ))

    aux_seqs = []
    aux_keys = []
    for phi in pool:
        for i_ in range(K + 1):
            for k in range(K + 1 - i_):
                lhs = Diamond(j, And(phi, q_iter(n, i_ + k, phi)))
                rhs = q_iter(j, i_, And(phi, q_iter(n, k, phi)))
                aux_seqs.append(Sequent(lhs, rhs))
                aux_keys.append((phi, i_, k))
    aux_results = _prove_all(aux_seqs, depth, budget, jobs, prover)
    for (phi, i_, k), (status, trace, renaming) in zip(aux_keys, aux_results):
        report.instances.append(Instance(
            "aux", {"phi": _ftext(phi), "i": i_, "k": k}, status,
            trace=trace, renaming=renaming,
        ))

    report.wall_time = time.monotonic() - started
    return report


def check_observation_pij(universe: Universe, n, j, depth: int = DEFAULT_DEPTH,
                          K: int = 4, budget: int = DEFAULT_BUDGET, jobs: int = 1,
                          prover: Prover | None = None) -> Report:
    """Spot-check that n-equivalent, n-consistent axiom sets agree on
    <j>-consequences (j <= n), over a bounded consequence pool.

    Pairs are (<n+1>phi, conjunction of the Q_n-family of phi), plus an
    identical pair; n-equivalence over the pool is established by the
    oracle before the j-level comparison runs, and pairs failing the
    side conditions are counted as skipped.
    """
    j, n = as_ordinal(j), as_ordinal(n)
    if not (j <= n):
        raise ValueError("j must be at most n")
    n_plus = add(n, ONE)
    started = time.monotonic()
    pool = universe.sp_pool()
    consequences = universe.sample(pool, min(12, len(pool)))
    bases = universe.sample(pool, min(6, len(pool)))
    pairs = [(Diamond(n_plus, phi), conj(q_family(n, phi, K))) for phi in bases]
    if bases:
        first = Diamond(n_plus, bases[0])
        pairs.append((first, first))

    report = Report(
        theorem="observation-pij",
        params={"j": print_ordinal(j), "n": print_ordinal(n), "K": K, "depth": depth,
                "budget": budget, "universe": universe.as_dict()},
    )

    for a, b in pairs:
        inputs = {"A": _ftext(a), "B": _ftext(b)}
        side, _, _ = _prove_all([Sequent(a, Diamond(n, F_TOP))], depth, budget, jobs, prover)[0]
        if side != OK:
            report.instances.append(Instance(
                "observation", inputs, SKIPPED, detail={"reason": "no-n-consistency"}))
            continue
        n_seqs = [Sequent(a, Diamond(n, psi)) for psi in consequences]
        n_seqs += [Sequent(b, Diamond(n, psi)) for psi in consequences]
        n_results = _prove_all(n_seqs, depth, budget, jobs, prover)
        half = len(consequences)
        equivalent = all(
            n_results[idx][0] == n_results[half + idx][0] for idx in range(half)
        )
        if not equivalent:
            report.instances.append(Instance(
                "observation", inputs, SKIPPED, detail={"reason": "not-n-equivalent"}))
            continue
        j_seqs = [Sequent(a, Diamond(j, psi)) for psi in consequences]
        j_seqs += [Sequent(b, Diamond(j, psi)) for psi in consequences]
        j_results = _prove_all(j_seqs, depth, budget, jobs, prover)
        separating = [
            _ftext(consequences[idx])
            for idx in range(half)
            if j_results[idx][0] != j_results[half + idx][0]
        ]
        status = OK if not separating else BOUNDED
        report.instances.append(Instance(
            "observation", inputs, status,
            detail={"separating": separating} if separating else None,
        ))

    report.wall_time = time.monotonic() - started
    return report


# --- cofinal families and the transfinite reduction property ----------------


@dataclass(frozen=True)
class CofinalFamily:
    """A rule producing worms approaching <zeta>T from below in <_gamma.

    ``declared_limit`` is the order value of <zeta>T relative to gamma
    when that value is representable below epsilon-zero (finite zeta);
    for transfinite zeta it is None and all order checks run through the
    joint renaming instead.
    """

    gamma: Ordinal
    zeta: Ordinal
    kind: str  # "successor" | "limit" | "explicit"
    xi: Ordinal | None = None
    declared_limit: Ordinal | None = None
    explicit: tuple[Worm, ...] = ()

    def worm(self, k: int) -> Worm:
        if self.kind == "explicit":
            return self.explicit[min(k, len(self.explicit) - 1)]
        if self.kind == "successor":
            return Worm((self.gamma,) + (self.xi,) * k)
        # Limit rule: k-th distinct entry of the lifted fundamental
        # sequence (entries below gamma lift to gamma, which collapses a
        # finite prefix; duplicates are skipped to keep the family
        # strictly increasing).
        seen: list[Ordinal] = []
        index = 0
        while True:
            entry = fundamental_sequence(self.zeta, index)
            if entry < self.gamma:
                entry = self.gamma
            if entry not in seen:
                seen.append(entry)
                if len(seen) == k + 1:
                    return Worm((self.gamma, entry))
            index += 1


def cofinal_family(gamma, zeta, K: int = 5) -> CofinalFamily:
    """The canonical <_gamma-cofinal family below <zeta>T.

    For zeta = xi+1 the k-th worm is <gamma><xi>^k T; for limit zeta it
    is <gamma><zeta[k]>T with entries lifted to gamma and de-duplicated.
    """
    gamma, zeta = as_ordinal(gamma), as_ordinal(zeta)
    if not (gamma < zeta):
        raise BadBounds(f"need gamma < zeta, got {gamma} >= {zeta}")
    try:
        declared = ordinal_value_gamma(gamma, Worm((zeta,)))
    except TransfiniteModality:
        declared = None
    if is_successor(zeta):
        family = CofinalFamily(gamma, zeta, "successor", xi=predecessor(zeta),
                               declared_limit=declared)
    else:
        family = CofinalFamily(gamma, zeta, "limit", declared_limit=declared)
    for k in range(K + 1):
        family.worm(k)  # fail early if the rule cannot produce K+1 members
    return family


def check_cofinality(family: CofinalFamily, K: int = 5,
                     kprime: int | None = None) -> Report:
    """Certify truncated cofinality of a family below <zeta>T.

    (a) strict o_gamma-increase along k <= K; (b) every member strictly
    below <zeta>T; (c) dominance: the k-th canonical ladder step is
    reached by some member with index <= K' (default 2K).  All
    comparisons run through the joint order-preserving renaming; when
    the declared limit is representable, (c) is additionally checked
    exactly against its fundamental sequence.
    """
    started = time.monotonic()
    kprime = 2 * K if kprime is None else kprime
    gamma, zeta = family.gamma, family.zeta
    members = [family.worm(k) for k in range(kprime + 1)]
    target = Worm((zeta,))
    report = Report(
        theorem="cofinal",
        params={"gamma": print_ordinal(gamma), "zeta": print_ordinal(zeta),
                "K": K, "kprime": kprime, "kind": family.kind},
    )

    for k in range(K):
        cmp = compare_worms(gamma, members[k], members[k + 1])
        report.instances.append(Instance(
            "increase", {"k": k, "worm": print_worm(members[k]),
                         "next": print_worm(members[k + 1])},
            OK if cmp is WormComparison.LESS else COUNTEREXAMPLE,
        ))

    for k in range(K + 1):
        cmp = compare_worms(gamma, members[k], target)
        report.instances.append(Instance(
            "bound", {"k": k, "worm": print_worm(members[k]),
                      "target": print_worm(target)},
            OK if cmp is WormComparison.LESS else COUNTEREXAMPLE,
        ))

    canonical = cofinal_family(gamma, zeta, K)
    for k in range(K + 1):
        ref = canonical.worm(k)
        witness = None
        for kp in range(kprime + 1):
            cmp = compare_worms(gamma, ref, members[kp])
            if cmp in (WormComparison.LESS, WormComparison.EQUIVALENT):
                witness = kp
                break
        report.instances.append(Instance(
            "dominance", {"k": k, "ladder": print_worm(ref)},
            OK if witness is not None else COUNTEREXAMPLE,
            witness_k=witness,
        ))

    if family.declared_limit is not None:
        values = []
        computable = True
        try:
            values = [ordinal_value_gamma(gamma, m) for m in members]
        except TransfiniteModality:
            computable = False
        if computable:
            for k in range(K + 1):
                step = fundamental_sequence(family.declared_limit, k)
                witness = next(
                    (kp for kp, v in enumerate(values) if step <= v), None)
                report.instances.append(Instance(
                    "dominance-exact",
                    {"k": k, "step": print_ordinal(step)},
                    OK if witness is not None else COUNTEREXAMPLE,
                    witness_k=witness,
                    detail={"member_value": print_ordinal(values[witness])}
                    if witness is not None else None,
                ))

    report.wall_time = time.monotonic() - started
    return report


def check_generalized_reduction(gamma, zeta, universe: Universe, K: int = 4,
                                depth: int = DEFAULT_DEPTH, budget: int = DEFAULT_BUDGET,
                                jobs: int = 1, prover: Prover | None = None) -> Report:
    """Test the transfinite reduction property <zeta>psi ==_gamma
    Q(family, psi), with all sequents routed through internal renaming.

    Also checks the ordering facts <zeta>T |- <gamma><theta>^k T used in
    its proof, and records that the demotion round-trip is exact on
    every instance.
    """
    gamma, zeta = as_ordinal(gamma), as_ordinal(zeta)
    if not (gamma < zeta):
        raise BadBounds(f"need gamma < zeta, got {gamma} >= {zeta}")
    started = time.monotonic()
    family = cofinal_family(gamma, zeta, K)
    members = [family.worm(k) for k in range(K + 1)]
    alphabet_set = {gamma}
    for m in members:
        alphabet_set.update(m.modalities)
    alphabet = tuple(sorted(alphabet_set))
    pool = universe.sp_pool(alphabet=alphabet)
    report = Report(
        theorem="gen-reduction",
        params={"gamma": print_ordinal(gamma), "zeta": print_ordinal(zeta), "K": K,
                "depth": depth, "budget": budget, "universe": universe.as_dict(),
                "alphabet": [print_ordinal(a) for a in alphabet]},
    )

    easy_seqs = []
    easy_keys = []
    for psi in pool:
        for k, m in enumerate(members):
            easy_seqs.append(Sequent(Diamond(zeta, psi), q_formula(m, psi)))
            easy_keys.append((psi, k))
    easy_results = _prove_all(easy_seqs, depth, budget, jobs, prover)
    for (psi, k), seq, (status, trace, renaming) in zip(easy_keys, easy_seqs, easy_results):
        report.instances.append(Instance(
            "easy", {"psi": _ftext(psi), "k": k}, status,
            witness_k=k, trace=trace, renaming=renaming,
            detail={"roundtrip_exact": _roundtrip_exact(seq)},
        ))

    premises = [Sequent(Diamond(zeta, psi), Diamond(gamma, phi))
                for psi in pool for phi in pool]
    premise_results = _prove_all(premises, depth, budget, jobs, prover)
    for (psi, phi), seq, (premise_status, _, _) in zip(
            itertools.product(pool, pool), premises, premise_results):
        inputs = {"psi": _ftext(psi), "phi": _ftext(phi)}
        detail = {"roundtrip_exact": _roundtrip_exact(seq)}
        if premise_status == EXHAUSTED:
            report.instances.append(Instance("conservation", inputs, EXHAUSTED, detail=detail))
            continue
        if premise_status != OK:
            report.instances.append(Instance("conservation", inputs, VACUOUS, detail=detail))
            continue
        target = Diamond(gamma, phi)
        q_members = [q_formula(m, psi) for m in members]
        k, (status, trace, renaming) = _witness_scan(
            q_members, target, depth, budget, jobs, prover)
        report.instances.append(Instance(
            "conservation", inputs, OK if k is not None else status,
            witness_k=k, trace=trace, renaming=renaming, detail=detail,
        ))

    ordering_seqs = []
    ordering_keys = []
    for theta in alphabet:
        for k in range(K + 1):
            ladder = Worm((gamma,) + (theta,) * k)
            ordering_seqs.append(Sequent(worm_to_formula(Worm((zeta,))),
                                         worm_to_formula(ladder)))
            ordering_keys.append((theta, k))
    ordering_results = _prove_all(ordering_seqs, depth, budget, jobs, prover)
    for (theta, k), (status, trace, renaming) in zip(ordering_keys, ordering_results):
        report.instances.append(Instance(
            "ordering", {"theta": print_ordinal(theta), "k": k}, status,
            trace=trace, renaming=renaming,
        ))

    report.wall_time = time.monotonic() - started
    return report


# --- structural lemmas -------------------------------------------------------


def check_qmono(universe: Universe, depth: int = DEFAULT_DEPTH,
                phis: list[Formula] | None = None, budget: int = DEFAULT_BUDGET,
                jobs: int = 1, prover: Prover | None = None) -> Report:
    """Test Q-monotonicity: A |- B forces Q(A, phi) |- Q(B, phi).

    Worm pairs are pre-filtered by the exact order (A |- B requires
    o(A) >= o(B)), confirmed by the oracle, and the implication is then
    required for every phi.
    """
    started = time.monotonic()
    worms = universe.worms()
    if phis is None:
        phis = [Var(v) for v in universe.variables]
    report = Report(
        theorem="qmono",
        params={"depth": depth, "budget": budget, "universe": universe.as_dict(),
                "phis": [_ftext(p) for p in phis]},
    )

    candidates = [
        (a, b)
        for a in worms
        for b in worms
        if compare_worms(Ordinal(), a, b) is not WormComparison.LESS
    ]
    premise_results = _prove_all(
        [Sequent(worm_to_formula(a), worm_to_formula(b)) for a, b in candidates],
        depth, budget, jobs, prover)
    derivable_pairs = [
        pair for pair, (status, _, _) in zip(candidates, premise_results)
        if status == OK
    ]
    report.params["scanned_pairs"] = len(candidates)
    report.params["derivable_pairs"] = len(derivable_pairs)

    q_seqs = []
    q_keys = []
    for a, b in derivable_pairs:
        for phi in phis:
            q_seqs.append(Sequent(q_formula(a, phi), q_formula(b, phi)))
            q_keys.append((a, b, phi))
    q_results = _prove_all(q_seqs, depth, budget, jobs, prover)
    for (a, b, phi), (status, _, _) in zip(q_keys, q_results):
        report.instances.append(Instance(
            "qmono",
            {"A": print_worm(a), "B": print_worm(b), "phi": _ftext(phi)},
            status,
        ))

    report.wall_time = time.monotonic() - started
    return report


def check_push_diamond(universe: Universe, depth: int = DEFAULT_DEPTH,
                       pairs: list[tuple] | None = None, budget: int = DEFAULT_BUDGET,
                       jobs: int = 1, prover: Prover | None = None) -> Report:
    """Test both directions of <g>(phi /\\ <z>psi) == <g>phi /\\ <z>psi
    for z < g, over sampled strictly positive phi, psi."""
    started = time.monotonic()
    if pairs is None:
        alphabet = universe.modality_alphabet()
        pairs = [(z, g) for z in alphabet for g in alphabet if z < g]
    pairs = [(as_ordinal(z), as_ordinal(g)) for z, g in pairs]
    pool = universe.sp_pool()
    report = Report(
        theorem="push-diamond",
        params={"depth": depth, "budget": budget, "universe": universe.as_dict(),
                "pairs": [[print_ordinal(z), print_ordinal(g)] for z, g in pairs]},
    )

    seqs = []
    keys = []
    for zeta, gamma in pairs:
        for phi, psi in itertools.product(pool, pool):
            folded = Diamond(gamma, And(phi, Diamond(zeta, psi)))
            unfolded = And(Diamond(gamma, phi), Diamond(zeta, psi))
            seqs.append(Sequent(folded, unfolded))
            keys.append((zeta, gamma, phi, psi, "out"))
            seqs.append(Sequent(unfolded, folded))
            keys.append((zeta, gamma, phi, psi, "in"))
    results = _prove_all(seqs, depth, budget, jobs, prover)
    for (zeta, gamma, phi, psi, direction), (status, _, renaming) in zip(keys, results):
        report.instances.append(Instance(
            "push",
            {"zeta": print_ordinal(zeta), "gamma": print_ordinal(gamma),
             "phi": _ftext(phi), "psi": _ftext(psi), "direction": direction},
            status, renaming=renaming,
        ))

    report.wall_time = time.monotonic() - started
    return report
