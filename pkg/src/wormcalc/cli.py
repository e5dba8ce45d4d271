"""Command-line front end.

Subcommands: ord, cmp, prove, verify, qexpand, demote, head, shift,
ordcalc.  Inputs use the ASCII grammars (w for omega, T for top);
--unicode switches the pretty-printed output.  stdout carries results
and JSON, stderr carries diagnostics.  Exit codes: 0 success (and, for
verify, no failures), 1 verification failure or proof not found,
2 parse/usage error, 3 domain error (e.g. a transfinite modality where
a finite one is required), 4 resource budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import reduction
from .formula import (
    demote as demote_formulas,
    parse_formula,
    print_formula,
    q_formula,
    q_iter,
    simplify_for_display,
)
from .ordinal import OrdinalError, ParseError, parse_ordinal, print_ordinal
from .rc import (
    DEFAULT_BUDGET,
    DEFAULT_DEPTH,
    Prover,
    ResourceExhausted,
    parse_sequent,
    trace_to_json,
)
from .worm import (
    WormComparison,
    WormError,
    compare_worms,
    head,
    ordinal_value,
    parse_worm,
    print_worm,
    shift_down,
    shift_up,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_BUDGET = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wormcalc",
        description="Worm calculus toolkit: ordinal notations, worm orders, "
                    "a strictly positive derivability prover, and "
                    "conservativity verification runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ord", help="ordinal value of a worm")
    p.add_argument("worm")
    p.add_argument("--json", action="store_true")
    p.add_argument("--unicode", action="store_true")

    p = sub.add_parser("cmp", help="compare two worms in the gamma order")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--gamma", default="0")

    p = sub.add_parser("prove", help="search for a derivation of a sequent")
    p.add_argument("sequent")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--trace-out", help="write the trace as JSON to this file")

    p = sub.add_parser("verify", help="run a verification report")
    p.add_argument("theorem", choices=[
        "reduction", "pij", "observation", "gen-reduction", "cofinal",
        "qmono", "push-diamond",
    ])
    p.add_argument("--n", default="0")
    p.add_argument("--j", default="0")
    p.add_argument("--gamma", default="0")
    p.add_argument("--zeta", default="1")
    p.add_argument("--K", type=int, default=5)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--max-mod", default="1")
    p.add_argument("--max-len", type=int, default=2)
    p.add_argument("--vars", default="p")
    p.add_argument("--sample", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--traces", choices=["inline", "sidecar", "none"], default="inline")
    p.add_argument("--jsonl", action="store_true")
    p.add_argument("--unicode", action="store_true")

    p = sub.add_parser("qexpand", help="expand a Q-formula")
    p.add_argument("--n", default="0")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--phi", default="T")
    p.add_argument("--worm", help="expand Q(worm, phi) instead of Q_n^k(phi)")
    p.add_argument("--simplify", action="store_true")
    p.add_argument("--unicode", action="store_true")

    p = sub.add_parser("demote", help="rename modalities onto an initial segment")
    p.add_argument("formulas", nargs="+")
    p.add_argument("--pin-zero", action="store_true")
    p.add_argument("--unicode", action="store_true")

    p = sub.add_parser("head", help="gamma-head of a worm")
    p.add_argument("worm")
    p.add_argument("--gamma", default="0")
    p.add_argument("--unicode", action="store_true")

    p = sub.add_parser("shift", help="shift a worm's modalities up or down")
    p.add_argument("worm")
    p.add_argument("--alpha", default="1")
    direction = p.add_mutually_exclusive_group()
    direction.add_argument("--up", action="store_true")
    direction.add_argument("--down", action="store_true")
    p.add_argument("--unicode", action="store_true")

    p = sub.add_parser("ordcalc", help="evaluate an ordinal expression to CNF")
    p.add_argument("expression")
    p.add_argument("--unicode", action="store_true")

    return parser


def _universe(args) -> reduction.Universe:
    return reduction.Universe(
        max_modality=parse_ordinal(args.max_mod),
        max_length=args.max_len,
        variables=tuple(v.strip() for v in args.vars.split(",") if v.strip()),
        seed=args.seed,
        sample_size=args.sample,
    )


def _run_verify(args) -> int:
    universe = _universe(args)
    common = dict(depth=args.depth, budget=args.budget, jobs=args.jobs)
    if args.theorem == "reduction":
        report = reduction.check_reduction(
            parse_ordinal(args.n), universe, K=args.K, **common)
    elif args.theorem == "pij":
        report = reduction.check_pij(
            parse_ordinal(args.j), parse_ordinal(args.n), universe, K=args.K, **common)
    elif args.theorem == "observation":
        report = reduction.check_observation_pij(
            universe, parse_ordinal(args.n), parse_ordinal(args.j),
            depth=args.depth, K=args.K, budget=args.budget, jobs=args.jobs)
    elif args.theorem == "gen-reduction":
        report = reduction.check_generalized_reduction(
            parse_ordinal(args.gamma), parse_ordinal(args.zeta), universe,
            K=args.K, **common)
    elif args.theorem == "cofinal":
        family = reduction.cofinal_family(
            parse_ordinal(args.gamma), parse_ordinal(args.zeta), K=args.K)
        report = reduction.check_cofinality(family, K=args.K)
    elif args.theorem == "qmono":
        report = reduction.check_qmono(universe, **common)
    elif args.theorem == "push-diamond":
        report = reduction.check_push_diamond(universe, **common)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.theorem)

    include = args.traces == "inline"
    render = reduction.report_to_jsonl if args.jsonl else reduction.report_to_json
    text = render(report, include_traces=include)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    if args.traces == "sidecar" and args.out:
        sidecar = args.out + ".traces.jsonl"
        with open(sidecar, "w") as handle:
            for idx, inst in enumerate(report.instances):
                if inst.trace is not None:
                    handle.write(json.dumps(
                        {"instance": idx, "trace": trace_to_json(inst.trace)},
                        sort_keys=True) + "\n")
        print(f"wrote {sidecar}", file=sys.stderr)
    print(f"failures={report.failures} wall={report.wall_time:.2f}s", file=sys.stderr)
    return EXIT_OK if report.failures == 0 else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "ord":
            value = ordinal_value(parse_worm(args.worm))
            text = print_ordinal(value, args.unicode)
            if args.json:
                print(json.dumps({"worm": args.worm, "ordinal": text}, sort_keys=True))
            else:
                print(text)
            return EXIT_OK

        if args.command == "cmp":
            cmp = compare_worms(parse_ordinal(args.gamma),
                                parse_worm(args.a), parse_worm(args.b))
            print({WormComparison.LESS: "<", WormComparison.EQUIVALENT: "=",
                   WormComparison.GREATER: ">"}[cmp])
            return EXIT_OK

        if args.command == "prove":
            prover = Prover(max_depth=args.depth, budget=args.budget)
            result = prover.prove(parse_sequent(args.sequent))
            print(result.status)
            if args.trace_out and result.trace is not None:
                with open(args.trace_out, "w") as handle:
                    json.dump(trace_to_json(result.trace), handle, indent=2,
                              sort_keys=True)
                    handle.write("\n")
            return EXIT_OK if result.derivable else EXIT_FAIL

        if args.command == "verify":
            return _run_verify(args)

        if args.command == "qexpand":
            phi = parse_formula(args.phi)
            if args.worm:
                f = q_formula(parse_worm(args.worm), phi)
            else:
                f = q_iter(parse_ordinal(args.n), args.k, phi)
            if args.simplify:
                f = simplify_for_display(f)
            print(print_formula(f, args.unicode))
            return EXIT_OK

        if args.command == "demote":
            formulas = [parse_formula(t) for t in args.formulas]
            demoted, renaming = demote_formulas(formulas, pin_zero=args.pin_zero)
            print(json.dumps({
                "formulas": [print_formula(f, args.unicode) for f in demoted],
                "renaming": renaming.as_dict(),
            }, sort_keys=True))
            return EXIT_OK

        if args.command == "head":
            worm = head(parse_ordinal(args.gamma), parse_worm(args.worm))
            print(print_worm(worm, args.unicode))
            return EXIT_OK

        if args.command == "shift":
            worm = parse_worm(args.worm)
            alpha = parse_ordinal(args.alpha)
            worm = shift_down(alpha, worm) if args.down else shift_up(alpha, worm)
            print(print_worm(worm, args.unicode))
            return EXIT_OK

        if args.command == "ordcalc":
            print(print_ordinal(parse_ordinal(args.expression), args.unicode))
            return EXIT_OK

    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceExhausted as exc:
        print(f"resource exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (WormError, OrdinalError, reduction.BadBounds, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
