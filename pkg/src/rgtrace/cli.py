"""Command-line front end.

Modes:

* ``laws``    seeded sweep of the language-algebra laws
* ``axioms``  seeded sweep of the interference axioms
* ``verify``  check a specification against a program, directly or via an
  outline file
* ``findp``   the packaged parallel least-index search example
* ``dump``    print a program's denotation, one word per line

Exit codes: 0 all checks passed, 1 a check failed, 2 configuration or
parse error, 3 bound insufficient (a search was cut off before
saturation; the bounded verdict passed but says nothing beyond the
bound).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass

from .interference import StateSpace
from .lang import serialize
from .laws import (
    decider_agreement_suite,
    interference_axiom_suite,
    language_law_suite,
    residual_law_suite,
)
from .programs import command_vars, denote, pred_vars
from .report import Report
from .syntax import ParseError, SpecText, build_relation, parse_program, parse_spec
from .verify import (
    NodeReport,
    ProofNode,
    Quintuple,
    brute_node,
    check_outline,
    findp_suite,
)

DEFAULT_STATE_CEILING = 4096

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_BOUND = 3


@dataclass
class RunConfig:
    mode: str
    domain_size: int
    variables: tuple[str, ...]
    bound: int
    seed: int
    report: str
    max_states: int = DEFAULT_STATE_CEILING


class ConfigError(ValueError):
    pass


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rgtrace",
        description="Bounded rely-guarantee checking over trace languages.",
    )
    ap.add_argument(
        "--mode",
        choices=["laws", "axioms", "verify", "findp", "dump"],
        default="laws",
        help="what to run (default: laws)",
    )
    ap.add_argument("--domain", type=int, default=3, metavar="N",
                    help="domain size: each variable ranges over 0..N-1 (default 3)")
    ap.add_argument("--vars", default=None, metavar="a,b,c",
                    help="variable names; defaults to the variables mentioned in the inputs")
    ap.add_argument("--bound", type=int, default=4, metavar="L",
                    help="trace length bound (default 4)")
    ap.add_argument("--seed", type=int, default=0, metavar="S",
                    help="seed for the randomized sweeps (default 0)")
    ap.add_argument("--trials", type=int, default=200, metavar="T",
                    help="trials per randomized sweep (default 200)")
    ap.add_argument("--program", metavar="FILE", help="program file (verify/dump)")
    ap.add_argument("--spec", metavar="FILE", help="specification file (verify)")
    ap.add_argument("--outline", metavar="FILE", help="proof outline file, JSON (verify)")
    ap.add_argument("--report", choices=["text", "structured"], default="text",
                    help="report format (default text)")
    ap.add_argument("--dump", action="store_true",
                    help="shorthand for --mode dump")
    ap.add_argument("--max-states", type=int, default=DEFAULT_STATE_CEILING,
                    help=f"state-space ceiling (default {DEFAULT_STATE_CEILING})")
    return ap


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _space_for(config: RunConfig, mentioned: set[str]) -> StateSpace:
    if config.variables:
        unknown = mentioned - set(config.variables)
        if unknown:
            raise ConfigError(f"variables not declared with --vars: {sorted(unknown)}")
        names = config.variables
    else:
        names = tuple(sorted(mentioned)) or ("x",)
    count = config.domain_size ** len(names)
    if count > config.max_states:
        raise ConfigError(
            f"state space has {count} states, above the ceiling {config.max_states};"
            " shrink --domain or --vars, or raise --max-states"
        )
    if config.domain_size < 2:
        raise ConfigError("--domain must be at least 2")
    if config.bound < 1:
        raise ConfigError("--bound must be at least 1")
    return StateSpace(names, config.domain_size)


def _emit(config: RunConfig, payload: dict, text: str, elapsed: float) -> None:
    if config.report == "structured":
        document = {
            "config": {
                "mode": config.mode,
                "domain": config.domain_size,
                "vars": list(config.variables),
                "bound": config.bound,
                "seed": config.seed,
            },
            "elapsed_seconds": round(elapsed, 6),
        }
        document.update(payload)
        print(json.dumps(document, indent=2, sort_keys=True))
    else:
        print(text)
        print(f"elapsed: {elapsed:.3f}s")


def _report_exit(report: Report) -> int:
    return EXIT_PASS if report.passed else EXIT_FAIL


def _outline_from_json(doc: dict, space: StateSpace) -> ProofNode:
    try:
        rule = doc["rule"]
        prog = parse_program(doc["program"])
        spec = parse_spec(doc["spec"])
    except KeyError as exc:
        raise ConfigError(f"outline node misses key {exc}") from exc
    quint = _materialize_spec(space, spec, prog)
    premises = [_outline_from_json(ch, space) for ch in doc.get("premises", [])]
    return ProofNode(rule, quint, premises)


def _materialize_spec(space: StateSpace, spec: SpecText, prog) -> Quintuple:
    rely = build_relation(space, spec.rely_terms)
    guar = build_relation(space, spec.guar_terms)
    return Quintuple(rely, guar, spec.pre, spec.post, prog)


def _mentioned_in_spec(spec: SpecText) -> set[str]:
    out: set[str] = set(pred_vars(spec.pre.pred)) | set(pred_vars(spec.post.pred))
    for terms in (spec.rely_terms, spec.guar_terms):
        for term in terms:
            match term:
                case ("unchanged", names):
                    out |= set(names)
                case ("preserves", pred):
                    out |= set(pred_vars(pred))
                case ("increasing", name) | ("decreasing", name):
                    out.add(name)
    return out


def run(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    mode = "dump" if args.dump else args.mode
    config = RunConfig(
        mode=mode,
        domain_size=args.domain,
        variables=tuple(v.strip() for v in args.vars.split(",") if v.strip()) if args.vars else (),
        bound=args.bound,
        seed=args.seed,
        report=args.report,
        max_states=args.max_states,
    )
    started = time.perf_counter()
    try:
        if mode == "laws":
            return _run_laws(config, args.trials, started)
        if mode == "axioms":
            return _run_axioms(config, args.trials, started)
        if mode == "verify":
            return _run_verify(config, args, started)
        if mode == "findp":
            return _run_findp(config, started)
        return _run_dump(config, args, started)
    except (ConfigError, ParseError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _run_laws(config: RunConfig, trials: int, started: float) -> int:
    rng = random.Random(config.seed)
    report = language_law_suite(rng, trials, n_states=config.domain_size, bound=config.bound)
    report.extend(residual_law_suite(rng, max(20, trials // 10), bound=min(3, config.bound)))
    _emit(config, report.to_dict(), report.render(), time.perf_counter() - started)
    return _report_exit(report)


def _run_axioms(config: RunConfig, trials: int, started: float) -> int:
    rng = random.Random(config.seed)
    report = interference_axiom_suite(
        rng, trials, n_states=config.domain_size, bound=config.bound
    )
    report.extend(decider_agreement_suite(rng, max(50, trials // 4)))
    _emit(config, report.to_dict(), report.render(), time.perf_counter() - started)
    return _report_exit(report)


def _run_verify(config: RunConfig, args, started: float) -> int:
    if not args.program or not args.spec:
        raise ConfigError("verify mode needs --program and --spec")
    prog = parse_program(_read(args.program))
    spec = parse_spec(_read(args.spec))
    mentioned = set(command_vars(prog)) | _mentioned_in_spec(spec)
    space = _space_for(config, mentioned)
    if config.bound < 2:
        raise ConfigError("verify mode needs --bound at least 2")

    if args.outline:
        doc = json.loads(_read(args.outline))
        root = _outline_from_json(doc, space)
    else:
        quint = _materialize_spec(space, spec, prog)
        root = brute_node(quint.rely, quint.guar, quint.pre, quint.post, quint.prog)
    outcome = check_outline(space, root, config.bound)
    _emit(config, {"outline": outcome.to_dict()}, outcome.render(), time.perf_counter() - started)
    if not outcome.passed:
        return EXIT_FAIL
    if outcome.bound_insufficient:
        return EXIT_BOUND
    return EXIT_PASS


def _run_findp(config: RunConfig, started: float) -> int:
    report = findp_suite(length=2, bound=max(config.bound, 2), domain_size=5)
    texts = []
    for case in report.cases:
        mark = "ok  " if case.passed else "FAIL"
        extra = "  (bound insufficient)" if case.bound_insufficient else ""
        texts.append(f"[{mark}] pattern {''.join('1' if b else '0' for b in case.pattern)}{extra}")
    _emit(config, report.to_dict(), "\n".join(texts), time.perf_counter() - started)
    if not report.passed:
        return EXIT_FAIL
    if report.bound_insufficient:
        return EXIT_BOUND
    return EXIT_PASS


def _run_dump(config: RunConfig, args, started: float) -> int:
    if not args.program:
        raise ConfigError("dump mode needs --program")
    prog = parse_program(_read(args.program))
    space = _space_for(config, set(command_vars(prog)))
    text = serialize(denote(space, prog, config.bound))
    _emit(config, {"words": text.splitlines()}, text, time.perf_counter() - started)
    return EXIT_PASS


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
