"""Command-line entry point.

Exit codes: 0 success, 1 semantic failure, 2 input error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
import warnings
from pathlib import Path

from .equilibria import check_acyclic, s_reduct
from .evolution import (
    GroundedEquilibriumError,
    evolving_grounded_equilibrium,
    evolving_wfs,
    first_violation,
)
from .kernel import BridgeRule, Emcs, EmcsError, validate
from .logics.programs import Reduct
from .matching import complete
from .oracle import OracleBoundError, enumerate_equilibria, minimal_equilibria, verify_props
from .syntax import (
    ObservationError,
    ParseError,
    VocabularyInferenceWarning,
    parse_observations,
    parse_states,
    parse_system,
    serialize_system,
)

log = logging.getLogger("emcs")


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _load_system(path: str) -> Emcs:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", VocabularyInferenceWarning)
        try:
            system = parse_system(_read(path))
        except ParseError as e:
            raise InputError(f"{path}: {e}") from None
    for w in caught:
        print(f"{path}: warning: {w.message}", file=sys.stderr)
    return system


def _load_obs(path: str, system: Emcs):
    try:
        return parse_observations(_read(path), system)
    except ObservationError as e:
        raise InputError(f"{path}: {e}") from None


def _load_states(path: str, system: Emcs):
    try:
        return parse_states(_read(path), system)
    except ObservationError as e:
        raise InputError(f"{path}: {e}") from None


def _emit(rec: dict, out=None):
    print(json.dumps(rec, sort_keys=False), file=out or sys.stdout)


def cmd_validate(args) -> int:
    system = _load_system(args.spec)
    diags = validate(system)
    for d in diags:
        print(f"{args.spec}: {d}", file=sys.stderr)
    if diags:
        return 1
    print(f"{args.spec}: ok ({len(system.contexts)} contexts, "
          f"{'acyclic' if check_acyclic(system) else 'cyclic'})")
    return 0


def cmd_run(args) -> int:
    system = _load_system(args.spec)
    obs = _load_obs(args.obs, system)
    size = len(obs) if args.size is None else args.size
    if not 0 <= size <= len(obs):
        raise InputError(f"--size {size} outside 0..{len(obs)}")
    solve = evolving_wfs if args.semantics == "wfs" else evolving_grounded_equilibrium
    states, trace = solve(system, obs, size)
    for rec in trace.records:
        _emit(rec.to_dict(system) if args.verbose else
              {"instant": rec.instant, "state": rec.to_dict(system)["state"]})
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in trace.records:
                _emit(rec.to_dict(system), fh)
    return 0


def cmd_check(args) -> int:
    system = _load_system(args.spec)
    obs = _load_obs(args.obs, system)
    states = _load_states(args.states, system)
    bad = first_violation(system, obs, states)
    if bad is None:
        print(f"ok: evolving equilibrium of size {len(states)}")
        return 0
    print(f"instant {bad}: not an equilibrium", file=sys.stderr)
    _emit({"ok": False, "instant": bad})
    return 1


def materialized_reduct(system: Emcs, state) -> Emcs:
    """The S-reduct with every lazy part written out over the system's pool."""
    red = s_reduct(system, state).system
    pool = system.pool
    contexts = []
    for ctx in red.contexts:
        kb = ctx.kb.materialize(pool) if isinstance(ctx.kb, Reduct) else ctx.kb
        rules = []
        for r in ctx.bridge_rules:
            if not r.negative:
                rules.append(r)
                continue
            vs = sorted(r.variables(), key=lambda v: v.name)
            for g in sorted((r.substitute(b) for b in complete({}, vs, pool)), key=str):
                if any(lit.atom in state[lit.context - 1] for lit in g.negative):
                    continue
                rules.append(BridgeRule(g.head, g.positive))
        contexts.append(dataclasses.replace(ctx, kb=kb, bridge_rules=tuple(rules)))
    return Emcs(tuple(contexts), system.constants)


def cmd_reduct(args) -> int:
    system = _load_system(args.spec)
    states = _load_states(args.states, system)
    if len(states) != 1:
        raise InputError(f"{args.states}: expected exactly one state record, found {len(states)}")
    sys.stdout.write(serialize_system(materialized_reduct(system, states[0])))
    return 0


def cmd_oracle(args) -> int:
    system = _load_system(args.spec)
    fmt = lambda s: {c.name: sorted(str(a) for a in comp) for c, comp in zip(system.contexts, s)}
    eqs = enumerate_equilibria(system, args.bound)
    mins = minimal_equilibria(system, args.bound)
    order = lambda s: (sum(map(len, s)), json.dumps(fmt(s)))
    rec = {
        "equilibria": [fmt(s) for s in sorted(eqs, key=order)],
        "minimal": [fmt(s) for s in sorted(mins, key=order)],
    }
    ok = True
    try:
        report = verify_props(system, args.bound, seed=args.seed)
    except EmcsError as e:
        rec["properties"] = {"skipped": str(e)}
    else:
        rec["properties"] = report.to_dict()
        ok = report.passed
    _emit(rec)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="emcs", description="Evolving multi-context system reasoner")
    p.add_argument("-v", "--log-level", default="WARNING", help="logging level (default WARNING)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse and statically check a system")
    s.add_argument("spec")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("run", help="evaluate a system over an observation stream")
    s.add_argument("spec")
    s.add_argument("obs")
    s.add_argument("--size", type=int, default=None, help="number of instants (default: all)")
    s.add_argument("--semantics", choices=("wfs", "grounded"), default="wfs")
    s.add_argument("--trace", metavar="OUT", help="write full per-instant trace records to OUT")
    s.add_argument("--verbose", action="store_true", help="print full trace records on stdout")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("check", help="verify an evolving belief state")
    s.add_argument("spec")
    s.add_argument("obs")
    s.add_argument("states", help="state records, one per instant")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("reduct", help="print the reduct of a system w.r.t. a belief state")
    s.add_argument("spec")
    s.add_argument("states", help="a single state record")
    s.set_defaults(func=cmd_reduct)

    s = sub.add_parser("oracle", help="brute-force equilibria and property report")
    s.add_argument("spec")
    s.add_argument("--bound", type=int, default=1 << 20)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (GroundedEquilibriumError, OracleBoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ObservationError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except EmcsError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
