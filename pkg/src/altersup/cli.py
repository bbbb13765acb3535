"""Command line frontend.

Exit codes are uniform across subcommands: 0 when every requested verdict
holds, 1 when some verdict is false, 2 on input errors (unreadable or
malformed documents, failed model validation, mismatched artifacts).
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import dot
from .attack import build_attacked_plant, build_observer, observation_projection, singleton_estimates
from .closedloop import build_large, build_small, check_nonblocking
from .fsa import dfa_equivalent, render_word
from .formats import (
    DocumentError,
    dump_json,
    load_model,
    model_to_document,
    parse_supervisor_document,
    supervisor_to_document,
    witness_document,
)
from .model import validate
from .oracle import (
    OracleConfig,
    def_check_ca_observable,
    def_check_cad_observable,
    def_check_cas_observable,
    def_membership,
    plant_strings,
)
from .synth import synth_conservative, uncontrollable_conflicts
from .verify import (
    check_ca_controllable,
    check_cad_controllable,
    check_cad_observable,
    check_cas_controllable,
    check_lm_closed,
    deterministic_supervisor_exists,
    nonblocking_supervisor_exists,
)

ORACLE_BOUND_ENV = "ALTERSUP_ORACLE_MAXLEN"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_checked_model(path: str):
    model = load_model(path)
    report = validate(model)
    if not report.ok:
        lines = "\n".join(f"  {v.rule}: {v.detail}" for v in report.violations)
        raise DocumentError(f"{path}: model fails validation\n{lines}")
    return model


def _emit_report(args, report: dict):
    if getattr(args, "report", None):
        report["timings"] = {k: round(v, 6) for k, v in report.get("timings", {}).items()}
        _write(args.report, dump_json(report))


def cmd_check(args) -> int:
    t0 = time.perf_counter()
    model = _load_checked_model(args.model)
    obs = build_observer(model)
    timings = {"build": time.perf_counter() - t0}

    t0 = time.perf_counter()
    cad_c = check_cad_controllable(model, first=args.first)
    ca_c = check_ca_controllable(model, first=args.first)
    cas_c = check_cas_controllable(model, first=args.first)
    cad_o = check_cad_observable(model, obs, first=args.first)
    lm = check_lm_closed(model, first=args.first)
    det = deterministic_supervisor_exists(model, obs, first=args.first)
    nonb = nonblocking_supervisor_exists(model, obs, first=args.first)
    timings["checks"] = time.perf_counter() - t0

    print(f"model: {args.model}")
    print(f"  CA-D-controllable:                {_yesno(cad_c.holds)}")
    print(f"  CA-controllable:                  {_yesno(ca_c.holds)}")
    print(f"  CA-S-controllable:                {_yesno(cas_c.holds)}")
    print(f"  CA-D-observable:                  {_yesno(cad_o.holds)}")
    print(f"    (unrestricted biconditional:    {_yesno(cad_o.unrestricted_holds)})")
    print(f"  marked-language closed:           {_yesno(lm.holds)}")
    print(f"  deterministic supervisor exists:  {_yesno(det.exists)}")
    print(f"  nonblocking supervisor exists:    {_yesno(nonb.exists)}")
    witnesses = list(cad_c.witnesses) + list(cad_o.witnesses) + list(lm.witnesses)
    for w in witnesses:
        print(f"  witness[{w.kind}] {w.detail}")

    _emit_report(
        args,
        {
            "command": "check",
            "model": args.model,
            "verdicts": {
                "cad_controllable": cad_c.holds,
                "ca_controllable": ca_c.holds,
                "cas_controllable": cas_c.holds,
                "cad_observable": cad_o.holds,
                "cad_observable_unrestricted": cad_o.unrestricted_holds,
                "lm_closed": lm.holds,
                "deterministic_supervisor_exists": det.exists,
                "nonblocking_supervisor_exists": nonb.exists,
            },
            "witnesses": [witness_document(w) for w in witnesses],
            "timings": timings,
        },
    )
    return EXIT_OK if det.exists else EXIT_FAILED


def cmd_synthesize(args) -> int:
    model = _load_checked_model(args.model)
    obs = build_observer(model)
    det = deterministic_supervisor_exists(model, obs, first=True)
    warnings = []
    if not det.exists:
        if not args.force:
            print("no deterministic supervisor exists; re-run with --force to emit anyway", file=sys.stderr)
            return EXIT_FAILED
        warnings.append("forced: the existence conditions do not hold")
    sup = synth_conservative(model, obs)
    warnings += [
        f"uncontrollable event {e} not enabled at {dot.member_set_label(y)}"
        for y, e in uncontrollable_conflicts(sup)
    ]
    _write(args.out, dump_json(supervisor_to_document(sup, warnings)))
    print(f"supervisor written to {args.out}" + (" (forced)" if not det.exists else ""))
    return EXIT_OK


def cmd_closed_loop(args) -> int:
    import json

    t0 = time.perf_counter()
    model = _load_checked_model(args.model)
    obs = build_observer(model)
    with open(args.supervisor, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{args.supervisor}: not valid JSON ({exc})") from exc
    sup = parse_supervisor_document(doc, obs, model)
    build = build_large if args.which == "large" else build_small
    loop = build(model, obs, sup)
    spec_language = model.spec
    equal, witness = dfa_equivalent(loop.automaton, spec_language, compare_marked=False)
    print(f"{args.which} closed loop: {len(loop.automaton.states)} states")
    print(f"  equals specification: {_yesno(equal)}")
    if witness is not None:
        print(f"  distinguishing string: {render_word(witness)}")
    ok = equal
    verdicts = {"equals_specification": equal}
    if args.nonblocking:
        if args.which != "large":
            raise DocumentError("--nonblocking applies to the large closed loop")
        report = check_nonblocking(model, obs, sup)
        print(f"  nonblocking: {_yesno(report.nonblocking)}")
        print(f"    can always reach marking: {_yesno(report.cond1)}")
        print(f"    large equals small:       {_yesno(report.cond2)}")
        if report.witness is not None:
            print(f"    witness: {render_word(report.witness)}")
        verdicts.update(
            {"nonblocking": report.nonblocking, "cond1": report.cond1, "cond2": report.cond2}
        )
        ok = ok and report.nonblocking
    if args.dot:
        _write(args.dot, dot.closedloop_dot(loop))
    _emit_report(
        args,
        {
            "command": "closed-loop",
            "model": args.model,
            "which": args.which,
            "verdicts": verdicts,
            "witnesses": [],
            "timings": {"total": time.perf_counter() - t0},
        },
    )
    return EXIT_OK if ok else EXIT_FAILED


def cmd_observer(args) -> int:
    model = _load_checked_model(args.model)
    obs = build_observer(model)
    print(f"observer: {len(obs.automaton.states)} states, {len(obs.automaton.marked)} marked")
    print(f"  estimates unambiguous: {_yesno(singleton_estimates(obs))}")
    for y in sorted(obs.automaton.states, key=lambda s: (len(s), dot.member_set_label(s))):
        star = "*" if y in obs.automaton.marked else " "
        estimate = sorted(y & obs.origin_states, key=str)
        print(f"  {star} {dot.member_set_label(y)} estimate={estimate}")
    if args.dot:
        _write(args.dot, dot.observer_dot(obs, model))
    return EXIT_OK


def cmd_oracle(args) -> int:
    t0 = time.perf_counter()
    model = _load_checked_model(args.model)
    obs = build_observer(model)
    bound = args.max_len or int(os.environ.get(ORACLE_BOUND_ENV, "8"))
    cfg = OracleConfig(max_plant_len=bound)

    exact = check_cad_observable(model, obs)
    brute = def_check_cad_observable(model, cfg, first=args.first)
    agree_cad = exact.holds == brute.holds
    print(f"deterministic-observability: exact={_yesno(exact.holds)} brute-force={_yesno(brute.holds)}"
          f" -> {'agree' if agree_cad else 'DISAGREE'}")
    for w in brute.witnesses[:3]:
        print(f"  violating pair: {w.detail}")

    ca = def_check_ca_observable(model, cfg, obs, first=args.first)
    cas = def_check_cas_observable(model, cfg, obs, first=args.first)
    print(f"upper-bound observability (bounded): {_yesno(ca.holds)}")
    print(f"lower-bound observability (bounded): {_yesno(cas.holds)}")
    agree_forward = (not exact.holds) or (ca.holds and cas.holds)
    if not agree_forward:
        print("DISAGREE: exact check holds but a bounded definition check found a violation")

    sup = synth_conservative(model, obs)
    large = build_large(model, obs, sup)
    small = build_small(model, obs, sup)
    members_bound = min(bound, 6)
    mismatches = 0
    for w in plant_strings(model, members_bound):
        for kind, loop in (("large", large), ("small", small)):
            if def_membership(model, sup, w, kind) != loop.automaton.generates(w):
                mismatches += 1
    print(f"membership agreement up to length {members_bound}: "
          f"{'all agree' if mismatches == 0 else f'{mismatches} mismatches'}")

    ok = agree_cad and agree_forward and mismatches == 0
    print("all checks agree" if ok else "disagreement found")
    _emit_report(
        args,
        {
            "command": "oracle",
            "model": args.model,
            "max_len": bound,
            "verdicts": {
                "cad_observable_agreement": agree_cad,
                "forward_implication": agree_forward,
                "membership_agreement": mismatches == 0,
            },
            "witnesses": [witness_document(w) for w in brute.witnesses],
            "timings": {"total": time.perf_counter() - t0},
        },
    )
    return EXIT_OK if ok else EXIT_FAILED


def cmd_export_dot(args) -> int:
    model = _load_checked_model(args.model)
    if args.what == "plant":
        text = dot.plant_dot(model)
    elif args.what == "spec":
        text = dot.automaton_dot(model.spec, name="spec")
    elif args.what == "attacked":
        text = dot.automaton_dot(build_attacked_plant(model).automaton, name="attacked-plant")
    elif args.what == "projected":
        g = build_attacked_plant(model)
        text = dot.automaton_dot(observation_projection(g, model), name="projected")
    else:
        text = dot.observer_dot(build_observer(model), model)
    _write(args.out, text)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_format_model(args) -> int:
    # Round-trips a model document into canonical serialization.
    model = _load_checked_model(args.model)
    text = dump_json(model_to_document(model))
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altersup",
        description="Supervisory control under sensor and actuator attacks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide supervisor existence for a model")
    p.add_argument("--model", required=True)
    p.add_argument("--first", action="store_true", help="stop at the first witness per check")
    p.add_argument("--report", help="write a machine-readable report")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synthesize", help="emit the state-estimate supervisor")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true", help="emit even when existence fails")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("closed-loop", help="build a closed-loop language product")
    p.add_argument("--model", required=True)
    p.add_argument("--supervisor", required=True)
    p.add_argument("--which", choices=("large", "small"), required=True)
    p.add_argument("--dot", help="write the product graph")
    p.add_argument("--nonblocking", action="store_true", help="also decide nonblocking (large only)")
    p.add_argument("--report", help="write a machine-readable report")
    p.set_defaults(func=cmd_closed_loop)

    p = sub.add_parser("observer", help="print the observer's member-set listing")
    p.add_argument("--model", required=True)
    p.add_argument("--dot", help="write the observer graph")
    p.set_defaults(func=cmd_observer)

    p = sub.add_parser("oracle", help="cross-check brute-force definitions against the procedures")
    p.add_argument("--model", required=True)
    p.add_argument("--max-len", type=int, default=None, help=f"string-length bound (default ${ORACLE_BOUND_ENV} or 8)")
    p.add_argument("--first", action="store_true")
    p.add_argument("--report", help="write a machine-readable report")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export-dot", help="render a stored automaton to DOT")
    p.add_argument("--model", required=True)
    p.add_argument("--what", choices=("plant", "spec", "attacked", "projected", "observer"), required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("format", help="canonicalize a model document")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_format_model)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
