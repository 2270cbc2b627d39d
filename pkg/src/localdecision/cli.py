"""Command-line entry point.

Every subcommand prints ``key=value`` lines to stdout.  Exit status is 0 on
accept/success, 1 on reject or when a counterexample is found, and 2 on
malformed input.  Wall time goes to stderr, and only with ``--timing``, so
stdout is byte-identical across runs and ``--workers`` settings.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from .generate import normalize_alphabet
from .graph import IdentityAssignment, Instance, InputError, load_instance
from .id_lifting import OracleN, parse_oracle_bounds, planned_simulations, run_lifted
from .languages import get_language
from .lift import (NodeMap, find_t_local_isomorphism, is_t_local_isomorphism,
                   lift_closure_counterexamples)
from .model import edge_conflict_decider, hereditary_decider, run
from .nld import (accepting_target, certificate_size_bits, format_certificates,
                  honest_certificates, parse_certificates, verify)

SIMULATION_WARNING = 10 ** 6


@dataclass
class RunReport:
    command: str
    per_node: list = field(default_factory=list)
    verdict: Optional[str] = None
    counters: dict = field(default_factory=dict)
    extra: list = field(default_factory=list)
    wall_time: float = 0.0

    def render(self) -> str:
        out = [f"command={self.command}"]
        out += [f"node {v}={val}" for v, val in enumerate(self.per_node)]
        out += self.extra
        out += [f"{k}={v}" for k, v in self.counters.items()]
        if self.verdict is not None:
            out.append(f"verdict={self.verdict}")
        return "\n".join(out) + "\n"


def _yes_no(ok: bool) -> str:
    return "yes" if ok else "no"


def _read_text(path: str, what: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{what}: cannot read {path}: {exc.strerror}") from None


def _load(path: str, what: str = "instance") -> tuple[Instance, Optional[IdentityAssignment]]:
    _read_text(path, what)
    try:
        return load_instance(path)
    except InputError as exc:
        raise InputError(f"{what}: {exc}") from None


def _int_lines(text: str, what: str) -> list[int]:
    vals = []
    for i, line in enumerate(text.splitlines()):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vals.append(int(line))
        except ValueError:
            raise InputError(f"{what} line {i + 1}: not an integer: {line!r}") from None
    return vals


def _echo(args) -> str:
    # the echo leaves out --workers and --timing so reports do not depend on them
    parts = [args.command]
    for key, val in sorted(vars(args).items()):
        if key in ("command", "workers", "timing", "func") or val is None or val is False:
            continue
        flag = "--" + key.replace("_", "-")
        parts.append(flag if val is True else f"{flag} {val}")
    return " ".join(parts)


def cmd_decide(args) -> tuple[RunReport, int]:
    lang = get_language(args.language)
    inst, file_ids = _load(args.instance)
    ids = file_ids
    if args.ids:
        ids = IdentityAssignment(_int_lines(_read_text(args.ids, "ids"), "ids"))
    if args.decider == "hereditary":
        decider = hereditary_decider(lang, args.radius)
    else:
        decider = edge_conflict_decider(lang, args.radius)
    verdict = run(inst, decider, ids)
    rep = RunReport(_echo(args), [_yes_no(o) for o in verdict.per_node], str(verdict),
                    {"instances_enumerated": 1})
    return rep, 0 if verdict.accepted else 1


def cmd_lift_decider(args) -> tuple[RunReport, int]:
    lang = get_language(args.language)
    inst, _ = _load(args.instance)
    n = inst.node_count
    if (args.oracle_bound is None) == (args.oracle_bounds is None):
        raise InputError("oracle: give exactly one of --oracle-bound and --oracle-bounds")
    if args.oracle_bound is not None:
        oracle = OracleN.uniform(n, args.oracle_bound)
    else:
        oracle = parse_oracle_bounds(_read_text(args.oracle_bounds, "oracle-bounds"), n)
    if args.decider == "hereditary":
        base = hereditary_decider(lang, args.radius)
        base = replace(base, uses_identities=True)  # ignores the identities it is given
    else:
        base = edge_conflict_decider(lang, args.radius)
    planned = planned_simulations(inst, args.radius, oracle.bounds)
    extra = []
    if sum(planned) > SIMULATION_WARNING:
        print(f"warning: up to {sum(planned)} simulations planned", file=sys.stderr)
    extra.append(f"planned_simulations={sum(planned)}")
    if not oracle.is_faithful(inst):
        extra.append("oracle_faithful=no")
    verdict, counts = run_lifted(inst, base, oracle, early_exit=not args.no_early_exit)
    extra += [f"simulations {v}={c}" for v, c in enumerate(counts)]
    rep = RunReport(_echo(args), [_yes_no(o) for o in verdict.per_node], str(verdict),
                    {"simulations": sum(counts)}, extra)
    return rep, 0 if verdict.accepted else 1


def cmd_lift_check(args) -> tuple[RunReport, int]:
    src, _ = _load(args.source, "source")
    dst, _ = _load(args.target, "target")
    if args.map:
        m = NodeMap(src, dst, tuple(_int_lines(_read_text(args.map, "map"), "map")))
        ok = is_t_local_isomorphism(m, args.t)
        found = m if ok else None
    else:
        found = find_t_local_isomorphism(src, dst, args.t)
        ok = found is not None
    extra = []
    if found is not None:
        extra.append("map=" + ",".join(map(str, found.mapping)))
        extra.append(f"onto={_yes_no(found.is_onto())}")
    rep = RunReport(_echo(args), verdict="local-isomorphism" if ok else "none", extra=extra)
    return rep, 0 if ok else 1


def _describe(inst: Instance) -> str:
    g = inst.graph
    edges = ";".join(f"{u}-{v}" for u, v in g.sorted_edges())
    inputs = ",".join(x.decode("utf-8", "backslashreplace") for x in inst.inputs)
    return f"n={g.node_count} edges={edges} inputs={inputs}"


def cmd_closure_search(args) -> tuple[RunReport, int]:
    lang = get_language(args.language)
    alphabet = normalize_alphabet(args.alphabet.split(",")) if args.alphabet else (b"",)
    found = lift_closure_counterexamples(lang, args.t, args.max_nodes, alphabet,
                                         first_only=not args.all, workers=args.workers)
    extra = []
    for i, cx in enumerate(found):
        extra.append(f"counterexample {i} lift={_describe(cx.big)}")
        extra.append(f"counterexample {i} target={_describe(cx.small)}")
        extra.append(f"counterexample {i} map=" + ",".join(map(str, cx.witness.mapping)))
    if found:
        verdict = "counterexample"
    else:
        verdict = f"no counterexample up to {args.max_nodes} nodes"
    rep = RunReport(_echo(args), verdict=verdict, counters={"counterexamples": len(found)},
                    extra=extra)
    return rep, 1 if found else 0


def cmd_nld_prove(args) -> tuple[RunReport, int]:
    lang = get_language(args.language)
    inst, _ = _load(args.instance)
    certs = honest_certificates(inst)
    text = format_certificates(certs)
    extra = [f"member={_yes_no(lang(inst))}",
             f"certificate_bits={max(certificate_size_bits(certs))}"]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        extra += [f"cert {v}={line}" for v, line in enumerate(text.splitlines())]
    return RunReport(_echo(args), extra=extra), 0


def cmd_nld_verify(args) -> tuple[RunReport, int]:
    lang = get_language(args.language)
    inst, _ = _load(args.instance)
    certs = parse_certificates(_read_text(args.certs, "certs"))
    if len(certs) != inst.node_count:
        raise InputError(f"certs: {len(certs)} certificates for {inst.node_count} nodes")
    verdict = verify(inst, certs, lang, args.t)
    rep = RunReport(_echo(args), [_yes_no(o) for o in verdict.per_node], str(verdict))
    return rep, 0 if verdict.accepted else 1


def cmd_nld_oracle(args) -> tuple[RunReport, int]:
    lang = get_language(args.language)
    inst, _ = _load(args.instance)
    hit = accepting_target(inst, lang, args.t, args.max_target_nodes)
    extra = []
    if hit is not None:
        target, f = hit
        extra.append(f"target {_describe(target)}")
        extra.append("map=" + ",".join(map(str, f.mapping)))
    rep = RunReport(_echo(args), verdict="accept" if hit else "reject", extra=extra)
    return rep, 0 if hit else 1


def cmd_suite(args) -> tuple[RunReport, int]:
    from .suite import run_all

    results = run_all(quick=args.quick, workers=args.workers)
    extra = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    rep = RunReport(_echo(args), verdict="pass" if passed == len(results) else "fail",
                    counters={"passed": passed, "failed": len(results) - passed}, extra=extra)
    return rep, 0 if passed == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    common.add_argument("--timing", action="store_true", help="print wall time to stderr")

    p = argparse.ArgumentParser(prog="localdecision",
                                description="Local decision and verification on small graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("decide", parents=[common], help="run a local decider")
    s.add_argument("--language", required=True)
    s.add_argument("--instance", required=True)
    s.add_argument("--ids")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--decider", choices=["hereditary", "min-id"], default="hereditary")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("lift-decider", parents=[common],
                       help="run an identity-based decider anonymously via an oracle bound")
    s.add_argument("--language", required=True)
    s.add_argument("--instance", required=True)
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--oracle-bound", type=int)
    s.add_argument("--oracle-bounds")
    s.add_argument("--decider", choices=["min-id", "hereditary"], default="min-id")
    s.add_argument("--no-early-exit", action="store_true")
    s.set_defaults(func=cmd_lift_decider)

    s = sub.add_parser("lift-check", parents=[common], help="find or verify a t-local isomorphism")
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--map")
    s.set_defaults(func=cmd_lift_check)

    s = sub.add_parser("closure-search", parents=[common],
                       help="search small instances for lift-closure violations")
    s.add_argument("--language", required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--max-nodes", type=int, required=True)
    s.add_argument("--alphabet", help="comma-separated input symbols")
    s.add_argument("--all", action="store_true", help="list every counterexample")
    s.set_defaults(func=cmd_closure_search)

    s = sub.add_parser("nld-prove", parents=[common], help="emit honest map certificates")
    s.add_argument("--instance", required=True)
    s.add_argument("--language", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_nld_prove)

    s = sub.add_parser("nld-verify", parents=[common], help="run the certificate verifier")
    s.add_argument("--instance", required=True)
    s.add_argument("--certs", required=True)
    s.add_argument("--language", required=True)
    s.add_argument("--t", type=int, required=True)
    s.set_defaults(func=cmd_nld_verify)

    s = sub.add_parser("nld-oracle", parents=[common],
                       help="decide whether some certificate vector is accepted")
    s.add_argument("--instance", required=True)
    s.add_argument("--language", required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--max-target-nodes", type=int)
    s.set_defaults(func=cmd_nld_oracle)

    s = sub.add_parser("suite", parents=[common], help="run the acceptance batteries")
    s.add_argument("--quick", action="store_true")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    start = time.perf_counter()
    try:
        if args.workers < 1:
            raise InputError(f"workers: must be >= 1, got {args.workers}")
        for name in ("radius", "t"):
            val = getattr(args, name, None)
            if val is not None and val < 0:
                raise InputError(f"{name}: must be non-negative, got {val}")
        report, code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.wall_time = time.perf_counter() - start
    sys.stdout.write(report.render())
    sys.stdout.flush()
    if args.timing:
        print(f"wall_time={report.wall_time:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
