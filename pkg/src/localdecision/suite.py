"""Exhaustive desk-scale batteries behind ``localdecision suite`` and the
acceptance tests.

Every battery returns a :class:`Result`; ``quick=True`` shrinks the
instance families so the battery finishes in seconds.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

import numpy as np

from .generate import all_instances, canonical_form, connected_graphs, connected_graphs_upto
from .graph import Instance, complete, cycle, path
from .id_lifting import OracleN, run_lifted, simulation_count
from .languages import (alternating_path_language, coloring_language, forest_language,
                        independent_set_language, size_at_most_language)
from .lift import (NodeMap, compose, find_t_local_isomorphism, is_homomorphism,
                   is_t_local_isomorphism, iter_lift_closure_counterexamples,
                   iter_t_local_isomorphisms,
                   lift_closure_counterexample, random_lift)
from .model import decides_correctly, edge_conflict_decider, hereditary_decider
from .nld import (acceptance_oracle, certificate_size_bits, certificates_from_map,
                  exhaustive_certificate_search, honest_certificates, verify)


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    counters: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:>2} {self.title}: {self.detail}"


def registry_languages():
    """Registry languages with the input alphabets used by the batteries."""
    return [
        (coloring_language(), (b"1", b"2")),
        (independent_set_language(), (b"0", b"1")),
        (forest_language(), (b"",)),
        (size_at_most_language(4), (b"",)),
        (alternating_path_language(), (b"a", b"b")),
    ]


def c8_fixtures(quick: bool = False) -> Result:
    start = time.perf_counter()
    c8, c4, k2 = cycle(8), cycle(4), complete(2)
    f = NodeMap(c8, c4, [u % 4 for u in range(8)])
    g = NodeMap(c8, k2, [u % 2 for u in range(8)])
    checks = {
        "f hom": is_homomorphism(f),
        "f 1-local": is_t_local_isomorphism(f, 1),
        "g hom": is_homomorphism(g),
        "g not 1-local": not is_t_local_isomorphism(g, 1),
    }
    elapsed = time.perf_counter() - start
    ok = all(checks.values()) and elapsed < 1.0
    return Result(1, "C8->C4 / C8->K2 fixtures", ok,
                  " ".join(f"{k}={v}" for k, v in checks.items()) + f" under_1s={elapsed < 1.0}")


def _small_instance(rng: random.Random, max_nodes: int, alphabet) -> Instance:
    n = rng.randint(1, max_nodes)
    g = rng.choice(connected_graphs(n))
    return Instance(g, tuple(rng.choice(alphabet) for _ in range(n)))


def onto_property(quick: bool = False) -> Result:
    rng = random.Random(20120501)
    wanted = 50 if quick else 200
    found = violations = tried = 0
    while found < wanted:
        tried += 1
        base = _small_instance(rng, 5, (b"", b"1"))
        t = rng.choice((1, 1, 2, 3))
        if rng.random() < 0.7:
            source, _ = random_lift(base, rng.randint(1, 3), rng)
        else:
            source = _small_instance(rng, 6, (b"", b"1"))
        f = find_t_local_isomorphism(source, base, t)
        if f is None:
            continue
        found += 1
        if not f.is_onto():
            violations += 1
    return Result(2, "t-local isomorphisms are onto", violations == 0,
                  f"found={found} tried={tried} violations={violations}",
                  {"maps_found": found, "pairs_tried": tried})


def composition_property(quick: bool = False) -> Result:
    max_nodes = 5 if quick else 6
    insts = [Instance(g, (b"",) * g.node_count) for g in connected_graphs_upto(max_nodes)]
    maps: dict = {}
    for i, a in enumerate(insts):
        for j, b in enumerate(insts):
            if b.node_count <= a.node_count:
                found = list(iter_t_local_isomorphisms(a, b, 1))
                if found:
                    maps[i, j] = found
    n_maps = sum(len(fs) for fs in maps.values())
    checked = violations = 0
    for (i, j), gs in maps.items():
        for k in range(len(insts)):
            for f in maps.get((j, k), ()):
                for g in gs:
                    checked += 1
                    if not is_t_local_isomorphism(compose(f, g), 1):
                        violations += 1
    return Result(3, "composition of 1-local isomorphisms", violations == 0 and checked > 0,
                  f"instances={len(insts)} maps={n_maps} compositions={checked} "
                  f"violations={violations}", {"maps_found": n_maps, "compositions": checked})


def hereditary_deciders(quick: bool = False) -> Result:
    max_nodes = 5 if quick else 6
    col, forest = coloring_language(), forest_language()
    n_col = sum(1 for _ in all_instances(max_nodes, "123"))
    cx_col = decides_correctly(col, hereditary_decider(col, 1), all_instances(max_nodes, "123"))
    n_for = sum(1 for _ in all_instances(max_nodes, [b""]))
    cx_for = decides_correctly(forest, hereditary_decider(forest, 2),
                               all_instances(max_nodes, [b""]))
    detail = (f"coloring t=1 instances={n_col} counterexample="
              f"{'none' if cx_col is None else cx_col.describe()}; "
              f"forest t=2 instances={n_for} counterexample="
              f"{'none' if cx_for is None else cx_for.describe()}")
    return Result(4, "hereditary deciders decide correctly", cx_col is None and cx_for is None,
                  detail, {"instances": n_col + n_for})


def identity_lifting(quick: bool = False) -> Result:
    max_nodes = 4 if quick else 5
    lang = coloring_language()
    a = edge_conflict_decider(lang)
    premise = decides_correctly(lang, a, all_instances(4, "123"), id_range_max=4)
    wrong = count_mismatch = runs = sims = 0
    for inst in all_instances(max_nodes, "123"):
        n = inst.node_count
        oracles = [OracleN.uniform(n, b) for b in (n, n + 1, 2 * n)]
        oracles.append(OracleN(tuple((n, n + 1, 2 * n)[v % 3] for v in range(n))))
        member = lang(inst)
        for oracle in oracles:
            verdict, counts = run_lifted(inst, a, oracle)
            runs += 1
            sims += sum(counts)
            if verdict.accepted != member:
                wrong += 1
            for v, (ok, c) in enumerate(zip(verdict.per_node, counts)):
                full = simulation_count(inst.ball_core(v, a.radius)[2].node_count,
                                        oracle.bound_at(v))
                if (ok and c != full) or (not ok and not 1 <= c <= full):
                    count_mismatch += 1
    # without early exit every node runs the full falling factorial
    exact_mismatch = 0
    for inst in all_instances(3, "12"):
        n = inst.node_count
        oracle = OracleN.uniform(n, n + 1)
        _, counts = run_lifted(inst, a, oracle, early_exit=False)
        for v, c in enumerate(counts):
            if c != simulation_count(inst.ball_core(v, 1)[2].node_count, n + 1):
                exact_mismatch += 1
    ok = premise is None and wrong == 0 and count_mismatch == 0 and exact_mismatch == 0
    return Result(5, "anonymous lift of an identity-based decider", ok,
                  f"premise_ok={premise is None} runs={runs} wrong_verdicts={wrong} "
                  f"counter_mismatches={count_mismatch + exact_mismatch} simulations={sims}",
                  {"simulations": sims, "runs": runs})


def honest_completeness(quick: bool = False) -> Result:
    max_nodes = 5 if quick else 6
    checked = rejected = 0
    for lang, alpha in [(coloring_language(), "123"), (forest_language(), [b""]),
                        (alternating_path_language(), "ab")]:
        for inst in all_instances(max_nodes, alpha):
            if not lang(inst):
                continue
            checked += 1
            if not verify(inst, honest_certificates(inst), lang, 1).accepted:
                rejected += 1
    return Result(6, "honest certificates accepted on members", rejected == 0 and checked > 0,
                  f"members={checked} rejected={rejected}", {"instances": checked})


def oracle_equivalence(quick: bool = False) -> Result:
    max_nodes = 4 if quick else 5
    mismatches = []
    checked = accepted = 0
    coloring_nonmember_accepts = 0
    for lang, alpha in registry_languages():
        for inst in all_instances(max_nodes, alpha):
            brute = exhaustive_certificate_search(inst, lang, 1, alpha)
            oracle = acceptance_oracle(inst, lang, 1)
            checked += 1
            accepted += brute is not None
            if (brute is not None) != oracle:
                mismatches.append((lang.name, inst))
            if lang.name == "coloring" and not lang(inst) and brute is not None:
                coloring_nonmember_accepts += 1
    ok = not mismatches and coloring_nonmember_accepts == 0
    return Result(7, "certificate search agrees with the lift oracle", ok,
                  f"instances={checked} accepting={accepted} mismatches={len(mismatches)} "
                  f"coloring_nonmembers_accepted={coloring_nonmember_accepts}",
                  {"instances": checked})


def _same_shape(a: Instance, b: Instance) -> bool:
    return canonical_form(a.graph, a.inputs)[0] == canonical_form(b.graph, b.inputs)[0]


def non_lift_closure(quick: bool = False, workers: int = 1) -> Result:
    lang = size_at_most_language(4)
    first = lift_closure_counterexample(lang, 1, 8, workers=workers)
    c8, c4 = cycle(8), cycle(4)
    position = None
    if not quick:
        for i, cx in enumerate(iter_lift_closure_counterexamples(lang, 1, 8)):
            if not cx.holds(lang, 1):
                break
            if _same_shape(cx.big, c8) and _same_shape(cx.small, c4):
                position = i
                break
    certs = certificates_from_map(c4, [u % 4 for u in range(8)])
    accepted = verify(c8, certs, lang, 1).accepted
    first_desc = "none" if first is None else \
        f"C{first.big.node_count}?->{first.small.node_count}-node"
    if first is not None and _same_shape(first.big, cycle(first.big.node_count)) and \
            _same_shape(first.small, cycle(first.small.node_count)):
        first_desc = f"(C{first.big.node_count}, C{first.small.node_count})"
    ok = first is not None and first.holds(lang, 1) and accepted and \
        (quick or position is not None)
    return Result(8, "size-at-most:4 is not closed under lift", ok,
                  f"first_counterexample={first_desc} c8_c4_listed_at="
                  f"{'skipped' if quick else position} nld_verify_c8_with_c4_map="
                  f"{'accept' if accepted else 'reject'}")


def certificate_sizes(quick: bool = False) -> Result:
    ns = list(range(4, 33))
    sizes = []
    for n in ns:
        per_graph = {max(certificate_size_bits(honest_certificates(inst)))
                     for inst in (path(n), cycle(n), complete(n) if n <= 12 else path(n))}
        if len(per_graph) != 1:
            return Result(9, "certificate size O(n^2)", False, f"sizes differ at n={n}")
        sizes.append(per_graph.pop())
    ratios = [s / n ** 2 for s, n in zip(sizes, ns)]
    c_bound = max(ratios)
    coeffs = np.polyfit(ns, sizes, 2)
    resid = float(np.max(np.abs(np.polyval(coeffs, ns) - sizes)))
    ok = all(s <= c_bound * n ** 2 for s, n in zip(sizes, ns)) and coeffs[0] > 0 and resid <= 8
    return Result(9, "certificate size O(n^2)", ok,
                  f"C={c_bound:.4f} (max over n=4..32 of bits/n^2) "
                  f"fit={coeffs[0]:.4f}n^2+{coeffs[1]:.3f}n+{coeffs[2]:.2f} "
                  f"max_residual={resid:.2f}bits ratio_n32={ratios[-1]:.4f}",
                  {"C": round(c_bound, 6)})


def _cli_output(argv) -> tuple[int, str]:
    import contextlib
    import io

    from .cli import main

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def cli_determinism(quick: bool = False) -> Result:
    import os
    import tempfile

    from .graph import format_instance

    with tempfile.TemporaryDirectory() as tmp:
        def put(name, text):
            path = os.path.join(tmp, name)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
            return path

        tri = put("tri.g", format_instance(complete(3, "123")))
        c8 = put("c8.g", format_instance(cycle(8)))
        c4 = put("c4.g", format_instance(cycle(4)))
        p5 = put("p5.g", format_instance(path(5, "ababa")))
        certs = put("c8.certs", "".join(
            c.encode().hex() + "\n" for c in certificates_from_map(cycle(4), [u % 4 for u in range(8)])))
        commands = [
            ["decide", "--language", "coloring", "--instance", tri, "--radius", "1"],
            ["lift-decider", "--language", "coloring", "--instance", tri, "--radius", "1",
             "--oracle-bound", "6"],
            ["lift-check", "--source", c8, "--target", c4, "--t", "1"],
            ["closure-search", "--language", "size-at-most:4", "--t", "1", "--max-nodes",
             "6" if quick else "8", "--all"],
            ["closure-search", "--language", "coloring", "--t", "1", "--max-nodes", "5",
             "--alphabet", "1,2"],
            ["nld-prove", "--instance", p5, "--language", "path-pattern:alternating"],
            ["nld-verify", "--instance", c8, "--certs", certs, "--language", "size-at-most:4",
             "--t", "1"],
            ["nld-oracle", "--instance", c8, "--language", "size-at-most:4", "--t", "1"],
        ]
        differing = []
        for argv in commands:
            outs = {_cli_output(argv + ["--workers", str(w)]) for w in (1, 1, 2, 3)}
            if len(outs) != 1:
                differing.append(argv[0])
    return Result(10, "CLI reports are byte-identical", not differing,
                  f"commands={len(commands)} runs_each=4 workers=1,1,2,3 "
                  f"differing={','.join(differing) or 'none'}")


BATTERIES = [c8_fixtures, onto_property, composition_property, hereditary_deciders,
             identity_lifting, honest_completeness, oracle_equivalence, non_lift_closure,
             certificate_sizes, cli_determinism]


def run_all(quick: bool = False, workers: int = 1) -> list[Result]:
    out = []
    for battery in BATTERIES:
        if battery is non_lift_closure:
            out.append(battery(quick, workers=workers))
        else:
            out.append(battery(quick))
    return out
