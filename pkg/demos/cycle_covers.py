"""Cycles covering cycles, and why a size bound cannot be verified anonymously.

Walks through the C8 -> C4 fixture, searches for the smallest instances
that break lift closure for "at most 4 nodes", and then shows the map
certificate of C4 convincing every node of C8.

    python demos/cycle_covers.py
"""

from localdecision.graph import complete, cycle
from localdecision.languages import size_at_most_language
from localdecision.lift import (NodeMap, is_homomorphism, is_t_local_isomorphism,
                                lift_closure_counterexamples)
from localdecision.nld import certificates_from_map, honest_certificates, verify


def show_fixtures():
    c8, c4, k2 = cycle(8), cycle(4), complete(2)
    mod4 = NodeMap(c8, c4, [u % 4 for u in range(8)])
    mod2 = NodeMap(c8, k2, [u % 2 for u in range(8)])
    for name, m in (("u mod 4 onto C4", mod4), ("u mod 2 onto K2", mod2)):
        print(f"{name:18s} homomorphism={is_homomorphism(m)} "
              f"1-local={is_t_local_isomorphism(m, 1)}")


def show_counterexamples(lang):
    found = lift_closure_counterexamples(lang, 1, 8)
    print(f"\n{len(found)} lift-closure violations for {lang.name} up to 8 nodes:")
    for cx in found:
        degs = sorted(cx.small.graph.degree(v) for v in range(cx.small.node_count))
        print(f"  {cx.big.node_count} nodes -> {cx.small.node_count} nodes "
              f"(target degrees {degs}) map={cx.witness.mapping}")


def show_fooled_verifier(lang):
    c8 = cycle(8)
    honest = verify(c8, honest_certificates(c8), lang, 1)
    fooled = verify(c8, certificates_from_map(cycle(4), [u % 4 for u in range(8)]), lang, 1)
    print(f"\nC8 with its own map:  {honest}")
    print(f"C8 claiming to be C4: {fooled}")


if __name__ == "__main__":
    lang = size_at_most_language(4)
    show_fixtures()
    show_counterexamples(lang)
    show_fooled_verifier(lang)
