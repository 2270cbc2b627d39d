"""Exhaustive generation of small connected graphs and instances.

Graphs on ``n`` nodes are grown from those on ``n - 1`` nodes by attaching a
new vertex to every nonempty subset of old vertices; each candidate is
reduced to its canonical form and duplicates are dropped.  Canonical forms
come from colour refinement plus individualization, with twin vertices
branched on only once.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .graph import Graph, Instance, InputError


def _refine(masks: Sequence[int], cells: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    while True:
        cell_masks = [sum(1 << v for v in c) for c in cells]
        out: list[tuple[int, ...]] = []
        split = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            sig = {v: tuple((masks[v] & cm).bit_count() for cm in cell_masks) for v in c}
            keys = sorted(set(sig.values()))
            if len(keys) == 1:
                out.append(c)
                continue
            split = True
            out.extend(tuple(v for v in c if sig[v] == k) for k in keys)
        cells = out
        if not split:
            return cells


def canonical_form(graph: Graph, colors: Optional[Sequence] = None):
    """Return ``(code, perm)`` where ``perm[v]`` is the canonical label of ``v``.

    Two graphs (with optional vertex colours) are isomorphic iff their codes
    are equal.  Colours must be mutually comparable.
    """
    return _canonical(graph.node_count, graph.masks, colors)


def _canonical(n: int, masks: Sequence[int], colors: Optional[Sequence] = None):
    if colors is None:
        cells = [tuple(range(n))] if n else []
        color_key = ()
    else:
        keys = sorted(set(colors))
        cells = [tuple(v for v in range(n) if colors[v] == k) for k in keys]
        color_key = tuple((k, len(c)) for k, c in zip(keys, cells))
    best_code = None
    best_perm = None

    def leaf(order: list[int]):
        nonlocal best_code, best_perm
        perm = [0] * n
        for i, v in enumerate(order):
            perm[v] = i
        rows = [0] * n
        for v in range(n):
            m = masks[v]
            row = 0
            while m:
                low = m & -m
                row |= 1 << perm[low.bit_length() - 1]
                m ^= low
            rows[perm[v]] = row
        code = tuple(rows)
        if best_code is None or code < best_code:
            best_code, best_perm = code, perm

    def search(cells: list[tuple[int, ...]]):
        cells = _refine(masks, cells)
        for i, c in enumerate(cells):
            if len(c) > 1:
                break
        else:
            leaf([c[0] for c in cells])
            return
        tried: list[int] = []
        for v in c:
            # swapping twins is an automorphism fixing the partition
            if any(masks[v] & ~(1 << u) == masks[u] & ~(1 << v) for u in tried):
                continue
            tried.append(v)
            rest = tuple(u for u in c if u != v)
            search(cells[:i] + [(v,), rest] + cells[i + 1:])

    search(cells)
    return (n, color_key, best_code), best_perm


def canonical_graph(graph: Graph) -> Graph:
    _, perm = canonical_form(graph)
    return graph.relabel(perm)


def instance_key(instance: Instance):
    """Isomorphism-invariant key of an instance (graph plus inputs)."""
    code, _ = canonical_form(instance.graph, instance.inputs)
    return code


@lru_cache(maxsize=None)
def connected_graphs(n: int) -> tuple[Graph, ...]:
    """All connected graphs on ``n`` nodes up to isomorphism, canonically labelled.

    Ordered by edge count, then canonical code.
    """
    if n < 1:
        raise InputError(f"node count must be positive, got {n}")
    if n == 1:
        return (Graph(1),)
    found: dict = {}
    new_bit = 1 << (n - 1)
    for g in connected_graphs(n - 1):
        base = g.masks
        for s in range(1, 1 << (n - 1)):
            masks = [m | new_bit if (s >> v) & 1 else m for v, m in enumerate(base)]
            masks.append(s)
            code, perm = _canonical(n, masks)
            if code not in found:
                edges = [(perm[u], perm[v]) for u in range(n) for v in range(u + 1, n)
                         if (masks[u] >> v) & 1]
                found[code] = Graph(n, edges)
    ordered = sorted(found.items(), key=lambda kv: (kv[1].edge_count, kv[0]))
    return tuple(g for _, g in ordered)


def connected_graphs_upto(max_nodes: int, min_nodes: int = 1) -> Iterator[Graph]:
    for n in range(min_nodes, max_nodes + 1):
        yield from connected_graphs(n)


def labelings(graph: Graph, alphabet: Sequence[bytes]) -> Iterator[Instance]:
    """Every assignment of inputs from ``alphabet`` to the nodes of ``graph``."""
    for xs in itertools.product(alphabet, repeat=graph.node_count):
        yield Instance(graph, xs)


def all_instances(max_nodes: int, alphabet: Iterable, min_nodes: int = 1) -> Iterator[Instance]:
    """All connected graphs up to ``max_nodes`` with every input labelling.

    Graphs are taken up to isomorphism; labellings are not deduplicated.
    """
    alpha = normalize_alphabet(alphabet)
    for g in connected_graphs_upto(max_nodes, min_nodes):
        yield from labelings(g, alpha)


def normalize_alphabet(alphabet: Iterable) -> tuple[bytes, ...]:
    out = []
    for a in alphabet:
        b = a.encode("utf-8") if isinstance(a, str) else bytes(a)
        if b not in out:
            out.append(b)
    if not out:
        raise InputError("alphabet must be nonempty")
    return tuple(sorted(out))
