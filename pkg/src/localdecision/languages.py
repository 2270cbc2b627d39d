"""Distributed languages: sequential membership predicates over instances."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .graph import Instance, InputError


@dataclass(frozen=True)
class Language:
    name: str
    membership: Callable[[Instance], bool]
    hereditary: bool
    finite_alphabet: Optional[frozenset] = None

    def __call__(self, instance: Instance) -> bool:
        return bool(self.membership(instance))

    contains = __call__


def _proper_coloring(inst: Instance) -> bool:
    x = inst.inputs
    return all(x[u] != x[v] for u, v in inst.graph.edges)


def coloring_language() -> Language:
    return Language("coloring", _proper_coloring, hereditary=True)


def _independent(inst: Instance) -> bool:
    x = inst.inputs
    if any(v not in (b"0", b"1") for v in x):
        return False
    return not any(x[u] == b"1" and x[v] == b"1" for u, v in inst.graph.edges)


def independent_set_language() -> Language:
    """Selected nodes (input ``"1"``) are pairwise non-adjacent.

    Inputs other than ``"0"``/``"1"`` make the instance a nonmember.
    Maximality is deliberately not part of the language.
    """
    return Language("independent-set", _independent, hereditary=True,
                    finite_alphabet=frozenset({b"0", b"1"}))


def _acyclic(inst: Instance) -> bool:
    # instances are connected
    return inst.graph.edge_count == inst.node_count - 1


def forest_language() -> Language:
    return Language("forest", _acyclic, hereditary=True)


def size_at_most_language(k: int) -> Language:
    if not isinstance(k, int) or k < 1:
        raise InputError(f"size bound must be a positive integer, got {k!r}")
    return Language(f"size-at-most:{k}", lambda inst: inst.node_count <= k, hereditary=True)


def path_order(inst: Instance) -> Optional[list[int]]:
    """Nodes of a simple path listed end to end, or None if not a path.

    Starts from the lower-indexed endpoint.
    """
    g = inst.graph
    n = g.node_count
    if g.edge_count != n - 1 or any(g.degree(v) > 2 for v in range(n)):
        return None
    if n == 1:
        return [0]
    start = min(v for v in range(n) if g.degree(v) == 1)
    order = [start]
    prev = -1
    while len(order) < n:
        cur = order[-1]
        nxt = [w for w in g.neighbors(cur) if w != prev]
        prev = cur
        order.append(nxt[0])
    return order


def _windows(seq: list[bytes]) -> list[tuple[bytes, ...]]:
    w = min(3, len(seq))
    return [tuple(seq[i:i + w]) for i in range(len(seq) - w + 1)]


def path_pattern_language(alphabet: Iterable, allowed_windows: Iterable,
                          name: str = "path-pattern") -> Language:
    """Paths whose input sequence has every window of length ``min(3, n)`` allowed.

    A window is a sequence of symbols; strings such as ``"aba"`` are read one
    character per symbol.  A path qualifies if either reading direction
    works.  The language is flagged hereditary when the allowed windows are
    closed under taking contiguous sub-windows, which is exactly what
    deleting an endpoint needs.
    """
    alpha = frozenset(_symbol(a) for a in alphabet)
    if not alpha:
        raise InputError("path-pattern alphabet must be nonempty")
    windows = set()
    for w in allowed_windows:
        syms = tuple(_symbol(c) for c in w) if isinstance(w, str) else tuple(_symbol(c) for c in w)
        if not 1 <= len(syms) <= 3:
            raise InputError(f"window {w!r} must have length 1..3")
        if any(s not in alpha for s in syms):
            raise InputError(f"window {w!r} uses a symbol outside the alphabet")
        windows.add(syms)
    windows = frozenset(windows)

    def member(inst: Instance) -> bool:
        if any(x not in alpha for x in inst.inputs):
            return False
        order = path_order(inst)
        if order is None:
            return False
        seq = [inst.inputs[v] for v in order]
        return any(all(w in windows for w in _windows(s)) for s in (seq, seq[::-1]))

    closed = all(w[i:j] in windows
                 for w in windows for i in range(len(w)) for j in range(i + 1, len(w) + 1))
    return Language(name, member, hereditary=closed, finite_alphabet=alpha)


def _symbol(a) -> bytes:
    if isinstance(a, bytes):
        return a
    if isinstance(a, int):
        return bytes([a])
    return str(a).encode("utf-8")


def alternating_path_language() -> Language:
    return path_pattern_language("ab", ["aba", "bab", "ab", "ba", "a", "b"],
                                 name="path-pattern:alternating")


def load_path_pattern(path) -> Language:
    """Read ``{"alphabet": [...], "windows": [...]}`` from a JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return path_pattern_language(data["alphabet"], data["windows"],
                                     name=f"path-pattern:{path}")
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"language: cannot read path pattern {path!r}: {exc}") from None


def get_language(name: str) -> Language:
    """Resolve a registry name such as ``coloring`` or ``size-at-most:4``."""
    head, _, arg = name.partition(":")
    if head == "coloring" and not arg:
        return coloring_language()
    if head in ("independent-set", "independent_set", "is") and not arg:
        return independent_set_language()
    if head == "forest" and not arg:
        return forest_language()
    if head == "size-at-most":
        try:
            return size_at_most_language(int(arg))
        except ValueError:
            raise InputError(f"language: bad size bound in {name!r}") from None
    if head == "path-pattern":
        if arg == "alternating":
            return alternating_path_language()
        if not arg:
            raise InputError("language: path-pattern needs a file, e.g. path-pattern:pat.json")
        return load_path_pattern(arg)
    raise InputError(f"language: unknown language {name!r}")
