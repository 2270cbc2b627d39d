"""Homomorphisms, t-local isomorphisms, seeds and lift-closure search."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .generate import connected_graphs, normalize_alphabet
from .graph import Graph, Instance, InputError
from .languages import Language, get_language


@dataclass(frozen=True)
class NodeMap:
    source: Instance
    target: Instance
    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(self.mapping))
        if len(self.mapping) != self.source.node_count:
            raise InputError("map is not total on the source")
        m = self.target.node_count
        if any(not 0 <= w < m for w in self.mapping):
            raise InputError("map sends a node outside the target")

    def __getitem__(self, v: int) -> int:
        return self.mapping[v]

    def is_onto(self) -> bool:
        return len(set(self.mapping)) == self.target.node_count


def is_homomorphism(m: NodeMap) -> bool:
    f = m.mapping
    src, dst = m.source, m.target
    if any(src.inputs[v] != dst.inputs[f[v]] for v in range(src.node_count)):
        return False
    return all(dst.graph.has_edge(f[u], f[v]) for u, v in src.graph.edges)


def _ball_maps_onto(m: NodeMap, v: int, t: int) -> bool:
    f = m.mapping
    nodes, dist, struct = m.source.ball_core(v, t)
    tnodes, tdist, tstruct = m.target.ball_core(f[v], t)
    if len(nodes) != len(tnodes) or struct.edge_count != tstruct.edge_count:
        return False
    tpos = {w: j for j, w in enumerate(tnodes)}
    img = []
    for a in nodes:
        j = tpos.get(f[a])
        if j is None:
            return False
        img.append(j)
    if len(set(img)) != len(img):
        return False
    if any(dist[a] != tdist[j] for a, j in enumerate(img)):
        return False
    # injective on nodes, equal edge counts: edge images exhaust the target ball
    return all(tstruct.has_edge(img[a], img[b]) for a, b in struct.edges)


def is_t_local_isomorphism(m: NodeMap, t: int) -> bool:
    """Homomorphism whose restriction to every radius-t ball is a rooted
    isomorphism onto the ball around the image."""
    if t < 0:
        raise InputError(f"radius must be non-negative, got {t}")
    if not is_homomorphism(m):
        return False
    return all(_ball_maps_onto(m, v, t) for v in range(m.source.node_count))


def _search_order(g: Graph, inputs: Sequence[bytes]) -> list[int]:
    # connected order: next node is the best-ranked one touching the assigned set
    def key(v):
        return (-g.degree(v), inputs[v], v)

    n = g.node_count
    first = min(range(n), key=key)
    order = [first]
    placed = {first}
    frontier = set(g.neighbors(first))
    while len(order) < n:
        v = min(frontier, key=key)
        frontier.discard(v)
        order.append(v)
        placed.add(v)
        frontier.update(w for w in g.neighbors(v) if w not in placed)
    return order


def iter_t_local_isomorphisms(source: Instance, target: Instance, t: int) -> Iterator[NodeMap]:
    """Every t-local isomorphism from ``source`` to ``target``, in backtracking order."""
    if t < 0:
        raise InputError(f"radius must be non-negative, got {t}")
    n, m = source.node_count, target.node_count
    if t >= 1 and m > n:
        return  # t-local isomorphisms are onto
    sg, tg = source.graph, target.graph
    sx, tx = source.inputs, target.inputs
    order = _search_order(sg, sx)
    pos = {v: i for i, v in enumerate(order)}
    # neighbours assigned before v, in order
    earlier = [[u for u in sg.neighbors(v) if pos[u] < pos[v]] for v in order]

    def compatible(v, w):
        if sx[v] != tx[w]:
            return False
        return t == 0 or sg.degree(v) == tg.degree(w)

    first_cands = [w for w in range(m) if compatible(order[0], w)]
    f = [-1] * n

    def extend(i):
        if i == n:
            cand = NodeMap(source, target, tuple(f))
            if is_t_local_isomorphism(cand, t):
                if t >= 1 and not cand.is_onto():
                    raise AssertionError("t-local isomorphism that is not onto")
                yield cand
            return
        v = order[i]
        back = earlier[i]
        if back:
            pool = tg.neighbors(f[back[0]])
        else:
            pool = range(m) if i else first_cands
        for w in pool:
            if not compatible(v, w):
                continue
            ok = all(tg.has_edge(f[u], w) for u in back)
            if ok and t >= 1:
                # neighbourhoods must map injectively
                for u in back:
                    if any(f[x] == w for x in sg.neighbors(u) if x != v and f[x] >= 0):
                        ok = False
                        break
            if not ok:
                continue
            f[v] = w
            yield from extend(i + 1)
            f[v] = -1

    yield from extend(0)


def find_t_local_isomorphism(source: Instance, target: Instance, t: int) -> Optional[NodeMap]:
    return next(iter_t_local_isomorphisms(source, target, t), None)


def is_seed(h: Instance, g: Instance) -> bool:
    """True iff there is a 1-local isomorphism from ``g`` onto ``h``."""
    return find_t_local_isomorphism(g, h, 1) is not None


def compose(f: NodeMap, g: NodeMap) -> NodeMap:
    """``f`` after ``g``; ``g.target`` must be ``f.source``."""
    if g.target != f.source:
        raise InputError("cannot compose: g's target is not f's source")
    return NodeMap(g.source, f.target, tuple(f.mapping[w] for w in g.mapping))


@dataclass(frozen=True)
class LiftCounterexample:
    """``big`` is t-local isomorphic to ``small``; ``small`` is in L, ``big`` is not."""

    big: Instance
    small: Instance
    witness: NodeMap

    def holds(self, lang: Language, t: int) -> bool:
        return (self.witness.source == self.big and self.witness.target == self.small
                and is_t_local_isomorphism(self.witness, t)
                and lang(self.small) and not lang(self.big))


def _degree_set(g: Graph) -> frozenset:
    return frozenset(g.degree(v) for v in range(g.node_count))


def _bare(g: Graph) -> Instance:
    return Instance(g, (b"",) * g.node_count)


def _counterexamples_for(big: Graph, lang: Language, t: int, alpha: tuple[bytes, ...],
                         member_cache: dict) -> Iterator[LiftCounterexample]:
    # Lifts of (G', x') carry the pulled-back inputs x' o f, so it suffices to
    # enumerate maps between bare graphs and then inputs on the small side.
    # An equal-size t-local isomorphism (t >= 1) between connected graphs is an
    # isomorphism, which membership cannot tell apart, so only smaller targets
    # are tried.
    n = big.node_count
    degs = _degree_set(big)
    big_bare = _bare(big)
    for n_small in range(1, n):
        for small in connected_graphs(n_small):
            if _degree_set(small) != degs:
                continue
            members = member_cache.get(small)
            if members is None:
                members = [xs for xs in itertools.product(alpha, repeat=n_small)
                           if lang(Instance(small, xs))]
                member_cache[small] = members
            if not members:
                continue
            seen = set()
            for f in iter_t_local_isomorphisms(big_bare, _bare(small), t):
                for xs in members:
                    pulled = tuple(xs[w] for w in f.mapping)
                    if (xs, pulled) in seen:
                        continue
                    seen.add((xs, pulled))
                    lifted = Instance(big, pulled)
                    if lang(lifted):
                        continue
                    small_inst = Instance(small, xs)
                    yield LiftCounterexample(lifted, small_inst,
                                             NodeMap(lifted, small_inst, f.mapping))


def iter_lift_closure_counterexamples(lang: Language, t: int, max_nodes: int,
                                      alphabet: Iterable = (b"",)) -> Iterator[LiftCounterexample]:
    """All lift-closure violations among instances with at most ``max_nodes`` nodes.

    Ordered by lift size, lift graph, target size, target graph, map, inputs.
    """
    if t < 1:
        raise InputError(f"lift closure needs t >= 1, got {t}")
    alpha = normalize_alphabet(alphabet)
    cache: dict = {}
    for n in range(2, max_nodes + 1):
        for big in connected_graphs(n):
            yield from _counterexamples_for(big, lang, t, alpha, cache)


def _chunk_worker(args):
    lang_name, t, alpha, graphs, want_all = args
    lang = get_language(lang_name)
    cache: dict = {}
    found = []
    for big in graphs:
        for cx in _counterexamples_for(big, lang, t, alpha, cache):
            found.append(cx)
            if not want_all:
                return found
    return found


def lift_closure_counterexamples(lang: Language, t: int, max_nodes: int,
                                 alphabet: Iterable = (b"",), first_only: bool = False,
                                 workers: int = 1) -> list[LiftCounterexample]:
    """List the violations (or just the first); identical for any ``workers``.

    With ``workers > 1`` the lift graphs are split into contiguous chunks and
    processed in separate processes; the language must be resolvable by name.
    """
    if workers <= 1:
        it = iter_lift_closure_counterexamples(lang, t, max_nodes, alphabet)
        return list(itertools.islice(it, 1)) if first_only else list(it)
    if t < 1:
        raise InputError(f"lift closure needs t >= 1, got {t}")
    alpha = normalize_alphabet(alphabet)
    bigs = [g for n in range(2, max_nodes + 1) for g in connected_graphs(n)]
    size = max(1, -(-len(bigs) // (workers * 4)))
    chunks = [bigs[i:i + size] for i in range(0, len(bigs), size)]
    out: list[LiftCounterexample] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for found in pool.map(_chunk_worker,
                              [(lang.name, t, alpha, c, not first_only) for c in chunks]):
            out.extend(found)
            if first_only and out:
                return out[:1]
    return out


def lift_closure_counterexample(lang: Language, t: int, max_nodes: int,
                                alphabet: Iterable = (b"",),
                                workers: int = 1) -> Optional[LiftCounterexample]:
    """First violation of t-closure under lift up to ``max_nodes`` nodes.

    None means only that no violation exists at this scale.
    """
    found = lift_closure_counterexamples(lang, t, max_nodes, alphabet, first_only=True,
                                         workers=workers)
    return found[0] if found else None


def random_lift(base: Instance, sheets: int, rng) -> tuple[Instance, NodeMap]:
    """A random connected covering instance of ``base`` with its projection.

    Each edge ``{u, v}`` gets a random permutation ``p`` of the sheets and
    lifts to the edges ``(u, i) -- (v, p[i])``; the component containing
    ``(0, 0)`` is kept.  ``rng`` is a ``random.Random``.
    """
    perms = {e: rng.sample(range(sheets), sheets) for e in base.graph.sorted_edges()}
    adj: dict = {}
    for (u, v), p in perms.items():
        for i in range(sheets):
            adj.setdefault((u, i), []).append((v, p[i]))
            adj.setdefault((v, p[i]), []).append((u, i))
    start = (0, 0)
    index = {start: 0}
    queue = [start]
    for node in queue:
        for w in sorted(adj.get(node, ())):
            if w not in index:
                index[w] = len(index)
                queue.append(w)
    edges = {tuple(sorted((index[a], index[b]))) for a in index for b in adj.get(a, ())}
    inputs = [b""] * len(index)
    proj = [0] * len(index)
    for (u, i), j in index.items():
        inputs[j] = base.inputs[u]
        proj[j] = u
    lifted = Instance(Graph(len(index), edges), tuple(inputs))
    return lifted, NodeMap(lifted, base, tuple(proj))
