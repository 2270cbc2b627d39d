"""Graphs, configurations, identity assignments and radius-t balls.

Everything here is immutable.  Node inputs are ``bytes``; the empty string
``b""`` plays the role of the empty input.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence, Union

InputLike = Union[str, bytes]


class InputError(ValueError):
    """Raised for malformed graphs, files or arguments."""


def _as_bytes(value: InputLike) -> bytes:
    if isinstance(value, bytes):
        return value
    if isinstance(value, str):
        return value.encode("utf-8")
    raise InputError(f"node input must be str or bytes, got {type(value).__name__}")


@dataclass(frozen=True)
class Graph:
    """Simple connected undirected graph on nodes ``0 .. node_count-1``.

    ``edges`` may be given as any iterable of pairs; it is normalized to a
    frozenset of ``(u, v)`` tuples with ``u < v``.
    """

    node_count: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        n = self.node_count
        if not isinstance(n, int) or n < 0:
            raise InputError(f"node_count must be a non-negative integer, got {n!r}")
        raw = list(self.edges)
        normalized = set()
        for pair in raw:
            try:
                u, v = pair
            except (TypeError, ValueError):
                raise InputError(f"edge {pair!r} is not a pair") from None
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise InputError(f"self-loop at node {u}")
            e = (u, v) if u < v else (v, u)
            if e in normalized:
                raise InputError(f"duplicate edge {e}")
            normalized.add(e)
        object.__setattr__(self, "edges", frozenset(normalized))
        if n > 1 and not self._connected():
            raise InputError("graph is not connected")

    def _connected(self) -> bool:
        seen = {0}
        stack = [0]
        adj = self.adjacency
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.node_count

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in a) for a in self.adjacency)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (self.masks[u] >> v) & 1 == 1

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with node ``v`` renamed to ``perm[v]``."""
        return Graph(self.node_count, [(perm[u], perm[v]) for u, v in self.edges])


@dataclass(frozen=True)
class IdentityAssignment:
    ids: tuple[int, ...]

    def __post_init__(self):
        ids = tuple(self.ids)
        object.__setattr__(self, "ids", ids)
        for i in ids:
            if not isinstance(i, int) or i < 1:
                raise InputError(f"identity {i!r} is not a positive integer")
        if len(set(ids)) != len(ids):
            raise InputError("identities are not pairwise distinct")

    def __len__(self) -> int:
        return len(self.ids)

    def __getitem__(self, v: int) -> int:
        return self.ids[v]


@dataclass(frozen=True)
class Instance:
    """A configuration ``(G, x)``: connected graph plus one input per node."""

    graph: Graph
    inputs: tuple[bytes, ...]

    def __post_init__(self):
        inputs = tuple(_as_bytes(x) for x in self.inputs)
        object.__setattr__(self, "inputs", inputs)
        if len(inputs) != self.graph.node_count:
            raise InputError(
                f"{len(inputs)} inputs given for {self.graph.node_count} nodes")

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @cached_property
    def _ball_cache(self) -> dict:
        return {}

    def ball_core(self, root: int, t: int):
        """Cached ``(nodes, distances, structure)`` of the radius-t ball."""
        key = (root, t)
        core = self._ball_cache.get(key)
        if core is None:
            core = _ball_core(self.graph, root, t)
            self._ball_cache[key] = core
        return core

    def relabel(self, perm: Sequence[int]) -> "Instance":
        inputs = [b""] * self.node_count
        for v, x in enumerate(self.inputs):
            inputs[perm[v]] = x
        return Instance(self.graph.relabel(perm), tuple(inputs))

    def with_inputs(self, inputs: Iterable[InputLike]) -> "Instance":
        return Instance(self.graph, tuple(inputs))


def make_instance(n: int, edges: Iterable[tuple[int, int]],
                  inputs: Optional[Iterable[InputLike]] = None) -> Instance:
    if inputs is None:
        inputs = [b""] * n
    return Instance(Graph(n, edges), tuple(inputs))


def cycle(n: int, inputs=None) -> Instance:
    return make_instance(n, [(i, (i + 1) % n) for i in range(n)], inputs)


def path(n: int, inputs=None) -> Instance:
    return make_instance(n, [(i, i + 1) for i in range(n - 1)], inputs)


def complete(n: int, inputs=None) -> Instance:
    return make_instance(n, itertools.combinations(range(n), 2), inputs)


def star(leaves: int, inputs=None) -> Instance:
    return make_instance(leaves + 1, [(0, i) for i in range(1, leaves + 1)], inputs)


@dataclass(frozen=True)
class Ball:
    """Rooted radius-t view of a node.

    Local node 0 is the root; local nodes are listed in BFS order and
    ``nodes[j]`` is the index of local node ``j`` in the parent instance.
    Deciders must not read ``nodes``: it is bookkeeping for the checkers.
    """

    structure: Graph
    radius: int
    inputs: tuple[bytes, ...]
    distance_to_root: tuple[int, ...]
    nodes: tuple[int, ...]
    identities: Optional[tuple[int, ...]] = None
    certificates: Optional[tuple[bytes, ...]] = None
    root: int = field(default=0)

    @property
    def size(self) -> int:
        return self.structure.node_count

    @property
    def root_node(self) -> int:
        """Index of the root in the parent instance."""
        return self.nodes[self.root]

    def as_instance(self) -> Instance:
        return Instance(self.structure, self.inputs)

    def with_identities(self, ids: Optional[Sequence[int]]) -> "Ball":
        return replace(self, identities=None if ids is None else tuple(ids))


def _ball_core(graph: Graph, root: int, t: int):
    adj = graph.adjacency
    dist = {root: 0}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        if dist[u] == t:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                order.append(w)
                queue.append(w)
    local = {v: j for j, v in enumerate(order)}
    edges = []
    for v in order:
        for w in adj[v]:
            if v < w and w in local and not (dist[v] == t and dist[w] == t):
                edges.append((local[v], local[w]))
    structure = Graph(len(order), edges)
    return tuple(order), tuple(dist[v] for v in order), structure


def extract_ball(instance: Instance, ids: Optional[IdentityAssignment],
                 certs: Optional[Sequence[bytes]], root: int, t: int) -> Ball:
    """Radius-t ball around ``root``.

    Edges joining two nodes that are both at distance exactly ``t`` are
    dropped; every other edge induced on the ball is kept.
    """
    if not isinstance(root, int) or not 0 <= root < instance.node_count:
        raise InputError(f"root {root!r} is not a node of the instance")
    if t < 0:
        raise InputError(f"radius must be non-negative, got {t}")
    if ids is not None and len(ids) != instance.node_count:
        raise InputError("identity assignment length does not match node count")
    if certs is not None and len(certs) != instance.node_count:
        raise InputError("certificate vector length does not match node count")
    nodes, dist, structure = instance.ball_core(root, t)
    return Ball(
        structure=structure,
        radius=t,
        inputs=tuple(instance.inputs[v] for v in nodes),
        distance_to_root=dist,
        nodes=nodes,
        identities=None if ids is None else tuple(ids[v] for v in nodes),
        certificates=None if certs is None else tuple(certs[v] for v in nodes),
    )


@dataclass(frozen=True)
class RootedIsoWitness:
    """``mapping[j]`` is the local node of the second ball matched to ``j``."""

    mapping: tuple[int, ...]


def _node_signature(ball: Ball, v: int):
    return (ball.distance_to_root[v], ball.structure.degree(v), ball.inputs[v])


def rooted_isomorphic(b1: Ball, b2: Ball) -> Optional[RootedIsoWitness]:
    """Lexicographically least root-, adjacency- and input-preserving bijection."""
    if b1.radius != b2.radius:
        raise InputError(f"radius mismatch: {b1.radius} vs {b2.radius}")
    g1, g2 = b1.structure, b2.structure
    k = g1.node_count
    if k != g2.node_count or g1.edge_count != g2.edge_count:
        return None
    sig1 = [_node_signature(b1, v) for v in range(k)]
    sig2 = [_node_signature(b2, v) for v in range(k)]
    if sorted(sig1) != sorted(sig2) or sig1[b1.root] != sig2[b2.root]:
        return None

    candidates = [[w for w in range(k) if sig2[w] == sig1[v]] for v in range(k)]
    candidates[b1.root] = [b2.root]
    mapping = [-1] * k
    used = [False] * k
    adj1 = g1.adjacency

    def extend(v: int) -> bool:
        if v == k:
            return True
        for w in candidates[v]:
            if used[w]:
                continue
            # only earlier nodes are mapped; adjacency must agree with each
            ok = True
            for u in range(v):
                if (u in adj1[v]) != g2.has_edge(mapping[u], w):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = w
            used[w] = True
            if extend(v + 1):
                return True
            used[w] = False
        mapping[v] = -1
        return False

    if extend(0):
        return RootedIsoWitness(tuple(mapping))
    return None


def enumerate_identity_assignments(k: int, range_max: int) -> Iterator[tuple[int, ...]]:
    """Every injective map from ``k`` nodes into ``[1, range_max]``, in lex order."""
    if k < 0:
        raise InputError(f"node count must be non-negative, got {k}")
    if range_max < k:
        raise InputError(f"no injective assignment of {k} nodes into [1, {range_max}]")
    return itertools.permutations(range(1, range_max + 1), k)


# -- text format -----------------------------------------------------------

def parse_instance(text: str) -> tuple[Instance, Optional[IdentityAssignment]]:
    """Parse the line-based instance format.

    ``n m``, then ``m`` lines ``u v``, then ``n`` lines ``input <hex>``,
    then optionally ``n`` lines ``id <k>``.  Blank lines and ``#`` comments
    are ignored.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InputError("header: empty instance file")
    head = lines[0].split()
    if len(head) != 2:
        raise InputError(f"header: expected 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise InputError(f"header: expected integers, got {lines[0]!r}") from None
    if n < 1 or m < 0:
        raise InputError(f"header: invalid sizes n={n} m={m}")
    pos = 1
    edges = []
    for i in range(m):
        if pos >= len(lines):
            raise InputError(f"edge {i}: missing line")
        parts = lines[pos].split()
        if len(parts) != 2:
            raise InputError(f"edge {i}: expected 'u v', got {lines[pos]!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise InputError(f"edge {i}: non-integer endpoint in {lines[pos]!r}") from None
        pos += 1
    inputs = []
    for v in range(n):
        if pos >= len(lines):
            raise InputError(f"input {v}: missing line")
        parts = lines[pos].split()
        if parts[0] != "input" or len(parts) > 2:
            raise InputError(f"input {v}: expected 'input <hex>', got {lines[pos]!r}")
        try:
            inputs.append(bytes.fromhex(parts[1]) if len(parts) == 2 else b"")
        except ValueError:
            raise InputError(f"input {v}: bad hex {parts[1]!r}") from None
        pos += 1
    ids = None
    if pos < len(lines):
        raw = []
        for v in range(n):
            if pos >= len(lines):
                raise InputError(f"id {v}: missing line")
            parts = lines[pos].split()
            if len(parts) != 2 or parts[0] != "id":
                raise InputError(f"id {v}: expected 'id <k>', got {lines[pos]!r}")
            try:
                raw.append(int(parts[1]))
            except ValueError:
                raise InputError(f"id {v}: non-integer {parts[1]!r}") from None
            pos += 1
        if pos != len(lines):
            raise InputError(f"trailing content at line {lines[pos]!r}")
        ids = IdentityAssignment(tuple(raw))
    try:
        graph = Graph(n, edges)
    except InputError as exc:
        raise InputError(f"edges: {exc}") from None
    return Instance(graph, tuple(inputs)), ids


def format_instance(instance: Instance, ids: Optional[IdentityAssignment] = None) -> str:
    g = instance.graph
    out = [f"{g.node_count} {g.edge_count}"]
    out += [f"{u} {v}" for u, v in g.sorted_edges()]
    out += [f"input {x.hex()}".rstrip() for x in instance.inputs]
    if ids is not None:
        out += [f"id {i}" for i in ids.ids]
    return "\n".join(out) + "\n"


def load_instance(path) -> tuple[Instance, Optional[IdentityAssignment]]:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
