"""Map certificates and the anonymous nondeterministic verifier.

Every node is given a certificate ``(i, G', x')``: a claimed map of the
whole network with nodes labelled ``1..n'``, and the claim "I am node i".
A node accepts iff every certificate in its ball carries the same map, the
labels embed its ball as a rooted isomorphism onto the ball around ``i`` in
the map, and the map itself is in the language.

Wire format of one certificate (big-endian)::

    u16 n'  | u16 i | n'(n'-1)/2 adjacency bits, upper triangle row-major,
    MSB first, zero-padded to a byte | n' x (u16 length, input bytes)
"""

from __future__ import annotations

import itertools
import struct
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Optional, Sequence, Union

from .generate import connected_graphs
from .graph import Ball, Graph, Instance, InputError, extract_ball
from .languages import Language
from .lift import find_t_local_isomorphism
from .model import Verdict


class CertificateError(InputError):
    pass


@dataclass(frozen=True)
class MapCertificate:
    label: int
    map_graph: Graph
    map_inputs: tuple[bytes, ...]

    def __post_init__(self):
        n = self.map_graph.node_count
        if len(self.map_inputs) != n:
            raise CertificateError("map inputs do not match map graph size")
        if not 1 <= self.label <= n:
            raise CertificateError(f"label {self.label} outside [1, {n}]")

    @cached_property
    def map_instance(self) -> Instance:
        return Instance(self.map_graph, self.map_inputs)

    def encode(self) -> bytes:
        n = self.map_graph.node_count
        if n > 0xFFFF:
            raise CertificateError("map graph too large for the wire format")
        bits = 0
        nbits = n * (n - 1) // 2
        k = 0
        for u in range(n):
            for v in range(u + 1, n):
                if self.map_graph.has_edge(u, v):
                    bits |= 1 << (nbits - 1 - k)
                k += 1
        nbytes = (nbits + 7) // 8
        adj = (bits << (nbytes * 8 - nbits)).to_bytes(nbytes, "big") if nbytes else b""
        parts = [struct.pack(">HH", n, self.label), adj]
        for x in self.map_inputs:
            if len(x) > 0xFFFF:
                raise CertificateError("input too long for the wire format")
            parts.append(struct.pack(">H", len(x)))
            parts.append(x)
        return b"".join(parts)

    @classmethod
    def decode(cls, data: bytes) -> "MapCertificate":
        if len(data) < 4:
            raise CertificateError("certificate shorter than its header")
        n, label = struct.unpack_from(">HH", data, 0)
        nbits = n * (n - 1) // 2
        nbytes = (nbits + 7) // 8
        pos = 4 + nbytes
        if len(data) < pos:
            raise CertificateError("truncated adjacency block")
        bits = int.from_bytes(data[4:pos], "big") >> (nbytes * 8 - nbits) if nbytes else 0
        if nbytes and int.from_bytes(data[4:pos], "big") & ((1 << (nbytes * 8 - nbits)) - 1):
            raise CertificateError("nonzero padding in adjacency block")
        edges = []
        k = 0
        for u in range(n):
            for v in range(u + 1, n):
                if (bits >> (nbits - 1 - k)) & 1:
                    edges.append((u, v))
                k += 1
        inputs = []
        for _ in range(n):
            if len(data) < pos + 2:
                raise CertificateError("truncated input length")
            (ln,) = struct.unpack_from(">H", data, pos)
            pos += 2
            if len(data) < pos + ln:
                raise CertificateError("truncated input bytes")
            inputs.append(bytes(data[pos:pos + ln]))
            pos += ln
        if pos != len(data):
            raise CertificateError("trailing bytes after certificate")
        try:
            graph = Graph(n, edges)
        except InputError as exc:
            raise CertificateError(f"map graph: {exc}") from None
        return cls(label, graph, tuple(inputs))


CertLike = Union[bytes, MapCertificate]


def _as_raw(cert: CertLike) -> bytes:
    return cert.encode() if isinstance(cert, MapCertificate) else bytes(cert)


def canonical_bfs_labels(instance: Instance) -> list[int]:
    """Label nodes 1..n in BFS order from node 0, neighbours in index order."""
    adj = instance.graph.adjacency
    order = [0]
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    labels = [0] * instance.node_count
    for i, v in enumerate(order):
        labels[v] = i + 1
    return labels


def certificates_from_map(target: Instance, mapping: Sequence[int]) -> list[MapCertificate]:
    """Certificates claiming node ``v`` is node ``mapping[v]`` of ``target``."""
    return [MapCertificate(w + 1, target.graph, target.inputs) for w in mapping]


def honest_certificates(instance: Instance) -> list[MapCertificate]:
    """The instance's own map, under the canonical BFS labelling."""
    labels = canonical_bfs_labels(instance)
    perm = [lab - 1 for lab in labels]
    copy = instance.relabel(perm)
    return certificates_from_map(copy, perm)


@lru_cache(maxsize=4096)
def _decode_cached(data: bytes) -> MapCertificate:
    return MapCertificate.decode(data)


def verify_node(ball: Ball, lang: Language, t: int) -> bool:
    """Run the three certificate tests at the root of ``ball``."""
    raw = ball.certificates
    if raw is None or ball.radius != t:
        return False
    own = raw[0]
    # (1) same map everywhere in the ball: certificates agree outside the label
    if any(len(c) < 4 or c[:2] != own[:2] or c[4:] != own[4:] for c in raw):
        return False
    try:
        mine = _decode_cached(bytes(own))
    except CertificateError:
        return False
    n_map = mine.map_graph.node_count
    labels = [int.from_bytes(c[2:4], "big") for c in raw]
    if any(not 1 <= lab <= n_map for lab in labels):
        return False
    target = mine.map_instance
    # (2) labels give a rooted isomorphism onto the ball around our label
    img_ball = extract_ball(target, None, None, mine.label - 1, t)
    if img_ball.size != ball.size or img_ball.structure.edge_count != ball.structure.edge_count:
        return False
    pos = {w: j for j, w in enumerate(img_ball.nodes)}
    img = []
    for lab in labels:
        j = pos.get(lab - 1)
        if j is None:
            return False
        img.append(j)
    if len(set(img)) != len(img) or img[0] != 0:
        return False
    for a, j in enumerate(img):
        if ball.inputs[a] != img_ball.inputs[j] or \
                ball.distance_to_root[a] != img_ball.distance_to_root[j]:
            return False
    if not all(img_ball.structure.has_edge(img[a], img[b]) for a, b in ball.structure.edges):
        return False
    # (3) the map is a member
    return lang(target)


def verify(instance: Instance, certs: Sequence[CertLike], lang: Language, t: int) -> Verdict:
    if len(certs) != instance.node_count:
        raise InputError(f"{len(certs)} certificates for {instance.node_count} nodes")
    raw = [_as_raw(c) for c in certs]
    return Verdict(tuple(verify_node(extract_ball(instance, None, raw, v, t), lang, t)
                         for v in range(instance.node_count)))


def _target_inputs(instance: Instance, n_small: int) -> Iterator[tuple[bytes, ...]]:
    # onto and input-preserving: target inputs come from the instance's inputs
    values = sorted(set(instance.inputs))
    return itertools.product(values, repeat=n_small)


def accepting_target(instance: Instance, lang: Language, t: int,
                     max_target_nodes: Optional[int] = None):
    """First ``(target, map)`` with ``instance`` t-local isomorphic to a member target."""
    n = instance.node_count
    cap = n if max_target_nodes is None else min(n, max_target_nodes)
    for n_small in range(1, cap + 1):
        for g in connected_graphs(n_small):
            for xs in _target_inputs(instance, n_small):
                target = Instance(g, xs)
                if not lang(target):
                    continue
                f = find_t_local_isomorphism(instance, target, t)
                if f is not None:
                    return target, f
    return None


def acceptance_oracle(instance: Instance, lang: Language, t: int,
                      max_target_nodes: Optional[int] = None) -> bool:
    """Whether some map-shaped certificate vector makes the verifier accept."""
    return accepting_target(instance, lang, t, max_target_nodes) is not None


def certificate_size_bits(certs: Sequence[CertLike]) -> list[int]:
    return [8 * len(_as_raw(c)) for c in certs]


def format_certificates(certs: Sequence[CertLike]) -> str:
    """One hex-encoded certificate per line, in node order."""
    return "".join(_as_raw(c).hex() + "\n" for c in certs)


def parse_certificates(text: str) -> list[bytes]:
    out = []
    for i, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(bytes.fromhex(line))
        except ValueError:
            raise InputError(f"certs line {i + 1}: bad hex") from None
    return out


def exhaustive_certificate_search(instance: Instance, lang: Language, t: int,
                                  alphabet: Sequence[bytes],
                                  max_map_nodes: Optional[int] = None) -> Optional[list[bytes]]:
    """Brute force: first map-shaped certificate vector the verifier accepts.

    Tries every connected map graph up to ``max_map_nodes`` nodes (default:
    the instance size) up to isomorphism, every input vector over
    ``alphabet`` and every label vector in ``[1, n']^n``.  Nonuniform
    certificate vectors are not tried: on a connected instance two
    different maps meet on some edge and both endpoints reject.  Maps outside
    the language are skipped for the same reason: every node rejects.  Each
    node's test runs once all labels in its ball are fixed, and results are
    memoized on the ball's labels.  Assumes ``t >= 1``.
    """
    if t < 1:
        raise InputError(f"certificate search needs t >= 1, got {t}")
    n = instance.node_count
    cap = n if max_map_nodes is None else max_map_nodes
    balls = [extract_ball(instance, None, None, v, t) for v in range(n)]
    # BFS order from node 0 keeps balls filling up early
    bfs = canonical_bfs_labels(instance)
    order = sorted(range(n), key=lambda v: bfs[v])
    pos = {v: i for i, v in enumerate(order)}
    ready: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        ready[max(pos[w] for w in balls[v].nodes)].append(v)

    for n_map in range(1, cap + 1):
        for g in connected_graphs(n_map):
            for xs in itertools.product(alphabet, repeat=n_map):
                if not lang(Instance(g, xs)):
                    continue  # test (3) fails at every node
                enc = [None] + [MapCertificate(i, g, xs).encode() for i in range(1, n_map + 1)]
                memo: dict = {}
                labels = [0] * n

                def node_ok(v):
                    key = (v, tuple(labels[w] for w in balls[v].nodes))
                    ok = memo.get(key)
                    if ok is None:
                        ball = Ball(balls[v].structure, t, balls[v].inputs,
                                    balls[v].distance_to_root, balls[v].nodes,
                                    certificates=tuple(enc[lab] for lab in key[1]))
                        ok = verify_node(ball, lang, t)
                        memo[key] = ok
                    return ok

                def extend(i):
                    if i == n:
                        return True
                    v = order[i]
                    for lab in range(1, n_map + 1):
                        if xs[lab - 1] != instance.inputs[v]:
                            continue  # v's own test (2) compares these at the root
                        labels[v] = lab
                        if all(node_ok(u) for u in ready[i]) and extend(i + 1):
                            return True
                    labels[v] = 0
                    return False

                if extend(0):
                    return [enc[lab] for lab in labels]
    return None
