"""Turning an identity-based decider into an anonymous one.

Each node is told an upper bound ``n_u`` on the number of nodes.  It then
runs the original decider on its own ball under every injective identity
assignment into ``[1, n_u]`` and says no as soon as one run says no.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .graph import Ball, Instance, InputError, enumerate_identity_assignments, extract_ball
from .model import LocalDecider, Verdict


@dataclass(frozen=True)
class OracleN:
    """Per-node upper bounds on the node count; bounds may differ per node."""

    bounds: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bounds", tuple(self.bounds))
        for b in self.bounds:
            if not isinstance(b, int) or b < 1:
                raise InputError(f"oracle bound {b!r} is not a positive integer")

    @classmethod
    def uniform(cls, n_nodes: int, bound: int) -> "OracleN":
        return cls((bound,) * n_nodes)

    def bound_at(self, node: int) -> int:
        return self.bounds[node]

    def is_faithful(self, instance: Instance) -> bool:
        return len(self.bounds) == instance.node_count and \
            all(b >= instance.node_count for b in self.bounds)


def simulation_count(ball_size: int, bound: int) -> int:
    """Number of injective identity assignments of a ball: the falling factorial."""
    if bound < ball_size:
        return 0
    return math.perm(bound, ball_size)


def simulate_at(a: LocalDecider, ball: Ball, bound: int,
                early_exit: bool = True) -> tuple[bool, int]:
    """Run ``a`` on ``ball`` under every identity assignment into ``[1, bound]``.

    Returns ``(output, simulations_performed)``.  With fewer identities than
    ball nodes there is nothing to simulate and the answer is no.
    """
    if bound < ball.size:
        return False, 0
    answer = True
    count = 0
    parts = (ball.structure, ball.radius, ball.inputs, ball.distance_to_root, ball.nodes)
    for ids in enumerate_identity_assignments(ball.size, bound):
        count += 1
        if not a.decide(Ball(*parts, identities=ids)):
            answer = False
            if early_exit:
                break
    return answer, count


def lift_to_anonymous(a: LocalDecider, oracle: OracleN, early_exit: bool = True) -> LocalDecider:
    """Anonymous decider of the same radius that simulates ``a`` at every node.

    The returned decider only reads the oracle bound of the ball's root; it
    strips any identities before simulating.
    """
    def decide(ball: Ball) -> bool:
        bare = ball.with_identities(None)
        return simulate_at(a, bare, oracle.bound_at(ball.root_node), early_exit)[0]

    return LocalDecider(a.radius, decide, uses_identities=False, name=f"lifted[{a.name}]")


def run_lifted(instance: Instance, a: LocalDecider, oracle: OracleN,
               early_exit: bool = True) -> tuple[Verdict, list[int]]:
    """Like ``run(instance, lift_to_anonymous(a, oracle))`` but also counts simulations."""
    if len(oracle.bounds) != instance.node_count:
        raise InputError("oracle bounds length does not match node count")
    outputs = []
    counts = []
    for v in range(instance.node_count):
        ball = extract_ball(instance, None, None, v, a.radius)
        ok, c = simulate_at(a, ball, oracle.bound_at(v), early_exit)
        outputs.append(ok)
        counts.append(c)
    return Verdict(tuple(outputs)), counts


def parse_oracle_bounds(text: str, n_nodes: Optional[int] = None) -> OracleN:
    """One positive integer per line (``#`` comments allowed)."""
    vals = []
    for i, line in enumerate(text.splitlines()):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vals.append(int(line))
        except ValueError:
            raise InputError(f"oracle-bounds line {i + 1}: not an integer: {line!r}") from None
    if n_nodes is not None and len(vals) != n_nodes:
        raise InputError(f"oracle-bounds: {len(vals)} bounds for {n_nodes} nodes")
    return OracleN(tuple(vals))


def planned_simulations(instance: Instance, radius: int, bounds: Sequence[int]) -> list[int]:
    """Worst-case simulation count per node, for warning before a run."""
    return [simulation_count(extract_ball(instance, None, None, v, radius).size, bounds[v])
            for v in range(instance.node_count)]
