"""Running local deciders and checking the global decision rules.

A node's computation is a pure function of its ball: the anonymous model
hands the node its ball snapshot directly, and the identity-based model
additionally attaches identities to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .graph import (Ball, IdentityAssignment, Instance, InputError,
                    enumerate_identity_assignments, extract_ball)
from .languages import Language


@dataclass(frozen=True)
class LocalDecider:
    radius: int
    decide: Callable[[Ball], bool]
    uses_identities: bool = False
    name: str = "decider"

    def __post_init__(self):
        if self.radius < 0:
            raise InputError(f"decider radius must be non-negative, got {self.radius}")


@dataclass(frozen=True)
class Verdict:
    per_node: tuple[bool, ...]

    @property
    def accepted(self) -> bool:
        return all(self.per_node)

    @property
    def rejecting_nodes(self) -> list[int]:
        return [v for v, ok in enumerate(self.per_node) if not ok]

    def __str__(self) -> str:
        return "accept" if self.accepted else "reject"


def run(instance: Instance, decider: LocalDecider,
        ids: Optional[IdentityAssignment] = None) -> Verdict:
    """Evaluate ``decider`` on every node's ball.

    Anonymous deciders get balls with no identity field, whatever ``ids`` is.
    """
    if decider.uses_identities:
        if ids is None:
            raise InputError(f"decider {decider.name!r} needs an identity assignment")
        if len(ids) != instance.node_count:
            raise InputError("identity assignment length does not match node count")
    seen_ids = ids if decider.uses_identities else None
    t = decider.radius
    return Verdict(tuple(bool(decider.decide(extract_ball(instance, seen_ids, None, v, t)))
                         for v in range(instance.node_count)))


def hereditary_decider(lang: Language, t: int) -> LocalDecider:
    """Anonymous decider: yes iff the ball, read as an instance, is in ``lang``."""
    if not lang.hereditary:
        raise InputError(f"language {lang.name!r} is not hereditary")

    def decide(ball: Ball) -> bool:
        return lang(ball.as_instance())

    return LocalDecider(t, decide, uses_identities=False, name=f"hereditary[{lang.name}]")


def edge_conflict_decider(lang: Language, radius: int = 1) -> LocalDecider:
    """Decider that breaks symmetry with identities; it only looks at neighbours.

    On a conflicting edge only the endpoint with the smaller identity says
    no.  ``lang`` must be coloring (conflict = equal inputs) or
    independent-set (conflict = both selected; a malformed own input is
    rejected outright).
    """
    if lang.name == "coloring":
        def bad_own(x):
            return False

        def conflict(a, b):
            return a == b
    elif lang.name == "independent-set":
        def bad_own(x):
            return x not in (b"0", b"1")

        def conflict(a, b):
            return a == b == b"1"
    else:
        raise InputError(f"no identity-based decider registered for {lang.name!r}")

    def decide(ball: Ball) -> bool:
        ids = ball.identities
        x = ball.inputs
        if bad_own(x[0]):
            return False
        for w in ball.structure.neighbors(0):
            if conflict(x[0], x[w]) and ids[0] < ids[w]:
                return False
        return True

    if radius < 1:
        raise InputError("an edge-conflict decider needs radius >= 1")
    return LocalDecider(radius, decide, uses_identities=True, name=f"min-id[{lang.name}]")


@dataclass(frozen=True)
class Counterexample:
    instance: Instance
    ids: Optional[IdentityAssignment]
    verdict: Verdict
    member: bool

    def describe(self) -> str:
        rule = "member with a no" if self.member else "nonmember accepted"
        return f"{rule}: n={self.instance.node_count} edges={sorted(self.instance.graph.edges)} " \
               f"inputs={self.instance.inputs} ids={None if self.ids is None else self.ids.ids}"


def decides_correctly(lang: Language, decider: LocalDecider, instances: Iterable[Instance],
                      id_range_max: Optional[int] = None) -> Optional[Counterexample]:
    """First violation of the decision rules over ``instances``, or None.

    Identity-based deciders are run under every injective assignment into
    ``[1, id_range_max]``; this is factorial and meant for tiny instances.
    """
    for inst in instances:
        member = lang(inst)
        if decider.uses_identities:
            if id_range_max is None or id_range_max < inst.node_count:
                raise InputError(f"id_range_max={id_range_max} is below node count "
                                 f"{inst.node_count}")
            assignments = (IdentityAssignment(a) for a in
                           enumerate_identity_assignments(inst.node_count, id_range_max))
        else:
            assignments = [None]
        for ids in assignments:
            verdict = run(inst, decider, ids)
            if verdict.accepted != member:
                return Counterexample(inst, ids, verdict, member)
    return None
