import math

import pytest

from localdecision.generate import all_instances
from localdecision.graph import InputError, cycle, extract_ball, path
from localdecision.id_lifting import (OracleN, lift_to_anonymous, parse_oracle_bounds,
                                      planned_simulations, run_lifted, simulate_at,
                                      simulation_count)
from localdecision.languages import coloring_language, independent_set_language
from localdecision.model import LocalDecider, decides_correctly, edge_conflict_decider, run


def test_simulation_count_is_falling_factorial():
    for k in range(0, 6):
        for b in range(0, 9):
            want = math.factorial(b) // math.factorial(b - k) if b >= k else 0
            assert simulation_count(k, b) == want
    assert simulation_count(3, 4) == 24


def test_lifted_decider_is_anonymous_and_correct():
    lang = coloring_language()
    a = edge_conflict_decider(lang)
    for bound_of in (lambda n: n, lambda n: n + 1, lambda n: 2 * n):
        for inst in all_instances(4, "123"):
            n = inst.node_count
            lifted = lift_to_anonymous(a, OracleN.uniform(n, bound_of(n)))
            assert not lifted.uses_identities
            assert run(inst, lifted).accepted == lang(inst)


def test_run_lifted_agrees_with_lift_to_anonymous():
    lang = independent_set_language()
    a = edge_conflict_decider(lang)
    for inst in all_instances(4, "01"):
        oracle = OracleN.uniform(inst.node_count, inst.node_count + 1)
        verdict, _ = run_lifted(inst, a, oracle)
        assert verdict == run(inst, lift_to_anonymous(a, oracle))


def test_counts_with_and_without_early_exit():
    a = edge_conflict_decider(coloring_language())
    inst = path(3, "112")
    oracle = OracleN.uniform(3, 4)
    verdict, counts = run_lifted(inst, a, oracle, early_exit=False)
    # balls have sizes 2, 3, 2
    assert counts == [12, 24, 12]
    verdict2, counts2 = run_lifted(inst, a, oracle)
    assert verdict2 == verdict and not verdict.accepted
    assert counts2[2] == 12 and counts2[0] < 12  # node 0 stops at its first no


def test_bound_below_ball_size_says_no():
    ok, count = simulate_at(edge_conflict_decider(coloring_language()),
                            extract_ball(cycle(4, "1212"), None, None, 0, 1), 2)
    assert (ok, count) == (False, 0)


def test_unfaithful_oracle_is_conservative():
    lang = coloring_language()
    a = edge_conflict_decider(lang)
    inst = cycle(6, "121212")
    # bound 3 covers every ball but not the network: this decider still
    # accepts since it only looks at neighbours
    assert not OracleN.uniform(6, 3).is_faithful(inst)
    assert run_lifted(inst, a, OracleN.uniform(6, 3))[0].accepted
    assert not run_lifted(inst, a, OracleN.uniform(6, 2))[0].accepted


def test_identity_dependent_decider_needs_the_oracle():
    # accepts only if its own identity is small; wrong without all assignments
    def decide(ball):
        return ball.identities[0] <= 3

    a = LocalDecider(0, decide, uses_identities=True)
    inst = path(3)
    assert run_lifted(inst, a, OracleN.uniform(3, 3))[0].accepted
    assert not run_lifted(inst, a, OracleN.uniform(3, 4))[0].accepted


def test_mixed_bounds():
    a = edge_conflict_decider(coloring_language())
    inst = path(3, "121")
    verdict, counts = run_lifted(inst, a, OracleN((3, 4, 6)), early_exit=False)
    assert verdict.accepted
    assert counts == [simulation_count(2, 3), simulation_count(3, 4), simulation_count(2, 6)]
    assert planned_simulations(inst, 1, (3, 4, 6)) == counts


def test_oracle_parsing_and_validation():
    assert parse_oracle_bounds("3\n# c\n4\n", 2).bounds == (3, 4)
    with pytest.raises(InputError, match="line 1"):
        parse_oracle_bounds("x\n")
    with pytest.raises(InputError):
        parse_oracle_bounds("3\n", 2)
    with pytest.raises(InputError):
        OracleN((0,))
    with pytest.raises(InputError):
        run_lifted(path(3), edge_conflict_decider(coloring_language()), OracleN((3,)))


def test_enlarging_a_bound_never_turns_no_into_yes():
    # an identity-dependent decider: small identities must sit on "1" inputs
    def decide(ball):
        return ball.inputs[0] == b"1" or ball.identities[0] > 2

    a = LocalDecider(1, decide, uses_identities=True)
    for inst in all_instances(3, "12"):
        n = inst.node_count
        prev = None
        for b in range(n, n + 4):
            per_node = run_lifted(inst, a, OracleN.uniform(n, b))[0].per_node
            if prev is not None:
                assert all(p or not q for p, q in zip(prev, per_node))
            prev = per_node
