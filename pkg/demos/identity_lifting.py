"""Running an identity-based coloring checker without identities.

The checker lets only the smaller endpoint of a monochromatic edge object.
Given an upper bound on n, each node tries every identity assignment of its
ball and objects if any of them would.  The table shows what that costs.

    python demos/identity_lifting.py
"""

from localdecision.graph import cycle, star
from localdecision.id_lifting import OracleN, run_lifted, simulation_count
from localdecision.languages import coloring_language
from localdecision.model import edge_conflict_decider


def cost_table(inst, a):
    n = inst.node_count
    print(f"{'bound':>6} {'verdict':>8} {'simulations':>12} {'worst case':>11}")
    for bound in (n, n + 1, 2 * n):
        verdict, counts = run_lifted(inst, a, OracleN.uniform(n, bound))
        worst = sum(simulation_count(inst.ball_core(v, 1)[2].node_count, bound)
                    for v in range(n))
        print(f"{bound:>6} {str(verdict):>8} {sum(counts):>12} {worst:>11}")


if __name__ == "__main__":
    a = edge_conflict_decider(coloring_language())
    print("C6 properly 2-colored")
    cost_table(cycle(6, "121212"), a)
    print("\nC6 with one clash (early exit keeps the count down)")
    cost_table(cycle(6, "121211"), a)
    print("\nstar with 5 leaves: the centre sees all 6 nodes")
    cost_table(star(5, "122222"), a)
