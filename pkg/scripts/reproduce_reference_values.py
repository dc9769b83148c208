#!/usr/bin/env python3
"""Recompute the headline numbers on the three reference networks.

Network A (7 agents): two hubs over a triangle with one pendant each.
Network B (10 agents): 5-path with both endpoints attached to a 5-clique;
the unique welfare optimum is not individually rational.
Network C (10 agents): 5-path with endpoints attached to a 4-clique plus a
pendant on the path center; the IR optimum is not Nash stable.
"""

import time

from sdgsolve import (
    Outcome,
    ScoringVector,
    SocialNetwork,
    agent_utility,
    brute_force_solve,
    social_welfare,
    solve_fpt,
    solve_tw_welfare,
    solve_vc,
)
from sdgsolve.treedecomp import nice_decomposition


def network_a() -> SocialNetwork:
    edges = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4),
             (2, 3), (3, 4), (4, 2), (0, 5), (1, 6)]
    return SocialNetwork(7, edges)


def network_b() -> SocialNetwork:
    edges = [(0, 1), (1, 2), (2, 3), (3, 4)]
    clique = range(5, 10)
    edges += [(u, v) for u in clique for v in clique if u < v]
    edges += [(0, k) for k in clique] + [(4, k) for k in clique]
    return SocialNetwork(10, edges)


def network_c() -> SocialNetwork:
    edges = [(0, 1), (1, 2), (2, 3), (3, 4)]
    clique = range(5, 9)
    edges += [(u, v) for u in clique for v in clique if u < v]
    edges += [(0, k) for k in clique] + [(4, k) for k in clique] + [(2, 9)]
    return SocialNetwork(10, edges)


def main():
    A = network_a()
    ntd = nice_decomposition(A)
    for scores, expect in (((1, 0, -1), 18), ((1, -3), 14)):
        s = ScoringVector(scores)
        print(f"network A, scores {scores}:")
        for name, fn in (
            ("brute", lambda: brute_force_solve(s, A, "welfare")),
            ("twdp", lambda: solve_tw_welfare(s, A, ntd)),
            ("fptdp", lambda: solve_fpt(s, A, sz=7)),
            ("vc", lambda: solve_vc(s, A, "welfare")),
        ):
            t = time.perf_counter()
            result = fn()
            ms = (time.perf_counter() - t) * 1000
            flag = "ok" if result.welfare == expect else "MISMATCH"
            print(f"  {name:6s} welfare {result.welfare}  ({ms:.0f} ms)  {flag}")
    hub_split = Outcome.from_blocks([[0, 1, 2, 3, 4], [5], [6]])
    print(f"network A, hub partition under (1,-3): "
          f"{social_welfare(ScoringVector((1, -3)), A, hub_split)} (expect 12)")

    s6 = ScoringVector((1, 1, -1, -1, -1, -1))
    B = network_b()
    wf = brute_force_solve(s6, B, "welfare")
    ir = brute_force_solve(s6, B, "ir")
    print(f"network B: welfare {wf.welfare} (expect 62), "
          f"center utility {agent_utility(s6, B, wf.outcome, 2)} (expect -1), "
          f"IR {ir.welfare} (expect 60)")

    C = network_c()
    ir = brute_force_solve(s6, C, "ir")
    ns = brute_force_solve(s6, C, "ns")
    print(f"network C: IR {ir.welfare} (expect 48), NS {ns.welfare} (expect 46)")
    print(f"  NS outcome: {ns.outcome.coalitions}")


if __name__ == "__main__":
    main()
