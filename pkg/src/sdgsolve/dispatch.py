"""Algorithm selection and component-wise solving.

Disconnected networks are solved per connected component and the results
merged: no coalition may span components (it would be disconnected and score
minus infinity), and stability never couples components either, because
joining a coalition with no neighbor is never profitable.
"""

from typing import Optional

from .core import (
    Outcome,
    ScoringVector,
    SocialNetwork,
    SolveResult,
    check_mode,
)
from .oracle import DEFAULT_AGENT_CAP, brute_force_solve
from .solver_fptdp import select_sz, solve_fpt
from .solver_twdp import solve_tw_ir, solve_tw_ns, solve_tw_welfare
from .solver_vc import compute_vertex_cover, solve_vc
from .treedecomp import NiceTreeDecomposition, compute_decomposition, make_nice

AUTO_BRUTE_N = 10
AUTO_TW_WIDTH = 4
AUTO_VC_SIZE = 8


def choose_algorithm(s: ScoringVector, G: SocialNetwork) -> str:
    """Deterministic automatic selection for one connected component."""
    if G.n <= AUTO_BRUTE_N:
        return "brute"
    if s.is_closed and compute_decomposition(G).width() <= AUTO_TW_WIDTH:
        return "twdp"
    if select_sz(s, G) is not None:
        return "fptdp"
    try:
        if len(compute_vertex_cover(G)) <= AUTO_VC_SIZE:
            return "vc"
    except Exception:
        pass
    return "brute-raised"


def _solve_component(s, G, mode, algo, sz, brute_cap):
    if algo == "auto":
        algo = choose_algorithm(s, G)
    if algo == "brute":
        return brute_force_solve(s, G, mode, cap=max(brute_cap, 0) or DEFAULT_AGENT_CAP)
    if algo == "brute-raised":
        result = brute_force_solve(s, G, mode, cap=G.n)
        if result is None:
            return None
        from dataclasses import replace

        return replace(result, algorithm="brute-raised")
    if algo == "twdp":
        ntd = make_nice(compute_decomposition(G))
        fn = {"welfare": solve_tw_welfare, "ir": solve_tw_ir, "ns": solve_tw_ns}[mode]
        return fn(s, G, ntd)
    if algo == "fptdp":
        return solve_fpt(s, G, sz=sz, mode=mode)
    if algo == "vc":
        return solve_vc(s, G, mode)
    raise ValueError(f"unknown algorithm {algo!r}")


def solve(
    s: ScoringVector,
    G: SocialNetwork,
    mode: str = "welfare",
    algo: str = "auto",
    sz: Optional[int] = None,
    decomposition: Optional[NiceTreeDecomposition] = None,
    brute_cap: int = DEFAULT_AGENT_CAP,
) -> Optional[SolveResult]:
    """Solve one instance end to end; None only in ns mode with no stable
    outcome.  A user-supplied nice decomposition forces the treewidth DP."""
    check_mode(mode)
    if algo not in ("auto", "brute", "twdp", "fptdp", "vc"):
        raise ValueError(f"unknown algorithm {algo!r}")
    if decomposition is not None:
        if algo not in ("auto", "twdp"):
            raise ValueError("a tree decomposition only drives the twdp algorithm")
        fn = {"welfare": solve_tw_welfare, "ir": solve_tw_ir, "ns": solve_tw_ns}[mode]
        return fn(s, G, decomposition)

    components = G.components()
    if len(components) == 1:
        return _solve_component(s, G, mode, algo, sz, brute_cap)

    blocks: list[tuple[int, ...]] = []
    welfare = 0
    algorithms = []
    optimal = True
    size_limited = False
    for comp in components:
        sub, relabel = G.induced(comp)
        back = {new: old for old, new in relabel.items()}
        result = _solve_component(s, sub, mode, algo, sz, brute_cap)
        if result is None:
            return None
        for block in result.outcome:
            blocks.append(tuple(back[v] for v in block))
        welfare += result.welfare
        algorithms.append(result.algorithm)
        optimal &= result.optimal
        size_limited |= result.size_limited
    return SolveResult(
        Outcome.from_blocks(blocks),
        welfare,
        mode,
        optimal,
        "+".join(sorted(set(algorithms))),
        size_limited=size_limited,
    )
