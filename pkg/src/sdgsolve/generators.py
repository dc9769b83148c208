"""Deterministic random-instance generators for benchmarks and tests."""

import random
from itertools import combinations

from .core import SocialNetwork
from .reductions import NaeFormula


def random_partial_ktree(
    n: int, k: int, seed: int, edge_keep: float = 0.7
) -> SocialNetwork:
    """Connected graph of treewidth at most k: grow a k-tree, then drop a
    share of its edges while keeping the graph connected."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    rng = random.Random(seed)
    base = min(n, k + 1)
    edges = {(u, v) for u, v in combinations(range(base), 2)}
    cliques = [tuple(range(base))]
    for v in range(base, n):
        host = list(rng.choice(cliques))
        rng.shuffle(host)
        attach = host[:k]
        for u in attach:
            edges.add((min(u, v), max(u, v)))
        for drop in range(len(attach)):
            cliques.append(tuple(sorted(set(attach[:drop] + attach[drop + 1 :]) | {v})))
        cliques.append(tuple(sorted(attach)))
    edge_list = sorted(edges)
    rng.shuffle(edge_list)
    kept = set(edge_list)
    for e in edge_list:
        if rng.random() < edge_keep:
            continue
        trial = kept - {e}
        if SocialNetwork(n, trial).is_connected_within((1 << n) - 1):
            kept = trial
    return SocialNetwork(n, kept)


def random_bounded_degree(
    n: int, max_deg: int, seed: int, extra_edges: int = 2
) -> SocialNetwork:
    """Connected graph with maximum degree at most max_deg."""
    if max_deg < 2 and n > 2:
        raise ValueError("max degree below 2 cannot connect more than 2 agents")
    rng = random.Random(seed)
    degree = [0] * n
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        candidates = [u for u in order[:i] if degree[u] < max_deg]
        if not candidates:
            candidates = [u for u in order[:i] if degree[u] < max_deg + 1]
        u = rng.choice(candidates)
        v = order[i]
        edges.add((min(u, v), max(u, v)))
        degree[u] += 1
        degree[v] += 1
    for _ in range(extra_edges * n):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e in edges or degree[u] >= max_deg or degree[v] >= max_deg:
            continue
        edges.add(e)
        degree[u] += 1
        degree[v] += 1
    G = SocialNetwork(n, edges)
    if G.max_degree() > max_deg:
        raise AssertionError("degree cap violated by construction")
    return G


def random_nae_formula(
    n_vars: int, n_clauses: int, seed: int
) -> NaeFormula:
    rng = random.Random(seed)
    clauses = []
    for _ in range(n_clauses):
        variables = rng.sample(range(1, n_vars + 1), min(3, n_vars))
        while len(variables) < 3:
            variables.append(rng.randrange(1, n_vars + 1))
        clause = tuple(v if rng.random() < 0.5 else -v for v in variables)
        clauses.append(clause)
    return NaeFormula(n_vars, tuple(clauses))


def random_solver_corpus_instance(
    seed: int,
    n_range: tuple[int, int] = (4, 9),
    tw_limit: int = 3,
    vc_limit: int = 5,
) -> SocialNetwork:
    """Connected instance within the treewidth and cover limits used by the
    cross-solver benchmark corpus; rejection-samples partial 3-trees."""
    from .solver_vc import compute_vertex_cover
    from .treedecomp import exact_treewidth

    rng = random.Random(seed)
    while True:
        n = rng.randrange(n_range[0], n_range[1] + 1)
        sub_seed = rng.randrange(1 << 30)
        G = random_partial_ktree(n, min(tw_limit, n - 1) or 1, sub_seed, edge_keep=rng.uniform(0.4, 0.9))
        if exact_treewidth(G) > tw_limit:
            continue
        if len(compute_vertex_cover(G)) > vc_limit:
            continue
        return G
