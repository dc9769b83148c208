"""Canonical labeling of small vertex-colored graphs with a fixed vertex set.

Used by the coalition-topology solver to deduplicate DP states: anonymous
vertices may be permuted freely within equal colors, named vertices are fixed.
Refinement narrows the candidate orders, then a branch-and-prune search picks
the lexicographically smallest row encoding, which is a canonical form.
"""

from .core import ResourceLimitError

_BRANCH_BUDGET = 50_000


def canonical_order(
    vertices: list,
    colors: dict,
    fixed_neighbors: dict,
    adjacency: dict,
) -> tuple:
    """Canonical ordering of ``vertices``.

    ``colors[v]`` is any hashable; ``fixed_neighbors[v]`` a frozenset of fixed
    (named) ids; ``adjacency[v]`` the set of neighbors among ``vertices``.
    Two inputs that differ by a color/edge-preserving permutation map to the
    same ordering of structure.
    """
    if not vertices:
        return ()
    # iterative refinement against both the fixed boundary and internal edges
    color = {v: (colors[v], tuple(sorted(fixed_neighbors[v]))) for v in vertices}
    while True:
        ranked = {c: i for i, c in enumerate(sorted(set(color.values())))}
        refined = {
            v: (ranked[color[v]], tuple(sorted(ranked[color[u]] for u in adjacency[v])))
            for v in vertices
        }
        if len(set(refined.values())) == len(set(color.values())):
            color = refined
            break
        color = refined

    best: list = [None]
    budget = [_BRANCH_BUDGET]

    def row(v, placed):
        return (
            color[v],
            tuple(1 if u in adjacency[v] else 0 for u in placed),
        )

    def search(placed, remaining, rows):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError("canonical labeling budget exceeded")
        if not remaining:
            key = tuple(rows)
            if best[0] is None or key < best[0][0]:
                best[0] = (key, tuple(placed))
            return
        candidates = {}
        for v in remaining:
            candidates.setdefault(row(v, placed), []).append(v)
        min_row = min(candidates)
        if best[0] is not None:
            prefix = tuple(rows) + (min_row,)
            if prefix > best[0][0][: len(prefix)]:
                return
        for v in candidates[min_row]:
            search(
                placed + [v],
                [u for u in remaining if u is not v],
                rows + [min_row],
            )

    search([], list(vertices), [])
    return best[0][1]
