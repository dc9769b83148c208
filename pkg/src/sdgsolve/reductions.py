"""Hardness-instance generator: NAE-3-SAT -> triangle-covered 3-coloring
instance -> distance-game instance on the complement graph with a target
welfare.  The generated instance reaches the target exactly when the
triangle-covered graph is 3-colorable, and any witness outcome is three
equal-size coalitions that are cliques in the complement.
"""

from dataclasses import dataclass

from .core import ScoringVector, SocialNetwork


@dataclass(frozen=True)
class NaeFormula:
    """Not-all-equal 3-SAT: every clause must contain a true and a false literal.

    Literals are DIMACS-style: +-(1..n_vars)."""

    n_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError(f"clause {clause} does not have three literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range")

    def nae_satisfied_by(self, assignment: dict[int, bool]) -> bool:
        for clause in self.clauses:
            values = [assignment[abs(l)] == (l > 0) for l in clause]
            if all(values) or not any(values):
                return False
        return True

    def nae_satisfiable(self) -> bool:
        n = self.n_vars
        for bits in range(1 << n):
            assignment = {i + 1: bool((bits >> i) & 1) for i in range(n)}
            if self.nae_satisfied_by(assignment):
                return True
        return False


@dataclass(frozen=True)
class TriangleCoveredGraph:
    """A graph on 3m vertices covered by m pairwise disjoint triangles."""

    graph: SocialNetwork
    triangles: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for tri in self.triangles:
            for v in tri:
                if v in seen:
                    raise ValueError(f"vertex {v} in two triangles")
                seen.add(v)
            for i in range(3):
                for j in range(i + 1, 3):
                    if not self.graph.has_edge(tri[i], tri[j]):
                        raise ValueError(f"triangle {tri} not present as edges")
        if len(seen) != self.graph.n:
            raise ValueError("triangles do not cover all vertices")


def nae_to_3ctcg(formula: NaeFormula) -> TriangleCoveredGraph:
    """Variable triangles (anchor, positive, negative) chained through the
    anchors, clause triangles wired to their literals' vertices."""
    n, clauses = formula.n_vars, formula.clauses
    m = len(clauses)

    def anchor(i):  # 1-based variable index
        return 3 * (i - 1)

    def pos(i):
        return 3 * (i - 1) + 1

    def neg(i):
        return 3 * (i - 1) + 2

    def clause_vertex(j, r):
        return 3 * n + 3 * j + r

    edges = []
    triangles = []
    for i in range(1, n + 1):
        a, p, q = anchor(i), pos(i), neg(i)
        triangles.append((a, p, q))
        edges += [(a, p), (a, q), (p, q)]
        if i < n:
            edges += [(p, anchor(i + 1)), (q, anchor(i + 1))]
    for j, clause in enumerate(clauses):
        c0, c1, c2 = (clause_vertex(j, r) for r in range(3))
        triangles.append((c0, c1, c2))
        edges += [(c0, c1), (c1, c2), (c0, c2)]
        for r, lit in enumerate(clause):
            target = pos(abs(lit)) if lit > 0 else neg(abs(lit))
            edges.append((clause_vertex(j, r), target))
    G = SocialNetwork(3 * (n + m), edges)
    return TriangleCoveredGraph(G, tuple(triangles))


def ctcg_to_sdg(
    H: TriangleCoveredGraph, s: ScoringVector
) -> tuple[SocialNetwork, int]:
    """Complement graph plus the target welfare 3m * s1 * (m-1), where m is
    the triangle count.  Only single-entry closed vectors qualify: the
    argument needs every non-adjacent pair to be inadmissible."""
    if not (s.is_closed and s.cutoff == 1):
        raise ValueError("the reduction needs a closed single-entry scoring vector")
    G = H.graph
    complement_edges = [
        (u, v)
        for u in range(G.n)
        for v in range(u + 1, G.n)
        if not G.has_edge(u, v)
    ]
    m = len(H.triangles)
    b = 3 * m * s.max_score * (m - 1)
    return SocialNetwork(G.n, complement_edges), b


def is_three_colorable(G: SocialNetwork) -> bool:
    """Backtracking 3-coloring with most-constrained-vertex ordering."""
    colors = [None] * G.n
    order = sorted(range(G.n), key=lambda v: -G.degree(v))

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        used = {colors[u] for u in G.adj[v] if colors[u] is not None}
        for c in range(3):
            if c not in used:
                colors[v] = c
                if rec(i + 1):
                    return True
                colors[v] = None
        return False

    return rec(0)


# -- DIMACS-style formula files with an nae3sat marker comment ---------------


def parse_nae_formula(text: str) -> NaeFormula:
    n_vars = None
    clauses = []
    saw_marker = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            if "nae3sat" in line:
                saw_marker = True
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] not in ("cnf", "nae3sat"):
                raise ValueError(f"line {line_no}: malformed problem line {line!r}")
            n_vars = int(parts[2])
            continue
        lits = [int(tok) for tok in line.split()]
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        if len(lits) != 3:
            raise ValueError(f"line {line_no}: clause needs exactly 3 literals")
        clauses.append(tuple(lits))
    if n_vars is None:
        raise ValueError("missing problem line 'p cnf <vars> <clauses>'")
    if not saw_marker:
        raise ValueError("missing 'c nae3sat' marker: refusing to guess semantics")
    return NaeFormula(n_vars, tuple(clauses))


def format_nae_formula(formula: NaeFormula) -> str:
    lines = ["c nae3sat", f"p cnf {formula.n_vars} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"
