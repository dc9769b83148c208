"""Core types for score-based social distance games.

A game is a simple undirected network over agents 0..n-1 together with a
non-increasing integer scoring vector.  An agent's utility in a coalition is
the sum of scores of its shortest-path distances (inside the coalition's
induced subgraph) to every other member.  Distances beyond the vector's reach
score minus infinity for closed-tail vectors and clamp to the last entry for
open-tail ones; unreachable members always score minus infinity.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class ResourceLimitError(RuntimeError):
    """A solver exceeded its configured search budget."""


class UnsupportedInputError(ValueError):
    """The requested operation does not support this input combination."""


class NegInfType:
    """Absorbing negative infinity: NEG_INF + z = NEG_INF, NEG_INF < z for all ints."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __add__(self, other):
        if isinstance(other, (int, NegInfType)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self
        return NotImplemented

    def __mul__(self, other):
        # Scaling by a positive count keeps the value inadmissible.
        if isinstance(other, int) and other > 0:
            return self
        if isinstance(other, int) and other == 0:
            return 0
        return NotImplemented

    __rmul__ = __mul__

    def __lt__(self, other):
        if isinstance(other, int):
            return True
        if isinstance(other, NegInfType):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (int, NegInfType)):
            return True
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (int, NegInfType)):
            return False
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, int):
            return False
        if isinstance(other, NegInfType):
            return True
        return NotImplemented

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self

    def __hash__(self):
        return hash("NEG_INF")

    def __repr__(self):
        return "-inf"

    def __bool__(self):
        return True


NEG_INF = NegInfType()

ExtInt = Union[int, NegInfType]


def ext_sum(values: Iterable[ExtInt]) -> ExtInt:
    """Sum with NEG_INF absorption."""
    total: ExtInt = 0
    for v in values:
        if v is NEG_INF:
            return NEG_INF
        total += v
    return total


@dataclass(frozen=True)
class ScoringVector:
    """Non-increasing integer scores for distances 1..len(scores).

    ``tail`` decides what happens beyond the last scored distance: a closed
    tail makes larger distances inadmissible (score NEG_INF), an open tail
    repeats the last entry.
    """

    scores: tuple[int, ...]
    tail: str = "closed"

    def __post_init__(self):
        scores = tuple(int(v) for v in self.scores)
        object.__setattr__(self, "scores", scores)
        if len(scores) < 1:
            raise ValueError("scoring vector needs at least one entry")
        if any(scores[i + 1] > scores[i] for i in range(len(scores) - 1)):
            raise ValueError(f"scores must be non-increasing: {scores}")
        if self.tail not in ("closed", "open"):
            raise ValueError(f"tail must be 'closed' or 'open', got {self.tail!r}")

    @property
    def cutoff(self) -> int:
        """Largest explicitly scored distance."""
        return len(self.scores)

    @property
    def max_score(self) -> int:
        """Score of distance 1, the best any single member can contribute."""
        return self.scores[0]

    @property
    def is_closed(self) -> bool:
        return self.tail == "closed"

    def score(self, d: "int | NegInfType") -> ExtInt:
        if d is NEG_INF:
            return NEG_INF
        if not isinstance(d, int) or d < 1:
            raise ValueError(f"distance must be a positive integer or NEG_INF, got {d!r}")
        if d <= len(self.scores):
            return self.scores[d - 1]
        return NEG_INF if self.tail == "closed" else self.scores[-1]

    @classmethod
    def parse(cls, text: str, tail: str = "closed") -> "ScoringVector":
        try:
            scores = tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
        except ValueError as exc:
            raise ValueError(f"cannot parse scoring vector {text!r}") from exc
        return cls(scores, tail)

    def __str__(self):
        body = ",".join(str(v) for v in self.scores)
        return f"({body}){'' if self.is_closed else ' open'}"


def score_at(s: ScoringVector, d: "int | NegInfType") -> ExtInt:
    """Score of a coalition distance; NEG_INF for unreachable members."""
    return s.score(d)


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class SocialNetwork:
    """Immutable simple undirected graph over agents 0..n-1.

    Adjacency is kept both as frozensets and as bitmasks; the bitmask form
    drives all BFS work in the solvers.
    """

    __slots__ = ("n", "edges", "adj", "adj_mask", "_full_mask")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise ValueError("network needs at least one agent")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for {n} agents")
            if u == v:
                raise ValueError(f"self-loop at agent {u}")
            seen.add((min(u, v), max(u, v)))
        self.n = n
        self.edges = tuple(sorted(seen))
        adj: list[set[int]] = [set() for _ in range(n)]
        masks = [0] * n
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        self.adj = tuple(frozenset(a) for a in adj)
        self.adj_mask = tuple(masks)
        self._full_mask = (1 << n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max(len(a) for a in self.adj)

    @property
    def full_mask(self) -> int:
        return self._full_mask

    def mask_of(self, agents: Iterable[int]) -> int:
        m = 0
        for a in agents:
            m |= 1 << a
        return m

    def distances_in(self, members_mask: int, source: int) -> dict[int, int]:
        """BFS distances from ``source`` inside the induced subgraph on ``members_mask``.

        Only reachable members appear in the result; the source maps to 0.
        """
        if not (members_mask >> source) & 1:
            raise ValueError(f"source {source} not in the member set")
        seen = 1 << source
        frontier = seen
        dist = {source: 0}
        d = 0
        adj = self.adj_mask
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            nxt &= members_mask & ~seen
            if not nxt:
                break
            d += 1
            for v in iter_bits(nxt):
                dist[v] = d
            seen |= nxt
            frontier = nxt
        return dist

    def is_connected_within(self, members_mask: int) -> bool:
        if members_mask == 0:
            return True
        source = (members_mask & -members_mask).bit_length() - 1
        return len(self.distances_in(members_mask, source)) == bin(members_mask).count("1")

    def components(self) -> list[frozenset[int]]:
        remaining = self._full_mask
        out = []
        while remaining:
            source = (remaining & -remaining).bit_length() - 1
            reached = self.distances_in(remaining, source)
            comp = frozenset(reached)
            out.append(comp)
            remaining &= ~self.mask_of(comp)
        return [c for c in sorted(out, key=min)]

    def induced(self, agents: Iterable[int]) -> tuple["SocialNetwork", dict[int, int]]:
        """Induced subgraph on ``agents`` relabeled to 0..k-1; returns (graph, old->new)."""
        keep = sorted(set(agents))
        relabel = {old: new for new, old in enumerate(keep)}
        edges = [
            (relabel[u], relabel[v])
            for u, v in self.edges
            if u in relabel and v in relabel
        ]
        return SocialNetwork(len(keep), edges), relabel

    def __eq__(self, other):
        return (
            isinstance(other, SocialNetwork)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"SocialNetwork(n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class Outcome:
    """A partition of the agents into coalitions, kept in canonical order.

    Coalitions are sorted by their smallest member and each coalition's
    members are ascending, so equal partitions compare equal and sort keys
    are stable across solvers.
    """

    coalitions: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(set(c))) for c in self.coalitions))
        if any(len(b) == 0 for b in blocks):
            raise ValueError("empty coalition")
        seen: set[int] = set()
        for b in blocks:
            for a in b:
                if a in seen:
                    raise ValueError(f"agent {a} appears in two coalitions")
                seen.add(a)
        object.__setattr__(self, "coalitions", blocks)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Outcome":
        return cls(tuple(tuple(b) for b in blocks))

    @classmethod
    def singletons(cls, n: int) -> "Outcome":
        return cls(tuple((i,) for i in range(n)))

    def agents(self) -> frozenset[int]:
        return frozenset(a for b in self.coalitions for a in b)

    def coalition_of(self, agent: int) -> tuple[int, ...]:
        for b in self.coalitions:
            if agent in b:
                return b
        raise KeyError(f"agent {agent} not in outcome")

    def coalition_index_of(self, agent: int) -> int:
        for i, b in enumerate(self.coalitions):
            if agent in b:
                return i
        raise KeyError(f"agent {agent} not in outcome")

    def sort_key(self) -> tuple:
        return self.coalitions

    def __iter__(self):
        return iter(self.coalitions)

    def __len__(self):
        return len(self.coalitions)


def validate_outcome(G: SocialNetwork, outcome: Outcome) -> None:
    """Raise ValueError naming the offending agent if not a partition of G's agents."""
    seen = outcome.agents()
    for a in range(G.n):
        if a not in seen:
            raise ValueError(f"agent {a} missing from outcome")
    for a in seen:
        if not (0 <= a < G.n):
            raise ValueError(f"agent {a} outside network range 0..{G.n - 1}")


def coalition_distance(G: SocialNetwork, coalition: Iterable[int], i: int, j: int) -> ExtInt:
    """Shortest-path distance between i and j inside the induced subgraph on the coalition."""
    members = frozenset(coalition)
    if i not in members:
        raise ValueError(f"agent {i} not in coalition")
    if j not in members:
        raise ValueError(f"agent {j} not in coalition")
    if i == j:
        return 0
    dist = G.distances_in(G.mask_of(members), i)
    return dist.get(j, NEG_INF)


def utility_in_coalition(s: ScoringVector, G: SocialNetwork, coalition: Iterable[int], i: int) -> ExtInt:
    """Utility of agent i inside one coalition; 0 in a singleton, NEG_INF if i cannot reach everyone."""
    members = frozenset(coalition)
    if i not in members:
        raise ValueError(f"agent {i} not in coalition")
    if len(members) == 1:
        return 0
    dist = G.distances_in(G.mask_of(members), i)
    if len(dist) < len(members):
        return NEG_INF
    return ext_sum(s.score(d) for j, d in dist.items() if j != i)


def agent_utility(s: ScoringVector, G: SocialNetwork, outcome: Outcome, i: int) -> ExtInt:
    """Utility of agent i under the outcome."""
    return utility_in_coalition(s, G, outcome.coalition_of(i), i)


def coalition_welfare(s: ScoringVector, G: SocialNetwork, coalition: Iterable[int]) -> ExtInt:
    """Total utility of a coalition's members (its contribution to social welfare)."""
    members = tuple(sorted(set(coalition)))
    if len(members) == 1:
        return 0
    total: ExtInt = 0
    mask = G.mask_of(members)
    for i in members:
        dist = G.distances_in(mask, i)
        if len(dist) < len(members):
            return NEG_INF
        u = ext_sum(s.score(d) for j, d in dist.items() if j != i)
        if u is NEG_INF:
            return NEG_INF
        total += u
    return total


def social_welfare(s: ScoringVector, G: SocialNetwork, outcome: Outcome) -> ExtInt:
    """Sum of all agents' utilities; NEG_INF-absorbing."""
    return ext_sum(coalition_welfare(s, G, block) for block in outcome)


def coalition_diameter(G: SocialNetwork, coalition: Iterable[int]) -> ExtInt:
    """Largest pairwise induced distance; NEG_INF when the coalition is disconnected."""
    members = tuple(sorted(set(coalition)))
    if not members:
        raise ValueError("empty coalition")
    if len(members) == 1:
        return 0
    mask = G.mask_of(members)
    best = 0
    for i in members:
        dist = G.distances_in(mask, i)
        if len(dist) < len(members):
            return NEG_INF
        best = max(best, max(dist.values()))
    return best


@dataclass(frozen=True)
class SolveResult:
    """Outcome returned by a solver together with its welfare and provenance."""

    outcome: Outcome
    welfare: ExtInt
    mode: str
    optimal: bool = True
    algorithm: str = ""
    size_limited: bool = False


MODES = ("welfare", "ir", "ns")


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode
