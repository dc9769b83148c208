"""Tree decompositions: PACE-format ingestion, validation, exact/heuristic
construction, and conversion to nice form (leaf/introduce/forget/join nodes
with empty root and leaf bags).
"""

from dataclasses import dataclass
from typing import Optional, Union

from .core import SocialNetwork, iter_bits


@dataclass(frozen=True)
class TreeDecomposition:
    """Unrooted decomposition: bags plus tree edges between bag indices."""

    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]
    n_vertices: int

    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1


@dataclass(frozen=True)
class TdViolation:
    kind: str  # "bag-range" | "tree-shape" | "vertex-coverage" | "edge-coverage" | "connectivity"
    detail: str


class TdParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def read_td(text: str) -> TreeDecomposition:
    """Parse PACE-style .td content (1-indexed vertices, converted to 0-indexed)."""
    n_bags = None
    n_vertices = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise TdParseError(line_no, f"malformed solution line: {line!r}")
            try:
                n_bags, _max_bag, n_vertices = int(parts[2]), int(parts[3]), int(parts[4])
            except ValueError:
                raise TdParseError(line_no, f"non-integer header fields: {line!r}")
        elif parts[0] == "b":
            if n_bags is None:
                raise TdParseError(line_no, "bag line before solution line")
            try:
                bag_id = int(parts[1])
                members = [int(p) - 1 for p in parts[2:]]
            except (ValueError, IndexError):
                raise TdParseError(line_no, f"malformed bag line: {line!r}")
            if not 1 <= bag_id <= n_bags:
                raise TdParseError(line_no, f"bag id {bag_id} outside 1..{n_bags}")
            if any(v < 0 for v in members):
                raise TdParseError(line_no, "vertex ids must be positive")
            bags[bag_id] = frozenset(members)
        else:
            if n_bags is None:
                raise TdParseError(line_no, "edge line before solution line")
            if len(parts) != 2:
                raise TdParseError(line_no, f"malformed tree edge line: {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise TdParseError(line_no, f"non-integer tree edge: {line!r}")
            if not (1 <= a <= n_bags and 1 <= b <= n_bags):
                raise TdParseError(line_no, f"tree edge ({a},{b}) outside 1..{n_bags}")
            edges.append((a - 1, b - 1))
    if n_bags is None or n_vertices is None:
        raise TdParseError(0, "missing solution line 's td ...'")
    bag_tuple = tuple(bags.get(i, frozenset()) for i in range(1, n_bags + 1))
    return TreeDecomposition(bag_tuple, tuple(edges), n_vertices)


def write_td(td: TreeDecomposition) -> str:
    lines = [f"s td {len(td.bags)} {max(len(b) for b in td.bags)} {td.n_vertices}"]
    for i, bag in enumerate(td.bags, start=1):
        body = " ".join(str(v + 1) for v in sorted(bag))
        lines.append(f"b {i} {body}".rstrip())
    for a, b in td.tree_edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def validate(G: SocialNetwork, td: TreeDecomposition) -> Union[int, TdViolation]:
    """Width on success, otherwise the first violated condition with a witness."""
    k = len(td.bags)
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < G.n:
                return TdViolation("bag-range", f"bag {i} contains vertex {v} outside 0..{G.n - 1}")
    # the tree must actually be a tree over the bags
    if k > 1:
        adj: list[set[int]] = [set() for _ in range(k)]
        for a, b in td.tree_edges:
            adj[a].add(b)
            adj[b].add(a)
        if len(set(map(lambda e: (min(e), max(e)), td.tree_edges))) != k - 1:
            return TdViolation("tree-shape", f"{len(td.tree_edges)} edges for {k} bags")
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != k:
            return TdViolation("tree-shape", "bag tree is disconnected")
    for v in range(G.n):
        if not any(v in bag for bag in td.bags):
            return TdViolation("vertex-coverage", f"agent {v} appears in no bag")
    for u, v in G.edges:
        if not any(u in bag and v in bag for bag in td.bags):
            return TdViolation("edge-coverage", f"edge ({u},{v}) not covered by any bag")
    # connected-subtree condition per vertex
    tree_adj: list[set[int]] = [set() for _ in range(k)]
    for a, b in td.tree_edges:
        tree_adj[a].add(b)
        tree_adj[b].add(a)
    for v in range(G.n):
        holders = [i for i, bag in enumerate(td.bags) if v in bag]
        seen = {holders[0]}
        stack = [holders[0]]
        holder_set = set(holders)
        while stack:
            x = stack.pop()
            for y in tree_adj[x]:
                if y in holder_set and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(holders):
            return TdViolation("connectivity", f"bags containing agent {v} are not connected")
    return td.width()


def ensure_valid(G: SocialNetwork, td: TreeDecomposition) -> int:
    result = validate(G, td)
    if isinstance(result, TdViolation):
        raise ValueError(f"invalid tree decomposition: {result.kind}: {result.detail}")
    return result


def _exact_elimination_order(G: SocialNetwork) -> list[int]:
    """Optimal elimination order by dynamic programming over vertex subsets."""
    n = G.n
    adj = G.adj_mask
    full = G.full_mask

    def q_size(eliminated: int, v: int) -> int:
        # neighbors of v's component inside eliminated+{v}, measured outside it
        inside = eliminated | (1 << v)
        comp = 1 << v
        frontier = comp
        reach = 0
        while frontier:
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= adj[u]
            reach |= nxt
            nxt &= inside & ~comp
            comp |= nxt
            frontier = nxt
        return bin(reach & ~inside).count("1")

    dp = {0: -1}
    choice: dict[int, int] = {}
    # masks in increasing order: all submasks precede their supersets numerically
    for mask in range(1, full + 1):
        best = n + 1
        best_v = -1
        for v in iter_bits(mask):
            prev = mask ^ (1 << v)
            width = max(dp[prev], q_size(prev, v))
            if width < best:
                best = width
                best_v = v
        dp[mask] = best
        choice[mask] = best_v
    order_rev = []
    mask = full
    while mask:
        v = choice[mask]
        order_rev.append(v)
        mask ^= 1 << v
    return list(reversed(order_rev))


def _min_fill_order(G: SocialNetwork) -> list[int]:
    n = G.n
    adj = [set(G.adj[v]) for v in range(n)]
    remaining = set(range(n))
    order = []
    while remaining:
        best = None
        for v in sorted(remaining):
            neigh = adj[v] & remaining
            fill = sum(
                1
                for u in neigh
                for w in neigh
                if u < w and w not in adj[u]
            )
            key = (fill, len(neigh), v)
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        neigh = adj[v] & remaining
        for u in neigh:
            for w in neigh:
                if u != w:
                    adj[u].add(w)
        remaining.discard(v)
        order.append(v)
    return order


def decomposition_from_order(G: SocialNetwork, order: list[int]) -> TreeDecomposition:
    """Bags from an elimination order, connected into a tree in the standard way."""
    n = G.n
    position = {v: i for i, v in enumerate(order)}
    adj = [set(G.adj[v]) for v in range(n)]
    bags: list[frozenset[int]] = [frozenset()] * n
    later_neighbors: list[set[int]] = [set()] * n
    for v in order:
        neigh = {u for u in adj[v] if position[u] > position[v]}
        bags[position[v]] = frozenset({v} | neigh)
        later_neighbors[position[v]] = neigh
        for u in neigh:
            adj[u].discard(v)
            for w in neigh:
                if u != w:
                    adj[u].add(w)
    edges = []
    for i in range(n - 1):
        neigh = later_neighbors[i]
        if neigh:
            parent = min(neigh, key=lambda u: position[u])
            edges.append((i, position[parent]))
        else:
            # last vertex of its component: attach as a leaf anywhere later
            edges.append((i, i + 1))
    return TreeDecomposition(tuple(bags), tuple(edges), n)


DEFAULT_EXACT_LIMIT = 14


def compute_decomposition(
    G: SocialNetwork, exact_limit: int = DEFAULT_EXACT_LIMIT
) -> TreeDecomposition:
    """A valid decomposition: width-optimal for n <= exact_limit, min-fill beyond."""
    if G.n <= exact_limit:
        order = _exact_elimination_order(G)
    else:
        order = _min_fill_order(G)
    td = decomposition_from_order(G, order)
    ensure_valid(G, td)
    return td


def exact_treewidth(G: SocialNetwork) -> int:
    return decomposition_from_order(G, _exact_elimination_order(G)).width()


@dataclass(frozen=True)
class NiceNode:
    kind: str  # "leaf" | "introduce" | "forget" | "join"
    bag: frozenset[int]
    children: tuple[int, ...]
    agent: Optional[int] = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    nodes: tuple[NiceNode, ...]
    root: int

    def width(self) -> int:
        return max(len(node.bag) for node in self.nodes) - 1

    def postorder(self) -> list[int]:
        out: list[int] = []
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            idx, expanded = stack.pop()
            if expanded:
                out.append(idx)
            else:
                stack.append((idx, True))
                for c in self.nodes[idx].children:
                    stack.append((c, False))
        return out


class _NiceBuilder:
    def __init__(self):
        self.nodes: list[NiceNode] = []

    def add(self, kind, bag, children=(), agent=None) -> int:
        self.nodes.append(NiceNode(kind, frozenset(bag), tuple(children), agent))
        return len(self.nodes) - 1

    def morph(self, top: int, target: frozenset[int]) -> int:
        """Chain forgets then introduces so the top bag becomes ``target``."""
        current = self.nodes[top].bag
        for v in sorted(current - target):
            current = current - {v}
            top = self.add("forget", current, (top,), v)
        for v in sorted(target - current):
            current = current | {v}
            top = self.add("introduce", current, (top,), v)
        return top

    def chain_from_empty(self, target: frozenset[int]) -> int:
        top = self.add("leaf", frozenset())
        return self.morph(top, target)


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Nice decomposition of the same width: empty root/leaf bags, unary
    introduce/forget steps, binary joins."""
    k = len(td.bags)
    adj: list[set[int]] = [set() for _ in range(k)]
    for a, b in td.tree_edges:
        adj[a].add(b)
        adj[b].add(a)
    builder = _NiceBuilder()

    def build(node: int, parent: Optional[int]) -> int:
        children = sorted(c for c in adj[node] if c != parent)
        bag = td.bags[node]
        if not children:
            return builder.chain_from_empty(bag)
        tops = [builder.morph(build(c, node), bag) for c in children]
        top = tops[0]
        for other in tops[1:]:
            top = builder.add("join", bag, (top, other))
        return top

    top = build(0, None)
    root = builder.morph(top, frozenset())
    if builder.nodes[root].bag:
        raise AssertionError("root bag not empty after morph")
    if len(builder.nodes) == 1:
        # decomposition was a single empty bag: the leaf is the root
        root = 0
    return NiceTreeDecomposition(tuple(builder.nodes), root)


def validate_nice(G: SocialNetwork, ntd: NiceTreeDecomposition) -> Union[int, TdViolation]:
    """Validity of the underlying decomposition plus the niceness shape rules."""
    nodes = ntd.nodes
    if nodes[ntd.root].bag:
        return TdViolation("tree-shape", "root bag not empty")
    for idx, node in enumerate(nodes):
        if node.kind == "leaf":
            if node.children or node.bag:
                return TdViolation("tree-shape", f"leaf node {idx} malformed")
        elif node.kind == "introduce":
            if len(node.children) != 1 or node.agent is None:
                return TdViolation("tree-shape", f"introduce node {idx} malformed")
            child = nodes[node.children[0]]
            if node.bag != child.bag | {node.agent} or node.agent in child.bag:
                return TdViolation("tree-shape", f"introduce node {idx} bag mismatch")
        elif node.kind == "forget":
            if len(node.children) != 1 or node.agent is None:
                return TdViolation("tree-shape", f"forget node {idx} malformed")
            child = nodes[node.children[0]]
            if node.bag != child.bag - {node.agent} or node.agent not in child.bag:
                return TdViolation("tree-shape", f"forget node {idx} bag mismatch")
        elif node.kind == "join":
            if len(node.children) != 2:
                return TdViolation("tree-shape", f"join node {idx} needs two children")
            if any(nodes[c].bag != node.bag for c in node.children):
                return TdViolation("tree-shape", f"join node {idx} children bags differ")
        else:
            return TdViolation("tree-shape", f"unknown node kind {node.kind!r}")
    # convert to a plain decomposition and reuse the three-condition validator
    reachable = set(ntd.postorder())
    bags = tuple(nodes[i].bag for i in sorted(reachable))
    index = {old: new for new, old in enumerate(sorted(reachable))}
    edges = tuple(
        (index[i], index[c])
        for i in sorted(reachable)
        for c in nodes[i].children
    )
    return validate(G, TreeDecomposition(bags, edges, G.n))


def nice_decomposition(
    G: SocialNetwork, exact_limit: int = DEFAULT_EXACT_LIMIT
) -> NiceTreeDecomposition:
    return make_nice(compute_decomposition(G, exact_limit))
