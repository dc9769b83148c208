"""Treewidth dynamic programs over a nice tree decomposition (closed tails).

Welfare and IR modes run a compressed leaf-to-root DP whose record signature
per node is (bag partition, committed distances, distance-vector tallies):

* the bag partition assigns bag agents to coalition labels;
* for every pair of same-coalition bag agents the record commits the pair's
  final intra-coalition distance the moment both are in the bag.  A committed
  distance may be guessed below what current structure realizes (the missing
  link will be built by agents introduced later, possibly in a sibling
  branch); every transition validates that no known structure undercuts a
  commitment, and when an agent is forgotten each of its commitments must be
  realized exactly by already-introduced structure plus the other pairs'
  commitments - at that point all of its potential shortcuts have been seen;
* tallies count forgotten coalition members per vector of final distances to
  the bag.  IR mode additionally keeps, per tally cell, the worst utility
  over the forgotten agents sharing that vector ("critical agents"), checked
  when their coalition completes.

Because committed distances are final, each member pair's welfare
contribution is added exactly once (when the later of the two is introduced,
or at a join for pairs split across branches) and never revised.

NS mode keeps coalitions explicit instead: records store the concrete member
sets of open coalitions, and all utility and deviation checks run on the real
induced subgraphs when a coalition completes (its last bag agent is
forgotten).  Members of completed coalitions stay tracked, as (agent, final
utility) pairs, exactly while they still neighbor an open coalition they
could later want to join.
"""

from itertools import product
from typing import Optional

from .core import (
    Outcome,
    ResourceLimitError,
    ScoringVector,
    SocialNetwork,
    SolveResult,
    UnsupportedInputError,
    social_welfare,
    utility_in_coalition,
)
from .stability import is_individually_rational, is_nash_stable
from .treedecomp import NiceTreeDecomposition, nice_decomposition

_INF = 10**9
DEFAULT_RECORD_BUDGET = 5_000_000


class _Ctx:
    def __init__(self, s, G, ntd, mode, budget):
        self.s = s
        self.G = G
        self.ntd = ntd
        self.mode = mode
        self.budget = budget
        self.records_seen = 0
        self.cutoff = s.cutoff
        # distances in the full network lower-bound every coalition distance
        self.gdist: list[dict[int, int]] = [
            G.distances_in(G.full_mask, v) for v in range(G.n)
        ]

    def bump(self, k: int = 1):
        self.records_seen += k
        if self.records_seen > self.budget:
            raise ResourceLimitError(
                f"treewidth DP exceeded its record budget ({self.budget})"
            )

    def score(self, d: int) -> Optional[int]:
        """Finite score or None when the distance is inadmissible."""
        if d > self.cutoff:
            return None
        return self.s.scores[d - 1]


def _canon_part(part: tuple[int, ...]) -> tuple[tuple[int, ...], dict[int, int]]:
    mapping: dict[int, int] = {}
    out = []
    for label in part:
        if label not in mapping:
            mapping[label] = len(mapping)
        out.append(mapping[label])
    return tuple(out), mapping


def _pkey(u, v):
    return (u, v) if u < v else (v, u)


def _closure(bag, part, promises, cells, G, skip=None):
    """All-pairs shortest routes per label over: real bag edges, committed
    distances as virtual edges (optionally skipping one), and routes through
    forgotten agents from the tallies.  Returns {pair: distance}."""
    pos_of = {agent: i for i, agent in enumerate(bag)}
    groups: dict[int, list[int]] = {}
    for pos in range(len(bag)):
        groups.setdefault(part[pos], []).append(pos)
    dist: dict[tuple[int, int], int] = {}
    for label, positions in groups.items():
        k = len(positions)
        if k <= 1:
            continue
        agents = [bag[p] for p in positions]
        m = [[_INF] * k for _ in range(k)]
        for i in range(k):
            m[i][i] = 0
            for j in range(i + 1, k):
                if G.has_edge(agents[i], agents[j]):
                    m[i][j] = m[j][i] = 1
        for (u, v), d in promises.items():
            if u not in pos_of or v not in pos_of or part[pos_of[u]] != label:
                continue
            if skip is not None and (u, v) == skip:
                continue
            i, j = agents.index(u), agents.index(v)
            if d < m[i][j]:
                m[i][j] = m[j][i] = d
        for cell in cells:
            if cell[0] != label:
                continue
            vec = cell[1]
            ent = [vec[p] for p in positions]
            for i in range(k):
                if ent[i] is None:
                    continue
                for j in range(i + 1, k):
                    if ent[j] is not None and ent[i] + ent[j] < m[i][j]:
                        m[i][j] = m[j][i] = ent[i] + ent[j]
        for t in range(k):
            mt = m[t]
            for i in range(k):
                mit = m[i][t]
                if mit >= _INF:
                    continue
                row = m[i]
                for j in range(k):
                    alt = mit + mt[j]
                    if alt < row[j]:
                        row[j] = alt
        for i in range(k):
            for j in range(i + 1, k):
                dist[_pkey(agents[i], agents[j])] = m[i][j]
    return dist


def _consistent(bag, part, promises, cells, G) -> bool:
    """No known structure may undercut a committed distance."""
    closure = _closure(bag, part, promises, cells, G)
    return all(closure[p] == d for p, d in promises.items())


def _witness_key(blocks):
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


class _Table:
    """sig -> (welfare, witness_blocks, witness_key), max welfare then
    lexicographically smallest witness."""

    def __init__(self, ctx):
        self.ctx = ctx
        self.data: dict = {}

    def add(self, sig, welfare, blocks):
        self.ctx.bump()
        old = self.data.get(sig)
        key = None
        if old is not None:
            if welfare < old[0]:
                return
            if welfare == old[0]:
                key = _witness_key(blocks)
                if key >= old[2]:
                    return
        if key is None:
            key = _witness_key(blocks)
        self.data[sig] = (welfare, blocks, key)


def _insert(tup, pos, value):
    return tup[:pos] + (value,) + tup[pos:]


def _remove(tup, pos):
    return tup[:pos] + tup[pos + 1 :]


def _replace(tup, pos, value):
    return tup[:pos] + (value,) + tup[pos + 1 :]


def _freeze_promises(promises: dict) -> tuple:
    return tuple(sorted(promises.items()))


def _grow_block(blocks, mates, a):
    mates_set = set(mates)
    out = []
    grown = False
    for b in blocks:
        if b & mates_set:
            out.append(b | {a})
            grown = True
        else:
            out.append(b)
    if not grown:
        out.append(frozenset({a}))
    return tuple(out)


def _compressed_leaf(ctx):
    table = _Table(ctx)
    table.add(((), (), ()), 0, ())
    return table


def _compressed_introduce(ctx, bag, child_bag, a, child_table):
    mode = ctx.mode
    G = ctx.G
    table = _Table(ctx)
    pos_a = bag.index(a)
    NEW = -1
    for sig, (w_c, blocks_c, _) in child_table.data.items():
        part_c, prom_c, cells_c = sig
        promises_c = dict(prom_c)
        for L in sorted(set(part_c)) + [NEW]:
            if L == NEW:
                part = _insert(part_c, pos_a, max(part_c, default=-1) + 1)
                part, relabel = _canon_part(part)
                cells = tuple(
                    sorted((relabel[c[0]], _insert(c[1], pos_a, None)) + c[2:] for c in cells_c)
                )
                prom = tuple(sorted(promises_c.items()))
                table.add((part, prom, cells), w_c, blocks_c + (frozenset({a}),))
                continue
            mates = [child_bag[p] for p in range(len(child_bag)) if part_c[p] == L]
            part = _insert(part_c, pos_a, L)
            cells_shift = [
                (c[0], _insert(c[1], pos_a, None)) + c[2:] for c in cells_c
            ]
            # candidate committed distances per new pair
            options = []
            feasible = True
            for b in mates:
                if G.has_edge(a, b):
                    options.append([1])
                    continue
                lo = max(2, ctx.gdist[a].get(b, _INF))
                if lo > ctx.cutoff:
                    feasible = False
                    break
                options.append(list(range(lo, ctx.cutoff + 1)))
            if not feasible:
                continue
            for choice in product(*options):
                promises = dict(promises_c)
                for b, d in zip(mates, choice):
                    promises[_pkey(a, b)] = d
                if not _consistent(bag, part, promises, cells_shift, G):
                    continue
                delta = 0
                dead = False
                for b, d in zip(mates, choice):
                    v = ctx.score(d)
                    if v is None:
                        dead = True
                        break
                    delta += 2 * v
                if dead:
                    continue
                cells_new = []
                for cell in cells_shift:
                    if cell[0] != L:
                        cells_new.append(cell)
                        continue
                    vec = cell[1]
                    entry = min(
                        vec[bag.index(b)] + promises[_pkey(a, b)] for b in mates
                        if vec[bag.index(b)] is not None
                    )
                    v = ctx.score(entry)
                    if v is None:
                        dead = True
                        break
                    delta += 2 * cell[2] * v
                    vec2 = _replace(vec, pos_a, entry)
                    if mode == "ir":
                        cells_new.append((cell[0], vec2, cell[2], cell[3] + v))
                    else:
                        cells_new.append((cell[0], vec2, cell[2]))
                if dead:
                    continue
                part_cn, relabel = _canon_part(part)
                cells_cn = tuple(sorted((relabel[c[0]],) + c[1:] for c in cells_new))
                table.add(
                    (part_cn, _freeze_promises(promises), cells_cn),
                    w_c + delta,
                    _grow_block(blocks_c, mates, a),
                )
    return table


def _bag_utilities(bag, part, promises, cells, ctx):
    utils = {}
    for pos, agent in enumerate(bag):
        label = part[pos]
        total = 0
        for pos2, other in enumerate(bag):
            if pos2 == pos or part[pos2] != label:
                continue
            v = ctx.score(promises[_pkey(agent, other)])
            if v is None:
                return None
            total += v
        for cell in cells:
            if cell[0] != label:
                continue
            ent = cell[1][pos]
            if ent is None:
                return None
            v = ctx.score(ent)
            if v is None:
                return None
            total += cell[2] * v
        utils[agent] = total
    return utils


def _compressed_forget(ctx, bag, child_bag, w, child_table):
    mode = ctx.mode
    G = ctx.G
    table = _Table(ctx)
    pos_w = child_bag.index(w)
    for sig, (w_c, blocks_c, _) in child_table.data.items():
        part_c, prom_c, cells_c = sig
        promises_c = dict(prom_c)
        L = part_c[pos_w]
        mates = [
            child_bag[p]
            for p in range(len(child_bag))
            if part_c[p] == L and p != pos_w
        ]
        # every commitment of the forgotten agent must be realized by known
        # structure (plus the other commitments) at this point
        realized = True
        for b in mates:
            pair = _pkey(w, b)
            closure = _closure(child_bag, part_c, promises_c, cells_c, G, skip=pair)
            if closure[pair] != promises_c[pair]:
                realized = False
                break
        if not realized:
            continue
        if mode == "ir":
            utils = _bag_utilities(child_bag, part_c, promises_c, cells_c, ctx)
            if utils is None:
                continue
            w_util = utils[w]
        if mates:
            vec_w = tuple(
                promises_c[_pkey(w, child_bag[p])]
                if part_c[p] == L and p != pos_w
                else None
                for p in range(len(child_bag))
            )
            vec_w = _remove(vec_w, pos_w)
            merged: dict = {}
            for cell in cells_c:
                key = (cell[0], _remove(cell[1], pos_w))
                if mode == "ir":
                    count, worst = merged.get(key, (0, _INF))
                    merged[key] = (count + cell[2], min(worst, cell[3]))
                else:
                    merged[key] = merged.get(key, 0) + cell[2]
            wkey = (L, vec_w)
            if mode == "ir":
                count, worst = merged.get(wkey, (0, _INF))
                merged[wkey] = (count + 1, min(worst, w_util))
                cells = tuple(sorted((k[0], k[1], v[0], v[1]) for k, v in merged.items()))
            else:
                merged[wkey] = merged.get(wkey, 0) + 1
                cells = tuple(sorted((k[0], k[1], v) for k, v in merged.items()))
            promises = {
                p: d for p, d in promises_c.items() if w not in p
            }
            part, relabel = _canon_part(_remove(part_c, pos_w))
            cells = tuple(sorted((relabel[c[0]],) + c[1:] for c in cells))
            table.add((part, _freeze_promises(promises), cells), w_c, blocks_c)
        else:
            # the coalition completes; only the IR screen remains
            if mode == "ir":
                if w_util < 0:
                    continue
                if any(c[0] == L and c[3] < 0 for c in cells_c):
                    continue
            remaining = [
                (c[0], _remove(c[1], pos_w)) + c[2:] for c in cells_c if c[0] != L
            ]
            part, relabel = _canon_part(_remove(part_c, pos_w))
            cells = tuple(sorted((relabel[c[0]],) + c[1:] for c in remaining))
            table.add((part, _freeze_promises(promises_c), cells), w_c, blocks_c)
    return table


def _vdist(vec_y, vec_z):
    best = _INF
    for ey, ez in zip(vec_y, vec_z):
        if ey is not None and ez is not None and ey + ez < best:
            best = ey + ez
    return best


def _merge_blocks(blocks_y, blocks_z):
    out = [set(b) for b in blocks_y]
    for bz in blocks_z:
        hit = None
        for b in out:
            if b & bz:
                hit = b
                break
        if hit is None:
            out.append(set(bz))
        else:
            hit |= bz
    return tuple(frozenset(b) for b in out)


def _compressed_join(ctx, bag, left_table, right_table):
    mode = ctx.mode
    table = _Table(ctx)
    grouped: dict = {}
    for sig, val in right_table.data.items():
        grouped.setdefault((sig[0], sig[1]), []).append((sig[2], val))
    for sig_y, (w_y, blocks_y, _) in left_table.data.items():
        part, prom, cells_y = sig_y
        matches = grouped.get((part, prom))
        if not matches:
            continue
        promises = dict(prom)
        for cells_z, (w_z, blocks_z, _) in matches:
            # cross contributions between the two sides' forgotten agents
            delta = 0
            dead = False
            cross_y: list[int] = [0] * len(cells_y)
            cross_z: list[int] = [0] * len(cells_z)
            for i, cy in enumerate(cells_y):
                for j, cz in enumerate(cells_z):
                    if cy[0] != cz[0]:
                        continue
                    v = ctx.score(_vdist(cy[1], cz[1]))
                    if v is None:
                        dead = True
                        break
                    delta += 2 * cy[2] * cz[2] * v
                    cross_y[i] += cz[2] * v
                    cross_z[j] += cy[2] * v
                if dead:
                    break
            if dead:
                continue
            merged: dict = {}
            for inc, cell in list(zip(cross_y, cells_y)) + list(zip(cross_z, cells_z)):
                key = (cell[0], cell[1])
                if mode == "ir":
                    count, worst = merged.get(key, (0, _INF))
                    merged[key] = (count + cell[2], min(worst, cell[3] + inc))
                else:
                    merged[key] = merged.get(key, 0) + cell[2]
            if mode == "ir":
                cells = tuple(sorted((k[0], k[1], v[0], v[1]) for k, v in merged.items()))
            else:
                cells = tuple(sorted((k[0], k[1], v) for k, v in merged.items()))
            # the united structure must not undercut any commitment
            if not _consistent(bag, part, promises, cells, ctx.G):
                continue
            # subtract the bag pairs counted by both sides
            over = 0
            for (u, v), d in promises.items():
                sc = ctx.score(d)
                if sc is None:
                    dead = True
                    break
                over += 2 * sc
            if dead:
                continue
            table.add(
                (part, prom, cells),
                w_y + w_z + delta - over,
                _merge_blocks(blocks_y, blocks_z),
            )
    return table


def _run_compressed(ctx) -> Optional[tuple[int, Outcome]]:
    ntd = ctx.ntd
    tables: dict[int, _Table] = {}
    for idx in ntd.postorder():
        node = ntd.nodes[idx]
        bag = tuple(sorted(node.bag))
        if node.kind == "leaf":
            tables[idx] = _compressed_leaf(ctx)
        elif node.kind == "introduce":
            child = node.children[0]
            child_bag = tuple(sorted(ntd.nodes[child].bag))
            tables[idx] = _compressed_introduce(
                ctx, bag, child_bag, node.agent, tables.pop(child)
            )
        elif node.kind == "forget":
            child = node.children[0]
            child_bag = tuple(sorted(ntd.nodes[child].bag))
            tables[idx] = _compressed_forget(
                ctx, bag, child_bag, node.agent, tables.pop(child)
            )
        else:
            left, right = node.children
            tables[idx] = _compressed_join(ctx, bag, tables.pop(left), tables.pop(right))
    root = tables[ntd.root]
    if not root.data:
        return None
    (welfare, blocks, _) = root.data[((), (), ())]
    return welfare, Outcome.from_blocks(blocks)


# --- Nash-stable mode: explicit open coalitions, exact closure-time checks ---


class _NsTable:
    def __init__(self, ctx):
        self.ctx = ctx
        self.data: dict = {}

    def add(self, key, closed_welfare, closed_blocks):
        self.ctx.bump()
        old = self.data.get(key)
        if old is not None:
            if closed_welfare < old[0]:
                return
            if closed_welfare == old[0] and _witness_key(closed_blocks) >= old[2]:
                return
        self.data[key] = (closed_welfare, closed_blocks, _witness_key(closed_blocks))


def _ns_key(open_blocks, pending, devs):
    return (
        tuple(sorted(open_blocks, key=min)),
        tuple(sorted(pending)),
        tuple(sorted(devs.items())),
    )


def _ns_run(ctx) -> Optional[tuple[int, Outcome]]:
    G, s = ctx.G, ctx.s
    ntd = ctx.ntd
    tables: dict[int, _NsTable] = {}
    for idx in ntd.postorder():
        node = ntd.nodes[idx]
        bag = node.bag
        table = _NsTable(ctx)
        if node.kind == "leaf":
            table.add(_ns_key((), (), {}), 0, ())
        elif node.kind == "introduce":
            a = node.agent
            child = tables.pop(node.children[0])
            for (opens, pending, devs), (wf, closed, _) in child.data.items():
                devmap = dict(devs)
                devmap[a] = 0
                for i, block in enumerate(opens):
                    grown = opens[:i] + (block | {a},) + opens[i + 1 :]
                    table.add(_ns_key(grown, pending, devmap), wf, closed)
                table.add(_ns_key(opens + (frozenset({a}),), pending, devmap), wf, closed)
        elif node.kind == "forget":
            w = node.agent
            child = tables.pop(node.children[0])
            for (opens, pending, devs), (wf, closed, _) in child.data.items():
                block = next(b for b in opens if w in b)
                if block & bag:
                    # coalition stays open; nothing changes structurally
                    table.add((opens, pending, devs), wf, closed)
                    continue
                # the coalition completes: run every check on the real subgraph
                rest = tuple(b for b in opens if b is not block)
                utils = {u: utility_in_coalition(s, G, block, u) for u in block}
                devmap = dict(devs)
                if any(utils[u] < 0 or utils[u] < devmap[u] for u in block):
                    continue
                alive = True
                pend_util = dict(pending)
                block_mask = G.mask_of(block)
                others = set(u for b in rest for u in b) | set(pend_util)
                for t in others:
                    if not (G.adj_mask[t] & block_mask):
                        continue
                    jut = utility_in_coalition(s, G, set(block) | {t}, t)
                    if t in pend_util:
                        if jut > pend_util[t]:
                            alive = False
                            break
                    elif jut > devmap.get(t, 0):
                        devmap[t] = jut
                if not alive:
                    continue
                rest_mask = G.mask_of(u for b in rest for u in b)
                new_pending = [
                    (t, ut) for t, ut in pending if G.adj_mask[t] & rest_mask
                ]
                for u in sorted(block):
                    devmap.pop(u, None)
                    if G.adj_mask[u] & rest_mask:
                        new_pending.append((u, utils[u]))
                table.add(
                    _ns_key(rest, new_pending, devmap),
                    wf + sum(utils.values()),
                    closed + (block,),
                )
        else:
            left = tables.pop(node.children[0])
            right = tables.pop(node.children[1])
            grouped: dict = {}
            for key_z, val_z in right.data.items():
                sig = tuple(sorted((frozenset(b & bag) for b in key_z[0]), key=min))
                grouped.setdefault(sig, []).append((key_z, val_z))
            for (opens_y, pending_y, devs_y), (wf_y, closed_y, _) in left.data.items():
                sig = tuple(sorted((frozenset(b & bag) for b in opens_y), key=min))
                for (opens_z, pending_z, devs_z), (wf_z, closed_z, _) in grouped.get(sig, ()):
                    by_bagpart = {frozenset(b & bag): b for b in opens_z}
                    merged = tuple(b | by_bagpart[frozenset(b & bag)] for b in opens_y)
                    devmap = dict(devs_y)
                    for t, d in devs_z:
                        devmap[t] = max(devmap.get(t, 0), d)
                    pending = tuple(set(pending_y) | set(pending_z))
                    table.add(
                        _ns_key(merged, pending, devmap),
                        wf_y + wf_z,
                        closed_y + closed_z,
                    )
        tables[idx] = table
    root = tables[ntd.root]
    best = None
    for (opens, pending, devs), (wf, closed, wkey) in root.data.items():
        assert not opens and not pending and not devs
        if best is None or wf > best[0] or (wf == best[0] and wkey < best[2]):
            best = (wf, closed, wkey)
    if best is None:
        return None
    return best[0], Outcome.from_blocks(best[1])


def _prepare(s, G, decomposition):
    if not s.is_closed:
        raise UnsupportedInputError("the treewidth DP handles closed-tail vectors only")
    if decomposition is None:
        decomposition = nice_decomposition(G)
    return decomposition


def solve_tw_welfare(
    s: ScoringVector,
    G: SocialNetwork,
    decomposition: Optional[NiceTreeDecomposition] = None,
    budget: int = DEFAULT_RECORD_BUDGET,
) -> SolveResult:
    """Welfare-optimal outcome by dynamic programming over a nice decomposition."""
    decomposition = _prepare(s, G, decomposition)
    ctx = _Ctx(s, G, decomposition, "welfare", budget)
    solved = _run_compressed(ctx)
    assert solved is not None  # the all-singletons lineage always survives
    welfare, outcome = solved
    if social_welfare(s, G, outcome) != welfare:
        raise AssertionError("DP welfare disagrees with direct evaluation")
    return SolveResult(outcome, welfare, "welfare", True, "twdp")


def solve_tw_ir(
    s: ScoringVector,
    G: SocialNetwork,
    decomposition: Optional[NiceTreeDecomposition] = None,
    budget: int = DEFAULT_RECORD_BUDGET,
) -> SolveResult:
    """Maximum-welfare individually rational outcome; tallies carry the worst
    utility over the forgotten agents sharing a distance vector, and records
    whose completed coalition holds a negative-utility agent are dropped."""
    decomposition = _prepare(s, G, decomposition)
    ctx = _Ctx(s, G, decomposition, "ir", budget)
    solved = _run_compressed(ctx)
    assert solved is not None  # all-singletons is individually rational
    welfare, outcome = solved
    if social_welfare(s, G, outcome) != welfare or not is_individually_rational(
        s, G, outcome
    ):
        raise AssertionError("IR DP produced an inconsistent record")
    return SolveResult(outcome, welfare, "ir", True, "twdp")


def solve_tw_ns(
    s: ScoringVector,
    G: SocialNetwork,
    decomposition: Optional[NiceTreeDecomposition] = None,
    budget: int = DEFAULT_RECORD_BUDGET,
) -> Optional[SolveResult]:
    """Maximum-welfare Nash-stable outcome, or None when no stable outcome
    exists.  Deviation checks run when a coalition completes: members are
    tested against their best earlier options, and every agent that could
    join the completed coalition is either re-checked (if settled) or has its
    pending best-deviation value raised (if its own coalition is still open)."""
    decomposition = _prepare(s, G, decomposition)
    ctx = _Ctx(s, G, decomposition, "ns", budget)
    solved = _ns_run(ctx)
    if solved is None:
        return None
    welfare, outcome = solved
    if social_welfare(s, G, outcome) != welfare or not is_nash_stable(s, G, outcome):
        raise AssertionError("NS DP produced an inconsistent record")
    return SolveResult(outcome, welfare, "ns", True, "twdp")
