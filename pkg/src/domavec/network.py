"""Weighted similarity graphs over concept sets and modularity partitioning.

The partitioner is the classic two-phase greedy modularity maximizer with a
resolution parameter.  Visit order is fixed (sorted node ids) so results
are reproducible; the seed only arbitrates exact ties between candidate
communities.
"""

import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph: ``nodes`` are words, ``edges`` are (i, j, weight)."""

    nodes: tuple
    edges: tuple                      # (i, j, w) with i < j, w >= 0
    skipped_pairs: tuple = ()         # (word_a, word_b, reason) from build_graph

    def __post_init__(self):
        n = len(self.nodes)
        seen = set()
        for i, j, w in self.edges:
            if not (0 <= i < j < n):
                raise ValueError(f"bad edge endpoints ({i}, {j}) for {n} nodes")
            if w < 0:
                raise ValueError(f"negative edge weight {w}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    @property
    def total_weight(self):
        return sum(w for _, _, w in self.edges)


@dataclass(frozen=True)
class Partition:
    assignment: dict                  # node word -> class id, contiguous from 0
    modularity: float
    resolution: float
    num_classes: int = field(init=False)

    def __post_init__(self):
        ids = set(self.assignment.values())
        if ids != set(range(len(ids))):
            raise ValueError("class ids must be contiguous from 0")
        object.__setattr__(self, "num_classes", len(ids))

    def classes(self):
        """Class id -> sorted member list."""
        out = defaultdict(list)
        for node, cid in self.assignment.items():
            out[cid].append(node)
        return {cid: sorted(members) for cid, members in out.items()}


def build_graph(words, sim, edge_floor=0.0):
    """Score every unordered pair with ``sim`` and keep edges >= edge_floor.

    A pair whose similarity call raises is skipped and reported in
    ``skipped_pairs`` instead of aborting the whole graph.
    """
    words = list(words)
    if len(words) < 2:
        raise ValueError("build_graph requires at least 2 words")
    if len(set(words)) != len(words):
        raise ValueError("duplicate words in graph node list")
    edges = []
    skipped = []
    for i, j in combinations(range(len(words)), 2):
        try:
            w = float(sim(words[i], words[j]))
        except Exception as exc:  # noqa: BLE001 - reported, not silenced
            skipped.append((words[i], words[j], f"{type(exc).__name__}: {exc}"))
            continue
        if w >= edge_floor and w >= 0:
            edges.append((i, j, w))
    return WeightedGraph(nodes=tuple(words), edges=tuple(edges),
                         skipped_pairs=tuple(skipped))


def modularity(g, assignment, resolution=1.0):
    """Resolution-scaled modularity of a node->class assignment of ``g``."""
    m = g.total_weight
    if m == 0:
        return 0.0
    labels = [assignment[w] for w in g.nodes]
    degree = [0.0] * len(g.nodes)
    intra = 0.0
    for i, j, w in g.edges:
        degree[i] += w
        degree[j] += w
        if labels[i] == labels[j]:
            intra += w
    class_degree = defaultdict(float)
    for i, lab in enumerate(labels):
        class_degree[lab] += degree[i]
    penalty = sum(kc * kc for kc in class_degree.values()) / (4.0 * m * m)
    return intra / m - resolution * penalty


def _one_level(adj, loops, degrees, m, resolution, rng, init=None):
    """Greedy local moves until no node improves; returns (node2com, moved).

    Every candidate's insertion gain is measured after removing the node, so
    comparing against the node's own community is an apples-to-apples choice
    of where to re-insert; an empty community (gain 0) is allowed, letting a
    node escape a community it only harms.
    """
    n = len(adj)
    node2com = list(init) if init is not None else list(range(n))
    com_tot = defaultdict(float)
    for i, c in enumerate(node2com):
        com_tot[c] += degrees[i]
    fresh = max(node2com, default=-1) + 1
    moved_any = False
    improved = True
    while improved:
        improved = False
        for node in range(n):
            com = node2com[node]
            k = degrees[node]
            neigh_w = defaultdict(float)
            for nb, w in adj[node].items():
                if nb != node:
                    neigh_w[node2com[nb]] += w
            com_tot[com] -= k

            def gain_of(c):
                return (neigh_w.get(c, 0.0)
                        - resolution * k * com_tot[c] / (2.0 * m))

            best_gain = gain_of(com)
            best = [com]
            for cand in sorted(neigh_w):
                if cand == com:
                    continue
                gain = gain_of(cand)
                if gain > best_gain + 1e-12:
                    best_gain = gain
                    best = [cand]
                elif abs(gain - best_gain) <= 1e-12:
                    best.append(cand)
            if 0.0 > best_gain + 1e-12:
                best_gain = 0.0
                best = [None]
            if com in best:
                choice = com
            elif len(best) == 1:
                choice = best[0]
            else:
                choice = rng.choice(best)
            if choice is None:
                choice = fresh
                fresh += 1
            com_tot[choice] += k
            node2com[node] = choice
            if choice != com:
                improved = True
                moved_any = True
    return node2com, moved_any


def _labels_modularity(edges, degrees, m, labels, resolution):
    intra = sum(w for i, j, w in edges if labels[i] == labels[j])
    com_deg = defaultdict(float)
    for i, k in enumerate(degrees):
        com_deg[labels[i]] += k
    penalty = sum(k * k for k in com_deg.values()) / (4.0 * m * m)
    return intra / m - resolution * penalty


def _lookahead(adj, edges, degrees, m, resolution, rng, membership):
    """Escape shallow local optima with compound moves.

    Single-node greediness stalls where the profitable step is "merge two
    communities, then let nodes re-settle" or "eject one node and let
    others follow it".  Each candidate (every community pair merge, every
    ejection) is applied tentatively, refined with node moves, and kept
    only when the refined modularity strictly improves.  Quadratic in the
    community count, intended for concept networks (hundreds of nodes),
    not web-scale graphs.
    """
    n = len(adj)
    loops = [0.0] * n
    improved_any = False
    while True:
        base = _labels_modularity(edges, degrees, m, membership, resolution)
        candidates = []
        coms = sorted(set(membership))
        for ai in range(len(coms)):
            for bi in range(ai + 1, len(coms)):
                a, b = coms[ai], coms[bi]
                candidates.append([a if c == b else c for c in membership])
        fresh = max(coms) + 1
        sizes = defaultdict(int)
        for c in membership:
            sizes[c] += 1
        for node in range(n):
            if sizes[membership[node]] > 1:
                trial = list(membership)
                trial[node] = fresh
                candidates.append(trial)
        best_q = base + 1e-12
        best = None
        for trial in candidates:
            refined, _ = _one_level(adj, loops, degrees, m, resolution, rng,
                                    init=trial)
            q = _labels_modularity(edges, degrees, m, refined, resolution)
            if q > best_q:
                best_q = q
                best = refined
        if best is None:
            return membership, improved_any
        membership = best
        improved_any = True


def _aggregate(adj, loops, node2com):
    """Collapse communities into single nodes, keeping intra weight as loops."""
    coms = sorted(set(node2com))
    relabel = {c: i for i, c in enumerate(coms)}
    new_n = len(coms)
    new_adj = [defaultdict(float) for _ in range(new_n)]
    new_loops = [0.0] * new_n
    for i, c in enumerate(node2com):
        new_loops[relabel[c]] += loops[i]
    for i in range(len(adj)):
        ci = relabel[node2com[i]]
        for j, w in adj[i].items():
            if j <= i:
                continue
            cj = relabel[node2com[j]]
            if ci == cj:
                new_loops[ci] += w
            else:
                new_adj[ci][cj] += w
                new_adj[cj][ci] += w
    return new_adj, new_loops, relabel


def _louvain_once(g, adj0, degrees0, m, resolution, rng, membership):
    """One full run: coarsening passes plus level-0 refinement/lookahead."""
    n = len(adj0)
    loops0 = [0.0] * n
    while True:
        # coarsening passes over aggregates of the current membership
        adj, loops, relabel = _aggregate(adj0, loops0, membership)
        membership = [relabel[c] for c in membership]
        while True:
            degrees = [sum(a.values()) + 2.0 * loops[i]
                       for i, a in enumerate(adj)]
            node2com, moved = _one_level(adj, loops, degrees, m,
                                         resolution, rng)
            if not moved:
                break
            membership = [node2com[c] for c in membership]
            before = len(adj)
            adj, loops, relabel = _aggregate(adj, loops, node2com)
            membership = [relabel[c] for c in membership]
            if len(adj) == before:
                break
        # refinement on the original graph from the current communities
        membership, moved_nodes = _one_level(adj0, loops0, degrees0, m,
                                             resolution, rng,
                                             init=membership)
        membership, moved_compound = _lookahead(adj0, g.edges, degrees0, m,
                                                resolution, rng, membership)
        if not (moved_nodes or moved_compound):
            return membership


def louvain(g, resolution=0.7, seed=0, restarts="auto"):
    """Partition ``g`` by greedy modularity maximization.

    Deterministic for a fixed seed: nodes are visited in index order and
    randomness only picks between exactly-tied candidate communities and
    seeds the restart initializations.  Restart 0 begins from singletons;
    further restarts begin from seeded random assignments and the best
    final modularity wins (earliest restart on ties).  ``restarts="auto"``
    retries small graphs (<= 48 nodes) eight times and runs large graphs
    once.  The returned Partition carries the modularity measured on the
    original graph.
    """
    n = len(g.nodes)
    if n == 0:
        raise ValueError("cannot partition an empty graph")
    if restarts == "auto":
        restarts = 8 if n <= 48 else 1
    adj0 = [defaultdict(float) for _ in range(n)]
    for i, j, w in g.edges:
        if w > 0:
            adj0[i][j] += w
            adj0[j][i] += w
    degrees0 = [sum(a.values()) for a in adj0]
    m = g.total_weight
    membership = list(range(n))
    if m > 0:
        best_membership = None
        best_q = float("-inf")
        for attempt in range(max(1, restarts)):
            rng = random.Random(seed * 1_000_003 + attempt)
            if attempt == 0:
                init = list(range(n))
            else:
                init = [rng.randrange(n) for _ in range(n)]
            result = _louvain_once(g, adj0, degrees0, m, resolution, rng, init)
            q = _labels_modularity(g.edges, degrees0, m, result, resolution)
            if q > best_q + 1e-12:
                best_q = q
                best_membership = result
        membership = best_membership
    # contiguous ids, ordered by each class's smallest node index
    order = {}
    for i, c in enumerate(membership):
        order.setdefault(c, i)
    relabel = {c: rank for rank, c in
               enumerate(sorted(order, key=lambda c: order[c]))}
    assignment = {g.nodes[i]: relabel[c] for i, c in enumerate(membership)}
    return Partition(assignment=assignment,
                     modularity=modularity(g, assignment, resolution),
                     resolution=resolution)


def class_precision(p, judgments):
    """Fraction of nodes judged correct; every node must be judged."""
    missing = [node for node in p.assignment if node not in judgments]
    if missing:
        raise ValueError(f"missing judgments for {sorted(missing)}")
    if not p.assignment:
        raise ValueError("empty partition")
    correct = sum(1 for node in p.assignment if judgments[node])
    return correct / len(p.assignment)


def write_edges(g, path):
    """Plain edge-list export: ``node_a<TAB>node_b<TAB>weight``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, j, w in g.edges:
            fh.write(f"{g.nodes[i]}\t{g.nodes[j]}\t{w:.6f}\n")


def write_partition(p, path):
    """Partition export: ``node<TAB>class_id``, nodes sorted."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for node in sorted(p.assignment):
            fh.write(f"{node}\t{p.assignment[node]}\n")
