"""Independent reference implementations used to check the library.

Everything here recomputes results from first principles (plain BFS,
all-pairs enumeration, exhaustive partition search) without touching the
library's counting or clustering code paths.
"""

import random
from collections import Counter, deque

from domavec.treebank import SentenceGraph, Token

SUBJ = {"nsubj"}
OBJ = {"obj", "dobj", "iobj"}


def adjacency_of(tokens):
    adj = {t.index: set() for t in tokens}
    n = len(tokens)
    for t in tokens:
        if 0 < t.head <= n:
            adj[t.index].add(t.head)
            adj[t.head].add(t.index)
    return adj


def bfs_distance(adj, i, j):
    if i == j:
        return 0
    seen = {i}
    frontier = deque([(i, 0)])
    while frontier:
        node, d = frontier.popleft()
        for nb in adj[node]:
            if nb == j:
                return d + 1
            if nb not in seen:
                seen.add(nb)
                frontier.append((nb, d + 1))
    return None


def count_cells(graphs, rows_words, dims, window, grav_weights, grav_default,
                context_pos):
    """Brute-force SD-W2 counting: all ordered token pairs, BFS distances.

    Returns scaled-integer cells keyed by (row index, column index), the
    same keying the library uses, so matrices compare cell-for-cell.
    """
    row_idx = {w: i for i, w in enumerate(rows_words)}
    col_idx = {label: i for i, label in enumerate(dims.labels)}
    verb_set = set(dims.logical_labels) if dims.kind == "verb" else None
    cells = Counter()
    for g in graphs:
        adj = adjacency_of(g.tokens)
        for t in g.tokens:
            if t.lemma not in row_idx:
                continue
            for c in g.tokens:
                if c.index == t.index:
                    continue
                d = bfs_distance(adj, t.index, c.index)
                if d is None or d > window:
                    continue
                if c.upos not in context_pos:
                    continue
                w = grav_weights.get(c.upos, grav_default)
                scaled = round(w * 1000)
                if scaled == 0:
                    continue
                if dims.kind == "verb":
                    if c.lemma not in verb_set:
                        continue
                    if t.head == c.index:
                        base = t.deprel.split(":")[0].lower()
                        role = ("subj" if base in SUBJ
                                else "obj" if base in OBJ else "other")
                    else:
                        role = "other"
                    cells[(row_idx[t.lemma], col_idx[f"{c.lemma}#{role}"])] += scaled
                elif c.lemma in col_idx:
                    cells[(row_idx[t.lemma], col_idx[c.lemma])] += scaled
    return dict(cells)


def random_tree_sentence(rng, n, lemma_pool, upos_pool, deprel_pool):
    """Random dependency tree: token 1 is the root, others attach backwards."""
    tokens = []
    for i in range(1, n + 1):
        lemma = rng.choice(lemma_pool)
        tokens.append(Token(
            index=i, surface=lemma, lemma=lemma,
            upos=rng.choice(upos_pool),
            head=0 if i == 1 else rng.randint(1, i - 1),
            deprel="root" if i == 1 else rng.choice(deprel_pool)))
    return SentenceGraph(tokens=tuple(tokens))


def partitions_of(n):
    """Every set partition of range(n) as a label list (restricted growth)."""
    labels = [0] * n

    def rec(i, max_label):
        if i == n:
            yield list(labels)
            return
        for lab in range(max_label + 2):
            labels[i] = lab
            yield from rec(i + 1, max(max_label, lab))

    yield from rec(1, 0) if n > 0 else iter([[]])


def modularity_of_labels(edges, degrees, m, labels, resolution):
    intra = sum(w for i, j, w in edges if labels[i] == labels[j])
    class_deg = Counter()
    for i, k in enumerate(degrees):
        class_deg[labels[i]] += k
    penalty = sum(kc * kc for kc in class_deg.values()) / (4.0 * m * m)
    return intra / m - resolution * penalty


def best_modularity(graph, resolution):
    """Exhaustive optimum over all partitions; exponential, keep n <= 12."""
    n = len(graph.nodes)
    m = graph.total_weight
    degrees = [0.0] * n
    for i, j, w in graph.edges:
        degrees[i] += w
        degrees[j] += w
    best = float("-inf")
    for labels in partitions_of(n):
        q = modularity_of_labels(graph.edges, degrees, m, labels, resolution)
        if q > best:
            best = q
    return best
