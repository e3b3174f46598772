"""Stream dependency-parsed corpora (CoNLL-U) into sentence graphs.

Sentences are kept as flat token lists plus an undirected adjacency derived
from the head links; all distance computations run on that adjacency, so
corpus noise (multiple roots, cycles) degrades gracefully instead of
crashing.
"""

import gzip
import io
from collections import deque
from dataclasses import dataclass, field


class ConlluError(ValueError):
    """Malformed CoNLL-U input; carries the 1-based line number."""

    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Token:
    index: int          # 1-based position in the sentence
    surface: str
    lemma: str
    upos: str
    head: int           # 0 = root
    deprel: str
    xpos: str = "_"
    feats: str = "_"
    deps: str = "_"
    misc: str = "_"

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"token index must be >= 1, got {self.index}")
        if self.head < 0:
            raise ValueError(f"head must be >= 0, got {self.head}")
        if self.head == self.index:
            raise ValueError(f"token {self.index} heads itself")
        if not self.deprel:
            raise ValueError(f"token {self.index} has empty deprel")

    def to_conllu_line(self):
        return "\t".join([
            str(self.index), self.surface, self.lemma, self.upos, self.xpos,
            self.feats, str(self.head), self.deprel, self.deps, self.misc,
        ])


@dataclass(frozen=True)
class SentenceGraph:
    tokens: tuple
    arcs: frozenset = field(init=False)  # undirected {i, j} pairs from head links

    def __post_init__(self):
        arcs = set()
        n = len(self.tokens)
        for tok in self.tokens:
            if tok.head > 0 and tok.head <= n:
                arcs.add(frozenset((tok.index, tok.head)))
        object.__setattr__(self, "arcs", frozenset(arcs))

    def __len__(self):
        return len(self.tokens)

    def token(self, index):
        """Token by its 1-based sentence index."""
        by_index = getattr(self, "_by_index", None)
        if by_index is None:
            by_index = {t.index: t for t in self.tokens}
            object.__setattr__(self, "_by_index", by_index)
        if index not in by_index:
            raise IndexError(f"no token with index {index} in this sentence")
        return by_index[index]

    def neighbors(self):
        """Adjacency as {index: sorted tuple of neighbor indices}."""
        adj = {tok.index: [] for tok in self.tokens}
        for arc in self.arcs:
            i, j = tuple(arc)
            adj[i].append(j)
            adj[j].append(i)
        return {i: tuple(sorted(ns)) for i, ns in adj.items()}

    def to_conllu(self):
        return "\n".join(tok.to_conllu_line() for tok in self.tokens) + "\n"


def _parse_token_line(line, line_no):
    cols = line.split("\t")
    if len(cols) != 10:
        raise ConlluError(line_no, f"expected 10 tab-separated columns, got {len(cols)}")
    idx = cols[0]
    if "-" in idx or "." in idx:
        return None  # multiword-token range or empty node: skipped
    try:
        index = int(idx)
    except ValueError:
        raise ConlluError(line_no, f"non-numeric token index {idx!r}") from None
    try:
        head = int(cols[6])
    except ValueError:
        raise ConlluError(line_no, f"non-numeric head {cols[6]!r}") from None
    try:
        return Token(index=index, surface=cols[1], lemma=cols[2], upos=cols[3],
                     xpos=cols[4], feats=cols[5], head=head, deprel=cols[7],
                     deps=cols[8], misc=cols[9])
    except ValueError as exc:
        raise ConlluError(line_no, str(exc)) from None


def parse_conllu(stream, on_error="raise"):
    """Yield one SentenceGraph per sentence of a CoNLL-U character stream.

    Comment lines, multiword-token ranges (``1-2``) and empty nodes (``1.1``)
    are skipped.  A malformed token line raises :class:`ConlluError` when
    ``on_error="raise"``; with ``on_error="skip"`` the whole offending
    sentence is dropped and parsing continues at the next blank line.
    """
    if on_error not in ("raise", "skip"):
        raise ValueError(f"on_error must be 'raise' or 'skip', got {on_error!r}")
    tokens = []
    poisoned = False
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            if tokens and not poisoned:
                yield SentenceGraph(tokens=tuple(tokens))
            tokens = []
            poisoned = False
            continue
        if line.startswith("#") or poisoned:
            continue
        try:
            tok = _parse_token_line(line, line_no)
        except ConlluError:
            if on_error == "raise":
                raise
            tokens = []
            poisoned = True
            continue
        if tok is not None:
            tokens.append(tok)
    if tokens and not poisoned:
        yield SentenceGraph(tokens=tuple(tokens))


def open_corpus(path):
    """Open a CoNLL-U file for reading, transparently handling gzip; UTF-8."""
    path = str(path)
    if path.endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


def read_corpus(path, on_error="raise"):
    """Stream SentenceGraphs from a (possibly gzipped) CoNLL-U file."""
    with open_corpus(path) as fh:
        yield from parse_conllu(fh, on_error=on_error)


def syntactic_distance(g, i, j):
    """Arcs separating tokens i and j in the undirected dependency graph.

    Returns the shortest-path length, 0 iff ``i == j``, or None when the
    tokens lie in different connected components.
    """
    adj = g.neighbors()
    if i not in adj or j not in adj:
        raise IndexError(f"token indices ({i}, {j}) not in this sentence")
    if i == j:
        return 0
    seen = {i}
    queue = deque([(i, 0)])
    while queue:
        node, dist = queue.popleft()
        for nb in adj[node]:
            if nb == j:
                return dist + 1
            if nb not in seen:
                seen.add(nb)
                queue.append((nb, dist + 1))
    return None


def distances_within(g, start, limit):
    """All tokens within ``limit`` arcs of ``start``: {index: distance}.

    Depth-limited BFS used by the matrix builder; includes ``start`` at 0.
    """
    adj = g.neighbors()
    dist = {start: 0}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        d = dist[node]
        if d == limit:
            continue
        for nb in adj[node]:
            if nb not in dist:
                dist[nb] = d + 1
                queue.append(nb)
    return dist
