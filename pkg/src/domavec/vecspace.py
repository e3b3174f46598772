"""Vector queries: extraction, similarity, neighbors, SVD reduction, tensors.

Every similarity here is a pure function of immutable matrices, so queries
can run concurrently and repeat bit-identically.  A word's concept matrix
stacks its SVD-reduced vectors from several domain matrices, each part
L2-normalized so that every domain contributes the same maximal energy to
the tensor similarity.
"""

import warnings
from dataclasses import dataclass

import numpy as np


class OOVError(KeyError):
    """Word missing from a matrix's row vocabulary."""

    def __init__(self, word, matrix):
        super().__init__(f"word {word!r} not in matrix {matrix!r}")
        self.word = word
        self.matrix = matrix


class DegenerateVectorWarning(UserWarning):
    """A similarity was asked of an all-zero vector; the result is 0 by fiat."""


@dataclass(frozen=True)
class WordVector:
    word: str
    matrix: str
    values: np.ndarray

    @property
    def is_zero(self):
        return not np.any(self.values)


@dataclass(frozen=True)
class ReducedMatrix:
    """Row-space projection of a CoocMatrix truncated to ``rank`` columns."""

    rows: object                 # RowVocab
    name: str
    rank: int
    values: np.ndarray           # (n_rows, rank)
    singular_values: np.ndarray
    window: int = 0
    weighting: str = ""

    @property
    def shape(self):
        return self.values.shape

    def to_array(self):
        return self.values


@dataclass(frozen=True)
class ConceptMatrix:
    """One reduced, unit-norm vector per selected domain matrix, stacked."""

    word: str
    parts: tuple                 # ((matrix name, np.ndarray of length rank), ...)
    rank: int

    @property
    def part_names(self):
        return tuple(name for name, _ in self.parts)

    def stacked(self):
        return np.vstack([vec for _, vec in self.parts])


def get_vector(m, word):
    """The word's row of matrix ``m`` as a WordVector.

    All-zero rows are valid (the word never co-occurred inside the domain);
    callers can check ``is_zero``.
    """
    idx = m.rows.index().get(word)
    if idx is None:
        raise OOVError(word, m.name)
    return WordVector(word=word, matrix=m.name, values=m.to_array()[idx].copy())


def cosine(u, v):
    """Cosine similarity; 0.0 (with a DegenerateVectorWarning) on zero input."""
    u = np.asarray(getattr(u, "values", u), dtype=float)
    v = np.asarray(getattr(v, "values", v), dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"vector shapes differ: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        warnings.warn("cosine of an all-zero vector is 0 by definition",
                      DegenerateVectorWarning, stacklevel=2)
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def dot_product(u, v):
    u = np.asarray(getattr(u, "values", u), dtype=float)
    v = np.asarray(getattr(v, "values", v), dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"vector shapes differ: {u.shape} vs {v.shape}")
    return float(np.dot(u, v))


MEASURES = {"cosine": cosine, "dot": dot_product}


def register_measure(name, fn):
    """Add a similarity measure to the registry (cosine stays the default)."""
    MEASURES[name] = fn


def resolve_measure(measure):
    if callable(measure):
        return measure
    try:
        return MEASURES[measure]
    except KeyError:
        raise ValueError(f"unknown similarity measure {measure!r}; "
                         f"known: {sorted(MEASURES)}") from None


def _all_scores(m, word, measure):
    arr = m.to_array()
    idx = m.rows.index().get(word)
    if idx is None:
        raise OOVError(word, m.name)
    q = arr[idx]
    if measure is cosine:
        # vectorized; zero-norm rows (or query) score 0 by the same fiat
        norms = np.linalg.norm(arr, axis=1)
        qn = np.linalg.norm(q)
        with np.errstate(divide="ignore", invalid="ignore"):
            scores = arr @ q / (norms * qn)
        scores[~np.isfinite(scores)] = 0.0
    else:
        fn = resolve_measure(measure)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateVectorWarning)
            scores = np.array([fn(row, q) for row in arr])
    return idx, scores


def neighbors(m, word, k, measure="cosine"):
    """Top-k row words most similar to ``word``, the word itself excluded.

    Deterministic: equal scores order lexicographically.  ``k`` larger than
    the vocabulary returns the full ranking.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    measure = resolve_measure(measure)
    idx, scores = _all_scores(m, word, measure)
    ranked = sorted(
        ((w, float(scores[i])) for i, w in enumerate(m.rows.words) if i != idx),
        key=lambda ws: (-ws[1], ws[0]))
    return ranked[:k]


def similarity(m, word, target, measure="cosine"):
    """Similarity of two row words inside one matrix."""
    fn = resolve_measure(measure)
    return fn(get_vector(m, word).values, get_vector(m, target).values)


def reduce_svd(m, rank=200):
    """Truncated-SVD row projection of ``m`` (rows map to rank-length vectors).

    The per-component sign is canonicalized (the largest-magnitude loading
    of each right-singular vector is made positive, first index winning
    ties) so identical inputs give bit-identical outputs.
    """
    arr = m.to_array()
    n_rows, n_cols = arr.shape
    if not 1 <= rank <= min(n_rows, n_cols):
        raise ValueError(
            f"rank must be in 1..{min(n_rows, n_cols)} for a {n_rows}x{n_cols} "
            f"matrix, got {rank}")
    u, s, vt = np.linalg.svd(arr, full_matrices=False)
    for j in range(len(s)):
        pivot = int(np.argmax(np.abs(vt[j])))
        if vt[j, pivot] < 0:
            vt[j] = -vt[j]
            u[:, j] = -u[:, j]
    values = u[:, :rank] * s[:rank]
    return ReducedMatrix(rows=m.rows, name=m.name, rank=rank,
                         values=np.ascontiguousarray(values),
                         singular_values=s.copy(),
                         window=getattr(m, "window", 0),
                         weighting=getattr(m, "weighting", ""))


def _unit(vec):
    norm = np.linalg.norm(vec)
    return vec / norm if norm > 0 else vec


def concept_matrix(word, matrices, rank=200):
    """Stack the word's reduced vectors across matrices, one unit part each.

    ``matrices`` may mix raw CoocMatrix objects (reduced here at ``rank``)
    and pre-reduced ones (their rank must match).  Raises OOVError naming
    the first matrix missing the word.
    """
    parts = []
    for m in matrices:
        if isinstance(m, ReducedMatrix):
            if m.rank != rank:
                raise ValueError(
                    f"matrix {m.name!r} reduced at rank {m.rank}, expected {rank}")
            red = m
        else:
            red = reduce_svd(m, rank)
        if word not in red.rows:
            raise OOVError(word, red.name)
        vec = red.values[red.rows.index()[word]]
        parts.append((red.name, _unit(vec.copy())))
    if not parts:
        raise ValueError("concept_matrix requires at least one matrix")
    return ConceptMatrix(word=word, parts=tuple(parts), rank=rank)


def tensor_similarity(a, b):
    """Cosine of the two flattened concept stacks.

    Equals the normalized sum of per-part dot products; with unit parts the
    denominator is the number of parts.
    """
    if a.part_names != b.part_names or a.rank != b.rank:
        raise ValueError(
            f"concept matrices disagree: parts {a.part_names} vs {b.part_names}, "
            f"rank {a.rank} vs {b.rank}")
    return cosine(a.stacked().ravel(), b.stacked().ravel())
