"""Query orchestration and canonical text rendering.

The CLI commands and the HTTP service both call these functions, so a
neighbors/similarity/vectors answer is produced exactly once and the two
surfaces agree byte for byte.  All numbers are serialized with 6 decimal
places; tables are tab-separated UTF-8 with LF newlines.
"""

from dataclasses import dataclass

from .vecspace import get_vector, neighbors, resolve_measure


def fmt(x):
    return f"{x:.6f}"


@dataclass(frozen=True)
class QueryResult:
    word: str
    text: str                    # canonical rendering (downloadable file body)
    data: dict                   # structured payload for the service/UI


def _check_oov(mats, words):
    """(known words, [(word, matrix)] skips) for a multi-matrix query."""
    known, skipped = [], []
    for word in words:
        missing = [name for name, m in mats if word not in m.rows]
        if missing:
            skipped.extend((word, name) for name in missing)
        else:
            known.append(word)
    return known, skipped


def render_vectors(word, parts):
    lines = ["\t".join([name, *(fmt(v) for v in vec)]) for name, vec in parts]
    return "\n".join(lines) + "\n"


def render_similarity(matrix_names, targets, values):
    lines = ["\t".join(["matrix", *targets])]
    for name in matrix_names:
        lines.append("\t".join([name, *(fmt(v) for v in values[name])]))
    return "\n".join(lines) + "\n"


def render_neighbors(ranked_by_matrix):
    lines = []
    for name, ranked in ranked_by_matrix:
        for rank, (neighbor, score) in enumerate(ranked, start=1):
            lines.append(f"{name}\t{rank}\t{neighbor}\t{fmt(score)}")
    return "\n".join(lines) + "\n"


def query_vectors(mats, words):
    """Per-word vectors across the selected matrices.

    ``mats`` is an ordered list of (name, matrix).  Words missing from any
    selected matrix are skipped and reported as (word, matrix) pairs.
    """
    known, skipped = _check_oov(mats, words)
    results = []
    for word in known:
        parts = [(name, get_vector(m, word).values) for name, m in mats]
        text = render_vectors(word, parts)
        results.append(QueryResult(word=word, text=text, data={
            "word": word,
            "vectors": {name: [float(v) for v in vec] for name, vec in parts},
        }))
    return results, skipped


def query_similarity(mats, words, targets, measure="cosine"):
    """Per-word similarity table: one column per target, one row per matrix."""
    fn = resolve_measure(measure)
    known, skipped = _check_oov(mats, words)
    known_targets, target_skips = _check_oov(mats, targets)
    skipped.extend(target_skips)
    results = []
    for word in known:
        values = {}
        for name, m in mats:
            wv = get_vector(m, word).values
            values[name] = [fn(wv, get_vector(m, t).values)
                            for t in known_targets]
        text = render_similarity([name for name, _ in mats], known_targets,
                                 values)
        results.append(QueryResult(word=word, text=text, data={
            "word": word,
            "targets": list(known_targets),
            "similarities": values,
        }))
    return results, skipped


def query_neighbors(mats, words, k, measure="cosine"):
    """Per-word ranked neighbor lists, one block per matrix."""
    known, skipped = _check_oov(mats, words)
    results = []
    for word in known:
        ranked_by_matrix = [(name, neighbors(m, word, k, measure))
                            for name, m in mats]
        text = render_neighbors(ranked_by_matrix)
        results.append(QueryResult(word=word, text=text, data={
            "word": word,
            "neighbors": {name: [[w, float(s)] for w, s in ranked]
                          for name, ranked in ranked_by_matrix},
        }))
    return results, skipped


def render_sweep(rows):
    """Sweep table: ``PK<TAB>CK<TAB>P<TAB>R<TAB>F1`` with a header line."""
    lines = ["PK\tCK\tP\tR\tF1"]
    for pk, ck, p, r, f1 in rows:
        lines.append("\t".join([fmt(pk), fmt(ck), fmt(p), fmt(r), fmt(f1)]))
    return "\n".join(lines) + "\n"


def render_feature_report(scores):
    """Per-target feature table, one row per feature."""
    lines = ["feature\tS_rel\tS_unrel\tC_t\tF_t\tassigned"]
    for s in scores:
        lines.append("\t".join([
            s.feature, fmt(s.s_rel), fmt(s.s_unrel), fmt(s.c_t), fmt(s.f_t),
            "yes" if s.assigned else "no"]))
    return "\n".join(lines) + "\n"


def safe_filename(word):
    """Words become file names; keep them path-safe."""
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in word)
