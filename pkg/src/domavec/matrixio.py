"""Versioned on-disk container for co-occurrence and reduced matrices.

Layout (UTF-8, LF newlines, written in binary mode so files are bit-exact
across platforms):

    DOMA1
    name<TAB>ANIMAL
    kind<TAB>noun
    window<TAB>2
    weighting<TAB>grav-default
    rows<TAB>17074
    cols<TAB>2051
    end-header
    <one row word per line>
    <one column label per line>
    <row_idx><TAB><col_idx><TAB><weight>   sorted by (row, col)

Verb matrices add a ``logical-cols`` header line; reduced matrices add
``reduced-rank`` and store float values verbatim (shortest round-trip
repr).  Build metadata that may vary between identical builds (timestamps,
corpus ids) lives in a sibling ``.manifest`` file, never in the container.
"""

import json
import numpy as np
from pathlib import Path

from .lexicon import DimensionSet, RowVocab
from .sdw2 import WEIGHT_SCALE, CoocMatrix
from .vecspace import ReducedMatrix

MAGIC = "DOMA1"


class MatrixFormatError(ValueError):
    """Container file violates the DOMA1 layout."""


def _format_scaled(scaled):
    return f"{scaled // WEIGHT_SCALE}.{scaled % WEIGHT_SCALE:03d}"


def _parse_scaled(text):
    whole, _, frac = text.partition(".")
    if len(frac) > 3 or not whole.isdigit() or (frac and not frac.isdigit()):
        raise MatrixFormatError(f"bad raw weight {text!r}")
    return int(whole) * WEIGHT_SCALE + int(frac.ljust(3, "0") or "0")


def matrix_to_bytes(m):
    """Serialize a CoocMatrix or ReducedMatrix to canonical container bytes."""
    reduced = isinstance(m, ReducedMatrix)
    header = [MAGIC, f"name\t{m.name}"]
    if reduced:
        header += ["kind\treduced", f"window\t{m.window}",
                   f"weighting\t{m.weighting}", f"rows\t{len(m.rows)}",
                   f"cols\t{m.rank}", f"reduced-rank\t{m.rank}"]
        labels = [f"svd{i:03d}" for i in range(m.rank)]
    else:
        header += [f"kind\t{m.dims.kind}", f"window\t{m.window}",
                   f"weighting\t{m.weighting}", f"rows\t{len(m.rows)}",
                   f"cols\t{len(m.dims)}"]
        if m.dims.kind == "verb":
            header.append(f"logical-cols\t{m.dims.logical_size}")
        labels = list(m.dims.labels)
    header.append("end-header")
    lines = header + list(m.rows.words) + labels
    if reduced:
        for r in range(m.values.shape[0]):
            for c in range(m.values.shape[1]):
                v = float(m.values[r, c])
                if v != 0.0:
                    lines.append(f"{r}\t{c}\t{v!r}")
    else:
        for r, c, w in m.sorted_cells():
            lines.append(f"{r}\t{c}\t{_format_scaled(w)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_matrix(m, path):
    path = Path(path)
    path.write_bytes(matrix_to_bytes(m))
    return path


def write_manifest(m, path, extra=None):
    """Sibling build-metadata file; free-form key<TAB>value lines."""
    meta = {
        "name": m.name,
        "rows": len(m.rows),
        "cols": m.rank if isinstance(m, ReducedMatrix) else len(m.dims),
        "window": m.window,
        "weighting": m.weighting,
    }
    if isinstance(m, ReducedMatrix):
        meta["reduced-rank"] = m.rank
    else:
        meta["corpus"] = m.corpus_id
        meta["built-at"] = m.built_at
        meta["source-tags"] = ",".join(m.dims.source_tags)
        meta["nonzero-cells"] = len(m.cells)
    meta.update(extra or {})
    text = "".join(f"{k}\t{v}\n" for k, v in meta.items())
    Path(path).write_text(text, encoding="utf-8")


def read_header(path):
    """Header fields only (cheap catalog listing)."""
    fields = {}
    with open(path, encoding="utf-8") as fh:
        if fh.readline().rstrip("\n") != MAGIC:
            raise MatrixFormatError(f"{path}: missing {MAGIC} magic line")
        for line in fh:
            line = line.rstrip("\n")
            if line == "end-header":
                return fields
            key, sep, value = line.partition("\t")
            if not sep:
                raise MatrixFormatError(f"{path}: bad header line {line!r}")
            fields[key] = value
    raise MatrixFormatError(f"{path}: header never terminated")


def read_matrix(path):
    """Load a container file back into a CoocMatrix or ReducedMatrix."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MAGIC:
        raise MatrixFormatError(f"{path}: missing {MAGIC} magic line")
    fields = {}
    pos = 1
    while pos < len(lines) and lines[pos] != "end-header":
        key, sep, value = lines[pos].partition("\t")
        if not sep:
            raise MatrixFormatError(f"{path}: bad header line {lines[pos]!r}")
        fields[key] = value
        pos += 1
    if pos == len(lines):
        raise MatrixFormatError(f"{path}: header never terminated")
    pos += 1
    try:
        name = fields["name"]
        kind = fields["kind"]
        n_rows = int(fields["rows"])
        n_cols = int(fields["cols"])
        window = int(fields.get("window", 0))
        weighting = fields.get("weighting", "")
    except (KeyError, ValueError) as exc:
        raise MatrixFormatError(f"{path}: incomplete header ({exc})") from None
    if len(lines) < pos + n_rows + n_cols:
        raise MatrixFormatError(f"{path}: truncated vocabulary sections")
    words = tuple(lines[pos:pos + n_rows])
    pos += n_rows
    labels = tuple(lines[pos:pos + n_cols])
    pos += n_cols
    rows = RowVocab(words=words, cutoff=n_rows)
    triples = []
    for line in lines[pos:]:
        parts = line.split("\t")
        if len(parts) != 3:
            raise MatrixFormatError(f"{path}: bad cell line {line!r}")
        r, c = int(parts[0]), int(parts[1])
        if not (0 <= r < n_rows and 0 <= c < n_cols):
            raise MatrixFormatError(f"{path}: cell ({r},{c}) out of bounds")
        triples.append((r, c, parts[2]))
    if kind == "reduced":
        rank = int(fields["reduced-rank"])
        values = np.zeros((n_rows, rank))
        for r, c, raw in triples:
            values[r, c] = float(raw)
        return ReducedMatrix(rows=rows, name=name, rank=rank, values=values,
                             singular_values=np.array([]), window=window,
                             weighting=weighting)
    if kind == "verb":
        logical = tuple(label.rsplit("#", 1)[0] for label in labels[::3])
        dims = DimensionSet(name=name, labels=labels, kind="verb",
                            logical_labels=logical)
    else:
        dims = DimensionSet(name=name, labels=labels, kind=kind)
    cells = {(r, c): _parse_scaled(raw) for r, c, raw in triples}
    return CoocMatrix(rows=rows, dims=dims, cells=cells, window=window,
                      weighting=weighting)


def write_catalog(entries, path):
    """Catalog file: matrix name -> container path (relative to the catalog)."""
    path = Path(path)
    payload = {"matrices": {name: str(p) for name, p in entries.items()}}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path
