"""Tagged dictionaries, domain dimension sets, and the shared row vocabulary.

A domain matrix gets its columns from a dictionary selection: every lemma
carrying one of the requested semantic tags, optionally merged with further
tags when the base class alone is too small.  Verb-derived dimension sets
store each verb three times (``lemma#subj``, ``lemma#obj``, ``lemma#other``)
so that argument position selects the column.
"""

import json
from dataclasses import dataclass, field

ROLE_SUFFIXES = ("subj", "obj", "other")
DEFAULT_MIN_DIMS = 200


class DictionaryError(ValueError):
    """Dictionary file does not match the expected schema."""


class DomainTooSmallError(ValueError):
    """Selection produced fewer labels than the configured minimum."""

    def __init__(self, name, count, min_dims):
        super().__init__(
            f"domain {name!r} selected only {count} labels (minimum {min_dims})")
        self.name = name
        self.count = count
        self.min_dims = min_dims


@dataclass(frozen=True)
class LexEntry:
    lemma: str
    pos: str
    sem_tags: frozenset
    inflection_class: str = ""
    number: str = ""
    gender: str = ""

    def __post_init__(self):
        if not self.lemma:
            raise DictionaryError("entry with empty lemma")


@dataclass(frozen=True)
class DimensionSet:
    """Ordered column labels of one domain matrix.

    ``kind`` is ``noun`` (labels are lemmas), ``verb`` (labels are
    ``lemma#role`` triples over ``logical_labels``) or ``generic`` (labels
    mirror the row vocabulary).
    """

    name: str
    labels: tuple
    source_tags: tuple = ()
    kind: str = "noun"
    logical_labels: tuple = None

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"dimension set {self.name!r} has duplicate labels")
        if self.kind not in ("noun", "verb", "generic"):
            raise ValueError(f"unknown dimension-set kind {self.kind!r}")
        if self.kind == "verb":
            if self.logical_labels is None:
                raise ValueError("verb dimension set requires logical_labels")
            if len(self.labels) != 3 * len(self.logical_labels):
                raise ValueError("verb dimension set must hold 3 columns per verb")
        elif self.logical_labels is None:
            object.__setattr__(self, "logical_labels", self.labels)

    def __len__(self):
        return len(self.labels)

    @property
    def logical_size(self):
        return len(self.logical_labels)

    def index(self):
        """Label -> column position."""
        cached = getattr(self, "_index", None)
        if cached is None:
            cached = {label: i for i, label in enumerate(self.labels)}
            object.__setattr__(self, "_index", cached)
        return cached

    def logical_index(self):
        """Logical lemma -> first physical column (role offset added later)."""
        if self.kind == "verb":
            cached = getattr(self, "_logical_index", None)
            if cached is None:
                cached = {lemma: 3 * i for i, lemma in enumerate(self.logical_labels)}
                object.__setattr__(self, "_logical_index", cached)
            return cached
        return self.index()


@dataclass(frozen=True)
class RowVocab:
    words: tuple
    source: str = ""
    cutoff: int = 0

    def __post_init__(self):
        word_set = frozenset(self.words)
        if len(word_set) != len(self.words):
            raise ValueError("row vocabulary has duplicate words")
        object.__setattr__(self, "_word_set", word_set)

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._word_set

    def index(self):
        cached = getattr(self, "_index", None)
        if cached is None:
            cached = {w: i for i, w in enumerate(self.words)}
            object.__setattr__(self, "_index", cached)
        return cached


def load_dictionary(path):
    """Load a tagged dictionary: a JSON array of [lemma, record] pairs.

    Records carry num, gen, POS, lemma, token, SEM (array of tags), FLX.
    Exact duplicates (same lemma, POS and tag set) collapse to one entry.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DictionaryError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, list):
        raise DictionaryError(f"{path}: expected a top-level JSON array")
    entries = []
    seen = set()
    for record_no, item in enumerate(data):
        if (not isinstance(item, list) or len(item) != 2
                or not isinstance(item[0], str) or not isinstance(item[1], dict)):
            raise DictionaryError(
                f"{path}: record {record_no} is not a [lemma, object] pair")
        _, rec = item
        lemma = rec.get("lemma")
        if not lemma:
            raise DictionaryError(f"{path}: record {record_no} has no lemma")
        sem = rec.get("SEM", [])
        if not isinstance(sem, list):
            raise DictionaryError(f"{path}: record {record_no} SEM is not an array")
        entry = LexEntry(
            lemma=lemma,
            pos=rec.get("POS", ""),
            sem_tags=frozenset(sem),
            inflection_class=rec.get("FLX", ""),
            number=rec.get("num", ""),
            gender=rec.get("gen", ""),
        )
        key = (entry.lemma, entry.pos, entry.sem_tags)
        if key in seen:
            continue
        seen.add(key)
        entries.append(entry)
    return entries


def select_domain(entries, tags, merges=(), min_dims=DEFAULT_MIN_DIMS, name=None):
    """Select the lemmas carrying any requested tag into a noun DimensionSet.

    ``merges`` lists further tags folded into the selection when the base
    class alone is too sparse.  Raises :class:`DomainTooSmallError` when the
    result has fewer than ``min_dims`` labels.  Deterministic: labels are
    sorted; duplicate lemmas (multiple tagging) appear once.
    """
    tags = frozenset(tags)
    if not tags:
        raise ValueError("select_domain requires at least one tag")
    merged = tags | frozenset(merges)
    name = name or "+".join(sorted(merged))
    labels = sorted({e.lemma for e in entries if e.sem_tags & merged})
    if len(labels) < min_dims:
        raise DomainTooSmallError(name, len(labels), min_dims)
    return DimensionSet(name=name, labels=tuple(labels),
                        source_tags=tuple(sorted(merged)), kind="noun")


def triple_verb_dimensions(verbs, name=None, source_tags=()):
    """Expand a deduplicated verb list into subj/obj/other column triples.

    Homographs across verb sub-classes must already be collapsed; ordering
    is lemma-major, role-minor.
    """
    if not verbs:
        raise ValueError("triple_verb_dimensions requires a nonempty verb list")
    logical = sorted(set(verbs))
    labels = tuple(f"{v}#{role}" for v in logical for role in ROLE_SUFFIXES)
    return DimensionSet(name=name or "VERBS", labels=labels,
                        source_tags=tuple(source_tags), kind="verb",
                        logical_labels=tuple(logical))


def build_row_vocab(freq_list, cutoff=17074, source=""):
    """Top-``cutoff`` words by frequency; ties break lexicographically."""
    items = list(freq_list)
    if len({w for w, _ in items}) < cutoff:
        raise ValueError(
            f"frequency list holds {len({w for w, _ in items})} distinct words, "
            f"cutoff {cutoff} not reachable")
    best = {}
    for word, count in items:
        if word not in best or count > best[word]:
            best[word] = count
    ranked = sorted(best.items(), key=lambda wc: (-wc[1], wc[0]))
    words = tuple(w for w, _ in ranked[:cutoff])
    return RowVocab(words=words, source=source, cutoff=cutoff)


def read_freq_list(path):
    """Read a two-column ``word<TAB>count`` frequency list."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}: line {line_no}: expected word<TAB>count")
            try:
                pairs.append((parts[0], int(parts[1])))
            except ValueError:
                raise ValueError(
                    f"{path}: line {line_no}: non-numeric count {parts[1]!r}") from None
    return pairs
