import gzip
import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from domavec.treebank import (ConlluError, SentenceGraph, Token, parse_conllu,
                              read_corpus, syntactic_distance)
from oracles import adjacency_of, bfs_distance, random_tree_sentence

CONLLU_3TOK = """\
# sent_id = 1
# text = i conigli temono
1\ti\til\tDET\t_\t_\t2\tdet\t_\t_
2\tconigli\tconiglio\tNOUN\t_\t_\t0\troot\t_\t_
3\ttemono\ttemere\tVERB\t_\t_\t2\tacl\t_\t_
"""


def graph_of(text):
    return list(parse_conllu(io.StringIO(text)))


def test_empty_stream_yields_nothing():
    assert graph_of("") == []
    assert graph_of("\n\n# only comments\n\n") == []


def test_three_token_sentence_arcs_follow_heads():
    (g,) = graph_of(CONLLU_3TOK)
    assert len(g) == 3
    assert g.arcs == frozenset({frozenset({1, 2}), frozenset({2, 3})})
    assert g.token(2).lemma == "coniglio"


def test_multiword_ranges_and_empty_nodes_are_skipped():
    text = (
        "1-2\tdei\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tdi\tdi\tADP\t_\t_\t3\tcase\t_\t_\n"
        "2\ti\til\tDET\t_\t_\t3\tdet\t_\t_\n"
        "2.1\tnull\tnull\t_\t_\t_\t_\t_\t_\t_\n"
        "3\tcani\tcane\tNOUN\t_\t_\t0\troot\t_\t_\n"
    )
    (g,) = graph_of(text)
    assert [t.index for t in g.tokens] == [1, 2, 3]


@pytest.mark.parametrize("bad_line", [
    "1\tsolo\ttre\tcolonne",
    "x\ta\ta\tN\t_\t_\t0\troot\t_\t_",
    "1\ta\ta\tN\t_\t_\ty\troot\t_\t_",
])
def test_malformed_lines_raise_with_line_number(bad_line):
    text = "# c\n" + bad_line + "\n"
    with pytest.raises(ConlluError) as err:
        graph_of(text)
    assert err.value.line_no == 2


def test_skip_mode_drops_only_the_bad_sentence():
    text = ("1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"
            "\n"
            "bad line\n"
            "\n"
            "1\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_\n")
    graphs = list(parse_conllu(io.StringIO(text), on_error="skip"))
    assert [g.token(1).lemma for g in graphs] == ["a", "b"]


def test_thousand_sentence_file_matches_line_count_oracle(tmp_path):
    rng = random.Random(7)
    lines = []
    token_total = 0
    for s in range(1000):
        n = rng.randint(1, 8)
        token_total += n
        g = random_tree_sentence(rng, n, ["casa", "cane", "via"],
                                 ["NOUN", "VERB"], ["nsubj", "obj", "nmod"])
        lines.append(g.to_conllu())
    path = tmp_path / "corpus.conllu"
    path.write_text("\n".join(lines), encoding="utf-8")
    # independent oracle: count sentences and token lines textually
    raw = path.read_text(encoding="utf-8").splitlines()
    oracle_tokens = sum(1 for l in raw if l and not l.startswith("#"))
    graphs = list(read_corpus(path))
    assert len(graphs) == 1000
    assert sum(len(g) for g in graphs) == oracle_tokens == token_total


def test_gzip_corpora_are_transparent(tmp_path):
    path = tmp_path / "corpus.conllu.gz"
    with gzip.open(path, "wt", encoding="utf-8") as fh:
        fh.write(CONLLU_3TOK)
    (g,) = list(read_corpus(path))
    assert len(g) == 3


def test_roundtrip_preserves_all_ten_columns():
    line = "1\tconigli\tconiglio\tNOUN\tS\tNum=Plur\t2\tnsubj\t2:nsubj\tSpaceAfter=No"
    (g,) = graph_of(line + "\n2\ttemono\ttemere\tVERB\t_\t_\t0\troot\t_\t_\n")
    assert g.token(1).to_conllu_line() == line


def test_token_invariants_rejected():
    with pytest.raises(ValueError):
        Token(index=0, surface="a", lemma="a", upos="X", head=1, deprel="det")
    with pytest.raises(ValueError):
        Token(index=1, surface="a", lemma="a", upos="X", head=1, deprel="det")
    with pytest.raises(ValueError):
        Token(index=1, surface="a", lemma="a", upos="X", head=0, deprel="")


def test_distance_basics():
    (g,) = graph_of(CONLLU_3TOK)
    assert syntactic_distance(g, 1, 2) == 1     # dependent and its head
    assert syntactic_distance(g, 1, 3) == 2     # two dependents sharing a head
    assert syntactic_distance(g, 2, 2) == 0
    with pytest.raises(IndexError):
        syntactic_distance(g, 1, 4)


def test_distance_unreachable_in_forest():
    text = ("1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"
            "2\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_\n")
    (g,) = graph_of(text)
    assert syntactic_distance(g, 1, 2) is None


def test_corpus_noise_cycles_and_dangling_heads_are_tolerated():
    # mutual heads (a 2-cycle) collapse to a single undirected arc
    text = ("1\ta\ta\tNOUN\t_\t_\t2\tdep\t_\t_\n"
            "2\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_\n"
            "3\tc\tc\tNOUN\t_\t_\t9\tdep\t_\t_\n")
    (g,) = graph_of(text)
    assert g.arcs == frozenset({frozenset({1, 2})})
    assert syntactic_distance(g, 1, 2) == 1
    # token 3's head points outside the sentence: no arc, unreachable
    assert syntactic_distance(g, 1, 3) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=10), st.integers())
def test_distance_equals_bfs_oracle_and_is_a_metric(n, seed):
    rng = random.Random(seed)
    g = random_tree_sentence(rng, n, ["x", "y", "z"], ["NOUN"], ["dep"])
    adj = adjacency_of(g.tokens)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            d = syntactic_distance(g, i, j)
            assert d == bfs_distance(adj, i, j)
            assert d == syntactic_distance(g, j, i)
            assert (d == 0) == (i == j)
    # triangle inequality on the tree metric
    for _ in range(10):
        a, b, c = (rng.randint(1, n) for _ in range(3))
        assert (syntactic_distance(g, a, c)
                <= syntactic_distance(g, a, b) + syntactic_distance(g, b, c))
