import json
import random

import pytest

from domavec.lexicon import (DictionaryError, DomainTooSmallError, LexEntry,
                             build_row_vocab, load_dictionary, read_freq_list,
                             select_domain, triple_verb_dimensions)


def write_dict(path, records):
    path.write_text(json.dumps(records), encoding="utf-8")
    return path


def entry(lemma, tags, pos="N"):
    return [lemma, {"num": "s", "gen": "f", "POS": pos, "lemma": lemma,
                    "token": lemma, "SEM": tags, "FLX": "N41"}]


def lex(lemma, tags, pos="N"):
    return LexEntry(lemma=lemma, pos=pos, sem_tags=frozenset(tags))


def test_load_dictionary_multi_tagged_record(tmp_path):
    path = write_dict(tmp_path / "d.json", [entry("scuola", ["Num", "Nedi"])])
    (e,) = load_dictionary(path)
    assert e.lemma == "scuola"
    assert e.sem_tags == frozenset({"Num", "Nedi"})
    assert e.pos == "N"


def test_load_dictionary_empty_and_dedup(tmp_path):
    assert load_dictionary(write_dict(tmp_path / "e.json", [])) == []
    path = write_dict(tmp_path / "d.json",
                      [entry("gatto", ["Anl"]), entry("gatto", ["Anl"])])
    assert len(load_dictionary(path)) == 1


def test_load_dictionary_animal_scale(tmp_path):
    records = [entry(f"animale{i:04d}", ["Anl"]) for i in range(2051)]
    path = write_dict(tmp_path / "anl.json", records)
    entries = load_dictionary(path)
    assert len(entries) == 2051


def test_load_dictionary_schema_violations(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}", encoding="utf-8")
    with pytest.raises(DictionaryError):
        load_dictionary(bad)
    bad.write_text(json.dumps([["x", {"POS": "N"}]]), encoding="utf-8")
    with pytest.raises(DictionaryError, match="record 0"):
        load_dictionary(bad)


def money_entries():
    return [lex(f"valuta{i:03d}", ["Nmon"]) for i in range(216)]


def body_entries():
    return ([lex(f"parte{i:04d}", ["Npc"]) for i in range(800)]
            + [lex(f"organo{i:04d}", ["Npcorg"]) for i in range(406)])


def test_select_domain_counts_match_the_recipes(tmp_path):
    money = select_domain(money_entries(), {"Nmon"})
    assert len(money) == 216
    body = select_domain(body_entries(), {"Npc"}, merges={"Npcorg"}, name="BODY")
    assert len(body) == 1206
    assert body.source_tags == ("Npc", "Npcorg")


def test_select_domain_refuses_small_classes():
    cosmetics = [lex(f"trucco{i}", ["Ncos"]) for i in range(60)]
    with pytest.raises(DomainTooSmallError) as err:
        select_domain(cosmetics, {"Ncos"})
    assert err.value.count == 60
    assert err.value.min_dims == 200
    # desk-scale work can lower the bar explicitly
    assert len(select_domain(cosmetics, {"Ncos"}, min_dims=10)) == 60


def test_select_domain_idempotent_and_order_insensitive():
    entries = money_entries() + body_entries()
    shuffled = entries[:]
    random.Random(3).shuffle(shuffled)
    a = select_domain(entries, {"Nmon"})
    b = select_domain(shuffled, {"Nmon"})
    assert a.labels == b.labels == select_domain(entries, {"Nmon"}).labels


def test_select_domain_multi_tagged_lemma_appears_once():
    entries = [lex("scuola", ["Num", "Nedi"]), lex("scuola", ["Nedi"])]
    d = select_domain(entries, {"Nedi"}, min_dims=1)
    assert d.labels == ("scuola",)


def test_triple_verb_dimensions_role_expansion():
    d = triple_verb_dimensions(["temere"], name="PSYCH")
    assert d.labels == ("temere#subj", "temere#obj", "temere#other")
    assert d.logical_size == 1
    assert len(d) == 3


def test_triple_verb_dimensions_paper_scale_counts():
    animbody = [f"verbo{i:03d}" for i in range(405)]
    d = triple_verb_dimensions(animbody, name="BODILY")
    assert d.logical_size == 405
    assert len(d.labels) == 1215
    transfer = triple_verb_dimensions([f"v{i}" for i in range(553)])
    assert len(transfer.labels) == 1659


def test_triple_verb_dimensions_collapses_homographs_and_partitions_roles():
    d = triple_verb_dimensions(["correre", "volare", "correre"])
    assert d.logical_size == 2
    assert len(d.labels) == 3 * d.logical_size
    for role in ("subj", "obj", "other"):
        assert sum(1 for lab in d.labels if lab.endswith("#" + role)) == 2
    with pytest.raises(ValueError):
        triple_verb_dimensions([])


def test_build_row_vocab_top_k_and_ties():
    pairs = [("b", 5), ("a", 5), ("c", 9), ("d", 1), ("e", 3)]
    vocab = build_row_vocab(pairs, cutoff=3)
    assert vocab.words == ("c", "a", "b")   # tie at 5 goes to 'a'
    with pytest.raises(ValueError, match="3 distinct"):
        build_row_vocab([("a", 1), ("b", 1), ("c", 1)], cutoff=5)


def test_build_row_vocab_full_scale(tmp_path):
    rng = random.Random(11)
    pairs = [(f"parola{i:05d}", rng.randint(1, 10**6)) for i in range(18000)]
    vocab = build_row_vocab(pairs, cutoff=17074)
    assert len(vocab) == 17074
    counts = dict(pairs)
    floor = min(counts[w] for w in vocab.words)
    dropped = [w for w in counts if w not in vocab]
    assert all(counts[w] <= floor for w in dropped)


def test_read_freq_list(tmp_path):
    path = tmp_path / "freq.tsv"
    path.write_text("cane\t10\ngatto\t7\n", encoding="utf-8")
    assert read_freq_list(path) == [("cane", 10), ("gatto", 7)]
    path.write_text("cane 10\n", encoding="utf-8")
    with pytest.raises(ValueError, match="line 1"):
        read_freq_list(path)
