import json
import math

import pytest
from hypothesis import given, strategies as st

from mscompress.corpus import (Cluster, ParseError, cluster_from_json_obj,
                               cluster_stats, cluster_to_json_obj,
                               corpus_stats, load_stopwords, parse_cluster,
                               parse_clusters, parse_slashed,
                               sentence_from_pairs, to_slashed)


def _cluster(*sentences, references=()):
    return Cluster(
        id="c", language="und",
        sentences=tuple(sentence_from_pairs(s) for s in sentences),
        references=tuple(sentence_from_pairs(r) for r in references),
    )


class TestParsing:
    def test_slashed_line(self):
        c = parse_cluster(b"George/NPROP Solit\xc3\xa1rio/NPROP faleceu/V",
                          format="slashed")
        assert len(c.sentences) == 1
        s = c.sentences[0]
        assert [t.surface for t in s] == ["George", "Solitário", "faleceu"]
        assert [t.pos for t in s] == ["NPROP", "NPROP", "V"]
        assert [t.lower for t in s] == ["george", "solitário", "faleceu"]

    def test_json_lonesome_george(self, lonesome_cluster):
        assert len(lonesome_cluster.sentences) == 4
        assert lonesome_cluster.language == "pt"
        assert lonesome_cluster.sentences[0].tokens[0].surface == "George"

    def test_empty_sentence_rejected(self):
        with pytest.raises(ParseError):
            cluster_from_json_obj({"id": "x", "sentences": [[]]})

    def test_malformed_slashed_token_names_line(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_cluster("a/X b/X\nbroken_token c/X", format="slashed")

    def test_json_roundtrip_identity(self, lonesome_cluster):
        obj = cluster_to_json_obj(lonesome_cluster)
        again = cluster_from_json_obj(json.loads(json.dumps(obj)))
        assert again == lonesome_cluster

    def test_slashed_roundtrip_identity(self):
        c = _cluster([("Ab", "X"), ("c", "Y")], [("d", "Z")])
        text = to_slashed(c)
        again = parse_slashed(text, cluster_id="c")
        assert again.sentences == c.sentences
        assert again.id == c.id

    def test_slashed_multi_cluster(self):
        text = "a/X b/X\nc/X\n\nd/Y e/Y\n"
        clusters = parse_clusters(text, format="slashed", id_prefix="f")
        assert [c.id for c in clusters] == ["f-0001", "f-0002"]
        assert len(clusters[0].sentences) == 2
        assert len(clusters[1].sentences) == 1

    def test_jsonl_multi_cluster(self):
        line = json.dumps({"id": "a", "sentences": [[{"w": "x", "pos": "X"}]]})
        line2 = json.dumps({"id": "b", "sentences": [[{"w": "y", "pos": "Y"}]]})
        clusters = parse_clusters(line + "\n" + line2)
        assert [c.id for c in clusters] == ["a", "b"]

    def test_duplicate_ids_rejected(self):
        line = json.dumps({"id": "a", "sentences": [[{"w": "x", "pos": "X"}]]})
        with pytest.raises(ParseError, match="duplicate"):
            parse_clusters(line + "\n" + line)


class TestStopwords:
    def test_basic(self):
        sw = load_stopwords(b"de\na\n# comment\n")
        assert sw.words == {"de", "a"}

    def test_empty_file(self):
        assert len(load_stopwords(b"")) == 0

    def test_case_folding_dedup(self):
        sw = load_stopwords(b"A\na\n")
        assert sw.words == {"a"}
        assert "A" in sw and "a" in sw

    def test_invalid_utf8(self):
        with pytest.raises(ParseError):
            load_stopwords(b"\xff\xfe")


class TestStats:
    def test_identical_sentences_cosine_one(self):
        c = _cluster([("a", "X"), ("b", "X")], [("a", "X"), ("b", "X")])
        assert cluster_stats(c).avg_cosine == pytest.approx(1.0)

    def test_disjoint_cosine_zero(self):
        c = _cluster([("a", "X"), ("b", "X")], [("c", "X"), ("d", "X")])
        assert cluster_stats(c).avg_cosine == 0.0

    def test_half_overlap(self):
        c = _cluster([("a", "X"), ("b", "X")], [("a", "X"), ("c", "X")])
        st = cluster_stats(c)
        assert st.avg_cosine == pytest.approx(0.5)
        assert st.ttr == pytest.approx(0.75)
        assert st.token_count == 4
        assert st.vocab_size == 3

    def test_cosine_case_folds(self):
        c = _cluster([("A", "X")], [("a", "Y")])
        assert cluster_stats(c).avg_cosine == pytest.approx(1.0)

    def test_corpus_aggregations(self):
        c1 = _cluster([("a", "X"), ("b", "X")])
        c2 = Cluster(id="c2", language="und",
                     sentences=(sentence_from_pairs([("a", "X"), ("a", "X")]),))
        agg = corpus_stats([c1, c2])
        assert agg["ttr_macro"] == pytest.approx((1.0 + 0.5) / 2)
        assert agg["ttr_pooled"] == pytest.approx(2 / 4)
        assert agg["token_count"] == 4

    @given(st.lists(
        st.lists(st.sampled_from("abcdef"), min_size=1, max_size=6),
        min_size=1, max_size=5))
    def test_stats_invariants(self, raw):
        c = _cluster(*[[(w, "X") for w in s] for s in raw])
        st_ = cluster_stats(c)
        assert 0 < st_.ttr <= 1
        assert 0 <= st_.avg_cosine <= 1 + 1e-12
        assert math.isclose(st_.avg_sentence_len * len(c.sentences),
                            st_.token_count)
