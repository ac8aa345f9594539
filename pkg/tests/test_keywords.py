import random

import numpy as np
import pytest

from mscompress.corpus import Cluster, StopwordList, sentence_from_pairs
from mscompress.keywords import (assign_labels, extract_keywords,
                                 keyword_coverage, lda_keywords, lsi_keywords,
                                 textrank_keywords)
from mscompress.wordgraph import build_graph

NO_SW = StopwordList()


def _cluster(*sentences, references=()):
    return Cluster(
        id="c", language="und",
        sentences=tuple(sentence_from_pairs(s) for s in sentences),
        references=tuple(sentence_from_pairs(r) for r in references),
    )


def _words(*lowers):
    return [(w, "N") for w in lowers]


class TestTextRank:
    def test_symmetric_triangle_equal_thirds(self):
        c = _cluster(_words("p", "q"), _words("q", "r"), _words("r", "p"))
        ks = textrank_keywords(c, NO_SW, 3)
        assert len(ks.words) == 3
        for _, score in ks.words:
            assert score == pytest.approx(1 / 3, abs=1e-6)

    def test_star_center_ranks_first(self):
        # x co-occurs with every other word; leaves touch only x
        c = _cluster(_words("x", "a"), _words("x", "b"), _words("x", "c"))
        ks = textrank_keywords(c, NO_SW, 4)
        assert ks.words[0][0] == "x"
        # oracle: damped power iteration on the explicit 4-node star
        d, n = 0.85, 4
        transition = np.array([
            [0, 1 / 3, 1 / 3, 1 / 3],  # x splits over 3 leaves
            [1, 0, 0, 0],
            [1, 0, 0, 0],
            [1, 0, 0, 0],
        ])
        rank = np.full(n, 1 / n)
        for _ in range(200):
            rank = (1 - d) / n + d * transition.T @ rank
        got = dict(ks.words)
        assert got["x"] == pytest.approx(rank[0], abs=1e-5)
        assert got["a"] == pytest.approx(rank[1], abs=1e-5)

    def test_n_larger_than_vocab(self):
        c = _cluster(_words("p", "q"))
        ks = textrank_keywords(c, NO_SW, 50)
        assert sorted(ks.lowers()) == ["p", "q"]

    def test_stopwords_excluded_and_window_skips_them(self):
        sw = StopwordList({"the"})
        c = _cluster([("p", "N"), ("the", "D"), ("q", "N")])
        ks = textrank_keywords(c, sw, 10)
        assert "the" not in ks.lowers()
        assert sorted(ks.lowers()) == ["p", "q"]

    def test_no_content_words(self):
        sw = StopwordList({"a"})
        ks = textrank_keywords(_cluster(_words("a")), sw, 5)
        assert ks.words == ()


class TestLda:
    def test_frequent_word_ranks_first(self):
        c = _cluster(
            _words("tartaruga", "morreu"),
            _words("tartaruga", "gigante"),
            _words("tartaruga", "faleceu"),
            _words("tartaruga", "anos"),
        )
        ks = lda_keywords(c, NO_SW, 3)
        assert ks.words[0][0] == "tartaruga"

    def test_uniform_counts_lexicographic(self):
        c = _cluster(_words("zeta", "beta", "alfa"))
        ks = lda_keywords(c, NO_SW, 3)
        assert ks.lowers() == ["alfa", "beta", "zeta"]

    def test_beta_never_changes_ranking(self):
        rng = random.Random(42)
        for _ in range(50):
            vocab = [f"w{i}" for i in range(rng.randint(2, 8))]
            counts = {w: rng.randint(1, 9) for w in vocab}
            sentence = []
            for w, c in counts.items():
                sentence.extend([(w, "N")] * c)
            cluster = _cluster(sentence)
            small = lda_keywords(cluster, NO_SW, len(vocab), beta=0.001)
            large = lda_keywords(cluster, NO_SW, len(vocab), beta=50.0)
            assert small.lowers() == large.lowers()

    def test_scores_are_smoothed_frequencies(self):
        c = _cluster(_words("a", "a", "b"))
        ks = lda_keywords(c, NO_SW, 2, beta=0.01)
        denom = 3 + 0.01 * 2
        assert dict(ks.words)["a"] == pytest.approx((2 + 0.01) / denom)
        assert dict(ks.words)["b"] == pytest.approx((1 + 0.01) / denom)


class TestLsi:
    def test_dominant_term_ranks_first(self):
        # term-sentence matrix: row 'x' = [2, 2], others appear once
        c = _cluster(_words("x", "x", "a"), _words("x", "x", "b"))
        ks = lsi_keywords(c, NO_SW, 3)
        assert ks.words[0][0] == "x"
        # oracle: numpy SVD of the explicit 3x2 matrix
        m = np.array([[2.0, 2.0], [1.0, 0.0], [0.0, 1.0]])
        u, s, vt = np.linalg.svd(m)
        lead = np.abs(u[:, 0])
        got = dict(ks.words)
        assert got["x"] == pytest.approx(lead[0], abs=1e-8)
        assert got["a"] == pytest.approx(lead[1], abs=1e-8)
        assert got["b"] == pytest.approx(lead[2], abs=1e-8)

    def test_repeated_sentence_equals_frequency_ranking(self):
        sent = _words("c", "c", "c", "b", "b", "a")
        c = _cluster(sent, sent)
        ks = lsi_keywords(c, NO_SW, 3)
        assert ks.lowers() == ["c", "b", "a"]
        # rank-1 matrix: loadings proportional to counts (3, 2, 1)
        scores = [s for _, s in ks.words]
        assert scores[0] / scores[2] == pytest.approx(3.0, abs=1e-8)

    def test_scores_nonnegative(self):
        c = _cluster(_words("a", "b"), _words("b", "c"), _words("c", "a"))
        ks = lsi_keywords(c, NO_SW, 3)
        assert all(s >= 0 for _, s in ks.words)

    def test_requires_two_sentences(self):
        with pytest.raises(ValueError):
            lsi_keywords(_cluster(_words("a")), NO_SW, 1)

    def test_all_stopwords_empty(self):
        sw = StopwordList({"a", "b"})
        ks = lsi_keywords(_cluster(_words("a"), _words("b")), sw, 2)
        assert ks.words == ()


class TestAssignLabels:
    def test_single_keyword_labels_vertex(self, lonesome_cluster, pt_stopwords):
        g = build_graph(lonesome_cluster, pt_stopwords)
        ks = extract_keywords(lonesome_cluster, pt_stopwords, method="lda", n=5)
        la = assign_labels(g, ks)
        assert la.label_count >= 1
        gigante = [v for v in g.vertices if v.lower == "gigante"]
        assert len(gigante) == 1
        if "gigante" in ks.lowers():
            assert gigante[0].label > 0

    def test_absent_keyword_contributes_no_label(self):
        g = build_graph(_cluster(_words("a", "b")))
        from mscompress.keywords import KeywordSet
        ks = KeywordSet(method="lda", requested_count=2,
                        words=(("zz", 1.0), ("a", 0.5)))
        la = assign_labels(g, ks)
        assert la.label_count == 1
        labeled = [v for v in g.vertices if v.label > 0]
        assert [v.lower for v in labeled] == ["a"]
        assert labeled[0].label == 1  # compacted past the unmatched keyword

    def test_homograph_vertices_share_label(self):
        g = build_graph(_cluster([("run", "N"), ("x", "X")],
                                 [("run", "V"), ("y", "Y")]))
        from mscompress.keywords import KeywordSet
        ks = KeywordSet(method="lda", requested_count=1, words=(("run", 1.0),))
        la = assign_labels(g, ks)
        runs = [v for v in g.vertices if v.lower == "run"]
        assert len(runs) == 2
        assert runs[0].label == runs[1].label == 1
        assert la.label_count == 1

    def test_labels_contiguous_and_sentinels_zero(self, lonesome_cluster,
                                                  pt_stopwords):
        g = build_graph(lonesome_cluster, pt_stopwords)
        ks = extract_keywords(lonesome_cluster, pt_stopwords, n=10)
        la = assign_labels(g, ks)
        used = {v.label for v in g.vertices}
        assert used <= set(range(la.label_count + 1))
        assert g.vertex(g.begin_id).label == 0
        assert g.vertex(g.end_id).label == 0
        for k in range(1, la.label_count + 1):
            assert k in used


class TestCommon:
    @pytest.mark.parametrize("method", ["lda", "lsi", "textrank"])
    def test_no_stopwords_in_output(self, method, lonesome_cluster,
                                    pt_stopwords):
        ks = extract_keywords(lonesome_cluster, pt_stopwords, method=method,
                              n=10)
        for w in ks.lowers():
            assert w not in pt_stopwords

    @pytest.mark.parametrize("method", ["lda", "lsi", "textrank"])
    def test_deterministic(self, method, lonesome_cluster, pt_stopwords):
        a = extract_keywords(lonesome_cluster, pt_stopwords, method=method,
                             n=10, seed=7)
        b = extract_keywords(lonesome_cluster, pt_stopwords, method=method,
                             n=10, seed=7)
        assert a == b

    @pytest.mark.parametrize("method", ["lda", "lsi", "textrank"])
    def test_scores_non_increasing(self, method, lonesome_cluster,
                                   pt_stopwords):
        ks = extract_keywords(lonesome_cluster, pt_stopwords, method=method,
                              n=10)
        scores = [s for _, s in ks.words]
        assert scores == sorted(scores, reverse=True)
        assert len(ks.words) <= 10
        assert len(set(ks.lowers())) == len(ks.words)

    def test_coverage_in_unit_range(self, lonesome_cluster, pt_stopwords):
        ks = extract_keywords(lonesome_cluster, pt_stopwords, n=10)
        cov = keyword_coverage(ks, lonesome_cluster.references)
        assert 0.0 <= cov <= 1.0
        assert cov > 0  # 'tartaruga' is both frequent and in the reference

    def test_unknown_method(self, lonesome_cluster, pt_stopwords):
        with pytest.raises(ValueError):
            extract_keywords(lonesome_cluster, pt_stopwords, method="magic")
