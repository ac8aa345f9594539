"""Cluster keyword extraction and vertex labeling.

Three extractors are provided: TextRank over a word co-occurrence graph,
a single-topic LDA posterior in closed form, and LSI via the leading left
singular vector of the term-sentence matrix.  Extracted keywords become
integer labels on word-graph vertices; label 0 marks non-keywords.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import Cluster, Sentence, StopwordList
from .wordgraph import WordGraph, is_punctuation

TEXTRANK_DAMPING = 0.85
TEXTRANK_TOL = 1e-6
TEXTRANK_MAX_ITER = 100
LDA_BETA = 0.01


@dataclass(frozen=True)
class KeywordSet:
    method: str
    words: tuple[tuple[str, float], ...]  # (lower, score), best first
    requested_count: int

    def lowers(self) -> list[str]:
        return [w for w, _ in self.words]

    def to_json_obj(self) -> dict:
        return {"method": self.method,
                "words": [{"w": w, "score": s} for w, s in self.words]}


@dataclass
class LabelAssignment:
    labels: dict[int, int]  # vertex id -> label, 0 = non-keyword
    label_count: int


def _content_lowers(sentence: Sentence, stopwords: StopwordList) -> list[str]:
    return [t.lower for t in sentence.tokens
            if t.lower not in stopwords and not is_punctuation(t.lower)]


def _top_n(scores: dict[str, float], n: int) -> tuple[tuple[str, float], ...]:
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(ranked[:n])


def textrank_keywords(cluster: Cluster, stopwords: StopwordList,
                      n: int) -> KeywordSet:
    """Rank words by stationary weight in the co-occurrence graph.

    Adjacent non-stopwords within each sentence (window 2 after stopword
    removal) are connected by undirected edges weighted by co-occurrence
    count; scores come from damped power iteration and sum to one over the
    vocabulary.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    words: list[str] = []
    edges: Counter = Counter()
    vocab: dict[str, int] = {}
    for sentence in cluster.sentences:
        content = _content_lowers(sentence, stopwords)
        for w in content:
            if w not in vocab:
                vocab[w] = len(vocab)
                words.append(w)
        for a, b in zip(content, content[1:]):
            if a != b:
                edges[(vocab[a], vocab[b])] += 1
                edges[(vocab[b], vocab[a])] += 1
    if not vocab:
        return KeywordSet(method="textrank", words=(), requested_count=n)

    size = len(vocab)
    weight = np.zeros((size, size))
    for (i, j), c in edges.items():
        weight[i, j] = c
    out_strength = weight.sum(axis=1)
    dangling = out_strength == 0
    transition = np.zeros_like(weight)
    nonzero = ~dangling
    transition[nonzero] = weight[nonzero] / out_strength[nonzero, None]

    rank = np.full(size, 1.0 / size)
    for _ in range(TEXTRANK_MAX_ITER):
        dangling_mass = rank[dangling].sum()
        updated = (1 - TEXTRANK_DAMPING) / size + TEXTRANK_DAMPING * (
            transition.T @ rank + dangling_mass / size)
        if np.abs(updated - rank).sum() < TEXTRANK_TOL:
            rank = updated
            break
        rank = updated

    scores = {w: float(rank[vocab[w]]) for w in words}
    return KeywordSet(method="textrank", words=_top_n(scores, n),
                      requested_count=n)


def lda_keywords(cluster: Cluster, stopwords: StopwordList, n: int,
                 seed: int = 0, beta: float = LDA_BETA) -> KeywordSet:
    """Single-topic LDA scores in closed form.

    A cluster of near-duplicate sentences describes one topic, so the
    topic-word posterior reduces to smoothed relative frequency:
    (count(w) + beta) / (N + beta * V).  The seed is accepted for interface
    stability but unused; nothing here is sampled.
    """
    del seed
    if n < 1:
        raise ValueError("n must be >= 1")
    counts: Counter = Counter()
    for sentence in cluster.sentences:
        counts.update(_content_lowers(sentence, stopwords))
    if not counts:
        return KeywordSet(method="lda", words=(), requested_count=n)
    total = sum(counts.values())
    vocab_size = len(counts)
    denom = total + beta * vocab_size
    scores = {w: (c + beta) / denom for w, c in counts.items()}
    return KeywordSet(method="lda", words=_top_n(scores, n), requested_count=n)


def lsi_keywords(cluster: Cluster, stopwords: StopwordList, n: int,
                 max_iter: int = 1000, tol: float = 1e-12) -> KeywordSet:
    """Score terms by absolute loading on the leading left singular vector
    of the term-sentence count matrix, found by power iteration on M @ M.T."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(cluster.sentences) < 2:
        raise ValueError("LSI needs at least 2 sentences")
    vocab: dict[str, int] = {}
    words: list[str] = []
    for sentence in cluster.sentences:
        for w in _content_lowers(sentence, stopwords):
            if w not in vocab:
                vocab[w] = len(vocab)
                words.append(w)
    if not vocab:
        return KeywordSet(method="lsi", words=(), requested_count=n)

    matrix = np.zeros((len(vocab), len(cluster.sentences)))
    for j, sentence in enumerate(cluster.sentences):
        for w in _content_lowers(sentence, stopwords):
            matrix[vocab[w], j] += 1.0
    if not matrix.any():
        return KeywordSet(method="lsi", words=(), requested_count=n)

    gram = matrix @ matrix.T
    vec = np.ones(len(vocab)) / np.sqrt(len(vocab))
    for _ in range(max_iter):
        nxt = gram @ vec
        norm = np.linalg.norm(nxt)
        if norm == 0:
            break
        nxt /= norm
        if np.linalg.norm(nxt - vec) < tol:
            vec = nxt
            break
        vec = nxt

    scores = {w: float(abs(vec[vocab[w]])) for w in words}
    return KeywordSet(method="lsi", words=_top_n(scores, n), requested_count=n)


EXTRACTORS = {
    "textrank": lambda c, sw, n, seed: textrank_keywords(c, sw, n),
    "lda": lambda c, sw, n, seed: lda_keywords(c, sw, n, seed),
    "lsi": lambda c, sw, n, seed: lsi_keywords(c, sw, n),
}


def extract_keywords(cluster: Cluster, stopwords: StopwordList,
                     method: str = "lda", n: int = 10,
                     seed: int = 0) -> KeywordSet:
    if method not in EXTRACTORS:
        raise ValueError(f"unknown keyword method {method!r}")
    return EXTRACTORS[method](cluster, stopwords, n, seed)


def assign_labels(graph: WordGraph, keywords: KeywordSet) -> LabelAssignment:
    """Attach one label per keyword to every vertex sharing its lowercased
    form, POS ignored.  Keywords matching no vertex are dropped so label
    values stay contiguous in {0..label_count}; sentinels keep label 0."""
    labels = {v.id: 0 for v in graph.vertices}
    next_label = 0
    for word, _score in keywords.words:
        matched = [v.id for v in graph.vertices
                   if not v.is_sentinel and v.lower == word]
        if not matched:
            continue
        next_label += 1
        for vid in matched:
            labels[vid] = next_label
    for v in graph.vertices:
        v.label = labels[v.id]
    return LabelAssignment(labels=labels, label_count=next_label)


def keyword_coverage(keywords: KeywordSet, references: tuple[Sentence, ...]) -> float:
    """Fraction of extracted keywords that appear in at least one reference."""
    if not keywords.words:
        return 0.0
    ref_lowers: set[str] = set()
    for ref in references:
        ref_lowers.update(ref.lowers())
    hits = sum(1 for w, _ in keywords.words if w in ref_lowers)
    return hits / len(keywords.words)
