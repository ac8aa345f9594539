"""Clusters of POS-tagged sentences: parsing, serialization, and descriptive statistics.

A cluster is a set of similar sentences about one news item, each sentence a
list of word/POS tokens, optionally accompanied by human reference
compressions.  Input is always pre-tagged; this module never runs a tagger.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field


class ParseError(ValueError):
    """Malformed cluster input; message names the offending line or record."""


@dataclass(frozen=True)
class Token:
    """A single word/POS pair. ``lower`` is the case-folded surface."""

    surface: str
    pos: str

    def __post_init__(self) -> None:
        if not self.surface:
            raise ParseError("empty token surface")

    @property
    def lower(self) -> str:
        return self.surface.lower()


@dataclass(frozen=True)
class Sentence:
    """An ordered, non-empty sequence of tokens. Offsets are 0-based positions."""

    tokens: tuple[Token, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) == 0:
            raise ParseError("sentence with zero tokens")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def lowers(self) -> list[str]:
        return [t.lower for t in self.tokens]


@dataclass(frozen=True)
class Cluster:
    """A group of similar sentences plus optional reference compressions."""

    id: str
    language: str
    sentences: tuple[Sentence, ...]
    references: tuple[Sentence, ...] = ()

    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def avg_sentence_len(self) -> float:
        return self.token_count() / len(self.sentences)


class StopwordList:
    """Case-insensitive stopword membership; entries are stored case-folded."""

    def __init__(self, words: set[str] | frozenset[str] = frozenset()):
        self.words = frozenset(w.lower() for w in words)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StopwordList) and self.words == other.words


@dataclass(frozen=True)
class ClusterStats:
    token_count: int
    vocab_size: int
    avg_sentence_len: float
    ttr: float
    avg_cosine: float


def sentence_from_pairs(pairs: list[tuple[str, str]]) -> Sentence:
    return Sentence(tuple(Token(surface=w, pos=p) for w, p in pairs))


# ---------------------------------------------------------------------------
# Slashed format: one sentence per line, "surface/POS" tokens separated by
# single spaces; a blank line separates clusters. References unavailable.
# ---------------------------------------------------------------------------

def parse_slashed_sentence(line: str, lineno: int = 0) -> Sentence:
    tokens = []
    for col, chunk in enumerate(line.split(" ")):
        if not chunk:
            raise ParseError(f"line {lineno}: empty token at position {col}")
        surface, sep, pos = chunk.rpartition("/")
        if not sep or not surface or not pos:
            raise ParseError(f"line {lineno}: token {chunk!r} is not surface/POS")
        tokens.append(Token(surface=surface, pos=pos))
    if not tokens:
        raise ParseError(f"line {lineno}: empty sentence")
    return Sentence(tuple(tokens))


def parse_slashed(text: str, cluster_id: str = "cluster-0001",
                  language: str = "und") -> Cluster:
    """Parse one slashed-format cluster (up to the first blank line)."""
    clusters = parse_slashed_clusters(text, id_prefix=cluster_id, language=language)
    if not clusters:
        raise ParseError("no sentences found")
    if len(clusters) > 1:
        raise ParseError("input contains more than one cluster (blank-line separated)")
    return Cluster(id=cluster_id, language=language,
                   sentences=clusters[0].sentences)


def parse_slashed_clusters(text: str, id_prefix: str = "cluster",
                           language: str = "und") -> list[Cluster]:
    clusters: list[Cluster] = []
    current: list[Sentence] = []

    def flush() -> None:
        if current:
            clusters.append(Cluster(id=f"{id_prefix}-{len(clusters) + 1:04d}",
                                    language=language, sentences=tuple(current)))
            current.clear()

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            flush()
            continue
        current.append(parse_slashed_sentence(stripped, lineno))
    flush()
    return clusters


def to_slashed(cluster: Cluster) -> str:
    lines = []
    for sentence in cluster.sentences:
        lines.append(" ".join(f"{t.surface}/{t.pos}" for t in sentence))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON format: {"id", "lang", "sentences": [[{"w","pos"},...],...],
#               "references": [[...],...]} -- one object per file or per line.
# ---------------------------------------------------------------------------

def _sentence_from_json(obj: object, where: str) -> Sentence:
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"{where}: sentence must be a non-empty list of tokens")
    tokens = []
    for i, tok in enumerate(obj):
        if not isinstance(tok, dict) or "w" not in tok or "pos" not in tok:
            raise ParseError(f"{where}: token {i} must be an object with 'w' and 'pos'")
        tokens.append(Token(surface=str(tok["w"]), pos=str(tok["pos"])))
    return Sentence(tuple(tokens))


def cluster_from_json_obj(obj: dict, where: str = "cluster") -> Cluster:
    for key in ("id", "sentences"):
        if key not in obj:
            raise ParseError(f"{where}: missing required key {key!r}")
    sentences = tuple(
        _sentence_from_json(s, f"{where}: sentence {i}")
        for i, s in enumerate(obj["sentences"])
    )
    if not sentences:
        raise ParseError(f"{where}: cluster has no sentences")
    references = tuple(
        _sentence_from_json(r, f"{where}: reference {i}")
        for i, r in enumerate(obj.get("references", []))
    )
    return Cluster(id=str(obj["id"]), language=str(obj.get("lang", "und")),
                   sentences=sentences, references=references)


def cluster_to_json_obj(cluster: Cluster) -> dict:
    obj: dict = {
        "id": cluster.id,
        "lang": cluster.language,
        "sentences": [[{"w": t.surface, "pos": t.pos} for t in s]
                      for s in cluster.sentences],
    }
    if cluster.references:
        obj["references"] = [[{"w": t.surface, "pos": t.pos} for t in s]
                             for s in cluster.references]
    return obj


def parse_json_clusters(text: str) -> list[Cluster]:
    """Accepts a single object, a JSON array of objects, or JSON lines."""
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty JSON input")
    try:
        data = json.loads(stripped)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, dict):
        return [cluster_from_json_obj(data)]
    if isinstance(data, list):
        return [cluster_from_json_obj(o, f"cluster {i}")
                for i, o in enumerate(data)]
    clusters = []
    for lineno, line in enumerate(stripped.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {lineno}: invalid JSON: {exc}") from exc
        clusters.append(cluster_from_json_obj(obj, f"line {lineno}"))
    return clusters


def parse_cluster(data: bytes | str, format: str = "json") -> Cluster:
    """Parse a single cluster from raw input in the given format."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if format == "json":
        clusters = parse_json_clusters(text)
        if len(clusters) != 1:
            raise ParseError(f"expected exactly one cluster, found {len(clusters)}")
        return clusters[0]
    if format == "slashed":
        return parse_slashed(text)
    raise ParseError(f"unknown format {format!r}")


def parse_clusters(data: bytes | str, format: str = "json",
                   id_prefix: str = "cluster") -> list[Cluster]:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if format == "json":
        clusters = parse_json_clusters(text)
    elif format == "slashed":
        clusters = parse_slashed_clusters(text, id_prefix=id_prefix)
    else:
        raise ParseError(f"unknown format {format!r}")
    seen: set[str] = set()
    for c in clusters:
        if c.id in seen:
            raise ParseError(f"duplicate cluster id {c.id!r}")
        seen.add(c.id)
    return clusters


def load_stopwords(data: bytes | str) -> StopwordList:
    """One word per line; blank lines and '#' comments ignored; case-folded."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"stopword file is not valid UTF-8: {exc}") from exc
    else:
        text = data
    words = set()
    for line in text.splitlines():
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        words.add(word.lower())
    return StopwordList(words)


# ---------------------------------------------------------------------------
# Statistics
# ---------------------------------------------------------------------------

def _cosine(a: Counter, b: Counter) -> float:
    dot = sum(count * b[word] for word, count in a.items())
    if dot == 0:
        return 0.0
    na = math.sqrt(sum(c * c for c in a.values()))
    nb = math.sqrt(sum(c * c for c in b.values()))
    return dot / (na * nb)


def cluster_stats(cluster: Cluster) -> ClusterStats:
    """Token counts, type-token ratio, and mean pairwise sentence cosine.

    Cosine is computed on raw term-frequency vectors over case-folded
    surfaces, stopwords included, averaged over all unordered sentence pairs.
    A one-sentence cluster has avg_cosine 1.0 by convention.
    """
    vectors = [Counter(s.lowers()) for s in cluster.sentences]
    token_count = cluster.token_count()
    vocab = set()
    for v in vectors:
        vocab.update(v)
    n = len(vectors)
    if n > 1:
        total = sum(_cosine(vectors[i], vectors[j])
                    for i in range(n) for j in range(i + 1, n))
        avg_cosine = total / (n * (n - 1) / 2)
    else:
        avg_cosine = 1.0
    return ClusterStats(
        token_count=token_count,
        vocab_size=len(vocab),
        avg_sentence_len=token_count / n,
        ttr=len(vocab) / token_count,
        avg_cosine=avg_cosine,
    )


def corpus_stats(clusters: list[Cluster]) -> dict:
    """Aggregate statistics over a corpus of clusters.

    TTR is reported both macro-averaged (mean of per-cluster TTRs) and
    pooled (corpus-wide vocabulary over corpus-wide token count); the two
    aggregations answer different questions and both are exposed.
    """
    if not clusters:
        raise ValueError("empty corpus")
    per_cluster = {c.id: cluster_stats(c) for c in clusters}
    total_tokens = sum(st.token_count for st in per_cluster.values())
    pooled_vocab: set[str] = set()
    for c in clusters:
        for s in c.sentences:
            pooled_vocab.update(s.lowers())
    n = len(clusters)
    return {
        "clusters": per_cluster,
        "token_count": total_tokens,
        "sentence_count": sum(len(c.sentences) for c in clusters),
        "vocab_size": len(pooled_vocab),
        "ttr_macro": sum(st.ttr for st in per_cluster.values()) / n,
        "ttr_pooled": len(pooled_vocab) / total_tokens,
        "avg_cosine": sum(st.avg_cosine for st in per_cluster.values()) / n,
        "avg_sentence_len": sum(st.avg_sentence_len for st in per_cluster.values()) / n,
    }
