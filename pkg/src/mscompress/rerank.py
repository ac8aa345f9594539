"""Bonus calibration, final candidate selection, and POS-sequence reranking.

The keyword bonus is derived from the distribution of arc weights (geometric
mean by default).  Final selection normalizes the optimized score by sentence
length through an exponential, computed in the log domain so large scores
cannot overflow.  An optional n-gram model over POS tags reranks the top
candidates for grammaticality.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .ilp import Solution
from .wordgraph import WordGraph

STUPID_BACKOFF = 0.4
SENT_START = "<s>"
SENT_END = "</s>"


class BonusKind(str, Enum):
    GEOMETRIC_MEAN = "geometric_mean"
    ARITHMETIC_MEAN = "arithmetic_mean"
    MEDIAN = "median"
    FIXED = "fixed"


@dataclass(frozen=True)
class BonusPolicy:
    kind: BonusKind = BonusKind.GEOMETRIC_MEAN
    fixed_value: float = 0.0


def keyword_bonus(graph: WordGraph, policy: BonusPolicy | None = None) -> float:
    """Bonus granted per distinct keyword label, from the arc weights."""
    policy = policy or BonusPolicy()
    if policy.kind is BonusKind.FIXED:
        if policy.fixed_value < 0:
            raise ValueError("fixed bonus must be >= 0")
        return policy.fixed_value
    weights = [a.weight for a in graph.arcs]
    if not weights:
        raise ValueError("graph has no arcs")
    if policy.kind is BonusKind.GEOMETRIC_MEAN:
        return math.exp(sum(math.log(w) for w in weights) / len(weights))
    if policy.kind is BonusKind.ARITHMETIC_MEAN:
        return sum(weights) / len(weights)
    if policy.kind is BonusKind.MEDIAN:
        return statistics.median(weights)
    raise ValueError(f"unknown bonus policy {policy.kind!r}")


def normalized_score_key(solution: Solution) -> float:
    """Log of exp(objective)/word_count; the argmin is unchanged but large
    objectives stay finite."""
    return solution.objective - math.log(solution.word_count)


def rank_solutions(solutions: list[Solution]) -> list[Solution]:
    return sorted(
        solutions,
        key=lambda s: (normalized_score_key(s), s.word_count, s.tokens,
                       s.vertex_ids),
    )


def select_best(solutions: list[Solution]) -> Solution:
    """Candidate with the lowest length-normalized score.

    Ties break toward fewer words, then lexicographic tokens.
    """
    if not solutions:
        raise ValueError("empty solution list")
    if any(s.word_count <= 0 for s in solutions):
        raise ValueError("solutions must contain at least one word")
    return rank_solutions(solutions)[0]


# ---------------------------------------------------------------------------
# POS n-gram model with fixed-penalty (stupid) backoff
# ---------------------------------------------------------------------------

@dataclass
class PosLm:
    order: int
    counts: dict[tuple[str, ...], int]
    total_unigrams: int
    backoff: float = STUPID_BACKOFF

    def _score_gram(self, gram: tuple[str, ...]) -> float:
        """Relative score of the last tag given its history, in (0, 1]."""
        if len(gram) == 1:
            count = self.counts.get(gram, 0)
            if count > 0:
                return count / self.total_unigrams
            return self.backoff / self.total_unigrams
        count = self.counts.get(gram, 0)
        if count > 0:
            history = self.counts.get(gram[:-1], 0)
            if history > 0:
                return count / history
        return self.backoff * self._score_gram(gram[1:])

    def log_score(self, tags: list[str] | tuple[str, ...]) -> float:
        """Total log-score of a tag sequence with boundary padding."""
        padded = [SENT_START] * (self.order - 1) + list(tags) + [SENT_END]
        total = 0.0
        for i in range(self.order - 1, len(padded)):
            gram = tuple(padded[i - self.order + 1: i + 1])
            total += math.log(self._score_gram(gram))
        return total

    def per_token_log_score(self, tags: list[str] | tuple[str, ...]) -> float:
        return self.log_score(tags) / (len(tags) + 1)


def poslm_train(lines, order: int = 7, backoff: float = STUPID_BACKOFF) -> PosLm:
    """Count n-grams of every order up to ``order`` over a tag corpus.

    ``lines`` is an iterable of sentences, each a whitespace-separated
    sequence of POS tags.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    counts: Counter = Counter()
    total_unigrams = 0
    sentences = 0
    for line in lines:
        tags = line.split() if isinstance(line, str) else list(line)
        if not tags:
            continue
        sentences += 1
        padded = [SENT_START] * (order - 1) + tags + [SENT_END]
        # count every window of every length so backoff histories (including
        # ones made of start markers) always have counts
        for n in range(1, order + 1):
            for j in range(len(padded) - n + 1):
                counts[tuple(padded[j: j + n])] += 1
        total_unigrams += len(padded)
    if sentences == 0:
        raise ValueError("empty training corpus")
    return PosLm(order=order, counts=dict(counts),
                 total_unigrams=total_unigrams, backoff=backoff)


def poslm_save(lm: PosLm) -> str:
    """Plain-text persistence: header line, then sorted n-gram/count rows."""
    lines = [f"#order={lm.order}\tbackoff={lm.backoff}\ttotal={lm.total_unigrams}"]
    for gram in sorted(lm.counts):
        lines.append(" ".join(gram) + "\t" + str(lm.counts[gram]))
    return "\n".join(lines) + "\n"


def poslm_load(text: str) -> PosLm:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#order="):
        raise ValueError("not a POS model file")
    header = dict(part.split("=", 1) for part in lines[0].lstrip("#").split("\t"))
    counts: dict[tuple[str, ...], int] = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        gram_text, count_text = line.rsplit("\t", 1)
        counts[tuple(gram_text.split(" "))] = int(count_text)
    return PosLm(order=int(header["order"]), counts=counts,
                 total_unigrams=int(header["total"]),
                 backoff=float(header["backoff"]))


def poslm_rerank(solutions: list[Solution], lm: PosLm, top: int = 10) -> Solution:
    """Among the ``top`` best candidates by normalized score, return the one
    whose POS sequence the model likes most; ties keep the normalized order."""
    if not solutions:
        raise ValueError("empty solution list")
    if top < 1:
        raise ValueError("top must be >= 1")
    pool = rank_solutions(solutions)[:top]
    best_idx = max(range(len(pool)),
                   key=lambda i: (lm.per_token_log_score(pool[i].pos_tags), -i))
    return pool[best_idx]
