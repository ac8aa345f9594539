"""Overlap-based evaluation of compressions against references.

Implements clipped n-gram recall/precision/F1, the skip-bigram-plus-unigram
variant with maximum gap 4, and compression-ratio reporting.  Token
normalization (e.g. stemming) is pluggable; the default is identity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .corpus import Cluster, StopwordList

Normalizer = Callable[[str], str]


@dataclass(frozen=True)
class MetricScore:
    recall: float
    precision: float
    f1: float


@dataclass
class ClusterRow:
    cluster_id: str
    target: str
    rouge_1: MetricScore
    rouge_2: MetricScore
    rouge_su4: MetricScore
    cr: float


@dataclass
class RougeReport:
    rows: list[ClusterRow] = field(default_factory=list)

    def targets(self) -> list[str]:
        return sorted({r.target for r in self.rows})

    def aggregate(self, target: str) -> dict[str, float]:
        """Macro-average of every metric over the clusters of one target."""
        rows = [r for r in self.rows if r.target == target]
        if not rows:
            raise ValueError(f"no rows for target {target!r}")
        n = len(rows)
        out: dict[str, float] = {"clusters": n}
        for name in ("rouge_1", "rouge_2", "rouge_su4"):
            for part in ("recall", "precision", "f1"):
                out[f"{name}_{part}"] = sum(
                    getattr(getattr(r, name), part) for r in rows) / n
        out["cr"] = sum(r.cr for r in rows) / n
        return out

    def to_json_obj(self) -> dict:
        return {
            "rows": [
                {
                    "cluster": r.cluster_id,
                    "target": r.target,
                    "rouge_1": vars(r.rouge_1),
                    "rouge_2": vars(r.rouge_2),
                    "rouge_su4": vars(r.rouge_su4),
                    "cr": r.cr,
                }
                for r in sorted(self.rows, key=lambda r: (r.target, r.cluster_id))
            ],
            "aggregates": {t: self.aggregate(t) for t in self.targets()},
        }

    def to_tsv(self) -> str:
        """One aggregate row per target, shaped method x metric columns."""
        header = ["target", "clusters", "rouge1_recall", "rouge1_f1",
                  "rouge2_recall", "rouge2_f1", "su4_recall", "su4_f1", "cr"]
        lines = ["\t".join(header)]
        for target in self.targets():
            agg = self.aggregate(target)
            lines.append("\t".join([
                target,
                str(int(agg["clusters"])),
                f"{agg['rouge_1_recall']:.4f}",
                f"{agg['rouge_1_f1']:.4f}",
                f"{agg['rouge_2_recall']:.4f}",
                f"{agg['rouge_2_f1']:.4f}",
                f"{agg['rouge_su4_recall']:.4f}",
                f"{agg['rouge_su4_f1']:.4f}",
                f"{agg['cr']:.4f}",
            ]))
        return "\n".join(lines) + "\n"


def _prepare(tokens: Sequence[str], normalizer: Normalizer | None,
             stopwords: StopwordList | None) -> list[str]:
    out = [t.lower() for t in tokens]
    if stopwords is not None:
        out = [t for t in out if t not in stopwords]
    if normalizer is not None:
        out = [normalizer(t) for t in out]
    return out


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i: i + n]) for i in range(len(tokens) - n + 1))


def _skip_units(tokens: list[str], max_skip: int) -> Counter:
    """Skip-bigrams within the gap limit plus unigrams, as one multiset."""
    units: Counter = Counter()
    for i in range(len(tokens)):
        units[(tokens[i],)] += 1
        for j in range(i + 1, min(i + max_skip + 1, len(tokens))):
            units[(tokens[i], tokens[j])] += 1
    return units


def _clipped_overlap(cand: Counter, ref: Counter) -> int:
    return sum(min(count, ref[gram]) for gram, count in cand.items())


def _score(cand_counts: Counter, ref_counts_list: list[Counter]) -> MetricScore:
    overlap = sum(_clipped_overlap(cand_counts, ref) for ref in ref_counts_list)
    ref_total = sum(sum(ref.values()) for ref in ref_counts_list)
    cand_total = sum(cand_counts.values()) * len(ref_counts_list)
    recall = overlap / ref_total if ref_total else 0.0
    precision = overlap / cand_total if cand_total else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return MetricScore(recall=recall, precision=precision, f1=f1)


def rouge_n(candidate: Sequence[str], references: Sequence[Sequence[str]],
            n: int, normalizer: Normalizer | None = None,
            stopwords: StopwordList | None = None) -> MetricScore:
    """Clipped n-gram overlap against one or more references.

    Multiple references are handled by summing overlap and reference counts
    across references; the candidate count scales with the reference count
    so precision stays in [0, 1].
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not references:
        raise ValueError("at least one reference is required")
    cand = _ngrams(_prepare(candidate, normalizer, stopwords), n)
    refs = [_ngrams(_prepare(r, normalizer, stopwords), n) for r in references]
    return _score(cand, refs)


def rouge_su4(candidate: Sequence[str], references: Sequence[Sequence[str]],
              normalizer: Normalizer | None = None,
              stopwords: StopwordList | None = None,
              max_skip: int = 4) -> MetricScore:
    """Skip-bigrams with maximum gap 4 plus unigrams, clipped counting."""
    if not references:
        raise ValueError("at least one reference is required")
    cand = _skip_units(_prepare(candidate, normalizer, stopwords), max_skip)
    refs = [_skip_units(_prepare(r, normalizer, stopwords), max_skip)
            for r in references]
    return _score(cand, refs)


def compression_ratio(output_tokens: Sequence[str], cluster: Cluster) -> float:
    """Output length over the average source sentence length."""
    if not cluster.sentences:
        raise ValueError("cluster has no sentences")
    return len(output_tokens) / cluster.avg_sentence_len()


def score_candidate(candidate: Sequence[str], cluster: Cluster,
                    target: str = "default",
                    normalizer: Normalizer | None = None,
                    stopwords: StopwordList | None = None) -> ClusterRow:
    """All metrics of one candidate against a cluster's references."""
    if not cluster.references:
        raise ValueError(f"cluster {cluster.id} has no references")
    refs = [list(r.lowers()) for r in cluster.references]
    return ClusterRow(
        cluster_id=cluster.id,
        target=target,
        rouge_1=rouge_n(candidate, refs, 1, normalizer, stopwords),
        rouge_2=rouge_n(candidate, refs, 2, normalizer, stopwords),
        rouge_su4=rouge_su4(candidate, refs, normalizer, stopwords),
        cr=compression_ratio(candidate, cluster),
    )
