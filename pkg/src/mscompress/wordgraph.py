"""Directed word graphs built from clusters of tagged sentences.

Vertices are lowercased word/POS pairs merged across sentences; every source
sentence is a begin-to-end path.  Arc weights measure cohesion: frequent,
close word pairs get low weights, so low-weight paths follow well-attested
phrasings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Cluster, StopwordList

BEGIN = "-begin-"
END = "-end-"

_DOT_PALETTE = [
    "#ffffff", "#ffd9a0", "#a0d9ff", "#b6f0b6", "#f0b6d8", "#d8c0f0",
    "#f0e68c", "#c0f0e8", "#f0c0a8", "#c8d0f0", "#e0f0a0",
]


@dataclass
class Vertex:
    id: int
    lower: str
    pos: str
    is_stopword: bool = False
    is_begin: bool = False
    is_end: bool = False
    label: int = 0
    # (sentence index, token offset) for every word merged into this vertex;
    # sentinels keep this empty and report freq = number of sentences.
    mapped_words: list[tuple[int, int]] = field(default_factory=list)
    freq: int = 0

    @property
    def is_sentinel(self) -> bool:
        return self.is_begin or self.is_end

    def key(self) -> tuple[str, str]:
        return (self.lower, self.pos)


@dataclass
class Arc:
    tail: int
    head: int
    weight: float = 0.0
    support: list[int] = field(default_factory=list)


@dataclass
class WordGraph:
    vertices: list[Vertex]
    arcs: list[Arc]
    begin_id: int
    end_id: int
    n_sentences: int

    def __post_init__(self) -> None:
        self._arc_index = {(a.tail, a.head): a for a in self.arcs}
        self._rebuild_adjacency()

    def _rebuild_adjacency(self) -> None:
        self.out_adjacency: dict[int, list[int]] = {v.id: [] for v in self.vertices}
        self.in_adjacency: dict[int, list[int]] = {v.id: [] for v in self.vertices}
        for arc in self.arcs:
            self.out_adjacency[arc.tail].append(arc.head)
            self.in_adjacency[arc.head].append(arc.tail)

    def vertex(self, vid: int) -> Vertex:
        return self.vertices[vid]

    def arc(self, tail: int, head: int) -> Arc | None:
        return self._arc_index.get((tail, head))

    def word_vertices(self) -> list[Vertex]:
        return [v for v in self.vertices if not v.is_sentinel]

    def sentence_path(self, sentence_index: int) -> list[int]:
        """Vertex ids visited by one source sentence, begin and end included."""
        positions: dict[int, int] = {}
        for v in self.vertices:
            for s, off in v.mapped_words:
                if s == sentence_index:
                    positions[off] = v.id
        mid = [positions[off] for off in sorted(positions)]
        return [self.begin_id] + mid + [self.end_id]


def is_punctuation(lower: str) -> bool:
    return bool(lower) and not any(ch.isalnum() for ch in lower)


class _Builder:
    """Incremental construction state; one instance per cluster."""

    def __init__(self, cluster: Cluster, stopwords: StopwordList):
        self.cluster = cluster
        self.stopwords = stopwords
        self.vertices: list[Vertex] = []
        self.candidates: dict[tuple[str, str], list[int]] = {}
        self.begin_id = self._new_vertex(BEGIN, BEGIN, is_begin=True).id
        self.end_id = self._new_vertex(END, END, is_end=True).id
        # sentence index -> token offset -> vertex id
        self.mapping: list[dict[int, int]] = []

    def _new_vertex(self, lower: str, pos: str, *, is_begin: bool = False,
                    is_end: bool = False, is_stopword: bool = False) -> Vertex:
        v = Vertex(id=len(self.vertices), lower=lower, pos=pos,
                   is_begin=is_begin, is_end=is_end, is_stopword=is_stopword)
        self.vertices.append(v)
        if not v.is_sentinel:
            self.candidates.setdefault(v.key(), []).append(v.id)
        return v

    def _treat_as_stopword(self, lower: str) -> bool:
        return lower in self.stopwords or is_punctuation(lower)

    def _attach(self, vid: int, s: int, off: int) -> None:
        v = self.vertices[vid]
        v.mapped_words.append((s, off))
        v.freq += 1
        self.mapping[s][off] = vid

    def _neighbor_key(self, s: int, off: int) -> tuple[str, str]:
        """Word/POS key at a sentence offset; out-of-range hits a sentinel."""
        sentence = self.cluster.sentences[s]
        if off < 0:
            return (BEGIN, BEGIN)
        if off >= len(sentence):
            return (END, END)
        t = sentence.tokens[off]
        return (t.lower, t.pos)

    def _context_overlap(self, vid: int, prev_key: tuple[str, str],
                         next_key: tuple[str, str]) -> int:
        """Count of the candidate's merged occurrences whose immediate
        neighbors match the current token's neighbors."""
        overlap = 0
        for s, off in self.vertices[vid].mapped_words:
            if self._neighbor_key(s, off - 1) == prev_key:
                overlap += 1
            if self._neighbor_key(s, off + 1) == next_key:
                overlap += 1
        return overlap

    def resolve_candidate(self, s: int, off: int) -> int | None:
        """Pick the vertex an ambiguous token merges into, or None for a new one.

        Candidates already consumed by this sentence are excluded (at most one
        occurrence of a word/POS per sentence maps to a vertex).  The rest are
        ranked by immediate-context overlap, then by frequency, then by lowest
        vertex id.
        """
        token = self.cluster.sentences[s].tokens[off]
        used = set(self.mapping[s].values())
        free = [vid for vid in self.candidates.get((token.lower, token.pos), [])
                if vid not in used]
        if not free:
            return None
        prev_key = self._neighbor_key(s, off - 1)
        next_key = self._neighbor_key(s, off + 1)
        best = min(
            free,
            key=lambda vid: (-self._context_overlap(vid, prev_key, next_key),
                             -self.vertices[vid].freq, vid),
        )
        return best

    def add_sentence(self, s: int) -> None:
        """Insert one sentence.  Tokens are mapped in three passes: first
        non-stopwords with a forced choice (no candidate, or a single
        candidate and a single in-sentence occurrence), then the remaining
        ambiguous non-stopwords, then stopwords and punctuation."""
        sentence = self.cluster.sentences[s]
        self.mapping.append({})
        occurrences: dict[tuple[str, str], int] = {}
        for t in sentence.tokens:
            key = (t.lower, t.pos)
            occurrences[key] = occurrences.get(key, 0) + 1

        stop_flags = [self._treat_as_stopword(t.lower) for t in sentence.tokens]
        deferred: list[int] = []

        for off, token in enumerate(sentence.tokens):
            if stop_flags[off]:
                continue
            key = (token.lower, token.pos)
            existing = self.candidates.get(key, [])
            if not existing and occurrences[key] == 1:
                self._attach(self._new_vertex(token.lower, token.pos).id, s, off)
            elif len(existing) == 1 and occurrences[key] == 1:
                self._attach(existing[0], s, off)
            else:
                deferred.append(off)

        for off in deferred:
            token = sentence.tokens[off]
            chosen = self.resolve_candidate(s, off)
            if chosen is None:
                chosen = self._new_vertex(token.lower, token.pos).id
            self._attach(chosen, s, off)

        for off, token in enumerate(sentence.tokens):
            if not stop_flags[off]:
                continue
            chosen = self.resolve_candidate(s, off)
            if chosen is None:
                chosen = self._new_vertex(token.lower, token.pos,
                                          is_stopword=True).id
            self._attach(chosen, s, off)

    def collect_arcs(self) -> list[Arc]:
        arcs: dict[tuple[int, int], Arc] = {}
        for s in range(len(self.cluster.sentences)):
            path = [self.begin_id]
            path += [self.mapping[s][off]
                     for off in range(len(self.cluster.sentences[s]))]
            path.append(self.end_id)
            for tail, head in zip(path, path[1:]):
                arc = arcs.get((tail, head))
                if arc is None:
                    arc = Arc(tail=tail, head=head)
                    arcs[(tail, head)] = arc
                if s not in arc.support:
                    arc.support.append(s)
        return [arcs[key] for key in sorted(arcs)]


def build_graph(cluster: Cluster, stopwords: StopwordList | None = None) -> WordGraph:
    """Build and weight the word graph of a cluster.

    Sentences are inserted one by one in order; construction is fully
    deterministic, so rebuilding from the same cluster is bit-identical.
    """
    stopwords = stopwords or StopwordList()
    builder = _Builder(cluster, stopwords)
    for s in range(len(cluster.sentences)):
        builder.add_sentence(s)
    n = len(cluster.sentences)
    graph = WordGraph(vertices=builder.vertices, arcs=builder.collect_arcs(),
                      begin_id=builder.begin_id, end_id=builder.end_id,
                      n_sentences=n)
    graph.vertex(graph.begin_id).freq = n
    graph.vertex(graph.end_id).freq = n
    return compute_weights(graph, cluster)


def _positions_in(graph: WordGraph, vid: int, s: int, sentence_len: int) -> list[int]:
    v = graph.vertex(vid)
    if v.is_begin:
        return [-1]
    if v.is_end:
        return [sentence_len]
    return [off for sidx, off in v.mapped_words if sidx == s]


def compute_weights(graph: WordGraph, cluster: Cluster) -> WordGraph:
    """Assign cohesion-based weights to every arc.

    For arc (i, j): over each sentence containing i strictly before j, take
    the closest forward offset distance d and accumulate 1/d; the arc weight
    is ((freq(i) + freq(j)) / sum of inverse distances) / (freq(i) * freq(j)).
    Sentinels sit just outside the token range (begin at -1, end at length).
    """
    for arc in graph.arcs:
        freq_i = graph.vertex(arc.tail).freq
        freq_j = graph.vertex(arc.head).freq
        inv_sum = 0.0
        for s, sentence in enumerate(cluster.sentences):
            pos_i = _positions_in(graph, arc.tail, s, len(sentence))
            pos_j = _positions_in(graph, arc.head, s, len(sentence))
            if not pos_i or not pos_j:
                continue
            forward = [pj - pi for pi in pos_i for pj in pos_j if pj > pi]
            if forward:
                inv_sum += 1.0 / min(forward)
        if inv_sum <= 0.0:
            raise AssertionError(
                f"arc {arc.tail}->{arc.head} has no supporting sentence in "
                "forward order; graph construction is broken")
        cohesion = (freq_i + freq_j) / inv_sum
        arc.weight = cohesion / (freq_i * freq_j)
    return graph


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: WordGraph) -> str:
    """Deterministic DOT rendering; keyword labels show up as fill colors."""
    lines = ["digraph wordgraph {", "  rankdir=LR;"]
    for v in graph.vertices:
        name = v.lower if v.is_sentinel else f"{v.lower}/{v.pos}"
        attrs = [f"label={_dot_quote(name)}"]
        if v.is_sentinel:
            attrs.append("shape=box")
        if v.label > 0:
            color = _DOT_PALETTE[v.label % len(_DOT_PALETTE)]
            attrs.append(f'style=filled fillcolor="{color}"')
        lines.append(f"  n{v.id} [{' '.join(attrs)}];")
    for arc in sorted(graph.arcs, key=lambda a: (a.tail, a.head)):
        lines.append(f'  n{arc.tail} -> n{arc.head} [label="{arc.weight:.4g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json_obj(graph: WordGraph) -> dict:
    return {
        "begin": graph.begin_id,
        "end": graph.end_id,
        "n_sentences": graph.n_sentences,
        "vertices": [
            {
                "id": v.id,
                "word": v.lower,
                "pos": v.pos,
                "stopword": v.is_stopword,
                "freq": v.freq,
                "label": v.label,
                "sentinel": v.is_sentinel,
                "mapped": [[s, off] for s, off in v.mapped_words],
            }
            for v in graph.vertices
        ],
        "arcs": [
            {"from": a.tail, "to": a.head, "weight": a.weight,
             "support": list(a.support)}
            for a in sorted(graph.arcs, key=lambda a: (a.tail, a.head))
        ],
    }
