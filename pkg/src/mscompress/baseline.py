"""Shortest-path compression baseline.

Enumerates the k lightest loopless begin-to-end paths by deviation (Yen's
scheme), filters by length and verb presence, and reranks survivors by
weight per word, keeping the path with the lowest normalized score.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .ilp import Solution, SolverConfig
from .wordgraph import WordGraph

BASELINE_MIN_WORDS = 8  # survivors must be strictly longer than this


@dataclass(frozen=True)
class PathCandidate:
    vertex_ids: tuple[int, ...]
    total_weight: float
    word_count: int
    has_verb: bool

    @property
    def normalized_score(self) -> float:
        return self.total_weight / self.word_count


def _dijkstra(graph: WordGraph, source: int, target: int,
              banned_vertices: set[int],
              banned_arcs: set[tuple[int, int]]) -> tuple[float, tuple[int, ...]] | None:
    """Lightest path avoiding the given vertices and arcs.

    Heap entries carry the whole path so cost ties resolve to the
    lexicographically smallest vertex-id sequence.
    """
    best: dict[int, tuple[float, tuple[int, ...]]] = {}
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (source,))]
    while heap:
        cost, path = heapq.heappop(heap)
        node = path[-1]
        if node == target:
            return cost, path
        seen = best.get(node)
        if seen is not None and seen <= (cost, path):
            continue
        best[node] = (cost, path)
        for nxt in graph.out_adjacency[node]:
            if nxt in banned_vertices or (node, nxt) in banned_arcs:
                continue
            if nxt in path:
                continue
            arc = graph.arc(node, nxt)
            heapq.heappush(heap, (cost + arc.weight, path + (nxt,)))
    return None


def k_shortest_paths(graph: WordGraph, k: int,
                     cfg: SolverConfig | None = None) -> list[PathCandidate]:
    """The k lightest loopless begin-to-end paths, ascending by weight.

    Ties break on the vertex-id sequence, which makes the j-best list a
    prefix of the (j+1)-best list.  Returns fewer than k when the graph has
    fewer distinct paths, and an empty list when begin and end are
    disconnected.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    cfg = cfg or SolverConfig()
    source, target = graph.begin_id, graph.end_id

    first = _dijkstra(graph, source, target, set(), set())
    if first is None:
        return []
    accepted: list[tuple[float, tuple[int, ...]]] = [first]
    candidates: list[tuple[float, tuple[int, ...]]] = []
    known: set[tuple[int, ...]] = {first[1]}

    while len(accepted) < k:
        _, last_path = accepted[-1]
        for i in range(len(last_path) - 1):
            spur = last_path[i]
            root = last_path[: i + 1]
            banned_arcs = {
                (path[i], path[i + 1])
                for _, path in accepted
                if len(path) > i + 1 and path[: i + 1] == root
            }
            banned_vertices = set(root[:-1])
            root_cost = sum(graph.arc(a, b).weight
                            for a, b in zip(root, root[1:]))
            spur_result = _dijkstra(graph, spur, target,
                                    banned_vertices, banned_arcs)
            if spur_result is None:
                continue
            spur_cost, spur_path = spur_result
            total = root[:-1] + spur_path
            if total in known:
                continue
            known.add(total)
            heapq.heappush(candidates, (root_cost + spur_cost, total))
        if not candidates:
            break
        accepted.append(heapq.heappop(candidates))

    return [_to_candidate(graph, cost, path, cfg)
            for cost, path in accepted]


def _to_candidate(graph: WordGraph, cost: float, path: tuple[int, ...],
                  cfg: SolverConfig) -> PathCandidate:
    words = [graph.vertex(v) for v in path[1:-1]]
    return PathCandidate(
        vertex_ids=path,
        total_weight=cost,
        word_count=len(words),
        has_verb=any(cfg.is_verb(v.pos) for v in words),
    )


def candidate_to_solution(graph: WordGraph, candidate: PathCandidate) -> Solution:
    words = [graph.vertex(v) for v in candidate.vertex_ids[1:-1]]
    ids = candidate.vertex_ids
    return Solution(
        vertex_ids=ids,
        arcs=tuple(zip(ids, ids[1:])),
        objective=candidate.total_weight,
        labels_used=frozenset(),
        word_count=candidate.word_count,
        tokens=tuple(v.lower for v in words),
        pos_tags=tuple(v.pos for v in words),
    )


def baseline_compress(graph: WordGraph, cfg: SolverConfig | None = None,
                      min_words: int = BASELINE_MIN_WORDS) -> Solution | None:
    """Classic shortest-path compression over a weighted word graph.

    Takes the cfg.nbest lightest paths, keeps those strictly longer than
    min_words with at least one verb-tagged vertex, and returns the one with
    the lowest weight-per-word score.  None when no path survives.
    """
    cfg = cfg or SolverConfig()
    survivors = [
        c for c in k_shortest_paths(graph, cfg.nbest, cfg)
        if c.word_count > min_words and c.has_verb
    ]
    if not survivors:
        return None
    best = min(survivors,
               key=lambda c: (c.normalized_score, c.word_count, c.vertex_ids))
    return candidate_to_solution(graph, best)
