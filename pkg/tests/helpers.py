"""Shared test utilities: synthetic graphs and brute-force path oracles.

The oracles work directly on graph structure and never call the solver,
so solver results can be checked against an independent computation.
"""

from __future__ import annotations

import random

from mscompress.wordgraph import Arc, Vertex, WordGraph


def make_graph(n_words: int, arcs: list[tuple[int, int, float]],
               labels: dict[int, int] | None = None,
               pos: dict[int, str] | None = None) -> WordGraph:
    """Synthetic graph: vertex 0 is begin, 1 is end, 2..n_words+1 are words.

    Arc tuples are (tail, head, weight); words are named w002, w003, ... so
    lexicographic token order equals vertex-id order.
    """
    labels = labels or {}
    pos = pos or {}
    vertices = [
        Vertex(id=0, lower="-begin-", pos="-begin-", is_begin=True, freq=1),
        Vertex(id=1, lower="-end-", pos="-end-", is_end=True, freq=1),
    ]
    for i in range(2, n_words + 2):
        vertices.append(Vertex(id=i, lower=f"w{i:03d}", pos=pos.get(i, "T"),
                               freq=1, label=labels.get(i, 0)))
    arc_objs = [Arc(tail=t, head=h, weight=w, support=[0]) for t, h, w in arcs]
    return WordGraph(vertices=vertices, arcs=arc_objs, begin_id=0, end_id=1,
                     n_sentences=1)


def chain_graph(weights: list[float], **kwargs) -> WordGraph:
    """begin -> w2 -> w3 -> ... -> end with the given arc weights."""
    n = len(weights) - 1
    arcs = [(0, 2, weights[0])]
    for i in range(n - 1):
        arcs.append((2 + i, 3 + i, weights[i + 1]))
    arcs.append((n + 1, 1, weights[-1]))
    return make_graph(n, arcs, **kwargs)


def all_simple_paths(graph: WordGraph, max_paths: int | None = None
                     ) -> list[tuple[int, ...]]:
    """Every simple begin-to-end path by exhaustive DFS."""
    paths: list[tuple[int, ...]] = []
    stack = [graph.begin_id]
    on_path = {graph.begin_id}

    def dfs(v: int) -> bool:
        if v == graph.end_id:
            paths.append(tuple(stack))
            return max_paths is None or len(paths) <= max_paths
        for nxt in sorted(graph.out_adjacency[v]):
            if nxt in on_path:
                continue
            stack.append(nxt)
            on_path.add(nxt)
            ok = dfs(nxt)
            on_path.discard(nxt)
            stack.pop()
            if not ok:
                return False
        return True

    dfs(graph.begin_id)
    return paths


def path_weight(graph: WordGraph, path: tuple[int, ...]) -> float:
    total = 0.0
    for tail, head in zip(path, path[1:]):
        total += graph.arc(tail, head).weight
    return total


def path_objective(graph: WordGraph, path: tuple[int, ...],
                   bonus: float) -> float:
    labels = {graph.vertex(v).label for v in path[1:-1]} - {0}
    return path_weight(graph, path) - bonus * len(labels)


def path_key(graph: WordGraph, path: tuple[int, ...], bonus: float) -> tuple:
    """Same total order the solver uses: objective, words, tokens, ids."""
    words = [graph.vertex(v) for v in path[1:-1]]
    return (path_objective(graph, path, bonus), len(words),
            tuple(v.lower for v in words), path)


def brute_force_solutions(graph: WordGraph, min_words: int,
                          max_words: int | None, bonus: float,
                          require_verb: bool = False,
                          verb_prefix: str = "V") -> list[tuple[int, ...]]:
    """All feasible paths, best first, by exhaustive enumeration."""
    feasible = []
    for path in all_simple_paths(graph):
        words = [graph.vertex(v) for v in path[1:-1]]
        if len(words) < min_words:
            continue
        if max_words is not None and len(words) > max_words:
            continue
        if require_verb and not any(
                v.pos.upper().startswith(verb_prefix) for v in words):
            continue
        feasible.append(path)
    return sorted(feasible, key=lambda p: path_key(graph, p, bonus))


def random_word_graph(rng: random.Random, max_word_vertices: int = 10,
                      arc_prob: float = 0.3, max_label: int = 3,
                      max_simple_paths: int | None = 20000) -> WordGraph:
    """Random sparse digraph in word-graph form (no arcs into begin, none
    out of end, no self-loops), weights in (0, 2], random labels."""
    while True:
        n = rng.randint(2, max_word_vertices)
        word_ids = list(range(2, n + 2))
        arcs: list[tuple[int, int, float]] = []
        for tail in [0] + word_ids:
            for head in word_ids + [1]:
                if tail == head or (tail == 0 and head == 1):
                    continue
                if rng.random() < arc_prob:
                    arcs.append((tail, head, rng.uniform(1e-6, 2.0)))
        if not arcs:
            continue
        labels = {i: rng.choice([0, 0, 0] + list(range(1, max_label + 1)))
                  for i in word_ids}
        graph = make_graph(n, arcs, labels=labels)
        if max_simple_paths is not None:
            found = all_simple_paths(graph, max_paths=max_simple_paths)
            if len(found) > max_simple_paths:
                continue
        return graph


def random_dag(rng: random.Random, max_vertices: int = 8,
               arc_prob: float = 0.45) -> WordGraph:
    """Random DAG: arcs only run from lower to higher vertex rank."""
    while True:
        n = rng.randint(2, max_vertices)
        order = [0] + list(range(2, n + 2)) + [1]
        arcs = []
        for i, tail in enumerate(order):
            for head in order[i + 1:]:
                if tail == 0 and head == 1:
                    continue
                if rng.random() < arc_prob:
                    arcs.append((tail, head, rng.uniform(0.01, 2.0)))
        if arcs:
            return make_graph(n, arcs)
