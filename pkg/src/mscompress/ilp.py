"""Exact keyword-aware path optimization over labeled word graphs.

The model minimizes total arc weight minus a per-distinct-label bonus over
all simple begin-to-end paths whose word count lies within given bounds.
Length bounds make the problem NP-hard (with an auxiliary end-to-begin
closure arc it contains the traveling-salesman problem), so the solver is a
depth-first branch and bound with an admissible completion bound.  The same
model can be exported as CPLEX-LP text for external solvers.
"""

from __future__ import annotations

import heapq
import math
import sys
import time
from dataclasses import dataclass, field

from .wordgraph import WordGraph

OBJECTIVE_TOL = 1e-9
_PRUNE_EPS = 1e-12
_TIME_CHECK_INTERVAL = 512


class ModelError(ValueError):
    """The model is infeasible or ill-formed by construction."""


@dataclass
class SolverConfig:
    nbest: int = 50
    require_verb: bool = False
    verb_tags: frozenset[str] = frozenset()
    time_limit: float | None = None
    node_limit: int | None = None

    def is_verb(self, pos: str) -> bool:
        if self.verb_tags:
            return pos in self.verb_tags
        return pos.upper().startswith("V")


@dataclass(frozen=True)
class Solution:
    vertex_ids: tuple[int, ...]           # begin ... end
    arcs: tuple[tuple[int, int], ...]
    objective: float
    labels_used: frozenset[int]
    word_count: int
    tokens: tuple[str, ...]
    pos_tags: tuple[str, ...]

    def arc_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.arcs)

    def text(self) -> str:
        return " ".join(self.tokens)

    def sort_key(self) -> tuple:
        return (self.objective, self.word_count, self.tokens, self.vertex_ids)

    def to_json_obj(self) -> dict:
        return {
            "tokens": list(self.tokens),
            "pos": list(self.pos_tags),
            "objective": self.objective,
            "labels_used": sorted(self.labels_used),
            "word_count": self.word_count,
        }


class SolverTimeout(RuntimeError):
    """Raised when a time or node limit is hit; carries the best incumbent
    found so far and a valid lower bound on the optimum."""

    def __init__(self, incumbent: Solution | None, bound: float):
        self.incumbent = incumbent
        self.bound = bound
        desc = incumbent.objective if incumbent else None
        super().__init__(f"solver limit reached (incumbent={desc}, bound={bound})")


@dataclass
class CompressionModel:
    graph: WordGraph
    min_words: int
    max_words: int | None          # None means unbounded
    keyword_bonus: float
    label_vertices: dict[int, list[int]] = field(default_factory=dict)

    @property
    def big_m(self) -> int:
        return len(self.graph.vertices)

    def labels(self) -> list[int]:
        return sorted(self.label_vertices)


def build_model(graph: WordGraph, min_words: int, max_words: int | None,
                keyword_bonus: float) -> CompressionModel:
    """Assemble the optimization model for a weighted, labeled graph.

    Word counts exclude the begin/end sentinels: the bounds constrain the
    number of actual words in the compression.
    """
    if min_words < 1:
        raise ModelError("min_words must be >= 1")
    n_words = len(graph.word_vertices())
    if min_words > n_words:
        raise ModelError(
            f"min_words={min_words} exceeds the {n_words} word vertices; "
            "infeasible by construction")
    if max_words is not None and max_words < min_words:
        raise ModelError(f"max_words={max_words} < min_words={min_words}")
    if keyword_bonus < 0:
        raise ModelError("keyword_bonus must be >= 0")
    label_vertices: dict[int, list[int]] = {}
    for v in graph.vertices:
        if v.label > 0:
            label_vertices.setdefault(v.label, []).append(v.id)
    return CompressionModel(graph=graph, min_words=min_words,
                            max_words=max_words, keyword_bonus=keyword_bonus,
                            label_vertices=label_vertices)


# ---------------------------------------------------------------------------
# Branch and bound
# ---------------------------------------------------------------------------

def _dijkstra_to_end(graph: WordGraph) -> dict[int, float]:
    """Shortest weighted distance from every vertex to the end sentinel."""
    dist = {v.id: math.inf for v in graph.vertices}
    dist[graph.end_id] = 0.0
    heap = [(0.0, graph.end_id)]
    while heap:
        d, vid = heapq.heappop(heap)
        if d > dist[vid]:
            continue
        for pred in graph.in_adjacency[vid]:
            arc = graph.arc(pred, vid)
            nd = d + arc.weight
            if nd < dist[pred]:
                dist[pred] = nd
                heapq.heappush(heap, (nd, pred))
    return dist


def _hops_to_end(graph: WordGraph) -> dict[int, int]:
    hops = {v.id: -1 for v in graph.vertices}
    hops[graph.end_id] = 0
    queue = [graph.end_id]
    while queue:
        nxt = []
        for vid in queue:
            for pred in graph.in_adjacency[vid]:
                if hops[pred] < 0:
                    hops[pred] = hops[vid] + 1
                    nxt.append(pred)
        queue = nxt
    return hops


def completion_bound(model: CompressionModel, vertex: int,
                     collected_labels: frozenset[int],
                     dist_to_end: dict[int, float] | None = None) -> float:
    """Admissible lower bound on the cost of completing a partial path.

    Relaxes the visited-set and length constraints: remaining cost is at
    least the unconstrained shortest distance to the end, and the bonus
    still collectible is at most one per label not yet seen.
    """
    if dist_to_end is None:
        dist_to_end = _dijkstra_to_end(model.graph)
    remaining = sum(1 for k in model.label_vertices if k not in collected_labels)
    return dist_to_end[vertex] - model.keyword_bonus * remaining


class _Search:
    """One depth-first branch-and-bound run over outgoing-arc choices."""

    def __init__(self, model: CompressionModel, cfg: SolverConfig,
                 excluded: list[frozenset[tuple[int, int]]]):
        self.model = model
        self.graph = model.graph
        self.cfg = cfg
        self.excluded = set(excluded)
        self.dist_to_end = _dijkstra_to_end(self.graph)
        self.hops_to_end = _hops_to_end(self.graph)
        self.best: Solution | None = None
        self.nodes = 0
        self.deadline = (time.monotonic() + cfg.time_limit
                         if cfg.time_limit is not None else None)
        # entry bounds of nodes whose subtrees are still being explored;
        # their minimum is a valid global lower bound at cancellation
        self.stack_bounds: list[float] = []
        # children ordered by optimistic completion then id: finds good
        # incumbents early, and fixes the exploration order for determinism
        self.children: dict[int, list[int]] = {}
        for v in self.graph.vertices:
            succ = sorted(
                self.graph.out_adjacency[v.id],
                key=lambda t: (self.graph.arc(v.id, t).weight
                               + self.dist_to_end.get(t, math.inf), t))
            self.children[v.id] = succ

    def _current_bound(self) -> float:
        if self.stack_bounds:
            return min(self.stack_bounds)
        return self.best.objective if self.best else -math.inf

    def _check_limits(self) -> None:
        self.nodes += 1
        if self.cfg.node_limit is not None and self.nodes > self.cfg.node_limit:
            raise SolverTimeout(self.best, self._current_bound())
        if (self.deadline is not None and self.nodes % _TIME_CHECK_INTERVAL == 0
                and time.monotonic() > self.deadline):
            raise SolverTimeout(self.best, self._current_bound())

    def _make_solution(self, path: list[int], weight: float,
                       labels: frozenset[int]) -> Solution:
        arcs = tuple(zip(path, path[1:]))
        words = [self.graph.vertex(v) for v in path[1:-1]]
        return Solution(
            vertex_ids=tuple(path),
            arcs=arcs,
            objective=weight - self.model.keyword_bonus * len(labels),
            labels_used=labels,
            word_count=len(words),
            tokens=tuple(v.lower for v in words),
            pos_tags=tuple(v.pos for v in words),
        )

    def _accept(self, candidate: Solution) -> None:
        if candidate.arc_set() in self.excluded:
            return
        if self.cfg.require_verb and not any(
                self.cfg.is_verb(p) for p in candidate.pos_tags):
            return
        if self.best is None or candidate.sort_key() < self.best.sort_key():
            self.best = candidate

    def run(self) -> Solution | None:
        graph, model = self.graph, self.model
        needed = len(graph.vertices) + 200
        if sys.getrecursionlimit() < needed:
            sys.setrecursionlimit(needed)
        path = [graph.begin_id]
        on_path = {graph.begin_id}
        label_counts: dict[int, int] = {}

        def dfs(vertex: int, weight: float, words: int) -> None:
            self._check_limits()
            labels = frozenset(label_counts)
            bound = weight - model.keyword_bonus * len(labels) + \
                completion_bound(model, vertex, labels, self.dist_to_end)
            if self.best is not None and \
                    bound > self.best.objective + _PRUNE_EPS:
                return
            if vertex == graph.end_id:
                if words >= model.min_words:
                    self._accept(self._make_solution(path, weight, labels))
                return
            self.stack_bounds.append(bound)
            for nxt in self.children[vertex]:
                if nxt in on_path:
                    continue
                hops = self.hops_to_end[nxt]
                if hops < 0:
                    continue
                is_word = not graph.vertex(nxt).is_sentinel
                next_words = words + (1 if is_word else 0)
                # every completion from nxt adds at least hops-1 more words
                if model.max_words is not None and \
                        next_words + max(hops - 1, 0) > model.max_words:
                    continue
                arc = graph.arc(vertex, nxt)
                label = graph.vertex(nxt).label
                path.append(nxt)
                on_path.add(nxt)
                if label > 0:
                    label_counts[label] = label_counts.get(label, 0) + 1
                dfs(nxt, weight + arc.weight, next_words)
                if label > 0:
                    label_counts[label] -= 1
                    if label_counts[label] == 0:
                        del label_counts[label]
                on_path.discard(nxt)
                path.pop()
            self.stack_bounds.pop()

        dfs(graph.begin_id, 0.0, 0)
        return self.best


def _solve_once(model: CompressionModel, cfg: SolverConfig,
                excluded: list[frozenset[tuple[int, int]]]) -> Solution | None:
    return _Search(model, cfg, excluded).run()


def solve_exact(model: CompressionModel, cfg: SolverConfig | None = None
                ) -> Solution | None:
    """Provably optimal solution, or None when the model is infeasible.

    When the configuration demands a verb, verb-free optima are excluded one
    by one (the verb requirement is a filter on solutions, not a linear
    constraint) until a qualifying solution or infeasibility is reached.
    """
    cfg = cfg or SolverConfig()
    if not cfg.require_verb:
        return _solve_once(model, cfg, [])
    excluded: list[frozenset[tuple[int, int]]] = []
    relaxed = SolverConfig(nbest=cfg.nbest, require_verb=False,
                           verb_tags=cfg.verb_tags, time_limit=cfg.time_limit,
                           node_limit=cfg.node_limit)
    while True:
        candidate = _solve_once(model, relaxed, excluded)
        if candidate is None:
            return None
        if any(cfg.is_verb(p) for p in candidate.pos_tags):
            return candidate
        excluded.append(candidate.arc_set())


def enumerate_nbest(model: CompressionModel, cfg: SolverConfig | None = None
                    ) -> list[Solution]:
    """Best solutions in non-decreasing objective order, pairwise distinct.

    After each optimum the exact arc set is excluded (a no-good cut: for a
    simple path, forbidding the full arc set removes exactly that path) and
    the model is re-solved.  Solutions failing the verb filter are skipped
    without counting against the requested total.
    """
    cfg = cfg or SolverConfig()
    relaxed = SolverConfig(nbest=cfg.nbest, require_verb=False,
                           verb_tags=cfg.verb_tags, time_limit=cfg.time_limit,
                           node_limit=cfg.node_limit)
    kept: list[Solution] = []
    excluded: list[frozenset[tuple[int, int]]] = []
    while len(kept) < cfg.nbest:
        candidate = _solve_once(model, relaxed, excluded)
        if candidate is None:
            break
        excluded.append(candidate.arc_set())
        if cfg.require_verb and not any(
                cfg.is_verb(p) for p in candidate.pos_tags):
            continue
        kept.append(candidate)
    return kept


# ---------------------------------------------------------------------------
# Independent verification
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    ok: bool
    failures: list[str]

    @property
    def first_violation(self) -> str | None:
        return self.failures[0] if self.failures else None


def verify_solution(model: CompressionModel, solution: Solution
                    ) -> VerificationReport:
    """Re-check every constraint class from scratch, independent of the solver."""
    graph = model.graph
    failures: list[str] = []
    ids = solution.vertex_ids

    if len(ids) < 2 or ids[0] != graph.begin_id:
        failures.append("begin-vertex violation")
    if not failures and ids[-1] != graph.end_id:
        failures.append("end-vertex violation")
    if len(set(ids)) != len(ids):
        failures.append("simple-path violation")
    for tail, head in zip(ids, ids[1:]):
        if graph.arc(tail, head) is None:
            failures.append(f"missing-arc violation ({tail}->{head})")
            break
    if tuple(zip(ids, ids[1:])) != solution.arcs:
        failures.append("arc-list mismatch")

    words = [graph.vertex(v) for v in ids[1:-1]] if not failures else []
    if not failures:
        if any(v.is_sentinel for v in words):
            failures.append("interior-sentinel violation")
        if solution.word_count != len(words):
            failures.append("word-count mismatch")
        if len(words) < model.min_words:
            failures.append("min-length violation")
        if model.max_words is not None and len(words) > model.max_words:
            failures.append("max-length violation")
        labels = frozenset(v.label for v in words if v.label > 0)
        if labels != solution.labels_used:
            failures.append("label-set mismatch")
        weight = sum(graph.arc(t, h).weight for t, h in zip(ids, ids[1:]))
        expected = weight - model.keyword_bonus * len(labels)
        if abs(expected - solution.objective) > OBJECTIVE_TOL:
            failures.append("objective mismatch")
        if tuple(v.lower for v in words) != solution.tokens:
            failures.append("token mismatch")
    return VerificationReport(ok=not failures, failures=failures)


# ---------------------------------------------------------------------------
# CPLEX-LP export
# ---------------------------------------------------------------------------

def _fmt(value: float) -> str:
    return f"{value:.12g}"


def export_lp(model: CompressionModel) -> str:
    """Serialize the model as CPLEX-LP text with stable variable names.

    Variables: x_i_j per arc (plus the auxiliary end-to-begin closure arc),
    y_v per vertex, b_k per label, u_v order variables.  Output depends only
    on the model, so identical models export byte-identical text.
    """
    graph = model.graph
    big_m = model.big_m
    lines: list[str] = []

    obj_terms: list[str] = []
    for arc in sorted(graph.arcs, key=lambda a: (a.tail, a.head)):
        sign = "-" if arc.weight < 0 else "+"
        obj_terms.append(f"{sign} {_fmt(abs(arc.weight))} x_{arc.tail}_{arc.head}")
    if model.keyword_bonus > 0:
        for k in model.labels():
            obj_terms.append(f"- {_fmt(model.keyword_bonus)} b_{k}")
    objective = " ".join(obj_terms).lstrip("+ ") or "0 y_%d" % graph.begin_id
    lines.append("Minimize")
    lines.append(f" obj: {objective}")
    lines.append("Subject To")

    closure = (graph.end_id, graph.begin_id)
    out_arcs: dict[int, list[tuple[int, int]]] = {v.id: [] for v in graph.vertices}
    in_arcs: dict[int, list[tuple[int, int]]] = {v.id: [] for v in graph.vertices}
    all_arcs = [(a.tail, a.head) for a in sorted(graph.arcs,
                                                 key=lambda a: (a.tail, a.head))]
    all_arcs.append(closure)
    for tail, head in all_arcs:
        out_arcs[tail].append((tail, head))
        in_arcs[head].append((tail, head))

    for v in graph.vertices:
        terms = " + ".join(f"x_{t}_{h}" for t, h in out_arcs[v.id])
        lines.append(f" out_{v.id}: {terms} - y_{v.id} = 0")
    for v in graph.vertices:
        terms = " + ".join(f"x_{t}_{h}" for t, h in in_arcs[v.id])
        lines.append(f" in_{v.id}: {terms} - y_{v.id} = 0")

    word_terms = " + ".join(f"y_{v.id}" for v in graph.word_vertices())
    lines.append(f" minlen: {word_terms} >= {model.min_words}")
    if model.max_words is not None:
        lines.append(f" maxlen: {word_terms} <= {model.max_words}")

    for k in model.labels():
        terms = " + ".join(f"y_{vid}" for vid in sorted(model.label_vertices[k]))
        lines.append(f" lab_{k}: {terms} - b_{k} >= 0")

    lines.append(f" src: y_{graph.begin_id} = 1")
    lines.append(f" ord_begin: u_{graph.begin_id} = 1")
    for tail, head in all_arcs:
        if head == graph.begin_id:
            continue
        lines.append(f" mtz_{tail}_{head}: u_{tail} - u_{head} "
                     f"+ {big_m} x_{tail}_{head} <= {big_m - 1}")

    lines.append("Bounds")
    for v in graph.vertices:
        lines.append(f" 1 <= u_{v.id} <= {big_m}")
    lines.append("Binary")
    for tail, head in all_arcs:
        lines.append(f" x_{tail}_{head}")
    for v in graph.vertices:
        lines.append(f" y_{v.id}")
    for k in model.labels():
        lines.append(f" b_{k}")
    lines.append("General")
    for v in graph.vertices:
        lines.append(f" u_{v.id}")
    lines.append("End")
    return "\n".join(lines) + "\n"
