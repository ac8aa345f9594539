"""HTTP service exposing the compression engine to multiple clients.

All endpoints are stateless: the cluster and every option travel with the
request, so instances can be scaled or restarted freely.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import schemas, wordgraph
from .baseline import baseline_compress
from .corpus import StopwordList, cluster_stats
from .evaluation import rouge_n, rouge_su4
from .ilp import ModelError, Solution, SolverConfig, build_model, enumerate_nbest
from .keywords import assign_labels, extract_keywords, keyword_coverage
from .pipeline import max_words_for_target, target_tag
from .rerank import (BonusKind, BonusPolicy, keyword_bonus,
                     normalized_score_key, rank_solutions)
from .wordgraph import build_graph

app = FastAPI(
    title="mscompress",
    description="Multi-sentence compression over word graphs: exact "
                "keyword-aware optimization, shortest-path baseline, and "
                "overlap metrics.",
    version="0.1.0",
)


def _solution_model(solution: Solution) -> schemas.SolutionModel:
    return schemas.SolutionModel(
        tokens=list(solution.tokens),
        pos=list(solution.pos_tags),
        objective=solution.objective,
        labels_used=sorted(solution.labels_used),
        word_count=solution.word_count,
        normalized_score_log=normalized_score_key(solution),
        text=solution.text(),
    )


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.post("/stats", response_model=schemas.StatsResponse)
def stats(req: schemas.ClusterModel) -> schemas.StatsResponse:
    st = cluster_stats(req.to_cluster())
    return schemas.StatsResponse(**vars(st))


@app.post("/graph", response_model=schemas.GraphResponse)
def graph(req: schemas.GraphRequest) -> schemas.GraphResponse:
    cluster = req.cluster.to_cluster()
    sw = StopwordList(set(req.stopwords))
    g = build_graph(cluster, sw)
    if req.keyword_method:
        ks = extract_keywords(cluster, sw, method=req.keyword_method,
                              n=req.keyword_count)
        assign_labels(g, ks)
    return schemas.GraphResponse(
        graph=wordgraph.to_json_obj(g),
        dot=wordgraph.to_dot(g) if req.include_dot else None,
    )


@app.post("/keywords", response_model=schemas.KeywordsResponse)
def keywords(req: schemas.KeywordsRequest) -> schemas.KeywordsResponse:
    cluster = req.cluster.to_cluster()
    sw = StopwordList(set(req.stopwords))
    try:
        ks = extract_keywords(cluster, sw, method=req.method, n=req.count,
                              seed=req.seed)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    coverage = (keyword_coverage(ks, cluster.references)
                if cluster.references else None)
    return schemas.KeywordsResponse(
        method=ks.method,
        words=[schemas.KeywordScore(w=w, score=s) for w, s in ks.words],
        reference_coverage=coverage,
    )


def _labeled_graph(cluster, req):
    sw = StopwordList(set(req.stopwords))
    g = build_graph(cluster, sw)
    ks = extract_keywords(cluster, sw, method=req.method, n=req.keyword_count)
    assign_labels(g, ks)
    policy = BonusPolicy(kind=BonusKind(req.bonus), fixed_value=req.fixed_bonus)
    return g, ks, keyword_bonus(g, policy)


@app.post("/compress", response_model=schemas.CompressResponse)
def compress(req: schemas.CompressRequest) -> schemas.CompressResponse:
    cluster = req.cluster.to_cluster()
    try:
        g, ks, bonus = _labeled_graph(cluster, req)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    try:
        model = build_model(g, req.p_min,
                            max_words_for_target(cluster, req.cr_target), bonus)
    except ModelError:
        # too few words for the requested bounds: a valid "no compression"
        return schemas.CompressResponse(cluster=cluster.id,
                                        target=target_tag(req.cr_target),
                                        best=None, keywords=ks.lowers())
    cfg = SolverConfig(nbest=req.nbest, require_verb=req.require_verb,
                       verb_tags=frozenset(req.verb_tags))
    candidates = enumerate_nbest(model, cfg)
    ranked = rank_solutions(candidates)
    return schemas.CompressResponse(
        cluster=cluster.id,
        target=target_tag(req.cr_target),
        best=_solution_model(ranked[0]) if ranked else None,
        candidates=[_solution_model(s) for s in ranked[: req.n_candidates]],
        keyword_bonus=bonus,
        keywords=ks.lowers(),
    )


@app.post("/baseline", response_model=schemas.BaselineResponse)
def baseline(req: schemas.BaselineRequest) -> schemas.BaselineResponse:
    cluster = req.cluster.to_cluster()
    g = build_graph(cluster, StopwordList(set(req.stopwords)))
    cfg = SolverConfig(nbest=req.nbest, verb_tags=frozenset(req.verb_tags))
    best = baseline_compress(g, cfg, min_words=req.min_words)
    return schemas.BaselineResponse(
        cluster=cluster.id,
        best=_solution_model(best) if best else None,
    )


@app.post("/export-lp", response_model=schemas.ExportLpResponse)
def export_lp_endpoint(req: schemas.ExportLpRequest) -> schemas.ExportLpResponse:
    from .ilp import export_lp

    cluster = req.cluster.to_cluster()
    try:
        g, _ks, bonus = _labeled_graph(cluster, req)
        model = build_model(g, req.p_min,
                            max_words_for_target(cluster, req.cr_target), bonus)
    except (ModelError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return schemas.ExportLpResponse(lp=export_lp(model))


@app.post("/evaluate", response_model=schemas.EvaluateResponse)
def evaluate(req: schemas.EvaluateRequest) -> schemas.EvaluateResponse:
    sw = (StopwordList(set(req.stopwords))
          if req.stopwords and req.remove_stopwords else None)
    kwargs = {"stopwords": sw}
    return schemas.EvaluateResponse(
        rouge_1=schemas.MetricModel(**vars(
            rouge_n(req.candidate, req.references, 1, **kwargs))),
        rouge_2=schemas.MetricModel(**vars(
            rouge_n(req.candidate, req.references, 2, **kwargs))),
        rouge_su4=schemas.MetricModel(**vars(
            rouge_su4(req.candidate, req.references, **kwargs))),
    )
