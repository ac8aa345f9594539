"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field

from .corpus import Cluster, Sentence, Token


class TokenModel(BaseModel):
    w: str
    pos: str


class ClusterModel(BaseModel):
    id: str = "cluster"
    lang: str = "und"
    sentences: list[list[TokenModel]] = Field(min_length=1)
    references: list[list[TokenModel]] = []

    def to_cluster(self) -> Cluster:
        return Cluster(
            id=self.id,
            language=self.lang,
            sentences=tuple(
                Sentence(tuple(Token(t.w, t.pos) for t in s))
                for s in self.sentences),
            references=tuple(
                Sentence(tuple(Token(t.w, t.pos) for t in s))
                for s in self.references),
        )


class StatsResponse(BaseModel):
    token_count: int
    vocab_size: int
    avg_sentence_len: float
    ttr: float
    avg_cosine: float


class GraphRequest(BaseModel):
    cluster: ClusterModel
    stopwords: list[str] = []
    keyword_method: str | None = None
    keyword_count: int = 10
    include_dot: bool = False


class GraphResponse(BaseModel):
    graph: dict
    dot: str | None = None


class KeywordsRequest(BaseModel):
    cluster: ClusterModel
    stopwords: list[str] = []
    method: str = "lda"
    count: int = 10
    seed: int = 0


class KeywordScore(BaseModel):
    w: str
    score: float


class KeywordsResponse(BaseModel):
    method: str
    words: list[KeywordScore]
    reference_coverage: float | None = None


class SolutionModel(BaseModel):
    tokens: list[str]
    pos: list[str]
    objective: float
    labels_used: list[int]
    word_count: int
    normalized_score_log: float
    text: str


class CompressRequest(BaseModel):
    cluster: ClusterModel
    stopwords: list[str] = []
    method: str = "lda"
    keyword_count: int = 10
    bonus: str = "geometric_mean"
    fixed_bonus: float = 0.0
    cr_target: float | None = None
    p_min: int = 8
    nbest: int = 50
    require_verb: bool = True
    verb_tags: list[str] = []
    n_candidates: int = Field(default=1, ge=1,
                              description="How many ranked candidates to return")


class CompressResponse(BaseModel):
    cluster: str
    target: str
    best: SolutionModel | None
    candidates: list[SolutionModel] = []
    keyword_bonus: float | None = None
    keywords: list[str] = []


class BaselineRequest(BaseModel):
    cluster: ClusterModel
    stopwords: list[str] = []
    nbest: int = 50
    min_words: int = 8
    verb_tags: list[str] = []


class BaselineResponse(BaseModel):
    cluster: str
    best: SolutionModel | None


class ExportLpRequest(BaseModel):
    cluster: ClusterModel
    stopwords: list[str] = []
    method: str = "lda"
    keyword_count: int = 10
    bonus: str = "geometric_mean"
    fixed_bonus: float = 0.0
    cr_target: float | None = None
    p_min: int = 8


class ExportLpResponse(BaseModel):
    lp: str


class MetricModel(BaseModel):
    recall: float
    precision: float
    f1: float


class EvaluateRequest(BaseModel):
    candidate: list[str]
    references: list[list[str]] = Field(min_length=1)
    stopwords: list[str] = []
    remove_stopwords: bool = True


class EvaluateResponse(BaseModel):
    rouge_1: MetricModel
    rouge_2: MetricModel
    rouge_su4: MetricModel
